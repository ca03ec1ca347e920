//! Symmetrizing trace forms on `H(ℓ,n)`, all homogeneous of degree
//! `−d_Λ` with `d_Λ = 2ℓn − 2n²`, built three independent ways:
//!
//! * the *cellular* form: the unique degree-`−d_Λ` functional that kills
//!   every generator commutator, normalized to take value 1 on the
//!   top-label antidiagonal cells `ψ^λmax_{w,w₀w}`. Uniqueness holds
//!   because only the top label carries a degree-`d_Λ` central element,
//!   so homogeneous trace functionals of this degree form a line. Note
//!   that the normalization does NOT extend by zero on the rest of the
//!   cellular basis: cyclicity forces nonzero values on some lower-label
//!   cells of degree `d_Λ` (see `naive_top_label_table_is_not_cyclic`),
//!   so the form is solved for rather than postulated.
//! * the *matrix-algebra* form: transport along `H ≅ M_{n!}(Z)` of the
//!   coefficient-of-`z_λmax` functional on the center;
//! * the *recursive* form: the composition `ε̂_1∘⋯∘ε̂_n` of one-step
//!   trace maps `H(ℓ,m) → H(ℓ,m−1)`, each defined through a unique
//!   decomposition over the tensor square of the next algebra down,
//!   taken over the subalgebra two ranks down.
//!
//! The tensor square is materialized as an explicit quotient of the
//! `K`-tensor square of `H(ℓ,m−1)` by the balancing relations
//! `a·ι(g) ⊗ b − a ⊗ ι(g)·b`, with `g` running over the generators of
//! `H(ℓ,m−2)`; sufficiency of generator-level relations is checked by
//! rank stability, not assumed.

use crate::affine::{AffineElement, Monomial};
use crate::cellular::{cell_element, label_max, CellIndex, CellLabel};
use crate::center::{algebra_generators, eta_inverse, CenterBasis, CenterElement, MatrixUnitFamily};
use crate::cyclotomic::{CycContext, CycElement};
use crate::linalg::{self, Matrix, Solver};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use num_traits::Zero;
use std::sync::Arc;

/// The common degree of the trace forms: `d_Λ = 2ℓn − 2n²`.
pub fn d_lam(ell: usize, n: usize) -> i64 {
    2 * (ell as i64) * (n as i64) - 2 * (n as i64) * (n as i64)
}

/// Degree of the central basis element for a label:
/// `2ℓn − n(n−1) − 2Σk_i`.
fn z_degree(ell: usize, n: usize, label: &CellLabel) -> i64 {
    2 * (ell as i64) * (n as i64) - (n as i64) * (n as i64 - 1) - 2 * (label.sum() as i64)
}

/// The trace on the center: the coefficient of the top-degree basis
/// element `z_λmax` (the last coordinate — labels ascend to the maximal
/// label).
pub fn tr_z(z: &CenterElement) -> Scalar {
    z.coords().last().cloned().unwrap_or_else(Scalar::zero)
}

/// The dual-ish partner of `z_λ`: the first basis element of
/// complementary degree `d_Λ − deg z_λ` whose pairing
/// `tr_Z(z_λ·ẑ)` is nonzero. Complementary degrees can repeat, so
/// candidates are scanned in the frozen label order.
pub fn zhat(center: &CenterBasis, label: &CellLabel) -> crate::Result<CenterElement> {
    let ctx = center.ctx();
    let (ell, n) = (ctx.ell(), ctx.n());
    let pos = center
        .labels()
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| crate::Error::InvalidElement(format!("unknown label {label:?}")))?;
    let target = d_lam(ell, n) - z_degree(ell, n, label);
    let mut saw_complement = false;
    for (nu, nu_label) in center.labels().iter().enumerate() {
        if z_degree(ell, n, nu_label) != target {
            continue;
        }
        saw_complement = true;
        let product = center.z(pos) * center.z(nu);
        let pairing = tr_z(&center.center_element(&product)?);
        if !pairing.is_zero() {
            let mut coords = vec![Scalar::zero(); center.dim()];
            coords[nu] = Scalar::from_integer(1.into());
            return Ok(center.from_coords(&coords));
        }
    }
    if saw_complement {
        Err(crate::Error::NonvanishingFailure(format!(
            "all complementary pairings vanish for {label:?}"
        )))
    } else {
        Err(crate::Error::NotFound(format!(
            "no label of complementary degree {target} for {label:?}"
        )))
    }
}

/// The cellular trace form: the unique homogeneous functional of degree
/// `−d_Λ` with `τ(ab) = τ(ba)`, normalized so that every top-label
/// antidiagonal cell `ψ^λmax_{w,w₀w}` maps to 1.
///
/// Constructed by linear algebra: the functional is supported on the
/// monomials of degree `d_Λ`, constrained to vanish on all commutators
/// with the algebra generators (which forces full cyclicity), and the
/// solution space is one-dimensional.
pub struct CellularTrace {
    ctx: Arc<CycContext>,
    /// `τ`'s coefficient on each monomial basis element (zero off the
    /// degree-`d_Λ` stratum).
    weights: Vec<Scalar>,
}

impl CellularTrace {
    pub fn new(ctx: &Arc<CycContext>) -> crate::Result<Self> {
        let (ell, n) = (ctx.ell(), ctx.n());
        let d = d_lam(ell, n);
        // Unknowns: τ's values on the degree-d_Λ monomials.
        let supp: Vec<usize> = (0..ctx.dim())
            .filter(|&i| ctx.basis()[i].degree() == d)
            .collect();
        if supp.is_empty() {
            return Err(crate::Error::SingularBasis(format!(
                "no monomials of degree {d} in H({ell},{n})"
            )));
        }
        // Constraints: τ(g·b − b·g) = 0 for every generator g and basis
        // monomial b. Cyclicity against generators implies cyclicity
        // against arbitrary products by induction on word length.
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for g in algebra_generators(ctx) {
            for i in 0..ctx.dim() {
                let b = ctx.basis_element(i);
                let comm = &(&g * &b) - &(&b * &g);
                if comm.is_zero() {
                    continue;
                }
                let row: Vec<Scalar> = supp.iter().map(|&s| comm.coeff_at(s)).collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let kernel = if rows.is_empty() {
            vec![vec![Scalar::from_integer(1.into()); supp.len()]]
        } else {
            linalg::kernel_basis(&Matrix::from_rows(rows))
        };
        if kernel.len() != 1 {
            return Err(crate::Error::VerificationFailure(format!(
                "trace functionals of degree {} on H({ell},{n}) form a space of dimension {}, expected 1",
                -d,
                kernel.len()
            )));
        }
        // Normalize on the top-label antidiagonal cell (λmax, w₀, 1).
        let norm_cell = cell_element(
            ctx,
            &CellIndex {
                label: label_max(n),
                w: Permutation::longest_element(n),
                u: Permutation::identity(n),
            },
        );
        let mut val = Scalar::zero();
        for (k, &s) in supp.iter().enumerate() {
            val += &kernel[0][k] * &norm_cell.coeff_at(s);
        }
        if val.is_zero() {
            return Err(crate::Error::VerificationFailure(
                "trace functional vanishes on the normalization cell".into(),
            ));
        }
        let mut weights = vec![Scalar::zero(); ctx.dim()];
        for (k, &s) in supp.iter().enumerate() {
            weights[s] = &kernel[0][k] / &val;
        }
        Ok(CellularTrace {
            ctx: Arc::clone(ctx),
            weights,
        })
    }

    pub fn ctx(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn eval(&self, x: &CycElement) -> Scalar {
        let mut out = Scalar::zero();
        for (i, c) in x.support() {
            out += &self.weights[i] * c;
        }
        out
    }
}

/// The matrix-algebra trace: pull `x` back through the isomorphism with
/// `M_{n!}(Z)` and sum `tr_Z` over the diagonal.
pub fn tr_hat(
    units: &MatrixUnitFamily,
    center: &CenterBasis,
    x: &CycElement,
) -> crate::Result<Scalar> {
    let entries = eta_inverse(units, center, x)?;
    let mut out = Scalar::zero();
    for (i, row) in entries.iter().enumerate() {
        out += tr_z(&row[i]);
    }
    Ok(out)
}

/// `Z_{0,n} = ψ_{w₀}·y_1^{ℓ−1}y_2^{ℓ−2}⋯y_n^{ℓ−n}`, homogeneous of
/// degree `d_Λ`.
pub fn z0(ctx: &Arc<CycContext>) -> CycElement {
    let (ell, n) = (ctx.ell(), ctx.n());
    let exps: Vec<u32> = (1..=n).map(|i| (ell - i) as u32).collect();
    ctx.reduce(&AffineElement::term(
        Permutation::longest_element(n),
        exps,
        Scalar::from_integer(1.into()),
    ))
}

/// The canonical same-name embedding `H(ℓ,m) → H(ℓ,n)` for `m ≤ n`:
/// permutations extend by fixed points, exponent vectors pad with zeros.
/// Monomial basis elements map to monomial basis elements.
pub fn embed(x: &CycElement, big: &Arc<CycContext>) -> CycElement {
    let small = x.context();
    assert_eq!(small.ell(), big.ell(), "embedding must preserve ℓ");
    assert!(small.n() <= big.n(), "embedding must not shrink the rank");
    let mut out = big.zero();
    for (i, c) in x.support() {
        let m = &small.basis()[i];
        let mut one_line = m.w.one_line().to_vec();
        one_line.extend(small.n() + 1..=big.n());
        let mut exps = m.exps.clone();
        exps.resize(big.n(), 0);
        let target = Monomial {
            w: Permutation::from_one_line(one_line).expect("extension is a permutation"),
            exps,
        };
        let j = big
            .index_of(&target)
            .expect("embedded monomial is a basis monomial");
        out = &out + &big.basis_element(j).scale(c);
    }
    out
}

/// An element of the tensor-square quotient, as coordinates over the
/// quotient basis chosen by its [`TensorSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    coords: Vec<Scalar>,
}

impl TensorElement {
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }
}

/// The quotient of `H(ℓ,m−1) ⊗ H(ℓ,m−1)` by the balancing relations over
/// `H(ℓ,m−2)`, together with the bimodule maps
/// `μ_ψ(a⊗b) = ι(a)·ψ_{m−1}·ι(b)` (into the rank-`m` algebra) and
/// `μ_{y^k}(a⊗b) = a·y_{m−1}^k·b` (inside the rank-`m−1` algebra).
pub struct TensorSpace {
    big: Arc<CycContext>,
    small: Arc<CycContext>,
    rank: usize,
    /// Monomial-basis index in `big` of each embedded `small` basis element.
    iota: Vec<usize>,
    /// Reduced relation rows and their pivot columns, for canonicalization.
    rel_rref: Matrix,
    rel_pivots: Vec<usize>,
    /// Non-pivot pair columns `(i,j) ↦ i·dim+j`: the quotient basis.
    free_cols: Vec<usize>,
}

/// Generators of `H(ℓ,m−2)` as elements of `H(ℓ,m−1)`:
/// `ψ_1,…,ψ_{m−3}, y_1,…,y_{m−2}`.
fn subalgebra_generators(small: &Arc<CycContext>, rank: usize) -> Vec<CycElement> {
    let sub_rank = rank - 2;
    let mut gens = Vec::new();
    for r in 1..sub_rank {
        gens.push(small.generator_psi(r));
    }
    for s in 1..=sub_rank {
        gens.push(small.generator_y(s));
    }
    gens
}

impl TensorSpace {
    /// Build the workspace for the step `H(ℓ,rank) → H(ℓ,rank−1)`,
    /// `rank ≥ 2`.
    pub fn new(ell: usize, rank: usize) -> Self {
        assert!(rank >= 2, "tensor workspace needs rank ≥ 2");
        let big = CycContext::new(ell, rank);
        let small = CycContext::new(ell, rank - 1);
        let iota: Vec<usize> = (0..small.dim())
            .map(|i| {
                let e = embed(&small.basis_element(i), &big);
                let idx = e.support().next().expect("basis embeds to basis").0;
                idx
            })
            .collect();
        let gens = subalgebra_generators(&small, rank);
        let rows = Self::relation_rows(&small, &gens);
        let (rel_rref, rel_pivots) = if rows.is_empty() {
            (Matrix::zeros(0, small.dim() * small.dim()), vec![])
        } else {
            let (r, p) = linalg::rref(&Matrix::from_rows(rows));
            (r, p)
        };
        let pivot_set: std::collections::HashSet<usize> = rel_pivots.iter().copied().collect();
        let free_cols: Vec<usize> = (0..small.dim() * small.dim())
            .filter(|c| !pivot_set.contains(c))
            .collect();
        TensorSpace {
            big,
            small,
            rank,
            iota,
            rel_rref,
            rel_pivots,
            free_cols,
        }
    }

    /// Dense balancing-relation rows `a·g ⊗ b − a ⊗ g·b` over all basis
    /// pairs `(a,b)` and the given subalgebra elements `g`.
    fn relation_rows(small: &Arc<CycContext>, gens: &[CycElement]) -> Vec<Vec<Scalar>> {
        let d = small.dim();
        let mut rows = Vec::new();
        for g in gens {
            for i in 0..d {
                let left = &small.basis_element(i) * g;
                for j in 0..d {
                    let right = g * &small.basis_element(j);
                    let mut row = vec![Scalar::zero(); d * d];
                    for (k, c) in left.support() {
                        row[k * d + j] += c;
                    }
                    for (l, c) in right.support() {
                        row[i * d + l] -= c;
                    }
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        rows
    }

    pub fn big(&self) -> &Arc<CycContext> {
        &self.big
    }

    pub fn small(&self) -> &Arc<CycContext> {
        &self.small
    }

    /// Quotient dimension.
    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    /// Rank of the balancing-relation span.
    pub fn relation_rank(&self) -> usize {
        self.rel_pivots.len()
    }

    /// Canonical representative: eliminate pivot coordinates with the
    /// reduced relation rows, then read off the free coordinates.
    fn canonicalize(&self, mut dense: Vec<Scalar>) -> TensorElement {
        for (row, &p) in self.rel_pivots.iter().enumerate() {
            let c = dense[p].clone();
            if c.is_zero() {
                continue;
            }
            for (col, v) in self.rel_rref.row(row).iter().enumerate() {
                if !v.is_zero() {
                    dense[col] -= &c * v;
                }
            }
        }
        TensorElement {
            coords: self.free_cols.iter().map(|&c| dense[c].clone()).collect(),
        }
    }

    /// The class of the pure tensor `a ⊗ b`.
    pub fn pure(&self, a: &CycElement, b: &CycElement) -> TensorElement {
        let d = self.small.dim();
        let mut dense = vec![Scalar::zero(); d * d];
        for (i, ca) in a.support() {
            for (j, cb) in b.support() {
                dense[i * d + j] += ca * cb;
            }
        }
        self.canonicalize(dense)
    }

    pub fn zero_element(&self) -> TensorElement {
        TensorElement {
            coords: vec![Scalar::zero(); self.dim()],
        }
    }

    fn pair_mu_psi(&self, i: usize, j: usize) -> CycElement {
        let psi = self.big.generator_psi(self.rank - 1);
        &(&self.big.basis_element(self.iota[i]) * &psi) * &self.big.basis_element(self.iota[j])
    }

    fn pair_mu_y(&self, i: usize, j: usize, k: u32) -> CycElement {
        let mut exps = vec![0u32; self.rank - 1];
        exps[self.rank - 2] = k;
        let y = self.small.reduce(&AffineElement::y_monomial(exps));
        &(&self.small.basis_element(i) * &y) * &self.small.basis_element(j)
    }

    /// `μ_ψ: T → H(ℓ,rank)`, `a⊗b ↦ ι(a)·ψ_{rank−1}·ι(b)`.
    pub fn mu_psi(&self, t: &TensorElement) -> CycElement {
        let d = self.small.dim();
        let mut out = self.big.zero();
        for (c, coeff) in t.coords.iter().enumerate() {
            if !coeff.is_zero() {
                let pair = self.free_cols[c];
                out = &out + &self.pair_mu_psi(pair / d, pair % d).scale(coeff);
            }
        }
        out
    }

    /// `μ_{y^k}: T → H(ℓ,rank−1)`, `a⊗b ↦ a·y_{rank−1}^k·b`.
    pub fn mu_y_pow(&self, t: &TensorElement, k: u32) -> CycElement {
        let d = self.small.dim();
        let mut out = self.small.zero();
        for (c, coeff) in t.coords.iter().enumerate() {
            if !coeff.is_zero() {
                let pair = self.free_cols[c];
                out = &out + &self.pair_mu_y(pair / d, pair % d, k).scale(coeff);
            }
        }
        out
    }

    /// Both bimodule maps vanish on every balancing relation generator
    /// (well-definedness on the quotient), checked for `μ_ψ` and `μ_{y^k}`
    /// for all `k ≤ max_k`.
    pub fn mu_kills_relations(&self, max_k: u32) -> bool {
        let gens = subalgebra_generators(&self.small, self.rank);
        for g in &gens {
            for i in 0..self.small.dim() {
                let left = &self.small.basis_element(i) * g;
                for j in 0..self.small.dim() {
                    let right = g * &self.small.basis_element(j);
                    // μ(left ⊗ e_j) − μ(e_i ⊗ right) must vanish.
                    let psi_diff = {
                        let mut acc = self.big.zero();
                        for (k, c) in left.support() {
                            acc = &acc + &self.pair_mu_psi(k, j).scale(c);
                        }
                        for (l, c) in right.support() {
                            acc = &acc - &self.pair_mu_psi(i, l).scale(c);
                        }
                        acc
                    };
                    if !psi_diff.is_zero() {
                        return false;
                    }
                    for k in 0..=max_k {
                        let mut acc = self.small.zero();
                        for (a, c) in left.support() {
                            acc = &acc + &self.pair_mu_y(a, j, k).scale(c);
                        }
                        for (b, c) in right.support() {
                            acc = &acc - &self.pair_mu_y(i, b, k).scale(c);
                        }
                        if !acc.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Sufficiency of generator-level relations: enlarging the relation
    /// set by all products of two subalgebra generators must not change
    /// the relation rank.
    pub fn stable_under_generator_products(&self) -> bool {
        let gens = subalgebra_generators(&self.small, self.rank);
        let mut enlarged = gens.clone();
        for a in &gens {
            for b in &gens {
                enlarged.push(a * b);
            }
        }
        let rows = Self::relation_rows(&self.small, &enlarged);
        if rows.is_empty() {
            return self.relation_rank() == 0;
        }
        linalg::rank(&Matrix::from_rows(rows)) == self.relation_rank()
    }
}

/// One step of the recursion, with its solver(s) built once.
struct TowerLevel {
    space: TensorSpace,
    /// Solver of `(t, p_0,…,p_{λ₀−1}) ↦ μ_ψ(t) + Σ ι(p_k)·y_rank^k`
    /// (defined when λ₀ ≥ 0).
    pos: Option<Arc<Solver>>,
    /// Solver of `t ↦ (μ_ψ(t), μ_{y^0}(t), …, μ_{y^{−λ₀−1}}(t))`
    /// (defined when λ₀ ≤ 0).
    neg: Option<Arc<Solver>>,
}

/// `λ₀ = ℓ − 2(rank−1)`, the branch parameter of the one-step trace.
pub fn lambda0(ell: usize, rank: usize) -> i64 {
    ell as i64 - 2 * (rank as i64 - 1)
}

/// The full recursion workspace for `H(ℓ,n)`: one context per rank and
/// one solved decomposition per step, built once and then immutable.
pub struct TraceTower {
    ell: usize,
    n: usize,
    contexts: Vec<Arc<CycContext>>,
    levels: Vec<Option<TowerLevel>>,
}

impl TraceTower {
    pub fn new(ell: usize, n: usize) -> Self {
        let contexts: Vec<Arc<CycContext>> =
            (0..=n).map(|m| CycContext::new(ell, m)).collect();
        let mut levels: Vec<Option<TowerLevel>> = (0..=n).map(|_| None).collect();
        if ell >= n {
            for rank in 2..=n {
                levels[rank] = Some(Self::build_level(ell, rank));
            }
        }
        TraceTower {
            ell,
            n,
            contexts,
            levels,
        }
    }

    fn build_level(ell: usize, rank: usize) -> TowerLevel {
        let space = TensorSpace::new(ell, rank);
        let l0 = lambda0(ell, rank);
        let d = space.small.dim();
        let q = space.dim();
        let mut pos = None;
        let mut neg = None;
        if l0 >= 0 {
            // Columns: μ_ψ over the quotient basis, then ι(e)·y_rank^k for
            // each k < λ₀ and each small basis element e.
            let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(q + (l0 as usize) * d);
            for c in 0..q {
                let pair = space.free_cols[c];
                cols.push(space.pair_mu_psi(pair / d, pair % d).coords());
            }
            for k in 0..l0 as u32 {
                let mut exps = vec![0u32; rank];
                exps[rank - 1] = k;
                let y_pow = space.big.reduce(&AffineElement::y_monomial(exps));
                for e in 0..d {
                    let col = &embed(&space.small.basis_element(e), &space.big) * &y_pow;
                    cols.push(col.coords());
                }
            }
            pos = Some(Arc::new(Solver::new(&Matrix::from_columns(&cols))));
        }
        if l0 <= 0 {
            // Columns: stacked (μ_ψ, μ_{y^0}, …, μ_{y^{−λ₀−1}}) per
            // quotient basis element.
            let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(q);
            for c in 0..q {
                let pair = space.free_cols[c];
                let mut col = space.pair_mu_psi(pair / d, pair % d).coords();
                for k in 0..(-l0) as u32 {
                    col.extend(space.pair_mu_y(pair / d, pair % d, k).coords());
                }
                cols.push(col);
            }
            neg = Some(Arc::new(Solver::new(&Matrix::from_columns(&cols))));
        }
        TowerLevel { space, pos, neg }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn context(&self, rank: usize) -> &Arc<CycContext> {
        &self.contexts[rank]
    }

    pub fn tensor_space(&self, rank: usize) -> &TensorSpace {
        &self.levels[rank]
            .as_ref()
            .expect("tensor workspace exists for 2 ≤ rank ≤ n")
            .space
    }

    /// The unique decomposition `z = μ_ψ(t) + Σ_{k<λ₀} ι(p_k)·y_rank^k`
    /// (requires λ₀ ≥ 0). At rank 1 the tensor part is absent and the
    /// `p_k` are the scalar coefficients of `y_1^k`.
    pub fn decompose_pos(
        &self,
        rank: usize,
        z: &CycElement,
    ) -> crate::Result<(TensorElement, Vec<CycElement>)> {
        let l0 = lambda0(self.ell, rank);
        if l0 < 0 {
            return Err(crate::Error::InvalidElement(format!(
                "decomposition with remainder needs λ₀ ≥ 0, got {l0} at rank {rank}"
            )));
        }
        if rank == 1 {
            let zero_ctx = &self.contexts[0];
            let ps: Vec<CycElement> = (0..self.ell)
                .map(|k| zero_ctx.from_coords(&[z.coeff_at(k)]))
                .collect();
            return Ok((TensorElement { coords: vec![] }, ps));
        }
        let level = self.levels[rank].as_ref().expect("level built");
        let solver = level.pos.as_ref().expect("λ₀ ≥ 0 has a solver");
        let sol = solver.solve_unique(&z.coords())?;
        let q = level.space.dim();
        let d = level.space.small.dim();
        let t = TensorElement {
            coords: sol[..q].to_vec(),
        };
        let ps: Vec<CycElement> = (0..l0 as usize)
            .map(|k| level.space.small.from_coords(&sol[q + k * d..q + (k + 1) * d]))
            .collect();
        Ok((t, ps))
    }

    /// The unique `t` with `μ_ψ(t) = z` and `μ_{y^k}(t) = 0` for
    /// `0 ≤ k < −λ₀` (requires λ₀ ≤ 0).
    pub fn ztilde_neg(&self, rank: usize, z: &CycElement) -> crate::Result<TensorElement> {
        let l0 = lambda0(self.ell, rank);
        if l0 > 0 {
            return Err(crate::Error::InvalidElement(format!(
                "constraint-only lift needs λ₀ ≤ 0, got {l0} at rank {rank}"
            )));
        }
        let level = self.levels[rank].as_ref().expect("level built");
        let solver = level.neg.as_ref().expect("λ₀ ≤ 0 has a solver");
        let d = level.space.small.dim();
        let mut rhs = z.coords();
        rhs.extend(vec![Scalar::zero(); ((-l0) as usize) * d]);
        Ok(TensorElement {
            coords: solver.solve_unique(&rhs)?,
        })
    }

    /// One step down the tower: `ε̂_rank: H(ℓ,rank) → H(ℓ,rank−1)`.
    /// For λ₀ > 0 this is `p_{λ₀−1}`; for λ₀ ≤ 0 it is `μ_{y^{−λ₀}}(z̃)`.
    pub fn eps_hat(&self, rank: usize, z: &CycElement) -> crate::Result<CycElement> {
        assert!(rank >= 1 && rank <= self.n, "rank out of range");
        assert_eq!(z.context().n(), rank, "element has wrong rank");
        let l0 = lambda0(self.ell, rank);
        if l0 > 0 {
            let (_, ps) = self.decompose_pos(rank, z)?;
            Ok(ps.into_iter().next_back().expect("λ₀ > 0 has p's"))
        } else {
            let level = self.levels[rank].as_ref().expect("level built");
            let t = self.ztilde_neg(rank, z)?;
            Ok(level.space.mu_y_pow(&t, (-l0) as u32))
        }
    }

    /// The recursive trace: `ε̂_1∘⋯∘ε̂_n`, landing in `H(ℓ,0) = K`.
    pub fn tr_svv(&self, x: &CycElement) -> crate::Result<Scalar> {
        assert_eq!(x.context().n(), self.n, "element has wrong rank");
        if x.is_zero() {
            return Ok(Scalar::zero());
        }
        let mut z = x.clone();
        for rank in (1..=self.n).rev() {
            z = self.eps_hat(rank, &z)?;
        }
        Ok(z.coeff_at(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cellular::{label_min, p0_enumerate, CellularBasis};
    use crate::center::{c_mu, f_units, z_mu};
    use crate::perm::evaluate_word;
    use crate::scalar::{int, one, sign, zero};

    #[test]
    fn z0_examples() {
        let ctx = CycContext::new(3, 1);
        assert_eq!(z0(&ctx), ctx.reduce(&AffineElement::y_monomial(vec![2])));
        let ctx = CycContext::new(2, 2);
        let psi1y1 =
            ctx.reduce(&(&AffineElement::generator_psi(2, 1) * &AffineElement::generator_y(2, 1)));
        assert_eq!(z0(&ctx), psi1y1);
        for (ell, n) in [(2usize, 2usize), (3, 2), (4, 2), (3, 3), (4, 3)] {
            let ctx = CycContext::new(ell, n);
            assert_eq!(z0(&ctx).homogeneous_degree(), Some(d_lam(ell, n)));
        }
    }

    #[test]
    fn center_trace_and_complements() {
        let ctx = CycContext::new(3, 2);
        let center = CenterBasis::new(&ctx).unwrap();
        let labels = center.labels().to_vec();

        // tr_Z is the coefficient of the top z.
        for (i, _) in labels.iter().enumerate() {
            let z = center.center_element(center.z(i)).unwrap();
            let expected = if i == labels.len() - 1 { one() } else { zero() };
            assert_eq!(tr_z(&z), expected);
        }

        // deg z_λmax = d_Λ.
        for (ell, n) in [(2usize, 2usize), (3, 2), (3, 3), (4, 3)] {
            assert_eq!(
                z_degree(ell, n, &label_max(n)),
                d_lam(ell, n),
                "top z degree at ({ell},{n})"
            );
        }

        // Complements: top ↔ bottom, and the middle label of (3,2) is
        // self-complementary with tr(z²) ≠ 0.
        let top = zhat(&center, labels.last().unwrap()).unwrap();
        assert_eq!(top.element(), center.z(0));
        let bottom = zhat(&center, &labels[0]).unwrap();
        assert_eq!(bottom.element(), center.z(labels.len() - 1));
        let mid = CellLabel::new(3, 2, vec![1, 3]).unwrap();
        let mid_hat = zhat(&center, &mid).unwrap();
        assert_eq!(mid_hat.element(), &z_mu(&ctx, &mid));
        let sq = mid_hat.element() * mid_hat.element();
        assert!(!tr_z(&center.center_element(&sq).unwrap()).is_zero());
    }

    #[test]
    fn cellular_trace_values() {
        // Top-label antidiagonal cells always map to 1, and every other
        // top-label cell to 0. Lower labels are subtler — see below.
        for (ell, n) in [(2usize, 2usize), (3, 2), (4, 2), (3, 3)] {
            let ctx = CycContext::new(ell, n);
            let tr = CellularTrace::new(&ctx).unwrap();
            let w0 = Permutation::longest_element(n);
            for w in crate::perm::all_permutations(n) {
                for u in crate::perm::all_permutations(n) {
                    let idx = CellIndex {
                        label: label_max(n),
                        w: w.clone(),
                        u: u.clone(),
                    };
                    let expected = if idx.u == w0.compose(&idx.w) { one() } else { zero() };
                    assert_eq!(
                        tr.eval(&cell_element(&ctx, &idx)),
                        expected,
                        "top-label cell ({ell},{n}) {idx:?}"
                    );
                }
            }
        }

        // (3,2): cyclicity forces value 1 on the lower-label cell
        // ψ^{(1,3)}_{1,1} = y₁², whose degree is also d_Λ. All remaining
        // cells vanish.
        let ctx = CycContext::new(3, 2);
        let tr = CellularTrace::new(&ctx).unwrap();
        let basis = CellularBasis::new(&ctx).unwrap();
        for (i, idx) in basis.indices().iter().enumerate() {
            let at_top = idx.label == label_max(2);
            let expected = if crate::cellular::cell_degree(3, idx) == d_lam(3, 2)
                && (at_top || (idx.w == Permutation::identity(2) && idx.u == Permutation::identity(2)))
            {
                one()
            } else {
                zero()
            };
            assert_eq!(tr.eval(basis.element(i)), expected, "cell {idx:?}");
        }
        assert_eq!(
            tr.eval(&ctx.reduce(&AffineElement::y_monomial(vec![2, 0]))),
            one(),
            "forced value on y₁²"
        );

        // n=1: only the top power traces to 1.
        let ctx = CycContext::new(3, 1);
        let tr = CellularTrace::new(&ctx).unwrap();
        for k in 0..3u32 {
            let x = ctx.reduce(&AffineElement::y_monomial(vec![k]));
            let expected = if k == 2 { one() } else { zero() };
            assert_eq!(tr.eval(&x), expected);
        }
    }

    /// The table "1 on top-label antidiagonal cells, 0 on every other
    /// cellular basis element" does NOT extend linearly to a trace form:
    /// cyclicity fails. This is why [`CellularTrace`] solves for the
    /// off-top values instead of postulating zeros.
    #[test]
    fn naive_top_label_table_is_not_cyclic() {
        let ctx = CycContext::new(3, 2);
        let basis = CellularBasis::new(&ctx).unwrap();
        let w0 = Permutation::longest_element(2);
        let naive = |x: &CycElement| -> Scalar {
            let coords = basis.coords(x);
            let mut out = zero();
            for (i, idx) in basis.indices().iter().enumerate() {
                if idx.label == label_max(2) && idx.u == w0.compose(&idx.w) {
                    out += &coords[i];
                }
            }
            out
        };
        // a = y₁²ψ₁, b = y₂ − y₁: the naive table breaks on this pair…
        let a = ctx.reduce(
            &(&AffineElement::y_monomial(vec![2, 0]) * &AffineElement::generator_psi(2, 1)),
        );
        let b = &ctx.generator_y(2) - &ctx.generator_y(1);
        let ab = &a * &b;
        let ba = &b * &a;
        assert_ne!(naive(&ab), naive(&ba), "naive table unexpectedly cyclic");
        // …while the solved form is cyclic there (and everywhere).
        let tr = CellularTrace::new(&ctx).unwrap();
        assert_eq!(tr.eval(&ab), tr.eval(&ba));
    }

    #[test]
    fn matrix_trace_cases_and_proportionality() {
        let ctx = CycContext::new(3, 2);
        let units = f_units(&ctx).unwrap();
        let center = CenterBasis::new(&ctx).unwrap();
        let top = center.z(center.dim() - 1);

        for i in 0..units.size() {
            for j in 0..units.size() {
                let x = &(units.unit(i, j) * top);
                let expected = if i == j { one() } else { zero() };
                assert_eq!(tr_hat(&units, &center, x).unwrap(), expected);
                // Off-diagonal images vanish for every central z.
                if i != j {
                    for nu in 0..center.dim() {
                        let y = units.unit(i, j) * center.z(nu);
                        assert_eq!(tr_hat(&units, &center, &y).unwrap(), zero());
                    }
                }
            }
        }

        // Proportionality against the cellular form on the full monomial
        // basis: TrHat = c_λmax·(−1)^{n(n−1)/2}·Tr.
        let basis = CellularBasis::new(&ctx).unwrap();
        let tr = CellularTrace::new(&ctx).unwrap();
        let factor = &c_mu(&basis, &label_max(2)).unwrap() * &sign(1);
        for i in 0..ctx.dim() {
            let x = ctx.basis_element(i);
            assert_eq!(
                tr_hat(&units, &center, &x).unwrap(),
                &factor * &tr.eval(&x),
                "proportionality fails at basis {i}"
            );
        }
    }

    #[test]
    fn tensor_space_shapes() {
        // Rank-2 steps have no relations: dimension (dim H(ℓ,1))² = ℓ².
        for ell in [2usize, 3, 4] {
            let space = TensorSpace::new(ell, 2);
            assert_eq!(space.dim(), ell * ell);
            assert_eq!(space.relation_rank(), 0);
            assert!(space.mu_kills_relations(2));
        }

        // Rank-3 step at ℓ=3: dim H(3,3) + 1·dim H(3,2) = 48.
        let space = TensorSpace::new(3, 3);
        assert_eq!(space.dim(), 48);
        assert!(space.mu_kills_relations(2));
        assert!(space.stable_under_generator_products());
    }

    #[test]
    fn embedding_is_multiplicative() {
        let small = CycContext::new(4, 2);
        let big = CycContext::new(4, 3);
        for i in [0usize, 3, 11, 23] {
            for j in [1usize, 7, 19] {
                let a = small.basis_element(i);
                let b = small.basis_element(j);
                assert_eq!(
                    embed(&(&a * &b), &big),
                    &embed(&a, &big) * &embed(&b, &big)
                );
            }
        }
        assert_eq!(embed(&small.one(), &big), big.one());
    }

    /// The pure tensor `((ψ_1⋯ψ_{rank−2})·y_{rank−1}^{ℓ−rank}) ⊗ Z_{0,rank−1}`
    /// appearing as the tensor part of `Z_{0,rank}` in both branches.
    fn z0_tensor_part(space: &TensorSpace) -> TensorElement {
        let rank = space.big.n();
        let ell = space.big.ell();
        let word: Vec<usize> = (1..=rank.saturating_sub(2)).collect();
        let mut exps = vec![0u32; rank - 1];
        exps[rank - 2] = (ell - rank) as u32;
        let first = space.small.reduce(
            &(&AffineElement::psi_of(evaluate_word(rank - 1, &word))
                * &AffineElement::y_monomial(exps)),
        );
        space.pure(&first, &z0(&space.small))
    }

    #[test]
    fn decomposition_examples_positive_branch() {
        // Rank 2, ℓ ∈ {3,4}: λ₀ = ℓ−2 > 0.
        for ell in [3usize, 4] {
            let tower = TraceTower::new(ell, 2);
            let big = tower.context(2);
            let small = tower.context(1);
            let l0 = lambda0(ell, 2);
            let (t, ps) = tower.decompose_pos(2, &z0(big)).unwrap();

            // The tensor part is the displayed pure tensor.
            assert_eq!(t, z0_tensor_part(tower.tensor_space(2)));

            // p_k(Z_{0,2}) = y_1^{ℓ−2+λ₀−k}, zero when out of range, and
            // p_{λ₀−1} = Z_{0,1}.
            for (k, p) in ps.iter().enumerate() {
                let e = (ell as i64 - 2 + l0 - k as i64) as u32;
                let expected = small.reduce(&AffineElement::y_monomial(vec![e]));
                assert_eq!(p, &expected, "p_{k} at ℓ={ell}");
            }
            assert_eq!(ps.last().unwrap(), &z0(small));

            // The decomposition reassembles: z = μ_ψ(t) + Σ ι(p_k)·y_2^k.
            let space = tower.tensor_space(2);
            let mut reassembled = space.mu_psi(&t);
            for (k, p) in ps.iter().enumerate() {
                let mut exps = vec![0u32; 2];
                exps[1] = k as u32;
                let y_pow = big.reduce(&AffineElement::y_monomial(exps));
                reassembled = &reassembled + &(&embed(p, big) * &y_pow);
            }
            assert_eq!(reassembled, z0(big));
        }

        // Rank 1: coefficient extraction.
        let tower = TraceTower::new(3, 1);
        let ctx = tower.context(1);
        let x = &ctx.reduce(&AffineElement::y_monomial(vec![2])).scale(&int(5))
            - &ctx.one().scale(&int(2));
        let (_, ps) = tower.decompose_pos(1, &x).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps[0], tower.context(0).from_coords(&[int(-2)]));
        assert_eq!(ps[1], tower.context(0).from_coords(&[int(0)]));
        assert_eq!(ps[2], tower.context(0).from_coords(&[int(5)]));
    }

    #[test]
    fn decomposition_examples_negative_branch() {
        // (3,3): λ₀ = −1.
        let tower = TraceTower::new(3, 3);
        let big = tower.context(3);
        let t = tower.ztilde_neg(3, &z0(big)).unwrap();
        let space = tower.tensor_space(3);
        assert_eq!(t, z0_tensor_part(space));
        assert_eq!(space.mu_psi(&t), z0(big));
        assert!(space.mu_y_pow(&t, 0).is_zero());
        assert_eq!(space.mu_y_pow(&t, 1), z0(tower.context(2)));

        // (2,2): λ₀ = 0 — a constraint-free lift exists and both branch
        // entry points agree with it.
        let tower = TraceTower::new(2, 2);
        let big = tower.context(2);
        let t = tower.ztilde_neg(2, &z0(big)).unwrap();
        assert_eq!(tower.tensor_space(2).mu_psi(&t), z0(big));
        let (t2, ps) = tower.decompose_pos(2, &z0(big)).unwrap();
        assert_eq!(t, t2);
        assert!(ps.is_empty());
    }

    #[test]
    fn eps_tower_and_recursive_trace() {
        // ε̂ sends Z_{0,rank} to Z_{0,rank−1} in every branch, so the
        // recursive trace of Z_{0,n} is 1.
        for (ell, n) in [(2usize, 2usize), (3, 2), (4, 2), (3, 3)] {
            let tower = TraceTower::new(ell, n);
            for rank in (1..=n).rev() {
                let stepped = tower.eps_hat(rank, &z0(tower.context(rank))).unwrap();
                assert_eq!(
                    stepped,
                    z0(tower.context(rank - 1)),
                    "ε̂ step fails at rank {rank}, ({ell},{n})"
                );
            }
            assert_eq!(tower.tr_svv(&z0(tower.context(n))).unwrap(), one());
        }

        // Homogeneity: the form vanishes on 1 when d_Λ > 0.
        for (ell, n) in [(3usize, 2usize), (4, 2)] {
            assert!(d_lam(ell, n) > 0);
            let tower = TraceTower::new(ell, n);
            assert_eq!(tower.tr_svv(&tower.context(n).one()).unwrap(), zero());
        }

        // Agreement with the cellular form on a full monomial basis.
        for (ell, n) in [(2usize, 2usize), (3, 2)] {
            let tower = TraceTower::new(ell, n);
            let ctx = tower.context(n);
            let tr = CellularTrace::new(ctx).unwrap();
            for i in 0..ctx.dim() {
                let x = ctx.basis_element(i);
                assert_eq!(
                    tower.tr_svv(&x).unwrap(),
                    tr.eval(&x),
                    "recursive vs cellular trace at basis {i} of ({ell},{n})"
                );
            }
        }
    }

    #[test]
    fn cellular_trace_is_symmetric_and_nondegenerate_small() {
        for (ell, n) in [(2usize, 2usize), (3, 2)] {
            let ctx = CycContext::new(ell, n);
            let tr = CellularTrace::new(&ctx).unwrap();
            let dim = ctx.dim();
            let mut gram_rows = Vec::with_capacity(dim);
            for i in 0..dim {
                let a = ctx.basis_element(i);
                let mut row = Vec::with_capacity(dim);
                for j in 0..dim {
                    row.push(tr.eval(&(&a * &ctx.basis_element(j))));
                }
                gram_rows.push(row);
            }
            let gram = Matrix::from_rows(gram_rows);
            for i in 0..dim {
                for j in 0..dim {
                    assert_eq!(
                        gram.at(i, j),
                        gram.at(j, i),
                        "symmetry at ({i},{j}) in ({ell},{n})"
                    );
                }
            }
            assert_eq!(linalg::rank(&gram), dim, "Gram rank in ({ell},{n})");

            // The form is supported in degree d_Λ only.
            for i in 0..dim {
                let x = ctx.basis_element(i);
                if x.homogeneous_degree() != Some(d_lam(ell, n)) {
                    assert_eq!(tr.eval(&x), zero());
                }
            }
        }
    }

    #[test]
    fn traces_on_bottom_cell_at_minimal_label() {
        // Sanity against the hand-checked value: at ℓ=n=2 the single label
        // makes Z_{0,2} a unit cell, and the trace of it is 1.
        let ctx = CycContext::new(2, 2);
        let tr = CellularTrace::new(&ctx).unwrap();
        assert_eq!(tr.eval(&z0(&ctx)), one());
        let idx = CellIndex {
            label: label_min(2, 2),
            w: Permutation::longest_element(2),
            u: Permutation::identity(2),
        };
        assert_eq!(tr.eval(&cell_element(&ctx, &idx)), one());
        let labels = p0_enumerate(2, 2);
        assert_eq!(labels.len(), 1);
    }
}
