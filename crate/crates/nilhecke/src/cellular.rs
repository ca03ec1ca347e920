//! Graded cellular structure of `H(ℓ,n)`.
//!
//! Cells are labeled by strictly increasing `n`-tuples `(k_1,…,k_n)` in
//! `[1,ℓ]` (the label of a block). Labels carry a total cell order: a label
//! is *higher* when its tuple is colexicographically *smaller*; this
//! refines the entrywise (dominance) order, under which smaller tuples
//! also sit higher. The minimal label is `(ℓ−n+1,…,ℓ)`, the maximal
//! `(1,…,n)`.
//!
//! For a label `λ = (k_1,…,k_n)` put `y_λ := y_1^{ℓ−k_1}⋯y_n^{ℓ−k_n}`.
//! The cellular basis consists of `ψ^λ_{w,u} := ψ_{w⁻¹}·y_λ·ψ_u` over all
//! labels and all pairs of permutations, homogeneous of degree
//! `2ℓn − 2Σk_i − 2ℓ(w) − 2ℓ(u)`. [`CellularBasis`] freezes one index
//! order (labels ascending in the cell order, then `(w,u)` pairs in the
//! weak-order enumeration) and owns the invertible change of basis against
//! the monomial basis.
//!
//! Tableaux for a label are the bijections `{k_1,…,k_n} → {1,…,n}`; their
//! combinatorial degrees produce closed formulas for the graded dimensions
//! of the simple module `D_0`, its projective cover `P_0`, the graded
//! decomposition numbers, and the graded Cartan matrix entry.

use crate::cyclotomic::{CycContext, CycElement};
use crate::affine::AffineElement;
use crate::linalg::{Matrix, Solver};
use crate::perm::{all_permutations, wf_enumeration, Permutation};
use crate::scalar::Scalar;
use itertools::Itertools;
use num_traits::Zero;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// A cell label: strictly increasing `(k_1,…,k_n)` with `1 ≤ k_i ≤ ℓ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellLabel {
    ks: Vec<usize>,
}

impl fmt::Debug for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ{:?}", self.ks)
    }
}

impl CellLabel {
    /// Validated constructor: strictly increasing entries within `[1,ℓ]`.
    pub fn new(ell: usize, n: usize, ks: Vec<usize>) -> crate::Result<Self> {
        if ks.len() != n {
            return Err(crate::Error::InvalidElement(format!(
                "label {ks:?} has {} entries, expected {n}",
                ks.len()
            )));
        }
        for pair in ks.windows(2) {
            if pair[0] >= pair[1] {
                return Err(crate::Error::InvalidElement(format!(
                    "label {ks:?} is not strictly increasing"
                )));
            }
        }
        if ks.iter().any(|&k| k < 1 || k > ell) {
            return Err(crate::Error::InvalidElement(format!(
                "label {ks:?} has entries outside 1..={ell}"
            )));
        }
        Ok(CellLabel { ks })
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn n(&self) -> usize {
        self.ks.len()
    }

    pub fn sum(&self) -> usize {
        self.ks.iter().sum()
    }

    /// Total cell order: `Greater` when `self` is the higher cell, i.e.
    /// when its tuple is colexicographically smaller.
    pub fn cell_cmp(&self, other: &CellLabel) -> Ordering {
        for (a, b) in self.ks.iter().rev().zip(other.ks.iter().rev()) {
            match b.cmp(a) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// The minimal label `(ℓ−n+1,…,ℓ)`.
pub fn label_min(ell: usize, n: usize) -> CellLabel {
    CellLabel {
        ks: (ell - n + 1..=ell).collect(),
    }
}

/// The maximal label `(1,…,n)`.
pub fn label_max(n: usize) -> CellLabel {
    CellLabel {
        ks: (1..=n).collect(),
    }
}

/// All labels, ascending in the cell order (minimal label first).
pub fn p0_enumerate(ell: usize, n: usize) -> Vec<CellLabel> {
    let mut out: Vec<CellLabel> = (1..=ell)
        .combinations(n)
        .map(|ks| CellLabel { ks })
        .collect();
    out.sort_by(|a, b| a.cell_cmp(b));
    out
}

/// Index of one cellular basis element: a label and two permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub label: CellLabel,
    pub w: Permutation,
    pub u: Permutation,
}

/// `y_λ = y_1^{ℓ−k_1}⋯y_n^{ℓ−k_n}` (already a basis monomial).
pub fn y_lambda(ctx: &Arc<CycContext>, label: &CellLabel) -> CycElement {
    let ell = ctx.ell();
    let exps: Vec<u32> = label.ks.iter().map(|&k| (ell - k) as u32).collect();
    ctx.reduce(&AffineElement::y_monomial(exps))
}

/// `y_λ` as an affine element, for building products before reducing.
fn y_lambda_affine(ell: usize, label: &CellLabel) -> AffineElement {
    let exps: Vec<u32> = label.ks.iter().map(|&k| (ell - k) as u32).collect();
    AffineElement::y_monomial(exps)
}

/// The cellular basis element `ψ^λ_{w,u} = ψ_{w⁻¹}·y_λ·ψ_u`.
pub fn cell_element(ctx: &Arc<CycContext>, idx: &CellIndex) -> CycElement {
    let left = AffineElement::psi_of(idx.w.inverse());
    let right = AffineElement::psi_of(idx.u.clone());
    ctx.reduce(&(&(&left * &y_lambda_affine(ctx.ell(), &idx.label)) * &right))
}

/// Expected degree of `ψ^λ_{w,u}`: `2ℓn − 2Σk_i − 2ℓ(w) − 2ℓ(u)`.
pub fn cell_degree(ell: usize, idx: &CellIndex) -> i64 {
    2 * (ell as i64) * (idx.label.n() as i64)
        - 2 * (idx.label.sum() as i64)
        - 2 * (idx.w.length() as i64)
        - 2 * (idx.u.length() as i64)
}

/// The cellular basis of one context, with its frozen index order and the
/// change-of-basis solver against the monomial basis. Built once per
/// context and then read-only.
pub struct CellularBasis {
    ctx: Arc<CycContext>,
    indices: Vec<CellIndex>,
    lookup: HashMap<CellIndex, usize>,
    elements: Vec<CycElement>,
    solver: Solver,
}

impl CellularBasis {
    /// Build all cell elements and the change-of-basis matrix. Fails with
    /// [`crate::Error::SingularBasis`] if the matrix is not invertible
    /// (which would disprove cellularity; it must not happen).
    pub fn new(ctx: &Arc<CycContext>) -> crate::Result<Self> {
        let (ell, n) = (ctx.ell(), ctx.n());
        let perms = wf_enumeration(n);
        let mut indices = Vec::new();
        if ell >= n {
            for label in p0_enumerate(ell, n) {
                for w in &perms {
                    for u in &perms {
                        indices.push(CellIndex {
                            label: label.clone(),
                            w: w.clone(),
                            u: u.clone(),
                        });
                    }
                }
            }
        }
        let elements: Vec<CycElement> = indices.iter().map(|i| cell_element(ctx, i)).collect();
        let columns: Vec<Vec<Scalar>> = elements.iter().map(|e| e.coords()).collect();
        let matrix = Matrix::from_columns(&columns);
        let solver = Solver::new(&matrix);
        if solver.rank() != ctx.dim() || indices.len() != ctx.dim() {
            return Err(crate::Error::SingularBasis(format!(
                "cellular change of basis for (ℓ,n)=({ell},{n}) has rank {} over dimension {}",
                solver.rank(),
                ctx.dim()
            )));
        }
        let lookup = indices
            .iter()
            .enumerate()
            .map(|(i, idx)| (idx.clone(), i))
            .collect();
        Ok(CellularBasis {
            ctx: Arc::clone(ctx),
            indices,
            lookup,
            elements,
            solver,
        })
    }

    pub fn ctx(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    /// Index order: labels ascending in the cell order, then `(w,u)` pairs
    /// in the weak-order enumeration (outer `w`, inner `u`).
    pub fn indices(&self) -> &[CellIndex] {
        &self.indices
    }

    pub fn element(&self, i: usize) -> &CycElement {
        &self.elements[i]
    }

    pub fn position(&self, idx: &CellIndex) -> Option<usize> {
        self.lookup.get(idx).copied()
    }

    /// Coordinates of `x` in the cellular basis, dense in index order.
    pub fn coords(&self, x: &CycElement) -> Vec<Scalar> {
        self.solver
            .solve_unique(&x.coords())
            .expect("cellular change of basis is invertible")
    }

    /// Sparse view of [`CellularBasis::coords`]: only nonzero entries.
    pub fn coords_sparse(&self, x: &CycElement) -> Vec<(CellIndex, Scalar)> {
        self.coords(x)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.indices[i].clone(), c))
            .collect()
    }

    /// Rebuild an element from cellular coordinates.
    pub fn from_coords(&self, coords: &[Scalar]) -> CycElement {
        assert_eq!(coords.len(), self.indices.len());
        let mut out = self.ctx.zero();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.elements[i].scale(c);
            }
        }
        out
    }

    /// Projection of `x` onto the span of cells with label strictly above
    /// `mu` — the two-sided ideal of the cells higher than `mu`.
    pub fn truncate_above(&self, x: &CycElement, mu: &CellLabel) -> CycElement {
        let coords = self.coords(x);
        let mut out = self.ctx.zero();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() && self.indices[i].label.cell_cmp(mu) == Ordering::Greater {
                out = &out + &self.elements[i].scale(c);
            }
        }
        out
    }

    /// Graded dimension of the whole algebra, summed over cell degrees.
    pub fn graded_dim_algebra(&self) -> LaurentPoly {
        let ell = self.ctx.ell();
        let mut out = LaurentPoly::new();
        for idx in &self.indices {
            out.add_term(cell_degree(ell, idx), 1);
        }
        out
    }
}

// ----------------------------------------------------------------------
// Tableau combinatorics and graded dimension formulas.
// ----------------------------------------------------------------------

/// A tableau for a label with entries `k_1 < ⋯ < k_n`: the bijection
/// `k_i ↦ values[i−1]` onto `{1,…,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    pub values: Vec<usize>,
}

/// All `n!` tableaux of an `n`-entry label.
pub fn std_tableaux(n: usize) -> Vec<Tableau> {
    all_permutations(n)
        .into_iter()
        .map(|p| Tableau {
            values: p.one_line().to_vec(),
        })
        .collect()
}

/// Combinatorial degree of a tableau `t` on `label`: for each `i`, count
/// `j ∈ (k_i, ℓ]` positively when `j` is outside the label or carries a
/// larger tableau value, negatively when it carries a smaller one.
pub fn tableau_degree(ell: usize, label: &CellLabel, t: &Tableau) -> i64 {
    let ks = label.ks();
    assert_eq!(t.values.len(), ks.len(), "tableau size mismatch");
    let pos: HashMap<usize, usize> = ks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut deg = 0i64;
    for (i, &ki) in ks.iter().enumerate() {
        let ti = t.values[i];
        for j in (ki + 1)..=ell {
            match pos.get(&j) {
                None => deg += 1,
                Some(&b) => {
                    if t.values[b] > ti {
                        deg += 1;
                    } else {
                        deg -= 1;
                    }
                }
            }
        }
    }
    deg
}

/// Integer Laurent polynomials in one variable `q`, used for graded
/// dimensions. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn new() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: i64, coeff: i64) -> Self {
        let mut p = LaurentPoly::new();
        p.add_term(degree, coeff);
        p
    }

    pub fn add_term(&mut self, degree: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.coeffs.entry(degree).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.coeffs.remove(&degree);
        }
    }

    pub fn coeff(&self, degree: i64) -> i64 {
        self.coeffs.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Pairs (degree, coefficient), ascending in degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&d, &c)| (d, c))
    }

    /// Evaluation at `q = 1`: the ungraded dimension.
    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Multiply by `q^{shift}`.
    pub fn shifted(&self, shift: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d + shift, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&d, &c) in &self.coeffs {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            let a = c.abs();
            match d {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "q")?,
                1 => write!(f, "{a}q")?,
                _ if a == 1 => write!(f, "q^{d}")?,
                _ => write!(f, "{a}q^{d}")?,
            }
        }
        Ok(())
    }
}

/// Graded dimension of the simple module: `Σ_t q^{deg t}` over tableaux
/// of the minimal label.
pub fn graded_dim_d0(ell: usize, n: usize) -> LaurentPoly {
    let label = label_min(ell, n);
    let mut out = LaurentPoly::new();
    for t in std_tableaux(n) {
        out.add_term(tableau_degree(ell, &label, &t), 1);
    }
    out
}

/// Graded dimension of the projective cover:
/// `Σ_λ Σ_t q^{deg t + 2nℓ − n(n−1) − 2Σk_i}`, where `t` runs over standard
/// tableaux of the *minimal* label throughout — every cell module is a
/// degree shift of the bottom one, so only the shift depends on `λ`.
/// Equivalently, the graded Cartan polynomial times `dim_q D₀`.
pub fn graded_dim_p0(ell: usize, n: usize) -> LaurentPoly {
    let min = label_min(ell, n);
    let mut out = LaurentPoly::new();
    for label in p0_enumerate(ell, n) {
        let shift =
            2 * (n as i64) * (ell as i64) - (n as i64) * (n as i64 - 1) - 2 * (label.sum() as i64);
        for t in std_tableaux(n) {
            out.add_term(tableau_degree(ell, &min, &t) + shift, 1);
        }
    }
    out
}

/// Graded decomposition number of the cell module for `label`: the
/// monomial `q^{nℓ − n(n−1)/2 − Σk_i}`.
pub fn graded_decomp(ell: usize, n: usize, label: &CellLabel) -> LaurentPoly {
    let d = (n as i64) * (ell as i64)
        - (n as i64) * (n as i64 - 1) / 2
        - (label.sum() as i64);
    LaurentPoly::monomial(d, 1)
}

/// Graded Cartan entry: `Σ_λ q^{2nℓ − n(n−1) − 2Σk_i}`.
pub fn graded_cartan(ell: usize, n: usize) -> LaurentPoly {
    let mut out = LaurentPoly::new();
    for label in p0_enumerate(ell, n) {
        out.add_term(
            2 * (n as i64) * (ell as i64) - (n as i64) * (n as i64 - 1) - 2 * (label.sum() as i64),
            1,
        );
    }
    out
}

/// Gram matrix of the bottom cell module: entry `(w,u)` is the cellular
/// coordinate of `y_λmin·ψ_w·ψ_{u⁻¹}·y_λmin` at index `(λmin, 1, 1)`, with
/// rows and columns in weak-order enumeration. Expected to be the
/// antidiagonal-style pattern `(−1)^{n(n−1)/2}·[w·u⁻¹ = w₀]`, hence
/// invertible.
pub fn specht_gram(basis: &CellularBasis) -> Matrix {
    let ctx = basis.ctx();
    let (ell, n) = (ctx.ell(), ctx.n());
    let label = label_min(ell, n);
    let y = y_lambda_affine(ell, &label);
    let unit = basis
        .position(&CellIndex {
            label: label.clone(),
            w: Permutation::identity(n),
            u: Permutation::identity(n),
        })
        .expect("bottom cell index exists");
    let perms = wf_enumeration(n);
    let mut rows = Vec::with_capacity(perms.len());
    for w in &perms {
        let left = &y * &AffineElement::psi_of(w.clone());
        let mut row = Vec::with_capacity(perms.len());
        for u in &perms {
            let prod = &(&left * &AffineElement::psi_of(u.inverse())) * &y;
            row.push(basis.coords(&ctx.reduce(&prod))[unit].clone());
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank;
    use crate::scalar::{int, one, sign};

    #[test]
    fn label_order_and_enumeration() {
        let labels: Vec<Vec<usize>> = p0_enumerate(2, 2).iter().map(|l| l.ks().to_vec()).collect();
        assert_eq!(labels, vec![vec![1, 2]]);

        let labels: Vec<Vec<usize>> = p0_enumerate(3, 2).iter().map(|l| l.ks().to_vec()).collect();
        assert_eq!(labels, vec![vec![2, 3], vec![1, 3], vec![1, 2]]);

        let labels: Vec<Vec<usize>> = p0_enumerate(4, 2).iter().map(|l| l.ks().to_vec()).collect();
        assert_eq!(
            labels,
            vec![
                vec![3, 4],
                vec![2, 4],
                vec![1, 4],
                vec![2, 3],
                vec![1, 3],
                vec![1, 2]
            ]
        );

        for (ell, n) in [(3usize, 2usize), (4, 2), (3, 3), (4, 3), (5, 3)] {
            let labels = p0_enumerate(ell, n);
            assert_eq!(labels.first().unwrap(), &label_min(ell, n));
            assert_eq!(labels.last().unwrap(), &label_max(n));
            // The cell order refines the entrywise order: smaller tuples
            // sit higher.
            for a in &labels {
                for b in &labels {
                    let dominates = a.ks().iter().zip(b.ks()).all(|(x, y)| x <= y) && a != b;
                    if dominates {
                        assert_eq!(a.cell_cmp(b), Ordering::Greater, "{a:?} vs {b:?}");
                    }
                }
            }
        }

        assert!(CellLabel::new(3, 2, vec![2, 2]).is_err());
        assert!(CellLabel::new(3, 2, vec![0, 1]).is_err());
        assert!(CellLabel::new(3, 2, vec![1, 4]).is_err());
        assert!(CellLabel::new(3, 2, vec![1]).is_err());
    }

    #[test]
    fn y_lambda_examples() {
        let ctx = CycContext::new(3, 2);
        let label = CellLabel::new(3, 2, vec![1, 3]).unwrap();
        assert_eq!(
            y_lambda(&ctx, &label),
            ctx.reduce(&AffineElement::y_monomial(vec![2, 0]))
        );
        for (ell, n) in [(3usize, 3usize), (4, 3)] {
            let ctx = CycContext::new(ell, n);
            let min_exps: Vec<u32> = (0..n).map(|i| (n - 1 - i) as u32).collect();
            assert_eq!(
                y_lambda(&ctx, &label_min(ell, n)),
                ctx.reduce(&AffineElement::y_monomial(min_exps))
            );
            let max_exps: Vec<u32> = (1..=n).map(|i| (ell - i) as u32).collect();
            assert_eq!(
                y_lambda(&ctx, &label_max(n)),
                ctx.reduce(&AffineElement::y_monomial(max_exps))
            );
        }
    }

    #[test]
    fn cell_element_examples_and_degrees() {
        let ctx = CycContext::new(2, 2);
        let idx = CellIndex {
            label: label_min(2, 2),
            w: Permutation::identity(2),
            u: Permutation::identity(2),
        };
        assert_eq!(cell_element(&ctx, &idx), ctx.generator_y(1));

        let ctx = CycContext::new(3, 2);
        let idx = CellIndex {
            label: label_max(2),
            w: Permutation::longest_element(2),
            u: Permutation::identity(2),
        };
        let direct = ctx.reduce(
            &(&AffineElement::generator_psi(2, 1) * &AffineElement::y_monomial(vec![2, 1])),
        );
        assert_eq!(cell_element(&ctx, &idx), direct);

        // Degree agreement across every cell index.
        for (ell, n) in [(3usize, 2usize), (3, 3)] {
            let ctx = CycContext::new(ell, n);
            let basis = CellularBasis::new(&ctx).unwrap();
            for (i, idx) in basis.indices().iter().enumerate() {
                assert_eq!(
                    basis.element(i).homogeneous_degree(),
                    Some(cell_degree(ell, idx)),
                    "degree mismatch at {idx:?}"
                );
            }
        }
    }

    #[test]
    fn change_of_basis_is_invertible() {
        for (ell, n) in [(2usize, 2usize), (3, 2), (3, 3)] {
            let ctx = CycContext::new(ell, n);
            let basis = CellularBasis::new(&ctx).unwrap();
            assert_eq!(basis.indices().len(), ctx.dim());

            // Round trips: unit coordinates and reconstruction.
            for i in [0, ctx.dim() / 2, ctx.dim() - 1] {
                let coords = basis.coords(basis.element(i));
                for (j, c) in coords.iter().enumerate() {
                    assert_eq!(c, &if i == j { one() } else { int(0) });
                }
            }
            let one_coords = basis.coords(&ctx.one());
            assert_eq!(basis.from_coords(&one_coords), ctx.one());
            assert!(basis.coords_sparse(&ctx.zero()).is_empty());
        }
    }

    #[test]
    fn graded_dim_of_algebra_matches_monomial_count() {
        for (ell, n) in [(2usize, 2usize), (3, 2), (3, 3)] {
            let ctx = CycContext::new(ell, n);
            let basis = CellularBasis::new(&ctx).unwrap();
            let mut from_monomials = LaurentPoly::new();
            for m in ctx.basis() {
                from_monomials.add_term(m.degree(), 1);
            }
            assert_eq!(basis.graded_dim_algebra(), from_monomials);
        }
    }

    #[test]
    fn truncation_is_supported_strictly_above() {
        let ctx = CycContext::new(3, 2);
        let basis = CellularBasis::new(&ctx).unwrap();
        let labels = p0_enumerate(3, 2);

        // y_μ·y_r lands strictly above μ, for every μ below the top.
        for mu in &labels {
            for r in 1..=2 {
                let x = &y_lambda(&ctx, mu) * &ctx.generator_y(r);
                if x.is_zero() {
                    continue;
                }
                assert_eq!(
                    basis.truncate_above(&x, mu),
                    x,
                    "y_mu·y_{r} not above μ={mu:?}"
                );
            }
        }

        // Nothing sits above the maximal label.
        let x = basis.element(5).clone();
        assert!(basis.truncate_above(&x, &label_max(2)).is_zero());

        // A bottom cell has no component above the bottom label.
        let idx = CellIndex {
            label: label_min(3, 2),
            w: Permutation::longest_element(2),
            u: Permutation::identity(2),
        };
        assert!(basis
            .truncate_above(&cell_element(&ctx, &idx), &label_min(3, 2))
            .is_zero());

        // The span of cells above μ is a two-sided ideal: a·x·b stays
        // above μ for monomial a, b and x already above μ.
        let mu = &labels[1];
        for i in 0..ctx.dim() {
            let x = basis.truncate_above(basis.element(i), mu);
            if x.is_zero() {
                continue;
            }
            for j in [0usize, 3, 7, 11] {
                let a = ctx.basis_element(j);
                let product = &(&a * &x) * &ctx.basis_element(ctx.dim() - 1 - j);
                assert_eq!(
                    basis.truncate_above(&product, mu),
                    product,
                    "ideal escape at i={i}, j={j}"
                );
            }
        }
    }

    #[test]
    fn tableau_degrees() {
        // ℓ=2, n=2, minimal label (1,2): identity assignment has degree
        // +1, the swap −1.
        let label = label_min(2, 2);
        assert_eq!(
            tableau_degree(2, &label, &Tableau { values: vec![1, 2] }),
            1
        );
        assert_eq!(
            tableau_degree(2, &label, &Tableau { values: vec![2, 1] }),
            -1
        );
        // n=1: degree is ℓ−k₁ for the unique tableau.
        for ell in 2..=4 {
            for k in 1..=ell {
                let label = CellLabel::new(ell, 1, vec![k]).unwrap();
                assert_eq!(
                    tableau_degree(ell, &label, &Tableau { values: vec![1] }),
                    (ell - k) as i64
                );
            }
        }
    }

    #[test]
    fn graded_dimension_formulas() {
        // ℓ=2, n=2: dim_q D₀ = q + q⁻¹.
        let d0 = graded_dim_d0(2, 2);
        let mut expect = LaurentPoly::new();
        expect.add_term(1, 1);
        expect.add_term(-1, 1);
        assert_eq!(d0, expect);

        fn choose(n: i64, k: i64) -> i64 {
            (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
        }
        for (ell, n) in [(2usize, 2usize), (3, 2), (4, 2), (3, 3), (4, 3)] {
            let fact: i64 = (1..=n as i64).product();
            let c = choose(ell as i64, n as i64);
            assert_eq!(graded_dim_d0(ell, n).eval_at_one(), fact);
            assert_eq!(graded_dim_p0(ell, n).eval_at_one(), c * fact);
            assert_eq!(graded_cartan(ell, n).eval_at_one(), c);
            for label in p0_enumerate(ell, n) {
                assert_eq!(graded_decomp(ell, n, &label).eval_at_one(), 1);
            }
        }
    }

    #[test]
    fn laurent_poly_display() {
        let mut p = LaurentPoly::new();
        p.add_term(-1, 1);
        p.add_term(0, 2);
        p.add_term(3, -1);
        assert_eq!(p.to_string(), "q^-1 + 2 - q^3");
        assert_eq!(LaurentPoly::new().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(1, 1).to_string(), "q");
    }

    #[test]
    fn specht_gram_pattern() {
        // n=2: [[0,−1],[−1,0]] with rows and columns ordered (1, s₁).
        let ctx = CycContext::new(2, 2);
        let basis = CellularBasis::new(&ctx).unwrap();
        let g = specht_gram(&basis);
        assert_eq!(g.at(0, 0), &int(0));
        assert_eq!(g.at(0, 1), &int(-1));
        assert_eq!(g.at(1, 0), &int(-1));
        assert_eq!(g.at(1, 1), &int(0));

        // n=1: [1].
        let ctx = CycContext::new(3, 1);
        let basis = CellularBasis::new(&ctx).unwrap();
        let g = specht_gram(&basis);
        assert_eq!(g.nrows(), 1);
        assert_eq!(g.at(0, 0), &one());

        // General pattern and invertibility.
        for (ell, n) in [(3usize, 2usize), (3, 3)] {
            let ctx = CycContext::new(ell, n);
            let basis = CellularBasis::new(&ctx).unwrap();
            let g = specht_gram(&basis);
            let perms = wf_enumeration(n);
            let w0 = Permutation::longest_element(n);
            for (i, w) in perms.iter().enumerate() {
                for (j, u) in perms.iter().enumerate() {
                    let expected = if w.compose(&u.inverse()) == w0 {
                        sign(n * (n - 1) / 2)
                    } else {
                        int(0)
                    };
                    assert_eq!(g.at(i, j), &expected, "entry ({i},{j}) at ({ell},{n})");
                }
            }
            assert_eq!(rank(&g), perms.len());
        }
    }
}
