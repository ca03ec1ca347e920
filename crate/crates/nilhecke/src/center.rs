//! The center of `H(ℓ,n)`, its basis of monomial symmetric polynomials,
//! the idempotent families, and the matrix-algebra structure
//! `H(ℓ,n) ≅ M_{n!}(Z)`.
//!
//! For a cell label `μ = (k_1,…,k_n)` the central element `z_μ` is the
//! monomial symmetric polynomial with exponent tuple `e_i = ℓ−k_i−(n−i)`,
//! realized as the sum over all distinct rearrangements of that tuple
//! (equivalent to summing over coset representatives, because the
//! stabilizer of the tuple is exactly its symmetry group). These `C(ℓ,n)`
//! elements form a basis of the center, which is independently
//! cross-checked by a brute-force centralizer computation.
//!
//! Matrix units are built from the staircase monomial
//! `Y = y_1^{n−1}y_2^{n−2}⋯y_{n−1}`: the closed-form family
//! `F_{z₁,z₂} = (−1)^{n(n−1)/2}·ψ^{λmin}_{w₀z₁,z₂}` works when `ℓ = n`;
//! the sandwich family `F′_{z₁,z₂} = ψ_{(w₀z₁)⁻¹}·Y·ψ_{w₀}·Y·ψ_{z₂}`
//! satisfies one-sided relations for any `ℓ ≥ n`; and the inductively
//! corrected family `f_{w_i,w_j}` is a complete set of matrix units,
//! verified exhaustively at construction time.

use crate::affine::AffineElement;
use crate::cellular::{
    cell_element, label_min, p0_enumerate, y_lambda, CellIndex, CellLabel, CellularBasis,
};
use crate::cyclotomic::{CycContext, CycElement};
use crate::linalg::{self, Matrix, Solver};
use crate::perm::{distinct_rearrangements, wf_enumeration, Permutation};
use crate::scalar::{sign, Scalar};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::sync::Arc;

/// Exponents of the staircase monomial `Y = y_1^{n−1}y_2^{n−2}⋯y_{n−1}`.
fn staircase_exps(n: usize) -> Vec<u32> {
    (0..n).map(|i| (n - 1 - i) as u32).collect()
}

/// The staircase monomial as an affine element.
fn staircase_affine(n: usize) -> AffineElement {
    AffineElement::y_monomial(staircase_exps(n))
}

/// The generators `ψ_1,…,ψ_{n−1}, y_1,…,y_n` as elements of the quotient.
pub fn algebra_generators(ctx: &Arc<CycContext>) -> Vec<CycElement> {
    let n = ctx.n();
    let mut gens = Vec::with_capacity(2 * n - 1);
    for r in 1..n {
        gens.push(ctx.generator_psi(r));
    }
    for s in 1..=n {
        gens.push(ctx.generator_y(s));
    }
    gens
}

/// The central basis element for `μ`: the monomial symmetric polynomial
/// with exponent tuple `e_i = ℓ−k_i−(n−i)`, homogeneous of degree
/// `2ℓn − n(n−1) − 2Σk_i`.
pub fn z_mu(ctx: &Arc<CycContext>, label: &CellLabel) -> CycElement {
    let (ell, n) = (ctx.ell(), ctx.n());
    let exps: Vec<u32> = label
        .ks()
        .iter()
        .enumerate()
        .map(|(i, &k)| (ell - k - (n - (i + 1))) as u32)
        .collect();
    let mut out = AffineElement::zero(n);
    for arrangement in distinct_rearrangements(&exps) {
        out = &out + &AffineElement::y_monomial(arrangement);
    }
    ctx.reduce(&out)
}

/// Coordinate vectors of a basis of the centralizer of the generators:
/// the kernel of the stacked commutator matrices. This is the
/// brute-force oracle for the center.
pub fn centralizer_basis(ctx: &Arc<CycContext>) -> Vec<Vec<Scalar>> {
    let dim = ctx.dim();
    let gens = algebra_generators(ctx);
    let mut stacked: Option<Matrix> = None;
    for g in &gens {
        let cols: Vec<Vec<Scalar>> = (0..dim)
            .map(|j| {
                let b = ctx.basis_element(j);
                (&(g * &b) - &(&b * g)).coords()
            })
            .collect();
        let m = Matrix::from_columns(&cols);
        stacked = Some(match stacked {
            None => m,
            Some(s) => s.vstack(&m),
        });
    }
    match stacked {
        None => vec![],
        Some(s) => linalg::kernel_basis(&s),
    }
}

/// A central element together with its coordinates in the `z_μ` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterElement {
    element: CycElement,
    coords: Vec<Scalar>,
}

impl CenterElement {
    pub fn element(&self) -> &CycElement {
        &self.element
    }

    /// Coordinates over the labels in ascending cell order.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }
}

/// The frozen basis `{z_μ}` of the center, with a solver for expanding
/// arbitrary central elements in it.
pub struct CenterBasis {
    ctx: Arc<CycContext>,
    labels: Vec<CellLabel>,
    elements: Vec<CycElement>,
    solver: Solver,
}

impl CenterBasis {
    /// Build all `z_μ` (labels ascending in the cell order) and the
    /// expansion solver. Fails with [`crate::Error::SingularBasis`] if
    /// they are linearly dependent (they must not be).
    pub fn new(ctx: &Arc<CycContext>) -> crate::Result<Self> {
        let labels = if ctx.ell() >= ctx.n() {
            p0_enumerate(ctx.ell(), ctx.n())
        } else {
            vec![]
        };
        let elements: Vec<CycElement> = labels.iter().map(|l| z_mu(ctx, l)).collect();
        let columns: Vec<Vec<Scalar>> = elements.iter().map(|e| e.coords()).collect();
        let solver = Solver::new(&Matrix::from_columns(&columns));
        if solver.rank() != labels.len() {
            return Err(crate::Error::SingularBasis(format!(
                "central elements for (ℓ,n)=({},{}) have rank {} over {} labels",
                ctx.ell(),
                ctx.n(),
                solver.rank(),
                labels.len()
            )));
        }
        Ok(CenterBasis {
            ctx: Arc::clone(ctx),
            labels,
            elements,
            solver,
        })
    }

    pub fn ctx(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Labels in ascending cell order (minimal first, maximal last).
    pub fn labels(&self) -> &[CellLabel] {
        &self.labels
    }

    pub fn z(&self, i: usize) -> &CycElement {
        &self.elements[i]
    }

    /// Expand `x` over the `z_μ`; errors if `x` is outside their span.
    pub fn coords(&self, x: &CycElement) -> crate::Result<Vec<Scalar>> {
        self.solver.solve_unique(&x.coords())
    }

    pub fn center_element(&self, x: &CycElement) -> crate::Result<CenterElement> {
        Ok(CenterElement {
            element: x.clone(),
            coords: self.coords(x)?,
        })
    }

    pub fn from_coords(&self, coords: &[Scalar]) -> CenterElement {
        assert_eq!(coords.len(), self.labels.len());
        let mut element = self.ctx.zero();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                element = &element + &self.elements[i].scale(c);
            }
        }
        CenterElement {
            element,
            coords: coords.to_vec(),
        }
    }
}

/// `b_μ = ψ_{w₀}·y_μ·ψ_{w₀}·Y`, reduced.
pub fn b_mu(ctx: &Arc<CycContext>, label: &CellLabel) -> CycElement {
    let (ell, n) = (ctx.ell(), ctx.n());
    let w0 = AffineElement::psi_of(Permutation::longest_element(n));
    let y_mu_exps: Vec<u32> = label.ks().iter().map(|&k| (ell - k) as u32).collect();
    let prod = &(&(&w0 * &AffineElement::y_monomial(y_mu_exps)) * &w0) * &staircase_affine(n);
    ctx.reduce(&prod)
}

/// Closed-form matrix units for `ℓ = n`:
/// `F_{z₁,z₂} = (−1)^{n(n−1)/2}·ψ^{λmin}_{w₀z₁,z₂}`.
pub fn f_ell_eq_n(
    ctx: &Arc<CycContext>,
    z1: &Permutation,
    z2: &Permutation,
) -> crate::Result<CycElement> {
    let n = ctx.n();
    if ctx.ell() != n {
        return Err(crate::Error::InvalidElement(format!(
            "closed-form matrix units require ℓ = n, got ({},{})",
            ctx.ell(),
            n
        )));
    }
    let idx = CellIndex {
        label: label_min(ctx.ell(), n),
        w: Permutation::longest_element(n).compose(z1),
        u: z2.clone(),
    };
    Ok(cell_element(ctx, &idx).scale(&sign(n * (n - 1) / 2)))
}

/// The sandwich family `F′_{z₁,z₂} = ψ_{(w₀z₁)⁻¹}·Y·ψ_{w₀}·Y·ψ_{z₂}`,
/// homogeneous of degree `2ℓ(z₁) − 2ℓ(z₂)`.
pub fn f_prime(ctx: &Arc<CycContext>, z1: &Permutation, z2: &Permutation) -> CycElement {
    let n = ctx.n();
    let w0 = Permutation::longest_element(n);
    let left = AffineElement::psi_of(w0.compose(z1).inverse());
    let mid = &(&staircase_affine(n) * &AffineElement::psi_of(w0)) * &staircase_affine(n);
    ctx.reduce(&(&(&left * &mid) * &AffineElement::psi_of(z2.clone())))
}

/// A complete family of matrix units `f_{w_i,w_j}` over the weak-order
/// enumeration, satisfying `f_{ij}f_{kl} = δ_{jk}f_{il}` and
/// `Σ_i f_{ii} = 1`, each homogeneous of degree `2ℓ(w_i) − 2ℓ(w_j)`.
pub struct MatrixUnitFamily {
    ctx: Arc<CycContext>,
    perms: Vec<Permutation>,
    units: Vec<Vec<CycElement>>,
}

/// Build the matrix-unit family by the triangular correction
/// `f_{w_i,w_j} = F′_{w_i,w_j} − Σ_{k<i} f_{w_k,w_k}·F′_{w_i,w_j}`
/// and verify every defining relation before returning it.
pub fn f_units(ctx: &Arc<CycContext>) -> crate::Result<MatrixUnitFamily> {
    let perms = wf_enumeration(ctx.n());
    let m = perms.len();
    let mut units: Vec<Vec<CycElement>> = vec![vec![ctx.zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            let base = f_prime(ctx, &perms[i], &perms[j]);
            let mut u = base.clone();
            for k in 0..i {
                u = &u - &(&units[k][k] * &base);
            }
            units[i][j] = u;
        }
    }
    let family = MatrixUnitFamily {
        ctx: Arc::clone(ctx),
        perms,
        units,
    };
    family.verify()?;
    Ok(family)
}

impl MatrixUnitFamily {
    pub fn ctx(&self) -> &Arc<CycContext> {
        &self.ctx
    }

    /// Number of rows/columns, `n!`.
    pub fn size(&self) -> usize {
        self.perms.len()
    }

    /// The weak-order enumeration indexing rows and columns.
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn unit(&self, i: usize, j: usize) -> &CycElement {
        &self.units[i][j]
    }

    /// Check every matrix-unit relation, the unit decomposition, and
    /// homogeneity. Any failure is reported as
    /// [`crate::Error::VerificationFailure`].
    fn verify(&self) -> crate::Result<()> {
        let m = self.size();
        let mut total = self.ctx.zero();
        for i in 0..m {
            total = &total + &self.units[i][i];
        }
        if total != self.ctx.one() {
            return Err(crate::Error::VerificationFailure(
                "matrix units do not sum to 1".into(),
            ));
        }
        for (i, row) in self.units.iter().enumerate() {
            for (j, u) in row.iter().enumerate() {
                let expected =
                    2 * (self.perms[i].length() as i64) - 2 * (self.perms[j].length() as i64);
                if !u.is_zero() && u.homogeneous_degree() != Some(expected) {
                    return Err(crate::Error::VerificationFailure(format!(
                        "matrix unit ({i},{j}) is not homogeneous of degree {expected}"
                    )));
                }
            }
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let prod = &self.units[i][j] * &self.units[k][l];
                        let expected = if j == k {
                            self.units[i][l].clone()
                        } else {
                            self.ctx.zero()
                        };
                        if prod != expected {
                            return Err(crate::Error::VerificationFailure(format!(
                                "matrix-unit relation fails at ({i},{j})·({k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The isomorphism `M_{n!}(Z) → H(ℓ,n)`: `Σ E_{ij}⊗z_{ij} ↦ Σ f_{ij}·z_{ij}`.
pub fn eta(units: &MatrixUnitFamily, entries: &[Vec<CenterElement>]) -> CycElement {
    let m = units.size();
    assert_eq!(entries.len(), m, "entry matrix must be n!×n!");
    let mut out = units.ctx().zero();
    for (i, row) in entries.iter().enumerate() {
        assert_eq!(row.len(), m, "entry matrix must be n!×n!");
        for (j, z) in row.iter().enumerate() {
            out = &out + &(units.unit(i, j) * z.element());
        }
    }
    out
}

/// The inverse isomorphism: recover the center-valued matrix of `x` from
/// `f_{w_j,w_i}·x·f_{w_j,w_j} = f_{w_j,w_j}·z_{ij}`, solving each entry in
/// the `z_μ` basis through the faithful action on `f_{jj}·H`.
pub fn eta_inverse(
    units: &MatrixUnitFamily,
    center: &CenterBasis,
    x: &CycElement,
) -> crate::Result<Vec<Vec<CenterElement>>> {
    let m = units.size();
    let mut solvers = Vec::with_capacity(m);
    for j in 0..m {
        let cols: Vec<Vec<Scalar>> = (0..center.dim())
            .map(|nu| (units.unit(j, j) * center.z(nu)).coords())
            .collect();
        solvers.push(Solver::new(&Matrix::from_columns(&cols)));
    }
    let mut out: Vec<Vec<CenterElement>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            let target = &(units.unit(j, i) * x) * units.unit(j, j);
            let coords = solvers[j].solve_unique(&target.coords())?;
            row.push(center.from_coords(&coords));
        }
        out.push(row);
    }
    Ok(out)
}

/// The scalar `c_μ` with `y_μ − c_μ·Y·z_μ` supported strictly above `μ`:
/// solved at the cellular coordinate `(μ,1,1)` and then verified on every
/// non-higher coordinate. [`crate::Error::NotFound`] if no scalar works.
pub fn c_mu(basis: &CellularBasis, label: &CellLabel) -> crate::Result<Scalar> {
    let ctx = basis.ctx();
    let n = ctx.n();
    let idx = CellIndex {
        label: label.clone(),
        w: Permutation::identity(n),
        u: Permutation::identity(n),
    };
    let unit_pos = basis
        .position(&idx)
        .expect("every label has a (1,1) cell index");
    let y_mu = cell_element(ctx, &idx);
    let candidate = &y_lambda(ctx, &label_min(ctx.ell(), n)) * &z_mu(ctx, label);
    let pivot = basis.coords(&candidate)[unit_pos].clone();
    if pivot.is_zero() {
        return Err(crate::Error::NotFound(format!(
            "Y·z_μ has no (μ,1,1) component for μ = {label:?}"
        )));
    }
    let c = Scalar::one() / pivot;
    let diff = &y_mu - &candidate.scale(&c);
    for (idx, coeff) in basis.coords_sparse(&diff) {
        if idx.label.cell_cmp(label) != Ordering::Greater && !coeff.is_zero() {
            return Err(crate::Error::NotFound(format!(
                "y_μ − c·Y·z_μ has a non-higher cellular component at {idx:?} for μ = {label:?}"
            )));
        }
    }
    Ok(c)
}
