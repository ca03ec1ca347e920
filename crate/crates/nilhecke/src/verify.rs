//! Verification suites: executable checks of the library's structural claims.
//!
//! Every suite bundles the checks for one family of statements — basis size
//! and change of basis, rewriting soundness, matrix-unit relations, center
//! structure, symmetrizing forms, the recursive trace — over a grid of
//! `(ℓ,n)` contexts, and returns a report listing each statement with a
//! pass/fail verdict and supporting detail. The CLI `verify` command and the
//! acceptance test are both thin wrappers around [`run_suite`].
//!
//! Contexts fan out over the rayon worker pool; per-context results are
//! collected back in grid order, so reports are byte-identical across runs
//! regardless of scheduling.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::AffineElement;
use crate::cellular::{
    graded_cartan, graded_dim_d0, graded_dim_p0, label_max, p0_enumerate, specht_gram,
    CellularBasis, LaurentPoly,
};
use crate::center::{
    algebra_generators, c_mu, centralizer_basis, eta, eta_inverse, f_ell_eq_n, f_units, z_mu,
    CenterBasis,
};
use crate::cyclotomic::{compositions, expected_dimension, CycContext, CycElement};
use crate::linalg::{self, Matrix};
use crate::perm::{all_permutations, wf_enumeration, Permutation};
use crate::scalar::{format_scalar, frac, sign, Scalar};
use crate::traces::{lambda0, tr_hat, z0, CellularTrace, TraceTower};

/// Outcome of one atomic check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// The statement being checked, in words.
    pub statement: String,
    /// The context the check ran in, e.g. `"(3,2)"`.
    pub context: String,
    pub passed: bool,
    /// Counterexample data on failure; a short note otherwise.
    pub detail: String,
}

/// All checks of one suite, in deterministic order.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Names of all suites, in canonical order.
pub const SUITE_NAMES: &[&str] = &[
    "basis-dimension",
    "rewriting",
    "longest-word-identity",
    "specht-form",
    "graded-dimensions",
    "matrix-units",
    "center",
    "matrix-iso",
    "symmetrizing-forms",
    "trace-recursion",
];

/// The desk-scale grid every suite is expected to pass on (except for the
/// documented center-degree collision at (4,2); see the `center` suite).
pub fn default_grid() -> Vec<(usize, usize)> {
    vec![(2, 2), (3, 2), (4, 2), (3, 3), (4, 3)]
}

/// The default grid plus the rank-one sanity contexts.
pub fn extended_grid() -> Vec<(usize, usize)> {
    let mut g = default_grid();
    g.extend([(2, 1), (3, 1)]);
    g
}

fn ctx_name(ell: usize, n: usize) -> String {
    format!("({ell},{n})")
}

fn check(
    statement: impl Into<String>,
    context: &str,
    passed: bool,
    detail: impl Into<String>,
) -> Check {
    Check {
        statement: statement.into(),
        context: context.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Whether a failing check is one of the two documented false claims, which
/// the suites verify as stated and report honestly: the right-ideal
/// membership of the unmirrored longest-word element (impossible in every
/// context — the ideal has no constant terms), and per-degree uniqueness of
/// the central basis (false exactly at (4,2), where two labels share Σk = 5).
pub fn is_documented_failure(suite: &str, check: &Check) -> bool {
    (suite == "longest-word-identity"
        && check.statement.starts_with("ψ_{w₀}")
        && check.statement.contains("Σᵢ H·yᵢ"))
        || (suite == "center"
            && check.statement == "each homogeneous degree supports exactly one z_μ"
            && check.context == "(4,2)")
}

/// Run one named suite over `grid`. Unknown names give
/// [`crate::Error::NotFound`].
pub fn run_suite(name: &str, grid: &[(usize, usize)]) -> crate::Result<SuiteReport> {
    let checks = match name {
        "basis-dimension" => suite_basis_dimension(grid),
        "rewriting" => suite_rewriting(grid),
        "longest-word-identity" => suite_longest_word(grid),
        "specht-form" => suite_specht_form(grid),
        "graded-dimensions" => suite_graded_dimensions(grid),
        "matrix-units" => suite_matrix_units(grid),
        "center" => suite_center(grid),
        "matrix-iso" => suite_matrix_iso(grid),
        "symmetrizing-forms" => suite_symmetrizing_forms(grid),
        "trace-recursion" => suite_trace_recursion(grid),
        _ => {
            return Err(crate::Error::NotFound(format!(
                "unknown suite {name:?}; known suites: {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

/// Run every suite over `grid`, in canonical order.
pub fn run_all(grid: &[(usize, usize)]) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, grid).expect("built-in suite names are known"))
        .collect()
}

/// Map a per-context closure over the grid on the worker pool, preserving
/// grid order in the flattened result.
fn fan_out<F>(grid: &[(usize, usize)], f: F) -> Vec<Check>
where
    F: Fn(usize, usize) -> Vec<Check> + Sync,
{
    grid.par_iter()
        .map(|&(ell, n)| f(ell, n))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

// ---------------------------------------------------------------------------
// Suite 1: basis and dimension.

fn suite_basis_dimension(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let expected = expected_dimension(ell, n);
        let mut out = vec![check(
            "monomial basis has C(ℓ,n)·(n!)² elements",
            &name,
            ctx.dim() as u128 == expected,
            format!("dim = {}, expected {}", ctx.dim(), expected),
        )];
        match CellularBasis::new(&ctx) {
            Ok(basis) => out.push(check(
                "cellular↔monomial change of basis is invertible",
                &name,
                true,
                format!("{} cell indices, full rank", basis.indices().len()),
            )),
            Err(e) => out.push(check(
                "cellular↔monomial change of basis is invertible",
                &name,
                false,
                e.to_string(),
            )),
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 2: rewriting soundness.

/// A reproducible pseudo-random affine element with exponents allowed to
/// exceed the cyclotomic bound, so reduction genuinely fires.
fn random_affine(rng: &mut ChaCha8Rng, ell: usize, n: usize) -> AffineElement {
    let perms = all_permutations(n);
    let mut acc = AffineElement::zero(n);
    for _ in 0..rng.gen_range(1..=4usize) {
        let w = perms[rng.gen_range(0..perms.len())].clone();
        let exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=ell as u32 + 1)).collect();
        let num = rng.gen_range(-9i64..=9);
        let den = rng.gen_range(1i64..=4);
        acc = &acc + &AffineElement::term(w, exps, frac(num, den));
    }
    acc
}

fn suite_rewriting(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let mut out = Vec::new();

        // Complete homogeneous symmetric polynomials h_{ℓ−s+1}(y₁,…,y_s)
        // vanish for every s ≤ n.
        let mut bad_s = Vec::new();
        for s in 1..=n {
            let mut h = AffineElement::zero(n);
            for comp in compositions((ell - s + 1) as u32, s) {
                let mut exps = vec![0u32; n];
                exps[..s].copy_from_slice(&comp);
                h = &h + &AffineElement::y_monomial(exps);
            }
            if !ctx.reduce(&h).is_zero() {
                bad_s.push(s);
            }
        }
        out.push(check(
            "h_{ℓ−s+1}(y₁,…,y_s) reduces to zero for every s ≤ n",
            &name,
            bad_s.is_empty(),
            if bad_s.is_empty() {
                format!("verified for s = 1..={n}")
            } else {
                format!("nonzero at s ∈ {bad_s:?}")
            },
        ));

        // Staircase monomials whose m-th exponent reaches ℓ−m+1 vanish.
        let mut bad_m = Vec::new();
        for m in 1..=n {
            let mut exps = vec![0u32; n];
            for j in 1..m {
                exps[j - 1] = (ell - j) as u32;
            }
            exps[m - 1] = (ell - m + 1) as u32;
            if !ctx.reduce(&AffineElement::y_monomial(exps)).is_zero() {
                bad_m.push(m);
            }
        }
        out.push(check(
            "staircase monomials ending in exponent ℓ−m+1 reduce to zero",
            &name,
            bad_m.is_empty(),
            if bad_m.is_empty() {
                format!("verified for m = 1..={n}")
            } else {
                format!("nonzero at m ∈ {bad_m:?}")
            },
        ));

        // Normal-form reduction is idempotent on random affine elements.
        let samples = 500usize;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 * ell as u64 + n as u64);
        let mut failures = 0usize;
        for _ in 0..samples {
            let a = random_affine(&mut rng, ell, n);
            let once = ctx.reduce(&a);
            if ctx.reduce(&once.lift()) != once {
                failures += 1;
            }
        }
        out.push(check(
            "reduction is idempotent: reduce∘reduce = reduce",
            &name,
            failures == 0,
            format!("{samples} seeded random elements, {failures} failures"),
        ));
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 3: longest-word commutator identity.

fn suite_longest_word(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        if n < 2 {
            return Vec::new();
        }
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let stair: Vec<u32> = (0..n).map(|j| (n - 1 - j) as u32).collect();
        let unit = ctx.one().scale(&sign(n * (n - 1) / 2));
        let x = ctx.reduce(
            &(&AffineElement::psi_of(Permutation::longest_element(n))
                * &AffineElement::y_monomial(stair.clone())),
        );
        let d = &x - &unit;
        // The mirrored product, with the polynomial part on the left.
        let mirrored = ctx.reduce(
            &(&AffineElement::y_monomial(stair)
                * &AffineElement::psi_of(Permutation::longest_element(n))),
        );
        let d_star = &mirrored - &unit;
        vec![
            check(
                "ψ_{w₀}·y₁^{n−1}⋯y_{n−1} − (−1)^{n(n−1)/2} lies in Σᵢ yᵢ·H",
                &name,
                ctx.in_left_y_ideal(&d),
                "membership solved in the left ideal span",
            ),
            // This membership is impossible: Σᵢ H·yᵢ is spanned by the
            // normal-form monomials with nonzero polynomial part, so no
            // element with a nonzero constant term belongs to it. The
            // element that does lie there is the mirrored product below.
            check(
                "ψ_{w₀}·y₁^{n−1}⋯y_{n−1} − (−1)^{n(n−1)/2} lies in Σᵢ H·yᵢ",
                &name,
                ctx.in_right_y_ideal(&d),
                format!(
                    "element has constant term {}, but every member of Σᵢ H·yᵢ has constant \
                     term 0; the mirrored product y₁^{{n−1}}⋯y_{{n−1}}·ψ_{{w₀}} is the one in \
                     this ideal",
                    format_scalar(&-sign(n * (n - 1) / 2))
                ),
            ),
            check(
                "y₁^{n−1}⋯y_{n−1}·ψ_{w₀} − (−1)^{n(n−1)/2} lies in Σᵢ H·yᵢ",
                &name,
                ctx.in_right_y_ideal(&d_star),
                "membership solved in the right ideal span",
            ),
        ]
    })
}

// ---------------------------------------------------------------------------
// Suite 4: the bilinear form on the bottom cell module.

fn suite_specht_form(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let basis = match CellularBasis::new(&ctx) {
            Ok(b) => b,
            Err(e) => {
                return vec![check(
                    "bottom-cell Gram matrix is computable",
                    &name,
                    false,
                    e.to_string(),
                )]
            }
        };
        let g = specht_gram(&basis);
        let perms = wf_enumeration(n);
        let w0 = Permutation::longest_element(n);
        let expected_sign = sign(n * (n - 1) / 2);
        let mut mismatches = Vec::new();
        for (i, w) in perms.iter().enumerate() {
            for (j, u) in perms.iter().enumerate() {
                let hit = w.compose(&u.inverse()) == w0
                    && w.length() + u.length() == n * (n - 1) / 2;
                let expected = if hit {
                    expected_sign.clone()
                } else {
                    Scalar::zero()
                };
                if g.at(i, j) != &expected {
                    mismatches.push((i, j));
                }
            }
        }
        let rank = linalg::rank(&g);
        vec![
            check(
                "Gram entry is (−1)^{n(n−1)/2} iff w·u⁻¹ = w₀ with lengths adding, else 0",
                &name,
                mismatches.is_empty(),
                if mismatches.is_empty() {
                    format!("all {} entries match", perms.len() * perms.len())
                } else {
                    format!("mismatched entries at {mismatches:?}")
                },
            ),
            check(
                "Gram matrix is invertible, so the bottom cell module is simple of dimension n!",
                &name,
                rank == perms.len(),
                format!("rank {} of {}", rank, perms.len()),
            ),
        ]
    })
}

// ---------------------------------------------------------------------------
// Suite 5: graded dimension formulas.

/// Graded dimension of the span of homogeneous elements: for each degree,
/// the rank of the coordinate matrix of that degree's slice.
pub fn graded_span_dims(elements: &[CycElement]) -> LaurentPoly {
    let mut by_degree: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    for e in elements {
        if e.is_zero() {
            continue;
        }
        let d = e
            .homogeneous_degree()
            .expect("span elements must be homogeneous");
        by_degree.entry(d).or_default().push(e.coords());
    }
    let mut out = LaurentPoly::new();
    for (d, vecs) in by_degree {
        out.add_term(d, linalg::rank(&Matrix::from_columns(&vecs)) as i64);
    }
    out
}

fn poly_str(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.terms()
        .map(|(d, c)| format!("{c}·q^{d}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn suite_graded_dimensions(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let factorial: i64 = (1..=n as i64).product();
        let d0 = graded_dim_d0(ell, n);
        let p0 = graded_dim_p0(ell, n);
        let mut out = vec![
            check(
                "graded dimension of the simple module evaluates to n! at q = 1",
                &name,
                d0.eval_at_one() == factorial,
                format!("D₀(1) = {}", d0.eval_at_one()),
            ),
            check(
                "graded dimension of the projective cover evaluates to C(ℓ,n)·n! at q = 1",
                &name,
                p0.eval_at_one() as u128 == expected_dimension(ell, n) / factorial as u128,
                format!("P₀(1) = {}", p0.eval_at_one()),
            ),
        ];

        let ctx = CycContext::new(ell, n);
        let units = match f_units(&ctx) {
            Ok(u) => u,
            Err(e) => {
                out.push(check(
                    "matrix units are available for corner computations",
                    &name,
                    false,
                    e.to_string(),
                ));
                return out;
            }
        };
        let f11 = units.unit(0, 0);

        let corner: Vec<CycElement> = (0..ctx.dim())
            .map(|i| &(f11 * &ctx.basis_element(i)) * f11)
            .collect();
        let corner_dims = graded_span_dims(&corner);
        let cartan = graded_cartan(ell, n);
        out.push(check(
            "graded dimension of the corner f₁₁·H·f₁₁ equals the graded Cartan entry",
            &name,
            corner_dims == cartan,
            format!(
                "dim_q(f₁₁Hf₁₁) = {}, Cartan = {}",
                poly_str(&corner_dims),
                poly_str(&cartan)
            ),
        ));

        let row: Vec<CycElement> = (0..ctx.dim())
            .map(|i| f11 * &ctx.basis_element(i))
            .collect();
        let row_dims = graded_span_dims(&row);
        let shift = (n * (n - 1) / 2) as i64;
        out.push(check(
            "graded dimension of the row f₁₁·H, shifted by q^{n(n−1)/2}, equals that of the projective cover",
            &name,
            row_dims.shifted(shift) == p0,
            format!(
                "derived shift q^{shift}; dim_q(f₁₁H) = {}",
                poly_str(&row_dims)
            ),
        ));
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 6: matrix-unit relations.

/// Check all (size)⁴ products of a square family against the δ-relations
/// and the sum of the diagonal against 1. Returns (failures, products).
fn delta_relations(
    ctx: &Arc<CycContext>,
    family: &dyn Fn(usize, usize) -> CycElement,
    size: usize,
) -> (Vec<String>, usize) {
    let mut failures = Vec::new();
    let mut products = 0usize;
    for i in 0..size {
        for j in 0..size {
            let fij = family(i, j);
            for k in 0..size {
                for l in 0..size {
                    let fkl = family(k, l);
                    let expected = if j == k {
                        family(i, l)
                    } else {
                        ctx.zero()
                    };
                    products += 1;
                    if &fij * &fkl != expected {
                        failures.push(format!("f[{i}{j}]·f[{k}{l}]"));
                    }
                }
            }
        }
    }
    let mut diag = ctx.zero();
    for i in 0..size {
        diag = &diag + &family(i, i);
    }
    if diag != ctx.one() {
        failures.push("Σᵢ f[ii] ≠ 1".to_string());
    }
    (failures, products)
}

fn suite_matrix_units(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let perms = wf_enumeration(n);
        let mut out = Vec::new();

        // Closed-form family, available only at ℓ = n.
        if ell == n {
            let family = |i: usize, j: usize| {
                f_ell_eq_n(&ctx, &perms[i], &perms[j]).expect("ℓ = n here")
            };
            let (failures, products) = delta_relations(&ctx, &family, perms.len());
            out.push(check(
                "closed-form family at ℓ = n satisfies all δ-relations and sums to 1",
                &name,
                failures.is_empty(),
                if failures.is_empty() {
                    format!("{products} products verified")
                } else {
                    format!("failed: {}", failures.join(", "))
                },
            ));
        }

        // Corrected family, every context.
        match f_units(&ctx) {
            Ok(units) => {
                let family = |i: usize, j: usize| units.unit(i, j).clone();
                let (failures, products) = delta_relations(&ctx, &family, units.size());
                out.push(check(
                    "corrected family satisfies all (n!)⁴ δ-relations and sums to 1",
                    &name,
                    failures.is_empty(),
                    if failures.is_empty() {
                        format!("{products} products verified")
                    } else {
                        format!("failed: {}", failures.join(", "))
                    },
                ));
            }
            Err(e) => out.push(check(
                "corrected family satisfies all (n!)⁴ δ-relations and sums to 1",
                &name,
                false,
                e.to_string(),
            )),
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 7: the center.

fn suite_center(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let labels = p0_enumerate(ell, n);
        let gens = algebra_generators(&ctx);
        let mut out = Vec::new();

        let mut noncommuting = Vec::new();
        for label in &labels {
            let z = z_mu(&ctx, label);
            if gens.iter().any(|g| &(&z * g) - &(g * &z) != ctx.zero()) {
                noncommuting.push(format!("{:?}", label.ks()));
            }
        }
        out.push(check(
            "every monomial symmetric polynomial z_μ commutes with all generators",
            &name,
            noncommuting.is_empty(),
            if noncommuting.is_empty() {
                format!("{} central elements × {} generators", labels.len(), gens.len())
            } else {
                format!("non-central at μ ∈ {}", noncommuting.join(", "))
            },
        ));

        let centralizer = centralizer_basis(&ctx);
        out.push(check(
            "the brute-force centralizer has dimension C(ℓ,n)",
            &name,
            centralizer.len() == labels.len(),
            format!(
                "centralizer dim = {}, C(ℓ,n) = {}",
                centralizer.len(),
                labels.len()
            ),
        ));

        // Span equality: stacking the z_μ coordinates onto the centralizer
        // basis (and vice versa) must not raise the rank.
        let z_coords: Vec<Vec<Scalar>> =
            labels.iter().map(|l| z_mu(&ctx, l).coords()).collect();
        let z_rank = linalg::rank(&Matrix::from_columns(&z_coords));
        let mut both = z_coords.clone();
        both.extend(centralizer.iter().cloned());
        let joint_rank = linalg::rank(&Matrix::from_columns(&both));
        out.push(check(
            "the z_μ span the centralizer",
            &name,
            z_rank == labels.len() && joint_rank == centralizer.len() && joint_rank == z_rank,
            format!(
                "rank(z) = {z_rank}, rank(centralizer) = {}, rank(union) = {joint_rank}",
                centralizer.len()
            ),
        ));

        // Degrees of the z_μ within one context are pairwise distinct. This
        // is false at (4,2), where Σk = 5 is achieved by two labels.
        let mut by_degree: BTreeMap<i64, Vec<String>> = BTreeMap::new();
        for label in &labels {
            let d = z_mu(&ctx, label)
                .homogeneous_degree()
                .expect("z_μ is homogeneous");
            by_degree.entry(d).or_default().push(format!("{:?}", label.ks()));
        }
        let collisions: Vec<String> = by_degree
            .iter()
            .filter(|(_, ls)| ls.len() > 1)
            .map(|(d, ls)| format!("degree {d}: {}", ls.join(" and ")))
            .collect();
        out.push(check(
            "each homogeneous degree supports exactly one z_μ",
            &name,
            collisions.is_empty(),
            if collisions.is_empty() {
                format!("{} distinct degrees", labels.len())
            } else {
                collisions.join("; ")
            },
        ));
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 8: the matrix-algebra isomorphism.

fn suite_matrix_iso(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let mut out = Vec::new();
        let units = match f_units(&ctx) {
            Ok(u) => u,
            Err(e) => {
                return vec![check(
                    "matrix units are available",
                    &name,
                    false,
                    e.to_string(),
                )]
            }
        };
        let center = match CenterBasis::new(&ctx) {
            Ok(c) => c,
            Err(e) => {
                return vec![check(
                    "center basis is available",
                    &name,
                    false,
                    e.to_string(),
                )]
            }
        };

        // Round-trip through the center-valued matrix picture on every
        // monomial basis element.
        let mut bad = Vec::new();
        for i in 0..ctx.dim() {
            let b = ctx.basis_element(i);
            match eta_inverse(&units, &center, &b) {
                Ok(entries) => {
                    if eta(&units, &entries) != b {
                        bad.push(format!("basis[{i}] (reassembly differs)"));
                    }
                }
                Err(e) => bad.push(format!("basis[{i}] ({e})")),
            }
        }
        out.push(check(
            "η⁻¹ then η is the identity on every monomial basis element",
            &name,
            bad.is_empty(),
            if bad.is_empty() {
                format!("{} elements round-tripped", ctx.dim())
            } else {
                format!("failed at {}", bad.join(", "))
            },
        ));

        // {f₁₁·z_μ·ψ_w} is a basis of the row f₁₁·H.
        let f11 = units.unit(0, 0);
        let labels = p0_enumerate(ell, n);
        let perms = wf_enumeration(n);
        let psi_ws: Vec<CycElement> = perms
            .iter()
            .map(|w| ctx.reduce(&AffineElement::psi_of(w.clone())))
            .collect();
        let candidate: Vec<Vec<Scalar>> = labels
            .iter()
            .flat_map(|label| {
                let fz = f11 * &z_mu(&ctx, label);
                psi_ws
                    .iter()
                    .map(|pw| (&fz * pw).coords())
                    .collect::<Vec<_>>()
            })
            .collect();
        let row: Vec<Vec<Scalar>> = (0..ctx.dim())
            .map(|i| (f11 * &ctx.basis_element(i)).coords())
            .collect();
        let expected = labels.len() * perms.len();
        let cand_rank = linalg::rank(&Matrix::from_columns(&candidate));
        let mut both = candidate.clone();
        both.extend(row.iter().cloned());
        let row_rank = linalg::rank(&Matrix::from_columns(&row));
        let joint_rank = linalg::rank(&Matrix::from_columns(&both));
        out.push(check(
            "{f₁₁·z_μ·ψ_w} is a basis of the row f₁₁·H",
            &name,
            cand_rank == expected && row_rank == expected && joint_rank == expected,
            format!(
                "candidate rank {cand_rank}, row rank {row_rank}, union rank {joint_rank}, expected {expected}"
            ),
        ));

        // The normalizing scalars c_μ all exist and are nonzero.
        match CellularBasis::new(&ctx) {
            Ok(cell_basis) => {
                let mut bad = Vec::new();
                for label in &labels {
                    match c_mu(&cell_basis, label) {
                        Ok(c) if !c.is_zero() => {}
                        Ok(_) => bad.push(format!("{:?} (zero)", label.ks())),
                        Err(e) => bad.push(format!("{:?} ({e})", label.ks())),
                    }
                }
                out.push(check(
                    "the scalar c_μ exists and is nonzero for every μ",
                    &name,
                    bad.is_empty(),
                    if bad.is_empty() {
                        format!("{} labels", labels.len())
                    } else {
                        format!("failed at {}", bad.join(", "))
                    },
                ));
            }
            Err(e) => out.push(check(
                "the scalar c_μ exists and is nonzero for every μ",
                &name,
                false,
                e.to_string(),
            )),
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 9: symmetrizing forms.

/// Contexts small enough for the all-pairs trace checks.
fn is_pairwise_context(ell: usize, n: usize) -> bool {
    matches!((ell, n), (2, 2) | (3, 2) | (3, 3))
}

fn suite_symmetrizing_forms(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let ctx = CycContext::new(ell, n);
        let mut out = Vec::new();
        let tr = match CellularTrace::new(&ctx) {
            Ok(t) => t,
            Err(e) => {
                return vec![check(
                    "the homogeneous trace functional of minimal degree is unique up to scale",
                    &name,
                    false,
                    e.to_string(),
                )]
            }
        };
        out.push(check(
            "the homogeneous trace functional of minimal degree is unique up to scale",
            &name,
            true,
            "commutator constraints leave a one-dimensional solution space",
        ));

        if is_pairwise_context(ell, n) {
            // Full symmetry: Tr(ab) = Tr(ba) for all basis pairs.
            let dim = ctx.dim();
            let mut asym = 0usize;
            for i in 0..dim {
                let bi = ctx.basis_element(i);
                for j in 0..dim {
                    let bj = ctx.basis_element(j);
                    if tr.eval(&(&bi * &bj)) != tr.eval(&(&bj * &bi)) {
                        asym += 1;
                    }
                }
            }
            out.push(check(
                "Tr(ab) = Tr(ba) on all basis pairs",
                &name,
                asym == 0,
                format!("{} pairs, {asym} violations", dim * dim),
            ));

            // Nondegeneracy: the Gram matrix Tr(bᵢ·bⱼ) has full rank.
            let rows: Vec<Vec<Scalar>> = (0..dim)
                .map(|i| {
                    let bi = ctx.basis_element(i);
                    (0..dim)
                        .map(|j| tr.eval(&(&bi * &ctx.basis_element(j))))
                        .collect()
                })
                .collect();
            let rank = linalg::rank(&Matrix::from_rows(rows));
            out.push(check(
                "the Gram matrix of Tr has full rank",
                &name,
                rank == dim,
                format!("rank {rank} of {dim}"),
            ));

            // The center-valued trace agrees with Tr up to the predicted
            // proportionality constant c_{λmax}·(−1)^{n(n−1)/2}.
            match (f_units(&ctx), CenterBasis::new(&ctx), CellularBasis::new(&ctx)) {
                (Ok(units), Ok(center), Ok(cell_basis)) => {
                    match c_mu(&cell_basis, &label_max(n)) {
                        Ok(c) => {
                            let factor = c * sign(n * (n - 1) / 2);
                            let mut bad = Vec::new();
                            for i in 0..dim {
                                let b = ctx.basis_element(i);
                                let lhs = match tr_hat(&units, &center, &b) {
                                    Ok(v) => v,
                                    Err(e) => {
                                        bad.push(format!("basis[{i}] ({e})"));
                                        continue;
                                    }
                                };
                                if lhs != &factor * &tr.eval(&b) {
                                    bad.push(format!("basis[{i}]"));
                                }
                            }
                            out.push(check(
                                "the center-valued trace equals c_{λmax}·(−1)^{n(n−1)/2}·Tr on a full basis",
                                &name,
                                bad.is_empty(),
                                if bad.is_empty() {
                                    format!(
                                        "{dim} elements, factor = {}",
                                        format_scalar(&factor)
                                    )
                                } else {
                                    format!("failed at {}", bad.join(", "))
                                },
                            ));
                        }
                        Err(e) => out.push(check(
                            "the center-valued trace equals c_{λmax}·(−1)^{n(n−1)/2}·Tr on a full basis",
                            &name,
                            false,
                            e.to_string(),
                        )),
                    }
                }
                _ => out.push(check(
                    "the center-valued trace equals c_{λmax}·(−1)^{n(n−1)/2}·Tr on a full basis",
                    &name,
                    false,
                    "matrix units or center basis unavailable".to_string(),
                )),
            }
        }
        out
    })
}

// ---------------------------------------------------------------------------
// Suite 10: the recursive trace.

fn suite_trace_recursion(grid: &[(usize, usize)]) -> Vec<Check> {
    fan_out(grid, |ell, n| {
        let name = ctx_name(ell, n);
        let tower = TraceTower::new(ell, n);
        let mut out = Vec::new();

        // One rung at a time: ε̂ sends the distinguished central element of
        // each rank to the one below.
        let mut bad = Vec::new();
        let lambdas: Vec<i64> = (1..=n).map(|r| lambda0(ell, r)).collect();
        for rank in (1..=n).rev() {
            let z_here = z0(tower.context(rank));
            let z_below = z0(tower.context(rank - 1));
            match tower.eps_hat(rank, &z_here) {
                Ok(img) if img == z_below => {}
                Ok(_) => bad.push(format!("rank {rank} (wrong image)")),
                Err(e) => bad.push(format!("rank {rank} ({e})")),
            }
        }
        out.push(check(
            "ε̂ maps the distinguished central element down the whole tower",
            &name,
            bad.is_empty(),
            if bad.is_empty() {
                format!("λ₀ per rank: {lambdas:?}")
            } else {
                format!("failed at {}", bad.join(", "))
            },
        ));

        // The recursive trace normalizes the distinguished element to 1.
        let z_top = z0(tower.context(n));
        match tower.tr_svv(&z_top) {
            Ok(v) => out.push(check(
                "the recursive trace sends the distinguished central element to 1",
                &name,
                v == sign(0),
                format!("value = {}", format_scalar(&v)),
            )),
            Err(e) => out.push(check(
                "the recursive trace sends the distinguished central element to 1",
                &name,
                false,
                e.to_string(),
            )),
        }

        // Every decomposition along the way is a unique solve: run the full
        // recursion on every monomial basis element and require no failures.
        let ctx = tower.context(n);
        let mut values = Vec::with_capacity(ctx.dim());
        let mut errors = Vec::new();
        for i in 0..ctx.dim() {
            match tower.tr_svv(&ctx.basis_element(i)) {
                Ok(v) => values.push(v),
                Err(e) => errors.push(format!("basis[{i}] ({e})")),
            }
        }
        out.push(check(
            "the recursive trace evaluates on the full monomial basis without ambiguity",
            &name,
            errors.is_empty(),
            if errors.is_empty() {
                format!("{} elements evaluated", ctx.dim())
            } else {
                format!("failed at {}", errors.join(", "))
            },
        ));

        // Against the direct construction, element by element.
        if is_pairwise_context(ell, n) && errors.is_empty() {
            match CellularTrace::new(&ctx) {
                Ok(tr) => {
                    let mut diffs = Vec::new();
                    for (i, v) in values.iter().enumerate() {
                        if *v != tr.eval(&ctx.basis_element(i)) {
                            diffs.push(i);
                        }
                    }
                    out.push(check(
                        "the recursive trace equals the cellular trace on the full monomial basis",
                        &name,
                        diffs.is_empty(),
                        if diffs.is_empty() {
                            format!("{} values agree", values.len())
                        } else {
                            format!("disagreement at basis indices {diffs:?}")
                        },
                    ));
                }
                Err(e) => out.push(check(
                    "the recursive trace equals the cellular trace on the full monomial basis",
                    &name,
                    false,
                    e.to_string(),
                )),
            }
        }
        out
    })
}
