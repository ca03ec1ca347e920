//! The affine nilHecke algebra on `n` strands, in ψ-left normal form.
//!
//! Elements are finite rational combinations of monomials `ψ_w·y^a` with
//! `w ∈ Sym_n` and `a ∈ ℕⁿ`. Multiplication straightens the right factor
//! into that normal form with the defining relations
//!
//! ```text
//! y_r·ψ_r = ψ_r·y_{r+1} − 1        y_{r+1}·ψ_r = ψ_r·y_r + 1
//! y_s·ψ_r = ψ_r·y_s                (s ∉ {r, r+1})
//! ψ_w·ψ_r = ψ_{w·s_r} if ℓ(w·s_r) = ℓ(w)+1, else 0
//! ```
//!
//! pushing the `y` letters of the left factor one at a time past each `ψ`
//! letter of the right factor's canonical reduced word. Every public value
//! is fully normalized; equality is coefficient-map equality.

use crate::perm::Permutation;
use crate::scalar::Scalar;
use itertools::Itertools;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A normal-form monomial `ψ_w·y^a`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub w: Permutation,
    pub exps: Vec<u32>,
}

impl Monomial {
    /// Degree under `deg ψ_r = −2`, `deg y_s = +2`.
    pub fn degree(&self) -> i64 {
        2 * self.exps.iter().map(|&e| e as i64).sum::<i64>() - 2 * self.w.length() as i64
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.w.length() > 0 {
            parts.push(format!("ψ{}", self.w));
        }
        if self.exps.iter().any(|&e| e > 0) {
            parts.push(format!(
                "y^({})",
                self.exps.iter().map(|e| e.to_string()).join(",")
            ));
        }
        if parts.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", parts.join("·"))
    }
}

/// An element of the affine nilHecke algebra; immutable, always normalized.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineElement {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}·ψ{:?}y^{:?}", m.w, m.exps))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeff = crate::scalar::format_scalar(c);
                let trivial = m.w.length() == 0 && m.exps.iter().all(|&e| e == 0);
                match (trivial, coeff.as_str()) {
                    (true, _) => coeff,
                    (false, "1") => format!("{m}"),
                    (false, "-1") => format!("-{m}"),
                    _ => format!("{coeff}·{m}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AffineElement {
    pub fn zero(n: usize) -> Self {
        AffineElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::term(
            Permutation::identity(n),
            vec![0; n],
            Scalar::from_integer(1.into()),
        )
    }

    /// Single monomial `coeff·ψ_w·y^exps`.
    pub fn term(w: Permutation, exps: Vec<u32>, coeff: Scalar) -> Self {
        let n = w.n();
        assert_eq!(exps.len(), n, "exponent vector has wrong rank");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(Monomial { w, exps }, coeff);
        }
        AffineElement { n, terms }
    }

    /// Generator `ψ_r`, `1 ≤ r < n`.
    pub fn generator_psi(n: usize, r: usize) -> Self {
        Self::term(
            Permutation::transposition(n, r),
            vec![0; n],
            Scalar::from_integer(1.into()),
        )
    }

    /// Generator `y_s`, `1 ≤ s ≤ n`.
    pub fn generator_y(n: usize, s: usize) -> Self {
        assert!(s >= 1 && s <= n, "generator y_{s} out of range for n={n}");
        let mut exps = vec![0; n];
        exps[s - 1] = 1;
        Self::term(
            Permutation::identity(n),
            exps,
            Scalar::from_integer(1.into()),
        )
    }

    /// `ψ_w` for an arbitrary permutation (well defined by braid relations).
    pub fn psi_of(w: Permutation) -> Self {
        let n = w.n();
        Self::term(w, vec![0; n], Scalar::from_integer(1.into()))
    }

    /// The monomial `y^exps`.
    pub fn y_monomial(exps: Vec<u32>) -> Self {
        let n = exps.len();
        Self::term(
            Permutation::identity(n),
            exps,
            Scalar::from_integer(1.into()),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        AffineElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Right-multiply by the generator `ψ_r`, staying in normal form.
    fn right_mul_psi(&self, r: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let p = m.exps[r - 1];
            let q = m.exps[r];
            let (psi_part, poly_part) = two_strand_pass(p, q);
            // ψ_w·ψ_r survives only when the length grows.
            if m.w.one_line()[r - 1] < m.w.one_line()[r] {
                let w_new = m.w.right_mul_transposition(r);
                for ((a, b), k) in &psi_part {
                    let mut exps = m.exps.clone();
                    exps[r - 1] = *a;
                    exps[r] = *b;
                    out.add_term(
                        Monomial {
                            w: w_new.clone(),
                            exps,
                        },
                        c * Scalar::from_integer((*k).into()),
                    );
                }
            }
            for ((a, b), k) in &poly_part {
                let mut exps = m.exps.clone();
                exps[r - 1] = *a;
                exps[r] = *b;
                out.add_term(
                    Monomial {
                        w: m.w.clone(),
                        exps,
                    },
                    c * Scalar::from_integer((*k).into()),
                );
            }
        }
        out
    }

    /// The star anti-involution: fixes every generator, reverses products;
    /// on a monomial, `star(ψ_w·y^a) = y^a·ψ_{w⁻¹}`, re-normalized.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut cur = Self::term(
                Permutation::identity(self.n),
                m.exps.clone(),
                c.clone(),
            );
            for r in m.w.inverse().canonical_reduced_word() {
                cur = cur.right_mul_psi(r);
            }
            out = &out + &cur;
        }
        out
    }

    /// Split into homogeneous components, keyed by degree.
    pub fn degree_split(&self) -> BTreeMap<i64, AffineElement> {
        let mut out: BTreeMap<i64, AffineElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Self::zero(self.n))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// The degree, if the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

/// Expand `y_r^p·y_{r+1}^q·ψ_r` over the two interacting strands, one `y`
/// at a time. Returns `(psi_terms, poly_terms)` keyed by the exponents of
/// `(y_r, y_{r+1})`: the element equals
/// `Σ psi_terms[(a,b)]·ψ_r·y_r^a·y_{r+1}^b + Σ poly_terms[(a,b)]·y_r^a·y_{r+1}^b`.
fn two_strand_pass(p: u32, q: u32) -> (BTreeMap<(u32, u32), i64>, BTreeMap<(u32, u32), i64>) {
    if p == 0 && q == 0 {
        return (BTreeMap::from([((0, 0), 1)]), BTreeMap::new());
    }
    let (inner_psi, inner_poly) = if p > 0 {
        two_strand_pass(p - 1, q)
    } else {
        two_strand_pass(0, q - 1)
    };
    let mut psi: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let mut poly: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let bump = |map: &mut BTreeMap<(u32, u32), i64>, key: (u32, u32), k: i64| {
        let e = map.entry(key).or_insert(0);
        *e += k;
        if *e == 0 {
            map.remove(&key);
        }
    };
    if p > 0 {
        // Left-multiply by y_r:  y_r·ψ_r·y^{a,b} = ψ_r·y^{a,b+1} − y^{a,b}.
        for (&(a, b), &k) in &inner_psi {
            bump(&mut psi, (a, b + 1), k);
            bump(&mut poly, (a, b), -k);
        }
        for (&(a, b), &k) in &inner_poly {
            bump(&mut poly, (a + 1, b), k);
        }
    } else {
        // Left-multiply by y_{r+1}:  y_{r+1}·ψ_r·y^{a,b} = ψ_r·y^{a+1,b} + y^{a,b}.
        for (&(a, b), &k) in &inner_psi {
            bump(&mut psi, (a + 1, b), k);
            bump(&mut poly, (a, b), k);
        }
        for (&(a, b), &k) in &inner_poly {
            bump(&mut poly, (a, b + 1), k);
        }
    }
    (psi, poly)
}

impl Add for &AffineElement {
    type Output = AffineElement;
    fn add(self, rhs: &AffineElement) -> AffineElement {
        assert_eq!(self.n, rhs.n, "adding elements of different ranks");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AffineElement {
    type Output = AffineElement;
    fn sub(self, rhs: &AffineElement) -> AffineElement {
        self + &(-rhs)
    }
}

impl Neg for &AffineElement {
    type Output = AffineElement;
    fn neg(self) -> AffineElement {
        AffineElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &AffineElement {
    type Output = AffineElement;

    /// Straightening product: for each right-factor monomial `ψ_u·y^b`,
    /// walk the canonical reduced word of `u` through the left factor,
    /// then append `y^b`.
    fn mul(self, rhs: &AffineElement) -> AffineElement {
        assert_eq!(self.n, rhs.n, "multiplying elements of different ranks");
        let mut out = AffineElement::zero(self.n);
        for (bm, bc) in &rhs.terms {
            let mut cur = self.clone();
            for r in bm.w.canonical_reduced_word() {
                cur = cur.right_mul_psi(r);
            }
            for (am, ac) in &cur.terms {
                let exps = am
                    .exps
                    .iter()
                    .zip(&bm.exps)
                    .map(|(x, y)| x + y)
                    .collect();
                out.add_term(
                    Monomial {
                        w: am.w.clone(),
                        exps,
                    },
                    ac * bc,
                );
            }
        }
        out
    }
}
