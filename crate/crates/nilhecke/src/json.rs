//! JSON interchange format for algebra elements.
//!
//! An element is serialized as a list of normal-form terms, each carrying the
//! permutation in one-line notation (1-based), the exponent vector of the
//! polynomial part, and the coefficient as an exact fraction string:
//!
//! ```text
//! { "n": 2, "terms": [ { "perm": [2,1], "exps": [0,1], "coeff": "-1/2" } ] }
//! ```
//!
//! Cyclotomic elements carry an additional `"ell"` field recording the level
//! of the quotient they live in; affine elements omit it. Because elements
//! are stored internally in normal form with ordered term maps, serialization
//! is deterministic: the same element always produces the same byte string.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::affine::AffineElement;
use crate::cyclotomic::{CycContext, CycElement};
use crate::perm::Permutation;
use crate::scalar::{format_scalar, parse_scalar};

/// One normal-form term `coeff · ψ_w · y^exps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    /// One-line notation of `w`, 1-based: `perm[i]` is the image of `i+1`.
    pub perm: Vec<usize>,
    /// Exponent of `y_{s+1}` at position `s`; always of length `n`.
    pub exps: Vec<u32>,
    /// Exact rational coefficient, `"p"` or `"p/q"`.
    pub coeff: String,
}

/// A full element: affine when `ell` is absent, cyclotomic when present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    /// Level of the cyclotomic quotient, omitted for affine elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Rank: number of strands the element acts on.
    pub n: usize,
    /// Normal-form terms in the element's canonical term order.
    pub terms: Vec<TermJson>,
}

impl ElementJson {
    /// Snapshot an affine element (no `ell` field).
    pub fn from_affine(a: &AffineElement) -> Self {
        ElementJson {
            ell: None,
            n: a.n(),
            terms: a
                .terms()
                .map(|(m, c)| TermJson {
                    perm: m.w.one_line().to_vec(),
                    exps: m.exps.clone(),
                    coeff: format_scalar(c),
                })
                .collect(),
        }
    }

    /// Snapshot a cyclotomic element, recording its level.
    pub fn from_cyclotomic(x: &CycElement) -> Self {
        let mut json = Self::from_affine(&x.lift());
        json.ell = Some(x.context().ell());
        json.n = x.context().n();
        json
    }

    /// Rebuild the affine element. Fails on malformed permutations,
    /// wrong-length exponent vectors, or unparseable coefficients.
    pub fn to_affine(&self) -> crate::Result<AffineElement> {
        let mut acc = AffineElement::zero(self.n);
        for term in &self.terms {
            let w = Permutation::from_one_line(term.perm.clone())?;
            if w.n() != self.n {
                return Err(crate::Error::InvalidElement(format!(
                    "term permutation has rank {} but element has n = {}",
                    w.n(),
                    self.n
                )));
            }
            if term.exps.len() != self.n {
                return Err(crate::Error::InvalidElement(format!(
                    "term has {} exponents but element has n = {}",
                    term.exps.len(),
                    self.n
                )));
            }
            let coeff = parse_scalar(&term.coeff)?;
            acc = &acc + &AffineElement::term(w, term.exps.clone(), coeff);
        }
        Ok(acc)
    }

    /// Rebuild a cyclotomic element in `ctx`, reducing to the monomial basis.
    /// The element's `ell` (when present) and `n` must match the context.
    pub fn to_cyclotomic(&self, ctx: &Arc<CycContext>) -> crate::Result<CycElement> {
        if let Some(ell) = self.ell {
            if ell != ctx.ell() {
                return Err(crate::Error::InvalidElement(format!(
                    "element has ell = {} but context has ell = {}",
                    ell,
                    ctx.ell()
                )));
            }
        }
        if self.n != ctx.n() {
            return Err(crate::Error::InvalidElement(format!(
                "element has n = {} but context has n = {}",
                self.n,
                ctx.n()
            )));
        }
        Ok(ctx.reduce(&self.to_affine()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::evaluate_word;
    use crate::scalar::{frac, int};

    #[test]
    fn affine_round_trip() {
        let s1 = evaluate_word(2, &[1]);
        let x = &AffineElement::term(s1.clone(), vec![0, 1], frac(-1, 2))
            + &AffineElement::term(Permutation::identity(2), vec![3, 0], int(7));
        let json = ElementJson::from_affine(&x);
        assert_eq!(json.ell, None);
        assert_eq!(json.n, 2);
        assert_eq!(json.terms.len(), 2);
        assert_eq!(json.to_affine().unwrap(), x);

        // The wire form matches the documented shape, term order included.
        let text = serde_json::to_string(&json).unwrap();
        let back: ElementJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        assert!(text.contains("\"coeff\":\"-1/2\""));
        assert!(!text.contains("ell"));
    }

    #[test]
    fn cyclotomic_round_trip_reduces() {
        let ctx = CycContext::new(3, 2);
        // y_1^3 is not in the monomial basis; reconstruction must reduce it.
        let raw = ElementJson {
            ell: Some(3),
            n: 2,
            terms: vec![TermJson {
                perm: vec![1, 2],
                exps: vec![3, 0],
                coeff: "1".into(),
            }],
        };
        let x = raw.to_cyclotomic(&ctx).unwrap();
        let expected = ctx.reduce(&AffineElement::term(
            Permutation::identity(2),
            vec![3, 0],
            int(1),
        ));
        assert_eq!(x, expected);

        let json = ElementJson::from_cyclotomic(&x);
        assert_eq!(json.ell, Some(3));
        assert_eq!(json.to_cyclotomic(&ctx).unwrap(), x);
    }

    #[test]
    fn serialization_is_deterministic() {
        let ctx = CycContext::new(3, 2);
        // Build the same element two ways; the wire bytes must agree.
        let a = ctx.reduce(
            &(&AffineElement::term(evaluate_word(2, &[1]), vec![1, 1], int(2))
                + &AffineElement::term(Permutation::identity(2), vec![0, 2], int(-1))),
        );
        let b = ctx.reduce(
            &(&AffineElement::term(Permutation::identity(2), vec![0, 2], int(-1))
                + &AffineElement::term(evaluate_word(2, &[1]), vec![1, 1], int(2))),
        );
        let ta = serde_json::to_string(&ElementJson::from_cyclotomic(&a)).unwrap();
        let tb = serde_json::to_string(&ElementJson::from_cyclotomic(&b)).unwrap();
        assert_eq!(ta, tb);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let bad_perm = ElementJson {
            ell: None,
            n: 2,
            terms: vec![TermJson {
                perm: vec![1, 1],
                exps: vec![0, 0],
                coeff: "1".into(),
            }],
        };
        assert!(bad_perm.to_affine().is_err());

        let bad_exps = ElementJson {
            ell: None,
            n: 2,
            terms: vec![TermJson {
                perm: vec![2, 1],
                exps: vec![0],
                coeff: "1".into(),
            }],
        };
        assert!(bad_exps.to_affine().is_err());

        let bad_coeff = ElementJson {
            ell: None,
            n: 2,
            terms: vec![TermJson {
                perm: vec![2, 1],
                exps: vec![0, 0],
                coeff: "1/0".into(),
            }],
        };
        assert!(bad_coeff.to_affine().is_err());

        let wrong_level = ElementJson {
            ell: Some(4),
            n: 2,
            terms: vec![],
        };
        assert!(wrong_level.to_cyclotomic(&CycContext::new(3, 2)).is_err());

        // A monomial term the lift would never produce, e.g. rank mismatch.
        let wrong_rank = ElementJson {
            ell: None,
            n: 3,
            terms: vec![TermJson {
                perm: vec![2, 1],
                exps: vec![0, 0, 0],
                coeff: "1".into(),
            }],
        };
        assert!(wrong_rank.to_affine().is_err());
    }
}
