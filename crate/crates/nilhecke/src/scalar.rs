//! Exact rational scalars.
//!
//! `Scalar` is an arbitrary-precision rational (`Ratio<BigInt>`), kept
//! automatically in lowest terms with a positive denominator, so scalar
//! equality is plain structural equality and formatting is canonical:
//! integers print bare (`"3"`, `"-1"`), proper fractions print `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// Scalar from a numerator/denominator pair. Panics on zero denominator.
pub fn frac(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// (−1)^k.
pub fn sign(k: usize) -> Scalar {
    if k % 2 == 0 {
        one()
    } else {
        -one()
    }
}

/// Canonical string form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Parse `"p"` or `"p/q"` (optionally signed). Rejects zero denominators
/// and garbage; accepts non-canonical input like `"2/4"` and reduces it.
pub fn parse_scalar(text: &str) -> crate::Result<Scalar> {
    let t = text.trim();
    let (num_s, den_s) = match t.split_once('/') {
        Some((a, b)) => (a, b),
        None => (t, "1"),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| crate::Error::InvalidElement(format!("bad coefficient {text:?}")))?;
    let den: BigInt = den_s
        .parse()
        .map_err(|_| crate::Error::InvalidElement(format!("bad coefficient {text:?}")))?;
    if den.is_zero() {
        return Err(crate::Error::InvalidElement(format!(
            "zero denominator in {text:?}"
        )));
    }
    Ok(BigRational::new(num, den))
}
