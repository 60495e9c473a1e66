//! Exact rational scalars and their text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational; every certified identity lives over this field.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` for proper fractions, `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FractionError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal `{0}` rejected; write exact fractions as p/q")]
    Decimal(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q` or `p`. Decimals are refused so certification stays exact.
pub fn parse_fraction(text: &str) -> Result<Q, FractionError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(FractionError::Empty);
    }
    if s.contains('.') || s.contains('e') || s.contains('E') {
        return Err(FractionError::Decimal(s.to_string()));
    }
    let parse_int = |part: &str| -> Result<BigInt, FractionError> {
        let part = part.trim();
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(FractionError::Malformed(s.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| FractionError::Malformed(s.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(FractionError::ZeroDenominator(s.to_string()));
            }
            Ok(Q::new(n, d))
        }
    }
}

/// Open unit interval test used for every angle parameter `t = sin²α`.
pub fn in_open_unit_interval(t: &Q) -> bool {
    t.is_positive() && t < &Q::one()
}

/// Display adapter so `Q` prints as `p/q`.
pub struct Frac<'a>(pub &'a Q);

impl fmt::Display for Frac<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(self.0))
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::{fmt_q, Q};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub mod option {
        use super::super::{fmt_q, Q};
        use serde::Serializer;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&fmt_q(v)),
                None => s.serialize_none(),
            }
        }
    }
}
