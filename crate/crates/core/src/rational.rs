//! Text form and small helpers for [`Rational`].
//!
//! Rationals are always written as `numerator/denominator` in lowest terms,
//! integers included (`1/1`). Parsing also accepts a bare integer.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result, Rational};

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Comma separated list of rationals, as taken by the CLI.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_rational)
        .collect()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow3(k: usize) -> BigInt {
    num_traits::pow(BigInt::from(3u8), k)
}

/// `3^{-k}`.
pub fn inv_pow3(k: usize) -> Rational {
    Rational::new(BigInt::one(), pow3(k))
}

pub fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

/// Serde adapter writing a [`Rational`] in its `num/den` text form.
pub mod text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(serde::de::Error::custom)
    }
}

/// Same as [`text`] for sequences.
pub mod text_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| parse_rational(r).map_err(serde::de::Error::custom))
            .collect()
    }
}
