//! Exact rational scalars and their `p/q` text form.
//!
//! Every quantity in the crate (weights, quotas, indices) is a [`Rational`].
//! The canonical text form is `p/q` in lowest terms, or `p` when `q = 1`,
//! with the sign carried on the numerator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer/denom`, reduced. Panics when `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Parse(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (text, None),
    };
    let valid_int = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix('-').unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(numer, true) {
        return Err(err());
    }
    let numer: BigInt = numer.parse().map_err(|_| err())?;
    let denom: BigInt = match denom {
        Some(q) if valid_int(q, false) => q.parse().map_err(|_| err())?,
        Some(_) => return Err(err()),
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

/// Comma-separated list of rationals, e.g. `1/2,1/4,1/4`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

pub fn format_rational(value: &Rational) -> String {
    // `Ratio` keeps the denominator positive and prints `p` when it is one.
    debug_assert!(value.denom().is_positive());
    value.to_string()
}

pub fn format_list(values: &[Rational], sep: &str) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(sep)
}

/// `(a, b, c)`
pub fn format_tuple(values: &[Rational]) -> String {
    format!("({})", format_list(values, ", "))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serializes any `Display` value (big integer counts) as a string.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Serde adapters that store rationals as `p/q` strings.
pub mod serde_text {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&format_rational(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod nested {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(values: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for row in values {
                let row: Vec<String> = row.iter().map(format_rational).collect();
                seq.serialize_element(&row)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            Vec::<Vec<String>>::deserialize(d)?
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|t| parse_rational(t).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}
