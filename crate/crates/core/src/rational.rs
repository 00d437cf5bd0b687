//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"`, or a terminating decimal such as `"2.5"`.
pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Validation(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Validation(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, fraction)) = t.split_once('.') {
        if fraction.is_empty() || !fraction.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fraction);
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), fraction.len());
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt(v: &Rational) -> String {
    v.to_string()
}

pub fn to_f64(v: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

pub fn abs(v: &Rational) -> Rational {
    v.abs()
}

/// Serde adapters rendering rationals as strings.
pub mod serde_q {
    use super::{fmt, parse, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&fmt(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for row in v {
                let texts: Vec<String> = row.iter().map(fmt).collect();
                seq.serialize_element(&texts)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            let rows = Vec::<Vec<String>>::deserialize(d)?;
            rows.iter()
                .map(|row| {
                    row.iter()
                        .map(|t| parse(t).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(x) => s.serialize_some(&fmt(x)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<Rational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| parse(&t).map_err(D::Error::custom)).transpose()
        }
    }
}
