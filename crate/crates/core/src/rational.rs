//! Exact rationals and their `"p/q"` text form.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Always `num/den`, including integers (`3/1`).
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray
/// (positive multiple). The zero vector maps to zeros.
pub fn primitive_integer(values: &[Rational]) -> Vec<BigInt> {
    let l = lcm_of_denominators(values);
    let ints: Vec<BigInt> = values
        .iter()
        .map(|q| (q * Rational::from_integer(l.clone())).to_integer())
        .collect();
    primitive(ints)
}

pub fn primitive(ints: Vec<BigInt>) -> Vec<BigInt> {
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a rational as \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        parse(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }
}

/// Serde adapter: `#[serde(with = "crate::rational::q")]`.
pub mod q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

/// Transparent wrapper used when rationals sit inside containers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Q(#[serde(with = "q")] pub Rational);

pub mod q_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<Q> = v.iter().cloned().map(Q).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let w: Vec<Q> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|q| q.0).collect())
    }
}

pub mod q_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &[Vec<Rational>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<Vec<Q>> = v
            .iter()
            .map(|row| row.iter().cloned().map(Q).collect())
            .collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let w: Vec<Vec<Q>> = Vec::deserialize(d)?;
        Ok(w
            .into_iter()
            .map(|row| row.into_iter().map(|q| q.0).collect())
            .collect())
    }
}

/// Integer vectors serialized through the same `"p/q"` form.
pub mod int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<Vec<Q>> = v
            .iter()
            .map(|row| row.iter().map(|x| Q(Rational::from_integer(x.clone()))).collect())
            .collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        let w: Vec<Vec<Q>> = Vec::deserialize(d)?;
        w.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|q| {
                        if q.0.is_integer() {
                            Ok(q.0.to_integer())
                        } else {
                            Err(de::Error::custom("expected an integer coefficient"))
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let w: Vec<Q> = v.iter().map(|x| Q(Rational::from_integer(x.clone()))).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let w: Vec<Q> = Vec::deserialize(d)?;
        w.into_iter()
            .map(|q| {
                if q.0.is_integer() {
                    Ok(q.0.to_integer())
                } else {
                    Err(de::Error::custom("expected an integer coefficient"))
                }
            })
            .collect()
    }
}

/// Sparse degree-indexed maps as `{"<degree>": "p/q"}`.
pub mod q_map {
    use super::*;

    pub fn serialize<S: Serializer>(
        v: &BTreeMap<i64, Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let w: BTreeMap<i64, Q> = v.iter().map(|(k, q)| (*k, Q(q.clone()))).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<i64, Rational>, D::Error> {
        let w: BTreeMap<i64, Q> = BTreeMap::deserialize(d)?;
        Ok(w.into_iter().map(|(k, q)| (k, q.0)).collect())
    }
}
