//! Absolute Hilbert functions of line bundles and supernatural bundles on
//! projective space.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::betti::BettiVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", try_from = "SheafSpecJson")]
pub enum SheafSpec {
    /// `O_{P^m}(d)`
    LineBundle { m: u32, d: i64 },
    /// Roots `z_1 > … > z_m` of the Hilbert polynomial.
    Supernatural { roots: Vec<i64> },
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum SheafSpecJson {
    LineBundle { m: u32, d: i64 },
    Supernatural { roots: Vec<i64> },
}

impl TryFrom<SheafSpecJson> for SheafSpec {
    type Error = Error;

    fn try_from(j: SheafSpecJson) -> Result<Self> {
        match j {
            SheafSpecJson::LineBundle { m, d } => Ok(SheafSpec::LineBundle { m, d }),
            SheafSpecJson::Supernatural { roots } => SheafSpec::supernatural(roots),
        }
    }
}

impl SheafSpec {
    pub fn line_bundle(m: u32, d: i64) -> Self {
        SheafSpec::LineBundle { m, d }
    }

    /// Roots must be strictly decreasing. The empty list is the point `P^0`.
    pub fn supernatural(roots: Vec<i64>) -> Result<Self> {
        if roots.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!("roots {roots:?} are not strictly decreasing")));
        }
        Ok(SheafSpec::Supernatural { roots })
    }

    /// Dimension of the ambient projective space.
    pub fn dimension(&self) -> u32 {
        match self {
            SheafSpec::LineBundle { m, .. } => *m,
            SheafSpec::Supernatural { roots } => roots.len() as u32,
        }
    }

    /// `O(d)` has the roots `−d−1, …, −d−m`.
    pub fn roots(&self) -> Vec<i64> {
        match self {
            SheafSpec::LineBundle { m, d } => (1..=*m as i64).map(|i| -d - i).collect(),
            SheafSpec::Supernatural { roots } => roots.clone(),
        }
    }

    /// The line bundle with these roots, if the roots are consecutive.
    pub fn as_line_bundle(&self) -> Option<(u32, i64)> {
        let roots = self.roots();
        let first = *roots.first()?;
        let consecutive = roots.iter().enumerate().all(|(i, &z)| z == first - i as i64);
        consecutive.then_some((roots.len() as u32, -first - 1))
    }
}

pub fn binomial(n: i64, k: u32) -> BigInt {
    if n < 0 || (k as i64) > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(m: u32) -> BigInt {
    (1..=m as i64).fold(BigInt::one(), |acc, i| acc * i)
}

/// `γ_j`: total rank of the cohomology of the twist by `j`.
pub fn gamma(spec: &SheafSpec, j: i64) -> Rational {
    match spec {
        SheafSpec::LineBundle { m, d } => {
            let e = d + j;
            let value = if e >= 0 {
                binomial(e + *m as i64, *m)
            } else if e <= -(*m as i64) - 1 {
                binomial(-e - 1, *m)
            } else {
                BigInt::zero()
            };
            Rational::from_integer(value)
        }
        SheafSpec::Supernatural { roots } => {
            let p = roots.iter().fold(BigInt::one(), |acc, z| acc * BigInt::from(j - z));
            Rational::new(p.abs(), factorial(roots.len() as u32))
        }
    }
}

/// `γ_j` for `j ∈ [p, q]`, zeros elided.
pub fn gamma_window(spec: &SheafSpec, window: (i64, i64)) -> Result<BettiVector> {
    let (p, q) = window;
    if p > q {
        return Err(Error::InvalidWindow { p, q });
    }
    Ok(BettiVector::from_entries((p..=q).map(|j| (j, gamma(spec, j)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    #[test]
    fn projective_line() {
        let o = SheafSpec::line_bundle(1, 0);
        assert_eq!([0, -1, -2].map(|j| gamma(&o, j)), [int(1), int(0), int(1)]);
        assert_eq!(gamma_window(&o, (-2, 0)).unwrap(), BettiVector::from_ints(&[(-2, 1), (0, 1)]));
    }

    #[test]
    fn plane_twist_minus_five() {
        let o = SheafSpec::line_bundle(2, -5);
        let got: Vec<_> = (-2..=5).map(|j| gamma(&o, j)).collect();
        let expected: Vec<_> = [15, 10, 6, 3, 1, 0, 0, 1].iter().map(|&x| int(x)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn supernatural_values() {
        let s = SheafSpec::supernatural(vec![0, -3]).unwrap();
        let got: Vec<_> = (-4..=3).map(|j| gamma(&s, j)).collect();
        let expected: Vec<_> = [2, 0, 1, 1, 0, 2, 5, 9].iter().map(|&x| int(x)).collect();
        assert_eq!(got, expected);
        let s1 = SheafSpec::supernatural(vec![-1]).unwrap();
        assert_eq!(gamma_window(&s1, (-3, 1)).unwrap(), BettiVector::from_ints(&[(-3, 2), (-2, 1), (0, 1), (1, 2)]));
        let s2 = SheafSpec::supernatural(vec![0, -1]).unwrap();
        assert_eq!(gamma(&s2, 1), int(1));
        assert_eq!(gamma(&SheafSpec::supernatural(vec![1, -1]).unwrap(), 0), frac(1, 2));
    }

    #[test]
    fn roots_are_zeros() {
        let s = SheafSpec::supernatural(vec![4, 1, -2]).unwrap();
        assert!(gamma_window(&s, (-2, -2)).unwrap().is_empty());
        for z in s.roots() {
            assert!(gamma(&s, z).is_zero());
        }
    }

    #[test]
    fn spec_validation_and_json() {
        assert!(SheafSpec::supernatural(vec![0, 0]).is_err());
        assert!(serde_json::from_str::<SheafSpec>(r#"{"supernatural":{"roots":[-3,0]}}"#).is_err());
        let s: SheafSpec = serde_json::from_str(r#"{"line_bundle":{"m":2,"d":-5}}"#).unwrap();
        assert_eq!(s, SheafSpec::line_bundle(2, -5));
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"line_bundle":{"m":2,"d":-5}}"#);
        let s = SheafSpec::supernatural(vec![0, -3]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"supernatural":{"roots":[0,-3]}}"#);
        assert_eq!(SheafSpec::supernatural(vec![-5, -6]).unwrap().as_line_bundle(), Some((2, 4)));
        assert_eq!(s.as_line_bundle(), None);
    }

    fn monomials(vars: u32, degree: i64) -> u64 {
        // stars and bars by recursion on the first exponent
        if degree < 0 {
            return 0;
        }
        if vars == 1 {
            return 1;
        }
        (0..=degree).map(|e| monomials(vars - 1, degree - e)).sum()
    }

    #[test]
    fn line_bundles_against_monomial_counts() {
        for m in 1..=3u32 {
            for d in -6..=6 {
                for j in -12 - d..=12 - d {
                    let e = d + j;
                    let h0 = monomials(m + 1, e);
                    let hm = monomials(m + 1, -e - m as i64 - 1);
                    let expected = int((h0 + hm) as i64);
                    assert_eq!(gamma(&SheafSpec::line_bundle(m, d), j), expected, "m={m} d={d} j={j}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn positive_off_the_roots(roots in prop::collection::btree_set(-8i64..8, 1..4), j in -12i64..12) {
            let roots: Vec<i64> = roots.into_iter().rev().collect();
            let s = SheafSpec::supernatural(roots.clone()).unwrap();
            prop_assert_eq!(gamma(&s, j).is_zero(), roots.contains(&j));
            prop_assert!(!gamma(&s, j).is_negative());
        }

        #[test]
        fn line_bundles_are_supernatural(m in 1u32..4, d in -8i64..8, j in -15i64..15) {
            let lb = SheafSpec::line_bundle(m, d);
            let sn = SheafSpec::supernatural(lb.roots()).unwrap();
            prop_assert_eq!(gamma(&lb, j), gamma(&sn, j));
        }
    }
}
