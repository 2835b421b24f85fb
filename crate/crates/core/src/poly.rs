//! Sparse polynomials over Q in the standard grading.
//!
//! Two rings are supported: `S = Q[x1, ..., xn]` and the univariate ring
//! `A = Q[t]`. Terms are stored as a map from exponent vector to nonzero
//! coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    /// `Q[x1, ..., xn]`
    Multivariate(usize),
    /// `Q[t]`
    Univariate,
}

impl Ring {
    pub fn nvars(&self) -> usize {
        match self {
            Ring::Multivariate(n) => *n,
            Ring::Univariate => 1,
        }
    }

    fn check(&self, other: &Ring) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn total_degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

// Graded order: higher total degree first, then lexicographically larger.
fn display_order(a: &[u32], b: &[u32]) -> Ordering {
    total_degree(b)
        .cmp(&total_degree(a))
        .then_with(|| b.cmp(a))
}

impl Poly {
    pub fn zero(ring: Ring) -> Self {
        Poly { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, c: Rational) -> Self {
        Self::monomial(ring, c, vec![0; ring.nvars()])
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn monomial(ring: Ring, c: Rational, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), ring.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { ring, terms }
    }

    /// The variable `x_{i+1}` (or `t` when `i == 0` in the univariate ring).
    pub fn var(ring: Ring, i: usize) -> Self {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        Self::monomial(ring, Rational::one(), exps)
    }

    /// `c * var_i^e`
    pub fn var_power(ring: Ring, c: Rational, i: usize, e: u32) -> Self {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = e;
        Self::monomial(ring, c, exps)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.ring.check(&other.ring)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.ring.check(&other.ring)?;
        let mut out = Poly::zero(self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.ring);
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree if every term shares it. `None` for the zero polynomial
    /// and for polynomials mixing degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| total_degree(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Zero is homogeneous of every degree; negative degrees admit only zero.
    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        degree >= 0 && self.homogeneous_degree() == Some(degree as u32)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// The value if the polynomial is a nonzero constant.
    pub fn as_constant(&self) -> Option<&Rational> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.iter().all(|&x| x == 0) {
                return Some(c);
            }
        }
        None
    }

    /// Constant coefficient (zero if absent).
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.ring.nvars()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Sum of all coefficients, i.e. evaluation at the all-ones point.
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    // Univariate helpers. Valid for any ring with a single variable.

    fn leading_univariate(&self) -> Option<(u32, &Rational)> {
        self.terms.iter().next_back().map(|(e, c)| (e[0], c))
    }

    /// Euclidean division in a one-variable ring.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.ring.check(&divisor.ring)?;
        if self.ring.nvars() != 1 {
            return Err(Error::RingMismatch("division needs a univariate ring".into()));
        }
        let (dlead, dcoef) = divisor
            .leading_univariate()
            .ok_or_else(|| Error::Invalid("division by zero polynomial".into()))?;
        let dcoef = dcoef.clone();
        let mut quotient = Poly::zero(self.ring);
        let mut rem = self.clone();
        while let Some((e, c)) = rem.leading_univariate() {
            if e < dlead {
                break;
            }
            let factor = Poly::monomial(self.ring, c / &dcoef, vec![e - dlead]);
            rem = rem.sub(&factor.mul(divisor)?)?;
            quotient = quotient.add(&factor)?;
        }
        Ok((quotient, rem))
    }

    /// Division known to be exact (Bareiss steps).
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Invalid(format!("inexact division of {self} by {divisor}")));
        }
        Ok(q)
    }

    /// Parses the text grammar `3*x1^2*x2 - 1/2*x3` (or `t^3 + 2*t` in the
    /// univariate ring). Variables foreign to `ring` are rejected.
    pub fn parse(ring: Ring, text: &str) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Poly::zero(ring);
        let mut saw_t = false;
        let mut saw_x = false;
        for (sign, term) in split_terms(&s)? {
            let (c, exps) = parse_term(ring, term, &mut saw_t, &mut saw_x)?;
            out.add_term(exps, if sign { -c } else { c });
        }
        if saw_t && saw_x {
            return Err(Error::Parse(format!("'{text}' mixes t with x variables")));
        }
        Ok(out)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        negative = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let b = bytes[i];
        // a sign directly after '^' or '*' is not a term separator
        if (b == b'+' || b == b'-') && i > start && !matches!(bytes[i - 1], b'^' | b'*' | b'/') {
            out.push((negative, &s[start..i]));
            negative = b == b'-';
            start = i + 1;
        }
        i += 1;
    }
    out.push((negative, &s[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err(Error::Parse(format!("empty term in '{s}'")));
    }
    Ok(out)
}

fn parse_term(
    ring: Ring,
    term: &str,
    saw_t: &mut bool,
    saw_x: &mut bool,
) -> Result<(Rational, Vec<u32>)> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u32; ring.nvars()];
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in '{term}'")));
        }
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => {
                let p: u32 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                (b, p)
            }
            None => (factor, 1),
        };
        if base.starts_with(|c: char| c.is_ascii_digit()) {
            if factor.contains('^') {
                return Err(Error::Parse(format!("powers of constants unsupported: '{factor}'")));
            }
            coeff *= rational::parse(base)?;
        } else if base == "t" {
            *saw_t = true;
            if ring != Ring::Univariate {
                return Err(Error::Parse(format!("variable t is not in ring {ring:?}")));
            }
            exps[0] += power;
        } else if let Some(idx) = base.strip_prefix('x') {
            *saw_x = true;
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable '{base}'")))?;
            match ring {
                Ring::Multivariate(n) if (1..=n).contains(&idx) => exps[idx - 1] += power,
                _ => {
                    return Err(Error::Parse(format!("variable {base} is not in ring {ring:?}")))
                }
            }
        } else {
            return Err(Error::Parse(format!("unknown factor '{factor}'")));
        }
    }
    Ok((coeff, exps))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|a, b| display_order(a.0, b.0));
        for (k, (exps, c)) in entries.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = match self.ring {
                    Ring::Univariate => "t".to_string(),
                    Ring::Multivariate(_) => format!("x{}", i + 1),
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                rational::format(&abs)
            };
            if factors.is_empty() {
                f.write_str(&coeff)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{coeff}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    const S2: Ring = Ring::Multivariate(2);

    fn p(s: &str) -> Poly {
        Poly::parse(S2, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let prod = p("x1 + x2").mul(&p("x1 - x2")).unwrap();
        assert_eq!(prod, p("x1^2 - x2^2"));
    }

    #[test]
    fn additive_identity() {
        let q = p("3*x1*x2 - 1/2*x2^2");
        assert_eq!(q.add(&Poly::zero(S2)).unwrap(), q);
    }

    #[test]
    fn monomial_product() {
        let a = Poly::parse(Ring::Univariate, "t^2").unwrap();
        let b = Poly::parse(Ring::Univariate, "t^3").unwrap();
        assert_eq!(a.mul(&b).unwrap(), Poly::parse(Ring::Univariate, "t^5").unwrap());
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Poly::parse(Ring::Univariate, "t").unwrap();
        assert!(matches!(a.add(&p("x1")), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(p("x1^2*x2").homogeneous_degree(), Some(3));
        assert_eq!(p("3*x1 + 2*x2").homogeneous_degree(), Some(1));
        assert_eq!(p("x1 + x2^2").homogeneous_degree(), None);
        assert_eq!(Poly::zero(S2).homogeneous_degree(), None);
        assert!(Poly::zero(S2).is_homogeneous_of(-4));
        assert!(!p("x1").is_homogeneous_of(-1));
    }

    #[test]
    fn grammar() {
        assert!(Poly::parse(Ring::Multivariate(2), "3*x1^2*x2 - t").is_err());
        assert!(Poly::parse(Ring::Univariate, "3*x1^2*x2 - t").is_err());
        assert!(Poly::parse(S2, "x3").is_err());
        assert!(Poly::parse(S2, "").is_err());
        assert!(Poly::parse(S2, "x1 +").is_err());
        assert_eq!(p("-x1 + x1"), Poly::zero(S2));
        assert_eq!(p("2*3*x1"), Poly::var_power(S2, int(6), 0, 1));
        assert_eq!(p("0"), Poly::zero(S2));
        assert_eq!(p("-1").as_constant(), Some(&int(-1)));
    }

    #[test]
    fn display() {
        assert_eq!(p("x2^2 - x1*x2 + 3*x1^2").to_string(), "3*x1^2 - x1*x2 + x2^2");
        assert_eq!(p("-1/2*x1 + 1").to_string(), "-1/2*x1 + 1");
        assert_eq!(Poly::parse(Ring::Univariate, "-t^3").unwrap().to_string(), "-t^3");
    }

    #[test]
    fn univariate_division() {
        let t = Ring::Univariate;
        let a = Poly::parse(t, "t^3 - 1").unwrap();
        let b = Poly::parse(t, "t - 1").unwrap();
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, Poly::parse(t, "t^2 + t + 1").unwrap());
        let (_, r) = Poly::parse(t, "t^2 + 1").unwrap().div_rem(&b).unwrap();
        assert_eq!(r, Poly::parse(t, "2").unwrap());
    }

    fn homogeneous_poly(deg: u32) -> impl Strategy<Value = Poly> {
        prop::collection::vec((0..=deg, -3i64..=3), 1..4).prop_map(move |terms| {
            let mut out = Poly::zero(S2);
            for (a, c) in terms {
                let m = Poly::monomial(S2, int(c), vec![a, deg - a]);
                out = out.add(&m).unwrap();
            }
            out
        })
    }

    proptest! {
        #[test]
        fn degree_is_additive(
            (a, b, d1, d2) in (0u32..4, 0u32..4).prop_flat_map(|(d1, d2)| {
                (homogeneous_poly(d1), homogeneous_poly(d2), Just(d1), Just(d2))
            })
        ) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = a.mul(&b).unwrap();
            prop_assert_eq!(prod.homogeneous_degree(), Some(d1 + d2));
        }

        #[test]
        fn display_parse_round_trip(a in homogeneous_poly(3)) {
            prop_assert_eq!(Poly::parse(S2, &a.to_string()).unwrap(), a);
        }
    }
}
