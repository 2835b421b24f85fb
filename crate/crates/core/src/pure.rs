//! Pure Betti tables from the Herzog–Kühl proportions and their flattenings.

use itertools::Itertools;
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::betti::{flatten, BettiTable, BettiVector, DegreeSequence};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A degree sequence `d_0 < ... < d_n` for a pure resolution over `n`
/// variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureSpec {
    degseq: DegreeSequence,
    n: usize,
}

impl PureSpec {
    pub fn new(n: usize, degseq: DegreeSequence) -> Result<Self> {
        if degseq.len() != n + 1 {
            return Err(Error::LengthMismatch(degseq.len(), n + 1));
        }
        Ok(PureSpec { degseq, n })
    }

    pub fn from_degrees(degrees: &[i64]) -> Result<Self> {
        let n = degrees
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Invalid("empty degree sequence".into()))?;
        Self::new(n, DegreeSequence::new(degrees.to_vec())?)
    }

    pub fn degseq(&self) -> &DegreeSequence {
        &self.degseq
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `β_{i,d_i} = c · Π_{k≠i} 1/|d_k − d_i|` with `c` the least positive
/// rational making every entry an integer.
pub fn hk_table(spec: &PureSpec) -> BettiTable {
    let d = spec.degseq.degrees();
    let raw: Vec<Rational> = (0..d.len())
        .map(|i| {
            let denom = (0..d.len())
                .filter(|&k| k != i)
                .fold(BigInt::one(), |acc, k| acc * BigInt::from((d[k] - d[i]).abs()));
            Rational::new(BigInt::one(), denom)
        })
        .collect();
    let ints = rational::primitive_integer(&raw);
    BettiTable::from_entries(
        ints.into_iter()
            .enumerate()
            .map(|(i, x)| (i as u32, d[i], Rational::from_integer(x))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureVector {
    pub degseq: DegreeSequence,
    pub vector: BettiVector,
}

fn sequences(n: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    (lo..=hi).combinations(n + 1)
}

/// Every strictly increasing `(n+1)`-sequence inside `[p, q]`, in
/// lexicographic order, with the degree-`a` flattening of its pure table.
pub fn enumerate_pure_vectors(n: usize, a: i64, window: (i64, i64)) -> Result<Vec<PureVector>> {
    let (p, q) = window;
    if q < p || ((q - p + 1) as usize) < n + 1 {
        return Err(Error::WindowTooSmall { p, q, len: n + 1 });
    }
    Ok(sequences(n, p, q)
        .map(|degs| {
            let spec = PureSpec::from_degrees(&degs).expect("combinations are increasing");
            PureVector {
                vector: flatten(&hk_table(&spec), a),
                degseq: spec.degseq,
            }
        })
        .collect())
}

/// All flattened pure vectors whose support lies inside `[p, q]`.
///
/// Degree `d_i` lands at `d_i − a·i`, so only sequences with
/// `d_i ∈ [p + a·i, q + a·i]` can contribute. For `a = 0` this is the same
/// list as [`enumerate_pure_vectors`].
pub fn pure_vectors_supported_in(n: usize, a: i64, window: (i64, i64)) -> Result<Vec<PureVector>> {
    let (p, q) = window;
    if q < p {
        return Err(Error::InvalidWindow { p, q });
    }
    let span = n as i64 * a.abs();
    let lo = p - span;
    let hi = q + span;
    let mut out = Vec::new();
    for degs in sequences(n, lo, hi) {
        let fits = degs
            .iter()
            .enumerate()
            .all(|(i, &d)| (p..=q).contains(&(d - a * i as i64)));
        if !fits {
            continue;
        }
        let spec = PureSpec::from_degrees(&degs).expect("combinations are increasing");
        out.push(PureVector { vector: flatten(&hk_table(&spec), a), degseq: spec.degseq });
    }
    Ok(out)
}

/// gcd of the table's entries (1 for every [`hk_table`] output).
pub fn entry_gcd(table: &BettiTable) -> BigInt {
    table
        .iter()
        .fold(BigInt::zero(), |g, (_, _, x)| g.gcd(&x.to_integer()))
}
