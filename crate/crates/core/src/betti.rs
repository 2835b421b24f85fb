//! Betti tables, Betti vectors and degree sequences.

use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational, Q};

/// Sparse vector indexed by internal degree. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BettiVector {
    #[serde(with = "rational::q_map")]
    entries: BTreeMap<i64, Rational>,
}

impl BettiVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut v = Self::new();
        for (j, x) in entries {
            v.add_at(j, &x);
        }
        v
    }

    pub fn from_ints(entries: &[(i64, i64)]) -> Self {
        Self::from_entries(entries.iter().map(|&(j, x)| (j, rational::int(x))))
    }

    /// Dense values placed at consecutive degrees starting at `start`.
    pub fn from_dense(start: i64, values: &[Rational]) -> Self {
        Self::from_entries(values.iter().enumerate().map(|(i, x)| (start + i as i64, x.clone())))
    }

    /// `e_k + e_l`
    pub fn pair(k: i64, l: i64) -> Self {
        Self::from_ints(&[(k, 1), (l, 1)])
    }

    pub fn unit(j: i64) -> Self {
        Self::from_ints(&[(j, 1)])
    }

    pub fn get(&self, j: i64) -> Rational {
        self.entries.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, j: i64, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry(j).or_insert_with(Rational::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&j);
        }
    }

    pub fn entries(&self) -> &BTreeMap<i64, Rational> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.entries.iter().map(|(j, x)| (*j, x))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn total(&self) -> Rational {
        self.entries.values().fold(Rational::zero(), |a, x| a + x)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|x| !x.is_negative())
    }

    pub fn add(&self, other: &BettiVector) -> BettiVector {
        let mut out = self.clone();
        for (j, x) in other.iter() {
            out.add_at(j, x);
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> BettiVector {
        BettiVector::from_entries(self.iter().map(|(j, x)| (j, x * s)))
    }

    /// `result[j + k] = self[j]`
    pub fn twist(&self, k: i64) -> BettiVector {
        BettiVector { entries: self.iter().map(|(j, x)| (j + k, x.clone())).collect() }
    }

    pub fn supported_in(&self, p: i64, q: i64) -> bool {
        self.support().all(|j| p <= j && j <= q)
    }

    /// Dense values over the window `[p, q]`.
    pub fn to_dense(&self, p: i64, q: i64) -> Vec<Rational> {
        (p..=q).map(|j| self.get(j)).collect()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (j, x)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{j}: {x}")?;
        }
        f.write_str("}")
    }
}

/// Sparse `(homological index, internal degree) -> value` table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(u32, i64), Rational>,
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u32, i64, Rational)>) -> Self {
        let mut t = Self::new();
        for (i, j, x) in entries {
            t.add_at(i, j, &x);
        }
        t
    }

    pub fn from_ints(entries: &[(u32, i64, i64)]) -> Self {
        Self::from_entries(entries.iter().map(|&(i, j, x)| (i, j, rational::int(x))))
    }

    pub fn get(&self, i: u32, j: i64) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, i: u32, j: i64, x: &Rational) {
        if x.is_zero() {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert_with(Rational::zero);
        *slot += x;
        if slot.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i64, &Rational)> {
        self.entries.iter().map(|((i, j), x)| (*i, *j, x))
    }

    pub fn add(&self, other: &BettiTable) -> BettiTable {
        let mut out = self.clone();
        for (i, j, x) in other.iter() {
            out.add_at(i, j, x);
        }
        out
    }

    pub fn total(&self) -> Rational {
        self.entries.values().fold(Rational::zero(), |a, x| a + x)
    }
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    i: u32,
    j: i64,
    v: Q,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<TableEntry> = self
            .iter()
            .map(|(i, j, x)| TableEntry { i, j, v: Q(x.clone()) })
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<TableEntry> = Vec::deserialize(d)?;
        Ok(BettiTable::from_entries(rows.into_iter().map(|e| (e.i, e.j, e.v.0))))
    }
}

/// Degree-`a` flattening: `b_j = Σ_i T[i, a·i + j]`.
pub fn flatten(table: &BettiTable, a: i64) -> BettiVector {
    let mut out = BettiVector::new();
    for (i, d, x) in table.iter() {
        out.add_at(d - a * i as i64, x);
    }
    out
}

/// Strictly increasing list of degrees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DegreeSequence(Vec<i64>);

impl DegreeSequence {
    pub fn new(degrees: Vec<i64>) -> Result<Self> {
        if degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(format!("degree sequence {degrees:?} is not strictly increasing")));
        }
        Ok(DegreeSequence(degrees))
    }

    pub fn degrees(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'de> Deserialize<'de> for DegreeSequence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<i64> = Vec::deserialize(d)?;
        DegreeSequence::new(v).map_err(serde::de::Error::custom)
    }
}

/// Componentwise `s ≤ u`.
pub fn seq_leq(s: &DegreeSequence, u: &DegreeSequence) -> Result<bool> {
    if s.len() != u.len() {
        return Err(Error::LengthMismatch(s.len(), u.len()));
    }
    Ok(s.0.iter().zip(&u.0).all(|(a, b)| a <= b))
}
