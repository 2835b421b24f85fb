//! Free graded differential modules given by a square matrix.

use itertools::Itertools;
use num::One;
use serde::{Deserialize, Serialize};

use crate::betti::BettiVector;
use crate::error::{Error, Result};
use crate::matrix::GradedMatrix;
use crate::poly::{Poly, Ring};
use crate::rational::{self, Rational};

/// `(D, ∂)` with `D = ⊕ R(−gens[i])` and `∂ : D → D(a)`.
///
/// Construction only checks shapes; [`FreeDM::validate`] checks the grading
/// and `∂² = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDM {
    a: i64,
    gens: Vec<i64>,
    d: GradedMatrix,
}

impl FreeDM {
    pub fn new(ring: Ring, a: i64, gens: Vec<i64>, entries: Vec<Vec<Poly>>) -> Result<Self> {
        let d = GradedMatrix::new(ring, gens.clone(), gens.clone(), a, entries)?;
        Ok(FreeDM { a, gens, d })
    }

    pub fn from_matrix(d: GradedMatrix) -> Result<Self> {
        if d.row_degrees() != d.col_degrees() {
            return Err(Error::GradingMismatch("differential must be square with equal degrees".into()));
        }
        Ok(FreeDM { a: d.twist(), gens: d.row_degrees().to_vec(), d })
    }

    /// Parses entries with the polynomial text grammar.
    pub fn parse(ring: Ring, a: i64, gens: Vec<i64>, rows: &[&[&str]]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|s| Poly::parse(ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, a, gens, entries)
    }

    pub fn ring(&self) -> Ring {
        self.d.ring()
    }

    pub fn degree(&self) -> i64 {
        self.a
    }

    pub fn gens(&self) -> &[i64] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn differential(&self) -> &GradedMatrix {
        &self.d
    }

    pub fn entry(&self, r: usize, c: usize) -> &Poly {
        self.d.get(r, c)
    }

    pub fn validate(&self) -> Result<()> {
        self.d.check_homogeneous()?;
        let square = self.d.mul(&self.d.clone())?;
        if let Some((row, col)) = square.first_nonzero() {
            return Err(Error::NotSquareZero { row, col });
        }
        Ok(())
    }

    /// First nonzero constant entry in row-major order.
    pub fn first_constant(&self) -> Option<(usize, usize)> {
        self.constants().next()
    }

    fn constants(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.rank();
        (0..n)
            .cartesian_product(0..n)
            .filter(move |&(r, c)| self.d.get(r, c).as_constant().is_some())
    }

    pub fn is_minimal(&self) -> bool {
        self.first_constant().is_none()
    }

    /// Block sum, generators of `other` appended after those of `self`.
    pub fn direct_sum(&self, other: &FreeDM) -> Result<FreeDM> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch("direct sum of different rings".into()));
        }
        if self.a != other.a {
            return Err(Error::GradingMismatch("direct sum of different degrees".into()));
        }
        let ring = self.ring();
        let (n1, n2) = (self.rank(), other.rank());
        let mut entries = vec![vec![Poly::zero(ring); n1 + n2]; n1 + n2];
        for r in 0..n1 {
            for c in 0..n1 {
                entries[r][c] = self.entry(r, c).clone();
            }
        }
        for r in 0..n2 {
            for c in 0..n2 {
                entries[n1 + r][n1 + c] = other.entry(r, c).clone();
            }
        }
        let gens = self.gens.iter().chain(&other.gens).copied().collect();
        FreeDM::new(ring, self.a, gens, entries)
    }

    /// Reorders generators: new generator `i` is old generator `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> FreeDM {
        let d = self.d.submatrix(perm, perm);
        FreeDM { a: self.a, gens: d.row_degrees().to_vec(), d }
    }

    /// Conjugation by the graded elementary automorphism
    /// `e_c ↦ e_c + f·e_r` where `f` is homogeneous of degree
    /// `gens[c] − gens[r]`: the differential becomes `E ∂ E⁻¹`.
    pub fn conjugate_elementary(&self, r: usize, c: usize, f: &Poly) -> Result<FreeDM> {
        if r == c {
            return Err(Error::Invalid("elementary operation needs two distinct indices".into()));
        }
        if !f.is_homogeneous_of(self.gens[c] - self.gens[r]) {
            return Err(Error::NotHomogeneous { row: r, col: c, expected: self.gens[c] - self.gens[r] });
        }
        let n = self.rank();
        let mut m = self.d.clone();
        // ∂ E⁻¹: column c -= f · column r
        for i in 0..n {
            let v = m.get(i, c).sub(&m.get(i, r).mul(f)?)?;
            m.set(i, c, v);
        }
        // E (∂ E⁻¹): row r += f · row c
        for j in 0..n {
            let v = m.get(r, j).add(&f.mul(m.get(c, j))?)?;
            m.set(r, j, v);
        }
        Ok(FreeDM { a: self.a, gens: self.gens.clone(), d: m })
    }

    /// Rescales generator `i` by a nonzero constant.
    pub fn conjugate_scaling(&self, i: usize, s: &Rational) -> FreeDM {
        let n = self.rank();
        let mut m = self.d.clone();
        let inv = Rational::one() / s;
        for j in 0..n {
            let v = m.get(i, j).scale(s);
            m.set(i, j, v);
        }
        for j in 0..n {
            let v = m.get(j, i).scale(&inv);
            m.set(j, i, v);
        }
        FreeDM { a: self.a, gens: self.gens.clone(), d: m }
    }
}

/// A graded complex `C_0 ← C_1 ← ...` of free modules; `maps[i]` is the
/// matrix of `C_{i+1} → C_i` (twist 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRep {
    ring: Ring,
    modules: Vec<Vec<i64>>,
    maps: Vec<GradedMatrix>,
}

impl ComplexRep {
    pub fn new(ring: Ring, modules: Vec<Vec<i64>>, maps: Vec<GradedMatrix>) -> Result<Self> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} modules need {} maps, got {}",
                modules.len(),
                modules.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.ring() != ring {
                return Err(Error::RingMismatch(format!("map {i}")));
            }
            if m.twist() != 0 || m.row_degrees() != modules[i] || m.col_degrees() != modules[i + 1] {
                return Err(Error::GradingMismatch(format!("map {} does not match C_{} -> C_{}", i, i + 1, i)));
            }
            m.check_homogeneous()?;
        }
        for (i, pair) in maps.windows(2).enumerate() {
            if let Some((row, col)) = pair[0].mul(&pair[1])?.first_nonzero() {
                return Err(Error::Invalid(format!(
                    "composition C_{} -> C_{} is nonzero at ({row},{col})",
                    i + 2,
                    i
                )));
            }
        }
        Ok(ComplexRep { ring, modules, maps })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn modules(&self) -> &[Vec<i64>] {
        &self.modules
    }

    pub fn maps(&self) -> &[GradedMatrix] {
        &self.maps
    }

    /// Betti table read off the generator degrees (the complex's own
    /// numerics; equals the Betti table when the complex is minimal).
    pub fn betti_table(&self) -> crate::betti::BettiTable {
        let mut t = crate::betti::BettiTable::new();
        for (i, degs) in self.modules.iter().enumerate() {
            for &d in degs {
                t.add_at(i as u32, d, &Rational::one());
            }
        }
        t
    }
}

/// `Fold_a`: `⊕ C_i(ia)`. A generator of `C_i` in degree `d` sits in degree
/// `d − i·a`.
pub fn fold(complex: &ComplexRep, a: i64) -> Result<FreeDM> {
    let ring = complex.ring;
    let mut offsets = Vec::with_capacity(complex.modules.len());
    let mut gens = Vec::new();
    for (i, degs) in complex.modules.iter().enumerate() {
        offsets.push(gens.len());
        gens.extend(degs.iter().map(|d| d - i as i64 * a));
    }
    let n = gens.len();
    let mut entries = vec![vec![Poly::zero(ring); n]; n];
    for (i, m) in complex.maps.iter().enumerate() {
        let (ro, co) = (offsets[i], offsets[i + 1]);
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                entries[ro + r][co + c] = m.get(r, c).clone();
            }
        }
    }
    let dm = FreeDM::new(ring, a, gens, entries)?;
    dm.validate()?;
    Ok(dm)
}

/// Koszul complex on `x_1^{e_1}, ..., x_n^{e_n}` with `n = ring.nvars()`.
/// `K_i` has one generator per `i`-subset `S`, in degree `Σ_{s∈S} e_s`;
/// subsets are in lexicographic order and
/// `∂ e_S = Σ_k (−1)^k x_{s_k}^{e_{s_k}} e_{S∖s_k}`.
pub fn koszul(ring: Ring, exponents: &[u32]) -> Result<ComplexRep> {
    let n = ring.nvars();
    if exponents.len() != n || n == 0 {
        return Err(Error::LengthMismatch(exponents.len(), n));
    }
    if exponents.contains(&0) {
        return Err(Error::Invalid("Koszul exponents must be positive".into()));
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|i| (0..n).combinations(i).collect()).collect();
    let degree = |s: &[usize]| s.iter().map(|&k| exponents[k] as i64).sum::<i64>();
    let modules: Vec<Vec<i64>> = subsets.iter().map(|ss| ss.iter().map(|s| degree(s)).collect()).collect();
    let mut maps = Vec::new();
    for i in 1..=n {
        let mut m = GradedMatrix::zero(ring, modules[i - 1].clone(), modules[i].clone(), 0);
        for (c, s) in subsets[i].iter().enumerate() {
            for (k, &var) in s.iter().enumerate() {
                let smaller: Vec<usize> = s.iter().copied().filter(|&x| x != var).collect();
                let r = subsets[i - 1].iter().position(|t| *t == smaller).unwrap();
                let sign = if k % 2 == 0 { rational::int(1) } else { rational::int(-1) };
                m.set(r, c, Poly::var_power(ring, sign, var, exponents[var]));
            }
        }
        maps.push(m);
    }
    ComplexRep::new(ring, modules, maps)
}

/// Which nonzero constant to cancel next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// First off-diagonal constant in row-major order.
    #[default]
    RowMajor,
    /// Last off-diagonal constant in row-major order.
    Reversed,
}

fn find_pivot(d: &FreeDM, order: PivotOrder) -> Result<Option<(usize, usize)>> {
    let mut off = d.constants().filter(|(r, c)| r != c);
    let found = match order {
        PivotOrder::RowMajor => off.next(),
        PivotOrder::Reversed => off.last(),
    };
    if found.is_none() {
        if let Some((index, _)) = d.constants().next() {
            return Err(Error::PivotOnDiagonal { index });
        }
    }
    Ok(found)
}

/// One Gaussian cancellation against the unit at `(r, c)`, `r ≠ c`:
/// `∂' = ∂ − ∂[·,c] u⁻¹ ∂[r,·]` on the indices other than `r` and `c`.
pub fn cancel_pair(d: &FreeDM, r: usize, c: usize) -> Result<FreeDM> {
    if r == c {
        return Err(Error::PivotOnDiagonal { index: r });
    }
    let u = d
        .entry(r, c)
        .as_constant()
        .ok_or_else(|| Error::Invalid(format!("entry ({r},{c}) is not a nonzero constant")))?;
    let inv = Rational::one() / u;
    let keep: Vec<usize> = (0..d.rank()).filter(|&i| i != r && i != c).collect();
    let ring = d.ring();
    let mut entries = vec![vec![Poly::zero(ring); keep.len()]; keep.len()];
    for (ni, &i) in keep.iter().enumerate() {
        let left = d.entry(i, c).scale(&inv);
        for (nk, &k) in keep.iter().enumerate() {
            let mut v = d.entry(i, k).clone();
            if !left.is_zero() && !d.entry(r, k).is_zero() {
                v = v.sub(&left.mul(d.entry(r, k))?)?;
            }
            entries[ni][nk] = v;
        }
    }
    let gens = keep.iter().map(|&i| d.gens[i]).collect();
    FreeDM::new(ring, d.a, gens, entries)
}

/// Cancels unit entries until the differential lies in `m·D`.
pub fn minimalize(d: &FreeDM) -> Result<FreeDM> {
    minimalize_with(d, PivotOrder::RowMajor)
}

pub fn minimalize_with(d: &FreeDM, order: PivotOrder) -> Result<FreeDM> {
    d.validate()?;
    let mut cur = d.clone();
    while let Some((r, c)) = find_pivot(&cur, order)? {
        cur = cancel_pair(&cur, r, c)?;
    }
    Ok(cur)
}

/// Generator counts per degree of a minimal module.
pub fn betti_vector(d: &FreeDM) -> Result<BettiVector> {
    if let Some((row, col)) = d.first_constant() {
        return Err(Error::NotMinimal { row, col });
    }
    let mut v = BettiVector::new();
    for &g in &d.gens {
        v.add_at(g, &Rational::one());
    }
    Ok(v)
}

/// `betti_vector(minimalize(d))`
pub fn minimal_betti_vector(d: &FreeDM) -> Result<BettiVector> {
    betti_vector(&minimalize(d)?)
}

/// Rank of a polynomial matrix over the fraction field, by fraction-free
/// (Bareiss) elimination. Requires a one-variable ring.
pub fn rank_over_fraction_field(m: &GradedMatrix) -> Result<usize> {
    let ring = m.ring();
    let mut a: Vec<Vec<Poly>> = m.rows().to_vec();
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut prev = Poly::one(ring);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = a[rank][col].mul(&a[i][j])?.sub(&a[i][col].mul(&a[rank][j])?)?;
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][col] = Poly::zero(ring);
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    Ok(rank)
}

/// Finite-length homology test over `k[t]` in degree 0: the homology
/// vanishes after inverting `t` exactly when `rank ∂ = n/2` over `k(t)`.
pub fn is_finite_length_kt(d: &FreeDM) -> Result<bool> {
    if d.ring() != Ring::Univariate {
        return Err(Error::WrongRing);
    }
    if d.a != 0 {
        return Err(Error::NonzeroDegree(d.a));
    }
    let n = d.rank();
    if n % 2 == 1 {
        return Ok(false);
    }
    Ok(2 * rank_over_fraction_field(&d.d)? == n)
}

/// JSON form: `{"ring":{"nvars":n}|{"univariate":true}, "a":…, "gens":[…],
/// "matrix":[["poly", …], …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FreeDMJson {
    pub ring: RingJson,
    pub a: i64,
    pub gens: Vec<i64>,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingJson {
    Multivariate { nvars: usize },
    Univariate { univariate: bool },
}

impl RingJson {
    pub fn to_ring(&self) -> Result<Ring> {
        match self {
            RingJson::Multivariate { nvars } if *nvars >= 1 => Ok(Ring::Multivariate(*nvars)),
            RingJson::Multivariate { .. } => Err(Error::Invalid("nvars must be at least 1".into())),
            RingJson::Univariate { univariate: true } => Ok(Ring::Univariate),
            RingJson::Univariate { univariate: false } => {
                Err(Error::Invalid("\"univariate\": false is not a ring; use nvars".into()))
            }
        }
    }

    pub fn from_ring(ring: Ring) -> Self {
        match ring {
            Ring::Multivariate(nvars) => RingJson::Multivariate { nvars },
            Ring::Univariate => RingJson::Univariate { univariate: true },
        }
    }
}

impl FreeDMJson {
    pub fn to_dm(&self) -> Result<FreeDM> {
        let ring = self.ring.to_ring()?;
        let entries = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| Poly::parse(ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FreeDM::new(ring, self.a, self.gens.clone(), entries)
    }

    pub fn from_dm(d: &FreeDM) -> Self {
        FreeDMJson {
            ring: RingJson::from_ring(d.ring()),
            a: d.a,
            gens: d.gens.clone(),
            matrix: d
                .d
                .rows()
                .iter()
                .map(|row| row.iter().map(|p| p.to_string()).collect())
                .collect(),
        }
    }
}

impl Serialize for FreeDM {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FreeDMJson::from_dm(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeDM {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        FreeDMJson::deserialize(d)?.to_dm().map_err(serde::de::Error::custom)
    }
}

/// Number of distinct generator degrees.
pub fn distinct_degrees(d: &FreeDM) -> usize {
    d.gens.iter().unique().count()
}
