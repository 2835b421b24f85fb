//! Degree-zero differential modules over `k[t]`: the cone functionals,
//! the simplicial decomposition into pure pairs, and homology barcodes.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::betti::BettiVector;
use crate::dm::{self, FreeDM};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::poly::Ring;
use crate::rational::{self, Rational};

/// `τ_j(β) = −β_j + Σ_{i≠j} β_i`
pub fn tau(j: i64, v: &BettiVector) -> Rational {
    v.total() - v.get(j) * rational::int(2)
}

/// `σ_j(β) = β_j`
pub fn sigma(j: i64, v: &BettiVector) -> Rational {
    v.get(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    Tau,
    Sigma,
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionalKind::Tau => "tau",
            FunctionalKind::Sigma => "sigma",
        })
    }
}

/// A cone functional that is negative on a vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: FunctionalKind,
    pub j: i64,
    #[serde(with = "rational::q")]
    pub value: Rational,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} = {}", self.kind, self.j, rational::format(&self.value))
    }
}

/// First negative `σ_j`, then first negative `τ_j`, scanning the support in
/// increasing degree. Off the support `σ_j = 0` and `τ_j` is the total, which
/// is nonnegative once all `σ` are.
pub fn first_violation(v: &BettiVector) -> Option<Violation> {
    for (j, x) in v.iter() {
        if x.is_negative() {
            return Some(Violation { kind: FunctionalKind::Sigma, j, value: x.clone() });
        }
    }
    v.support().find_map(|j| {
        let value = tau(j, v);
        value.is_negative().then_some(Violation { kind: FunctionalKind::Tau, j, value })
    })
}

pub fn in_cone_t(v: &BettiVector) -> bool {
    first_violation(v).is_none()
}

/// `coeff · (e_k + e_l)` with `k < l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurePair {
    pub k: i64,
    pub l: i64,
    pub coeff: Rational,
}

impl PurePair {
    pub fn vector(&self) -> BettiVector {
        BettiVector::pair(self.k, self.l).scale(&self.coeff)
    }
}

#[derive(Serialize, Deserialize)]
struct PurePairJson {
    #[serde(with = "rational::q")]
    coeff: Rational,
    pair: [i64; 2],
}

impl Serialize for PurePair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PurePairJson { coeff: self.coeff.clone(), pair: [self.k, self.l] }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PurePair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PurePairJson::deserialize(d)?;
        if j.pair[0] >= j.pair[1] {
            return Err(serde::de::Error::custom("pair must satisfy k < l"));
        }
        if !j.coeff.is_positive() {
            return Err(serde::de::Error::custom("coefficient must be positive"));
        }
        Ok(PurePair { k: j.pair[0], l: j.pair[1], coeff: j.coeff })
    }
}

pub fn recombine(pairs: &[PurePair]) -> BettiVector {
    pairs.iter().fold(BettiVector::new(), |acc, p| acc.add(&p.vector()))
}

/// Consecutive pairs are componentwise nondecreasing.
pub fn is_chain(pairs: &[PurePair]) -> bool {
    pairs.windows(2).all(|w| w[0].k <= w[1].k && w[0].l <= w[1].l)
}

/// Run statistics of [`decompose_traced`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTrace {
    pub pairs: Vec<PurePair>,
    /// Integer multiple of the input the algorithm actually ran on.
    pub scale: BigInt,
    /// Running vector (in the scaled normalization) after each Phase I step.
    pub phase_one_states: Vec<BettiVector>,
}

pub fn decompose(v: &BettiVector) -> Result<Vec<PurePair>> {
    Ok(decompose_traced(v)?.pairs)
}

/// Writes `v` as a positive combination of pairs `e_k + e_l` whose degree
/// sequences form a chain.
///
/// The input is scaled to integers with even sum. While every `τ_j` is
/// positive, `c = min(b_k, b_l, τ_j / 2)` copies of `e_k + e_l` are removed,
/// where `k < l` are the two smallest degrees of the support and `j` is the
/// smallest degree minimizing `τ`. Once some `τ_j` vanishes, every other
/// entry `b_i` is paired with `j`.
pub fn decompose_traced(v: &BettiVector) -> Result<DecompositionTrace> {
    if let Some(violation) = first_violation(v) {
        return Err(Error::NotInCone(violation));
    }
    let mut scale = rational::lcm_of_denominators(v.entries().values());
    let total = v.total() * Rational::from_integer(scale.clone());
    if total.to_integer().is_odd() {
        scale *= 2;
    }
    let scale_q = Rational::from_integer(scale.clone());
    let mut b: BTreeMap<i64, BigInt> =
        v.iter().map(|(j, x)| (j, (x * &scale_q).to_integer())).collect();

    let mut scaled_pairs: Vec<(i64, i64, BigInt)> = Vec::new();
    let mut states = Vec::new();
    let taus = |b: &BTreeMap<i64, BigInt>| -> Vec<(i64, BigInt)> {
        let sum: BigInt = b.values().sum();
        b.iter().map(|(&j, x)| (j, &sum - x * 2)).collect()
    };

    // Phase I
    loop {
        if b.is_empty() {
            break;
        }
        let t = taus(&b);
        if t.iter().any(|(_, x)| x.is_zero()) {
            break;
        }
        let mut support = b.keys().copied();
        let (k, l) = match (support.next(), support.next()) {
            (Some(k), Some(l)) => (k, l),
            _ => unreachable!("a one-entry vector has negative tau"),
        };
        let (_, tau_min) = t.iter().min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))).unwrap();
        let half: BigInt = tau_min / 2;
        let c = b[&k].clone().min(b[&l].clone()).min(half);
        for i in [k, l] {
            let x = b.get_mut(&i).unwrap();
            *x -= &c;
            if x.is_zero() {
                b.remove(&i);
            }
        }
        scaled_pairs.push((k, l, c));
        states.push(to_vector(&b));
    }

    // Phase II
    if !b.is_empty() {
        let t = taus(&b);
        let j = t.iter().find(|(_, x)| x.is_zero()).map(|(j, _)| *j).unwrap();
        for (&i, x) in &b {
            if i != j {
                scaled_pairs.push((i.min(j), i.max(j), x.clone()));
            }
        }
    }

    let pairs = scaled_pairs
        .into_iter()
        .map(|(k, l, c)| PurePair { k, l, coeff: Rational::from_integer(c) / &scale_q })
        .collect();
    Ok(DecompositionTrace { pairs, scale, phase_one_states: states })
}

fn to_vector(b: &BTreeMap<i64, BigInt>) -> BettiVector {
    BettiVector::from_entries(b.iter().map(|(&j, x)| (j, Rational::from_integer(x.clone()))))
}

/// Multiset of cyclic summands `A(−p)/(t^q)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Barcode {
    bars: BTreeMap<(i64, u32), u64>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars(bars: &[(i64, u32, u64)]) -> Self {
        let mut b = Self::new();
        for &(p, q, m) in bars {
            b.add(p, q, m);
        }
        b
    }

    pub fn add(&mut self, p: i64, q: u32, mult: u64) {
        assert!(q >= 1, "bars have positive length");
        if mult > 0 {
            *self.bars.entry((p, q)).or_insert(0) += mult;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u32, u64)> + '_ {
        self.bars.iter().map(|(&(p, q), &m)| (p, q, m))
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// `Σ mult · q`, the total dimension of the module.
    pub fn mass(&self) -> u64 {
        self.iter().map(|(_, q, m)| q as u64 * m).sum()
    }

    pub fn union(&self, other: &Barcode) -> Barcode {
        let mut out = self.clone();
        for (p, q, m) in other.iter() {
            out.add(p, q, m);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct BarJson {
    p: i64,
    q: u32,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct BarcodeJson {
    bars: Vec<BarJson>,
}

impl Serialize for Barcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BarcodeJson { bars: self.iter().map(|(p, q, mult)| BarJson { p, q, mult }).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Barcode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BarcodeJson::deserialize(d)?;
        if j.bars.iter().any(|b| b.q == 0) {
            return Err(serde::de::Error::custom("bars have positive length"));
        }
        Ok(Barcode::from_bars(&j.bars.iter().map(|b| (b.p, b.q, b.mult)).collect::<Vec<_>>()))
    }
}

/// Each bar `(p, q)` contributes `e_p + e_{p+q}`.
pub fn betti_from_barcode(b: &Barcode) -> BettiVector {
    let mut v = BettiVector::new();
    for (p, q, m) in b.iter() {
        let m = rational::int(m as i64);
        v.add_at(p, &m);
        v.add_at(p + q as i64, &m);
    }
    v
}

/// A finite graded vector space `V_lo ⊕ … ⊕ V_hi` with a degree-one map `T`.
/// `maps[i]` is the `dims[i+1] × dims[i]` matrix of `T : V_{lo+i} → V_{lo+i+1}`;
/// `T` is zero out of the top piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedModule {
    pub lo: i64,
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
}

impl GradedModule {
    pub fn new(lo: i64, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::DimensionMismatch(format!("{} pieces need {} maps", dims.len(), dims.len().saturating_sub(1))));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.len() != dims[i + 1] || m.iter().any(|row| row.len() != dims[i]) {
                return Err(Error::DimensionMismatch(format!("map out of piece {i}")));
            }
        }
        Ok(GradedModule { lo, dims, maps })
    }

    pub fn dim(&self, d: i64) -> usize {
        self.index(d).map(|i| self.dims[i]).unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    fn index(&self, d: i64) -> Option<usize> {
        let i = d.checked_sub(self.lo)?;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }

    /// Matrix of `T^q : V_p → V_{p+q}` (`None` if either end is outside).
    pub fn power(&self, p: i64, q: usize) -> Option<Mat> {
        let start = self.index(p)?;
        let end = self.index(p + q as i64)?;
        let mut m: Mat = (0..self.dims[start])
            .map(|i| (0..self.dims[start]).map(|j| rational::int((i == j) as i64)).collect())
            .collect();
        for k in start..end {
            m = mat_mul(&self.maps[k], &m, self.dims[start]);
        }
        Some(m)
    }

    /// `rank(T^q : V_p → V_{p+q})`, with `q = 0` giving `dim V_p`.
    pub fn rank_power(&self, p: i64, q: usize) -> usize {
        match self.power(p, q) {
            Some(m) => linalg::rank(&m),
            None => 0,
        }
    }
}

fn mat_mul(a: &Mat, b: &Mat, b_cols: usize) -> Mat {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|c| row.iter().zip(b).fold(Rational::zero(), |acc, (x, brow)| acc + x * &brow[c]))
                .collect()
        })
        .collect()
}

/// Bar multiplicities from the rank statistics
/// `N_{p,q} = r_{p,q−1} − r_{p,q} − r_{p−1,q} + r_{p−1,q+1}`.
pub fn bars_from_ranks(m: &GradedModule) -> Barcode {
    let mut out = Barcode::new();
    let len = m.dims.len();
    let r = |p: i64, q: usize| m.rank_power(p, q) as i64;
    for i in 0..len {
        let p = m.lo + i as i64;
        for q in 1..=len - i {
            let n = r(p, q - 1) - r(p, q) - r(p - 1, q) + r(p - 1, q + 1);
            assert!(n >= 0, "rank statistics produced a negative multiplicity");
            out.add(p, q as u32, n as u64);
        }
    }
    out
}

/// Degree-`d` slice of a `k[t]` module `⊕ A(−g_i)` with degree-zero
/// differential: basis `t^{d−g_i} e_i` for `g_i ≤ d`, differential given by
/// the leading coefficients, `t` acting by inclusion of coordinates.
struct Slices<'a> {
    gens: &'a [i64],
    coeffs: Vec<Vec<Rational>>,
}

impl<'a> Slices<'a> {
    fn new(d: &'a FreeDM) -> Self {
        let n = d.rank();
        let coeffs = (0..n)
            .map(|r| (0..n).map(|c| d.entry(r, c).coefficient_sum()).collect())
            .collect();
        Slices { gens: d.gens(), coeffs }
    }

    fn basis(&self, deg: i64) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.gens[i] <= deg).collect()
    }

    fn differential(&self, basis: &[usize]) -> Mat {
        basis
            .iter()
            .map(|&r| basis.iter().map(|&c| self.coeffs[r][c].clone()).collect())
            .collect()
    }
}

/// Homology of a valid degree-zero `k[t]` module as a graded module with
/// its `t`-action, over `[min gens, max gens + max exponent + 1]`.
pub fn homology_module(d: &FreeDM) -> Result<GradedModule> {
    check_kt(d)?;
    d.validate()?;
    if !dm::is_finite_length_kt(d)? {
        return Err(Error::NotFiniteLength);
    }
    if d.rank() == 0 {
        return GradedModule::new(0, vec![], vec![]);
    }
    let lo = *d.gens().iter().min().unwrap();
    let max_exp = (0..d.rank())
        .flat_map(|r| (0..d.rank()).map(move |c| (r, c)))
        .filter_map(|(r, c)| d.entry(r, c).max_degree())
        .max()
        .unwrap_or(0) as i64;
    let hi = *d.gens().iter().max().unwrap() + max_exp + 1;
    let slices = Slices::new(d);

    // For each degree: basis indices, image basis, and homology representatives.
    struct Piece {
        basis: Vec<usize>,
        image: Vec<Vec<Rational>>,
        reps: Vec<Vec<Rational>>,
    }
    let mut pieces = Vec::new();
    for deg in lo..=hi {
        let basis = slices.basis(deg);
        let n = basis.len();
        let m = slices.differential(&basis);
        let kernel = linalg::nullspace(&m, n);
        let cols = linalg::transpose(&m, n);
        let image: Vec<Vec<Rational>> =
            linalg::independent_subset(&cols).into_iter().map(|i| cols[i].clone()).collect();
        let mut span = image.clone();
        let mut reps = Vec::new();
        for z in kernel {
            span.push(z.clone());
            if linalg::rank(&span) > image.len() + reps.len() {
                reps.push(z);
            } else {
                span.pop();
            }
        }
        pieces.push(Piece { basis, image, reps });
    }
    if !pieces[pieces.len() - 1].reps.is_empty() {
        return Err(Error::NotFiniteLength);
    }

    let dims: Vec<usize> = pieces.iter().map(|p| p.reps.len()).collect();
    let mut maps = Vec::new();
    for w in pieces.windows(2) {
        let (src, dst) = (&w[0], &w[1]);
        // Solve ι(h) = Σ a_k image_k + Σ b_k reps_k and keep b.
        let columns: Vec<Vec<Rational>> = dst.image.iter().chain(&dst.reps).cloned().collect();
        let system = linalg::transpose(&columns, dst.basis.len());
        let mut block = vec![vec![Rational::zero(); src.reps.len()]; dst.reps.len()];
        for (k, h) in src.reps.iter().enumerate() {
            let lifted: Vec<Rational> = dst
                .basis
                .iter()
                .map(|i| match src.basis.iter().position(|j| j == i) {
                    Some(pos) => h[pos].clone(),
                    None => Rational::zero(),
                })
                .collect();
            let x = linalg::solve(&system, columns.len(), &lifted)
                .expect("cycles map to cycles under t");
            for (row, value) in x[dst.image.len()..].iter().enumerate() {
                block[row][k] = value.clone();
            }
        }
        maps.push(block);
    }
    GradedModule::new(lo, dims, maps)
}

fn check_kt(d: &FreeDM) -> Result<()> {
    if d.ring() != Ring::Univariate {
        return Err(Error::WrongRing);
    }
    if d.degree() != 0 {
        return Err(Error::NonzeroDegree(d.degree()));
    }
    Ok(())
}

pub fn barcode(d: &FreeDM) -> Result<Barcode> {
    Ok(bars_from_ranks(&homology_module(d)?))
}

/// `rank(t^q : H_p → H_{p+q})` computed directly in `D` as
/// `rank [ι(Z_p) | B_{p+q}] − rank B_{p+q}`.
pub fn homology_rank_direct(d: &FreeDM, p: i64, q: usize) -> Result<usize> {
    check_kt(d)?;
    let slices = Slices::new(d);
    let top = p + q as i64;
    let src = slices.basis(p);
    let dst = slices.basis(top);
    let kernel = linalg::nullspace(&slices.differential(&src), src.len());
    let m = slices.differential(&dst);
    let image = linalg::transpose(&m, dst.len());
    let mut both = image.clone();
    for z in kernel {
        both.push(
            dst.iter()
                .map(|i| src.iter().position(|j| j == i).map(|k| z[k].clone()).unwrap_or_else(Rational::zero))
                .collect(),
        );
    }
    Ok(linalg::rank(&both) - linalg::rank(&image))
}
