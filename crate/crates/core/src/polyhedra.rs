//! Exact rational cones over a degree window: facets via double
//! description, and membership with certificates.

use std::collections::HashSet;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::betti::BettiVector;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::rational::{self, Rational};

/// Cone spanned by dense generators indexed by the window `[p, q]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeV {
    pub window: (i64, i64),
    #[serde(with = "rational::q_matrix")]
    pub generators: Vec<Vec<Rational>>,
}

/// `⟨ineq, x⟩ ≥ 0` for every inequality and `⟨eq, x⟩ = 0` for every
/// equation. Inequalities lie in the linear span of the cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeH {
    pub window: (i64, i64),
    #[serde(with = "rational::int_matrix")]
    pub inequalities: Vec<Vec<BigInt>>,
    #[serde(with = "rational::int_matrix", default)]
    pub equations: Vec<Vec<BigInt>>,
}

fn width(window: (i64, i64)) -> Result<usize> {
    let (p, q) = window;
    if p > q {
        return Err(Error::InvalidWindow { p, q });
    }
    Ok((q - p + 1) as usize)
}

impl ConeV {
    pub fn new(window: (i64, i64), generators: Vec<Vec<Rational>>) -> Result<Self> {
        let w = width(window)?;
        for (i, g) in generators.iter().enumerate() {
            if g.len() != w {
                return Err(Error::LengthMismatch(g.len(), w));
            }
            if g.iter().all(Zero::is_zero) {
                return Err(Error::Invalid(format!("generator {i} is zero")));
            }
        }
        Ok(ConeV { window, generators })
    }

    /// Densifies sparse vectors; every vector must be supported in the window.
    pub fn from_vectors<'a>(window: (i64, i64), vectors: impl IntoIterator<Item = &'a BettiVector>) -> Result<Self> {
        let (p, q) = window;
        width(window)?;
        let gens = vectors
            .into_iter()
            .map(|v| {
                if v.supported_in(p, q) {
                    Ok(v.to_dense(p, q))
                } else {
                    Err(Error::Invalid(format!("vector {v} is not supported in [{p},{q}]")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(window, gens)
    }

    pub fn dim(&self) -> usize {
        (self.window.1 - self.window.0 + 1) as usize
    }

    /// Dimension of the linear span.
    pub fn rank(&self) -> usize {
        linalg::rank(&self.generators)
    }
}

impl ConeH {
    pub fn contains(&self, x: &[Rational]) -> bool {
        let eval = |a: &Vec<BigInt>| linalg::dot(&to_q(a), x);
        self.inequalities.iter().all(|a| !eval(a).is_negative()) && self.equations.iter().all(|a| eval(a).is_zero())
    }

    /// Canonical form of a functional as seen by the cone: its orthogonal
    /// projection onto the span, scaled to a primitive integer vector.
    pub fn canonical_on_span(&self, w: &[Rational]) -> Vec<BigInt> {
        rational::primitive_integer(&project_off(&self.equations, w))
    }
}

fn to_q(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `w` minus its orthogonal projection onto the row space of `e`.
fn project_off(e: &[Vec<BigInt>], w: &[Rational]) -> Vec<Rational> {
    if e.is_empty() {
        return w.to_vec();
    }
    let eq: Mat = e.iter().map(|r| to_q(r)).collect();
    let gram: Mat = eq.iter().map(|a| eq.iter().map(|b| linalg::dot(a, b)).collect()).collect();
    let rhs = linalg::mat_vec(&eq, w);
    let z = linalg::solve(&gram, eq.len(), &rhs).expect("equations are independent");
    let mut out = w.to_vec();
    for (coef, row) in z.iter().zip(&eq) {
        for (o, x) in out.iter_mut().zip(row) {
            *o -= coef * x;
        }
    }
    out
}

/// Fixed-width bitset over the constraint indices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn contains_all(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

/// Extreme rays of `{y : ⟨a_i, y⟩ ≥ 0}` where the first `r` rows of `a`
/// are the unit vectors of `Z^r`.
fn double_description(a: &[Vec<BigInt>], r: usize) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let mut rays: Vec<Ray> = (0..r)
        .map(|i| {
            let mut v = vec![BigInt::zero(); r];
            v[i] = BigInt::one();
            let mut zeros = Bits::new(m);
            (0..r).filter(|&k| k != i).for_each(|k| zeros.set(k));
            Ray { v, zeros }
        })
        .collect();
    for (row_index, row) in a.iter().enumerate().skip(r) {
        let vals: Vec<BigInt> = rays.iter().map(|ray| dot_int(row, &ray.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
        for &i in &pos {
            for &j in &neg {
                let common = rays[i].zeros.and(&rays[j].zeros);
                if (common.count() as usize) + 2 < r {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == i || k == j || !rays[k].zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let combo: Vec<BigInt> = rays[j]
                    .v
                    .iter()
                    .zip(&rays[i].v)
                    .map(|(n, p)| &vals[i] * n - &vals[j] * p)
                    .collect();
                let combo = rational::primitive(combo);
                if seen.insert(combo.clone()) {
                    let mut zeros = common;
                    zeros.set(row_index);
                    next.push(Ray { v: combo, zeros });
                }
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut ray) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                ray.zeros.set(row_index);
            }
            if seen.insert(ray.v.clone()) {
                kept.push(ray);
            }
        }
        kept.extend(next);
        rays = kept;
    }
    rays.into_iter().map(|r| r.v).collect()
}

/// Basis of the orthogonal complement of the span, in reduced echelon form,
/// scaled to primitive integers.
fn span_equations(gens: &Mat, n: usize) -> Vec<Vec<BigInt>> {
    let mut basis = linalg::nullspace(gens, n);
    linalg::rref(&mut basis);
    basis
        .iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .map(|row| rational::primitive_integer(row))
        .collect()
}

/// Irredundant facet description of the conical hull of the generators.
///
/// The computation runs in coordinates of the linear span with respect to a
/// maximal independent subset of the generators, so lower-dimensional cones
/// give facets inside their span together with the span's equations.
pub fn v_to_h(c: &ConeV) -> Result<ConeH> {
    if c.generators.is_empty() {
        return Err(Error::Invalid("a cone needs at least one generator".into()));
    }
    let n = c.dim();
    let equations = span_equations(&c.generators, n);
    let basis_idx = linalg::independent_subset(&c.generators);
    let r = basis_idx.len();
    let basis_cols = linalg::transpose(&basis_idx.iter().map(|&i| c.generators[i].clone()).collect(), n);

    // Coordinates of every generator, independent ones first.
    let order: Vec<usize> = basis_idx
        .iter()
        .copied()
        .chain((0..c.generators.len()).filter(|i| !basis_idx.contains(i)))
        .collect();
    let coords: Vec<Vec<BigInt>> = order
        .iter()
        .map(|&i| {
            let x = linalg::solve(&basis_cols, r, &c.generators[i]).expect("generator lies in its own span");
            rational::primitive_integer(&x)
        })
        .collect();

    let rays = double_description(&coords, r);

    // Back to the window: y = B (BᵀB)⁻¹ w.
    let b: Mat = basis_idx.iter().map(|&i| c.generators[i].clone()).collect();
    let gram: Mat = b.iter().map(|u| b.iter().map(|v| linalg::dot(u, v)).collect()).collect();
    let mut inequalities: Vec<Vec<BigInt>> = Vec::new();
    for w in rays {
        let tight: Mat = coords
            .iter()
            .filter(|g| dot_int(g, &w).is_zero())
            .map(|g| to_q(g))
            .collect();
        if linalg::rank(&tight) + 1 != r {
            continue;
        }
        let z = linalg::solve(&gram, r, &to_q(&w)).expect("independent generators");
        let mut y = vec![Rational::zero(); n];
        for (zi, row) in z.iter().zip(&b) {
            for (yk, x) in y.iter_mut().zip(row) {
                *yk += zi * x;
            }
        }
        inequalities.push(rational::primitive_integer(&y));
    }
    inequalities.sort();
    inequalities.dedup();
    Ok(ConeH { window: c.window, inequalities, equations })
}

/// Result of a membership query, always with a checked certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// `x = Σ coefficients[i] · generators[i]`, all coefficients `≥ 0`.
    Inside {
        #[serde(with = "rational::q_vec")]
        coefficients: Vec<Rational>,
    },
    /// `⟨functional, g⟩ ≥ 0` on every generator and `⟨functional, x⟩ < 0`.
    Outside {
        #[serde(with = "rational::q_vec")]
        functional: Vec<Rational>,
    },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Checks a certificate against the cone and the query vector.
pub fn verify_certificate(c: &ConeV, x: &[Rational], m: &Membership) -> bool {
    match m {
        Membership::Inside { coefficients } => {
            if coefficients.len() != c.generators.len() || coefficients.iter().any(|l| l.is_negative()) {
                return false;
            }
            let mut sum = vec![Rational::zero(); x.len()];
            for (l, g) in coefficients.iter().zip(&c.generators) {
                for (s, gi) in sum.iter_mut().zip(g) {
                    *s += l * gi;
                }
            }
            sum == x
        }
        Membership::Outside { functional } => {
            functional.len() == x.len()
                && c.generators.iter().all(|g| !linalg::dot(functional, g).is_negative())
                && linalg::dot(functional, x).is_negative()
        }
    }
}

/// Decides `x ∈ cone(C)` by a phase-one simplex (Bland's rule) on
/// `Σ λ_i g_i = x`, `λ ≥ 0`. An infeasible system yields a Farkas
/// functional from the final duals.
pub fn membership(x: &[Rational], c: &ConeV) -> Result<Membership> {
    let n = c.dim();
    if x.len() != n {
        return Err(Error::LengthMismatch(x.len(), n));
    }
    let m = c.generators.len();
    // Row signs make the right-hand side nonnegative.
    let signs: Vec<Rational> = x
        .iter()
        .map(|v| if v.is_negative() { -Rational::one() } else { Rational::one() })
        .collect();
    let cols = m + n;
    // column j < m: generator j (signed); column m + i: artificial for row i.
    let column = |j: usize| -> Vec<Rational> {
        if j < m {
            (0..n).map(|i| &signs[i] * &c.generators[j][i]).collect()
        } else {
            (0..n).map(|i| rational::int((i == j - m) as i64)).collect()
        }
    };
    let mut tab: Mat = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..cols).map(|j| column(j)[i].clone()).collect();
            row.push(&signs[i] * &x[i]);
            row
        })
        .collect();
    let cost = |j: usize| if j >= m { Rational::one() } else { Rational::zero() };
    let mut basis: Vec<usize> = (m..m + n).collect();

    loop {
        // reduced costs: c_j − Σ_i c_{B_i} tab[i][j]
        let reduced = |j: usize, tab: &Mat, basis: &[usize]| {
            let mut r = cost(j);
            for (i, &bv) in basis.iter().enumerate() {
                r -= cost(bv) * &tab[i][j];
            }
            r
        };
        let Some(enter) = (0..cols).find(|&j| !basis.contains(&j) && reduced(j, &tab, &basis).is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..n {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][cols] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (pr, _) = leave.expect("phase one is bounded below by zero");
        let inv = Rational::one() / &tab[pr][enter];
        for v in tab[pr].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != pr && !tab[i][enter].is_zero() {
                let f = tab[i][enter].clone();
                for j in 0..=cols {
                    let d = &tab[pr][j] * &f;
                    tab[i][j] -= d;
                }
            }
        }
        basis[pr] = enter;
    }

    let objective: Rational = basis
        .iter()
        .enumerate()
        .map(|(i, &bv)| cost(bv) * &tab[i][cols])
        .sum();
    let result = if objective.is_zero() {
        let mut coefficients = vec![Rational::zero(); m];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < m {
                coefficients[bv] = tab[i][cols].clone();
            }
        }
        Membership::Inside { coefficients }
    } else {
        // Duals u solve B_matᵀ u = c_B; then y = −S u separates.
        let bt: Mat = basis.iter().map(|&bv| column(bv)).collect();
        let cb: Vec<Rational> = basis.iter().map(|&bv| cost(bv)).collect();
        let u = linalg::solve(&bt, n, &cb).expect("basis matrix is invertible");
        let functional = u.iter().zip(&signs).map(|(ui, s)| -(ui * s)).collect();
        Membership::Outside { functional }
    };
    if !verify_certificate(c, x, &result) {
        return Err(Error::Invalid("membership certificate failed verification".into()));
    }
    Ok(result)
}

/// The generators are nonnegative and every unit vector of the window lies
/// in the cone.
pub fn equals_positive_orthant(c: &ConeV) -> Result<bool> {
    if c.generators.iter().flatten().any(Signed::is_negative) {
        return Ok(false);
    }
    let n = c.dim();
    for i in 0..n {
        let e: Vec<Rational> = (0..n).map(|k| rational::int((k == i) as i64)).collect();
        if !membership(&e, c)?.is_inside() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pure::{enumerate_pure_vectors, pure_vectors_supported_in};
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn cone(window: (i64, i64), gens: &[&[i64]]) -> ConeV {
        ConeV::new(window, gens.iter().map(|g| q(g)).collect()).unwrap()
    }

    #[test]
    fn orthant() {
        let h = v_to_h(&cone((0, 2), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(h.inequalities, vec![z(&[0, 0, 1]), z(&[0, 1, 0]), z(&[1, 0, 0])]);
        assert!(h.equations.is_empty());
    }

    #[test]
    fn pair_cone() {
        let h = v_to_h(&cone((0, 2), &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])).unwrap();
        assert_eq!(h.inequalities, vec![z(&[-1, 1, 1]), z(&[1, -1, 1]), z(&[1, 1, -1])]);
    }

    #[test]
    fn ray_and_plane() {
        let h = v_to_h(&cone((0, 2), &[&[1, 2, 1]])).unwrap();
        assert_eq!(h.inequalities, vec![z(&[1, 2, 1])]);
        assert_eq!(h.equations.len(), 2);
        for e in &h.equations {
            assert!(dot_int(e, &z(&[1, 2, 1])).is_zero());
        }
        let plane = v_to_h(&cone((0, 2), &[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(plane.inequalities, vec![z(&[0, 1, 0]), z(&[1, 0, 0])]);
        assert_eq!(plane.equations, vec![z(&[0, 0, 1])]);
        let line = v_to_h(&cone((0, 1), &[&[1, -1], &[-1, 1]])).unwrap();
        assert!(line.inequalities.is_empty());
        assert_eq!(line.equations, vec![z(&[1, 1])]);
    }

    #[test]
    fn canonical_projection() {
        let h = v_to_h(&cone((0, 1), &[&[1, 1]])).unwrap();
        assert_eq!(h.canonical_on_span(&q(&[1, 0])), z(&[1, 1]));
        assert_eq!(h.canonical_on_span(&q(&[-1, 1])), z(&[0, 0]));
    }

    fn pure_cone(n: usize) -> ConeV {
        let pv = enumerate_pure_vectors(n, 0, (0, 4)).unwrap();
        ConeV::from_vectors((0, 4), pv.iter().map(|p| &p.vector)).unwrap()
    }

    #[test]
    fn pure_memberships() {
        let c = pure_cone(2);
        for x in [q(&[1, 2, 0, 2, 1]), q(&[1, 2, 2, 2, 1])] {
            let m = membership(&x, &c).unwrap();
            assert!(m.is_inside());
            assert!(verify_certificate(&c, &x, &m));
        }
        let e0 = q(&[1, 0, 0, 0, 0]);
        let m = membership(&e0, &c).unwrap();
        assert!(!m.is_inside());
        assert!(verify_certificate(&c, &e0, &m));
    }

    #[test]
    fn printed_decompositions_are_certificates() {
        let c = pure_cone(2);
        let x = q(&[1, 2, 0, 2, 1]);
        let idx = |v: &[i64]| c.generators.iter().position(|g| *g == q(v)).unwrap();
        let mut coefficients = vec![int(0); c.generators.len()];
        coefficients[idx(&[2, 3, 0, 1, 0])] = frac(1, 2);
        coefficients[idx(&[0, 1, 0, 3, 2])] = frac(1, 2);
        assert!(verify_certificate(&c, &x, &Membership::Inside { coefficients }));
    }

    #[test]
    fn empty_cone_separates_everything() {
        let c = ConeV::new((0, 1), vec![]).unwrap();
        let m = membership(&q(&[2, -1]), &c).unwrap();
        assert!(!m.is_inside());
        assert!(membership(&q(&[0, 0]), &c).unwrap().is_inside());
        assert!(v_to_h(&c).is_err());
    }

    #[test]
    fn orthant_comparison() {
        let koszul = pure_vectors_supported_in(2, 1, (0, 3)).unwrap();
        let c = ConeV::from_vectors((0, 3), koszul.iter().map(|p| &p.vector)).unwrap();
        assert!(equals_positive_orthant(&c).unwrap());
        let flat = pure_vectors_supported_in(2, 0, (0, 3)).unwrap();
        let c0 = ConeV::from_vectors((0, 3), flat.iter().map(|p| &p.vector)).unwrap();
        assert!(!equals_positive_orthant(&c0).unwrap());
        let basis = cone((0, 2), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(equals_positive_orthant(&basis).unwrap());
    }

    #[test]
    fn one_variable_cones_are_cut_out_by_tau_and_sigma() {
        for top in 2..=6 {
            let window = (0, top);
            let pv = enumerate_pure_vectors(1, 0, window).unwrap();
            let c = ConeV::from_vectors(window, pv.iter().map(|p| &p.vector)).unwrap();
            let h = v_to_h(&c).unwrap();
            let width = top as usize + 1;
            let mut candidates: Vec<Vec<BigInt>> = Vec::new();
            for j in 0..width {
                let tau: Vec<i64> = (0..width).map(|i| if i == j { -1 } else { 1 }).collect();
                let sigma: Vec<i64> = (0..width).map(|i| (i == j) as i64).collect();
                for f in [tau, sigma] {
                    let tight: Mat = c.generators.iter().filter(|g| linalg::dot(&q(&f), g).is_zero()).cloned().collect();
                    if linalg::rank(&tight) + 1 == width {
                        candidates.push(z(&f));
                    }
                }
            }
            candidates.sort();
            assert_eq!(h.inequalities, candidates, "window [0,{top}]");
        }
    }

    #[test]
    fn json_shapes() {
        let c = cone((0, 1), &[&[1, 1]]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"window":[0,1],"generators":[["1/1","1/1"]]}"#);
        assert_eq!(serde_json::from_str::<ConeV>(&s).unwrap(), c);
        let h = v_to_h(&c).unwrap();
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"window":[0,1],"inequalities":[["1/1","1/1"]],"equations":[["1/1","-1/1"]]}"#);
        let m = Membership::Inside { coefficients: vec![int(1)] };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"inside":{"coefficients":["1/1"]}}"#);
    }

    fn small_cone() -> impl Strategy<Value = ConeV> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(-2i64..=3, n), 1..=6).prop_map(move |gens| {
                let gens: Vec<Vec<Rational>> =
                    gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).map(|g| q(&g)).collect();
                let gens = if gens.is_empty() { vec![q(&vec![1; n])] } else { gens };
                ConeV::new((0, n as i64 - 1), gens).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn generators_satisfy_their_facets(c in small_cone()) {
            let h = v_to_h(&c).unwrap();
            for g in &c.generators {
                prop_assert!(h.contains(g));
            }
            prop_assert_eq!(h.equations.len(), c.dim() - c.rank());
            for f in &h.inequalities {
                let tight: Mat = c.generators.iter().filter(|g| linalg::dot(&to_q(f), g).is_zero()).cloned().collect();
                prop_assert_eq!(linalg::rank(&tight) + 1, c.rank());
                prop_assert!(c.generators.iter().any(|g| linalg::dot(&to_q(f), g).is_positive()));
            }
        }

        #[test]
        fn membership_certificates_check_out(c in small_cone(), x in prop::collection::vec(-3i64..=3, 4)) {
            let x = q(&x[..c.dim()]);
            let m = membership(&x, &c).unwrap();
            prop_assert!(verify_certificate(&c, &x, &m));
            let h = v_to_h(&c).unwrap();
            prop_assert_eq!(m.is_inside(), h.contains(&x));
        }
    }
}
