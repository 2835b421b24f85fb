//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the algorithms it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dmbetti::kt::{Barcode, GradedModule};
use dmbetti::rational::{self, Rational};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Mat = Vec<Vec<Rational>>;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Row echelon form by plain Gaussian elimination; returns pivot columns.
fn echelon(m: &mut Mat, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    echelon(&mut m.clone(), cols).len()
}

pub fn kernel(m: &Mat, cols: usize) -> Vec<Vec<Rational>> {
    let mut w = m.clone();
    let pivots = echelon(&mut w, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -w[r][f].clone();
            }
            v
        })
        .collect()
}

fn apply(m: &Mat, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

// ---------------------------------------------------------------------------
// Sheaf cohomology by counting monomials

/// Number of monomials of degree `e` in `vars` variables.
pub fn monomials(vars: u32, e: i64) -> BigInt {
    if e < 0 {
        return BigInt::zero();
    }
    if vars == 0 {
        return if e == 0 { BigInt::one() } else { BigInt::zero() };
    }
    (0..=e).map(|k| monomials(vars - 1, e - k)).sum()
}

/// `h^0 + h^m` of `O_{P^m}(e)`: monomials of degree `e`, and by Serre duality
/// monomials of degree `−e−m−1`.
pub fn line_bundle_cohomology(m: u32, e: i64) -> Rational {
    Rational::from_integer(monomials(m + 1, e) + monomials(m + 1, -e - m as i64 - 1))
}

// ---------------------------------------------------------------------------
// Chain bases of graded nilpotent actions

/// Image of `v ∈ V_i` under `T^k`, or `None` once it leaves the module.
fn push_forward(m: &GradedModule, i: usize, v: &[Rational], k: usize) -> Option<Vec<Rational>> {
    let mut cur = v.to_vec();
    for step in 0..k {
        let at = i + step;
        if at + 1 >= m.dims.len() {
            return None;
        }
        cur = apply(&m.maps[at], &cur);
    }
    Some(cur)
}

/// Bars found by extracting a chain basis greedily, longest chains first.
/// Chains are independent exactly when their last vectors are, so each
/// candidate kept for length `q` must have its tail `T^{q−1} v` independent
/// of the tails already chosen in that degree. Candidates run over a basis
/// of `ker T^q`. Panics if the chains fail to span.
pub fn greedy_barcode(m: &GradedModule) -> Barcode {
    let len = m.dims.len();
    let mut tails: Vec<Mat> = vec![Vec::new(); len];
    let mut out = Barcode::new();
    let mut covered = 0;
    for q in (1..=len).rev() {
        for i in 0..len {
            if i + q > len || m.dims[i] == 0 {
                continue;
            }
            let candidates = if i + q < len {
                let image: Mat = (0..m.dims[i])
                    .map(|c| {
                        let mut e = vec![Rational::zero(); m.dims[i]];
                        e[c] = Rational::one();
                        push_forward(m, i, &e, q).unwrap()
                    })
                    .collect();
                // columns of T^q are the images of the unit vectors
                let t = transpose(&image, m.dims[i + q]);
                kernel(&t, m.dims[i])
            } else {
                identity(m.dims[i])
            };
            for v in candidates {
                let tail = push_forward(m, i, &v, q - 1).unwrap();
                let slot = &mut tails[i + q - 1];
                let before = slot.len();
                slot.push(tail);
                if rank(slot) == before + 1 {
                    out.add(m.lo + i as i64, q as u32, 1);
                    covered += q;
                } else {
                    slot.pop();
                }
            }
        }
    }
    assert_eq!(covered, m.total_dim(), "greedy chains do not span");
    out
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

fn transpose(m: &Mat, cols: usize) -> Mat {
    (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

fn mul(a: &Mat, b: &Mat, b_cols: usize) -> Mat {
    a.iter()
        .map(|row| (0..b_cols).map(|c| row.iter().zip(b).map(|(x, br)| x * &br[c]).sum()).collect())
        .collect()
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-3..=3))
}

/// A random invertible `n × n` matrix with its inverse, as a product of
/// elementary operations.
fn random_gl(rng: &mut ChaCha8Rng, n: usize) -> (Mat, Mat) {
    let mut p = identity(n);
    let mut inv = identity(n);
    if n == 0 {
        return (p, inv);
    }
    for _ in 0..3 * n {
        let r = rng.gen_range(0..n);
        let c = rng.gen_range(0..n);
        if r == c {
            let s = q(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
            for x in p[r].iter_mut() {
                *x *= &s;
            }
            for row in inv.iter_mut() {
                row[r] /= &s;
            }
        } else {
            let f = small(rng);
            // p ← E p with E = I + f e_{rc}; inv ← inv E⁻¹
            let src = p[c].clone();
            for (x, y) in p[r].iter_mut().zip(&src) {
                *x += &f * y;
            }
            for row in inv.iter_mut() {
                let y = row[r].clone();
                row[c] -= &f * y;
            }
        }
    }
    (p, inv)
}

/// A graded module with a prescribed barcode, disguised by a random change
/// of basis in every degree.
pub fn random_nilpotent(rng: &mut ChaCha8Rng, lo: i64, len: usize, max_bars: usize) -> (GradedModule, Barcode) {
    let mut bars = Barcode::new();
    let mut members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); len];
    let count = rng.gen_range(1..=max_bars);
    let mut chains: Vec<(usize, usize)> = Vec::new();
    for _ in 0..count {
        let i = rng.gen_range(0..len);
        let q = rng.gen_range(1..=len - i);
        bars.add(lo + i as i64, q as u32, 1);
        chains.push((i, q));
    }
    // basis index of chain k in degree i + s
    for (k, &(i, q)) in chains.iter().enumerate() {
        for s in 0..q {
            members[i + s].push((k, s));
        }
    }
    let dims: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut maps: Vec<Mat> = Vec::new();
    for d in 0..len.saturating_sub(1) {
        let mut t = vec![vec![Rational::zero(); dims[d]]; dims[d + 1]];
        for (col, &(k, s)) in members[d].iter().enumerate() {
            if let Some(row) = members[d + 1].iter().position(|&(k2, s2)| k2 == k && s2 == s + 1) {
                t[row][col] = Rational::one();
            }
        }
        maps.push(t);
    }
    let changes: Vec<(Mat, Mat)> = dims.iter().map(|&n| random_gl(rng, n)).collect();
    let maps = maps
        .iter()
        .enumerate()
        .map(|(d, t)| {
            let (p_next, _) = &changes[d + 1];
            let (_, p_inv) = &changes[d];
            let left = mul(p_next, t, dims[d]);
            mul(&left, p_inv, dims[d])
        })
        .collect();
    (GradedModule::new(lo, dims, maps).expect("well formed"), bars)
}

// ---------------------------------------------------------------------------
// Facets by brute force over generator subsets

/// Facet normals of `cone(gens)` inside its span, as primitive integer
/// vectors: every `(r−1)`-subset of generators of rank `r−1` gives a normal
/// in the span, kept when all generators lie on one side of it.
pub fn brute_force_facets(gens: &[Vec<Rational>]) -> BTreeSet<Vec<BigInt>> {
    let dim = gens.first().map_or(0, Vec::len);
    let r = rank(&gens.to_vec());
    let basis = span_basis(gens);
    let mut out = BTreeSet::new();
    if r == 0 {
        return out;
    }
    for subset in subsets(gens.len(), r - 1) {
        let chosen: Mat = subset.iter().map(|&i| gens[i].clone()).collect();
        if rank(&chosen) != r - 1 {
            continue;
        }
        // n = Σ c_k b_k with ⟨n, s⟩ = 0 for each chosen s
        let system: Mat = chosen.iter().map(|s| basis.iter().map(|b| dot(b, s)).collect()).collect();
        let sols = kernel(&system, basis.len());
        assert_eq!(sols.len(), 1);
        let normal: Vec<Rational> = (0..dim).map(|t| sols[0].iter().zip(&basis).map(|(c, b)| c * &b[t]).sum()).collect();
        let values: Vec<Rational> = gens.iter().map(|g| dot(&normal, g)).collect();
        let oriented = if values.iter().all(|v| !v.is_negative()) {
            normal
        } else if values.iter().all(|v| !v.is_positive()) {
            normal.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        out.insert(rational::primitive_integer(&oriented));
    }
    out
}

fn span_basis(gens: &[Vec<Rational>]) -> Mat {
    let mut basis: Mat = Vec::new();
    for g in gens {
        basis.push(g.clone());
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}
