//! Dense exact linear algebra over Q.

use num::{One, Zero};

use crate::rational::Rational;

pub type Mat = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn transpose(m: &Mat, cols: usize) -> Mat {
    let mut out = zeros(cols, m.len());
    for (r, row) in m.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            out[c][r] = x.clone();
        }
    }
    out
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{x : m x = 0}` for an `rows x cols` matrix.
pub fn nullspace(m: &Mat, cols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[row][f].clone();
            }
            v
        })
        .collect()
}

/// Indices of a maximal linearly independent subset of `vectors`, chosen
/// greedily in order.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut basis: Mat = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial) > basis.len() {
            basis.push(v.clone());
            chosen.push(i);
        }
    }
    chosen
}

/// One solution `x` of `m x = b` if the system is consistent.
pub fn solve(m: &Mat, cols: usize, b: &[Rational]) -> Option<Vec<Rational>> {
    let mut aug: Mat = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn mat_vec(m: &Mat, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 1);
        assert!(mat_vec(&a, &k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solving() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, 2, &[int(3), int(1)]), Some(vec![int(2), int(1)]));
        let singular = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&singular, 2, &[int(1), int(3)]), None);
    }

    #[test]
    fn greedy_independence() {
        let vs = m(&[&[1, 0], &[2, 0], &[0, 1], &[1, 1]]);
        assert_eq!(independent_subset(&vs), vec![0, 2]);
    }
}
