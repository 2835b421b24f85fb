//! Polynomial matrices with degree bookkeeping.

use crate::error::{Error, Result};
use crate::poly::{Poly, Ring};

/// A matrix of a homogeneous map `F -> G(twist)` between free graded modules.
///
/// Column `c` is the image of the basis element of degree `col_degrees[c]`,
/// so entry `(r, c)` is zero or homogeneous of degree
/// `col_degrees[c] + twist - row_degrees[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: Ring,
    row_degrees: Vec<i64>,
    col_degrees: Vec<i64>,
    twist: i64,
    entries: Vec<Vec<Poly>>,
}

impl GradedMatrix {
    /// Checks shape and ring only. Use [`GradedMatrix::check_homogeneous`]
    /// for the grading.
    pub fn new(
        ring: Ring,
        row_degrees: Vec<i64>,
        col_degrees: Vec<i64>,
        twist: i64,
        entries: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        if entries.len() != row_degrees.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows for {} row degrees",
                entries.len(),
                row_degrees.len()
            )));
        }
        for row in &entries {
            if row.len() != col_degrees.len() {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} for {} columns",
                    row.len(),
                    col_degrees.len()
                )));
            }
            if let Some(p) = row.iter().find(|p| p.ring() != ring) {
                return Err(Error::RingMismatch(format!("entry in {:?}, matrix in {ring:?}", p.ring())));
            }
        }
        Ok(GradedMatrix { ring, row_degrees, col_degrees, twist, entries })
    }

    pub fn zero(ring: Ring, row_degrees: Vec<i64>, col_degrees: Vec<i64>, twist: i64) -> Self {
        let entries = vec![vec![Poly::zero(ring); col_degrees.len()]; row_degrees.len()];
        GradedMatrix { ring, row_degrees, col_degrees, twist, entries }
    }

    pub fn identity(ring: Ring, degrees: Vec<i64>) -> Self {
        let mut m = Self::zero(ring, degrees.clone(), degrees, 0);
        for i in 0..m.nrows() {
            m.entries[i][i] = Poly::one(ring);
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.row_degrees.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_degrees.len()
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn row_degrees(&self) -> &[i64] {
        &self.row_degrees
    }

    pub fn col_degrees(&self) -> &[i64] {
        &self.col_degrees
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r][c] = p;
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn required_degree(&self, r: usize, c: usize) -> i64 {
        self.col_degrees[c] + self.twist - self.row_degrees[r]
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        for r in 0..self.nrows() {
            for c in 0..self.ncols() {
                let expected = self.required_degree(r, c);
                if !self.entries[r][c].is_homogeneous_of(expected) {
                    return Err(Error::NotHomogeneous { row: r, col: c, expected });
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        (0..self.nrows())
            .flat_map(|r| (0..self.ncols()).map(move |c| (r, c)))
            .find(|&(r, c)| !self.entries[r][c].is_zero())
    }

    /// `self · other`. The source of `self` must be the target of `other`
    /// (before the twist), i.e. `self.col_degrees == other.row_degrees`; the
    /// twists add.
    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)));
        }
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                other.nrows(),
                other.ncols()
            )));
        }
        if self.col_degrees != other.row_degrees {
            return Err(Error::GradingMismatch(format!(
                "column degrees {:?} vs row degrees {:?}",
                self.col_degrees, other.row_degrees
            )));
        }
        let mut out = GradedMatrix::zero(
            self.ring,
            self.row_degrees.clone(),
            other.col_degrees.clone(),
            self.twist + other.twist,
        );
        for r in 0..self.nrows() {
            for c in 0..other.ncols() {
                let mut acc = Poly::zero(self.ring);
                for k in 0..self.ncols() {
                    let (a, b) = (&self.entries[r][k], &other.entries[k][c]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                out.entries[r][c] = acc;
            }
        }
        Ok(out)
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        GradedMatrix {
            ring: self.ring,
            row_degrees: rows.iter().map(|&r| self.row_degrees[r]).collect(),
            col_degrees: cols.iter().map(|&c| self.col_degrees[c]).collect(),
            twist: self.twist,
            entries: rows
                .iter()
                .map(|&r| cols.iter().map(|&c| self.entries[r][c].clone()).collect())
                .collect(),
        }
    }
}
