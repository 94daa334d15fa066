//! Nonsingular M-matrices: Z-matrices (nonpositive off-diagonal) whose
//! leading principal minors are all positive, equivalently those admitting
//! a positive `z` with `H z > 0`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

/// Minors with magnitude below this are reported as boundary cases.
pub const MINOR_ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixError {
    OffDiagonalPositive {
        i: usize,
        j: usize,
        value: f64,
    },
    /// A leading minor too close to zero to be signed.
    BoundaryCase {
        order: usize,
        minor: f64,
    },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::OffDiagonalPositive { i, j, value } => {
                write!(f, "off-diagonal entry ({i}, {j}) = {value} is positive")
            }
            MatrixError::BoundaryCase { order, minor } => {
                write!(
                    f,
                    "leading minor of order {order} is {minor:e}, too close to zero to sign"
                )
            }
        }
    }
}

impl core::error::Error for MatrixError {}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Row-major construction; panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        Self { n, data }
    }

    pub fn from_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self {
            n: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, z: &[f64]) -> Vec<f64> {
        self.rows()
            .map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn check_z_matrix(&self) -> Result<(), MatrixError> {
        for i in 0..self.n {
            for j in 0..self.n {
                let value = self[(i, j)];
                if i != j && value > 0.0 {
                    return Err(MatrixError::OffDiagonalPositive { i, j, value });
                }
            }
        }
        Ok(())
    }

    /// Determinants of the top-left k×k blocks, k = 1..=n.
    pub fn leading_minors(&self) -> Vec<f64> {
        (1..=self.n).map(|k| determinant(&self.block(k))).collect()
    }

    fn block(&self, k: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            out.extend_from_slice(&self.data[i * self.n..i * self.n + k]);
        }
        out
    }

    /// Membership in the M-matrix set via the leading-minor test.
    pub fn is_in_m(&self) -> Result<bool, MatrixError> {
        self.check_z_matrix()?;
        for (k, minor) in self.leading_minors().into_iter().enumerate() {
            if minor.abs() < MINOR_ZERO_THRESHOLD {
                return Err(MatrixError::BoundaryCase {
                    order: k + 1,
                    minor,
                });
            }
            if minor < 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A point of the cone `{z > 0 : H z > 0}`, obtained by solving
    /// `H z = 1`. Absent when the solve fails or the solution is not
    /// positive, which for a Z-matrix happens exactly when `H` is not a
    /// nonsingular M-matrix.
    pub fn quasidominance_vector(&self) -> Result<Option<Vec<f64>>, MatrixError> {
        self.check_z_matrix()?;
        let Some(z) = solve(self.data.clone(), vec![1.0; self.n]) else {
            return Ok(None);
        };
        if !z.iter().all(|&v| v > 0.0 && v.is_finite()) {
            return Ok(None);
        }
        if !self.mul_vec(&z).iter().all(|&v| v > 0.0) {
            return Ok(None);
        }
        Ok(Some(z))
    }

    /// True when `z > 0` and `H z > 0` componentwise.
    pub fn in_cone(&self, z: &[f64]) -> bool {
        z.iter().all(|&v| v > 0.0) && self.mul_vec(z).iter().all(|&v| v > 0.0)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

fn dim(a: &[f64]) -> usize {
    let n = libm::round(libm::sqrt(a.len() as f64)) as usize;
    debug_assert_eq!(n * n, a.len());
    n
}

/// Row at or below `col` with the largest entry in column `col`, first on ties.
fn pivot_row(a: &[f64], n: usize, col: usize) -> usize {
    (col + 1..n).fold(col, |best, r| {
        if a[r * n + col].abs() > a[best * n + col].abs() {
            r
        } else {
            best
        }
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(a: &[f64]) -> f64 {
    let n = dim(a);
    let mut a = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = pivot_row(&a, n, col);
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
            }
        }
    }
    det
}

/// Solves `A x = b` with partial pivoting; `None` for a singular system.
fn solve(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = pivot_row(&a, n, col);
        if a[pivot * n + col].abs() <= scale * 1e-14 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let p = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    a[r * n + k] -= f * a[col * n + k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r * n + r];
    }
    Some(x)
}
