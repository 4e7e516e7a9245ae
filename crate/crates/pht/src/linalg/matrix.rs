use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::ops::{Add, Index, Mul, Sub};

use crate::error::{Error, Result};

pub(crate) type C64 = Complex64;

/// Conjugated inner product `sum_i conj(a_i) * b_i`.
pub(crate) fn vdot(a: &Array1<C64>, b: &Array1<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vnorm(a: &Array1<C64>) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense square matrix of complex values. Entries are finite by
/// construction; energies are dimensionless (units of the qubit gap,
/// hbar = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

impl ComplexMatrix {
    /// Wraps a square array, rejecting non-square shapes and NaN/Inf entries.
    pub fn new(data: Array2<C64>) -> Result<Self> {
        if data.nrows() != data.ncols() || data.nrows() == 0 {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        for ((r, c), v) in data.indexed_iter() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
        Ok(Self { data })
    }

    pub(crate) fn from_array_unchecked(data: Array2<C64>) -> Self {
        Self { data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Array2::zeros((n, n));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                data[[i, j]] = *v;
            }
        }
        Self::new(data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn array(&self) -> &Array2<C64> {
        &self.data
    }

    pub(crate) fn array_mut(&mut self) -> &mut Array2<C64> {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = self.data.t().to_owned();
        out.mapv_inplace(|v| v.conj());
        Self { data: out }
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conjugate(&self) -> Self {
        Self {
            data: self.data.mapv(|v| v.conj()),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: self.data.mapv(|v| v * s),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "matmul dimension mismatch");
        Self {
            data: self.data.dot(&rhs.data),
        }
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.data.dot(v)
    }

    /// Kronecker product; the left factor is the more significant subsystem.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim(), rhs.dim());
        let mut out = Array2::zeros((n * m, n * m));
        for i in 0..n {
            for j in 0..n {
                let a = self.data[[i, j]];
                for k in 0..m {
                    for l in 0..m {
                        out[[i * m + k, j * m + l]] = a * rhs.data[[k, l]];
                    }
                }
            }
        }
        Self { data: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Max-norm of `M - M^dagger`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut a = self.data.clone();
        let mut inv = Array2::<C64>::eye(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if a[[r, col]].norm() > a[[piv, col]].norm() {
                    piv = r;
                }
            }
            let pv = a[[piv, col]].norm();
            if pv < f64::EPSILON * scale * n as f64 {
                return Err(Error::SingularMatrix { pivot: pv });
            }
            if piv != col {
                for j in 0..n {
                    a.swap([piv, j], [col, j]);
                    inv.swap([piv, j], [col, j]);
                }
            }
            let d = a[[col, col]];
            for j in 0..n {
                a[[col, j]] /= d;
                inv[[col, j]] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[[r, col]];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let av = a[[col, j]];
                    let iv = inv[[col, j]];
                    a[[r, j]] -= f * av;
                    inv[[r, j]] -= f * iv;
                }
            }
        }
        Ok(Self { data: inv })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.data[[idx.0, idx.1]]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}
