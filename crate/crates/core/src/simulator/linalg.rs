//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian
//! matrices, sized for the small (N <= 64) channels simulated here.

use num_complex::Complex64;
use rand::Rng;

use super::rng::complex_gaussian;
use crate::error::{Error, Result};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// I.i.d. `CN(0, 1)` entries, drawn row by row.
    pub fn gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        CMatrix {
            n,
            data: (0..n * n).map(|_| complex_gaussian(rng)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Aᴴ A`.
    pub fn gram(&self) -> CMatrix {
        let n = self.n;
        let mut g = CMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    acc += self[(r, i)].conj() * self[(r, j)];
                }
                g[(i, j)] = acc;
                g[(j, i)] = acc.conj();
            }
        }
        g
    }

    /// `A Aᴴ`.
    pub fn outer_gram(&self) -> CMatrix {
        self.conj_transpose().gram()
    }

    pub fn conj_transpose(&self) -> CMatrix {
        let n = self.n;
        let mut t = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn off_diagonal_sq(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues in descending order, with matching eigenvector columns when
/// requested.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

const MAX_SWEEPS: usize = 60;
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the
/// phase of the pivot `a_pq` and then applies the real symmetric rotation.
/// Sweeps stop once the off-diagonal Frobenius norm is at most `1e-12`
/// times the full Frobenius norm.
pub fn hermitian_eigen(mut a: CMatrix, want_vectors: bool) -> Result<HermitianEigen> {
    let n = a.n;
    let mut v = want_vectors.then(|| CMatrix::identity(n));
    let scale = a.frobenius_sq().sqrt();
    let threshold = OFF_DIAGONAL_TOL * scale.max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_sq().sqrt();
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Eigen {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;

        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let r = b.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = b / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // A <- A V
                for i in 0..n {
                    let x = a[(i, p)];
                    let y = a[(i, q)] * phase.conj();
                    a[(i, p)] = x * c - y * s;
                    a[(i, q)] = x * s + y * c;
                }
                // A <- Vᴴ A
                for j in 0..n {
                    let x = a[(p, j)];
                    let y = a[(q, j)] * phase;
                    a[(p, j)] = x * c - y * s;
                    a[(q, j)] = x * s + y * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                if let Some(v) = v.as_mut() {
                    for i in 0..n {
                        let x = v[(i, p)];
                        let y = v[(i, q)] * phase.conj();
                        v[(i, p)] = x * c - y * s;
                        v[(i, q)] = x * s + y * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| {
        let mut sorted = CMatrix::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, col)] = v[(row, src)];
            }
        }
        sorted
    });
    Ok(HermitianEigen { values, vectors })
}
