//! Spectral norm by power iteration on the Gram operator, and full symmetric
//! spectra by cyclic Jacobi rotations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DenseMatrix};

/// Relative residual at which power iteration stops.
pub const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITERS: usize = 200_000;
const POWER_SEED: u64 = 0x5eed_0f_90a1;

/// Off-diagonal Frobenius mass (relative to `||A||_F`) at which Jacobi stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest singular value with unit singular vectors: `A v = value * u`.
#[derive(Clone, Debug)]
pub struct SingularTriple {
    pub value: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

/// Top singular triple by power iteration on `A^T A` from a fixed seeded start.
///
/// Stops once `|A^T A v - mu v| <= 1e-12 mu`.
pub fn top_singular_triple(a: &DenseMatrix) -> SingularTriple {
    let (m, n) = (a.rows(), a.cols());
    if a.max_abs() == 0.0 {
        return SingularTriple {
            value: 0.0,
            left: unit(m, 0),
            right: unit(n, 0),
            iterations: 0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut iterations = 0;
    for it in 1..=POWER_MAX_ITERS {
        iterations = it;
        let u = a.matvec(&v);
        let w = a.matvec_transpose(&u);
        let mu: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        let wn = norm2(&w);
        if wn == 0.0 {
            // start orthogonal to the row space; restart from a basis vector with mass
            let j = (0..n)
                .max_by(|&i, &j| {
                    let ci: f64 = (0..m).map(|r| a.get(r, i).abs()).sum();
                    let cj: f64 = (0..m).map(|r| a.get(r, j).abs()).sum();
                    ci.total_cmp(&cj)
                })
                .unwrap();
            v = unit(n, j);
            continue;
        }
        let resid = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - mu * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        v = w.into_iter().map(|x| x / wn).collect();
        if resid <= POWER_TOLERANCE * mu.abs() {
            break;
        }
    }
    let u = a.matvec(&v);
    let value = norm2(&u);
    let left = if value > 0.0 {
        u.iter().map(|x| x / value).collect()
    } else {
        unit(m, 0)
    };
    SingularTriple {
        value,
        left,
        right: v,
        iterations,
    }
}

/// Largest singular value of `A`; for symmetric `A` this is the largest `|eigenvalue|`.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    top_singular_triple(a).value
}

/// Spectral norm of a complex matrix through its real embedding.
pub fn spectral_norm_complex(a: &ComplexMatrix) -> f64 {
    spectral_norm(&a.real_embedding())
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Eigenvalues sorted by absolute value, descending; equal magnitudes list the positive one first.
    pub values: Vec<f64>,
    /// Unit eigenvectors, `vectors[i]` belonging to `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

impl SymmetricEigen {
    /// Second entry of the magnitude-sorted spectrum (0 for 1x1 input).
    pub fn lambda2(&self) -> f64 {
        self.values.get(1).map_or(0.0, |v| v.abs())
    }

    pub fn largest_abs(&self) -> f64 {
        self.values.first().map_or(0.0, |v| v.abs())
    }

    /// Eigenvalues in ascending order.
    pub fn ascending(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_spectrum(a: &DenseMatrix) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", a.rows(), a.cols()),
        });
    }
    if let Some((row, col)) = a.first_asymmetry(1e-12) {
        return Err(Error::NotSymmetric { row, col });
    }
    Ok(jacobi_eigen(a))
}

/// Cyclic Jacobi on a symmetric matrix (symmetry is assumed, upper triangle wins).
pub(crate) fn jacobi_eigen(a: &DenseMatrix) -> SymmetricEigen {
    let n = a.rows();
    let mut m: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            if i <= j {
                a.get(i, j)
            } else {
                a.get(j, i)
            }
        })
        .collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro = a.frobenius();
    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off(&m) > JACOBI_TOLERANCE * fro {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (m[i * n + i], m[j * n + j]);
        b.abs().total_cmp(&a.abs()).then(b.total_cmp(&a))
    });
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let vectors = order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect();
    SymmetricEigen {
        values,
        vectors,
        sweeps,
    }
}
