//! Cyclic Jacobi eigen-solver for small symmetric matrices.

use nalgebra::{SMatrix, SVector};

use super::{Mat3, SymMat3};
use crate::error::{Error, Result};

pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Eigen-decomposition `A = Q Λ Qᵀ` with eigenvalues ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralDecomp {
    pub eigenvalues: [f64; 3],
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: Mat3,
}

impl SpectralDecomp {
    pub fn reconstruct(&self) -> SymMat3 {
        let q = &self.eigenvectors;
        let lambda = Mat3::from_diagonal(&self.eigenvalues.into());
        SymMat3::new(q * lambda * q.transpose())
    }

    /// `Σ f(λᵢ) qᵢ qᵢᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMat3 {
        let q = &self.eigenvectors;
        let d = Mat3::from_diagonal(&self.eigenvalues.map(f).into());
        SymMat3::new(q * d * q.transpose())
    }
}

pub fn spectral(a: &SymMat3) -> Result<SpectralDecomp> {
    let (values, vectors) = symmetric_eigen(a.as_matrix())?;
    Ok(SpectralDecomp {
        eigenvalues: [values[0], values[1], values[2]],
        eigenvectors: vectors,
    })
}

/// Eigenvalues (ascending) and column eigenvectors of a symmetric matrix.
///
/// Only the symmetric part of `a` is meaningful; the solver reads both
/// triangles and assumes they agree.
pub fn symmetric_eigen<const N: usize>(
    a: &SMatrix<f64, N, N>,
) -> Result<(SVector<f64, N>, SMatrix<f64, N, N>)> {
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::domain(
            "non-finite matrix passed to the eigen-solver",
        ));
    }
    let mut m = *a;
    let mut v = SMatrix::<f64, N, N>::identity();
    let frob = m.norm();
    let threshold = (1e-2 * f64::EPSILON * frob).powi(2);

    let mut converged = frob == 0.0;
    let mut sweep = 0;
    while !converged {
        let off: f64 = (0..N)
            .flat_map(|p| ((p + 1)..N).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum();
        if off <= threshold {
            converged = true;
            break;
        }
        if sweep == JACOBI_MAX_SWEEPS {
            break;
        }
        sweep += 1;
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..N {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigen-solver",
            iterations: JACOBI_MAX_SWEEPS,
        });
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = SVector::<f64, N>::from_fn(|i, _| m[(order[i], order[i])]);
    let vectors = SMatrix::<f64, N, N>::from_fn(|r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{right_cauchy_green, PsymSampler};
    use approx::assert_abs_diff_eq;
    use rand::Rng;

    #[test]
    fn identity_and_diagonal() {
        let d = spectral(&SymMat3::identity()).unwrap();
        assert_eq!(d.eigenvalues, [1.0, 1.0, 1.0]);
        let d = spectral(&SymMat3::from_diagonal([4.0, 1.0, 1.0])).unwrap();
        assert_eq!(d.eigenvalues, [1.0, 1.0, 4.0]);
    }

    #[test]
    fn squares_of_singular_values() {
        let f = Mat3::from_diagonal(&nalgebra::Vector3::new(0.1, 1.0, 1.0));
        let c = right_cauchy_green(&f).unwrap();
        let d = spectral(&c).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 0.01, epsilon = 1e-16);
        assert_abs_diff_eq!(d.eigenvalues[1], 1.0, epsilon = 1e-16);
        assert_abs_diff_eq!(d.eigenvalues[2], 1.0, epsilon = 1e-16);
    }

    #[test]
    fn reconstruction_and_orthogonality_over_samples() {
        let mut rng = crate::tensor::rng_for(11, 0);
        for k in 0..1000 {
            // Mix indefinite symmetric samples with PD ones.
            let a = if k % 2 == 0 {
                let m = Mat3::from_fn(|_, _| rng.random_range(-3.0..3.0));
                SymMat3::new(m)
            } else {
                PsymSampler::new(k as u64, 2.0).sample(k as u64)
            };
            let d = spectral(&a).unwrap();
            let err = (d.reconstruct() - a).norm();
            assert!(
                err <= 1e-12 * (1.0 + a.norm()),
                "reconstruction error {err}"
            );
            let q = d.eigenvectors;
            assert!((q.transpose() * q - Mat3::identity()).norm() <= 1e-12);
            assert!(d.eigenvalues[0] <= d.eigenvalues[1] && d.eigenvalues[1] <= d.eigenvalues[2]);
        }
    }

    #[test]
    fn six_by_six() {
        let m = nalgebra::Matrix6::<f64>::from_fn(|i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let (vals, vecs) = symmetric_eigen(&m).unwrap();
        let rec = vecs * nalgebra::Matrix6::from_diagonal(&vals) * vecs.transpose();
        assert!((rec - m).norm() < 1e-13);
    }

    #[test]
    fn non_finite_is_rejected() {
        let a = SymMat3::from_diagonal([f64::NAN, 1.0, 1.0]);
        assert!(spectral(&a).is_err());
    }
}
