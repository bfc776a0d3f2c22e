//! Small-matrix algebra for 3×3 tensors.
//!
//! General tensors (deformation gradients, displacement gradients, rotations)
//! are plain [`Mat3`] values. Symmetric tensors (C, S₂, strains, shifts) are
//! stored as [`SymMat3`], which is symmetric by construction rather than by
//! checking. [`kelvin`] maps symmetric tensors isometrically onto ℝ⁶ so that
//! fourth-order operators become 6×6 matrices.

pub mod kelvin;
pub mod sampling;
pub mod spectral;

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Matrix3;
use serde::ser::{Serialize, SerializeTuple, Serializer};

use crate::error::{Error, Result};

pub use kelvin::{kelvin_to_sym, sym_to_kelvin, KelvinOperator, KelvinVec6};
pub use sampling::{random_rotation, rng_for, sample_psym, PsymSampler, PSYM_FLOOR};
pub use spectral::{spectral, symmetric_eigen, SpectralDecomp, JACOBI_MAX_SWEEPS};

/// General 3×3 tensor.
pub type Mat3 = Matrix3<f64>;

/// Default relative tolerance of [`is_positive_definite`].
pub const DEFAULT_PD_TOL: f64 = 1e-8;

/// Symmetric 3×3 tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat3(Mat3);

impl SymMat3 {
    /// Symmetric part of `m`. Exactly symmetric entries are kept bit-for-bit.
    pub fn new(m: Mat3) -> Self {
        let mut s = m;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let v = if m[(i, j)] == m[(j, i)] {
                    m[(i, j)]
                } else {
                    0.5 * (m[(i, j)] + m[(j, i)])
                };
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        SymMat3(s)
    }

    /// Builds from the six independent entries (a11, a22, a33, a23, a13, a12).
    pub fn from_components(a11: f64, a22: f64, a33: f64, a23: f64, a13: f64, a12: f64) -> Self {
        SymMat3(Matrix3::new(a11, a12, a13, a12, a22, a23, a13, a23, a33))
    }

    pub fn identity() -> Self {
        SymMat3(Mat3::identity())
    }

    pub fn zeros() -> Self {
        SymMat3(Mat3::zeros())
    }

    pub fn from_diagonal(d: [f64; 3]) -> Self {
        SymMat3(Mat3::from_diagonal(&d.into()))
    }

    pub fn scaled_identity(s: f64) -> Self {
        SymMat3(Mat3::identity() * s)
    }

    /// Dyad `a ⊗ a`.
    pub fn outer_self(a: &nalgebra::Vector3<f64>) -> Self {
        SymMat3(a * a.transpose())
    }

    pub fn as_matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat3 {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Determinant by cofactor expansion.
    pub fn det(&self) -> f64 {
        det3(&self.0)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Frobenius inner product.
    pub fn dot(&self, other: &SymMat3) -> f64 {
        inner(&self.0, &other.0)
    }

    pub fn inverse(&self) -> Option<SymMat3> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let a = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            a[(r0, c0)] * a[(r1, c1)] - a[(r0, c1)] * a[(r1, c0)]
        };
        let i11 = cof(1, 2, 1, 2) / d;
        let i22 = cof(0, 2, 0, 2) / d;
        let i33 = cof(0, 1, 0, 1) / d;
        let i12 = -cof(0, 2, 1, 2) / d;
        let i13 = cof(0, 1, 1, 2) / d;
        let i23 = -cof(0, 1, 0, 2) / d;
        Some(SymMat3::from_components(i11, i22, i33, i23, i13, i12))
    }

    /// Symmetric product `A·B·A` (both symmetric).
    pub fn congruence(&self, b: &SymMat3) -> SymMat3 {
        SymMat3::new(self.0 * b.0 * self.0)
    }

    /// `true` iff all leading principal minors are strictly positive.
    pub fn is_pd_sylvester(&self) -> bool {
        let a = &self.0;
        let m1 = a[(0, 0)];
        let m2 = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        m1 > 0.0 && m2 > 0.0 && self.det() > 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Row-major copy of the nine entries.
    pub fn row_major(&self) -> [f64; 9] {
        row_major(&self.0)
    }
}

impl Default for SymMat3 {
    fn default() -> Self {
        SymMat3::zeros()
    }
}

impl From<SymMat3> for Mat3 {
    fn from(s: SymMat3) -> Mat3 {
        s.0
    }
}

impl Add for SymMat3 {
    type Output = SymMat3;
    fn add(self, rhs: SymMat3) -> SymMat3 {
        SymMat3(self.0 + rhs.0)
    }
}

impl AddAssign for SymMat3 {
    fn add_assign(&mut self, rhs: SymMat3) {
        self.0 += rhs.0;
    }
}

impl Sub for SymMat3 {
    type Output = SymMat3;
    fn sub(self, rhs: SymMat3) -> SymMat3 {
        SymMat3(self.0 - rhs.0)
    }
}

impl Mul<f64> for SymMat3 {
    type Output = SymMat3;
    fn mul(self, rhs: f64) -> SymMat3 {
        SymMat3(self.0 * rhs)
    }
}

impl Mul<SymMat3> for f64 {
    type Output = SymMat3;
    fn mul(self, rhs: SymMat3) -> SymMat3 {
        SymMat3(rhs.0 * self)
    }
}

impl Neg for SymMat3 {
    type Output = SymMat3;
    fn neg(self) -> SymMat3 {
        SymMat3(-self.0)
    }
}

impl Serialize for SymMat3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_row_major(&self.0, serializer)
    }
}

/// Serializes a 3×3 matrix as nine row-major entries.
pub fn serialize_row_major<S: Serializer>(
    m: &Mat3,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut t = serializer.serialize_tuple(9)?;
    for v in row_major(m) {
        t.serialize_element(&v)?;
    }
    t.end()
}

pub fn row_major(m: &Mat3) -> [f64; 9] {
    let mut out = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            out[3 * i + j] = m[(i, j)];
        }
    }
    out
}

/// Canonical inner product `tr(Yᵀ X)`.
pub fn inner(x: &Mat3, y: &Mat3) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

/// Determinant by cofactor expansion along the first row.
pub fn det3(m: &Mat3) -> f64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// `C = FᵀF`.
pub fn right_cauchy_green(f: &Mat3) -> Result<SymMat3> {
    let det = det3(f);
    let scale = f.norm();
    if !(det.abs() > 1e-14 * scale * scale * scale) {
        return Err(Error::SingularGradient { det });
    }
    Ok(SymMat3::new(f.transpose() * f))
}

/// `A − (tr A / 3)·I`.
pub fn deviator(a: &SymMat3) -> SymMat3 {
    *a - SymMat3::scaled_identity(a.trace() / 3.0)
}

/// Symmetric part `(A + Aᵀ)/2` of a general tensor.
pub fn sym(a: &Mat3) -> SymMat3 {
    SymMat3::new(*a)
}

/// Result of a positive-definiteness test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdTest {
    pub positive_definite: bool,
    pub min_eigenvalue: f64,
}

/// Strict test `λ_min(A) > tol·(1 + ‖A‖)`.
pub fn is_positive_definite(a: &SymMat3, tol: f64) -> Result<PdTest> {
    let min_eigenvalue = spectral(a)?.eigenvalues[0];
    Ok(PdTest {
        positive_definite: min_eigenvalue > tol * (1.0 + a.norm()),
        min_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::{UnitQuaternion, Vector3};

    #[test]
    fn inner_examples() {
        let i = Mat3::identity();
        assert_eq!(inner(&i, &i), 3.0);
        let x = Mat3::from_diagonal(&Vector3::new(1.0, 2.0, 3.0));
        assert_eq!(inner(&x, &x), 14.0);
        let e12 = Vector3::x() * Vector3::y().transpose();
        let e21 = Vector3::y() * Vector3::x().transpose();
        assert_eq!(inner(&e12, &e21), 0.0);
    }

    #[test]
    fn cauchy_green_examples() {
        assert_eq!(
            right_cauchy_green(&Mat3::identity()).unwrap(),
            SymMat3::identity()
        );
        let f = Mat3::from_diagonal(&Vector3::new(2.0, 1.0, 1.0));
        assert_eq!(
            right_cauchy_green(&f).unwrap(),
            SymMat3::from_diagonal([4.0, 1.0, 1.0])
        );
        let r = UnitQuaternion::from_euler_angles(0.3, -1.1, 2.0)
            .to_rotation_matrix()
            .into_inner();
        let c = right_cauchy_green(&r).unwrap();
        assert!((c - SymMat3::identity()).norm() < 1e-15);
    }

    #[test]
    fn cauchy_green_rejects_singular() {
        let f = Mat3::new(1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            right_cauchy_green(&f),
            Err(Error::SingularGradient { .. })
        ));
    }

    #[test]
    fn positive_definite_examples() {
        let t = is_positive_definite(&SymMat3::identity(), 1e-8).unwrap();
        assert!(t.positive_definite);
        assert_abs_diff_eq!(t.min_eigenvalue, 1.0, epsilon = 1e-15);

        let t = is_positive_definite(&SymMat3::from_diagonal([1.0, 1.0, -7.5]), 1e-8).unwrap();
        assert!(!t.positive_definite);
        assert_eq!(t.min_eigenvalue, -7.5);

        let t = is_positive_definite(&SymMat3::zeros(), 1e-8).unwrap();
        assert!(!t.positive_definite);
    }

    #[test]
    fn deviator_examples() {
        assert_eq!(deviator(&SymMat3::identity()), SymMat3::zeros());
        let d = deviator(&SymMat3::from_diagonal([1.0, 0.0, 0.0]));
        assert_abs_diff_eq!(d.get(0, 0), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.get(1, 1), -1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.get(2, 2), -1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn inverse_matches_definition() {
        let a = SymMat3::from_components(4.0, 3.0, 2.0, 0.5, -0.3, 1.0);
        let inv = a.inverse().unwrap();
        let prod = a.as_matrix() * inv.as_matrix();
        assert!((prod - Mat3::identity()).norm() < 1e-14);
        assert!(SymMat3::zeros().inverse().is_none());
    }

    #[test]
    fn new_symmetrizes() {
        let m = Mat3::new(1.0, 2.0, 0.0, 4.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        let s = SymMat3::new(m);
        assert_eq!(s.get(0, 1), 3.0);
        assert_eq!(s.get(1, 0), 3.0);
    }
}
