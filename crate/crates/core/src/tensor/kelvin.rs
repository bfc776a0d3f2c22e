//! Kelvin (Mandel) coordinates for symmetric tensors.
//!
//! A symmetric tensor maps to `(a11, a22, a33, √2·a23, √2·a13, √2·a12)`.
//! The map is a linear isometry: the Frobenius product of two tensors equals
//! the Euclidean product of their coordinate vectors, so the spectrum of a
//! 6×6 operator matrix is the spectrum of the quadratic form it represents.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix6, Vector6};

use super::spectral::symmetric_eigen;
use super::SymMat3;
use crate::error::Result;

/// Index pairs of the six Kelvin coordinates.
pub const KELVIN_INDEX: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KelvinVec6(pub Vector6<f64>);

impl KelvinVec6 {
    pub fn dot(&self, other: &KelvinVec6) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Symmetric tensor of the `k`-th orthonormal Kelvin basis element.
    pub fn basis(k: usize) -> SymMat3 {
        let mut v = Vector6::zeros();
        v[k] = 1.0;
        kelvin_to_sym(&KelvinVec6(v))
    }
}

pub fn sym_to_kelvin(a: &SymMat3) -> KelvinVec6 {
    KelvinVec6(Vector6::new(
        a.get(0, 0),
        a.get(1, 1),
        a.get(2, 2),
        SQRT_2 * a.get(1, 2),
        SQRT_2 * a.get(0, 2),
        SQRT_2 * a.get(0, 1),
    ))
}

pub fn kelvin_to_sym(v: &KelvinVec6) -> SymMat3 {
    let v = &v.0;
    SymMat3::from_components(
        v[0],
        v[1],
        v[2],
        v[3] / SQRT_2,
        v[4] / SQRT_2,
        v[5] / SQRT_2,
    )
}

/// Symmetric bilinear form on symmetric tensors, in Kelvin coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KelvinOperator(pub Matrix6<f64>);

impl KelvinOperator {
    pub fn zeros() -> Self {
        KelvinOperator(Matrix6::zeros())
    }

    /// The form `‖H‖²`.
    pub fn identity() -> Self {
        KelvinOperator(Matrix6::identity())
    }

    /// The form `(tr H)²`.
    pub fn trace_squared() -> Self {
        let m = Vector6::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
        KelvinOperator(m * m.transpose())
    }

    /// The form `(tr(A·H))²` for symmetric `A`.
    pub fn outer(a: &SymMat3) -> Self {
        let v = sym_to_kelvin(a).0;
        KelvinOperator(v * v.transpose())
    }

    /// Operator of a linear map `H ↦ L(H)` on symmetric tensors; the form is
    /// `⟨L(H), H⟩`. `L` must be self-adjoint for the result to be symmetric.
    pub fn from_linear_map(map: impl Fn(&SymMat3) -> SymMat3) -> Self {
        let mut m = Matrix6::zeros();
        for k in 0..6 {
            let col = sym_to_kelvin(&map(&KelvinVec6::basis(k))).0;
            m.set_column(k, &col);
        }
        KelvinOperator(m)
    }

    /// The form `⟨A⁻¹ H A⁻¹, H⟩ = ‖A^{-1/2} H A^{-1/2}‖²` given `A⁻¹`.
    pub fn congruence(a_inv: &SymMat3) -> Self {
        Self::from_linear_map(|h| a_inv.congruence(h)).symmetrized()
    }

    pub fn symmetrized(self) -> Self {
        KelvinOperator(0.5 * (self.0 + self.0.transpose()))
    }

    pub fn form(&self, h: &SymMat3) -> f64 {
        let v = sym_to_kelvin(h).0;
        v.dot(&(self.0 * v))
    }

    pub fn bilinear(&self, h: &SymMat3, g: &SymMat3) -> f64 {
        let v = sym_to_kelvin(h).0;
        let w = sym_to_kelvin(g).0;
        v.dot(&(self.0 * w))
    }

    /// Spectral norm proxy used for relative tolerances (Frobenius norm).
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Smallest eigenvalue and a unit eigenvector, as a symmetric tensor.
    pub fn min_eigen(&self) -> Result<(f64, SymMat3)> {
        let (vals, vecs) = symmetric_eigen(&self.0)?;
        let v: Vector6<f64> = vecs.column(0).into_owned();
        Ok((vals[0], kelvin_to_sym(&KelvinVec6(v))))
    }

    pub fn eigenvalues(&self) -> Result<[f64; 6]> {
        let (vals, _) = symmetric_eigen(&self.0)?;
        Ok(std::array::from_fn(|i| vals[i]))
    }

    pub fn max_asymmetry(&self) -> f64 {
        (self.0 - self.0.transpose()).abs().max()
    }
}

impl std::ops::Add for KelvinOperator {
    type Output = KelvinOperator;
    fn add(self, rhs: Self) -> Self {
        KelvinOperator(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for KelvinOperator {
    fn add_assign(&mut self, rhs: Self) {
        self.0 += rhs.0;
    }
}

impl std::ops::Mul<f64> for KelvinOperator {
    type Output = KelvinOperator;
    fn mul(self, rhs: f64) -> Self {
        KelvinOperator(self.0 * rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{inner, PsymSampler};
    use proptest::prelude::*;

    #[test]
    fn identity_coordinates() {
        let v = sym_to_kelvin(&SymMat3::identity());
        assert_eq!(v.0, Vector6::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn dyad_pair_isometry() {
        let a = SymMat3::from_components(0.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let v = sym_to_kelvin(&a);
        assert_eq!(v.0[5], SQRT_2);
        assert!((v.0.norm_squared() - 2.0).abs() < 1e-15);
        assert!((a.norm() * a.norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn random_round_trip() {
        for seed in 0..100 {
            let a = PsymSampler::new(seed, 2.0).sample(0);
            let back = kelvin_to_sym(&sym_to_kelvin(&a));
            assert!((back - a).norm() <= 1e-15 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn congruence_at_identity_is_identity() {
        let k = KelvinOperator::congruence(&SymMat3::identity());
        assert!((k.0 - Matrix6::identity()).norm() < 1e-15);
    }

    fn sym_strategy() -> impl Strategy<Value = SymMat3> {
        proptest::array::uniform6(-10.0f64..10.0)
            .prop_map(|c| SymMat3::from_components(c[0], c[1], c[2], c[3], c[4], c[5]))
    }

    proptest! {
        #[test]
        fn inner_product_is_preserved(x in sym_strategy(), y in sym_strategy()) {
            let lhs = inner(x.as_matrix(), y.as_matrix());
            let rhs = sym_to_kelvin(&x).dot(&sym_to_kelvin(&y));
            prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + x.norm() * y.norm()));
        }

        #[test]
        fn round_trip_is_exact_to_rounding(x in sym_strategy()) {
            let back = kelvin_to_sym(&sym_to_kelvin(&x));
            prop_assert!((back - x).norm() <= 1e-15 * (1.0 + x.norm()));
        }
    }
}
