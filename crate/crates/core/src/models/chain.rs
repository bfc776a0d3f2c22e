use nalgebra::SMatrix;

use super::{gradient_to_c, hessian_c, EnergyModel};
use crate::error::Result;
use crate::tensor::{inner, sym, sym_to_kelvin, KelvinOperator, Mat3, SymMat3};

pub type Matrix9 = SMatrix<f64, 9, 9>;

/// Second derivative of `W(F) = Ŵ(FᵀF)` with respect to F, via the chain rule
///
/// `D²_F W(F)[H, H] = ⟨S₂(C), HᵀH⟩ + D²_C Ŵ(C)[2 sym(FᵀH), 2 sym(FᵀH)]`.
#[derive(Clone, Copy, Debug)]
pub struct GradientTangent {
    pub f: Mat3,
    pub s2: SymMat3,
    pub hessian: KelvinOperator,
    pub hessian_analytic: bool,
}

impl GradientTangent {
    pub fn new(model: &dyn EnergyModel, f: &Mat3) -> Result<Self> {
        let c = gradient_to_c(f)?;
        let h = hessian_c(model, &c)?;
        Ok(GradientTangent {
            f: *f,
            s2: model.s2(&c)?,
            hessian: h.operator,
            hessian_analytic: h.analytic,
        })
    }

    pub fn form(&self, h: &Mat3) -> f64 {
        let geometric = inner(self.s2.as_matrix(), &(h.transpose() * h));
        let strain = sym(&(self.f.transpose() * h)) * 2.0;
        geometric + self.hessian.form(&strain)
    }

    /// `a ⊗ b` direction.
    pub fn rank_one_form(&self, a: &nalgebra::Vector3<f64>, b: &nalgebra::Vector3<f64>) -> f64 {
        self.form(&(a * b.transpose()))
    }

    /// Matrix of the form on row-major coordinates `H_ij ↦ 3i + j`.
    pub fn matrix9(&self) -> Matrix9 {
        let mut b = SMatrix::<f64, 6, 9>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut e = Mat3::zeros();
                e[(i, j)] = 1.0;
                let strain = sym(&(self.f.transpose() * e)) * 2.0;
                b.set_column(3 * i + j, &sym_to_kelvin(&strain).0);
            }
        }
        let mut a = b.transpose() * self.hessian.0 * b;
        // ⟨S₂, E_ijᵀ E_kl⟩ = δ_ik S₂_jl
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    a[(3 * i + j, 3 * i + l)] += self.s2.get(j, l);
                }
            }
        }
        a
    }
}
