//! Hyperelastic energies viewed as functions of the right Cauchy-Green
//! tensor `C = FᵀF`.
//!
//! The crate provides a small tensor layer, a family of energy models with
//! analytic stresses and tangents, sampled and analytic convexity checks,
//! a finite element solver with a global-minimizer certificate for energies
//! convex in `C`, and a numerical evaluator of the Pipkin relaxation
//! `QW(F) = inf_{S ⪰ 0} Ŵ(C + S)`.
//!
//! ```
//! use cgconvex::models::{EnergyModel, SaintVenantKirchhoff};
//! use cgconvex::tensor::SymMat3;
//!
//! let m = SaintVenantKirchhoff::new(1.0, 1.0);
//! assert_eq!(m.energy(&SymMat3::identity()).unwrap(), 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod convexity;
pub mod error;
pub mod hull;
pub mod models;
pub mod scalar;
pub mod tensor;
pub mod variational;

pub use error::{Error, Result};
