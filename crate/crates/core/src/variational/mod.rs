//! Discrete energy `I(φ) = ∫ W(∇φ) dx` on a structured hexahedral mesh, a
//! Newton solver for its Euler-Lagrange equations, and a global-minimizer
//! certificate for energies convex in C.

mod assembly;
mod certify;
mod field;
mod gap;
mod mesh;
mod solver;
mod stability;

pub use assembly::{
    assemble_energy, assemble_residual, assemble_tangent, min_det, quadrature_gradients,
    residual_norm,
};
pub use certify::{
    certify_global, Certificate, CertificateStatus, CertifyOptions, Gate, GateFailure,
    QuadraturePoint,
};
pub use field::{interpolate_gradient, DeformationField};
pub use gap::{
    energy_gap_for, energy_gap_test, random_perturbation, GapReport, PERTURBATION_SCALE,
};
pub use mesh::{Face, HexMesh, QP_PER_CELL};
pub use solver::{solve, DirichletData, SolveOutcome, SolverOptions, MIN_STEP_DET};
pub use stability::{stability_quadform_scan, SecondVariation, StabilityReport};
