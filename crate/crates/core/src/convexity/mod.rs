//! Convexity decision machinery.
//!
//! Sampled scans can prove non-convexity by exhibiting a witness, but a scan
//! without a witness only establishes convexity on the sampled set; reports
//! carry that distinction in [`Basis`]. Every stream of samples is keyed by
//! `(seed, index)` and reductions pick the most negative value with the
//! lowest index on ties, so parallel and sequential scans agree exactly.

mod davis;
mod det;
mod hessian_scan;
mod monotonicity;
mod rank_one;

use serde::Serialize;

use crate::error::Result;
use crate::models::{hessian_c, EnergyModel, GradientTangent};
use crate::tensor::{serialize_row_major, Mat3, SymMat3};

pub use davis::davis_check;
pub use det::{
    det_conditions, det_convexity_check, DEFAULT_GRID_MAX, DEFAULT_GRID_MIN, DEFAULT_GRID_POINTS,
};
pub use hessian_scan::{hessian_psd_scan, hessian_psd_scan_with, ScanOptions, DEFAULT_SCAN_SPREAD};
pub use monotonicity::{
    s2_monotonicity_pair, s2_monotonicity_scan, s2_monotonicity_scan_with, MONOTONICITY_TOL,
};
pub use rank_one::{
    legendre_hadamard_scan, rank_one_directions, rank_one_form, sample_gradients, sphere_points,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Convex,
    NotConvex,
    Inconclusive,
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Analytic,
    SampledGrid,
    SampledSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Convexity of `C ↦ f(det C)` from the scalar conditions on `f`.
    DetConvexity,
    ConvexInC,
    S2Monotone,
    RankOneConvex,
    /// Convexity of the Valanis-Landel scalar `w̃`.
    Davis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarCondition {
    /// `f″(s) + (n−1)/(n s)·f′(s) ≥ 0`
    Curvature,
    /// `f′(s) ≤ 0`, reported as the value `−f′(s)`
    Slope,
    /// `w̃″(t) ≥ 0`
    SecondDerivative,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Scalar {
        s: f64,
        condition: ScalarCondition,
        value: f64,
    },
    Hessian {
        c: SymMat3,
        /// Unit-norm symmetric direction H.
        direction: SymMat3,
        value: f64,
    },
    Pair {
        c1: SymMat3,
        c2: SymMat3,
        value: f64,
    },
    RankOne {
        #[serde(serialize_with = "serialize_row_major")]
        f: Mat3,
        a: [f64; 3],
        b: [f64; 3],
        value: f64,
    },
}

impl Witness {
    pub fn value(&self) -> f64 {
        match self {
            Witness::Scalar { value, .. }
            | Witness::Hessian { value, .. }
            | Witness::Pair { value, .. }
            | Witness::RankOne { value, .. } => *value,
        }
    }

    /// Recomputes the stored value from the model. Scalar witnesses need the
    /// scalar function instead; see [`det_conditions`].
    pub fn reevaluate(&self, model: &dyn EnergyModel) -> Result<Option<f64>> {
        Ok(match self {
            Witness::Scalar { .. } => None,
            Witness::Hessian { c, direction, .. } => {
                Some(hessian_c(model, c)?.operator.form(direction))
            }
            Witness::Pair { c1, c2, .. } => Some(s2_monotonicity_pair(model, c1, c2)?),
            Witness::RankOne { f, a, b, .. } => {
                let t = GradientTangent::new(model, f)?;
                Some(t.rank_one_form(&(*a).into(), &(*b).into()))
            }
        })
    }
}

/// Machine-readable verdict of one convexity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub property: Property,
    pub verdict: Verdict,
    pub basis: Basis,
    /// Human-readable qualification, e.g. "convex on sampled set".
    pub label: String,
    pub witness: Option<Witness>,
    /// Smallest (normalized where stated) value observed by the check.
    pub min_value: f64,
    pub samples_used: usize,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub model: Option<String>,
    pub notes: Vec<String>,
}

impl ConvexityReport {
    /// Closed-form verdict, e.g. from a model's parameter conditions.
    pub fn analytic(property: Property, convex: bool, reason: impl Into<String>) -> Self {
        ConvexityReport {
            property,
            verdict: if convex {
                Verdict::Convex
            } else {
                Verdict::Inconclusive
            },
            basis: Basis::Analytic,
            label: reason.into(),
            witness: None,
            min_value: f64::NAN,
            samples_used: 0,
            tolerance: 0.0,
            seed: None,
            model: None,
            notes: Vec::new(),
        }
    }

    /// Analytic convexity-in-C claim of a model, if its parameters support one.
    pub fn from_model_claim(model: &dyn EnergyModel) -> Option<Self> {
        model.capabilities().claims_convex_in_c.then(|| {
            let mut r = Self::analytic(
                Property::ConvexInC,
                true,
                format!("closed-form parameter condition of {}", model.name()),
            );
            r.model = Some(model.name().to_string());
            r
        })
    }

    pub fn is_convex(&self) -> bool {
        self.verdict == Verdict::Convex
    }

    pub(crate) fn sampled(
        property: Property,
        basis: Basis,
        witness: Option<Witness>,
        min_value: f64,
        samples_used: usize,
        tolerance: f64,
        seed: Option<u64>,
    ) -> Self {
        let verdict = if samples_used == 0 {
            Verdict::Inconclusive
        } else if witness.is_some() {
            Verdict::NotConvex
        } else {
            Verdict::Convex
        };
        let domain = match basis {
            Basis::SampledGrid => "on sampled grid",
            Basis::SampledSet => "on sampled set",
            Basis::Analytic => "analytic",
        };
        let label = match verdict {
            Verdict::Convex => format!("no violation {domain}"),
            Verdict::NotConvex => format!("violation witnessed {domain}"),
            Verdict::Inconclusive => "no samples evaluated".to_string(),
        };
        ConvexityReport {
            property,
            verdict,
            basis,
            label,
            witness,
            min_value,
            samples_used,
            tolerance,
            seed,
            model: None,
            notes: Vec::new(),
        }
    }
}

/// Lowest value wins; ties go to the lower index.
pub(crate) fn better(a: &(f64, u64), b: &(f64, u64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}
