//! Quasiconvex hull `QW(F) = inf_{S ⪰ 0} Ŵ(FᵀF + S)` of energies convex in C.
//!
//! The cone is parameterized as `S = AAᵀ`, so the search runs over all of
//! ℝ³ˣ³ and reaches singular shifts. The gradient of `A ↦ Ŵ(C + AAᵀ)` is
//! `S₂(C + AAᵀ)·A`; in particular `A = 0` is always a critical point, which
//! is why several starts are needed.

use std::io::Write;

use nalgebra::Vector3;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::convexity::{ConvexityReport, Property, Verdict};
use crate::error::{Error, Result};
use crate::models::EnergyModel;
use crate::tensor::{right_cauchy_green, rng_for, serialize_row_major, Mat3, SymMat3};

pub const DEFAULT_STARTS: usize = 16;
pub const DEFAULT_HULL_TOL: f64 = 1e-9;
/// A search whose shift grows beyond this norm is reported as unconverged.
pub const MAX_SHIFT_NORM: f64 = 1e6;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HullOptions {
    pub starts: usize,
    /// Stop when `‖S₂·A‖ ≤ tol·(1 + |objective|)`.
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions {
            starts: DEFAULT_STARTS,
            tol: DEFAULT_HULL_TOL,
            seed: 0,
            max_iter: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullResult {
    pub qw_value: f64,
    pub w_value: f64,
    pub argmin_shift: SymMat3,
    pub starts_used: usize,
    pub best_start: usize,
    /// `W(F) − QW(F)`.
    pub gap: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
struct Descent {
    value: f64,
    a: Mat3,
    converged: bool,
}

fn objective(model: &dyn EnergyModel, c: &SymMat3, a: &Mat3) -> Result<(f64, Mat3)> {
    let x = *c + SymMat3::new(a * a.transpose());
    Ok((model.energy(&x)?, model.s2(&x)?.into_matrix() * a))
}

fn descend(model: &dyn EnergyModel, c: &SymMat3, a0: Mat3, opts: &HullOptions) -> Result<Descent> {
    let mut a = a0;
    let (mut value, mut grad) = objective(model, c, &a)?;
    let mut step = 1.0 / (1.0 + model.s2(c)?.norm());
    let mut prev: Option<(Mat3, Mat3)> = None;
    for _ in 0..opts.max_iter {
        let gnorm = grad.norm();
        if gnorm <= opts.tol * (1.0 + value.abs()) {
            return Ok(Descent {
                value,
                a,
                converged: true,
            });
        }
        if (a * a.transpose()).norm() > MAX_SHIFT_NORM {
            return Ok(Descent {
                value,
                a,
                converged: false,
            });
        }
        // Barzilai-Borwein trial step.
        if let Some((pa, pg)) = prev {
            let s = a - pa;
            let y = grad - pg;
            let sy = s.dot(&y);
            if sy > 0.0 {
                step = s.norm_squared() / sy;
            }
        }
        let mut alpha = step;
        let mut next = None;
        for _ in 0..MAX_HALVINGS {
            let trial = a - grad * alpha;
            match objective(model, c, &trial) {
                Ok((v, g)) if v < value && v <= value - ARMIJO * alpha * gnorm * gnorm => {
                    next = Some((trial, v, g));
                    break;
                }
                Ok(_) | Err(Error::Domain(_)) => alpha *= 0.5,
                Err(e) => return Err(e),
            }
        }
        let Some((trial, v, g)) = next else {
            // No decrease representable: stationary to working precision.
            return Ok(Descent {
                value,
                a,
                converged: gnorm <= 1e-6 * (1.0 + value.abs()),
            });
        };
        prev = Some((a, grad));
        a = trial;
        value = v;
        grad = g;
    }
    Ok(Descent {
        value,
        a,
        converged: false,
    })
}

/// Deterministic start `index`: zero, six scaled dyads, then pseudo-random.
fn start(c: &SymMat3, seed: u64, index: usize) -> Mat3 {
    let scale = (*c - SymMat3::identity()).norm().max(1e-2).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let dyads = [
        Vector3::x(),
        Vector3::y(),
        Vector3::z(),
        Vector3::new(r, r, 0.0),
        Vector3::new(r, 0.0, r),
        Vector3::new(0.0, r, r),
    ];
    match index {
        0 => Mat3::zeros(),
        1..=6 => {
            let u = dyads[index - 1];
            u * u.transpose() * scale
        }
        _ => {
            let mut rng = rng_for(seed, index as u64);
            Mat3::from_fn(|_, _| StandardNormal.sample(&mut rng)) * (scale / 3.0)
        }
    }
}

fn require_convexity(evidence: &ConvexityReport) -> Result<()> {
    if evidence.property != Property::ConvexInC || evidence.verdict != Verdict::Convex {
        return Err(Error::NotConvexEvidence(format!(
            "{:?} report with verdict {:?} ({})",
            evidence.property, evidence.verdict, evidence.label
        )));
    }
    Ok(())
}

/// `qw_evaluate(model, F, evidence, starts, tol)` with default seed.
pub fn qw_evaluate(
    model: &dyn EnergyModel,
    f: &Mat3,
    evidence: &ConvexityReport,
    starts: usize,
    tol: f64,
) -> Result<HullResult> {
    qw_evaluate_with(
        model,
        f,
        evidence,
        &HullOptions {
            starts,
            tol,
            ..HullOptions::default()
        },
    )
}

pub fn qw_evaluate_with(
    model: &dyn EnergyModel,
    f: &Mat3,
    evidence: &ConvexityReport,
    opts: &HullOptions,
) -> Result<HullResult> {
    require_convexity(evidence)?;
    if opts.starts == 0 {
        return Err(Error::InvalidParameter(
            "at least one start is required".into(),
        ));
    }
    let c = right_cauchy_green(f)?;
    let w = model.energy(&c)?;
    let runs: Vec<Result<Descent>> = (0..opts.starts)
        .into_par_iter()
        .map(|k| descend(model, &c, start(&c, opts.seed, k), opts))
        .collect();
    let mut best: Option<(usize, Descent)> = None;
    for (k, r) in runs.into_iter().enumerate() {
        let d = r?;
        if best.as_ref().is_none_or(|(_, b)| d.value < b.value) {
            best = Some((k, d));
        }
    }
    let (k, d) = best.expect("at least one start");
    Ok(HullResult {
        qw_value: d.value,
        w_value: w,
        argmin_shift: SymMat3::new(d.a * d.a.transpose()),
        starts_used: opts.starts,
        best_start: k,
        gap: w - d.value,
        converged: d.converged,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HullRow {
    pub t: f64,
    #[serde(serialize_with = "serialize_row_major")]
    pub f: Mat3,
    pub w: f64,
    pub qw: f64,
    pub gap: f64,
    pub converged: bool,
    pub error: Option<String>,
}

/// Evaluates the hull along a parameterized path. Per-point failures are
/// recorded in the row and the sweep continues; missing evidence is fatal.
pub fn hull_sweep(
    model: &dyn EnergyModel,
    path: &[(f64, Mat3)],
    evidence: &ConvexityReport,
    opts: &HullOptions,
) -> Result<Vec<HullRow>> {
    require_convexity(evidence)?;
    Ok(path
        .iter()
        .map(
            |&(t, f)| match qw_evaluate_with(model, &f, evidence, opts) {
                Ok(r) => HullRow {
                    t,
                    f,
                    w: r.w_value,
                    qw: r.qw_value,
                    gap: r.gap,
                    converged: r.converged,
                    error: None,
                },
                Err(e) => HullRow {
                    t,
                    f,
                    w: f64::NAN,
                    qw: f64::NAN,
                    gap: f64::NAN,
                    converged: false,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect())
}

/// CSV with header `t,F11,…,F33,W,QW,gap,converged`.
pub fn write_sweep_csv<W: Write>(rows: &[HullRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    for i in 1..=3 {
        for j in 1..=3 {
            header.push(format!("F{i}{j}"));
        }
    }
    header.extend(["W", "QW", "gap", "converged"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![format!("{:.16e}", r.t)];
        rec.extend(
            crate::tensor::row_major(&r.f)
                .iter()
                .map(|x| format!("{x:.16e}")),
        );
        rec.extend([r.w, r.qw, r.gap].iter().map(|x| format!("{x:.16e}")));
        rec.push(r.converged.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `F(t) = diag(t, 1, 1)` at `points` equally spaced `t` in `[t0, t1]`.
pub fn uniaxial_path(t0: f64, t1: f64, points: usize) -> Vec<(f64, Mat3)> {
    (0..points)
        .map(|k| {
            let t = if points == 1 {
                t0
            } else {
                t0 + (t1 - t0) * k as f64 / (points - 1) as f64
            };
            (t, Mat3::from_diagonal(&Vector3::new(t, 1.0, 1.0)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{NegLogDet, Prop2Quadratic, SaintVenantKirchhoff};
    use crate::tensor::{rng_for, spectral};
    use rand::Rng;

    fn svk0() -> (SaintVenantKirchhoff, ConvexityReport) {
        let m = SaintVenantKirchhoff::new(1.0, 0.0);
        let ev = ConvexityReport::from_model_claim(&m).unwrap();
        (m, ev)
    }

    #[test]
    fn svk_uniaxial_compression_completes_to_zero() {
        let (m, ev) = svk0();
        let f = Mat3::from_diagonal(&Vector3::new(0.1, 1.0, 1.0));
        let r = qw_evaluate(&m, &f, &ev, DEFAULT_STARTS, DEFAULT_HULL_TOL).unwrap();
        assert!(r.qw_value.abs() < 1e-6, "{r:?}");
        assert!((r.gap - 0.245025).abs() < 1e-4);
        // Closed-form completion.
        let c = right_cauchy_green(&f).unwrap();
        let e = m
            .energy(&(c + SymMat3::from_diagonal([0.99, 0.0, 0.0])))
            .unwrap();
        assert!(e.abs() < 1e-15);
        assert!((r.argmin_shift - SymMat3::from_diagonal([0.99, 0.0, 0.0])).norm() < 1e-3);
    }

    #[test]
    fn tension_has_no_relaxation() {
        let m = Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap();
        let ev = ConvexityReport::from_model_claim(&m).unwrap();
        let f = Mat3::from_diagonal(&Vector3::new(1.2, 1.1, 1.05));
        let r = qw_evaluate(&m, &f, &ev, DEFAULT_STARTS, DEFAULT_HULL_TOL).unwrap();
        assert!(r.gap <= 1e-8 && r.gap >= 0.0);
        // Dense sampling of PSD shifts finds no decrease.
        let c = right_cauchy_green(&f).unwrap();
        let w = m.energy(&c).unwrap();
        let mut rng = rng_for(6, 0);
        for _ in 0..2000 {
            let a = Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let s = SymMat3::new(a * a.transpose()) * rng.random_range(0.0..1.0);
            assert!(m.energy(&(c + s)).unwrap() >= w - 1e-12);
        }
    }

    #[test]
    fn reference_state_is_stationary() {
        let p = Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap();
        let ev = ConvexityReport::from_model_claim(&p).unwrap();
        let r = qw_evaluate(&p, &Mat3::identity(), &ev, DEFAULT_STARTS, DEFAULT_HULL_TOL).unwrap();
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.argmin_shift, SymMat3::zeros());
    }

    #[test]
    fn unbounded_hull_is_flagged() {
        // −log det decreases along every shift, so the infimum is not attained.
        let m = NegLogDet::new();
        let r = qw_evaluate(&m, &Mat3::identity(), &hessian_ev(&m), 4, DEFAULT_HULL_TOL).unwrap();
        assert!(r.qw_value < r.w_value);
        assert!(!r.converged);
    }

    fn hessian_ev(m: &dyn EnergyModel) -> ConvexityReport {
        crate::convexity::hessian_psd_scan(m, 50, 0, 1e-8).unwrap()
    }

    #[test]
    fn kkt_on_the_cone() {
        let (m, ev) = svk0();
        for t in [0.1, 0.4, 0.7] {
            let f = Mat3::from_diagonal(&Vector3::new(t, 0.9, 1.1));
            let r = qw_evaluate(&m, &f, &ev, DEFAULT_STARTS, DEFAULT_HULL_TOL).unwrap();
            let c = right_cauchy_green(&f).unwrap();
            let s2 = m.s2(&(c + r.argmin_shift)).unwrap();
            let d = spectral(&r.argmin_shift).unwrap();
            let cutoff = 1e-6 * (1.0 + r.argmin_shift.norm());
            for k in 0..3 {
                let v = d.eigenvectors.column(k).into_owned();
                let e = SymMat3::outer_self(&v);
                let g = s2.dot(&e);
                if d.eigenvalues[k] > cutoff {
                    assert!(g.abs() <= 1e-6, "t = {t}: {g}");
                } else {
                    assert!(g >= -1e-6, "t = {t}: {g}");
                }
            }
        }
    }

    #[test]
    fn more_starts_never_hurt() {
        let (m, ev) = svk0();
        for t in [0.1, 0.5, 0.9] {
            let f = Mat3::from_diagonal(&Vector3::new(t, 0.8, 1.0));
            let a = qw_evaluate(&m, &f, &ev, 16, 1e-9).unwrap();
            let b = qw_evaluate(&m, &f, &ev, 32, 1e-9).unwrap();
            assert!(b.qw_value <= a.qw_value + 1e-9);
        }
    }

    #[test]
    fn sweep_gap_profile() {
        let (m, ev) = svk0();
        let rows = hull_sweep(
            &m,
            &uniaxial_path(0.1, 2.0, 20),
            &ev,
            &HullOptions::default(),
        )
        .unwrap();
        for r in &rows {
            assert!(r.qw <= r.w + 1e-10 * (1.0 + r.w.abs()));
            if r.t < 0.99 {
                assert!(r.gap > 0.0, "t = {}", r.t);
            } else if r.t >= 1.0 {
                assert!(r.gap.abs() < 1e-10, "t = {}", r.t);
            }
        }
        let single = qw_evaluate_with(&m, &rows[3].f, &ev, &HullOptions::default()).unwrap();
        assert_eq!(single.qw_value, rows[3].qw);
        let id = hull_sweep(
            &m,
            &vec![(0.0, Mat3::identity()); 3],
            &ev,
            &HullOptions::default(),
        )
        .unwrap();
        assert!(id.iter().all(|r| r.gap == 0.0));
        let mut buf = Vec::new();
        write_sweep_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,F11,F12,F13,F21,F22,F23,F31,F32,F33,W,QW,gap,converged\n"));
        assert_eq!(text.lines().count(), 21);
    }

    #[test]
    fn requires_convexity_evidence() {
        let m = SaintVenantKirchhoff::new(1.0, -1.0);
        let ev = hessian_ev(&m);
        assert!(matches!(
            qw_evaluate(&m, &Mat3::identity(), &ev, 16, 1e-9),
            Err(Error::NotConvexEvidence(_))
        ));
    }
}
