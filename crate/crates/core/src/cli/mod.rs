//! Command front end: configuration loading, dispatch and report files.
//!
//! Exit codes: 0 success, 2 mathematical refusal or witness, 3 inconclusive,
//! 4 solver failure, 64 configuration error, 65 domain error.

mod config;
pub mod json;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{
    CertifyConfig, CheckConfig, Command, DirichletConfig, HullConfig, MeshConfig, Overrides,
    PathConfig, PathPoint, RunConfig, SolverConfig, TableEntry,
};

use crate::convexity::{
    davis_check, det_convexity_check, hessian_psd_scan_with, legendre_hadamard_scan,
    s2_monotonicity_scan_with, sample_gradients, ConvexityReport, ScanOptions, Verdict,
    MONOTONICITY_TOL,
};
use crate::error::{Error, Result};
use crate::hull::{hull_sweep, write_sweep_csv, HullOptions};
use crate::models::{Capabilities, EnergyModel, LinearizedResponse, ModelSpec};
use crate::scalar::log_grid;
use crate::variational::{
    certify_global, energy_gap_test, solve, stability_quadform_scan, Certificate, CertifyOptions,
    GapReport, SolveOutcome, SolverOptions, StabilityReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_CONFIG: i32 = 64;
pub const EXIT_DOMAIN: i32 = 65;

/// Default sample budget of the scans.
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SCAN_TOL: f64 = 1e-8;

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Json(_) => EXIT_CONFIG,
        Error::NotConvexEvidence(_) => EXIT_REFUSED,
        Error::SolverNoConvergence(_) | Error::NoConvergence { .. } => EXIT_SOLVER,
        Error::SingularGradient { .. }
        | Error::Domain(_)
        | Error::InvalidParameter(_)
        | Error::NotAvailable(_)
        | Error::InadmissibleField { .. }
        | Error::InadmissibleBoundary { .. }
        | Error::Io(_)
        | Error::Csv(_) => EXIT_DOMAIN,
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    pub message: String,
}

/// Loads, validates and runs. Errors become exit codes; nothing is written
/// for configuration errors.
pub fn run(command: Command, config: &Path, out: &Path, overrides: &Overrides) -> Outcome {
    let prepared = RunConfig::load(config).and_then(|mut cfg| {
        cfg.apply(overrides);
        cfg.validate(command)?;
        Ok(cfg)
    });
    let result = prepared.and_then(|cfg| {
        std::fs::create_dir_all(out)?;
        run_config(command, &cfg, out)
    });
    match result {
        Ok(o) => o,
        Err(e) => Outcome {
            code: exit_code_for(&e),
            files: Vec::new(),
            message: e.to_string(),
        },
    }
}

/// Runs a validated configuration, writing reports into `out`.
pub fn run_config(command: Command, cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    match command {
        Command::Check => {
            let bundle = cmd_check(cfg)?;
            let path = out.join("check_report.json");
            json::write_file(&path, &bundle)?;
            Ok(Outcome {
                code: bundle.exit_code,
                files: vec![path],
                message: format!("overall verdict: {:?}", bundle.overall),
            })
        }
        Command::Certify => write_certify(cfg, out),
        Command::Solve => write_solve(cfg, out),
        Command::Hull => write_hull(cfg, out),
        Command::Linearize => {
            let report = cmd_linearize(cfg)?;
            let path = out.join("linearized.json");
            json::write_file(&path, &report)?;
            Ok(Outcome {
                code: EXIT_OK,
                files: vec![path],
                message: format!("poisson ratio {:.17}", report.response.poisson),
            })
        }
    }
}

fn model_of(cfg: &RunConfig) -> Result<Box<dyn EnergyModel>> {
    cfg.model
        .build()
        .map_err(|e| Error::Config(format!("model: {e}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameter {
    pub name: &'static str,
    pub value: f64,
}

fn parameters(model: &dyn EnergyModel) -> Vec<Parameter> {
    model
        .parameters()
        .into_iter()
        .map(|(name, value)| Parameter { name, value })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckBundle {
    pub model: ModelSpec,
    pub model_name: String,
    pub parameters: Vec<Parameter>,
    pub capabilities: Capabilities,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub reports: Vec<ConvexityReport>,
    pub overall: Verdict,
    pub exit_code: i32,
}

/// Every applicable convexity check for the configured model.
pub fn cmd_check(cfg: &RunConfig) -> Result<CheckBundle> {
    let model = model_of(cfg)?;
    let c = &cfg.check;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let tol = cfg.tol.unwrap_or(DEFAULT_SCAN_TOL);
    let grid = log_grid(c.grid_min, c.grid_max, c.grid_points);
    let mut reports = Vec::new();

    if let Some(f) = model.det_term() {
        let mut r = det_convexity_check(&f, c.dimension, &grid)?;
        r.model = Some(model.name().to_string());
        r.notes
            .push("applies to the determinant-dependent term of the energy".into());
        reports.push(r);
    }
    let scan = ScanOptions {
        samples,
        seed: cfg.seed,
        tol,
        spread: c.spread,
    };
    reports.push(hessian_psd_scan_with(model.as_ref(), &scan)?);
    reports.push(s2_monotonicity_scan_with(
        model.as_ref(),
        samples,
        cfg.seed,
        c.spread,
        MONOTONICITY_TOL.max(tol),
    )?);
    let fs = sample_gradients(cfg.seed, c.gradient_samples, c.stretch_min, c.stretch_max);
    let mut lh = legendre_hadamard_scan(model.as_ref(), &fs, c.sphere_points, tol)?;
    lh.seed = Some(cfg.seed);
    reports.push(lh);
    if let Some(w) = model.spectral_term() {
        let mut r = davis_check(&w, &grid)?;
        r.model = Some(model.name().to_string());
        reports.push(r);
    }

    let overall = if reports.iter().any(|r| r.verdict == Verdict::NotConvex) {
        Verdict::NotConvex
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Convex
    };
    let exit_code = match overall {
        Verdict::Convex => EXIT_OK,
        Verdict::NotConvex => EXIT_REFUSED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(CheckBundle {
        model: cfg.model.clone(),
        model_name: model.name().to_string(),
        parameters: parameters(model.as_ref()),
        capabilities: model.capabilities(),
        seed: cfg.seed,
        samples,
        tolerance: tol,
        reports,
        overall,
        exit_code,
    })
}

/// Closed-form claim of the model if it has one, otherwise a sampled scan.
pub fn convexity_evidence(model: &dyn EnergyModel, cfg: &RunConfig) -> Result<ConvexityReport> {
    if let Some(r) = ConvexityReport::from_model_claim(model) {
        return Ok(r);
    }
    let opts = ScanOptions {
        samples: cfg.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: cfg.seed,
        tol: DEFAULT_SCAN_TOL,
        spread: cfg.check.spread,
    };
    hessian_psd_scan_with(model, &opts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    pub converged: bool,
    pub iterations: usize,
    pub residual_norm: f64,
    pub initial_residual: f64,
    pub energy: f64,
    pub energy_history: Vec<f64>,
    pub gradient_steps: usize,
    pub tolerance: f64,
}

impl SolveSummary {
    fn new(o: &SolveOutcome, tol: f64) -> Self {
        SolveSummary {
            converged: o.converged,
            iterations: o.iterations,
            residual_norm: o.residual_norm,
            initial_residual: o.initial_residual,
            energy: o.energy(),
            energy_history: o.energy_history.clone(),
            gradient_steps: o.gradient_steps,
            tolerance: tol,
        }
    }
}

fn solver_options(cfg: &RunConfig) -> SolverOptions {
    SolverOptions {
        tol: cfg.tol.unwrap_or(cfg.solver.tol),
        max_iter: cfg.solver.max_iter,
    }
}

/// Runs the solver; a budget overrun still yields the best iterate.
fn run_solver(cfg: &RunConfig, model: &dyn EnergyModel) -> Result<(SolveOutcome, SolverOptions)> {
    let mesh = cfg
        .mesh
        .as_ref()
        .ok_or_else(|| Error::Config("missing \"mesh\" section".into()))?
        .build()?;
    let data = cfg
        .dirichlet
        .as_ref()
        .ok_or_else(|| Error::Config("missing \"dirichlet\" section".into()))?
        .build();
    let opts = solver_options(cfg);
    match solve(mesh, model, &data, &opts) {
        Ok(o) => Ok((o, opts)),
        Err(Error::SolverNoConvergence(o)) => Ok((*o, opts)),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub model: ModelSpec,
    pub solve: SolveSummary,
}

fn write_field(out: &Path, o: &SolveOutcome) -> Result<PathBuf> {
    let path = out.join("field.csv");
    o.field.write_csv(std::fs::File::create(&path)?)?;
    Ok(path)
}

fn write_solve(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let model = model_of(cfg)?;
    let (o, opts) = run_solver(cfg, model.as_ref())?;
    let report = SolveReport {
        model: cfg.model.clone(),
        solve: SolveSummary::new(&o, opts.tol),
    };
    let path = out.join("solve_report.json");
    json::write_file(&path, &report)?;
    let field = write_field(out, &o)?;
    Ok(Outcome {
        code: if o.converged { EXIT_OK } else { EXIT_SOLVER },
        files: vec![path, field],
        message: format!(
            "residual {:e} after {} iterations",
            o.residual_norm, o.iterations
        ),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub model: ModelSpec,
    pub seed: u64,
    pub solve: SolveSummary,
    pub certificate: Option<Certificate>,
    pub energy_gap: Option<GapReport>,
    pub stability: Option<StabilityReport>,
    pub passed: bool,
    pub notes: Vec<String>,
}

/// Solve, certify and gap-test. The certificate is absent when the solver
/// did not converge.
pub fn cmd_certify(cfg: &RunConfig) -> Result<(CertifyReport, SolveOutcome)> {
    let model = model_of(cfg)?;
    let (o, opts) = run_solver(cfg, model.as_ref())?;
    let mut report = CertifyReport {
        model: cfg.model.clone(),
        seed: cfg.seed,
        solve: SolveSummary::new(&o, opts.tol),
        certificate: None,
        energy_gap: None,
        stability: None,
        passed: false,
        notes: Vec::new(),
    };
    if !o.converged {
        report
            .notes
            .push("solver did not converge; no certificate issued".into());
        return Ok((report, o));
    }
    let evidence = convexity_evidence(model.as_ref(), cfg)?;
    let c = &cfg.certify;
    let cert = certify_global(
        &o.field,
        model.as_ref(),
        &evidence,
        &CertifyOptions {
            tol_residual: c.tol_residual,
            tol_pd: c.tol_pd,
            min_det: c.min_det,
        },
    );
    let has_free = o.field.mesh.free_nodes().next().is_some();
    let gap_ok = if has_free {
        let perturbations = cfg.samples.unwrap_or(c.perturbations);
        let gap = energy_gap_test(&o.field, model.as_ref(), perturbations, cfg.seed)?;
        let passed = gap.passed;
        report.energy_gap = Some(gap);
        let fields = cfg.samples.unwrap_or(c.stability_fields);
        report.stability = Some(stability_quadform_scan(
            &o.field,
            model.as_ref(),
            fields,
            cfg.seed,
        )?);
        passed
    } else {
        report
            .notes
            .push("no free nodes: energy-gap and stability tests skipped".into());
        true
    };
    report.passed = cert.is_global_minimizer() && gap_ok;
    report.certificate = Some(cert);
    Ok((report, o))
}

fn write_certify(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let (report, o) = cmd_certify(cfg)?;
    let path = out.join("certificate.json");
    json::write_file(&path, &report)?;
    let field = write_field(out, &o)?;
    let (code, message) = match &report.certificate {
        None => (EXIT_SOLVER, "solver did not converge".to_string()),
        Some(_) if report.passed => (EXIT_OK, "global minimizer".to_string()),
        Some(c) => (
            EXIT_REFUSED,
            match c.failing_gates.first() {
                Some(g) => format!("refused: {}", g.gate.description()),
                None => "refused: energy-gap test failed".to_string(),
            },
        ),
    };
    Ok(Outcome {
        code,
        files: vec![path, field],
        message,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PointError {
    pub t: f64,
    pub error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HullSummary {
    pub model: ModelSpec,
    pub status: &'static str,
    pub evidence: ConvexityReport,
    pub options: Option<HullOptions>,
    pub points: usize,
    pub max_gap: Option<f64>,
    pub all_converged: bool,
    pub errors: Vec<PointError>,
}

fn write_hull(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let model = model_of(cfg)?;
    let evidence = convexity_evidence(model.as_ref(), cfg)?;
    let summary_path = out.join("hull_summary.json");
    if evidence.verdict != Verdict::Convex {
        let summary = HullSummary {
            model: cfg.model.clone(),
            status: "refused",
            evidence,
            options: None,
            points: 0,
            max_gap: None,
            all_converged: false,
            errors: Vec::new(),
        };
        json::write_file(&summary_path, &summary)?;
        return Ok(Outcome {
            code: EXIT_REFUSED,
            files: vec![summary_path],
            message: "model is not convex in C; hull formula does not apply".into(),
        });
    }
    let opts = HullOptions {
        starts: cfg.hull.starts,
        tol: cfg.tol.unwrap_or(cfg.hull.tol),
        seed: cfg.seed,
        max_iter: cfg.hull.max_iter,
    };
    let path = cfg.hull.path.build()?;
    let rows = hull_sweep(model.as_ref(), &path, &evidence, &opts)?;
    let csv_path = out.join("hull_sweep.csv");
    write_sweep_csv(&rows, std::fs::File::create(&csv_path)?)?;
    let summary = HullSummary {
        model: cfg.model.clone(),
        status: "ok",
        evidence,
        options: Some(opts),
        points: rows.len(),
        max_gap: rows
            .iter()
            .filter(|r| r.error.is_none())
            .map(|r| r.gap)
            .reduce(f64::max),
        all_converged: rows.iter().all(|r| r.converged),
        errors: rows
            .iter()
            .filter_map(|r| r.error.clone().map(|error| PointError { t: r.t, error }))
            .collect(),
    };
    json::write_file(&summary_path, &summary)?;
    let (code, message) = if summary.all_converged {
        (EXIT_OK, format!("{} hull points", rows.len()))
    } else {
        (
            EXIT_SOLVER,
            format!(
                "{} hull points, some did not converge (infimum possibly unbounded)",
                rows.len()
            ),
        )
    };
    Ok(Outcome {
        code,
        files: vec![csv_path, summary_path],
        message,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizeReport {
    pub model: ModelSpec,
    pub response: LinearizedResponse,
}

pub fn cmd_linearize(cfg: &RunConfig) -> Result<LinearizeReport> {
    let m = cfg.model.build_neo_hooke()?;
    Ok(LinearizeReport {
        model: cfg.model.clone(),
        response: m.linearized_response(),
    })
}
