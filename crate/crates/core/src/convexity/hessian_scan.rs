use rayon::prelude::*;

use super::{better, Basis, ConvexityReport, Property, Witness};
use crate::error::{Error, Result};
use crate::models::{hessian_c, EnergyModel};
use crate::tensor::{PsymSampler, SymMat3};

/// Entry range of the `A` in the `AᵀA + floor·I` samples.
pub const DEFAULT_SCAN_SPREAD: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub spread: f64,
}

impl ScanOptions {
    pub fn new(samples: usize, seed: u64, tol: f64) -> Self {
        ScanOptions {
            samples,
            seed,
            tol,
            spread: DEFAULT_SCAN_SPREAD,
        }
    }
}

struct Sample {
    index: u64,
    normalized: f64,
    c: SymMat3,
    direction: SymMat3,
    value: f64,
}

/// Smallest eigenvalue of the C-Hessian over sampled positive-definite C.
///
/// The reported `min_value` is `λ_min / (1 + ‖K‖)`; a sample is a violation
/// when that falls below `−tol`.
pub fn hessian_psd_scan(
    model: &dyn EnergyModel,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ConvexityReport> {
    hessian_psd_scan_with(model, &ScanOptions::new(samples, seed, tol))
}

pub fn hessian_psd_scan_with(
    model: &dyn EnergyModel,
    opts: &ScanOptions,
) -> Result<ConvexityReport> {
    if opts.samples == 0 {
        return Err(Error::InvalidParameter(
            "sample_count must be at least 1".into(),
        ));
    }
    if !(opts.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be non-negative (got {})",
            opts.tol
        )));
    }
    let sampler = PsymSampler::new(opts.seed, opts.spread);
    let results: Vec<Result<Sample>> = (0..opts.samples as u64)
        .into_par_iter()
        .map(|index| {
            let c = sampler.sample(index);
            let k = hessian_c(model, &c)?.operator;
            let (lambda, direction) = k.min_eigen()?;
            Ok(Sample {
                index,
                normalized: lambda / (1.0 + k.norm()),
                c,
                direction,
                value: k.form(&direction),
            })
        })
        .collect();

    let mut worst: Option<Sample> = None;
    for r in results {
        let s = r?;
        let replace = match &worst {
            None => true,
            Some(w) => better(&(s.normalized, s.index), &(w.normalized, w.index)),
        };
        if replace {
            worst = Some(s);
        }
    }
    let worst = worst.expect("at least one sample");
    let witness = (worst.normalized < -opts.tol).then_some(Witness::Hessian {
        c: worst.c,
        direction: worst.direction,
        value: worst.value,
    });
    let mut report = ConvexityReport::sampled(
        Property::ConvexInC,
        Basis::SampledSet,
        witness,
        worst.normalized,
        opts.samples,
        opts.tol,
        Some(opts.seed),
    );
    report.model = Some(model.name().to_string());
    report.notes.push(format!(
        "C = AᵀA + {:e}·I, entries of A uniform in [-{}, {}]; min_value is λ_min/(1+‖K‖)",
        sampler.floor, opts.spread, opts.spread
    ));
    Ok(report)
}
