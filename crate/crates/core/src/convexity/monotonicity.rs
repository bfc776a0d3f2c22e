use rand::Rng;
use rayon::prelude::*;

use super::{better, Basis, ConvexityReport, Property, Witness};
use crate::error::{Error, Result};
use crate::models::EnergyModel;
use crate::tensor::{rng_for, spectral, PsymSampler, SymMat3};

/// Threshold on the normalized inner product.
pub const MONOTONICITY_TOL: f64 = 1e-8;

const MAX_HALVINGS: usize = 60;
const LOCAL_STEP: f64 = 1e-2;

/// `⟨S₂(C₁) − S₂(C₂), C₁ − C₂⟩`.
pub fn s2_monotonicity_pair(model: &dyn EnergyModel, c1: &SymMat3, c2: &SymMat3) -> Result<f64> {
    let ds = model.s2(c1)? - model.s2(c2)?;
    Ok(ds.dot(&(*c1 - *c2)))
}

fn random_sym<R: Rng>(rng: &mut R) -> SymMat3 {
    let mut v = [0.0; 6];
    for x in &mut v {
        *x = rng.random_range(-1.0..=1.0);
    }
    SymMat3::from_components(v[0], v[1], v[2], v[3], v[4], v[5])
}

/// The `index`-th pair. Indices cycle through three constructions: two
/// independent samples, a sample moved along a random direction with a
/// boosted isotropic part, and a small local perturbation.
fn pair(sampler: &PsymSampler, index: u64) -> Result<(SymMat3, SymMat3)> {
    let mut rng = rng_for(sampler.seed, index);
    let c1 = sampler.draw(&mut rng);
    match index % 3 {
        0 => Ok((c1, sampler.draw(&mut rng))),
        1 => {
            let kappa = rng.random_range(-3.0..=3.0);
            let dir = random_sym(&mut rng) + SymMat3::scaled_identity(kappa);
            let mut t = sampler.spread * sampler.spread;
            for _ in 0..MAX_HALVINGS {
                let c2 = c1 + dir * t;
                if c2.is_pd_sylvester() {
                    return Ok((c1, c2));
                }
                t *= 0.5;
            }
            Ok((c1, c1))
        }
        _ => {
            let g = random_sym(&mut rng);
            let n = g.norm();
            let lambda_min = spectral(&c1)?.eigenvalues[0];
            let scale = if n > 0.0 {
                LOCAL_STEP * lambda_min / n
            } else {
                0.0
            };
            Ok((c1, c1 + g * scale))
        }
    }
}

/// Minimum over sampled pairs of the monotonicity inner product.
///
/// `min_value` is the inner product divided by `‖ΔS₂‖·‖ΔC‖` (zero for equal
/// arguments), which makes the threshold independent of stress magnitude.
/// Witnesses carry the raw inner product.
pub fn s2_monotonicity_scan(
    model: &dyn EnergyModel,
    pairs: usize,
    seed: u64,
) -> Result<ConvexityReport> {
    s2_monotonicity_scan_with(model, pairs, seed, 1.0, MONOTONICITY_TOL)
}

/// `(cosine, index, C1, C2, raw inner product)`.
type PairEval = (f64, u64, SymMat3, SymMat3, f64);

pub fn s2_monotonicity_scan_with(
    model: &dyn EnergyModel,
    pairs: usize,
    seed: u64,
    spread: f64,
    tol: f64,
) -> Result<ConvexityReport> {
    if pairs == 0 {
        return Err(Error::InvalidParameter(
            "pair_count must be at least 1".into(),
        ));
    }
    let sampler = PsymSampler::new(seed, spread);
    let results: Vec<Result<PairEval>> = (0..pairs as u64)
        .into_par_iter()
        .map(|index| {
            let (c1, c2) = pair(&sampler, index)?;
            let ds = model.s2(&c1)? - model.s2(&c2)?;
            let dc = c1 - c2;
            let raw = ds.dot(&dc);
            let denom = ds.norm() * dc.norm();
            let normalized = if denom > 0.0 { raw / denom } else { 0.0 };
            Ok((normalized, index, c1, c2, raw))
        })
        .collect();

    let mut worst: Option<PairEval> = None;
    for r in results {
        let s = r?;
        if worst
            .as_ref()
            .is_none_or(|w| better(&(s.0, s.1), &(w.0, w.1)))
        {
            worst = Some(s);
        }
    }
    let (min, _, c1, c2, raw) = worst.expect("at least one pair");
    let witness = (min < -tol).then_some(Witness::Pair { c1, c2, value: raw });
    let mut report = ConvexityReport::sampled(
        Property::S2Monotone,
        Basis::SampledSet,
        witness,
        min,
        pairs,
        tol,
        Some(seed),
    );
    report.model = Some(model.name().to_string());
    report
        .notes
        .push("min_value is ⟨ΔS₂, ΔC⟩ / (‖ΔS₂‖‖ΔC‖)".to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::{hessian_psd_scan, Verdict};
    use crate::models::{NegLogDet, SaintVenantKirchhoff};

    #[test]
    fn svk_diagonal_pair() {
        // ΔS₂ = ΔC for μ = 1, λ = 0, so the product is ‖ΔC‖² = 9.
        let m = SaintVenantKirchhoff::new(1.0, 0.0);
        let v = s2_monotonicity_pair(
            &m,
            &SymMat3::identity(),
            &SymMat3::from_diagonal([4.0, 1.0, 1.0]),
        )
        .unwrap();
        assert!((v - 9.0).abs() < 1e-14);
    }

    #[test]
    fn equal_arguments_give_zero() {
        let c = PsymSampler::new(3, 1.0).sample(0);
        assert_eq!(
            s2_monotonicity_pair(&NegLogDet::new(), &c, &c).unwrap(),
            0.0
        );
    }

    #[test]
    fn neg_log_det_is_monotone() {
        let r = s2_monotonicity_scan(&NegLogDet::new(), 1000, 5).unwrap();
        assert_eq!(r.verdict, Verdict::Convex);
        assert!(r.min_value >= -1e-10);
    }

    #[test]
    fn agrees_with_hessian_scan_on_svk() {
        for lambda in [1.0, -1.0] {
            let m = SaintVenantKirchhoff::new(1.0, lambda);
            let mono = s2_monotonicity_scan(&m, 300, 9).unwrap();
            let hess = hessian_psd_scan(&m, 300, 9, 1e-10).unwrap();
            assert_eq!(mono.verdict, hess.verdict, "lambda = {lambda}");
            if let Some(w) = mono.witness {
                assert!((w.reevaluate(&m).unwrap().unwrap() - w.value()).abs() <= 1e-10);
            }
        }
    }
}
