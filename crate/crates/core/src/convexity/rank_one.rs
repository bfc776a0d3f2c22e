use nalgebra::{SMatrix, Vector3};
use rand::Rng;
use rayon::prelude::*;

use super::{better, Basis, ConvexityReport, Property, Witness};
use crate::error::{Error, Result};
use crate::models::{EnergyModel, GradientTangent};
use crate::tensor::{det3, random_rotation, rng_for, Mat3};

/// `D²_F W(F)[a⊗b, a⊗b]`.
pub fn rank_one_form(
    model: &dyn EnergyModel,
    f: &Mat3,
    a: &Vector3<f64>,
    b: &Vector3<f64>,
) -> Result<f64> {
    Ok(GradientTangent::new(model, f)?.rank_one_form(a, b))
}

/// `n` points of a Fibonacci lattice on the unit sphere.
pub fn sphere_points(n: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// The nine coordinate dyads followed by all pairs of sphere points.
pub fn rank_one_directions(sphere: usize) -> Vec<(Vector3<f64>, Vector3<f64>)> {
    let e = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut dirs: Vec<_> = e
        .iter()
        .flat_map(|a| e.iter().map(move |b| (*a, *b)))
        .collect();
    let pts = sphere_points(sphere);
    for a in &pts {
        for b in &pts {
            dirs.push((*a, *b));
        }
    }
    dirs
}

/// Deformation gradients `R₁·diag(s)·R₂` with stretches uniform in
/// `[stretch_min, stretch_max]`. The first three samples are diagonal.
pub fn sample_gradients(seed: u64, count: usize, stretch_min: f64, stretch_max: f64) -> Vec<Mat3> {
    assert!(
        0.0 < stretch_min && stretch_min <= stretch_max,
        "invalid stretch range"
    );
    (0..count as u64)
        .map(|k| {
            let mut rng = rng_for(seed, k);
            let s = Vector3::from_fn(|_, _| rng.random_range(stretch_min..=stretch_max));
            let d = Mat3::from_diagonal(&s);
            if k < 3 {
                d
            } else {
                random_rotation(&mut rng) * d * random_rotation(&mut rng)
            }
        })
        .collect()
}

fn quad(a9: &SMatrix<f64, 9, 9>, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let v = SMatrix::<f64, 9, 1>::from_fn(|k, _| a[k / 3] * b[k % 3]);
    (v.transpose() * a9 * v)[(0, 0)]
}

/// Legendre-Hadamard scan: a violation is a unit pair `(a, b)` with
/// `D²_F W(F)[a⊗b, a⊗b] < −tol`.
pub fn legendre_hadamard_scan(
    model: &dyn EnergyModel,
    f_samples: &[Mat3],
    sphere: usize,
    tol: f64,
) -> Result<ConvexityReport> {
    if let Some((k, f)) = f_samples.iter().enumerate().find(|(_, f)| !(det3(f) > 0.0)) {
        return Err(Error::domain(format!(
            "F sample {k} has det F = {:e}",
            det3(f)
        )));
    }
    let dirs = rank_one_directions(sphere);
    let dirs: Vec<_> = dirs
        .into_iter()
        .filter(|(a, b)| a.norm() > 0.0 && b.norm() > 0.0)
        .collect();

    let results: Vec<Result<(f64, u64, usize)>> = f_samples
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let t = GradientTangent::new(model, f)?;
            let a9 = t.matrix9();
            let mut best = (f64::INFINITY, 0usize);
            for (j, (a, b)) in dirs.iter().enumerate() {
                let v = quad(&a9, a, b);
                if v < best.0 {
                    best = (v, j);
                }
            }
            Ok((best.0, k as u64, best.1))
        })
        .collect();

    let mut worst: Option<(f64, u64, usize)> = None;
    for r in results {
        let s = r?;
        if worst
            .as_ref()
            .is_none_or(|w| better(&(s.0, s.1), &(w.0, w.1)))
        {
            worst = Some(s);
        }
    }
    let samples = f_samples.len() * dirs.len();
    let (min, witness) = match worst {
        None => (f64::NAN, None),
        Some((_, k, j)) => {
            let f = f_samples[k as usize];
            let (a, b) = dirs[j];
            let value = rank_one_form(model, &f, &a, &b)?;
            let w = (value < -tol).then(|| Witness::RankOne {
                f,
                a: a.into(),
                b: b.into(),
                value,
            });
            (value, w)
        }
    };
    let mut report = ConvexityReport::sampled(
        Property::RankOneConvex,
        Basis::SampledSet,
        witness,
        min,
        samples,
        tol,
        None,
    );
    report.model = Some(model.name().to_string());
    report.notes.push(format!(
        "{} gradients × {} directions (9 coordinate dyads + {}² sphere pairs)",
        f_samples.len(),
        dirs.len(),
        sphere
    ));
    Ok(report)
}
