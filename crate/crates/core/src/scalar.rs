//! Scalar functions on the positive half-line, carried together with their
//! first two derivatives.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

type Fun = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A `C²` function `f` on `(0, ∞)` given as the triple `(f, f′, f″)`.
#[derive(Clone)]
pub struct ScalarC2Function {
    name: String,
    f: Fun,
    df: Fun,
    d2f: Fun,
}

impl fmt::Debug for ScalarC2Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarC2Function")
            .field("name", &self.name)
            .finish()
    }
}

impl ScalarC2Function {
    /// Caller-supplied triple. No consistency check is made between the three.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarC2Function {
            name: name.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            d2f: Arc::new(d2f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn d1(&self, s: f64) -> f64 {
        (self.df)(s)
    }

    pub fn d2(&self, s: f64) -> f64 {
        (self.d2f)(s)
    }

    /// `coef · s^p`.
    pub fn power(coef: f64, p: f64) -> Self {
        Self::new(
            format!("{coef}*s^{p}"),
            move |s| coef * s.powf(p),
            move |s| coef * p * s.powf(p - 1.0),
            move |s| coef * p * (p - 1.0) * s.powf(p - 2.0),
        )
    }

    /// `−coef · log s`.
    pub fn neg_log(coef: f64) -> Self {
        Self::new(
            format!("-{coef}*log(s)"),
            move |s| -coef * s.ln(),
            move |s| -coef / s,
            move |s| coef / (s * s),
        )
    }

    pub fn zero() -> Self {
        Self::new("0", |_| 0.0, |_| 0.0, |_| 0.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let (f, df, d2f) = (self.f.clone(), self.df.clone(), self.d2f.clone());
        Self::new(
            format!("{k}*({})", self.name),
            move |s| k * f(s),
            move |s| k * df(s),
            move |s| k * d2f(s),
        )
    }

    pub fn sum(&self, other: &ScalarC2Function) -> Self {
        let (f1, df1, d2f1) = (self.f.clone(), self.df.clone(), self.d2f.clone());
        let (f2, df2, d2f2) = (other.f.clone(), other.df.clone(), other.d2f.clone());
        Self::new(
            format!("{} + {}", self.name, other.name),
            move |s| f1(s) + f2(s),
            move |s| df1(s) + df2(s),
            move |s| d2f1(s) + d2f2(s),
        )
    }
}

/// Serializable description of a [`ScalarC2Function`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarSpec {
    /// `coef · s^exponent`
    Power {
        #[serde(default = "one")]
        coef: f64,
        exponent: f64,
    },
    /// `−coef · log s`
    NegLog {
        #[serde(default = "one")]
        coef: f64,
    },
    Zero,
    Sum {
        terms: Vec<ScalarSpec>,
    },
}

fn one() -> f64 {
    1.0
}

impl ScalarSpec {
    pub fn build(&self) -> ScalarC2Function {
        match self {
            ScalarSpec::Power { coef, exponent } => ScalarC2Function::power(*coef, *exponent),
            ScalarSpec::NegLog { coef } => ScalarC2Function::neg_log(*coef),
            ScalarSpec::Zero => ScalarC2Function::zero(),
            ScalarSpec::Sum { terms } => terms
                .iter()
                .map(ScalarSpec::build)
                .reduce(|a, b| a.sum(&b))
                .unwrap_or_else(ScalarC2Function::zero),
        }
    }
}

/// `points` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && points >= 1);
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: &ScalarC2Function, s: f64) {
        let h = 1e-5 * s;
        let d1 = (f.value(s + h) - f.value(s - h)) / (2.0 * h);
        let d2 = (f.d1(s + h) - f.d1(s - h)) / (2.0 * h);
        assert!(
            (d1 - f.d1(s)).abs() <= 1e-6 * (1.0 + f.d1(s).abs()),
            "{}",
            f.name()
        );
        assert!(
            (d2 - f.d2(s)).abs() <= 1e-6 * (1.0 + f.d2(s).abs()),
            "{}",
            f.name()
        );
    }

    #[test]
    fn derivative_triples_are_consistent() {
        for f in [
            ScalarC2Function::power(1.0, 2.0),
            ScalarC2Function::power(2.0, -0.5),
            ScalarC2Function::neg_log(1.5),
            ScalarC2Function::power(1.0, 0.5).sum(&ScalarC2Function::neg_log(1.0)),
            ScalarC2Function::power(1.0, 3.0).scaled(-2.0),
        ] {
            for s in [0.1, 0.7, 1.0, 3.0] {
                fd_check(&f, s);
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"kind":"sum","terms":[{"kind":"power","exponent":2.0},{"kind":"neg_log","coef":0.5}]}"#;
        let spec: ScalarSpec = serde_json::from_str(json).unwrap();
        let f = spec.build();
        assert!((f.value(2.0) - (4.0 - 0.5 * 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 61);
        assert_eq!(g.len(), 61);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!((g[60] - 1e3).abs() < 1e-9);
        assert!((g[30] - 1.0).abs() < 1e-12);
    }
}
