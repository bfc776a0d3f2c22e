use std::path::Path;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::tensor::Mat3;
use crate::variational::{DirichletData, Face, HexMesh};

/// Subcommand names, as accepted in the optional `command` field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Check,
    Certify,
    Solve,
    Hull,
    Linearize,
}

/// Top-level run configuration. Unknown keys are rejected at every level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// If present, must match the subcommand.
    #[serde(default)]
    pub command: Option<Command>,
    pub model: ModelSpec,
    #[serde(default)]
    pub seed: u64,
    /// Sample budget: Hessian and monotonicity scans for `check`, gap and
    /// stability test fields for `certify`, evidence scan for `hull`.
    #[serde(default)]
    pub samples: Option<usize>,
    /// Scan tolerance for `check`, solver tolerance for `certify`/`solve`,
    /// descent tolerance for `hull`.
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default)]
    pub mesh: Option<MeshConfig>,
    #[serde(default)]
    pub dirichlet: Option<DirichletConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub certify: CertifyConfig,
    #[serde(default)]
    pub hull: HullConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    /// Dimension n of the scalar determinant test.
    pub dimension: usize,
    pub spread: f64,
    pub gradient_samples: usize,
    pub stretch_min: f64,
    pub stretch_max: f64,
    pub sphere_points: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            grid_min: crate::convexity::DEFAULT_GRID_MIN,
            grid_max: crate::convexity::DEFAULT_GRID_MAX,
            grid_points: crate::convexity::DEFAULT_GRID_POINTS,
            dimension: 3,
            spread: crate::convexity::DEFAULT_SCAN_SPREAD,
            gradient_samples: 50,
            stretch_min: 0.1,
            stretch_max: 2.0,
            sphere_points: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub dims: [usize; 3],
    #[serde(default)]
    pub origin: [f64; 3],
    #[serde(default = "unit_lengths")]
    pub lengths: [f64; 3],
    /// Faces forming Γ; all six when omitted.
    #[serde(default)]
    pub dirichlet_faces: Option<Vec<Face>>,
}

fn unit_lengths() -> [f64; 3] {
    [1.0; 3]
}

impl MeshConfig {
    pub fn build(&self) -> Result<Arc<HexMesh>> {
        let mesh = HexMesh::new(
            self.dims,
            Vector3::from(self.origin),
            Vector3::from(self.lengths),
        )?;
        Ok(Arc::new(match &self.dirichlet_faces {
            Some(faces) => mesh.with_dirichlet_faces(faces),
            None => mesh,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub node: usize,
    pub value: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DirichletConfig {
    /// `φ₀(x) = F x + offset`, with F given row-major.
    Affine {
        f: [f64; 9],
        #[serde(default)]
        offset: [f64; 3],
    },
    Table(Vec<TableEntry>),
}

impl DirichletConfig {
    pub fn build(&self) -> DirichletData {
        match self {
            DirichletConfig::Affine { f, offset } => DirichletData::Affine {
                f: Mat3::from_row_slice(f),
                offset: Vector3::from(*offset),
            },
            DirichletConfig::Table(rows) => DirichletData::Table(
                rows.iter()
                    .map(|r| (r.node, Vector3::from(r.value)))
                    .collect(),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = crate::variational::SolverOptions::default();
        SolverConfig {
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertifyConfig {
    pub tol_residual: f64,
    pub tol_pd: f64,
    pub min_det: f64,
    pub perturbations: usize,
    pub stability_fields: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        let d = crate::variational::CertifyOptions::default();
        CertifyConfig {
            tol_residual: d.tol_residual,
            tol_pd: d.tol_pd,
            min_det: d.min_det,
            perturbations: 100,
            stability_fields: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PathConfig {
    /// `F(t) = diag(t, 1, 1)`.
    Uniaxial {
        t_min: f64,
        t_max: f64,
        points: usize,
    },
    Points(Vec<PathPoint>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathPoint {
    pub t: f64,
    pub f: [f64; 9],
}

impl PathConfig {
    pub fn build(&self) -> Result<Vec<(f64, Mat3)>> {
        match self {
            PathConfig::Uniaxial {
                t_min,
                t_max,
                points,
            } => {
                if *points == 0 {
                    return Err(Error::Config("hull path needs at least one point".into()));
                }
                Ok(crate::hull::uniaxial_path(*t_min, *t_max, *points))
            }
            PathConfig::Points(p) => Ok(p
                .iter()
                .map(|p| (p.t, Mat3::from_row_slice(&p.f)))
                .collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HullConfig {
    pub path: PathConfig,
    pub starts: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for HullConfig {
    fn default() -> Self {
        let d = crate::hull::HullOptions::default();
        HullConfig {
            path: PathConfig::Uniaxial {
                t_min: 0.1,
                t_max: 2.0,
                points: 20,
            },
            starts: d.starts,
            tol: d.tol,
            max_iter: d.max_iter,
        }
    }
}

/// Command-line overrides.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if o.samples.is_some() {
            self.samples = o.samples;
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
    }

    /// Checks everything that can be checked without running the command.
    pub fn validate(&self, command: Command) -> Result<()> {
        if let Some(c) = self.command {
            if c != command {
                return Err(Error::Config(format!(
                    "config is for {c:?}, invoked as {command:?}"
                )));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::Config(format!("tol must be positive (got {t})")));
            }
        }
        if self.samples == Some(0) {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        self.model
            .build()
            .map_err(|e| Error::Config(format!("model: {e}")))?;
        match command {
            Command::Certify | Command::Solve => {
                let mesh = self
                    .mesh
                    .as_ref()
                    .ok_or_else(|| Error::Config("missing \"mesh\" section".into()))?;
                mesh.build()
                    .map_err(|e| Error::Config(format!("mesh: {e}")))?;
                if self.dirichlet.is_none() {
                    return Err(Error::Config("missing \"dirichlet\" section".into()));
                }
            }
            Command::Hull => {
                self.hull.path.build()?;
                if self.hull.starts == 0 {
                    return Err(Error::Config("hull.starts must be at least 1".into()));
                }
            }
            Command::Linearize => {
                self.model.build_neo_hooke()?;
            }
            Command::Check => {
                let c = &self.check;
                if c.dimension < 2
                    || c.grid_points == 0
                    || !(c.grid_min > 0.0)
                    || !(c.grid_max >= c.grid_min)
                {
                    return Err(Error::Config("invalid check grid or dimension".into()));
                }
                if !(c.stretch_min > 0.0 && c.stretch_max >= c.stretch_min) || !(c.spread > 0.0) {
                    return Err(Error::Config("invalid check sampling ranges".into()));
                }
            }
        }
        Ok(())
    }
}
