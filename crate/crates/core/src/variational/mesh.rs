use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gauss points per cell.
pub const QP_PER_CELL: usize = 8;

/// Faces of the box, used to select the Dirichlet portion Γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
}

impl Face {
    pub const ALL: [Face; 6] = [
        Face::XMin,
        Face::XMax,
        Face::YMin,
        Face::YMax,
        Face::ZMin,
        Face::ZMax,
    ];
}

/// Structured mesh of axis-aligned trilinear hexahedra on a box.
///
/// Nodes are numbered lexicographically with x fastest. Every cell has the
/// same shape, so shape-function gradients at the Gauss points are shared.
#[derive(Clone, Debug, PartialEq)]
pub struct HexMesh {
    dims: [usize; 3],
    origin: Vector3<f64>,
    lengths: Vector3<f64>,
    dirichlet: Vec<bool>,
    faces: Vec<Face>,
    grads: [[Vector3<f64>; 8]; QP_PER_CELL],
    shape: [[f64; 8]; QP_PER_CELL],
}

/// Local node `a` sits at reference corner `(ξ, η, ζ)` with entries ±1.
const CORNERS: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
];

impl HexMesh {
    /// Box `origin + [0, lengths]` with `dims` cells per axis and Γ = ∂Ω.
    pub fn new(dims: [usize; 3], origin: Vector3<f64>, lengths: Vector3<f64>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidParameter(format!(
                "cell counts must be positive (got {dims:?})"
            )));
        }
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "box lengths must be positive (got {lengths:?})"
            )));
        }
        let h = lengths.component_div(&Vector3::new(
            dims[0] as f64,
            dims[1] as f64,
            dims[2] as f64,
        ));
        let g = 1.0 / 3f64.sqrt();
        let mut grads = [[Vector3::zeros(); 8]; QP_PER_CELL];
        let mut shape = [[0.0; 8]; QP_PER_CELL];
        for (q, xi) in CORNERS.iter().enumerate() {
            let p = [xi[0] * g, xi[1] * g, xi[2] * g];
            for (a, c) in CORNERS.iter().enumerate() {
                let f = [1.0 + c[0] * p[0], 1.0 + c[1] * p[1], 1.0 + c[2] * p[2]];
                shape[q][a] = f[0] * f[1] * f[2] / 8.0;
                // dN/dx = dN/dξ · 2/h
                grads[q][a] = Vector3::new(
                    c[0] * f[1] * f[2] / 8.0 * 2.0 / h[0],
                    f[0] * c[1] * f[2] / 8.0 * 2.0 / h[1],
                    f[0] * f[1] * c[2] / 8.0 * 2.0 / h[2],
                );
            }
        }
        let mut mesh = HexMesh {
            dims,
            origin,
            lengths,
            dirichlet: Vec::new(),
            faces: Vec::new(),
            grads,
            shape,
        };
        mesh.set_dirichlet_faces(&Face::ALL);
        Ok(mesh)
    }

    /// Unit cube with `n³` cells.
    pub fn unit_cube(n: usize) -> Result<Self> {
        Self::new([n, n, n], Vector3::zeros(), Vector3::repeat(1.0))
    }

    /// Restricts Γ to the given faces. An empty list leaves Γ empty.
    pub fn with_dirichlet_faces(mut self, faces: &[Face]) -> Self {
        self.set_dirichlet_faces(faces);
        self
    }

    fn set_dirichlet_faces(&mut self, faces: &[Face]) {
        let [nx, ny, nz] = self.dims;
        self.faces = faces.to_vec();
        self.dirichlet = (0..self.node_count())
            .map(|n| {
                let (i, j, k) = self.node_ijk(n);
                faces.iter().any(|f| match f {
                    Face::XMin => i == 0,
                    Face::XMax => i == nx,
                    Face::YMin => j == 0,
                    Face::YMax => j == ny,
                    Face::ZMin => k == 0,
                    Face::ZMax => k == nz,
                })
            })
            .collect();
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn origin(&self) -> Vector3<f64> {
        self.origin
    }

    pub fn lengths(&self) -> Vector3<f64> {
        self.lengths
    }

    pub fn dirichlet_faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn node_count(&self) -> usize {
        (self.dims[0] + 1) * (self.dims[1] + 1) * (self.dims[2] + 1)
    }

    pub fn cell_count(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn volume(&self) -> f64 {
        self.lengths.product()
    }

    /// Cell edge lengths.
    pub fn spacing(&self) -> Vector3<f64> {
        self.lengths.component_div(&Vector3::new(
            self.dims[0] as f64,
            self.dims[1] as f64,
            self.dims[2] as f64,
        ))
    }

    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + (self.dims[0] + 1) * (j + (self.dims[1] + 1) * k)
    }

    pub fn node_ijk(&self, n: usize) -> (usize, usize, usize) {
        let nx = self.dims[0] + 1;
        let ny = self.dims[1] + 1;
        (n % nx, (n / nx) % ny, n / (nx * ny))
    }

    pub fn node_coords(&self, n: usize) -> Vector3<f64> {
        let (i, j, k) = self.node_ijk(n);
        let h = self.spacing();
        self.origin + Vector3::new(i as f64 * h[0], j as f64 * h[1], k as f64 * h[2])
    }

    /// Global node numbers of a cell in local corner order.
    pub fn cell_nodes(&self, cell: usize) -> [usize; 8] {
        let [nx, ny, _] = self.dims;
        let (i, j, k) = (cell % nx, (cell / nx) % ny, cell / (nx * ny));
        std::array::from_fn(|a| {
            let c = CORNERS[a];
            self.node_index(
                i + (c[0] > 0.0) as usize,
                j + (c[1] > 0.0) as usize,
                k + (c[2] > 0.0) as usize,
            )
        })
    }

    /// Physical position of a quadrature point.
    pub fn quadrature_point(&self, cell: usize, qp: usize) -> Vector3<f64> {
        let nodes = self.cell_nodes(cell);
        nodes
            .iter()
            .zip(self.shape[qp].iter())
            .map(|(&n, &w)| self.node_coords(n) * w)
            .sum()
    }

    /// Gradients of the eight local shape functions at quadrature point `qp`.
    pub fn shape_gradients(&self, qp: usize) -> &[Vector3<f64>; 8] {
        &self.grads[qp]
    }

    /// Quadrature weight times Jacobian; identical for every point.
    pub fn qp_weight(&self) -> f64 {
        self.volume() / (self.cell_count() * QP_PER_CELL) as f64
    }

    pub fn is_dirichlet(&self, node: usize) -> bool {
        self.dirichlet[node]
    }

    pub fn dirichlet_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&n| self.dirichlet[n])
    }

    pub fn free_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&n| !self.dirichlet[n])
    }
}
