use std::io::Write;
use std::sync::Arc;

use nalgebra::{DVector, Vector3};

use super::mesh::HexMesh;
use crate::error::{Error, Result};
use crate::tensor::Mat3;

/// Nodal values of a deformation `φ` on a mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationField {
    pub mesh: Arc<HexMesh>,
    pub values: Vec<Vector3<f64>>,
}

impl DeformationField {
    pub fn new(mesh: Arc<HexMesh>, values: Vec<Vector3<f64>>) -> Result<Self> {
        if values.len() != mesh.node_count() {
            return Err(Error::InvalidParameter(format!(
                "{} nodal values for {} nodes",
                values.len(),
                mesh.node_count()
            )));
        }
        if values.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::domain("non-finite nodal value"));
        }
        Ok(DeformationField { mesh, values })
    }

    pub fn from_fn(mesh: Arc<HexMesh>, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        let values = (0..mesh.node_count())
            .map(|n| f(&mesh.node_coords(n)))
            .collect();
        DeformationField { mesh, values }
    }

    pub fn identity(mesh: Arc<HexMesh>) -> Self {
        Self::from_fn(mesh, |x| *x)
    }

    /// `φ(x) = F x + b`.
    pub fn affine(mesh: Arc<HexMesh>, f: &Mat3, b: &Vector3<f64>) -> Self {
        Self::from_fn(mesh, |x| f * x + b)
    }

    pub fn translated(&self, t: &Vector3<f64>) -> Self {
        DeformationField {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|v| v + t).collect(),
        }
    }

    /// `φ + s·u` for nodal displacements `u`.
    pub fn perturbed(&self, u: &[Vector3<f64>], s: f64) -> Self {
        DeformationField {
            mesh: self.mesh.clone(),
            values: self.values.iter().zip(u).map(|(v, d)| v + d * s).collect(),
        }
    }

    /// Flattened as `[x₀, y₀, z₀, x₁, …]`.
    pub fn to_dofs(&self) -> DVector<f64> {
        DVector::from_iterator(
            3 * self.values.len(),
            self.values.iter().flat_map(|v| v.iter().copied()),
        )
    }

    pub fn set_dofs(&mut self, dofs: &DVector<f64>) {
        for (n, v) in self.values.iter_mut().enumerate() {
            *v = Vector3::new(dofs[3 * n], dofs[3 * n + 1], dofs[3 * n + 2]);
        }
    }

    /// CSV with header `node,x,y,z,phi_x,phi_y,phi_z`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "x", "y", "z", "phi_x", "phi_y", "phi_z"])?;
        for (n, v) in self.values.iter().enumerate() {
            let x = self.mesh.node_coords(n);
            let mut rec = vec![n.to_string()];
            rec.extend(x.iter().chain(v.iter()).map(|c| format!("{c:.16e}")));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `∇φ = Σ_a φ_a ⊗ ∇N_a` at a quadrature point.
pub fn interpolate_gradient(field: &DeformationField, cell: usize, qp: usize) -> Mat3 {
    let nodes = field.mesh.cell_nodes(cell);
    let grads = field.mesh.shape_gradients(qp);
    let mut f = Mat3::zeros();
    for (a, &n) in nodes.iter().enumerate() {
        f += field.values[n] * grads[a].transpose();
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::mesh::QP_PER_CELL;

    fn mesh(n: usize) -> Arc<HexMesh> {
        Arc::new(
            HexMesh::new(
                [n, n + 1, n],
                Vector3::new(0.5, -1.0, 0.0),
                Vector3::new(1.0, 2.0, 0.7),
            )
            .unwrap(),
        )
    }

    #[test]
    fn affine_fields_are_exact() {
        let f0 = Mat3::new(1.2, 0.1, -0.3, 0.0, 0.9, 0.2, 0.05, 0.0, 1.1);
        let field = DeformationField::affine(mesh(3), &f0, &Vector3::new(1.0, 2.0, 3.0));
        for cell in 0..field.mesh.cell_count() {
            for q in 0..QP_PER_CELL {
                assert!((interpolate_gradient(&field, cell, q) - f0).amax() < 1e-13);
            }
        }
        let id = DeformationField::identity(mesh(2));
        assert!((interpolate_gradient(&id, 3, 5) - Mat3::identity()).amax() < 1e-14);
    }

    #[test]
    fn quadratic_field_at_cell_centres() {
        // φ = x + ε(x₁², 0, 0): the average over a cell's Gauss points is the
        // gradient at its centre.
        let eps = 0.1;
        let field =
            DeformationField::from_fn(mesh(4), |x| x + Vector3::new(eps * x[0] * x[0], 0.0, 0.0));
        for cell in 0..field.mesh.cell_count() {
            let mean: Mat3 = (0..QP_PER_CELL)
                .map(|q| interpolate_gradient(&field, cell, q))
                .sum::<Mat3>()
                / 8.0;
            let centre: Vector3<f64> = (0..QP_PER_CELL)
                .map(|q| field.mesh.quadrature_point(cell, q))
                .sum::<Vector3<f64>>()
                / 8.0;
            let mut exact = Mat3::identity();
            exact[(0, 0)] += 2.0 * eps * centre[0];
            assert!((mean - exact).amax() < 1e-12);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let field = DeformationField::identity(Arc::new(HexMesh::unit_cube(1).unwrap()));
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "node,x,y,z,phi_x,phi_y,phi_z");
        assert_eq!(lines.count(), 8);
    }

    #[test]
    fn rejects_wrong_length() {
        assert!(DeformationField::new(mesh(1), vec![Vector3::zeros(); 3]).is_err());
    }
}
