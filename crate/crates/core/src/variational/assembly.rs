use nalgebra::{DMatrix, Vector3};
use rayon::prelude::*;

use super::field::{interpolate_gradient, DeformationField};
use super::mesh::QP_PER_CELL;
use crate::error::{Error, Result};
use crate::models::{s1, EnergyModel, GradientTangent};
use crate::tensor::{det3, Mat3};

/// Gradient at every quadrature point, cell-major.
pub fn quadrature_gradients(field: &DeformationField) -> Vec<Mat3> {
    (0..field.mesh.cell_count())
        .into_par_iter()
        .flat_map_iter(|cell| (0..QP_PER_CELL).map(move |q| interpolate_gradient(field, cell, q)))
        .collect()
}

/// `(min det F, cell, qp)` over all quadrature points.
pub fn min_det(field: &DeformationField) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, 0);
    for (k, f) in quadrature_gradients(field).iter().enumerate() {
        let d = det3(f);
        if d < best.0 || d.is_nan() {
            best = (d, k / QP_PER_CELL, k % QP_PER_CELL);
        }
    }
    best
}

pub(crate) fn check_admissible(grads: &[Mat3]) -> Result<()> {
    for (k, f) in grads.iter().enumerate() {
        let det = det3(f);
        if !(det > 0.0) {
            return Err(Error::InadmissibleField {
                cell: k / QP_PER_CELL,
                qp: k % QP_PER_CELL,
                det,
            });
        }
    }
    Ok(())
}

/// `I(φ) = ∫ W(∇φ) dx` by 2×2×2 Gauss quadrature.
pub fn assemble_energy(field: &DeformationField, model: &dyn EnergyModel) -> Result<f64> {
    let grads = quadrature_gradients(field);
    check_admissible(&grads)?;
    let per_cell: Vec<Result<f64>> = grads
        .par_chunks(QP_PER_CELL)
        .map(|fs| {
            fs.iter()
                .map(|f| crate::models::energy_of_gradient(model, f))
                .sum()
        })
        .collect();
    let mut total = 0.0;
    for e in per_cell {
        total += e?;
    }
    Ok(total * field.mesh.qp_weight())
}

/// Nodal residual `∫ S₁(∇φ)·∇N_a dx`, with Dirichlet rows zeroed. This is
/// the gradient of [`assemble_energy`] with respect to the free values.
pub fn assemble_residual(
    field: &DeformationField,
    model: &dyn EnergyModel,
) -> Result<Vec<Vector3<f64>>> {
    let mesh = &field.mesh;
    let grads = quadrature_gradients(field);
    check_admissible(&grads)?;
    let w = mesh.qp_weight();
    let per_cell: Vec<Result<[Vector3<f64>; 8]>> = grads
        .par_chunks(QP_PER_CELL)
        .map(|fs| {
            let mut r = [Vector3::zeros(); 8];
            for (q, f) in fs.iter().enumerate() {
                let p = s1(model, f)?;
                for (a, g) in mesh.shape_gradients(q).iter().enumerate() {
                    r[a] += p * g * w;
                }
            }
            Ok(r)
        })
        .collect();
    let mut res = vec![Vector3::zeros(); mesh.node_count()];
    for (cell, r) in per_cell.into_iter().enumerate() {
        let r = r?;
        for (a, &n) in mesh.cell_nodes(cell).iter().enumerate() {
            res[n] += r[a];
        }
    }
    for n in mesh.dirichlet_nodes() {
        res[n] = Vector3::zeros();
    }
    Ok(res)
}

/// Euclidean norm over all nodal entries.
pub fn residual_norm(res: &[Vector3<f64>]) -> f64 {
    res.iter().map(|v| v.norm_squared()).sum::<f64>().sqrt()
}

/// Tangent matrix on all `3·nodes` unknowns; Dirichlet rows and columns are
/// replaced by the identity.
pub fn assemble_tangent(field: &DeformationField, model: &dyn EnergyModel) -> Result<DMatrix<f64>> {
    let mesh = &field.mesh;
    let grads = quadrature_gradients(field);
    check_admissible(&grads)?;
    let w = mesh.qp_weight();
    let per_cell: Vec<Result<Box<[[f64; 24]; 24]>>> = grads
        .par_chunks(QP_PER_CELL)
        .map(|fs| {
            let mut ke = Box::new([[0.0; 24]; 24]);
            for (q, f) in fs.iter().enumerate() {
                let a9 = GradientTangent::new(model, f)?.matrix9();
                let g = mesh.shape_gradients(q);
                for a in 0..8 {
                    for b in 0..8 {
                        for i in 0..3 {
                            for k in 0..3 {
                                let mut s = 0.0;
                                for j in 0..3 {
                                    for l in 0..3 {
                                        s += a9[(3 * i + j, 3 * k + l)] * g[a][j] * g[b][l];
                                    }
                                }
                                ke[3 * a + i][3 * b + k] += s * w;
                            }
                        }
                    }
                }
            }
            Ok(ke)
        })
        .collect();
    let n = 3 * mesh.node_count();
    let mut k = DMatrix::zeros(n, n);
    for (cell, ke) in per_cell.into_iter().enumerate() {
        let ke = ke?;
        let nodes = mesh.cell_nodes(cell);
        for a in 0..8 {
            for b in 0..8 {
                for i in 0..3 {
                    for j in 0..3 {
                        k[(3 * nodes[a] + i, 3 * nodes[b] + j)] += ke[3 * a + i][3 * b + j];
                    }
                }
            }
        }
    }
    for node in mesh.dirichlet_nodes() {
        for i in 0..3 {
            let d = 3 * node + i;
            k.row_mut(d).fill(0.0);
            k.column_mut(d).fill(0.0);
            k[(d, d)] = 1.0;
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::models::{NegLogDet, Prop2Quadratic, SaintVenantKirchhoff};
    use crate::tensor::rng_for;
    use crate::variational::mesh::{Face, HexMesh};
    use rand::Rng;

    fn random_field(mesh: Arc<HexMesh>, seed: u64, amp: f64) -> DeformationField {
        let mut rng = rng_for(seed, 0);
        let base = DeformationField::identity(mesh);
        let u: Vec<_> = (0..base.values.len())
            .map(|_| Vector3::from_fn(|_, _| rng.random_range(-amp..amp)))
            .collect();
        base.perturbed(&u, 1.0)
    }

    #[test]
    fn affine_energy_examples() {
        let mesh = Arc::new(HexMesh::unit_cube(3).unwrap());
        let f0 = Mat3::from_diagonal(&Vector3::new(2.0, 1.0, 1.0));
        let field = DeformationField::affine(mesh, &f0, &Vector3::zeros());
        let e = assemble_energy(&field, &SaintVenantKirchhoff::new(1.0, 0.0)).unwrap();
        assert!((e - 2.25).abs() < 1e-13);
        let e4 = assemble_energy(
            &DeformationField::affine(
                Arc::new(HexMesh::unit_cube(4).unwrap()),
                &f0,
                &Vector3::zeros(),
            ),
            &SaintVenantKirchhoff::new(1.0, 0.0),
        )
        .unwrap();
        let e8 = assemble_energy(
            &DeformationField::affine(
                Arc::new(HexMesh::unit_cube(8).unwrap()),
                &f0,
                &Vector3::zeros(),
            ),
            &SaintVenantKirchhoff::new(1.0, 0.0),
        )
        .unwrap();
        assert!((e4 - e8).abs() < 1e-12);
    }

    #[test]
    fn identity_energy_is_volume_times_reference_value() {
        let mesh = Arc::new(
            HexMesh::new([2, 2, 3], Vector3::zeros(), Vector3::new(1.0, 2.0, 3.0)).unwrap(),
        );
        let model = Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap();
        let field = DeformationField::identity(mesh);
        let e = assemble_energy(&field, &model).unwrap();
        assert!((e - 6.0 * 1.5).abs() < 1e-12);
        assert!(residual_norm(&assemble_residual(&field, &model).unwrap()) < 1e-13);
    }

    #[test]
    fn affine_residual_vanishes_in_interior() {
        let mesh = Arc::new(HexMesh::unit_cube(3).unwrap());
        let f0 = Mat3::new(1.2, 0.1, 0.0, 0.0, 1.1, 0.05, 0.0, 0.0, 1.05);
        let field = DeformationField::affine(mesh, &f0, &Vector3::new(0.3, 0.0, 0.0));
        let r = assemble_residual(&field, &Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap()).unwrap();
        assert!(residual_norm(&r) < 1e-12);
    }

    #[test]
    fn residual_is_energy_gradient() {
        let mesh = Arc::new(
            HexMesh::unit_cube(2)
                .unwrap()
                .with_dirichlet_faces(&[Face::XMin]),
        );
        let models: Vec<Box<dyn EnergyModel>> = vec![
            Box::new(NegLogDet::new()),
            Box::new(Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap()),
            Box::new(SaintVenantKirchhoff::new(1.0, 0.5)),
        ];
        for (s, model) in models.iter().enumerate() {
            let field = random_field(mesh.clone(), s as u64, 0.05);
            let r = assemble_residual(&field, model.as_ref()).unwrap();
            let dofs = field.to_dofs();
            let h = 1e-6 * (1.0 + dofs.norm());
            for n in mesh.free_nodes().take(6) {
                for i in 0..3 {
                    let mut u = vec![Vector3::zeros(); mesh.node_count()];
                    u[n][i] = 1.0;
                    let ep = assemble_energy(&field.perturbed(&u, h), model.as_ref()).unwrap();
                    let em = assemble_energy(&field.perturbed(&u, -h), model.as_ref()).unwrap();
                    let fd = (ep - em) / (2.0 * h);
                    assert!(
                        (fd - r[n][i]).abs() <= 1e-6 * (1.0 + r[n][i].abs()),
                        "{fd} vs {}",
                        r[n][i]
                    );
                }
            }
        }
    }

    #[test]
    fn tangent_is_residual_derivative() {
        let mesh = Arc::new(
            HexMesh::unit_cube(2)
                .unwrap()
                .with_dirichlet_faces(&[Face::ZMin]),
        );
        let model = Prop2Quadratic::new(1.0 / 12.0, 0.25).unwrap();
        let field = random_field(mesh.clone(), 9, 0.05);
        let k = assemble_tangent(&field, &model).unwrap();
        assert!((&k - k.transpose()).amax() < 1e-10);
        let h = 1e-6;
        for n in mesh.free_nodes().take(4) {
            for i in 0..3 {
                let mut u = vec![Vector3::zeros(); mesh.node_count()];
                u[n][i] = 1.0;
                let rp = assemble_residual(&field.perturbed(&u, h), &model).unwrap();
                let rm = assemble_residual(&field.perturbed(&u, -h), &model).unwrap();
                for m in mesh.free_nodes() {
                    for j in 0..3 {
                        let fd = (rp[m][j] - rm[m][j]) / (2.0 * h);
                        let an = k[(3 * m + j, 3 * n + i)];
                        assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn translation_invariance() {
        let mesh = Arc::new(HexMesh::unit_cube(2).unwrap());
        let model = NegLogDet::new();
        let field = random_field(mesh, 3, 0.05);
        let moved = field.translated(&Vector3::new(3.0, -1.0, 0.5));
        let (e0, e1) = (
            assemble_energy(&field, &model).unwrap(),
            assemble_energy(&moved, &model).unwrap(),
        );
        assert!((e0 - e1).abs() < 1e-13);
        let r0 = assemble_residual(&field, &model).unwrap();
        let r1 = assemble_residual(&moved, &model).unwrap();
        for (a, b) in r0.iter().zip(&r1) {
            assert!((a - b).amax() < 1e-13);
        }
    }

    #[test]
    fn inverted_cell_is_reported() {
        let mesh = Arc::new(HexMesh::unit_cube(2).unwrap());
        let f0 = Mat3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        let field = DeformationField::affine(mesh, &f0, &Vector3::zeros());
        match assemble_energy(&field, &NegLogDet::new()) {
            Err(Error::InadmissibleField {
                cell: 0,
                qp: 0,
                det,
            }) => assert!(det < 0.0),
            r => panic!("unexpected {r:?}"),
        }
    }
}
