//! Scattered-data least squares on a spline basis: exact design matrix,
//! minimum-norm solve, and prediction.

use num::Zero;

use crate::continuity::SplineBasis;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::linalg::RationalMatrix;
use crate::rational::{rat_from_f64, rat_to_f64, Rat};

/// One observation: exact coordinates, floating measurement.
#[derive(Debug, Clone)]
pub struct DataRecord {
    pub x: Rat,
    pub y: Rat,
    pub z: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub records: Vec<DataRecord>,
}

/// Exact design matrix: row i is the basis row of the triangle containing
/// record i, evaluated at its barycentric coordinates.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    entries: RationalMatrix,
    triangle_of_row: Vec<usize>,
}

impl DesignMatrix {
    pub fn entries(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn triangle_of_row(&self) -> &[usize] {
        &self.triangle_of_row
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.entries.rows())
            .map(|i| {
                (0..self.entries.cols())
                    .map(|j| rat_to_f64(&self.entries[(i, j)]))
                    .collect()
            })
            .collect()
    }
}

/// A fitted model: coefficients plus solve diagnostics.
#[derive(Debug, Clone)]
pub struct FitModel {
    pub gamma: Vec<f64>,
    pub rank: usize,
    pub residual: f64,
}

pub fn assemble_design(basis: &SplineBasis, data: &Dataset) -> Result<DesignMatrix> {
    let mesh = basis.mesh();
    let mut rows = Vec::with_capacity(data.records.len());
    let mut triangle_of_row = Vec::with_capacity(data.records.len());
    for (index, rec) in data.records.iter().enumerate() {
        let p = Point2::new(rec.x.clone(), rec.y.clone());
        let (tri, b) = mesh
            .locate_point(&p)
            .map_err(|_| Error::RecordOutsideMesh { index })?;
        triangle_of_row.push(tri);
        rows.push(
            basis
                .columns()
                .iter()
                .map(|col| col.per_triangle[tri].evaluate(&b.b))
                .collect::<Vec<Rat>>(),
        );
    }
    let entries = if rows.is_empty() {
        RationalMatrix::zeros(0, basis.columns().len())
    } else {
        RationalMatrix::from_rows(rows)
    };
    Ok(DesignMatrix {
        entries,
        triangle_of_row,
    })
}

/// Minimum-norm least-squares fit, computed exactly: solve the normal
/// equations by row reduction, then project the particular solution onto the
/// orthogonal complement of the design matrix's kernel. With an invertible
/// normal matrix this reduces to the textbook normal-equations solution.
/// `ridge` adds an optional Tikhonov term to the normal matrix.
pub fn fit(design: &DesignMatrix, z: &[f64], ridge: f64) -> Result<FitModel> {
    let b = &design.entries;
    if b.rows() != z.len() {
        return Err(Error::DimensionMismatch(b.rows(), b.cols(), z.len(), 1));
    }
    let m = b.cols();
    let z_exact: Vec<Rat> = z.iter().map(|&v| rat_from_f64(v)).collect::<Result<_>>()?;
    let bt = b.transpose();
    let mut normal = bt.multiply(b)?;
    if ridge != 0.0 {
        let lambda = rat_from_f64(ridge)?;
        for i in 0..m {
            let v = normal[(i, i)].clone() + &lambda;
            normal[(i, i)] = v;
        }
    }
    let rhs = bt.mul_vec(&z_exact)?;
    let rhs_col = RationalMatrix::from_fn(m, 1, |i, _| rhs[i].clone());
    let (reduced, pivots) = normal.hstack(&rhs_col)?.rref();
    if pivots.contains(&m) {
        // cannot happen: the normal equations are always consistent
        return Err(Error::DimensionMismatch(m, m, m, 1));
    }
    let mut gamma = vec![Rat::zero(); m];
    for (row, &col) in pivots.iter().enumerate() {
        gamma[col] = reduced[(row, m)].clone();
    }
    if ridge == 0.0 {
        // project onto the row space: subtract the kernel component
        let kernel = b.nullspace();
        if !kernel.is_empty() {
            let k = kernel.len();
            let n = RationalMatrix::from_fn(m, k, |i, j| kernel[j][i].clone());
            let nt = n.transpose();
            let gram = nt.multiply(&n)?;
            let proj_rhs = nt.mul_vec(&gamma)?;
            let proj_col = RationalMatrix::from_fn(k, 1, |i, _| proj_rhs[i].clone());
            let (red, piv) = gram.hstack(&proj_col)?.rref();
            debug_assert_eq!(piv.len(), k, "kernel basis must be independent");
            let mut c = vec![Rat::zero(); k];
            for (row, &col) in piv.iter().enumerate() {
                c[col] = red[(row, k)].clone();
            }
            for j in 0..k {
                if !c[j].is_zero() {
                    for i in 0..m {
                        let v = gamma[i].clone() - &kernel[j][i] * &c[j];
                        gamma[i] = v;
                    }
                }
            }
        }
    }
    let fitted = b.mul_vec(&gamma)?;
    let mut res_sq = Rat::zero();
    for (f, zi) in fitted.iter().zip(&z_exact) {
        let d = f - zi;
        res_sq += &d * &d;
    }
    Ok(FitModel {
        gamma: gamma.iter().map(rat_to_f64).collect(),
        rank: b.rank(),
        residual: rat_to_f64(&res_sq).sqrt(),
    })
}

/// Evaluates the fitted spline at a point: locate, build the basis row for
/// the containing triangle, take the inner product with the coefficients.
pub fn predict(basis: &SplineBasis, gamma: &[f64], p: &Point2) -> Result<f64> {
    let (tri, b) = basis.mesh().locate_point(p)?;
    Ok(basis
        .columns()
        .iter()
        .zip(gamma)
        .map(|(col, g)| rat_to_f64(&col.per_triangle[tri].evaluate(&b.b)) * g)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuity::{BasisColumn, SplineBasis};
    use crate::demo::{demo_dataset, demo_mesh, expected_c1_columns, match_columns};
    use crate::rational::{int, rat};
    use std::collections::HashMap;
    use std::sync::Arc;

    fn reference_basis() -> SplineBasis {
        // the worked-example C1 basis in its reference column order
        let mesh = Arc::new(demo_mesh());
        let built =
            SplineBasis::enforce_continuity(Arc::clone(&mesh), 2, 1, &HashMap::new()).unwrap();
        let perm = match_columns(built.columns(), &expected_c1_columns()).unwrap();
        let columns: Vec<BasisColumn> =
            perm.iter().map(|&i| built.columns()[i].clone()).collect();
        SplineBasis::from_parts(mesh, 2, 1, columns)
    }

    #[test]
    fn design_matrix_matches_reference() {
        let basis = reference_basis();
        let design = assemble_design(&basis, &demo_dataset()).unwrap();
        let expected = crate::demo::expected_design_matrix();
        for i in 0..5 {
            for j in 0..7 {
                assert_eq!(design.entries()[(i, j)], expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn empty_dataset_gives_empty_design() {
        let basis = reference_basis();
        let design = assemble_design(&basis, &Dataset::default()).unwrap();
        assert_eq!(design.entries().rows(), 0);
        assert_eq!(design.entries().cols(), 7);
    }

    #[test]
    fn out_of_mesh_record_reports_index() {
        let basis = reference_basis();
        let mut data = demo_dataset();
        data.records[3].x = int(5);
        data.records[3].y = int(5);
        let err = assemble_design(&basis, &data).unwrap_err();
        assert_eq!(err, Error::RecordOutsideMesh { index: 3 });
    }

    #[test]
    fn identity_design_returns_observations() {
        let design = DesignMatrix {
            entries: RationalMatrix::identity(3),
            triangle_of_row: vec![0, 0, 0],
        };
        let model = fit(&design, &[2.0, -1.0, 0.5], 0.0).unwrap();
        assert_eq!(model.gamma, vec![2.0, -1.0, 0.5]);
        assert_eq!(model.rank, 3);
        assert!(model.residual < 1e-15);
    }

    #[test]
    fn duplicated_column_splits_weight_equally() {
        let design = DesignMatrix {
            entries: RationalMatrix::from_rows(vec![
                vec![int(1), int(1), int(0)],
                vec![int(0), int(0), int(1)],
            ]),
            triangle_of_row: vec![0, 0],
        };
        let model = fit(&design, &[4.0, 3.0], 0.0).unwrap();
        assert!((model.gamma[0] - 2.0).abs() < 1e-12);
        assert!((model.gamma[1] - 2.0).abs() < 1e-12);
        assert!((model.gamma[2] - 3.0).abs() < 1e-12);
        assert!(model.residual < 1e-12);
        assert_eq!(model.rank, 2);
    }

    #[test]
    fn demo_fit_matches_frozen_oracle() {
        let basis = reference_basis();
        let data = demo_dataset();
        let design = assemble_design(&basis, &data).unwrap();
        let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
        let model = fit(&design, &z, 0.0).unwrap();
        assert_eq!(model.rank, 5);
        assert!(model.residual <= 1e-8, "residual {}", model.residual);
        let expected = crate::demo::expected_gamma();
        for (g, e) in model.gamma.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-9, "gamma {g} vs oracle {e}");
        }
        // training points reproduced
        for rec in &data.records {
            let zhat = predict(&basis, &model.gamma, &Point2::new(rec.x.clone(), rec.y.clone()))
                .unwrap();
            assert!((zhat - rec.z).abs() < 1e-6);
        }
    }

    #[test]
    fn normal_equations_consistency_and_min_norm() {
        let basis = reference_basis();
        let data = demo_dataset();
        let design = assemble_design(&basis, &data).unwrap();
        let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
        let model = fit(&design, &z, 0.0).unwrap();
        let b = design.to_f64_rows();
        // B^T (B gamma - z) ~ 0
        let fitted: Vec<f64> = b
            .iter()
            .map(|row| row.iter().zip(&model.gamma).map(|(a, g)| a * g).sum::<f64>())
            .collect();
        for j in 0..7 {
            let dot: f64 = b
                .iter()
                .zip(fitted.iter().zip(&z))
                .map(|(row, (f, zi))| row[j] * (f - zi))
                .sum();
            assert!(dot.abs() < 1e-9, "normal residual {dot}");
        }
        // gamma orthogonal to the exact kernel of B
        for v in design.entries().nullspace() {
            let dot: f64 = v
                .iter()
                .zip(&model.gamma)
                .map(|(vi, g)| rat_to_f64(vi) * g)
                .sum();
            assert!(dot.abs() < 1e-9, "kernel component {dot}");
        }
    }

    #[test]
    fn ridge_fit_is_finite_and_biased() {
        let basis = reference_basis();
        let data = demo_dataset();
        let design = assemble_design(&basis, &data).unwrap();
        let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
        let plain = fit(&design, &z, 0.0).unwrap();
        let ridged = fit(&design, &z, 0.5).unwrap();
        assert!(ridged.residual > plain.residual);
        let norm = |g: &[f64]| g.iter().map(|x| x * x).sum::<f64>();
        assert!(norm(&ridged.gamma) < norm(&plain.gamma));
    }

    #[test]
    fn zero_gamma_predicts_zero() {
        let basis = reference_basis();
        let zhat = predict(&basis, &vec![0.0; 7], &Point2::new(rat(1, 2), rat(1, 4))).unwrap();
        assert_eq!(zhat, 0.0);
    }

    #[test]
    fn edge_point_prediction_is_triangle_independent() {
        let basis = reference_basis();
        // a point on the shared diagonal
        let p = Point2::new(rat(1, 4), rat(1, 4));
        let mesh = basis.mesh();
        let (tri, b) = mesh.locate_point(&p).unwrap();
        assert_eq!(tri, 0);
        let row0: Vec<Rat> = basis
            .columns()
            .iter()
            .map(|c| c.per_triangle[0].evaluate(&b.b))
            .collect();
        let b1 = mesh.cartesian_to_barycentric(1, &p).unwrap();
        let row1: Vec<Rat> = basis
            .columns()
            .iter()
            .map(|c| c.per_triangle[1].evaluate(&b1.b))
            .collect();
        assert_eq!(row0, row1);
    }

    #[test]
    fn fit_dimension_mismatch() {
        let design = DesignMatrix {
            entries: RationalMatrix::identity(2),
            triangle_of_row: vec![0, 0],
        };
        assert!(fit(&design, &[1.0], 0.0).is_err());
    }
}
