//! Smoothness enforcement: initial block basis, per-edge constraint matrices
//! of edge-restricted directional derivatives, exact RREF-derived change of
//! basis, and column merging, iterated over orders and shared edges. Also the
//! independent continuity checker that verifies the result in Cartesian terms.

use std::collections::HashMap;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Point2, SharedEdge, Triangulation};
use crate::linalg::RationalMatrix;
use crate::polynomial::{monomials_of_degree, BarycentricPoly, EdgePoly, EdgeSide};
use crate::rational::{rat_to_f64, Rat};

/// One basis column: a polynomial per triangle (possibly the zero
/// polynomial), all of the same degree. Each column carries one free
/// coefficient of the spline space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisColumn {
    pub per_triangle: Vec<BarycentricPoly>,
}

impl BasisColumn {
    pub fn zero(n_triangles: usize, degree: u32) -> Self {
        Self {
            per_triangle: vec![BarycentricPoly::zero(degree); n_triangles],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            per_triangle: self
                .per_triangle
                .iter()
                .zip(&other.per_triangle)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        Self {
            per_triangle: self.per_triangle.iter().map(|p| p.scale(factor)).collect(),
        }
    }
}

/// A piecewise-polynomial basis over a triangulation. `continuity_order` is
/// the highest derivative order already enforced across every shared edge
/// (-1 for the unconstrained block basis).
#[derive(Debug, Clone)]
pub struct SplineBasis {
    mesh: Arc<Triangulation>,
    degree: u32,
    continuity_order: i32,
    columns: Vec<BasisColumn>,
}

/// Per-edge constraint matrix at one derivative order: row 1 holds the
/// edge-restricted derivatives of each column's polynomial on side a, row 2
/// the same on side b.
#[derive(Debug, Clone)]
pub struct ConstraintMatrix {
    pub order: u32,
    pub side_a: Vec<EdgePoly>,
    pub side_b: Vec<EdgePoly>,
}

#[derive(Debug, Clone)]
pub struct EdgeReport {
    pub edge_index: usize,
    pub max_discrepancy: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub order: u32,
    pub edges: Vec<EdgeReport>,
}

impl ContinuityReport {
    pub fn pass(&self) -> bool {
        self.edges.iter().all(|e| e.pass)
    }
}

/// Exact comparison, or floating comparison within a tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckMode {
    Exact,
    Float { tolerance: f64 },
}

/// Diagnostics collected while enforcing continuity: the column count after
/// each completed order (index 0 is the unconstrained count) and the rank of
/// every per-edge constraint matrix in processing order.
#[derive(Debug, Clone, Default)]
pub struct ConstructionLog {
    pub column_counts: Vec<usize>,
    pub edge_ranks: Vec<EdgeRank>,
}

#[derive(Debug, Clone)]
pub struct EdgeRank {
    pub order: u32,
    pub edge_index: usize,
    pub rank: usize,
}

impl SplineBasis {
    /// Block-diagonal basis: one column per (triangle, degree-d monomial)
    /// pair, nonzero on that triangle only, in triangle-major order with
    /// monomials in canonical order.
    pub fn initial(mesh: Arc<Triangulation>, degree: u32) -> Self {
        assert!(degree >= 1, "degree must be at least 1");
        let n = mesh.triangles().len();
        let mut columns = Vec::new();
        for tri in 0..n {
            for idx in monomials_of_degree(degree) {
                let mut col = BasisColumn::zero(n, degree);
                col.per_triangle[tri] = BarycentricPoly::monomial(degree, idx, Rat::one());
                columns.push(col);
            }
        }
        Self {
            mesh,
            degree,
            continuity_order: -1,
            columns,
        }
    }

    pub fn mesh(&self) -> &Arc<Triangulation> {
        &self.mesh
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn continuity_order(&self) -> i32 {
        self.continuity_order
    }

    pub fn columns(&self) -> &[BasisColumn] {
        &self.columns
    }

    /// Assembles a basis from already-built columns (used by file loading).
    pub fn from_parts(
        mesh: Arc<Triangulation>,
        degree: u32,
        continuity_order: i32,
        columns: Vec<BasisColumn>,
    ) -> Self {
        Self {
            mesh,
            degree,
            continuity_order,
            columns,
        }
    }

    /// The exact coefficient matrix with one row per (triangle, monomial)
    /// slot and one column per basis column. Its rank equaling the column
    /// count is the linear-independence invariant.
    pub fn coefficient_matrix(&self) -> RationalMatrix {
        let monos = monomials_of_degree(self.degree);
        let n_tri = self.mesh.triangles().len();
        RationalMatrix::from_fn(n_tri * monos.len(), self.columns.len(), |i, j| {
            let tri = i / monos.len();
            let idx = &monos[i % monos.len()];
            self.columns[j].per_triangle[tri].coeff(idx)
        })
    }

    /// Row 1 / row 2 of the constraint matrix for one edge at order r, with
    /// the transversal point u expressed in each triangle's affine
    /// coordinates. For r = 0 the direction is irrelevant.
    pub fn constraint_matrix(
        &self,
        e: &SharedEdge,
        r: u32,
        u: &Point2,
    ) -> Result<ConstraintMatrix> {
        let a = self.mesh.point_to_affine_coords(e.tri_a, u)?;
        let b = self.mesh.point_to_affine_coords(e.tri_b, u)?;
        let mut side_a = Vec::with_capacity(self.columns.len());
        let mut side_b = Vec::with_capacity(self.columns.len());
        for col in &self.columns {
            side_a.push(
                col.per_triangle[e.tri_a]
                    .directional_derivative(&a, r)
                    .restrict_to_edge(EdgeSide::A, e),
            );
            side_b.push(
                col.per_triangle[e.tri_b]
                    .directional_derivative(&b, r)
                    .restrict_to_edge(EdgeSide::B, e),
            );
        }
        Ok(ConstraintMatrix { order: r, side_a, side_b })
    }

    /// Enforces continuity order by order (all edges at order 0, then all
    /// edges at order 1, ...), merging columns after each edge. Optional
    /// per-edge transversal override points replace the default off-edge
    /// vertex of the edge's first triangle.
    pub fn enforce_continuity(
        mesh: Arc<Triangulation>,
        degree: u32,
        r_target: u32,
        transversal_overrides: &HashMap<usize, Point2>,
    ) -> Result<Self> {
        Self::enforce_continuity_logged(mesh, degree, r_target, transversal_overrides)
            .map(|(basis, _)| basis)
    }

    /// Same as `enforce_continuity`, also returning per-stage diagnostics.
    pub fn enforce_continuity_logged(
        mesh: Arc<Triangulation>,
        degree: u32,
        r_target: u32,
        transversal_overrides: &HashMap<usize, Point2>,
    ) -> Result<(Self, ConstructionLog)> {
        if r_target > degree {
            return Err(Error::OrderExceedsDegree {
                r: r_target,
                d: degree,
            });
        }
        let mut basis = Self::initial(Arc::clone(&mesh), degree);
        let mut log = ConstructionLog {
            column_counts: vec![basis.columns.len()],
            edge_ranks: Vec::new(),
        };
        for r in 0..=r_target {
            let edges = mesh.shared_edges().to_vec();
            for (edge_index, e) in edges.iter().enumerate() {
                let u = match transversal_overrides.get(&edge_index) {
                    Some(p) => {
                        mesh.validate_transversal(e, p)?;
                        p.clone()
                    }
                    None => mesh.default_transversal_point(e),
                };
                let rank = basis.enforce_on_edge(e, r, &u)?;
                log.edge_ranks.push(EdgeRank {
                    order: r,
                    edge_index,
                    rank,
                });
            }
            basis.continuity_order = r as i32;
            log.column_counts.push(basis.columns.len());
        }
        let report = basis.check_continuity(r_target, 4, CheckMode::Exact)?;
        if !report.pass() {
            return Err(Error::ContinuityPostCheckFailed { order: r_target });
        }
        Ok((basis, log))
    }

    fn enforce_on_edge(&mut self, e: &SharedEdge, r: u32, u: &Point2) -> Result<usize> {
        let q = self.constraint_matrix(e, r, u)?;
        let (active, inactive) = split_columns(&q);
        if active.is_empty() {
            return Ok(0);
        }
        let q_active = ConstraintMatrix {
            order: r,
            side_a: active.iter().map(|&i| q.side_a[i].clone()).collect(),
            side_b: active.iter().map(|&i| q.side_b[i].clone()).collect(),
        };
        let change = build_change_of_basis(&q_active, self.degree)?;
        let active_cols: Vec<BasisColumn> =
            active.iter().map(|&i| self.columns[i].clone()).collect();
        let transformed = apply_change_of_basis(&active_cols, &change);
        let canonical = apply_to_constraints(&q_active, &change)?;
        let merged = merge_columns(&transformed, &canonical)?;
        let mut new_columns = merged;
        for &i in &inactive {
            new_columns.push(self.columns[i].clone());
        }
        self.columns = new_columns;
        Ok(change.rank)
    }

    /// Verifies, independently of how the basis was built, that every column
    /// has matching Cartesian partial derivatives up to total order r across
    /// every shared edge, at `samples` interior points of each edge.
    pub fn check_continuity(
        &self,
        r: u32,
        samples: usize,
        mode: CheckMode,
    ) -> Result<ContinuityReport> {
        assert!(samples >= 2, "need at least 2 edge samples");
        let mut edges = Vec::new();
        for (edge_index, e) in self.mesh.shared_edges().iter().enumerate() {
            let (p0, p1) = self.mesh.edge_endpoints(e);
            let mut max_disc = 0f64;
            let mut pass = true;
            for s in 1..=samples {
                let t = Rat::new((s as i64).into(), (samples as i64 + 1).into());
                let p = Point2::new(
                    &p0.x + &t * (&p1.x - &p0.x),
                    &p0.y + &t * (&p1.y - &p0.y),
                );
                for col in &self.columns {
                    for rx in 0..=r {
                        for ry in 0..=r - rx {
                            let da = col.per_triangle[e.tri_a]
                                .evaluate_cartesian_derivative(&self.mesh, e.tri_a, &p, (rx, ry))?;
                            let db = col.per_triangle[e.tri_b]
                                .evaluate_cartesian_derivative(&self.mesh, e.tri_b, &p, (rx, ry))?;
                            let diff = (&da - &db).abs();
                            let disc = rat_to_f64(&diff);
                            max_disc = max_disc.max(disc);
                            let ok = match mode {
                                CheckMode::Exact => diff.is_zero(),
                                CheckMode::Float { tolerance } => disc <= tolerance,
                            };
                            pass &= ok;
                        }
                    }
                }
            }
            edges.push(EdgeReport {
                edge_index,
                max_discrepancy: max_disc,
                pass,
            });
        }
        Ok(ContinuityReport { order: r, edges })
    }
}

/// Active columns take part in the constraint (some row nonzero); inactive
/// columns have both rows zero and pass through the merge untouched.
pub fn split_columns(q: &ConstraintMatrix) -> (Vec<usize>, Vec<usize>) {
    let mut active = Vec::new();
    let mut inactive = Vec::new();
    for i in 0..q.side_a.len() {
        if q.side_a[i].is_zero() && q.side_b[i].is_zero() {
            inactive.push(i);
        } else {
            active.push(i);
        }
    }
    (active, inactive)
}

/// The change-of-basis matrix and the rank of the constraint expansion.
#[derive(Debug, Clone)]
pub struct ChangeOfBasis {
    /// m x m invertible matrix bringing the active constraint columns to
    /// canonical one-monomial-per-column form. The construction calls this a
    /// permutation matrix, but in general it is a full change of basis.
    pub matrix: RationalMatrix,
    pub rank: usize,
}

/// Builds the change-of-basis matrix for the active constraint columns:
/// transpose, expand each entry into its monomial coefficients (side-a block
/// then side-b block, monomials in descending q1 power), append an identity,
/// row reduce, and read the transposed matrix off the right-hand block.
pub fn build_change_of_basis(q_active: &ConstraintMatrix, degree: u32) -> Result<ChangeOfBasis> {
    let m = q_active.side_a.len();
    assert!(m >= 1, "no active columns");
    let edge_deg = degree - q_active.order;
    let nm = edge_deg as usize + 1;
    let expansion = RationalMatrix::from_fn(m, 2 * nm, |i, j| {
        let (poly, pos) = if j < nm {
            (&q_active.side_a[i], j)
        } else {
            (&q_active.side_b[i], j - nm)
        };
        poly.coeff(edge_deg - pos as u32)
    });
    let augmented = expansion.hstack(&RationalMatrix::identity(m))?;
    let (reduced, pivots) = augmented.rref();
    let rank = pivots.iter().filter(|&&c| c < 2 * nm).count();
    let p_t = reduced.columns(2 * nm..2 * nm + m);
    Ok(ChangeOfBasis {
        matrix: p_t.transpose(),
        rank,
    })
}

/// Applies the change of basis to a set of columns: output column j is the
/// combination of inputs with the weights of matrix column j.
pub fn apply_change_of_basis(cols: &[BasisColumn], change: &ChangeOfBasis) -> Vec<BasisColumn> {
    let m = cols.len();
    (0..m)
        .map(|j| {
            let mut acc = cols[0].scale(&change.matrix[(0, j)]);
            for (i, col) in cols.iter().enumerate().skip(1) {
                let w = &change.matrix[(i, j)];
                if !w.is_zero() {
                    acc = acc.add(&col.scale(w));
                }
            }
            acc
        })
        .collect()
}

/// The constraint matrix after the change of basis, verified to be in
/// canonical form: each nonzero column is a single unit-coefficient monomial
/// in a single row.
pub fn apply_to_constraints(
    q_active: &ConstraintMatrix,
    change: &ChangeOfBasis,
) -> Result<ConstraintMatrix> {
    let m = q_active.side_a.len();
    let edge_deg = q_active.side_a[0].degree();
    let combine = |row: &[EdgePoly], j: usize| {
        let mut acc = EdgePoly::zero(edge_deg);
        for (i, p) in row.iter().enumerate() {
            let w = &change.matrix[(i, j)];
            if w.is_zero() {
                continue;
            }
            for k1 in 0..=edge_deg {
                let c = p.coeff(k1);
                if !c.is_zero() {
                    acc.add_term((k1, edge_deg - k1), c * w);
                }
            }
        }
        acc
    };
    let side_a: Vec<EdgePoly> = (0..m).map(|j| combine(&q_active.side_a, j)).collect();
    let side_b: Vec<EdgePoly> = (0..m).map(|j| combine(&q_active.side_b, j)).collect();
    for j in 0..m {
        let (a, b) = (&side_a[j], &side_b[j]);
        let canonical = (a.is_zero() && b.is_zero())
            || (a.is_zero() && b.unit_monomial().is_some())
            || (b.is_zero() && a.unit_monomial().is_some());
        if !canonical {
            return Err(Error::NonCanonicalConstraint);
        }
    }
    Ok(ConstraintMatrix {
        order: q_active.order,
        side_a,
        side_b,
    })
}

/// Merges the transformed columns according to the canonical constraint
/// form: a monomial reachable from both rows pairs the two columns into
/// their sum, a monomial reachable from one row only deletes its column,
/// and zero columns survive untouched.
pub fn merge_columns(
    transformed: &[BasisColumn],
    canonical: &ConstraintMatrix,
) -> Result<Vec<BasisColumn>> {
    let m = transformed.len();
    let mut partner_a: HashMap<u32, usize> = HashMap::new();
    let mut partner_b: HashMap<u32, usize> = HashMap::new();
    for j in 0..m {
        if let Some(k1) = canonical.side_a[j].unit_monomial() {
            if partner_a.insert(k1, j).is_some() {
                return Err(Error::NonCanonicalConstraint);
            }
        } else if let Some(k1) = canonical.side_b[j].unit_monomial() {
            if partner_b.insert(k1, j).is_some() {
                return Err(Error::NonCanonicalConstraint);
            }
        }
    }
    let mut out = Vec::new();
    for j in 0..m {
        if let Some(k1) = canonical.side_a[j].unit_monomial() {
            match partner_b.get(&k1) {
                Some(&j2) if j2 < j => {} // already emitted with the partner
                Some(&j2) => out.push(transformed[j].add(&transformed[j2])),
                None => {} // one-sided constraint forces the coefficient to zero
            }
        } else if let Some(k1) = canonical.side_b[j].unit_monomial() {
            match partner_a.get(&k1) {
                Some(&j2) if j2 < j => {}
                Some(&j2) => out.push(transformed[j].add(&transformed[j2])),
                None => {}
            }
        } else {
            out.push(transformed[j].clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo::demo_mesh;
    use crate::polynomial::MultiIndex;
    use crate::rational::{int, rat};

    fn demo_basis(d: u32, r: u32) -> SplineBasis {
        SplineBasis::enforce_continuity(Arc::new(demo_mesh()), d, r, &HashMap::new()).unwrap()
    }

    #[test]
    fn initial_basis_column_counts() {
        let mesh = Arc::new(demo_mesh());
        let b = SplineBasis::initial(Arc::clone(&mesh), 2);
        assert_eq!(b.columns().len(), 12);
        assert_eq!(b.continuity_order(), -1);
        // each column lives on exactly one triangle
        for (i, col) in b.columns().iter().enumerate() {
            let tri = i / 6;
            for t in 0..2 {
                assert_eq!(col.per_triangle[t].is_zero(), t != tri);
            }
        }
        let single = single_triangle_mesh();
        let b1 = SplineBasis::initial(Arc::new(single), 1);
        assert_eq!(b1.columns().len(), 3);
    }

    fn single_triangle_mesh() -> Triangulation {
        Triangulation::new(
            vec![
                Point2::new(int(0), int(0)),
                Point2::new(int(1), int(0)),
                Point2::new(int(0), int(1)),
            ],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn zeroth_order_constraint_pattern() {
        let mesh = Arc::new(demo_mesh());
        let basis = SplineBasis::initial(Arc::clone(&mesh), 2);
        let e = &mesh.shared_edges()[0];
        let u = mesh.default_transversal_point(e);
        let q = basis.constraint_matrix(e, 0, &u).unwrap();
        // active: the b2-free monomials of the first triangle and the b3-free
        // ones of the second; everything else is a zero column
        let (active, inactive) = split_columns(&q);
        assert_eq!(active.len(), 6);
        assert_eq!(inactive.len(), 6);
        for &i in &active {
            let entry = if i < 6 { &q.side_a[i] } else { &q.side_b[i] };
            assert!(entry.unit_monomial().is_some());
        }
    }

    #[test]
    fn beyond_degree_all_zero() {
        let mesh = Arc::new(demo_mesh());
        let basis = SplineBasis::initial(Arc::clone(&mesh), 2);
        let e = &mesh.shared_edges()[0];
        let u = mesh.default_transversal_point(e);
        let q = basis.constraint_matrix(e, 3, &u).unwrap();
        let (active, inactive) = split_columns(&q);
        assert!(active.is_empty());
        assert_eq!(inactive.len(), 12);
    }

    #[test]
    fn merged_column_counts_demo() {
        assert_eq!(demo_basis(2, 0).columns().len(), 9);
        assert_eq!(demo_basis(2, 1).columns().len(), 7);
        assert_eq!(demo_basis(2, 2).columns().len(), 6);
    }

    #[test]
    fn already_canonical_gives_identity_change() {
        // a constraint matrix already in canonical form
        let q = ConstraintMatrix {
            order: 0,
            side_a: vec![EdgePoly::monomial(2, 2, int(1)), EdgePoly::zero(2)],
            side_b: vec![EdgePoly::zero(2), EdgePoly::monomial(2, 1, int(1))],
        };
        let change = build_change_of_basis(&q, 2).unwrap();
        assert_eq!(change.matrix, RationalMatrix::identity(2));
        assert_eq!(change.rank, 2);
    }

    #[test]
    fn random_constraint_reaches_canonical_form() {
        // random 2-row constraint matrices over degree-1 edge polynomials with
        // the single-monomial-per-column structure the construction produces
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let m = rng.gen_range(2..6);
            let deg = 1u32;
            let mut side_a = Vec::new();
            let mut side_b = Vec::new();
            for _ in 0..m {
                let k1 = rng.gen_range(0..=deg);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let mut entry = EdgePoly::zero(deg);
                entry.add_term(
                    (k1, deg - k1),
                    rat(sign * rng.gen_range(1..=5), rng.gen_range(1..=3)),
                );
                if rng.gen_bool(0.5) {
                    side_a.push(entry);
                    side_b.push(EdgePoly::zero(deg));
                } else {
                    side_a.push(EdgePoly::zero(deg));
                    side_b.push(entry);
                }
            }
            let qa = ConstraintMatrix {
                order: 1,
                side_a,
                side_b,
            };
            let change = build_change_of_basis(&qa, 2).unwrap();
            // independent scan of each product column
            let canonical = apply_to_constraints(&qa, &change).unwrap();
            let nonzero = (0..m)
                .filter(|&j| !(canonical.side_a[j].is_zero() && canonical.side_b[j].is_zero()))
                .count();
            assert_eq!(nonzero, change.rank);
        }
    }

    #[test]
    fn unreducible_constraint_is_reported() {
        // a lone column whose entry mixes two monomials on one side cannot be
        // brought to single-monomial form; the pipeline refuses rather than
        // silently mis-merging
        let mut p = EdgePoly::zero(1);
        p.add_term((1, 0), int(1));
        p.add_term((0, 1), int(1));
        let q = ConstraintMatrix {
            order: 1,
            side_a: vec![p],
            side_b: vec![EdgePoly::zero(1)],
        };
        let change = build_change_of_basis(&q, 2).unwrap();
        assert_eq!(
            apply_to_constraints(&q, &change).unwrap_err(),
            Error::NonCanonicalConstraint
        );
    }

    #[test]
    fn first_order_constraint_matches_derivation() {
        // On the zeroth-order merged basis the first-order constraint matrix
        // has a (q1 + q2)-entry on the side-b row of the merged mixed column.
        let basis = demo_basis(2, 0);
        let mesh = basis.mesh();
        let e = &mesh.shared_edges()[0];
        let u = mesh.default_transversal_point(e);
        let q = basis.constraint_matrix(e, 1, &u).unwrap();
        let mut expected = EdgePoly::zero(1);
        expected.add_term((1, 0), int(1));
        expected.add_term((0, 1), int(1));
        let found = (0..q.side_a.len()).any(|j| q.side_b[j] == expected);
        assert!(found, "expected a q1 + q2 entry in the side-b row");
    }

    #[test]
    fn initial_basis_fails_continuity() {
        let mesh = Arc::new(demo_mesh());
        let basis = SplineBasis::initial(mesh, 2);
        let report = basis.check_continuity(0, 3, CheckMode::Exact).unwrap();
        assert!(!report.pass());
    }

    #[test]
    fn c0_basis_is_not_c1() {
        let basis = demo_basis(2, 0);
        assert!(basis.check_continuity(0, 3, CheckMode::Exact).unwrap().pass());
        assert!(!basis.check_continuity(1, 3, CheckMode::Exact).unwrap().pass());
    }

    #[test]
    fn c1_basis_passes_exact_check() {
        let basis = demo_basis(2, 1);
        let report = basis.check_continuity(1, 5, CheckMode::Exact).unwrap();
        assert!(report.pass());
        assert_eq!(report.edges[0].max_discrepancy, 0.0);
    }

    #[test]
    fn degree_one_two_triangles() {
        // d = 1, r = 0 on the demo mesh: 6 -> 4 columns, matching the kernel
        // dimension of the brute-force constraint system
        let mesh = Arc::new(demo_mesh());
        let basis =
            SplineBasis::enforce_continuity(Arc::clone(&mesh), 1, 0, &HashMap::new()).unwrap();
        assert_eq!(basis.columns().len(), 4);
        // brute force: equate edge restrictions of all 6 initial coefficients
        let initial = SplineBasis::initial(Arc::clone(&mesh), 1);
        let e = &mesh.shared_edges()[0];
        let u = mesh.default_transversal_point(e);
        let q = initial.constraint_matrix(e, 0, &u).unwrap();
        let rows = 2; // edge monomials of degree 1
        let sys = RationalMatrix::from_fn(rows, 6, |i, j| {
            let k1 = 1 - i as u32;
            q.side_a[j].coeff(k1) - q.side_b[j].coeff(k1)
        });
        assert_eq!(sys.nullspace().len(), 4);
    }

    #[test]
    fn columns_stay_linearly_independent() {
        for r in 0..=2 {
            let basis = demo_basis(2, r);
            let m = basis.coefficient_matrix();
            assert_eq!(m.rank(), basis.columns().len());
        }
    }

    #[test]
    fn order_exceeding_degree_rejected() {
        let mesh = Arc::new(demo_mesh());
        let err = SplineBasis::enforce_continuity(mesh, 2, 3, &HashMap::new()).unwrap_err();
        assert!(matches!(err, Error::OrderExceedsDegree { r: 3, d: 2 }));
    }

    #[test]
    fn c2_basis_spans_global_quadratics() {
        // at r = 2 every column must be one global quadratic expressed on both
        // triangles: check each column agrees with a single Cartesian
        // polynomial by sampling derivatives across the edge
        let basis = demo_basis(2, 2);
        assert_eq!(basis.columns().len(), 6);
        assert!(basis.check_continuity(2, 4, CheckMode::Exact).unwrap().pass());
    }

    #[test]
    fn float_mode_matches_exact_verdict() {
        let basis = demo_basis(2, 1);
        let exact = basis.check_continuity(1, 3, CheckMode::Exact).unwrap();
        let float = basis
            .check_continuity(1, 3, CheckMode::Float { tolerance: 1e-9 })
            .unwrap();
        assert_eq!(exact.pass(), float.pass());
    }

    #[test]
    fn transversal_override_accepted() {
        let mesh = Arc::new(demo_mesh());
        let mut overrides = HashMap::new();
        overrides.insert(0usize, Point2::new(int(0), int(1)));
        let basis = SplineBasis::enforce_continuity(Arc::clone(&mesh), 2, 1, &overrides).unwrap();
        assert_eq!(basis.columns().len(), 7);
        assert!(basis.check_continuity(1, 3, CheckMode::Exact).unwrap().pass());
        // a point on the edge line is rejected
        let mut bad = HashMap::new();
        bad.insert(0usize, Point2::new(rat(1, 2), rat(1, 2)));
        let err = SplineBasis::enforce_continuity(mesh, 2, 1, &bad).unwrap_err();
        assert_eq!(err, Error::TransversalOnEdge);
    }

    #[test]
    fn mixed_index_helpers() {
        let monos = monomials_of_degree(2);
        assert!(monos.contains(&MultiIndex([1, 1, 0])));
    }
}
