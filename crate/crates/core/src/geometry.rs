//! Planar triangulations in exact rational coordinates: barycentric and
//! Cartesian conversion, point location, and shared-edge bookkeeping.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{render_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }
}

/// A triangle as an ordered triple of vertex indices. The local order fixes
/// which vertex each barycentric coordinate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub vertex_ids: [usize; 3],
}

/// Exact barycentric coordinates, always summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricCoords {
    pub b: [Rat; 3],
}

impl BarycentricCoords {
    pub fn inside(&self) -> bool {
        self.b.iter().all(|c| !c.is_negative())
    }
}

/// One edge shared by two triangles, with the maps sending the common edge
/// parameters (q1, q2) to each triangle's local barycentric coordinates.
/// The parameter order is the global order of the shared vertex ids, so both
/// triangles agree on it without reference to local vertex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedEdge {
    pub tri_a: usize,
    pub tri_b: usize,
    /// Local index (0..3) of tri_a's vertex off the edge; its barycentric
    /// coordinate vanishes on the edge.
    pub off_edge_local_a: usize,
    pub off_edge_local_b: usize,
    /// Local indices that q1 and q2 map to in tri_a.
    pub q_locals_a: [usize; 2],
    pub q_locals_b: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    vertices: Vec<Point2>,
    triangles: Vec<Triangle>,
    shared_edges: Vec<SharedEdge>,
}

fn signed_area_twice(a: &Point2, b: &Point2, c: &Point2) -> Rat {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

impl Triangulation {
    pub fn new(vertices: Vec<Point2>, triangle_ids: Vec<[usize; 3]>) -> Result<Self> {
        let triangles: Vec<Triangle> = triangle_ids
            .into_iter()
            .map(|vertex_ids| Triangle { vertex_ids })
            .collect();
        for (t_idx, t) in triangles.iter().enumerate() {
            let [i, j, k] = t.vertex_ids;
            if i == j || j == k || i == k {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t_idx} repeats a vertex index"
                )));
            }
            for &v in &t.vertex_ids {
                if v >= vertices.len() {
                    return Err(Error::InvalidMesh(format!(
                        "triangle {t_idx} references missing vertex {v}"
                    )));
                }
            }
            if signed_area_twice(&vertices[i], &vertices[j], &vertices[k]).is_zero() {
                return Err(Error::DegenerateTriangle);
            }
        }
        let mesh = Self {
            vertices,
            shared_edges: Vec::new(),
            triangles,
        };
        for a in 0..mesh.triangles.len() {
            for b in a + 1..mesh.triangles.len() {
                let shared = mesh.triangles[a]
                    .vertex_ids
                    .iter()
                    .filter(|v| mesh.triangles[b].vertex_ids.contains(v))
                    .count();
                if shared == 3 {
                    return Err(Error::DuplicateTriangle(a, b));
                }
                if mesh.interiors_overlap(a, b) {
                    return Err(Error::OverlappingTriangles(a, b));
                }
            }
        }
        let shared_edges = mesh.compute_shared_edges()?;
        Ok(Self {
            shared_edges,
            ..mesh
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn shared_edges(&self) -> &[SharedEdge] {
        &self.shared_edges
    }

    pub fn triangle_vertices(&self, tri: usize) -> [&Point2; 3] {
        let t = &self.triangles[tri];
        [
            &self.vertices[t.vertex_ids[0]],
            &self.vertices[t.vertex_ids[1]],
            &self.vertices[t.vertex_ids[2]],
        ]
    }

    /// Affine coordinates (a1, a2, a3) of an arbitrary plane point relative to
    /// a triangle: they sum to one and a1 v1 + a2 v2 + a3 v3 recovers the
    /// point. Coordinates may be negative outside the triangle.
    pub fn point_to_affine_coords(&self, tri: usize, u: &Point2) -> Result<[Rat; 3]> {
        let [v1, v2, v3] = self.triangle_vertices(tri);
        // 2x2 system from the affine chart with origin v3
        let m11 = &v1.x - &v3.x;
        let m12 = &v2.x - &v3.x;
        let m21 = &v1.y - &v3.y;
        let m22 = &v2.y - &v3.y;
        let det = &m11 * &m22 - &m12 * &m21;
        if det.is_zero() {
            return Err(Error::DegenerateTriangle);
        }
        let rx = &u.x - &v3.x;
        let ry = &u.y - &v3.y;
        let a1 = (&m22 * &rx - &m12 * &ry) / &det;
        let a2 = (&m11 * &ry - &m21 * &rx) / &det;
        let a3 = Rat::one() - &a1 - &a2;
        Ok([a1, a2, a3])
    }

    pub fn cartesian_to_barycentric(&self, tri: usize, p: &Point2) -> Result<BarycentricCoords> {
        let b = self.point_to_affine_coords(tri, p)?;
        Ok(BarycentricCoords { b })
    }

    pub fn barycentric_to_cartesian(&self, tri: usize, b: &BarycentricCoords) -> Point2 {
        let [v1, v2, v3] = self.triangle_vertices(tri);
        Point2 {
            x: &b.b[0] * &v1.x + &b.b[1] * &v2.x + &b.b[2] * &v3.x,
            y: &b.b[0] * &v1.y + &b.b[1] * &v2.y + &b.b[2] * &v3.y,
        }
    }

    /// Lowest-index triangle whose closed region contains the point.
    pub fn locate_point(&self, p: &Point2) -> Result<(usize, BarycentricCoords)> {
        for tri in 0..self.triangles.len() {
            let b = self.cartesian_to_barycentric(tri, p)?;
            if b.inside() {
                return Ok((tri, b));
            }
        }
        Err(Error::PointOutsideMesh {
            x: render_rat(&p.x),
            y: render_rat(&p.y),
        })
    }

    /// Cartesian point of tri_a's off-edge vertex; by non-degeneracy it never
    /// lies on the edge line.
    pub fn default_transversal_point(&self, e: &SharedEdge) -> Point2 {
        let t = &self.triangles[e.tri_a];
        self.vertices[t.vertex_ids[e.off_edge_local_a]].clone()
    }

    /// Validates a caller-supplied transversal point: it must not lie on the
    /// line through the shared edge.
    pub fn validate_transversal(&self, e: &SharedEdge, u: &Point2) -> Result<()> {
        let t = &self.triangles[e.tri_a];
        let p = &self.vertices[t.vertex_ids[e.q_locals_a[0]]];
        let q = &self.vertices[t.vertex_ids[e.q_locals_a[1]]];
        if signed_area_twice(p, q, u).is_zero() {
            return Err(Error::TransversalOnEdge);
        }
        Ok(())
    }

    /// The two endpoints of a shared edge, in q-parameter order.
    pub fn edge_endpoints(&self, e: &SharedEdge) -> (Point2, Point2) {
        let t = &self.triangles[e.tri_a];
        (
            self.vertices[t.vertex_ids[e.q_locals_a[0]]].clone(),
            self.vertices[t.vertex_ids[e.q_locals_a[1]]].clone(),
        )
    }

    fn compute_shared_edges(&self) -> Result<Vec<SharedEdge>> {
        let mut edges = Vec::new();
        for a in 0..self.triangles.len() {
            for b in a + 1..self.triangles.len() {
                let ids_a = self.triangles[a].vertex_ids;
                let ids_b = self.triangles[b].vertex_ids;
                let shared: Vec<usize> = ids_a
                    .iter()
                    .copied()
                    .filter(|v| ids_b.contains(v))
                    .collect();
                match shared.len() {
                    0 | 1 => continue,
                    2 => {
                        // global order of the shared vertex ids fixes q1, q2
                        let mut sv = [shared[0], shared[1]];
                        sv.sort_unstable();
                        let local = |ids: [usize; 3], v: usize| {
                            ids.iter().position(|&x| x == v).unwrap()
                        };
                        let q_locals_a = [local(ids_a, sv[0]), local(ids_a, sv[1])];
                        let q_locals_b = [local(ids_b, sv[0]), local(ids_b, sv[1])];
                        let off_a = (0..3)
                            .find(|i| !q_locals_a.contains(i))
                            .unwrap();
                        let off_b = (0..3)
                            .find(|i| !q_locals_b.contains(i))
                            .unwrap();
                        edges.push(SharedEdge {
                            tri_a: a,
                            tri_b: b,
                            off_edge_local_a: off_a,
                            off_edge_local_b: off_b,
                            q_locals_a,
                            q_locals_b,
                        });
                    }
                    _ => return Err(Error::DuplicateTriangle(a, b)),
                }
            }
        }
        Ok(edges)
    }

    /// Exact separating-axis test on the two closed triangles: interiors
    /// overlap iff no edge direction of either triangle separates them
    /// (touching along an edge or at a vertex is allowed).
    fn interiors_overlap(&self, a: usize, b: usize) -> bool {
        let va = self.triangle_vertices(a);
        let vb = self.triangle_vertices(b);
        !has_separating_axis(&va, &vb) && !has_separating_axis(&vb, &va)
    }
}

fn has_separating_axis(from: &[&Point2; 3], other: &[&Point2; 3]) -> bool {
    for i in 0..3 {
        let p = from[i];
        let q = from[(i + 1) % 3];
        let r = from[(i + 2) % 3];
        let side_r = signed_area_twice(p, q, r);
        // the edge (p, q) separates if every vertex of the other triangle is
        // on the opposite side of r (or on the line)
        let separated = other.iter().all(|v| {
            let s = signed_area_twice(p, q, v);
            s.is_zero() || (s.is_positive() != side_r.is_positive())
        });
        if separated {
            return true;
        }
    }
    false
}
