//! The built-in worked example: a two-triangle square mesh, five scattered
//! observations, and the expected intermediate results (barycentric table,
//! merged bases, design matrix, fitted coefficients) that the `demo` command
//! and the acceptance suite assert against.

use crate::fitting::{DataRecord, Dataset};
use crate::geometry::{Point2, Triangulation};
use crate::polynomial::BarycentricPoly;
use crate::rational::{int, rat, Rat};

/// Unit square split along the diagonal (0,0)-(1,1): triangle 0 is
/// ((0,0),(1,0),(1,1)), triangle 1 is ((0,0),(1,1),(0,1)).
pub fn demo_mesh() -> Triangulation {
    Triangulation::new(
        vec![
            Point2::new(int(0), int(0)),
            Point2::new(int(1), int(0)),
            Point2::new(int(1), int(1)),
            Point2::new(int(0), int(1)),
        ],
        vec![[0, 1, 2], [0, 2, 3]],
    )
    .expect("built-in mesh is valid")
}

/// The five observations (x, y, z).
pub fn demo_dataset() -> Dataset {
    let rec = |xn: i64, yn: i64, z: f64| DataRecord {
        x: rat(xn, 10),
        y: rat(yn, 10),
        z,
    };
    Dataset {
        records: vec![
            rec(2, 1, 1.0),
            rec(2, 7, 3.0),
            rec(1, 3, 2.0),
            rec(5, 1, 1.0),
            rec(7, 8, 4.0),
        ],
    }
}

/// Expected (triangle, barycentric coordinates) for each observation.
pub fn expected_barycentric_rows() -> Vec<(usize, [Rat; 3])> {
    vec![
        (0, [rat(8, 10), rat(1, 10), rat(1, 10)]),
        (1, [rat(3, 10), rat(2, 10), rat(5, 10)]),
        (1, [rat(7, 10), rat(1, 10), rat(2, 10)]),
        (0, [rat(5, 10), rat(4, 10), rat(1, 10)]),
        (1, [rat(2, 10), rat(7, 10), rat(1, 10)]),
    ]
}

fn col(d: u32, t0: &str, t1: &str) -> [BarycentricPoly; 2] {
    [
        BarycentricPoly::parse(t0, d).unwrap(),
        BarycentricPoly::parse(t1, d).unwrap(),
    ]
}

/// The expected degree-2 zeroth-order merged basis columns (per-triangle
/// polynomial pairs), in the reference presentation order.
pub fn expected_c0_columns() -> Vec<[BarycentricPoly; 2]> {
    vec![
        col(2, "1 b3^2", "1 b2^2"),
        col(2, "1 b1 b3", "1 b1 b2"),
        col(2, "1 b1^2", "1 b1^2"),
        col(2, "1 b1 b2", "0"),
        col(2, "1 b2 b3", "0"),
        col(2, "1 b2^2", "0"),
        col(2, "0", "1 b3^2"),
        col(2, "0", "1 b1 b3"),
        col(2, "0", "1 b2 b3"),
    ]
}

/// The expected degree-2 first-order merged basis columns, in the reference
/// presentation order (the one the design-matrix golden uses).
pub fn expected_c1_columns() -> Vec<[BarycentricPoly; 2]> {
    vec![
        col(2, "1 b1 b2", "-1 b1 b3"),
        col(2, "1 b2 b3", "-1 b2 b3"),
        col(2, "1 b3^2", "1 b2^2 + 2 b2 b3"),
        col(2, "1 b1 b3", "1 b1 b2 + 1 b1 b3 + 1 b2 b3"),
        col(2, "1 b1^2", "1 b1^2 + 2 b1 b3"),
        col(2, "1 b2^2", "0"),
        col(2, "0", "1 b3^2"),
    ]
}

/// The expected 5 x 7 design matrix, exact.
pub fn expected_design_matrix() -> Vec<Vec<Rat>> {
    let r = |n: i64| rat(n, 100);
    vec![
        vec![r(8), r(1), r(1), r(8), r(64), r(1), r(0)],
        vec![r(-15), r(-10), r(24), r(31), r(39), r(0), r(25)],
        vec![r(-14), r(-2), r(5), r(23), r(77), r(0), r(4)],
        vec![r(20), r(4), r(1), r(5), r(25), r(16), r(0)],
        vec![r(-2), r(-7), r(63), r(23), r(8), r(0), r(1)],
    ]
}

/// Fitted coefficients frozen from an independent pseudo-inverse computation
/// on the exact design matrix, in the same column order.
pub fn expected_gamma() -> Vec<f64> {
    const DEN: i128 = 130_517_140_311;
    [
        -37_672_192_175i128,
        -10_052_439_775,
        607_019_503_150,
        554_760_266_500,
        122_746_878_050,
        462_242_177_925,
        77_454_809_275,
    ]
    .iter()
    .map(|&n| n as f64 / DEN as f64)
    .collect()
}

/// Matches `columns` (pairs of per-triangle polynomials over a two-triangle
/// mesh) against `expected`, returning for each expected column the index of
/// the equal constructed column. Fails if the match is not a bijection.
pub fn match_columns(
    columns: &[crate::continuity::BasisColumn],
    expected: &[[BarycentricPoly; 2]],
) -> Option<Vec<usize>> {
    if columns.len() != expected.len() {
        return None;
    }
    let mut used = vec![false; columns.len()];
    let mut perm = Vec::with_capacity(expected.len());
    for exp in expected {
        let found = columns.iter().enumerate().position(|(i, c)| {
            !used[i] && c.per_triangle.len() == 2 && c.per_triangle[0] == exp[0] && c.per_triangle[1] == exp[1]
        })?;
        used[found] = true;
        perm.push(found);
    }
    Some(perm)
}
