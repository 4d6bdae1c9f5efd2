//! Homogeneous barycentric polynomials with exact rational coefficients:
//! change of variable from Cartesian polynomials, directional derivatives,
//! restriction to a shared edge, and an exact Cartesian-derivative evaluator
//! used as the convention-independent continuity oracle.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Point2, SharedEdge, Triangulation};
use crate::rational::{render_rat, Rat};

/// Exponent triple (i, j, k) with i + j + k equal to the ambient degree.
/// Ordered by grade i + j, then lexicographically on (i, j); this is the
/// canonical monomial order used everywhere for serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiIndex(pub [u32; 3]);

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn key(&self) -> (u32, u32, u32) {
        (self.0[0] + self.0[1], self.0[0], self.0[1])
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// All degree-d multi-indices in canonical order.
pub fn monomials_of_degree(d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            out.push(MultiIndex([i, j, d - i - j]));
        }
    }
    out.sort();
    out
}

/// A homogeneous degree-d polynomial in the three barycentric variables.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarycentricPoly {
    degree: u32,
    coeffs: BTreeMap<MultiIndex, Rat>,
}

impl BarycentricPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: u32, idx: MultiIndex, coeff: Rat) -> Self {
        assert_eq!(idx.degree(), degree, "multi-index degree mismatch");
        let mut p = Self::zero(degree);
        p.add_term(idx, coeff);
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rat {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: Rat) {
        debug_assert_eq!(idx.degree(), self.degree);
        let entry = self.coeffs.entry(idx).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(*idx, c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(idx, c)| (*idx, c * factor))
                .collect(),
        }
    }

    pub fn evaluate(&self, b: &[Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (idx, c) in &self.coeffs {
            let mut term = c.clone();
            for (power, value) in idx.0.iter().zip(b) {
                for _ in 0..*power {
                    term *= value;
                }
            }
            acc += term;
        }
        acc
    }

    /// One application of the operator a^T grad. The direction entries are the
    /// affine coordinates of a transversal point (they sum to one), but any
    /// rational triple is accepted.
    fn directional_derivative_once(&self, a: &[Rat; 3]) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (idx, c) in &self.coeffs {
            for v in 0..3 {
                if idx.0[v] == 0 || a[v].is_zero() {
                    continue;
                }
                let mut e = idx.0;
                let factor = Rat::from_integer(e[v].into());
                e[v] -= 1;
                out.add_term(MultiIndex(e), c * &factor * &a[v]);
            }
        }
        out
    }

    /// The r-th order directional derivative. Orders past the degree give the
    /// zero polynomial (of degree zero), which is what the continuity loop
    /// needs.
    pub fn directional_derivative(&self, a: &[Rat; 3], r: u32) -> Self {
        if r > self.degree {
            return Self::zero(0);
        }
        let mut p = self.clone();
        for _ in 0..r {
            p = p.directional_derivative_once(a);
        }
        p
    }

    /// Substitutes the edge parameterization of `e` for the given side:
    /// the off-edge variable goes to zero and the two edge variables become
    /// q1 and q2 per the edge's q-maps.
    pub fn restrict_to_edge(&self, side: EdgeSide, e: &SharedEdge) -> EdgePoly {
        let (q_locals, off) = match side {
            EdgeSide::A => (e.q_locals_a, e.off_edge_local_a),
            EdgeSide::B => (e.q_locals_b, e.off_edge_local_b),
        };
        let mut out = EdgePoly::zero(self.degree);
        for (idx, c) in &self.coeffs {
            if idx.0[off] > 0 {
                continue;
            }
            out.add_term((idx.0[q_locals[0]], idx.0[q_locals[1]]), c.clone());
        }
        out
    }

    /// Exact partial derivative d^(rx+ry) / dx^rx dy^ry at a Cartesian point,
    /// through the chain rule of the affine map between (x, y) and the
    /// triangle's barycentric chart. Independent of any directional-derivative
    /// convention, which is what makes it a continuity oracle.
    pub fn evaluate_cartesian_derivative(
        &self,
        mesh: &Triangulation,
        tri: usize,
        p0: &Point2,
        order: (u32, u32),
    ) -> Result<Rat> {
        let (wx, wy) = barycentric_gradients(mesh, tri)?;
        let mut p = self.clone();
        for _ in 0..order.0 {
            p = p.directional_derivative_once(&wx);
        }
        for _ in 0..order.1 {
            p = p.directional_derivative_once(&wy);
        }
        let b = mesh.point_to_affine_coords(tri, p0)?;
        Ok(p.evaluate(&b))
    }

    /// Canonical text form, e.g. `1 b3^2 + 2 b2 b3`, terms in canonical
    /// monomial order, rationals as `p/q` or integers. The zero polynomial
    /// renders as `0`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (idx, c) in &self.coeffs {
            let mut term = render_rat(c);
            for v in 0..3 {
                match idx.0[v] {
                    0 => {}
                    1 => term.push_str(&format!(" b{}", v + 1)),
                    k => term.push_str(&format!(" b{}^{}", v + 1, k)),
                }
            }
            parts.push(term);
        }
        parts.join(" + ")
    }

    /// Parses the output of [`render`](Self::render) at a known degree.
    pub fn parse(s: &str, degree: u32) -> Result<Self> {
        let s = s.trim();
        let mut out = Self::zero(degree);
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let mut tokens = term.split_whitespace();
            let coeff = crate::rational::parse_rat(
                tokens.next().ok_or_else(|| Error::Parse("empty term".into()))?,
            )?;
            let mut exps = [0u32; 3];
            for tok in tokens {
                let rest = tok
                    .strip_prefix('b')
                    .ok_or_else(|| Error::Parse(format!("bad factor {tok:?}")))?;
                let (var, exp) = match rest.split_once('^') {
                    Some((v, e)) => (
                        v.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent {tok:?}")))?,
                    ),
                    None => (
                        rest.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad variable {tok:?}")))?,
                        1,
                    ),
                };
                if !(1..=3).contains(&var) {
                    return Err(Error::Parse(format!("variable out of range in {tok:?}")));
                }
                exps[var - 1] += exp;
            }
            let idx = MultiIndex(exps);
            if idx.degree() != degree {
                return Err(Error::Parse(format!(
                    "term {term:?} has degree {} in a degree-{degree} polynomial",
                    idx.degree()
                )));
            }
            out.add_term(idx, coeff);
        }
        Ok(out)
    }
}

/// Which triangle of a shared edge a polynomial lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSide {
    A,
    B,
}

/// Constant gradient triples (db1/dx, db2/dx, db3/dx) and the same for y,
/// with db3 = -db1 - db2.
fn barycentric_gradients(mesh: &Triangulation, tri: usize) -> Result<([Rat; 3], [Rat; 3])> {
    let [v1, v2, v3] = mesh.triangle_vertices(tri);
    let m11 = &v1.x - &v3.x;
    let m12 = &v2.x - &v3.x;
    let m21 = &v1.y - &v3.y;
    let m22 = &v2.y - &v3.y;
    let det = &m11 * &m22 - &m12 * &m21;
    if det.is_zero() {
        return Err(Error::DegenerateTriangle);
    }
    let b1x = &m22 / &det;
    let b1y = -(&m12 / &det);
    let b2x = -(&m21 / &det);
    let b2y = &m11 / &det;
    let b3x = -(&b1x) - &b2x;
    let b3y = -(&b1y) - &b2y;
    Ok(([b1x, b2x, b3x], [b1y, b2y, b3y]))
}

/// A homogeneous degree-m polynomial in the shared-edge parameters (q1, q2).
/// Monomials are kept in descending q1 power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePoly {
    degree: u32,
    coeffs: BTreeMap<std::cmp::Reverse<u32>, Rat>,
}

impl EdgePoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: u32, k1: u32, coeff: Rat) -> Self {
        let mut p = Self::zero(degree);
        p.add_term((k1, degree - k1), coeff);
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, (k1, k2): (u32, u32), coeff: Rat) {
        debug_assert_eq!(k1 + k2, self.degree);
        let entry = self
            .coeffs
            .entry(std::cmp::Reverse(k1))
            .or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&std::cmp::Reverse(k1));
        }
    }

    pub fn coeff(&self, k1: u32) -> Rat {
        self.coeffs
            .get(&std::cmp::Reverse(k1))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Coefficients over the canonical monomial list q1^m, q1^(m-1) q2, ...
    pub fn coeff_vector(&self) -> Vec<Rat> {
        (0..=self.degree).rev().map(|k1| self.coeff(k1)).collect()
    }

    /// Is this a single monomial with coefficient one?
    pub fn unit_monomial(&self) -> Option<u32> {
        if self.coeffs.len() == 1 {
            let (k, c) = self.coeffs.iter().next().unwrap();
            if c.is_one() {
                return Some(k.0);
            }
        }
        None
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (std::cmp::Reverse(k1), c) in &self.coeffs {
            let k2 = self.degree - k1;
            let mut term = render_rat(c);
            for (name, k) in [("q1", *k1), ("q2", k2)] {
                match k {
                    0 => {}
                    1 => term.push_str(&format!(" {name}")),
                    k => term.push_str(&format!(" {name}^{k}")),
                }
            }
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// A Cartesian polynomial of total degree at most d, used as fitting input
/// and as the source of changes of variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianPoly {
    degree: u32,
    coeffs: BTreeMap<(u32, u32), Rat>,
}

impl CartesianPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn add_term(&mut self, (i, j): (u32, u32), coeff: Rat) {
        assert!(i + j <= self.degree, "term degree exceeds polynomial degree");
        let entry = self.coeffs.entry((i, j)).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.coeffs.iter()
    }

    pub fn evaluate(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.coeffs {
            let mut term = c.clone();
            for _ in 0..i {
                term *= x;
            }
            for _ in 0..j {
                term *= y;
            }
            acc += term;
        }
        acc
    }

    pub fn partial_derivative(&self, order: (u32, u32)) -> Self {
        let (rx, ry) = order;
        let mut out = Self::zero(self.degree.saturating_sub(rx + ry));
        for (&(i, j), c) in &self.coeffs {
            if i < rx || j < ry {
                continue;
            }
            let mut factor = Rat::one();
            for t in 0..rx {
                factor *= Rat::from_integer((i - t).into());
            }
            for t in 0..ry {
                factor *= Rat::from_integer((j - t).into());
            }
            out.add_term((i - rx, j - ry), c * &factor);
        }
        out
    }

    /// Change of variable into the homogeneous barycentric form relative to a
    /// triangle: substitute the affine expressions for x and y, then multiply
    /// every total-degree-t term by (b1+b2+b3)^(d-t).
    pub fn to_barycentric(&self, mesh: &Triangulation, tri: usize) -> Result<BarycentricPoly> {
        let [v1, v2, v3] = mesh.triangle_vertices(tri);
        // x and y as linear forms in (b1, b2, b3)
        let x_form = [v1.x.clone(), v2.x.clone(), v3.x.clone()];
        let y_form = [v1.y.clone(), v2.y.clone(), v3.y.clone()];
        let ones = [Rat::one(), Rat::one(), Rat::one()];
        // check non-degeneracy up front
        barycentric_gradients(mesh, tri)?;
        let mut out = BarycentricPoly::zero(self.degree);
        for (&(i, j), c) in &self.coeffs {
            let mut term: BTreeMap<[u32; 3], Rat> = BTreeMap::new();
            term.insert([0, 0, 0], c.clone());
            for _ in 0..i {
                term = mul_linear(&term, &x_form);
            }
            for _ in 0..j {
                term = mul_linear(&term, &y_form);
            }
            for _ in 0..self.degree - i - j {
                term = mul_linear(&term, &ones);
            }
            for (e, v) in term {
                out.add_term(MultiIndex(e), v);
            }
        }
        Ok(out)
    }
}

fn mul_linear(poly: &BTreeMap<[u32; 3], Rat>, form: &[Rat; 3]) -> BTreeMap<[u32; 3], Rat> {
    let mut out: BTreeMap<[u32; 3], Rat> = BTreeMap::new();
    for (e, c) in poly {
        for v in 0..3 {
            if form[v].is_zero() {
                continue;
            }
            let mut e2 = *e;
            e2[v] += 1;
            let entry = out.entry(e2).or_insert_with(Rat::zero);
            *entry += c * &form[v];
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
