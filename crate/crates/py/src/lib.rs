//! Python extension module wrapping the core library: mesh construction,
//! basis building, continuity checking, fitting, and prediction.

use std::collections::HashMap;
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use trispline::continuity::{CheckMode, SplineBasis};
use trispline::fitting::{assemble_design, fit as core_fit, predict as core_predict, DataRecord, Dataset};
use trispline::geometry::{Point2, Triangulation};
use trispline::io;
use trispline::rational::{parse_rat, rat_from_f64, rat_to_f64, render_rat, Rat};

fn err(e: trispline::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type PyPoint<'py> = (Bound<'py, PyAny>, Bound<'py, PyAny>);
type EdgeResults = Vec<(usize, bool, f64)>;

/// Accepts an exact string ("1/3", "0.25") or a Python number.
fn coord(v: &Bound<'_, PyAny>) -> PyResult<Rat> {
    if let Ok(s) = v.extract::<String>() {
        return parse_rat(&s).map_err(err);
    }
    if let Ok(i) = v.extract::<i64>() {
        return Ok(Rat::from_integer(i.into()));
    }
    let f = v.extract::<f64>()?;
    rat_from_f64(f).map_err(err)
}

/// A planar triangulation with exact rational vertices.
#[pyclass(name = "Mesh")]
struct PyMesh {
    inner: Arc<Triangulation>,
}

#[pymethods]
impl PyMesh {
    /// Mesh(vertices, triangles): vertices are (x, y) pairs of numbers or
    /// exact strings, triangles are (i, j, k) zero-based index triples.
    #[new]
    fn new(vertices: Vec<PyPoint<'_>>, triangles: Vec<[usize; 3]>) -> PyResult<Self> {
        let vertices = vertices
            .iter()
            .map(|(x, y)| Ok(Point2::new(coord(x)?, coord(y)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: Arc::new(Triangulation::new(vertices, triangles).map_err(err)?),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: Arc::new(io::parse_mesh(text).map_err(err)?),
        })
    }

    fn to_json(&self) -> String {
        io::mesh_to_json(&self.inner)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.vertices().len()
    }

    #[getter]
    fn num_triangles(&self) -> usize {
        self.inner.triangles().len()
    }

    #[getter]
    fn num_shared_edges(&self) -> usize {
        self.inner.shared_edges().len()
    }

    /// Returns (triangle_index, (b1, b2, b3)) for the containing triangle,
    /// with barycentric coordinates as exact strings.
    fn locate(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<(usize, (String, String, String))> {
        let p = Point2::new(coord(x)?, coord(y)?);
        let (tri, bc) = self.inner.locate_point(&p).map_err(err)?;
        Ok((
            tri,
            (
                render_rat(&bc.b[0]),
                render_rat(&bc.b[1]),
                render_rat(&bc.b[2]),
            ),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Mesh({} vertices, {} triangles, {} shared edges)",
            self.inner.vertices().len(),
            self.inner.triangles().len(),
            self.inner.shared_edges().len()
        )
    }
}

/// A continuity-enforced piecewise-polynomial basis.
#[pyclass(name = "Basis")]
struct PyBasis {
    inner: SplineBasis,
}

#[pymethods]
impl PyBasis {
    /// Basis(mesh, degree, smoothness, transversal=None): builds the basis by
    /// enforcing continuity of all orders up to `smoothness` across every
    /// shared edge. `transversal` maps edge index to an (x, y) override.
    #[new]
    #[pyo3(signature = (mesh, degree, smoothness, transversal=None))]
    fn new(
        mesh: &PyMesh,
        degree: u32,
        smoothness: u32,
        transversal: Option<HashMap<usize, PyPoint<'_>>>,
    ) -> PyResult<Self> {
        let mut overrides = HashMap::new();
        for (edge, (x, y)) in transversal.unwrap_or_default() {
            overrides.insert(edge, Point2::new(coord(&x)?, coord(&y)?));
        }
        Ok(Self {
            inner: SplineBasis::enforce_continuity(
                Arc::clone(&mesh.inner),
                degree,
                smoothness,
                &overrides,
            )
            .map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str, mesh: &PyMesh) -> PyResult<Self> {
        Ok(Self {
            inner: io::parse_basis(text, Arc::clone(&mesh.inner)).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        io::basis_to_json(&self.inner)
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn continuity_order(&self) -> i32 {
        self.inner.continuity_order()
    }

    #[getter]
    fn num_columns(&self) -> usize {
        self.inner.columns().len()
    }

    /// Per-column, per-triangle polynomials in canonical text rendering.
    fn columns(&self) -> Vec<Vec<String>> {
        self.inner
            .columns()
            .iter()
            .map(|c| c.per_triangle.iter().map(|p| p.render()).collect())
            .collect()
    }

    /// Verifies continuity of order `smoothness` at `samples` interior points
    /// of every shared edge. Returns (pass, per-edge list of
    /// (edge_index, pass, max_discrepancy)).
    #[pyo3(signature = (smoothness, samples=10, exact=true, tol=1e-9))]
    fn check_continuity(
        &self,
        smoothness: u32,
        samples: usize,
        exact: bool,
        tol: f64,
    ) -> PyResult<(bool, EdgeResults)> {
        let mode = if exact {
            CheckMode::Exact
        } else {
            CheckMode::Float { tolerance: tol }
        };
        let report = self
            .inner
            .check_continuity(smoothness, samples, mode)
            .map_err(err)?;
        Ok((
            report.pass(),
            report
                .edges
                .iter()
                .map(|e| (e.edge_index, e.pass, e.max_discrepancy))
                .collect(),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "Basis(degree={}, continuity_order={}, columns={})",
            self.inner.degree(),
            self.inner.continuity_order(),
            self.inner.columns().len()
        )
    }
}

/// A fitted coefficient vector with diagnostics.
#[pyclass(name = "Model")]
struct PyModel {
    #[pyo3(get)]
    gamma: Vec<f64>,
    #[pyo3(get)]
    rank: usize,
    #[pyo3(get)]
    residual: f64,
}

#[pymethods]
impl PyModel {
    fn __repr__(&self) -> String {
        format!("Model(rank={}, residual={:.3e})", self.rank, self.residual)
    }
}

/// Minimum-norm least-squares fit of observations (x, y, z) in the basis.
#[pyfunction]
#[pyo3(signature = (basis, points, ridge=0.0))]
fn fit(
    basis: &PyBasis,
    points: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>, f64)>,
    ridge: f64,
) -> PyResult<PyModel> {
    let records = points
        .iter()
        .map(|(x, y, z)| {
            Ok(DataRecord {
                x: coord(x)?,
                y: coord(y)?,
                z: *z,
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let data = Dataset { records };
    let design = assemble_design(&basis.inner, &data).map_err(err)?;
    let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
    let model = core_fit(&design, &z, ridge).map_err(err)?;
    Ok(PyModel {
        gamma: model.gamma,
        rank: model.rank,
        residual: model.residual,
    })
}

/// Evaluates the fitted spline at (x, y).
#[pyfunction]
fn predict(basis: &PyBasis, gamma: Vec<f64>, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<f64> {
    let p = Point2::new(coord(x)?, coord(y)?);
    core_predict(&basis.inner, &gamma, &p).map_err(err)
}

/// Evaluates one basis column's polynomial at (x, y), locating the triangle.
#[pyfunction]
fn evaluate_column(basis: &PyBasis, column: usize, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<f64> {
    let p = Point2::new(coord(x)?, coord(y)?);
    let (tri, bc) = basis.inner.mesh().locate_point(&p).map_err(err)?;
    let col = basis
        .inner
        .columns()
        .get(column)
        .ok_or_else(|| PyValueError::new_err(format!("no column {column}")))?;
    Ok(rat_to_f64(&col.per_triangle[tri].evaluate(&bc.b)))
}

#[pymodule]
fn trispline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMesh>()?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_column, m)?)?;
    Ok(())
}
