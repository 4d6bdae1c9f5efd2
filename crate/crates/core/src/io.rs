//! File formats: mesh and basis documents (JSON with exact rational
//! literals), fitted-model documents, and the `x,y,z` data file. All writers
//! are deterministic so golden files diff cleanly.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::continuity::{BasisColumn, SplineBasis};
use crate::error::{Error, Result};
use crate::fitting::{DataRecord, Dataset, FitModel};
use crate::geometry::{Point2, Triangulation};
use crate::polynomial::BarycentricPoly;
use crate::rational::{parse_rat, render_rat, Rat};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MeshFile {
    format_version: u32,
    vertices: Vec<[serde_json::Value; 2]>,
    triangles: Vec<[usize; 3]>,
}

fn value_to_rat(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::String(s) => parse_rat(s),
        // arbitrary_precision keeps the literal text of the number
        serde_json::Value::Number(n) => parse_rat(&n.to_string()),
        other => Err(Error::Parse(format!("expected coordinate, got {other}"))),
    }
}

pub fn parse_mesh(text: &str) -> Result<Triangulation> {
    let file: MeshFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("mesh file: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported mesh format_version {}",
            file.format_version
        )));
    }
    let vertices = file
        .vertices
        .iter()
        .map(|[x, y]| Ok(Point2::new(value_to_rat(x)?, value_to_rat(y)?)))
        .collect::<Result<Vec<_>>>()?;
    Triangulation::new(vertices, file.triangles)
}

pub fn mesh_to_json(mesh: &Triangulation) -> String {
    let file = MeshFile {
        format_version: FORMAT_VERSION,
        vertices: mesh
            .vertices()
            .iter()
            .map(|p| {
                [
                    serde_json::Value::String(render_rat(&p.x)),
                    serde_json::Value::String(render_rat(&p.y)),
                ]
            })
            .collect(),
        triangles: mesh.triangles().iter().map(|t| t.vertex_ids).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("mesh serializes");
    s.push('\n');
    s
}

pub fn mesh_hash(mesh: &Triangulation) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"mesh-v1\n");
    for p in mesh.vertices() {
        hasher.update(format!("v {} {}\n", render_rat(&p.x), render_rat(&p.y)));
    }
    for t in mesh.triangles() {
        let [i, j, k] = t.vertex_ids;
        hasher.update(format!("t {i} {j} {k}\n"));
    }
    hex(&hasher.finalize())
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    format_version: u32,
    mesh_hash: String,
    degree: u32,
    continuity_order: i32,
    columns: Vec<Vec<String>>,
}

pub fn basis_to_json(basis: &SplineBasis) -> String {
    let file = BasisFile {
        format_version: FORMAT_VERSION,
        mesh_hash: mesh_hash(basis.mesh()),
        degree: basis.degree(),
        continuity_order: basis.continuity_order(),
        columns: basis
            .columns()
            .iter()
            .map(|c| c.per_triangle.iter().map(|p| p.render()).collect())
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("basis serializes");
    s.push('\n');
    s
}

pub fn parse_basis(text: &str, mesh: Arc<Triangulation>) -> Result<SplineBasis> {
    let file: BasisFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("basis file: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported basis format_version {}",
            file.format_version
        )));
    }
    if file.mesh_hash != mesh_hash(&mesh) {
        return Err(Error::MeshHashMismatch);
    }
    let n_tri = mesh.triangles().len();
    let columns = file
        .columns
        .iter()
        .map(|per_tri| {
            if per_tri.len() != n_tri {
                return Err(Error::Parse(format!(
                    "column has {} polynomials for a {}-triangle mesh",
                    per_tri.len(),
                    n_tri
                )));
            }
            Ok(BasisColumn {
                per_triangle: per_tri
                    .iter()
                    .map(|s| BarycentricPoly::parse(s, file.degree))
                    .collect::<Result<Vec<_>>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplineBasis::from_parts(
        mesh,
        file.degree,
        file.continuity_order,
        columns,
    ))
}

pub fn basis_hash(basis: &SplineBasis) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"basis-v1\n");
    hasher.update(basis_to_json(basis));
    hex(&hasher.finalize())
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    basis_hash: String,
    gamma: Vec<String>,
    rank: usize,
    residual: String,
}

pub fn model_to_json(model: &FitModel, basis: &SplineBasis) -> String {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        basis_hash: basis_hash(basis),
        gamma: model.gamma.iter().map(|g| format!("{g:.16e}")).collect(),
        rank: model.rank,
        residual: format!("{:.16e}", model.residual),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("model serializes");
    s.push('\n');
    s
}

pub fn parse_model(text: &str, basis: &SplineBasis) -> Result<FitModel> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported model format_version {}",
            file.format_version
        )));
    }
    if file.basis_hash != basis_hash(basis) {
        return Err(Error::MeshHashMismatch);
    }
    let gamma = file
        .gamma
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let residual = file
        .residual
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad residual {:?}", file.residual)))?;
    Ok(FitModel {
        gamma,
        rank: file.rank,
        residual,
    })
}

/// Comma-separated data with an `x,y,z` header line.
pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty data file".into()))?;
    if header.split(',').map(str::trim).collect::<Vec<_>>() != ["x", "y", "z"] {
        return Err(Error::Parse(format!("expected header x,y,z, got {header:?}")));
    }
    let mut records = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "line {}: expected 3 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        records.push(DataRecord {
            x: parse_rat(fields[0])?,
            y: parse_rat(fields[1])?,
            z: fields[2]
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad z value", lineno + 2)))?,
        });
    }
    Ok(Dataset { records })
}

pub fn dataset_to_csv(data: &Dataset) -> String {
    let mut out = String::from("x,y,z\n");
    for r in &data.records {
        out.push_str(&format!(
            "{},{},{}\n",
            crate::rational::render_rat_decimal(&r.x),
            crate::rational::render_rat_decimal(&r.y),
            r.z
        ));
    }
    out
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
