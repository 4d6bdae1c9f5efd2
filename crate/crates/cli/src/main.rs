//! Command-line interface: basis construction, continuity checking, fitting,
//! prediction, and a self-contained worked example.
//!
//! Exit codes: 0 success, 1 verification failure, 2 operational or usage
//! error.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgAction, Args, Parser, Subcommand};

use trispline::continuity::{CheckMode, SplineBasis};
use trispline::demo;
use trispline::fitting::{assemble_design, fit, predict};
use trispline::geometry::{Point2, Triangulation};
use trispline::io;
use trispline::rational::{parse_rat, rat_to_f64, render_rat_decimal};
use trispline::Error;

#[derive(Parser)]
#[command(name = "trispline", version, about = "Smooth piecewise-polynomial bases over planar triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a continuity-enforced basis and write it to a basis file
    Basis(BasisArgs),
    /// Verify the continuity of a basis file across every shared edge
    Check(CheckArgs),
    /// Least-squares fit of scattered data in a basis, writing a model file
    Fit(FitArgs),
    /// Evaluate a fitted model at points from a data file
    Predict(PredictArgs),
    /// Run the built-in worked example and verify every intermediate result
    Demo,
}

#[derive(Args)]
struct BasisArgs {
    /// Mesh file (JSON: vertices, triangles)
    #[arg(long)]
    mesh: PathBuf,
    /// Polynomial degree d
    #[arg(long)]
    degree: u32,
    /// Continuity order r (0 <= r <= d)
    #[arg(long)]
    smoothness: u32,
    /// Output basis file
    #[arg(long)]
    out: PathBuf,
    /// Transversal override per edge, as EDGE=X,Y (repeatable)
    #[arg(long = "transversal", value_name = "EDGE=X,Y")]
    transversal: Vec<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    basis: PathBuf,
    /// Derivative order to verify
    #[arg(long)]
    smoothness: u32,
    /// Interior sample points per edge
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Exact rational comparison (disable with --exact=false for float mode)
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    exact: bool,
    /// Tolerance for float mode
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    basis: PathBuf,
    /// Data file (CSV with header x,y,z)
    #[arg(long)]
    data: PathBuf,
    /// Output model file
    #[arg(long)]
    out: PathBuf,
    /// Ridge regularization weight
    #[arg(long, default_value_t = 0.0)]
    ridge: f64,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long)]
    basis: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Points file (CSV with header x,y or x,y,z; z is ignored)
    #[arg(long)]
    data: PathBuf,
    /// Output file for x,y,zhat lines (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Basis(args) => cmd_basis(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Fit(args) => cmd_fit(&args),
        Command::Predict(args) => cmd_predict(&args),
        Command::Demo => cmd_demo(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_mesh(path: &Path) -> Result<Arc<Triangulation>, Error> {
    Ok(Arc::new(io::parse_mesh(&read_file(path)?)?))
}

fn load_basis(mesh_path: &Path, basis_path: &Path) -> Result<SplineBasis, Error> {
    let mesh = load_mesh(mesh_path)?;
    io::parse_basis(&read_file(basis_path)?, mesh)
}

fn parse_transversals(specs: &[String]) -> Result<HashMap<usize, Point2>, Error> {
    let mut map = HashMap::new();
    for spec in specs {
        let (edge, point) = spec
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("transversal {spec:?}: expected EDGE=X,Y")))?;
        let edge: usize = edge
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("transversal {spec:?}: bad edge index")))?;
        let (x, y) = point
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("transversal {spec:?}: expected EDGE=X,Y")))?;
        map.insert(edge, Point2::new(parse_rat(x.trim())?, parse_rat(y.trim())?));
    }
    Ok(map)
}

fn cmd_basis(args: &BasisArgs) -> Result<ExitCode, Error> {
    let mesh = load_mesh(&args.mesh)?;
    let overrides = parse_transversals(&args.transversal)?;
    let (basis, log) = SplineBasis::enforce_continuity_logged(
        Arc::clone(&mesh),
        args.degree,
        args.smoothness,
        &overrides,
    )?;
    println!(
        "mesh: {} vertices, {} triangles, {} shared edge(s)",
        mesh.vertices().len(),
        mesh.triangles().len(),
        mesh.shared_edges().len()
    );
    let counts: Vec<String> = log.column_counts.iter().map(|c| c.to_string()).collect();
    println!("columns: {}", counts.join(" -> "));
    println!("continuity order: {}", basis.continuity_order());
    for er in &log.edge_ranks {
        println!("edge {} order {}: constraint rank {}", er.edge_index, er.order, er.rank);
    }
    write_file(&args.out, &io::basis_to_json(&basis))?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode, Error> {
    let basis = load_basis(&args.mesh, &args.basis)?;
    let mode = if args.exact {
        CheckMode::Exact
    } else {
        CheckMode::Float { tolerance: args.tol }
    };
    let report = basis.check_continuity(args.smoothness, args.samples, mode)?;
    for e in &report.edges {
        println!(
            "edge {}: {} (max discrepancy {:.3e})",
            e.edge_index,
            if e.pass { "PASS" } else { "FAIL" },
            e.max_discrepancy
        );
    }
    if report.pass() {
        println!("continuity C{}: PASS", report.order);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("continuity C{}: FAIL", report.order);
        Ok(ExitCode::from(1))
    }
}

fn cmd_fit(args: &FitArgs) -> Result<ExitCode, Error> {
    let basis = load_basis(&args.mesh, &args.basis)?;
    let data = io::parse_dataset(&read_file(&args.data)?)?;
    let design = assemble_design(&basis, &data)?;
    let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
    let model = fit(&design, &z, args.ridge)?;
    println!("rank: {}", model.rank);
    println!("residual: {:.6e}", model.residual);
    write_file(&args.out, &io::model_to_json(&model, &basis))?;
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict(args: &PredictArgs) -> Result<ExitCode, Error> {
    let basis = load_basis(&args.mesh, &args.basis)?;
    let model = io::parse_model(&read_file(&args.model)?, &basis)?;
    let points = parse_points(&read_file(&args.data)?)?;
    let mut out = String::from("x,y,zhat\n");
    for p in &points {
        let zhat = predict(&basis, &model.gamma, p)?;
        out.push_str(&format!(
            "{},{},{zhat}\n",
            render_rat_decimal(&p.x),
            render_rat_decimal(&p.y)
        ));
    }
    match &args.out {
        Some(path) => {
            write_file(path, &out)?;
            println!("wrote {}", path.display());
        }
        None => print!("{out}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Accepts the fitting data format or a bare point list: header `x,y` or
/// `x,y,z`, then one point per line (any z column is ignored).
fn parse_points(text: &str) -> Result<Vec<Point2>, Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Parse("empty points file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    if header != ["x", "y"] && header != ["x", "y", "z"] {
        return Err(Error::Parse(format!("expected header x,y or x,y,z, got {header:?}")));
    }
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::Parse(format!("line {}: expected x,y", lineno + 2)));
        }
        points.push(Point2::new(parse_rat(fields[0])?, parse_rat(fields[1])?));
    }
    Ok(points)
}

/// Two-decimal rendering for the worked example's design matrix, with bare 0
/// for exact zeros.
fn two_decimals(r: &trispline::Rat) -> String {
    use num::Zero;
    if r.is_zero() {
        "0".into()
    } else {
        format!("{:.2}", rat_to_f64(r))
    }
}

fn cmd_demo() -> Result<ExitCode, Error> {
    let mut failures = 0usize;
    let mesh = Arc::new(demo::demo_mesh());
    let data = demo::demo_dataset();

    println!("barycentric coordinates:");
    let expected_rows = demo::expected_barycentric_rows();
    for (rec, (exp_tri, exp_b)) in data.records.iter().zip(&expected_rows) {
        let p = Point2::new(rec.x.clone(), rec.y.clone());
        let (tri, bc) = mesh.locate_point(&p)?;
        println!(
            "({}, {}) in T{} -> ({}, {}, {})",
            render_rat_decimal(&rec.x),
            render_rat_decimal(&rec.y),
            tri + 1,
            render_rat_decimal(&bc.b[0]),
            render_rat_decimal(&bc.b[1]),
            render_rat_decimal(&bc.b[2]),
        );
        if tri != *exp_tri || bc.b != *exp_b {
            println!("  MISMATCH with expected row");
            failures += 1;
        }
    }

    let built = SplineBasis::enforce_continuity(Arc::clone(&mesh), 2, 1, &HashMap::new())?;
    let Some(perm) = demo::match_columns(built.columns(), &demo::expected_c1_columns()) else {
        println!("basis columns MISMATCH with expected first-order basis");
        return Ok(ExitCode::from(1));
    };
    let columns = perm.iter().map(|&i| built.columns()[i].clone()).collect();
    let basis = SplineBasis::from_parts(Arc::clone(&mesh), 2, 1, columns);

    println!("design matrix:");
    let design = assemble_design(&basis, &data)?;
    let expected = demo::expected_design_matrix();
    for (i, expected_row) in expected.iter().enumerate() {
        let row: Vec<String> = (0..design.entries().cols())
            .map(|j| two_decimals(&design.entries()[(i, j)]))
            .collect();
        println!("{}", row.join(" "));
        for (j, want) in expected_row.iter().enumerate() {
            if design.entries()[(i, j)] != *want {
                println!("  MISMATCH at ({i}, {j})");
                failures += 1;
            }
        }
    }

    let z: Vec<f64> = data.records.iter().map(|r| r.z).collect();
    let model = fit(&design, &z, 0.0)?;
    let gamma_str: Vec<String> = model.gamma.iter().map(|g| format!("{g:.6}")).collect();
    println!("gamma: [{}]", gamma_str.join(", "));
    println!("rank: {}", model.rank);
    println!("residual: {:.3e}", model.residual);
    for (g, e) in model.gamma.iter().zip(demo::expected_gamma()) {
        if (g - e).abs() > 1e-9 {
            println!("  gamma MISMATCH: {g} vs expected {e}");
            failures += 1;
        }
    }
    if model.rank != 5 || model.residual > 1e-8 {
        println!("  fit diagnostics MISMATCH: expected rank 5, residual <= 1e-8");
        failures += 1;
    }
    for rec in &data.records {
        let p = Point2::new(rec.x.clone(), rec.y.clone());
        let zhat = predict(&basis, &model.gamma, &p)?;
        if (zhat - rec.z).abs() > 1e-6 {
            println!("  prediction MISMATCH at training point: {zhat} vs {}", rec.z);
            failures += 1;
        }
    }

    let report = basis.check_continuity(1, 10, CheckMode::Exact)?;
    if report.pass() {
        println!("continuity C1: PASS (exact)");
    } else {
        println!("continuity C1: FAIL (exact)");
        failures += 1;
    }

    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        println!("{failures} assertion(s) failed");
        Ok(ExitCode::from(1))
    }
}
