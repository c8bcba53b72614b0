use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use bicover::decision::{decide, DecisionStats, Witness};
use bicover::geom::{ConvexPolygon, Disk, Validation};
use bicover::io::{perturb_points, render_svg, DiskRecord, Meta, PolygonFile, ResultFile};
use bicover::optimizer::{solve, verify_cover, DEFAULT_TOL};
use bicover::oracle::{decide_bruteforce, random_convex_polygon, OracleConfig};

mod bench;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Output(String),
    #[error("witness failed verification: {0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification(_) => 4,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "bicover", version, about = "Cover a convex polygon with two congruent disks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Do two disks of radius R cover the polygon? Exit 0 on yes, 3 on no.
    Decide(DecideArgs),
    /// Smallest radius for two disks, written as a result file.
    Solve(SolveArgs),
    /// Write a random convex polygon.
    Gen(GenArgs),
    /// Time the decision procedure over growing polygon sizes (CSV).
    Bench(bench::BenchArgs),
    /// Check that a result file's disks cover the polygon. Exit 0 if so, 4 if not.
    Verify(VerifyArgs),
    /// Draw a polygon and the disks of a result file as SVG.
    Plot(PlotArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Polygon file: {"vertices": [[x, y], ...]}
    #[arg(long)]
    input: PathBuf,
    /// Reject polygons with four cocircular vertices.
    #[arg(long)]
    strict: bool,
    /// Jitter the vertices by at most 1e-7 of the diameter first (seeded).
    #[arg(long, value_name = "SEED", num_args = 0..=1, default_missing_value = "0")]
    perturb: Option<u64>,
}

impl InputArgs {
    fn load(&self) -> Result<ConvexPolygon> {
        let text =
            fs::read_to_string(&self.input).map_err(|e| CliError::Input(format!("{}: {e}", self.input.display())))?;
        let file = PolygonFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", self.input.display())))?;
        let mut pts = file.points();
        if let Some(seed) = self.perturb {
            pts = perturb_points(&pts, seed);
        }
        let opts = Validation {
            reject_cocircular: self.strict,
        };
        bicover::geom::validate_polygon_with(&pts, opts)
            .map_err(|e| CliError::Input(format!("{}: invalid polygon: {e}", self.input.display())))
    }
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Disk radius.
    #[arg(long)]
    r: f64,
    /// Use the brute-force sampler instead (no witness).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Relative width of the final radius bracket.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Result file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Record wall-clock timings in the result (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Polygon file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    result: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct WitnessOut {
    disks: [DiskRecord; 2],
    splits: [f64; 2],
}

#[derive(Serialize)]
struct DecideOut {
    answer: &'static str,
    r: f64,
    witness: Option<WitnessOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<DecisionStats>,
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_witness(poly: &ConvexPolygon, disks: &[Disk; 2]) -> Result<()> {
    match verify_cover(poly, &disks[0], &disks[1]) {
        Ok(true) => Ok(()),
        Ok(false) => Err(CliError::Verification(
            "disks leave part of the polygon uncovered".into(),
        )),
        Err(e) => Err(CliError::Verification(e.to_string())),
    }
}

fn witness_out(poly: &ConvexPolygon, w: &Witness) -> WitnessOut {
    WitnessOut {
        disks: [DiskRecord::from(&w.disks[0]), DiskRecord::from(&w.disks[1])],
        splits: [poly.to_lifted(w.splits[0]).0, poly.to_lifted(w.splits[1]).0],
    }
}

fn cmd_decide(a: &DecideArgs) -> Result<u8> {
    let poly = a.input.load()?;
    if !(a.r > 0.0 && a.r.is_finite()) {
        return Err(CliError::Usage(format!("--r must be positive, got {}", a.r)));
    }
    let out = if a.oracle {
        let yes = decide_bruteforce(&poly, a.r, &OracleConfig::default());
        DecideOut {
            answer: if yes { "yes" } else { "no" },
            r: a.r,
            witness: None,
            stats: None,
        }
    } else {
        let res = decide(&poly, a.r).map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(w) = &res.witness {
            check_witness(&poly, &w.disks)?;
        }
        DecideOut {
            answer: if res.answer { "yes" } else { "no" },
            r: a.r,
            witness: res.witness.as_ref().map(|w| witness_out(&poly, w)),
            stats: Some(res.stats),
        }
    };
    let code = if out.answer == "yes" { 0 } else { 3 };
    println!("{}", serde_json::to_string_pretty(&out).expect("plain data serializes"));
    Ok(code)
}

fn cmd_solve(a: &SolveArgs) -> Result<u8> {
    let poly = a.input.load()?;
    let start = Instant::now();
    let res = solve(&poly, a.tol).map_err(|e| CliError::Usage(e.to_string()))?;
    let solve_ms = start.elapsed().as_secs_f64() * 1e3;
    check_witness(&poly, &res.disks)?;
    let timings_ms = a.timings.then(|| BTreeMap::from([("solve".to_string(), solve_ms)]));
    let rf = ResultFile {
        radius: res.r_high,
        disks: res.disks.iter().map(DiskRecord::from).collect(),
        splits: [poly.to_lifted(res.splits[0]).0, poly.to_lifted(res.splits[1]).0],
        bracket: [res.r_low, res.r_high],
        meta: Meta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: a.input.perturb,
            timings_ms,
        },
    };
    write_out(a.out.as_deref(), &rf.to_json())?;
    if let Some(svg) = &a.svg {
        let splits = [poly.realize(res.splits[0]), poly.realize(res.splits[1])];
        write_out(Some(svg), &render_svg(&poly, &res.disks, &splits))?;
    }
    Ok(0)
}

fn cmd_gen(a: &GenArgs) -> Result<u8> {
    let poly = random_convex_polygon(a.n as usize, a.seed);
    write_out(a.out.as_deref(), &PolygonFile::from_polygon(&poly).to_json())?;
    Ok(0)
}

fn load_result(path: &Path) -> Result<ResultFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    ResultFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let poly = a.input.load()?;
    let rf = load_result(&a.result)?;
    let disks = rf.disks().map_err(|e| CliError::Input(e.to_string()))?;
    let covered = match verify_cover(&poly, &disks[0], &disks[1]) {
        Ok(c) => c,
        Err(e) => return Err(CliError::Input(e.to_string())),
    };
    println!("{}", serde_json::json!({ "covered": covered }));
    Ok(if covered { 0 } else { 4 })
}

fn cmd_plot(a: &PlotArgs) -> Result<u8> {
    let poly = a.input.load()?;
    let rf = load_result(&a.result)?;
    let disks = rf.disks().map_err(|e| CliError::Input(e.to_string()))?;
    let splits: Vec<_> = rf.splits.iter().map(|&s| poly.point_at(s)).collect();
    write_out(Some(&a.out), &render_svg(&poly, &disks, &splits))?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Decide(a) => cmd_decide(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Bench(a) => bench::run(a).map_err(CliError::Usage),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Plot(a) => cmd_plot(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bicover: {e}");
            ExitCode::from(e.code())
        }
    }
}
