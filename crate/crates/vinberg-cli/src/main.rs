mod fmt;
mod laws;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vinberg::ensembles::{
    bipartite_embed, compare, eigenvalues_sym, gram, sample_staircase_factor, sample_wigner_vinberg,
    sample_wishart_factor, scale_in_place, DaisyDims, EmpiricalSpectrum, EntryDist, WignerParams, WishartIndex,
};
use vinberg::lambert_tsallis::{f_kg, forbidden_set, w_main};
use vinberg::profile_solver::{make_profile, solve_eta, ProfileKind};

use crate::fmt::{sci, write_csv};
use crate::laws::{LawSpec, ParamsSpec};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Param(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
}

impl From<vinberg::Error> for CliError {
    fn from(e: vinberg::Error) -> Self {
        match e {
            vinberg::Error::Convergence(_) => CliError::Convergence(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

impl CliError {
    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.to_path_buf(), msg: e.to_string() }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Param(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Random matrix samplers, limiting spectral laws and their comparison on
/// daisy-graph (Vinberg) matrix spaces.
#[derive(Parser, Debug)]
#[command(name = "vinberg", version, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a matrix and write its sorted rescaled eigenvalues.
    Sample(SampleArgs),
    /// Evaluate a limiting density on a grid and describe the law.
    Theory(TheoryArgs),
    /// Compare an eigenvalue CSV with a limiting law.
    Compare(CompareArgs),
    /// Evaluate the Lambert-Tsallis function at given points.
    Wfun(WfunArgs),
    /// Solve the variance-profile equation numerically.
    Profile(ProfileArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// wigner, wishart, staircase or bipartite.
    #[arg(long)]
    ensemble: String,
    #[arg(long)]
    n: usize,
    /// Hub fraction, used when --a is absent.
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    /// Hub size.
    #[arg(long)]
    a: Option<usize>,
    /// Petal size.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    v: f64,
    /// Diagonal variance of Wigner matrices (default 2v).
    #[arg(long)]
    v_diag: Option<f64>,
    #[arg(long, default_value = "gaussian")]
    dist: String,
    #[arg(long, default_value_t = 1)]
    m1: usize,
    #[arg(long, default_value_t = 0)]
    m2: usize,
    /// Column count of the staircase factor.
    #[arg(long)]
    big_n: Option<usize>,
    /// Staircase slope.
    #[arg(long, default_value_t = 1.0)]
    slope: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "eigenvalues.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct TheoryArgs {
    #[command(flatten)]
    law: LawSpec,
    /// Grid size.
    #[arg(long, default_value_t = 400)]
    points: usize,
    /// Padding added on both sides of the support.
    #[arg(long, default_value_t = 0.1)]
    pad: f64,
    #[arg(long, default_value = "density.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Eigenvalue CSV written by `sample`.
    #[arg(long)]
    eigs: PathBuf,
    #[command(flatten)]
    law: LawSpec,
    #[arg(long, default_value_t = 200)]
    bins: usize,
    #[arg(long, default_value_t = 0.05)]
    atom_window: f64,
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct WfunArgs {
    #[command(flatten)]
    params: ParamsSpec,
    /// Point `re,im` (repeatable).
    #[arg(long = "z", allow_hyphen_values = true)]
    z: Vec<String>,
    /// CSV file with columns re_z,im_z.
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long, default_value = "wfun.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// constant, corner, trapezoid, general or custom.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 1.0)]
    v: f64,
    #[arg(long, default_value_t = 0.5)]
    c: f64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    m1: f64,
    #[arg(long, default_value_t = 0.0)]
    m2: f64,
    /// Cell grid CSV for the custom kind.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Grid size.
    #[arg(long, default_value_t = 400)]
    m: usize,
    /// Point `re,im` (repeatable).
    #[arg(long = "z", allow_hyphen_values = true, required = true)]
    z: Vec<String>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Also export the discretized profile (CSV grid plus JSON metadata).
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, default_value = "profile.csv")]
    out: PathBuf,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::io(path, e))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Sidecar holding the command line that produced `out`, so the run can be replayed.
fn write_sidecar(out: &Path, command: &str, argv: &[String], extra: Value) -> Result<()> {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "argv": argv,
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    write_json(&sidecar_path(out), &v)
}

fn parse_z(s: &str) -> Result<Complex64> {
    let bad = || CliError::Param(format!("point {s:?} must be written re,im"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn cmd_sample(a: &SampleArgs, argv: &[String]) -> Result<()> {
    let dist: EntryDist = a.dist.parse()?;
    let dims = || -> Result<DaisyDims> {
        match a.a {
            Some(hub) if a.k == 1 => Ok(DaisyDims::simple(a.n, hub)?),
            Some(hub) => {
                let rest = a.n.checked_sub(hub).filter(|r| r % a.k == 0).ok_or_else(|| {
                    CliError::Param(format!("n - a = {} - {hub} is not a multiple of k = {}", a.n, a.k))
                })?;
                Ok(DaisyDims::new(a.n, hub, rest / a.k, a.k)?)
            }
            None if a.k == 1 => Ok(DaisyDims::from_fraction(a.n, a.c)?),
            None => Err(CliError::Param("petal size k > 1 needs an explicit hub size --a".into())),
        }
    };
    let eigs = match a.ensemble.as_str() {
        "wigner" => {
            let d = dims()?;
            let params = WignerParams::new(a.v, a.v_diag.unwrap_or(2.0 * a.v), dist)?;
            let mut m = sample_wigner_vinberg(&d, &params, a.seed)?;
            scale_in_place(&mut m, 1.0 / (a.n as f64).sqrt());
            eigenvalues_sym(m.as_ref())?
        }
        "wishart" => {
            let d = dims()?;
            let eta = sample_wishart_factor(&d, &WishartIndex::new(a.m1, a.m2, a.v)?, dist, a.seed)?;
            eigenvalues_sym(gram(eta.as_ref(), a.n as f64).as_ref())?
        }
        "staircase" => {
            let big_n = a.big_n.ok_or_else(|| CliError::Param("staircase needs --big-n".into()))?;
            let eta = sample_staircase_factor(a.n, big_n, a.slope, a.v, dist, a.seed)?;
            eigenvalues_sym(gram(eta.as_ref(), a.n as f64).as_ref())?
        }
        "bipartite" => {
            let d = dims()?;
            let mut eta = sample_wishart_factor(&d, &WishartIndex::new(a.m1, a.m2, a.v)?, dist, a.seed)?;
            let total = (eta.nrows() + eta.ncols()) as f64;
            scale_in_place(&mut eta, 1.0 / total.sqrt());
            eigenvalues_sym(bipartite_embed(eta.as_ref()).as_ref())?
        }
        other => return Err(CliError::Param(format!("unknown ensemble {other:?}"))),
    };
    let rows: Vec<Vec<String>> = eigs.iter().map(|&x| vec![sci(x, 12)]).collect();
    write_csv(&a.out, &["eigenvalue"], &rows)?;
    write_sidecar(&a.out, "sample", argv, json!({ "seed": a.seed, "rows": eigs.len() }))
}

fn cmd_theory(a: &TheoryArgs, argv: &[String]) -> Result<()> {
    let law = a.law.build()?;
    if a.points < 2 {
        return Err(CliError::Param("need at least 2 grid points".into()));
    }
    let (lo, hi) = law.hull();
    let (lo, hi) = (lo - a.pad, hi + a.pad);
    let rows: Vec<Vec<String>> = (0..a.points)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (a.points - 1) as f64;
            vec![sci(x, 12), sci(law.density(x), 12)]
        })
        .collect();
    write_csv(&a.out, &["x", "density"], &rows)?;
    write_sidecar(&a.out, "theory", argv, json!({ "law": laws::describe(&law, &a.law) }))
}

fn read_eigenvalues(path: &Path) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::io(path, e))?;
        let field = rec.get(0).ok_or_else(|| CliError::io(path, "empty row"))?;
        out.push(field.trim().parse::<f64>().map_err(|e| CliError::io(path, format!("{field:?}: {e}")))?);
    }
    Ok(out)
}

fn cmd_compare(a: &CompareArgs, argv: &[String]) -> Result<()> {
    let law = a.law.build()?;
    let eigs = EmpiricalSpectrum::new(read_eigenvalues(&a.eigs)?)?;
    let r = compare(&eigs, &law, a.bins, a.atom_window)?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "compare",
        "argv": argv,
        "ks": r.ks,
        "l1": r.l1,
        "atom_estimate": r.atom_estimate,
        "support_estimate": [r.support_estimate.0, r.support_estimate.1],
        "n": r.n,
        "bins": r.bins,
        "range": [r.range.0, r.range.1],
        "law": laws::describe(&law, &a.law),
    });
    write_json(&a.out, &report)
}

fn cmd_wfun(a: &WfunArgs, argv: &[String]) -> Result<()> {
    let params = a.params.build()?;
    let mut zs: Vec<Complex64> = a.z.iter().map(|s| parse_z(s)).collect::<Result<_>>()?;
    if let Some(path) = &a.points {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
        for rec in rdr.records() {
            let rec = rec.map_err(|e| CliError::io(path, e))?;
            let num = |i: usize| -> Result<f64> {
                rec.get(i).and_then(|s| s.trim().parse().ok()).ok_or_else(|| CliError::io(path, "expected re_z,im_z"))
            };
            zs.push(Complex64::new(num(0)?, num(1)?));
        }
    }
    if zs.is_empty() {
        return Err(CliError::Param("no points given (use --z or --points)".into()));
    }
    let set = forbidden_set(&params);
    let rows: Vec<Vec<String>> = zs
        .iter()
        .map(|&z| {
            let on_set = z.im == 0.0 && set.closure_contains(z.re);
            match (on_set, w_main(z, &params)) {
                (false, Ok(w)) => {
                    let res = f_kg(w, &params).map(|f| (f - z).norm()).unwrap_or(f64::NAN);
                    vec![sci(z.re, 15), sci(z.im, 15), sci(w.re, 15), sci(w.im, 15), sci(res, 15)]
                }
                _ => vec![sci(z.re, 15), sci(z.im, 15), "nan".into(), "nan".into(), "domain".into()],
            }
        })
        .collect();
    write_csv(&a.out, &["re_z", "im_z", "re_w", "im_w", "residual"], &rows)?;
    write_sidecar(
        &a.out,
        "wfun",
        argv,
        json!({ "forbidden_set": { "case": format!("{:?}", set.case), "lo": set.lo, "hi": set.hi } }),
    )
}

fn read_grid(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_path(path).map_err(|e| CliError::io(path, e))?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::io(path, e))?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::io(path, format!("{s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn cmd_profile(a: &ProfileArgs, argv: &[String]) -> Result<()> {
    let (kind, m) = match a.kind.as_str() {
        "constant" => (ProfileKind::Constant { v: a.v }, a.m),
        "corner" => (ProfileKind::WignerCorner { c: a.c, v: a.v }, a.m),
        "trapezoid" => (ProfileKind::Trapezoid { p: a.p, alpha: a.alpha, v: a.v }, a.m),
        "general" => (ProfileKind::GeneralVinberg { c: a.c, m1: a.m1, m2: a.m2, v: a.v }, a.m),
        "custom" => {
            let path = a.grid.as_ref().ok_or_else(|| CliError::Param("custom profile needs --grid".into()))?;
            let rows = read_grid(path)?;
            let m = rows.len();
            (ProfileKind::Custom(rows), m)
        }
        other => return Err(CliError::Param(format!("unknown profile kind {other:?}"))),
    };
    let profile = make_profile(&kind, m)?;
    let zs: Vec<Complex64> = a.z.iter().map(|s| parse_z(s)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for &z in &zs {
        let f = solve_eta(z, &profile, a.tol, a.max_iter)?;
        let s = f.mean();
        rows.push(vec![
            sci(z.re, 12),
            sci(z.im, 12),
            sci(s.re, 12),
            sci(s.im, 12),
            f.iterations.to_string(),
            sci(f.residual, 12),
        ]);
    }
    write_csv(&a.out, &["re_z", "im_z", "re_s", "im_s", "iterations", "residual"], &rows)?;
    let params = json!({ "v": a.v, "c": a.c, "p": a.p, "alpha": a.alpha, "m1": a.m1, "m2": a.m2 });
    if let Some(path) = &a.export {
        let grid = profile.grid();
        let cells: Vec<Vec<String>> = (0..m).map(|i| (0..m).map(|j| sci(grid[(i, j)], 12)).collect()).collect();
        fmt::write_rows(path, &cells)?;
        write_json(&sidecar_path(path), &json!({ "schema_version": SCHEMA_VERSION, "kind": a.kind, "params": params, "m": m }))?;
    }
    write_sidecar(&a.out, "profile", argv, json!({ "kind": a.kind, "params": params, "m": m }))
}

/// Arguments after the program name. `--config <sidecar.json>` in front replays
/// the stored command line; any further arguments override it.
fn effective_args() -> Result<Vec<String>> {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    if raw.first().map(String::as_str) != Some("--config") {
        return Ok(raw);
    }
    let path = PathBuf::from(raw.get(1).ok_or_else(|| CliError::Param("--config needs a path".into()))?);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::io(&path, e))?;
    let mut args: Vec<String> = v
        .get("argv")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::io(&path, "no argv array"))?
        .iter()
        .map(|a| a.as_str().map(str::to_owned).ok_or_else(|| CliError::io(&path, "argv entries must be strings")))
        .collect::<Result<_>>()?;
    args.extend(raw.into_iter().skip(2));
    Ok(args)
}

fn run() -> Result<()> {
    let args = effective_args()?;
    let cli = Cli::try_parse_from(std::iter::once("vinberg".to_string()).chain(args.iter().cloned()))
        .unwrap_or_else(|e| e.exit());
    match &cli.command {
        Command::Sample(a) => cmd_sample(a, &args),
        Command::Theory(a) => cmd_theory(a, &args),
        Command::Compare(a) => cmd_compare(a, &args),
        Command::Wfun(a) => cmd_wfun(a, &args),
        Command::Profile(a) => cmd_profile(a, &args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
