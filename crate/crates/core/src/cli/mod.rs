//! Command-line front end. Exit codes: 0 ok, 2 input error, 3 verification
//! failure, 4 resource cap.

pub mod certificate;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bing_topology::{
    example1_audit, example1_family, example2_window, nbhd_closure_contains, separation_check, theta_discrete_finite,
    BasicNbhd, Point,
};
use crate::engine::{continuity_audit, AuditOutcome, Engine, EngineConfig, EngineError};
use crate::exact_algebra::rational::{format_rational, parse_rational, rat, ratio};
use crate::Rational;
pub use certificate::{Certificate, Pair, VerifyFailure};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidInput(_) => CliError::Input(e.to_string()),
            EngineError::StageCap(_) | EngineError::SearchExhausted => CliError::Cap(e.to_string()),
            EngineError::Verification(ref r) => {
                let detail = serde_json::to_string_pretty(r).unwrap_or_default();
                CliError::Verification(format!("{e}\n{detail}"))
            }
            _ => CliError::Verification(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bing", version, about = "Back-and-forth homeomorphisms of the Bing space, certified stage by stage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extend a finite bijection through verified stages and write a certificate.
    Extend {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        stages: u32,
        #[arg(long)]
        out: PathBuf,
        /// Budget for each candidate search.
        #[arg(long, default_value_t = EngineConfig::default().search_cap)]
        search_cap: usize,
    },
    /// Print the image of a point, extending the certified run if needed.
    Eval {
        #[arg(long)]
        cert: PathBuf,
        /// Point as "x;y" with rationals "p/q".
        #[arg(long)]
        point: String,
        /// Stage cap; defaults to the enrollment bound of the point.
        #[arg(long)]
        max_stages: Option<u32>,
        /// Evaluate the inverse map instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Re-check every stage of a certificate and its byte-exact replay.
    Verify { file: PathBuf },
    /// Emit an example family with its audit.
    Example {
        /// "example1" or "example2".
        name: String,
        /// Comma-separated radii, e.g. "1/2,2".
        #[arg(long)]
        eps: Option<String>,
        /// example1: family size; example2: half-width of the window.
        #[arg(long)]
        k: Option<u64>,
    },
    /// Sampled continuity audit of the extended map at a point.
    Audit {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        point: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        height: u64,
        #[arg(long, default_value_t = 64)]
        max_stages: u32,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Extend { pairs, stages, out: path, search_cap } => {
            let f0 = read_pairs(&pairs)?;
            let cert = extend(f0, stages, search_cap)?;
            std::fs::write(&path, cert.to_bytes())
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            emit(out, &json!({ "stages": stages, "digest": cert.digest, "out": path.display().to_string() }))
        }
        Command::Eval { cert, point, max_stages, inverse } => {
            let z = parse_point(&point)?;
            let (cert, _) = load(&cert)?;
            let mut engine = cert.replay()?;
            let cap = max_stages.unwrap_or_else(|| enrollment_bound(&engine, &z).max(cert.config.stages));
            let w = if inverse { engine.inverse_evaluate(&z, cap)? } else { engine.evaluate(&z, cap)? };
            writeln!(out, "{w}").map_err(io)
        }
        Command::Verify { file } => {
            let (cert, bytes) = load(&file)?;
            match cert.verify(&bytes) {
                Ok(reports) => emit(out, &json!({ "ok": true, "stages": reports.len() - 1, "digest": cert.digest })),
                Err(f) => {
                    let _ = writeln!(err, "{f}");
                    emit(out, &json!({ "ok": false, "failure": f }))?;
                    Err(CliError::Verification(format!("condition {} failed at stage {}", f.condition, f.stage)))
                }
            }
        }
        Command::Example { name, eps, k } => {
            let eps = match eps {
                Some(s) => parse_eps_list(&s)?,
                None => vec![ratio(1, 2)],
            };
            let v = match name.as_str() {
                "example1" => example1_json(&eps, k)?,
                "example2" => example2_json(&eps, k.unwrap_or(5))?,
                other => return Err(CliError::Input(format!("unknown example {other:?}; use example1 or example2"))),
            };
            emit(out, &v)
        }
        Command::Audit { cert, point, eps, height, max_stages } => {
            let z = parse_point(&point)?;
            let eps = parse_positive(&eps)?;
            let (cert, _) = load(&cert)?;
            let mut engine = cert.replay()?;
            let outcome = continuity_audit(&mut engine, &z, &eps, height, max_stages)?;
            let passed = matches!(outcome, AuditOutcome::Passed { .. });
            emit(out, &json!({ "point": z, "eps": format_rational(&eps), "height": height, "outcome": outcome }))?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Verification("continuity audit found a counterexample".into()))
            }
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    writeln!(out, "{text}").map_err(io)
}

fn load(path: &Path) -> Result<(Certificate, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok((Certificate::parse(&bytes)?, bytes))
}

fn parse_point(s: &str) -> Result<Point, CliError> {
    s.parse().map_err(|e| CliError::Input(format!("bad point {s:?}: {e}")))
}

fn parse_positive(s: &str) -> Result<Rational, CliError> {
    let r = parse_rational(s).map_err(|e| CliError::Input(e.to_string()))?;
    if r <= rat(0) {
        return Err(CliError::Input(format!("radius {s} is not positive")));
    }
    Ok(r)
}

fn parse_eps_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(parse_positive).collect()
}

/// Reads a pairs file: a JSON list of `{"from": point, "to": point}`.
pub fn read_pairs(path: &Path) -> Result<Vec<(Point, Point)>, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let pairs: Vec<Pair> =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("malformed pairs file: {e}")))?;
    Ok(certificate::f0_of(&pairs))
}

/// Runs `stages` verified stages from `f0` and records them.
pub fn extend(f0: Vec<(Point, Point)>, stages: u32, search_cap: usize) -> Result<Certificate, CliError> {
    let mut engine = Engine::new(f0, EngineConfig { search_cap, verify: true })?;
    engine.run_to(stages)?;
    Ok(Certificate::from_engine(&engine))
}

/// Stage by which `z` is enrolled on both sides: `index(z) + |A_0| + 1`.
fn enrollment_bound(engine: &Engine, z: &Point) -> u32 {
    let i = engine.well_order().index(z);
    u32::try_from(i + engine.f0().len() as u64 + 1).unwrap_or(u32::MAX)
}

fn bad(e: crate::bing_topology::TopologyError) -> CliError {
    CliError::Input(e.to_string())
}

/// Audit row for one radius: `K`, the closure test at `a_K` and `a_(K-1)`,
/// and whether the closure of `N((0,0), eps)` catches at most one of
/// `a_K`, `a_(K+1)`.
fn example1_row(e: &Rational) -> Result<Value, CliError> {
    let origin = Point::base(rat(0));
    let big_k = example1_audit(e).map_err(bad)?;
    let kk: u64 = big_k.clone().try_into().map_err(|_| CliError::Cap(format!("K = {big_k} is too large")))?;
    let n = BasicNbhd::new(origin, e.clone()).map_err(bad)?;
    let hit = |j: u64| example1_family(j).map(|p| nbhd_closure_contains(&n, &p)).map_err(bad);
    let below = if kk > 1 { Some(hit(kk - 1)?) } else { None };
    let caught = usize::from(hit(kk)?) + usize::from(hit(kk + 1)?);
    Ok(json!({
        "eps": format_rational(e),
        "K": big_k.to_string(),
        "closure_contains_a_K": hit(kk)?,
        "closure_contains_a_K_minus_1": below,
        "theta_discrete_at_origin": caught < 2,
    }))
}

fn example1_json(eps: &[Rational], k: Option<u64>) -> Result<Value, CliError> {
    let origin = Point::base(rat(0));
    let mut table = Vec::new();
    let mut widest = 1u64;
    for e in eps {
        let row = example1_row(e)?;
        widest = widest.max(row["K"].as_str().and_then(|k| k.parse().ok()).unwrap_or(1));
        table.push(row);
    }
    let size = k.unwrap_or(widest);
    let mut points = vec![origin];
    for j in 1..=size {
        points.push(example1_family(j).map_err(bad)?);
    }
    Ok(json!({
        "name": "example1",
        "points": points,
        "audit": table,
        "note": "the closure of every neighbourhood of (0,0) holds all a_k with k >= K, so the set is not theta-discrete",
    }))
}

fn example2_json(eps: &[Rational], half: u64) -> Result<Value, CliError> {
    let half = i64::try_from(half).map_err(|_| CliError::Input("window too wide".into()))?;
    let window = example2_window(-half, half);
    let witness = theta_discrete_finite(&window);
    let third = ratio(1, 3);
    let separated = separation_check(&window, &third);
    let pairs = window.len() * window.len().saturating_sub(1);
    let contrast = eps.iter().map(example1_row).collect::<Result<Vec<Value>, CliError>>()?;
    Ok(json!({
        "name": "example2",
        "window": [-half, half],
        "points": window,
        "min_gap": witness.min_gap,
        "separation_radius": format_rational(&third),
        "pairwise_checks": pairs,
        "all_pass": separated.is_ok(),
        "contrast": contrast,
        "note": "theta-discreteness is a topological invariant: this window is theta-discrete and the example1 family is not, so no homeomorphism maps one onto the other",
    }))
}
