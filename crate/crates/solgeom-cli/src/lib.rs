//! Command-line front end for the solgeom engine.
//!
//! The binary exposes one verification entry point, `paper-verify`, which
//! runs the full fixed-order record suite against the built-in catalog,
//! and six focused subcommands (`curvature`, `tension`, `bitension`,
//! `integrability`, `submersion-check`, `probe-rch`) that build smaller
//! record sets for a single manifold, frame or map, including objects
//! defined in a user config file.
//!
//! Every run prints one JSON [`report::Report`] to standard output and,
//! with `--out`, writes the same bytes to a file. Exit status is 0 when
//! every record passes, 1 when some record fails numerically (the report
//! is still produced), and 2 for configuration problems: unreadable or
//! malformed config files, unknown object names, malformed point
//! specifications, or objects that fail construction-time validation.
//! Reports are byte-identical across runs with the same inputs except
//! for the `wall_ms` field.

pub mod config;
pub mod report;
pub mod suite;
pub mod tolerances;

use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use solgeom::catalog::Catalog;
use solgeom::sample::PointSpec;

use report::{ConfigEcho, Record, Report};
use suite::Suite;
use tolerances::Overrides;

/// Chart-level differential geometry verification tool.
#[derive(Debug, Parser)]
#[command(name = "solgeom-cli", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file adding manifolds, frames and maps to the catalog.
    #[arg(long, global = true)]
    pub config: Option<String>,

    /// Seed for randomized point clouds and the probe search.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Also write the report JSON to this path.
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Override the tolerance of exact-value, structure and identity
    /// records.
    #[arg(long, global = true)]
    pub tol_identity: Option<f64>,

    /// Override the tolerance of curvature and contraction records.
    #[arg(long, global = true)]
    pub tol_curvature: Option<f64>,

    /// Override the tolerance of fourth-order records.
    #[arg(long, global = true)]
    pub tol_bitension: Option<f64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            identity: self.tol_identity,
            curvature: self.tol_curvature,
            bitension: self.tol_bitension,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full verification suite over the built-in catalog.
    PaperVerify {
        #[command(flatten)]
        common: Common,
        /// Restarts for the probe records.
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
    },
    /// Curvature symmetry and consistency checks for a manifold or frame.
    Curvature {
        #[command(flatten)]
        common: Common,
        /// Chart to check.
        #[arg(long)]
        manifold: Option<String>,
        /// Frame to check (implies its chart).
        #[arg(long)]
        frame: Option<String>,
        /// Points: `random:N:SEED`, `grid:K`, or `x,y,z;...`.
        #[arg(long)]
        points: Option<String>,
    },
    /// Tension field norm of a map, one record per point.
    Tension {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
        #[arg(long)]
        points: Option<String>,
    },
    /// Bitension field norm of a map, one record per point.
    Bitension {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
        #[arg(long)]
        points: Option<String>,
    },
    /// Bracket shape and data-form identity systems of a frame.
    Integrability {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        frame: String,
        #[arg(long)]
        points: Option<String>,
    },
    /// Riemannian submersion diagnostics of a map.
    SubmersionCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: String,
        /// Points; defaults to a fixed 64-point low-discrepancy cloud.
        #[arg(long)]
        points: Option<String>,
    },
    /// Multistart infeasibility probe for the obstruction system.
    ProbeRch {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::PaperVerify { common, .. }
            | Command::Curvature { common, .. }
            | Command::Tension { common, .. }
            | Command::Bitension { common, .. }
            | Command::Integrability { common, .. }
            | Command::SubmersionCheck { common, .. }
            | Command::ProbeRch { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::PaperVerify { .. } => "paper-verify",
            Command::Curvature { .. } => "curvature",
            Command::Tension { .. } => "tension",
            Command::Bitension { .. } => "bitension",
            Command::Integrability { .. } => "integrability",
            Command::SubmersionCheck { .. } => "submersion-check",
            Command::ProbeRch { .. } => "probe-rch",
        }
    }
}

/// Result of a run: either a report (exit 0 or 1) or a configuration
/// diagnostic (exit 2).
#[derive(Debug)]
pub enum Outcome {
    Report { report: Report, exit: u8 },
    ConfigFailure { message: String },
}

/// Runs a parsed command line to completion. Pure except for config-file
/// reading and `--out` writing, so tests can drive it in process.
pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let common = cli.command.common();

    let mut cat = Catalog::standard();
    if let Some(path) = &common.config {
        if let Err(e) = config::apply_config_file(&mut cat, path) {
            return Outcome::ConfigFailure {
                message: e.to_string(),
            };
        }
    }

    let built = build_records(&cli.command, &cat);
    let records = match built {
        Ok(r) => r,
        Err(message) => return Outcome::ConfigFailure { message },
    };

    let echo = echo_for(&cli.command);
    let wall_ms = start.elapsed().as_millis() as u64;
    let report = Report::new(echo, records, wall_ms);

    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return Outcome::ConfigFailure {
                message: format!("cannot write report to `{path}`: {e}"),
            };
        }
    }
    let exit = if report.pass { 0 } else { 1 };
    Outcome::Report { report, exit }
}

fn build_records(command: &Command, cat: &Catalog) -> Result<Vec<Record>, String> {
    let common = command.common();
    let tols = common.overrides();
    let fail = |e: solgeom::Error| e.to_string();

    match command {
        Command::PaperVerify { restarts, .. } => {
            let suite = Suite {
                cat,
                seed: common.seed,
                restarts: *restarts,
                tols,
            };
            suite
                .paper_verify()
                .map_err(|e| format!("verification suite failed to assemble: {e}"))
        }
        Command::Curvature {
            manifold,
            frame,
            points,
            ..
        } => {
            let frame = match frame {
                Some(name) => Some(cat.frame(name).map_err(fail)?),
                None => None,
            };
            let manifold = match (frame, manifold) {
                (Some(f), _) => f.manifold(),
                (None, Some(name)) => cat.manifold(name).map_err(fail)?,
                (None, None) => {
                    return Err("curvature requires --manifold or --frame".to_string())
                }
            };
            let pts = resolve_points(points, common.seed, manifold.dim())?;
            suite::curvature_records(manifold, frame, &pts, &tols).map_err(fail)
        }
        Command::Tension { map, points, .. } => {
            let map = cat.map(map).map_err(fail)?;
            let pts = resolve_points(points, common.seed, map.source().dim())?;
            suite::tension_records(map, &pts).map_err(fail)
        }
        Command::Bitension { map, points, .. } => {
            let map = cat.map(map).map_err(fail)?;
            let pts = resolve_points(points, common.seed, map.source().dim())?;
            suite::bitension_records(map, &pts).map_err(fail)
        }
        Command::Integrability { frame, points, .. } => {
            let frame = cat.frame(frame).map_err(fail)?;
            let pts = resolve_points(points, common.seed, frame.manifold().dim())?;
            suite::integrability_records(frame, &pts, &tols).map_err(fail)
        }
        Command::SubmersionCheck { map, points, .. } => {
            let map = cat.map(map).map_err(fail)?;
            let dim = map.source().dim();
            let pts = match points {
                Some(spec) => parse_points(spec, dim)?,
                None => suite::default_submersion_points(dim),
            };
            suite::submersion_records(map, &pts, &tols).map_err(fail)
        }
        Command::ProbeRch { restarts, .. } => {
            let suite = Suite {
                cat,
                seed: common.seed,
                restarts: *restarts,
                tols,
            };
            Ok(suite.probe_records())
        }
    }
}

fn resolve_points(spec: &Option<String>, seed: u64, dim: usize) -> Result<Vec<Vec<f64>>, String> {
    match spec {
        Some(s) => parse_points(s, dim),
        None => suite::default_points(seed)
            .points(dim)
            .map_err(|e| e.to_string()),
    }
}

fn parse_points(spec: &str, dim: usize) -> Result<Vec<Vec<f64>>, String> {
    let parsed = PointSpec::parse(spec).map_err(|e| format!("bad --points: {e}"))?;
    let pts = parsed.points(dim).map_err(|e| format!("bad --points: {e}"))?;
    for p in &pts {
        if p.len() != dim {
            return Err(format!(
                "bad --points: point {p:?} has {} coordinates, chart needs {dim}",
                p.len()
            ));
        }
    }
    if pts.is_empty() {
        return Err("bad --points: empty point set".to_string());
    }
    Ok(pts)
}

fn echo_for(command: &Command) -> ConfigEcho {
    let common = command.common();
    let (restarts, points, subjects) = match command {
        Command::PaperVerify { restarts, .. } => (Some(*restarts), None, vec![]),
        Command::Curvature {
            manifold,
            frame,
            points,
            ..
        } => {
            let mut subjects = Vec::new();
            if let Some(m) = manifold {
                subjects.push(m.clone());
            }
            if let Some(f) = frame {
                subjects.push(f.clone());
            }
            (None, points.clone(), subjects)
        }
        Command::Tension { map, points, .. } | Command::Bitension { map, points, .. } => {
            (None, points.clone(), vec![map.clone()])
        }
        Command::Integrability { frame, points, .. } => (None, points.clone(), vec![frame.clone()]),
        Command::SubmersionCheck { map, points, .. } => (None, points.clone(), vec![map.clone()]),
        Command::ProbeRch { restarts, .. } => (Some(*restarts), None, vec![]),
    };
    ConfigEcho {
        command: command.name().to_string(),
        config: common.config.clone(),
        seed: common.seed,
        restarts,
        points,
        subjects,
        tol_identity: common.tol_identity,
        tol_curvature: common.tol_curvature,
        tol_bitension: common.tol_bitension,
    }
}
