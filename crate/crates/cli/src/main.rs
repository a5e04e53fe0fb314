mod report;
mod spec;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liegeo::tables::{run_table1, run_theorem22, TableOptions};
use liegeo::tg::{sphere_scan, ScanOptions, TgError};
use liegeo::Geometry;
use serde::Serialize;

use report::{CommandError, RunReport};
use spec::{GroupSpec, ParseError};

const EXIT_PARSE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_NONCONVERGENCE: u8 = 4;

#[derive(Parser)]
#[command(name = "liegeo", version, about = "Totally geodesic left-invariant unit fields on 3D metric Lie groups")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct GroupArgs {
    /// λ1,λ2,λ3 with [e_i,e_k] = λ_m e_m
    #[arg(long, allow_hyphen_values = true, value_name = "L1,L2,L3")]
    unimodular: Option<String>,
    /// α,β,δ with [e1,e2] = αe2+βe3, [e1,e3] = −βe2+δe3
    #[arg(long, allow_hyphen_values = true, value_name = "A,B,D")]
    nonunimodular: Option<String>,
    /// JSON file with "kind" and its parameters
    #[arg(long, value_name = "FILE")]
    group: Option<PathBuf>,
}

impl GroupArgs {
    fn spec(&self) -> Result<GroupSpec, ParseError> {
        GroupSpec::from_flags(self.unimodular.as_deref(), self.nonunimodular.as_deref(), self.group.as_deref())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Table1,
    Theorem22,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form classification with a contact report per solution
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
    },
    /// Closed-form and oracle residuals of one field
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true, value_name = "X1,X2,X3")]
        field: String,
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
    },
    /// Numerical sphere scan matched against the classification
    Scan {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 20_000)]
        resolution: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 1e-3)]
        match_tol: f64,
    },
    /// Reproduce a classification table over built-in instances
    Table {
        #[arg(long, value_enum)]
        which: Which,
        /// Lattice size of the completeness scan
        #[arg(long, default_value_t = 20_000)]
        resolution: usize,
        #[arg(long)]
        no_scan: bool,
        #[arg(long, default_value_t = 1e-9)]
        residual_tol: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[arg(long, default_value_t = 1e-3)]
        match_tol: f64,
    },
    /// Gauss–Newton refinement from a seed field
    Refine {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, allow_hyphen_values = true, value_name = "X1,X2,X3")]
        seed: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn threads_from_env() -> Result<(), ParseError> {
    if let Ok(v) = std::env::var("LIEGEO_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| ParseError::Threads(v.clone()))?;
        liegeo::exec::set_thread_limit(n).map_err(|_| ParseError::Threads(v))?;
    }
    Ok(())
}

/// Report plus the exit code it implies.
fn run(cmd: &Command) -> Result<(RunReport, u8), CommandError> {
    let verdict = |r: RunReport| {
        let code = if r.pass { 0 } else { EXIT_VERIFY };
        (r, code)
    };
    Ok(match cmd {
        Command::Classify { group, residual_tol } => verdict(report::classify(&group.spec()?, *residual_tol)?),
        Command::Verify {
            group,
            field,
            residual_tol,
        } => {
            let spec = group.spec()?;
            let (xi, renorm) = spec::unit_field(field)?;
            verdict(report::verify(&spec, &xi, renorm, *residual_tol))
        }
        Command::Scan {
            group,
            resolution,
            tol,
            match_tol,
        } => {
            let spec = group.spec()?;
            let res = sphere_scan(&Geometry::new(spec.algebra()), &ScanOptions::new(*resolution, *tol))?;
            verdict(report::scan(&spec, &res, *match_tol)?)
        }
        Command::Table {
            which,
            resolution,
            no_scan,
            residual_tol,
            tol,
            match_tol,
        } => {
            if !no_scan && *resolution < 100 {
                return Err(TgError::ResolutionTooSmall(*resolution).into());
            }
            let opts = TableOptions {
                residual_tol: *residual_tol,
                scan_resolution: (!no_scan).then_some(*resolution),
                scan_tol: *tol,
                match_tol: *match_tol,
                ..TableOptions::default()
            };
            let (name, rows) = match which {
                Which::Table1 => ("table1", run_table1(&opts)),
                Which::Theorem22 => ("theorem22", run_theorem22(&opts)),
            };
            verdict(report::table(name, rows, *residual_tol))
        }
        Command::Refine { group, seed, tol } => {
            let spec = group.spec()?;
            let (xi, _) = spec::unit_field(seed)?;
            let (r, converged) = report::refine(&spec, &xi, *tol);
            let code = if converged { 0 } else { EXIT_NONCONVERGENCE };
            (r, code)
        }
    })
}

fn exit_code(e: &CommandError) -> u8 {
    match e {
        CommandError::Tg(TgError::NonConvergence { .. }) => EXIT_NONCONVERGENCE,
        _ => EXIT_PARSE,
    }
}

#[derive(Serialize)]
struct SolutionRow<'a> {
    command: &'a str,
    family: &'a str,
    x1: f64,
    x2: f64,
    x3: f64,
    residual: f64,
    closed_form_residual: Option<f64>,
    parallel: bool,
    geodesic: bool,
    killing: bool,
    almost_contact: bool,
    metric_compatible: bool,
    contact_metric: bool,
    normal: bool,
    sasakian: bool,
    invariant_submanifold: bool,
}

impl<'a> SolutionRow<'a> {
    fn new(
        command: &'a str,
        family: &'a str,
        x: &liegeo::Vec3,
        residual: f64,
        closed: Option<f64>,
        c: &liegeo::contact::StructureReport,
    ) -> Self {
        Self {
            command,
            family,
            x1: x[0],
            x2: x[1],
            x3: x[2],
            residual,
            closed_form_residual: closed,
            parallel: c.parallel,
            geodesic: c.geodesic,
            killing: c.killing,
            almost_contact: c.almost_contact,
            metric_compatible: c.metric_compatible,
            contact_metric: c.contact_metric,
            normal: c.normal,
            sasakian: c.sasakian,
            invariant_submanifold: c.invariant_submanifold,
        }
    }
}

#[derive(Serialize)]
struct ClusterRow {
    shape: String,
    size: usize,
    center1: f64,
    center2: f64,
    center3: f64,
    spread: f64,
    plane_residual: f64,
}

#[derive(Serialize)]
struct TableCsvRow<'a> {
    row: usize,
    group: &'a str,
    condition: &'a str,
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    expected: &'a str,
    computed: &'a str,
    max_residual: f64,
    clusters: Option<usize>,
    extra_clusters: Option<usize>,
    pass: bool,
}

#[derive(Serialize)]
struct RefineRow {
    converged: bool,
    x1: Option<f64>,
    x2: Option<f64>,
    x3: Option<f64>,
    residual: f64,
    iterations: usize,
}

fn write_csv(r: &RunReport, out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(v) = &r.verify {
        w.serialize(SolutionRow::new(
            r.command,
            "",
            &v.field,
            v.residual,
            v.closed_form_residual,
            &v.contact,
        ))?;
    } else if let Some(s) = &r.scan {
        for c in &s.clusters {
            w.serialize(ClusterRow {
                shape: serde_json::to_value(c.shape)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                size: c.size,
                center1: c.center[0],
                center2: c.center[1],
                center3: c.center[2],
                spread: c.spread,
                plane_residual: c.plane_residual,
            })?;
        }
    } else if let Some(t) = &r.table {
        for row in &t.rows {
            w.serialize(TableCsvRow {
                row: row.row,
                group: &row.group,
                condition: &row.condition,
                lambda1: row.lambda[0],
                lambda2: row.lambda[1],
                lambda3: row.lambda[2],
                expected: &row.expected,
                computed: &row.computed,
                max_residual: row.max_residual,
                clusters: row.scan.as_ref().map(|s| s.clusters),
                extra_clusters: row.scan.as_ref().map(|s| s.extra_clusters),
                pass: row.pass,
            })?;
        }
    } else if let Some(f) = &r.refine {
        w.serialize(RefineRow {
            converged: f.converged,
            x1: f.field.map(|x| x[0]),
            x2: f.field.map(|x| x[1]),
            x3: f.field.map(|x| x[2]),
            residual: f.residual,
            iterations: f.iterations,
        })?;
    } else {
        for s in &r.solutions {
            w.serialize(SolutionRow::new(
                r.command,
                &s.family,
                &s.field,
                s.residual,
                s.closed_form_residual,
                &s.contact,
            ))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    if let Err(e) = threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_PARSE);
    }
    let start = Instant::now();
    let (mut report, code) = match run(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let stdout = std::io::stdout();
    let written = match cli.format {
        Format::Json => serde_json::to_writer_pretty(stdout.lock(), &report)
            .map_err(|e| e.to_string())
            .and_then(|_| writeln!(stdout.lock()).map_err(|e| e.to_string())),
        Format::Csv => write_csv(&report, stdout.lock()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::from(code)
}
