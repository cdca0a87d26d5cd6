//! The `slowfast` command-line tool.
//!
//! Exit codes: 0 success, 2 usage error, 3 model or admissibility error,
//! 4 numerical failure. `SLOWFAST_THREADS` caps the worker threads used for
//! table rows.

pub mod analysis;
pub mod record;
pub mod spec;
pub mod svg;
pub mod tables;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dimension::{
    box_count_dimension, chirp_segments, chirp_theoretical_dimension, default_segment_scales, BoxSet,
    CodimensionVerdict, Method,
};
use crate::entryexit::{SequenceConfig, DEFAULT_MIN_HEIGHT, DEFAULT_ROOT_TOL};
use crate::error::{Error, Result};
use crate::series::{codimension_from_series, g_from_h1, psi_from_h1, series_invert, SeriesCodimension, TruncatedSeries};

use analysis::Analysis;
use record::RunRecord;
use spec::ModelSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MODEL: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Nine significant digits, exponent notation.
pub fn fmt_sig(v: f64) -> String {
    if v.is_finite() {
        // adding zero turns -0.0 into 0.0
        format!("{:.8e}", v + 0.0)
    } else {
        v.to_string()
    }
}

#[derive(Parser, Debug)]
#[command(name = "slowfast", version, about = "Fractal sequences and codimension of slow-fast contact points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate one fractal sequence and estimate its dimension
    Run(RunArgs),
    /// Reproduce one of the reference tables as CSV
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        /// Also write the CSV to this file
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot the chirp of a sequence and box-count its dimension
    Chirp(ChirpArgs),
    /// Codimension of a Liénard slow-fast Hopf point from h1 by series inversion
    CodimSeries(CodimArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModelKind {
    Lienard,
    Normalform,
    Twostroke,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Auto,
    All,
    Cahen,
    Borel,
    Tailnucleus,
}

#[derive(Args, Debug)]
struct ModelArgs {
    #[arg(long)]
    model: ModelKind,
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Liénard coefficient of x^(2j+3)
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
}

impl ModelArgs {
    fn spec(&self) -> ModelSpec {
        match self.model {
            ModelKind::Lienard => ModelSpec::Lienard { j: self.j, a: self.a },
            ModelKind::Normalform => ModelSpec::NormalForm {
                n: self.n,
                m: self.m,
                j: self.j,
                alpha: self.alpha,
                beta: self.beta,
            },
            ModelKind::Twostroke => ModelSpec::TwoStroke { alpha: self.alpha, delta: self.delta, gamma: self.gamma },
        }
    }
}

#[derive(Args, Debug)]
struct SequenceArgs {
    /// Starting point on the section (for the two-stroke model, the y coordinate)
    #[arg(long, allow_negative_numbers = true)]
    y0: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    iters: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_HEIGHT)]
    min_height: f64,
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    root_tol: f64,
}

impl SequenceArgs {
    fn config(&self, spec: &ModelSpec) -> SequenceConfig {
        SequenceConfig {
            h0: spec.section_height(self.y0),
            max_iterations: self.iters as usize,
            root_tol: self.root_tol,
            min_height: self.min_height,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Write the per-k trace to this CSV file
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the run summary record to this CSV file
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChirpArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seq: SequenceArgs,
    /// Write the chirp plot to this SVG file
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CodimArgs {
    /// Comma-separated coefficients h1_0, h1_1, ...
    #[arg(long, allow_negative_numbers = true)]
    h1: String,
    #[arg(long, default_value_t = crate::series::DEFAULT_ORDER)]
    order: usize,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("cannot write {}: {e}", path.display()))
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(cli.command)),
        Ok(None) => dispatch(cli.command),
        Err(msg) => Err(Failure::Usage(msg)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_model_error() {
                EXIT_MODEL
            } else {
                EXIT_NUMERIC
            }
        }
    }
}

fn thread_pool() -> std::result::Result<Option<rayon::ThreadPool>, String> {
    match std::env::var("SLOWFAST_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("SLOWFAST_THREADS must be a positive integer, got '{v}'"))?;
            if n == 0 {
                return Err("SLOWFAST_THREADS must be positive".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(Some)
                .map_err(|e| e.to_string())
        }
        Err(_) => Ok(None),
    }
}

fn dispatch(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::Run(args) => cmd_run(&args),
        Command::Table { id, out } => cmd_table(id, out.as_deref()),
        Command::Chirp(args) => cmd_chirp(&args),
        Command::CodimSeries(args) => cmd_codim_series(&args),
    }
}

fn cmd_run(args: &RunArgs) -> std::result::Result<(), Failure> {
    let spec = args.model.spec();
    let analysis = Analysis::run(spec, args.seq.config(&spec))?;
    let selected = match args.method {
        MethodArg::Auto | MethodArg::All => analysis.auto_method(),
        MethodArg::Cahen => Method::Cahen,
        MethodArg::Borel => Method::Borel,
        MethodArg::Tailnucleus => Method::TailNucleus,
    };
    let report = analysis.codimension(selected);
    let seq = &analysis.sequence;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "model          {spec}");
    let _ = writeln!(out, "start height   {}", fmt_sig(analysis.config.h0));
    let _ = writeln!(
        out,
        "iterations     {} of {} ({})",
        seq.iterations(),
        analysis.config.max_iterations,
        seq.orientation().map_or("-".to_string(), |o| o.to_string())
    );
    if let Some(reason) = seq.stop_reason() {
        let _ = writeln!(out, "stopped early  {reason}");
    }
    let _ = writeln!(out, "final height   {}", fmt_sig(*seq.heights().last().expect("nonempty")));
    let _ = writeln!(out, "theoretical    {}", fmt_sig(analysis.theoretical()));
    let shown: Vec<Method> = match args.method {
        MethodArg::Auto | MethodArg::All => Method::FORMULAS.to_vec(),
        _ => vec![selected],
    };
    for m in shown {
        let _ = writeln!(out, "{:<14} {}", m.name(), fmt_sig(analysis.value(m)));
    }
    let _ = writeln!(out, "selected       {} = {}", selected, fmt_sig(analysis.value(selected)));
    let verdict = match report.verdict {
        CodimensionVerdict::Finite { j, codimension } => format!("{codimension} (j = {j})"),
        CodimensionVerdict::Infinite => "infinite".into(),
        CodimensionVerdict::Unresolved { .. } => format!("unresolved (nearest j = {})", report.nearest.j),
    };
    let _ = writeln!(out, "codimension    {verdict}, snap distance {}", fmt_sig(report.snap_distance));
    let _ = writeln!(out, "wall time      {:.3} s", analysis.seconds);

    if let Some(path) = &args.trace {
        std::fs::write(path, trace_csv(&analysis)?).map_err(|e| io_failure(path, e))?;
    }
    if let Some(path) = &args.record {
        let text = RunRecord::from_analysis(&analysis).to_csv()?;
        std::fs::write(path, text).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

/// Per-k trace with columns `k, y_k, est_cahen, est_borel, est_tailnucleus`.
pub fn trace_csv(a: &Analysis) -> Result<String> {
    let lookup = |m: Method, k: usize| -> String {
        a.estimate(m)
            .and_then(|e| e.per_k.iter().find(|(kk, _)| *kk == k))
            .map_or(String::new(), |(_, v)| fmt_sig(*v))
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "y_k", "est_cahen", "est_borel", "est_tailnucleus"])
        .map_err(tables::csv_err)?;
    for (i, y) in a.sequence.heights().iter().enumerate() {
        let k = i + 1;
        w.write_record([
            k.to_string(),
            fmt_sig(*y),
            lookup(Method::Cahen, k),
            lookup(Method::Borel, k),
            lookup(Method::TailNucleus, k),
        ])
        .map_err(tables::csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_table(id: u8, out: Option<&Path>) -> std::result::Result<(), Failure> {
    let outcomes = tables::run_table(id)?;
    let text = tables::table_csv(&outcomes)?;
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

fn cmd_chirp(args: &ChirpArgs) -> std::result::Result<(), Failure> {
    let spec = args.model.spec();
    let model = spec.build()?;
    let analysis = Analysis::run(spec, args.seq.config(&spec))?;
    let segments = chirp_segments(model.as_ref(), &analysis.sequence)?;
    let scales = default_segment_scales(&segments)?;
    let estimate = box_count_dimension(BoxSet::Segments(&segments), &scales)?;
    let theory = chirp_theoretical_dimension(spec.contact_order(), spec.j());
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "model          {spec}");
    let _ = writeln!(out, "segments       {}", segments.len());
    let _ = writeln!(
        out,
        "scales         2^-{} .. 2^-{} (fit 2^-{} .. 2^-{})",
        estimate.per_k.first().map_or(0, |p| p.0),
        estimate.per_k.last().map_or(0, |p| p.0),
        estimate.k_window.start(),
        estimate.k_window.end()
    );
    let _ = writeln!(out, "box count      {}", fmt_sig(estimate.final_value));
    let _ = writeln!(out, "theoretical    {}", fmt_sig(theory));
    if let Some(path) = &args.svg {
        let top = analysis.config.h0;
        let curve = model.critical_curve(top, 200)?;
        let svg = svg::chirp_svg(&format!("chirp of {spec}"), &segments, &curve);
        std::fs::write(path, svg).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

fn parse_h1(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    let coeffs: std::result::Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match coeffs {
        Ok(c) if !c.is_empty() && c.iter().all(|v| v.is_finite()) => Ok(c),
        _ => Err(Failure::Usage(format!("--h1 expects a comma-separated list of numbers, got '{text}'"))),
    }
}

/// The Liénard model with `F(x) = x^2 (1 - x h1(x))`, when `h1 = c x^(2j)`.
pub fn paired_lienard(h1: &[f64]) -> Option<ModelSpec> {
    let nonzero: Vec<(usize, f64)> = h1.iter().copied().enumerate().filter(|(_, c)| *c != 0.0).collect();
    match nonzero.as_slice() {
        [(i, c)] if i % 2 == 0 => Some(ModelSpec::Lienard { j: (*i / 2) as u32, a: -c }),
        _ => None,
    }
}

fn cmd_codim_series(args: &CodimArgs) -> std::result::Result<(), Failure> {
    let coeffs = parse_h1(&args.h1)?;
    if args.order < 3 {
        return Err(Failure::Usage("--order must be at least 3".into()));
    }
    let h1 = TruncatedSeries::new(&coeffs, args.order);
    let psi = psi_from_h1(&h1)?;
    let inv = series_invert(&psi)?;
    let g = g_from_h1(&h1)?;
    let verdict = codimension_from_series(&g)?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "h1     = {h1}");
    let _ = writeln!(out, "{:>3}  {:>16}  {:>16}  {:>16}", "i", "psi", "psi_inv", "g");
    for i in 0..=args.order {
        let gi = if i <= g.order() { fmt_sig(g.coeff(i)) } else { String::new() };
        let _ = writeln!(
            out,
            "{:>3}  {:>16}  {:>16}  {:>16}",
            i,
            fmt_sig(psi.coeff(i)),
            fmt_sig(inv.coeff(i)),
            gi
        );
    }
    match verdict {
        SeriesCodimension::Finite { j, alpha, codimension } => {
            let sign = if alpha > 0.0 { "positive" } else { "negative" };
            let _ = writeln!(out, "codimension {codimension} (j = {j}), alpha = {} ({sign})", fmt_sig(alpha));
            match paired_lienard(&coeffs) {
                Some(spec) => {
                    let model = spec.build()?;
                    let h = 1e-3f64.min(0.5 * model.max_height());
                    let i = model.sdi_diagonal(h)?;
                    let agree = (i > 0.0) == (alpha > 0.0);
                    let _ = writeln!(
                        out,
                        "cross-check    I(h,h) = {} at h = {h} in {spec}: sign {}",
                        fmt_sig(i),
                        if agree { "consistent" } else { "INCONSISTENT" }
                    );
                }
                None => {
                    let _ = writeln!(out, "cross-check    skipped (h1 is not a single even monomial)");
                }
            }
        }
        SeriesCodimension::InfiniteUpTo { order } => {
            let _ = writeln!(out, "codimension infinite up to order {order}");
        }
    }
    Ok(())
}
