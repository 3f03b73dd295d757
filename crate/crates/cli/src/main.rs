//! `grandlp`: grand Lebesgue norms, A-space norms, Fourier transforms,
//! ε-curves and verification suites from the command line.
//!
//! Exit status: 0 success, 1 I/O or other failure, 2 usage error,
//! 3 membership failure, 4 accuracy failure, 5 suite failure.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grand_lebesgue::ap_space::TransformRoute;
use grand_lebesgue::fourier::{DEFAULT_FFT_N, DEFAULT_FFT_R};
use grand_lebesgue::grand_norm::{DEFAULT_GRID, DEFAULT_REFINE};
use grand_lebesgue::quadrature::DEFAULT_TOL;
use grand_lebesgue::report::{DEFAULT_ATOL, DEFAULT_RTOL};
use grand_lebesgue::verify::SUITES;
use grand_lebesgue::{
    ap_norm, epsilon_curve, fourier_analytic, fourier_numeric, grand_norm, prop5_sequence, run_suite, APNormParams,
    Analytic, Error, FourierStrategy, FunctionSpec, GrandNormParams, Variant, WeightSpec,
};

use input::{input_doc, require, InputDoc};
use output::Doc;

pub const SCHEMA_VERSION: u32 = 1;

pub enum CliError {
    Usage(String),
    Io(String),
    Compute(Error),
    SuiteFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
            CliError::SuiteFailed(_) => 5,
            CliError::Compute(e) if e.is_membership_failure() => 3,
            CliError::Compute(e) if e.is_accuracy_failure() => 4,
            CliError::Compute(Error::NoDecayCertificate(_) | Error::Undecided(_)) => 4,
            CliError::Compute(
                Error::InvalidParameter(_)
                | Error::DimensionMismatch { .. }
                | Error::UnknownSuite { .. }
                | Error::Precondition(_),
            ) => 2,
            CliError::Compute(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Io(m) => format!("i/o error: {m}"),
            CliError::SuiteFailed(n) => format!("{n} check(s) failed"),
            CliError::Compute(e) if e.is_membership_failure() => format!("not in the space: {e}"),
            CliError::Compute(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

#[derive(Parser)]
#[command(
    name = "grandlp",
    version,
    about = "Grand Lebesgue norms and weighted Fourier-pair norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// sup_ε φ(ε) of one function.
    GrandNorm(Common),
    /// Time-side plus frequency-side grand norm.
    ApNorm(Common),
    /// φ(ε) on the sweep grid (no refinement).
    Curve(Common),
    /// Numeric transform as CSV (gamma, re, im); echoes the closed form when one exists.
    Fourier(Common),
    /// Run a verification suite. Exit 5 when any check fails.
    Verify {
        /// Suite name; overrides `suite` in the input document.
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Norms of e^{-|t|} restricted to the shrinking sets E_n.
    Prop5 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        eps0: Option<f64>,
    },
    /// Re-read a JSON document written by this tool and print its table.
    Summary {
        #[arg(long)]
        input: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Print the numeric defaults.
    Defaults,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Generalized,
    Equivalent,
    Classical,
    PlainTheta,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Generalized => Variant::Generalized,
            VariantArg::Equivalent => Variant::Equivalent,
            VariantArg::Classical => Variant::Classical,
            VariantArg::PlainTheta => Variant::PlainTheta,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Input document: inline JSON (starting with `{`) or a file path.
    #[arg(long, short)]
    input: Option<String>,
    /// Output file, written atomically. Stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Time-side exponent.
    #[arg(long)]
    p: Option<f64>,
    /// Frequency-side exponent (ap-norm; defaults to p).
    #[arg(long)]
    q: Option<f64>,
    /// Time-side θ.
    #[arg(long)]
    theta1: Option<f64>,
    /// Frequency-side θ (ap-norm; defaults to theta1).
    #[arg(long)]
    theta2: Option<f64>,
    /// Frequency-side weight b as JSON, or `unit` (ap-norm).
    #[arg(long)]
    weight: Option<String>,
    /// Time-side weight a as JSON, or `unit`.
    #[arg(long)]
    grandizer: Option<String>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Number of uniform ε samples in the sweep.
    #[arg(long)]
    eps_grid: Option<usize>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    fft_n: Option<usize>,
    #[arg(long)]
    fft_r: Option<f64>,
    /// Use the numeric transform even when a closed form exists (ap-norm).
    #[arg(long)]
    numeric: bool,
    /// Also write `<output stem>.curve.csv` and `<output stem>.svg` of φ(ε).
    #[arg(long)]
    plot: bool,
}

/// Input document with flags applied on top.
struct Resolved {
    doc: InputDoc,
    common: Common,
}

impl Resolved {
    fn new(common: &Common) -> Result<Self, CliError> {
        let mut doc = input_doc(common.input.as_deref())?;
        let c = common;
        doc.p = c.p.or(doc.p);
        doc.q = c.q.or(doc.q);
        doc.theta = c.theta1.or(doc.theta);
        doc.theta2 = c.theta2.or(doc.theta2);
        doc.variant = c.variant.map(Variant::from).or(doc.variant);
        doc.eps_grid = c.eps_grid.or(doc.eps_grid);
        doc.tol = c.tol.or(doc.tol);
        doc.fft_n = c.fft_n.or(doc.fft_n);
        doc.fft_r = c.fft_r.or(doc.fft_r);
        if let Some(w) = &c.grandizer {
            doc.grandizer = Some(input::weight_flag(w, "grandizer")?);
        }
        if let Some(w) = &c.weight {
            doc.weight = Some(input::weight_flag(w, "weight")?);
        }
        if c.plot && c.output.is_none() {
            return Err(CliError::Usage("--plot needs --output to name the plot files".into()));
        }
        Ok(Resolved {
            doc,
            common: common.clone(),
        })
    }

    fn function(&self) -> Result<FunctionSpec, CliError> {
        let f = require(self.doc.function.clone(), "function", "input")?;
        f.validate()
            .map_err(|e| CliError::Usage(format!("invalid input at `input.function`: {e}")))?;
        Ok(f)
    }

    fn shape(&self, p: f64, theta: f64, weight: WeightSpec) -> GrandNormParams {
        let mut params = GrandNormParams::new(p, theta, weight)
            .grid(self.doc.eps_grid.unwrap_or(DEFAULT_GRID))
            .tolerance(self.doc.tol.unwrap_or(DEFAULT_TOL));
        if let Some(v) = self.doc.variant {
            params = params.variant(v);
        }
        params
    }

    fn time_params(&self) -> Result<GrandNormParams, CliError> {
        let p = require(self.doc.p, "p", "p")?;
        let theta = require(self.doc.theta, "theta", "theta1")?;
        let a = self.doc.grandizer.clone().unwrap_or_else(WeightSpec::unit);
        Ok(self.shape(p, theta, a))
    }

    fn strategy(&self) -> FourierStrategy {
        FourierStrategy {
            prefer_analytic: !self.common.numeric,
            half_width: self.doc.fft_r.unwrap_or(DEFAULT_FFT_R),
            samples: self.doc.fft_n.unwrap_or(DEFAULT_FFT_N),
        }
    }

    fn ap_params(&self) -> Result<APNormParams, CliError> {
        let time = self.time_params()?;
        let q = self.doc.q.unwrap_or(time.p);
        let theta2 = self.doc.theta2.unwrap_or(time.theta);
        let b = self.doc.weight.clone().unwrap_or_else(WeightSpec::unit);
        let freq = self.shape(q, theta2, b);
        Ok(APNormParams::new(time, freq).strategy(self.strategy()))
    }
}

fn emit(doc: &Doc, common: &Common, default: Format) -> Result<(), CliError> {
    let text = match common.format.unwrap_or(default) {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv()?,
        Format::Table => doc.table(),
    };
    match &common.output {
        Some(path) => output::write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_plot(common: &Common, curve: &[grand_lebesgue::CurvePoint], title: &str) -> Result<(), CliError> {
    if !common.plot {
        return Ok(());
    }
    let out = common.output.as_ref().expect("checked in Resolved::new");
    let (csv_path, svg_path) = output::plot_paths(out);
    let rows: Vec<Vec<String>> = curve
        .iter()
        .map(|c| vec![c.eps.to_string(), c.phi.to_string(), c.err.to_string()])
        .collect();
    output::write_atomic(&csv_path, &output::csv_string(&["eps", "phi", "err"], &rows)?)?;
    output::write_atomic(&svg_path, &output::svg_plot(curve, title))
}

fn cmd_grand_norm(common: &Common) -> Result<(), CliError> {
    let r = Resolved::new(common)?;
    let f = r.function()?;
    let params = r.time_params()?;
    let result = grand_norm(&f, &params)?;
    write_plot(
        common,
        &result.curve,
        &format!("phi(eps) for {}, p = {}, theta = {}", f.label(), params.p, params.theta),
    )?;
    let doc = Doc::GrandNorm {
        schema_version: SCHEMA_VERSION,
        function: f,
        params,
        result,
    };
    emit(&doc, common, Format::Json)
}

fn cmd_ap_norm(common: &Common) -> Result<(), CliError> {
    let r = Resolved::new(common)?;
    let f = r.function()?;
    let params = r.ap_params()?;
    let result = ap_norm(&f, &params)?;
    if result.diagnostics.route == TransformRoute::Numeric {
        if let Some(why) = &result.diagnostics.analytic_unsupported {
            eprintln!("note: frequency side taken numerically: {why}");
        }
    }
    write_plot(
        common,
        &result.time.curve,
        &format!("time side phi(eps) for {}", f.label()),
    )?;
    let doc = Doc::ApNorm {
        schema_version: SCHEMA_VERSION,
        function: f,
        params,
        result,
    };
    emit(&doc, common, Format::Json)
}

fn cmd_curve(common: &Common) -> Result<(), CliError> {
    let r = Resolved::new(common)?;
    let f = r.function()?;
    let params = r.time_params()?;
    let curve = epsilon_curve(&f, &params)?;
    write_plot(
        common,
        &curve,
        &format!("phi(eps) for {}, p = {}, theta = {}", f.label(), params.p, params.theta),
    )?;
    let doc = Doc::Curve {
        schema_version: SCHEMA_VERSION,
        function: f,
        params,
        curve,
    };
    emit(&doc, common, Format::Csv)
}

fn cmd_fourier(common: &Common) -> Result<(), CliError> {
    let r = Resolved::new(common)?;
    let f = r.function()?;
    let s = r.strategy();
    let (formula, unsupported) = match fourier_analytic(&f) {
        Analytic::Transform { formula, .. } => (Some(formula), None),
        Analytic::Unsupported { reason } => (None, Some(reason)),
    };
    let transform = fourier_numeric(&f, s.half_width, s.samples)?;
    // Keep stdout pure data when the data goes there.
    let say = |line: String| {
        if common.output.is_some() {
            println!("{line}")
        } else {
            eprintln!("{line}")
        }
    };
    match (&formula, &unsupported) {
        (Some(fm), _) => say(format!("analytic transform: {fm}")),
        (None, Some(reason)) => eprintln!("warning: no analytic transform ({reason}); numeric only"),
        _ => {}
    }
    for w in &transform.warnings {
        eprintln!("warning: {w:?}");
    }
    let doc = Doc::Fourier {
        schema_version: SCHEMA_VERSION,
        function: f,
        formula,
        analytic_unsupported: unsupported,
        transform,
    };
    emit(&doc, common, Format::Csv)
}

fn cmd_verify(suite: Option<&str>, common: &Common) -> Result<(), CliError> {
    let mut config = input::suite_config(common.input.as_deref(), suite)?;
    if let Some(t) = common.tol {
        config.quad_tol = t;
    }
    if let Some(m) = common.eps_grid {
        config.grid_size = m;
    }
    if let Some(n) = common.fft_n {
        config.fourier.samples = n;
    }
    if let Some(r) = common.fft_r {
        config.fourier.half_width = r;
    }
    if common.numeric {
        config.fourier.prefer_analytic = false;
    }
    let report = run_suite(&config)?;
    let failed = report.summary.failed;
    let doc = Doc::Verify {
        schema_version: SCHEMA_VERSION,
        config,
        report,
    };
    emit(&doc, common, Format::Table)?;
    if failed > 0 {
        return Err(CliError::SuiteFailed(failed));
    }
    Ok(())
}

fn cmd_prop5(common: &Common, n_max: Option<u32>, eps0: Option<f64>) -> Result<(), CliError> {
    let r = Resolved::new(common)?;
    let p = r.doc.p.unwrap_or(2.0);
    let theta = r.doc.theta.unwrap_or(1.0);
    let n_max = n_max.or(r.doc.n_max).unwrap_or(16);
    let eps0 = eps0.or(r.doc.eps0);
    let sequence = prop5_sequence(p, theta, n_max, eps0, r.doc.tol.unwrap_or(DEFAULT_TOL))?;
    emit(
        &Doc::Prop5 {
            schema_version: SCHEMA_VERSION,
            sequence,
        },
        common,
        Format::Table,
    )
}

fn cmd_summary(input: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    let value = input::load_value(input)?;
    let doc: Doc = input::parse_at(value, "input")?;
    let version = match &doc {
        Doc::GrandNorm { schema_version, .. }
        | Doc::ApNorm { schema_version, .. }
        | Doc::Curve { schema_version, .. }
        | Doc::Fourier { schema_version, .. }
        | Doc::Verify { schema_version, .. }
        | Doc::Prop5 { schema_version, .. } => *schema_version,
    };
    if version != SCHEMA_VERSION {
        return Err(CliError::Usage(format!("unsupported schema_version {version}")));
    }
    match output {
        Some(p) => output::write_atomic(p, &doc.table()),
        None => {
            print!("{}", doc.table());
            Ok(())
        }
    }
}

fn cmd_defaults() {
    let table = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "eps_grid": DEFAULT_GRID,
        "refine_rounds": DEFAULT_REFINE,
        "tol": DEFAULT_TOL,
        "fft_n": DEFAULT_FFT_N,
        "fft_r": DEFAULT_FFT_R,
        "rtol": DEFAULT_RTOL,
        "atol": DEFAULT_ATOL,
        "suites": SUITES,
    });
    println!("{}", serde_json::to_string_pretty(&table).expect("plain JSON"));
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GrandNorm(c) => cmd_grand_norm(&c),
        Command::ApNorm(c) => cmd_ap_norm(&c),
        Command::Curve(c) => cmd_curve(&c),
        Command::Fourier(c) => cmd_fourier(&c),
        Command::Verify { suite, common } => cmd_verify(suite.as_deref(), &common),
        Command::Prop5 { common, n_max, eps0 } => cmd_prop5(&common, n_max, eps0),
        Command::Summary { input, output } => cmd_summary(&input, output.as_ref()),
        Command::Defaults => {
            cmd_defaults();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("grandlp: {}", e.message());
            if let CliError::Compute(Error::NotInSpace { partial, .. }) = &e {
                if let Some(last) = partial.last() {
                    eprintln!("grandlp: last finite sample eps = {}, phi = {}", last.eps, last.phi);
                }
            }
            ExitCode::from(e.code())
        }
    }
}
