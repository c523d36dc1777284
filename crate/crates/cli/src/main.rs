//! `cesaro`: compute kernels, apply operators, run verification suites and
//! trace spectral border curves.

mod input;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cesaro_core::cesaro::Side;
use cesaro_core::gamma::kernel_values;
use cesaro_core::numerics::parse_complex;
use cesaro_core::registry::{OperatorParams, OperatorRegistry, SuiteRegistry};
use cesaro_core::spaces::{self, SpaceParams};
use cesaro_core::spectra::{self, RegionGrid, SpectralCurve, TraceOptions};
use cesaro_core::{weyl, AnalyticSequence, Exponent, C64};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use input::{SequenceInput, SequenceSource};
use output::{indexed_rows, io_err, sink, write_csv, write_json, write_json_line};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<cesaro_core::Error> for CliError {
    fn from(e: cesaro_core::Error) -> Self {
        match e {
            cesaro_core::Error::Parse(m) => CliError::Usage(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

pub fn parse_c64(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "cesaro", version, about = "Generalized Cesàro operators on sequence spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cesàro numbers k^alpha(0..n)
    Kernel(KernelArgs),
    /// Weyl fractional sum or difference of a sequence
    Weyl(WeylArgs),
    /// tau_p^alpha norm of a finite sequence, or membership of a closed-form family
    Norm(NormArgs),
    /// Apply a registered operator to a sequence
    Apply(ApplyArgs),
    /// Run a verification suite and emit one report per check
    Verify(VerifyArgs),
    /// Border curve of the spectrum of C_beta or C_beta*
    Spectrum(SpectrumArgs),
    /// Real- and imaginary-axis crossings of a border curve
    Crossings(CrossingsArgs),
    /// max |w| along the p = inf border curves
    Envelope(EnvelopeArgs),
    /// Write the seven figure datasets as CSV + SVG pairs
    Figures(FiguresArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Jsonl,
    Svg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SideArg {
    Primal,
    Dual,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Primal => Side::Primal,
            SideArg::Dual => Side::Dual,
        }
    }
}

fn require(format: Format, allowed: &[Format]) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(
            format!("format {format:?} is not available for this command").to_lowercase(),
        ))
    }
}

#[derive(Args, Debug)]
struct KernelArgs {
    /// Order, "re" or "re,im"
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    alpha: C64,
    /// Number of values
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeylMode {
    Sum,
    Diff,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WeylRoute {
    Kernel,
    Composed,
}

#[derive(Args, Debug)]
struct WeylArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "diff")]
    mode: WeylMode,
    /// Route for differences: direct k^{-alpha} kernel or W^m W^{-(m-alpha)}
    #[arg(long, value_enum, default_value = "kernel")]
    route: WeylRoute,
    #[command(flatten)]
    input: SequenceInput,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(
    ArgGroup::new("norm_source")
        .required(true)
        .args(["values", "input", "random", "kernel", "geometric", "constant"])
))]
struct NormArgs {
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: Exponent,
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Membership of k^beta
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    kernel: Option<C64>,
    /// Membership of r_lambda(n) = lambda^{-(n+1)}
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    geometric: Option<C64>,
    /// Membership of the constant sequence
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    constant: Option<C64>,
    /// Truncation points for an empirical norm-growth table (closed forms only)
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    /// Operator name (see the error message for the list)
    #[arg(long)]
    op: String,
    /// Evaluate Cesàro operators through the semigroup subordination integral
    #[arg(long, value_parser = ["direct", "subordination"], default_value = "direct")]
    via: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: Exponent,
    #[arg(long, value_parser = parse_c64, default_value = "1", allow_hyphen_values = true)]
    beta: C64,
    #[arg(long, default_value_t = 64)]
    n_out: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    input: SequenceInput,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name or "all"
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct TraceArgs {
    #[arg(long, value_parser = parse_c64, allow_hyphen_values = true)]
    beta: C64,
    #[arg(long, value_parser = parse_exponent, default_value = "2")]
    p: Exponent,
    #[arg(long, value_enum, default_value = "primal")]
    side: SideArg,
    /// Maximum turn angle between consecutive chords (radians)
    #[arg(long)]
    angle_tol: Option<f64>,
    /// Maximum chord length relative to the curve scale
    #[arg(long)]
    chord_tol: Option<f64>,
    /// Stop tracing once |w| falls below this
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
}

impl TraceArgs {
    fn options(&self) -> TraceOptions {
        let mut o = TraceOptions::default();
        if let Some(a) = self.angle_tol {
            o.angle_tol = a;
        }
        if let Some(c) = self.chord_tol {
            o.chord_tol = c;
        }
        if let Some(c) = self.cutoff {
            o.cutoff = c;
        }
        o.t_max = self.t_max.or(o.t_max);
        o
    }
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    trace: TraceArgs,
    /// Sample the image of [0, RE] x [-IM, IM] on an N x N grid instead of the border
    #[arg(long, num_args = 3, value_names = ["RE", "IM", "N"])]
    region: Option<Vec<f64>>,
    /// Draw the unit circle in SVG output
    #[arg(long)]
    unit_circle: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path; SVG output also writes a CSV next to it
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CrossingsArgs {
    #[command(flatten)]
    trace: TraceArgs,
    /// Maximum number of tolerance halvings while the counts settle
    #[arg(long, default_value_t = 3)]
    rounds: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    betas: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    #[arg(long)]
    out_dir: PathBuf,
    /// Only this figure (fig1..fig7)
    #[arg(long)]
    only: Option<String>,
    #[arg(long)]
    unit_circle: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, CliError> {
    match cmd {
        Command::Kernel(a) => kernel(a),
        Command::Weyl(a) => weyl_cmd(a),
        Command::Norm(a) => norm(a),
        Command::Apply(a) => apply(a),
        Command::Verify(a) => return verify(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Crossings(a) => crossings(a),
        Command::Envelope(a) => envelope(a),
        Command::Figures(a) => figures(a),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn kernel(a: KernelArgs) -> Result<(), CliError> {
    require(a.format, &[Format::Csv, Format::Json])?;
    let values = kernel_values(a.alpha, a.n);
    let w = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => write_csv(w, &["n", "re", "im"], indexed_rows(&values)),
        _ => write_json(w, &serde_json::json!({ "alpha": a.alpha, "values": values })),
    }
}

fn weyl_cmd(a: WeylArgs) -> Result<(), CliError> {
    require(a.format, &[Format::Csv, Format::Json])?;
    let f = a.input.load()?;
    let g = match (a.mode, a.route) {
        (WeylMode::Sum, _) => weyl::weyl_sum(&f, a.alpha)?,
        (WeylMode::Diff, WeylRoute::Kernel) => weyl::weyl_diff(&f, a.alpha)?,
        (WeylMode::Diff, WeylRoute::Composed) => weyl::weyl_diff_composed(&f, a.alpha)?,
    };
    let w = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => write_csv(w, &["n", "re", "im"], indexed_rows(g.values())),
        _ => write_json(
            w,
            &serde_json::json!({
                "alpha": a.alpha, "mode": a.mode, "route": a.route,
                "seed": a.input.seed(), "values": g.values(),
            }),
        ),
    }
}

fn norm(a: NormArgs) -> Result<(), CliError> {
    let sp = SpaceParams::new(a.alpha, a.p)?;
    let analytic = match (a.kernel, a.geometric, a.constant) {
        (Some(b), _, _) => Some(AnalyticSequence::kernel(b)),
        (_, Some(l), _) => Some(AnalyticSequence::geometric(l)?),
        (_, _, Some(c)) => Some(AnalyticSequence::constant(c)),
        _ => None,
    };
    let w = sink(a.out.as_deref())?;
    if let Some(seq) = analytic {
        let membership = spaces::membership(&seq, sp)?;
        let table = if a.grid.is_empty() {
            None
        } else {
            Some(spaces::empirical_membership(&seq, sp, &a.grid)?)
        };
        return write_json(
            w,
            &serde_json::json!({ "sequence": seq, "space": sp, "membership": membership, "empirical": table }),
        );
    }
    if !a.grid.is_empty() {
        return Err(CliError::Usage("--grid applies to closed-form sequences only".into()));
    }
    let input = SequenceInput {
        source: SequenceSource {
            values: a.values,
            input: a.input,
            random: a.random,
        },
        seed: a.seed,
    };
    let f = input.load()?;
    let n = spaces::norm(&f, sp);
    write_json(w, &serde_json::json!({ "space": sp, "seed": input.seed(), "norm": n }))
}

fn apply(a: ApplyArgs) -> Result<(), CliError> {
    require(a.format, &[Format::Csv, Format::Json])?;
    let name = match (a.via.as_str(), a.op.as_str()) {
        ("subordination", "cesaro") => "cesaro-subordination".to_string(),
        ("subordination", "cesaro-dual") => "cesaro-dual-subordination".to_string(),
        ("subordination", op) if !op.ends_with("-subordination") => {
            return Err(CliError::Usage(format!("operator '{op}' has no subordination route")))
        }
        (_, op) => op.to_string(),
    };
    let registry = OperatorRegistry::with_defaults();
    let op = registry.get(&name).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = OperatorParams {
        alpha: a.alpha,
        t: a.t,
        p: a.p,
        beta: a.beta,
        n_out: a.n_out,
        tol: a.tol,
    };
    let f = a.input.load()?;
    let r = op.apply(&f, &params)?;
    let w = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => write_csv(w, &["n", "re", "im"], indexed_rows(&r.values)),
        _ => write_json(
            w,
            &serde_json::json!({
                "operator": op.name(), "params": params, "seed": a.input.seed(),
                "values": r.values, "tail": r.tail,
            }),
        ),
    }
}

fn verify(a: VerifyArgs) -> Result<ExitCode, CliError> {
    require(a.format, &[Format::Jsonl, Format::Json])?;
    let registry = SuiteRegistry::with_defaults();
    if a.suite != "all" && !registry.names().contains(&a.suite.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown suite '{}' (known: all, {})",
            a.suite,
            registry.names().join(", ")
        )));
    }
    let checks = registry.run(&a.suite)?;
    let mut w = sink(a.out.as_deref())?;
    match a.format {
        Format::Jsonl => {
            for c in &checks {
                write_json_line(&mut w, c)?;
            }
            w.flush().map_err(|e| CliError::Compute(e.to_string()))?;
        }
        _ => write_json(w, &checks)?,
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
    eprintln!("{} checks, {} failed", checks.len(), failed.len());
    for c in &failed {
        eprintln!(
            "  FAIL {} {} rel_err={:e} tol={:e}",
            c.suite, c.report.identity, c.report.rel_err, c.tolerance
        );
    }
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn curve_rows(curve: &SpectralCurve) -> impl Iterator<Item = Vec<f64>> + '_ {
    curve.samples.iter().map(|&(t, w)| vec![t, w.re, w.im])
}

fn label(beta: C64, p: Exponent) -> String {
    if beta.im == 0.0 {
        format!("beta={} p={p}", beta.re)
    } else {
        format!("beta={}{:+}i p={p}", beta.re, beta.im)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn spectrum(a: SpectrumArgs) -> Result<(), CliError> {
    require(a.format, &[Format::Csv, Format::Json, Format::Svg])?;
    let tr = a.trace;
    let side: Side = tr.side.into();
    if let Some(r) = &a.region {
        require(a.format, &[Format::Csv])?;
        let n = r[2];
        if n < 1.0 || n.fract() != 0.0 {
            return Err(CliError::Usage("region grid size must be a positive integer".into()));
        }
        let grid = RegionGrid {
            re_max: r[0],
            im_max: r[1],
            n_re: n as usize,
            n_im: n as usize,
        };
        let pts = spectra::sample_region(tr.beta, tr.p, side, grid)?;
        let rows = pts.iter().map(|(z, w)| vec![z.re, z.im, w.re, w.im]);
        return write_csv(sink(a.out.as_deref())?, &["z_re", "z_im", "re", "im"], rows);
    }
    let curve = spectra::trace_border(tr.beta, tr.p, side, tr.options())?;
    match a.format {
        Format::Csv => write_csv(sink(a.out.as_deref())?, &["t", "re", "im"], curve_rows(&curve)),
        Format::Json => write_json(sink(a.out.as_deref())?, &curve),
        _ => {
            let out = a.out.ok_or_else(|| CliError::Usage("svg output needs --out".into()))?;
            let csv_path = out.with_extension("csv");
            write_csv(sink(Some(&csv_path))?, &["t", "re", "im"], curve_rows(&curve))?;
            let series = [svg::Series {
                label: format!("{} {side:?}", label(tr.beta, tr.p)).to_lowercase(),
                points: curve.samples.iter().map(|s| s.1).collect(),
            }];
            write_file(&out, &svg::render("border curve", &series, a.unit_circle))
        }
    }
}

fn crossings(a: CrossingsArgs) -> Result<(), CliError> {
    let tr = a.trace;
    let (curve, report) = spectra::stable_crossings(tr.beta, tr.p, tr.side.into(), tr.options(), a.rounds)?;
    write_json(
        sink(a.out.as_deref())?,
        &serde_json::json!({
            "beta": tr.beta, "p": tr.p, "side": Side::from(tr.side), "samples": curve.samples.len(),
            "real_axis": report.real_axis, "imag_axis": report.imag_axis,
        }),
    )
}

fn envelope(a: EnvelopeArgs) -> Result<(), CliError> {
    require(a.format, &[Format::Csv, Format::Json])?;
    if a.betas.iter().any(|&b| !(b > 0.0)) {
        return Err(CliError::Usage("envelope orders must be positive".into()));
    }
    let rows = spectra::envelope_scan(&a.betas, TraceOptions::default())?;
    let w = sink(a.out.as_deref())?;
    match a.format {
        Format::Csv => write_csv(
            w,
            &["beta", "max_abs", "argmax_t", "at_zero_re", "at_zero_im"],
            rows.iter()
                .map(|r| vec![r.beta, r.max_abs, r.argmax_t, r.at_zero.re, r.at_zero.im]),
        ),
        _ => write_json(w, &rows),
    }
}

fn figures(a: FiguresArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&a.out_dir).map_err(|e| io_err(&a.out_dir, e))?;
    let specs: Vec<_> = spectra::figure_specs()
        .into_iter()
        .filter(|s| a.only.as_deref().map_or(true, |o| o == s.name))
        .collect();
    if specs.is_empty() {
        return Err(CliError::Usage(format!(
            "unknown figure '{}'",
            a.only.unwrap_or_default()
        )));
    }
    for spec in specs {
        let mut series = Vec::new();
        let mut rows = Vec::new();
        for &beta in &spec.betas {
            let curve = spectra::trace_border(beta, spec.p, Side::Primal, TraceOptions::default())?;
            rows.extend(
                curve
                    .samples
                    .iter()
                    .map(|&(t, w)| vec![beta.re, beta.im, t, w.re, w.im]),
            );
            series.push(svg::Series {
                label: label(beta, spec.p),
                points: curve.samples.iter().map(|s| s.1).collect(),
            });
        }
        let csv_path = a.out_dir.join(format!("{}.csv", spec.name));
        write_csv(sink(Some(&csv_path))?, &["beta_re", "beta_im", "t", "re", "im"], rows)?;
        let svg_path = a.out_dir.join(format!("{}.svg", spec.name));
        write_file(&svg_path, &svg::render(spec.name, &series, a.unit_circle))?;
        eprintln!("wrote {} and {}", csv_path.display(), svg_path.display());
    }
    Ok(())
}
