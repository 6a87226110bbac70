//! The `distortion` command line.
//!
//! Exit codes: 0 success, 1 bad configuration, 2 budget or convergence
//! limits, 3 a certificate or step check failed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::coarse::{fragmentation_path_c1, fragmentation_path_c1ac};
use crate::constructions::{figure_csv, figure_svg, prop2_pair, rotation_sweep, theorem3_build_with, Theorem3Certificate, Theorem3Options};
use crate::diffeo::{DiffeoMap, Domain, Mobius};
use crate::distortion::{asymptotic_distortion_with, classify_c1, default_schedule, periodic::MAX_DENOMINATOR};
use crate::error::Error;
use crate::grid::DEFAULT_SAMPLES;
use crate::metrics::{distance_to_identity, MetricId, MetricOptions};
use crate::output::{line_plot_svg, PlotSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

const SCHEMA_PREFIX: &str = "circle-distortion";
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "distortion", version, about = "Distortion of circle and interval diffeomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Distort,
    Certify,
    Classify,
    Sweep,
    Fragment,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report d(fⁿ, e)/n along n = 1, 2, 4, ..., n_max
    Distort(RunArgs),
    /// Build the K-family bump map, print its certificate and the f'' figure
    Certify(RunArgs),
    /// C¹ classification from the rotation number and periodic points
    Classify(RunArgs),
    /// Rotation numbers of R_θ ∘ f for θ on [0, theta] with `grid` points
    Sweep(RunArgs),
    /// Factor f into N steps each within epsilon of the identity
    Fragment(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Example {
    /// Rigid rotation by --theta
    Rotation,
    /// Hyperbolic map r ↦ r/2
    Mobius,
    /// Parabolic map r ↦ r/(r+1)
    Prop2,
    /// Bump map with parameters --K and --m
    Theorem3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Named example map
    #[arg(long, value_enum, conflicts_with = "map_json")]
    pub example: Option<Example>,
    /// Map descriptor as inline JSON, or @path to a JSON file
    #[arg(long)]
    pub map_json: Option<String>,
    /// Metric [default: c1-circle for circle maps, c1-interval for interval maps; c1ac for fragment]
    #[arg(long)]
    pub metric: Option<MetricId>,
    /// Largest iterate count for distort
    #[arg(long, default_value_t = 256)]
    pub n_max: u64,
    /// Sup-scan points (distort), table samples (certify) or θ points (sweep)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Quadrature tolerance for integral metrics
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Bump height K in (0, 2]
    #[arg(long = "K", default_value_t = 2.0)]
    #[serde(rename = "K")]
    pub k: f64,
    /// Bump exponent m [default: smallest passing m = 4, 8, 16, ...]
    #[arg(long)]
    pub m: Option<u32>,
    /// Step size for fragment
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Rotation angle (rotation example) or sweep range [default: 0.25, sweep 0.05]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Output file [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded(_)
            | Error::NonConvergentTail { .. }
            | Error::ConvergenceFailure { .. }
            | Error::QuadratureFailure(_) => EXIT_BUDGET,
            Error::ConditionFailure { .. }
            | Error::StepBoundViolated { .. }
            | Error::SignConditionViolated { .. }
            | Error::OverlappingOrbit { .. } => EXIT_CERTIFICATE,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (kind, args) = match cli.command {
        Command::Distort(a) => (CommandKind::Distort, a),
        Command::Certify(a) => (CommandKind::Certify, a),
        Command::Classify(a) => (CommandKind::Classify, a),
        Command::Sweep(a) => (CommandKind::Sweep, a),
        Command::Fragment(a) => (CommandKind::Fragment, a),
    };
    match execute(kind, &args) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Resolved inputs echoed into every output.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: CommandKind,
    #[serde(flatten)]
    args: &'a RunArgs,
    metric_resolved: Option<MetricId>,
    grid_resolved: Option<usize>,
    theta_resolved: Option<f64>,
}

fn execute(kind: CommandKind, args: &RunArgs) -> CliResult<i32> {
    if args.format == Format::Svg && matches!(kind, CommandKind::Classify | CommandKind::Fragment) {
        return Err(config_error("--format svg is available for distort, certify and sweep"));
    }
    if kind == CommandKind::Certify {
        return cmd_certify(args);
    }
    let map = resolve_map(args)?;
    match kind {
        CommandKind::Distort => cmd_distort(args, &map),
        CommandKind::Classify => cmd_classify(args, &map),
        CommandKind::Sweep => cmd_sweep(args, &map),
        CommandKind::Fragment => cmd_fragment(args, &map),
        CommandKind::Certify => unreachable!(),
    }
}

fn resolve_map(args: &RunArgs) -> CliResult<DiffeoMap> {
    if let Some(src) = &args.map_json {
        let text = match src.strip_prefix('@') {
            Some(path) => fs::read_to_string(path).map_err(|e| config_error(format!("--map-json: cannot read {path}: {e}")))?,
            None => src.clone(),
        };
        return DiffeoMap::from_json(&text).map_err(|e| config_error(format!("--map-json: {e}")));
    }
    let Some(example) = args.example else {
        return Err(config_error("one of --example or --map-json is required"));
    };
    Ok(match example {
        Example::Rotation => DiffeoMap::rotation(args.theta.unwrap_or(0.25)),
        Example::Mobius => DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0).expect("positive determinant")),
        Example::Prop2 => prop2_pair().f,
        Example::Theorem3 => build_theorem3(args, &Theorem3Options::default())?.0,
    })
}

fn build_theorem3(args: &RunArgs, opts: &Theorem3Options) -> CliResult<(DiffeoMap, Theorem3Certificate)> {
    theorem3_build_with(args.k, args.m, opts).map_err(|e| match e {
        Error::BadK(_) => config_error(format!("--K: {e}")),
        Error::InvalidArgument(_) if args.m.is_some() => config_error(format!("--m: {e}")),
        other => other.into(),
    })
}

fn theorem3_options(args: &RunArgs) -> CliResult<Theorem3Options> {
    let samples = args.grid.unwrap_or(DEFAULT_SAMPLES);
    if !samples.is_power_of_two() || samples < 16 {
        return Err(config_error(format!("--grid must be a power of two >= 16 for table samples, got {samples}")));
    }
    Ok(Theorem3Options {
        samples,
        ..Default::default()
    })
}

fn metric_for(args: &RunArgs, map: &DiffeoMap) -> MetricId {
    args.metric.unwrap_or(match map.domain() {
        Domain::Circle => MetricId::C1Circle,
        Domain::Interval => MetricId::C1Interval,
    })
}

fn metric_options(args: &RunArgs) -> CliResult<MetricOptions> {
    let mut opts = MetricOptions::default();
    if let Some(g) = args.grid {
        if g < 16 {
            return Err(config_error(format!("--grid must be at least 16, got {g}")));
        }
        opts.sup.points = g;
    }
    if !(args.tol > 0.0) {
        return Err(config_error(format!("--tol must be positive, got {}", args.tol)));
    }
    opts.quad_tol = args.tol;
    Ok(opts)
}

fn envelope(kind: &str, config: &RunConfig, hash: &str, result: Value) -> Value {
    json!({
        "schema": format!("{SCHEMA_PREFIX}/{kind}/v{SCHEMA_VERSION}"),
        "config": config,
        "descriptor_hash": hash,
        "result": result,
    })
}

/// `#`-prefixed metadata lines for CSV output.
fn csv_preamble(kind: &str, config: &RunConfig, hash: &str) -> String {
    format!(
        "# schema={SCHEMA_PREFIX}/{kind}/v{SCHEMA_VERSION}\n# config={}\n# descriptor_hash={hash}\n",
        serde_json::to_string(config).expect("config serializes")
    )
}

fn svg_comment(config: &RunConfig, hash: &str) -> String {
    let cfg = serde_json::to_string(config).expect("config serializes").replace("--", "- -");
    format!("<!-- config={cfg} descriptor_hash={hash} -->\n")
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| config_error(format!("--out: cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| config_error(format!("stdout: {e}")))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn cmd_distort(args: &RunArgs, map: &DiffeoMap) -> CliResult<i32> {
    let metric = metric_for(args, map);
    let opts = metric_options(args)?;
    if args.n_max == 0 {
        return Err(config_error("--n-max must be positive"));
    }
    let report = asymptotic_distortion_with(map, metric, &default_schedule(args.n_max), &opts)?;
    let config = RunConfig {
        command: CommandKind::Distort,
        args,
        metric_resolved: Some(metric),
        grid_resolved: Some(opts.sup.points),
        theta_resolved: None,
    };
    let hash = &report.descriptor_hash;
    let text = match args.format {
        Format::Json => pretty(&envelope("distortion-report", &config, hash, serde_json::to_value(&report).unwrap())),
        Format::Csv => csv_preamble("distortion-report", &config, hash) + &report.to_csv(),
        Format::Svg => {
            let xs: Vec<f64> = report.schedule.iter().map(|&n| (n as f64).log2()).collect();
            svg_comment(&config, hash)
                + &line_plot_svg(
                    &format!("d(fⁿ, e)/n, metric {metric}"),
                    "log₂ n",
                    "ratio",
                    &[
                        PlotSeries { label: "ratio".into(), xs: xs.clone(), ys: report.ratios.clone() },
                        PlotSeries { label: "running inf".into(), xs, ys: report.running_inf.clone() },
                    ],
                )
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_certify(args: &RunArgs) -> CliResult<i32> {
    let opts = theorem3_options(args)?;
    let (map, cert) = build_theorem3(args, &opts)?;
    let d1ac = distance_to_identity(MetricId::C1AC, &map, &MetricOptions::default())?.value;
    let hash = map.descriptor_hash();
    let config = RunConfig {
        command: CommandKind::Certify,
        args,
        metric_resolved: None,
        grid_resolved: Some(opts.samples),
        theta_resolved: None,
    };
    let profile = crate::diffeo::BumpProfile::new(cert.k, cert.m)?;
    let c = &cert.conditions;
    // f(p) > 1 - p is reported but never gates: it cannot hold for any K ≤ 2
    let accepted = c.gating() && c.int_bound_ok && c.sup_bound_ok && c.positive_lower_bound;
    let result = json!({"certificate": cert, "d1ac_to_identity": d1ac, "accepted": accepted});
    let text = match args.format {
        Format::Json => pretty(&envelope("theorem3-certificate", &config, &hash, result)),
        Format::Csv => csv_preamble("theorem3-figure", &config, &hash) + &figure_csv(&profile),
        Format::Svg => svg_comment(&config, &hash) + &figure_svg(&profile),
    };
    emit(args.out.as_deref(), &text)?;
    if let (Some(out), Format::Json) = (&args.out, args.format) {
        let stem = out.with_extension("");
        emit(Some(&stem.with_extension("figure.csv")), &(csv_preamble("theorem3-figure", &config, &hash) + &figure_csv(&profile)))?;
        emit(Some(&stem.with_extension("figure.svg")), &(svg_comment(&config, &hash) + &figure_svg(&profile)))?;
    }
    if !accepted {
        eprintln!("certificate not accepted: {:?}", cert.conditions);
        return Ok(EXIT_CERTIFICATE);
    }
    Ok(EXIT_OK)
}

fn cmd_classify(args: &RunArgs, map: &DiffeoMap) -> CliResult<i32> {
    let class = classify_c1(map, MAX_DENOMINATOR)?;
    let hash = map.descriptor_hash();
    let config = RunConfig {
        command: CommandKind::Classify,
        args,
        metric_resolved: None,
        grid_resolved: None,
        theta_resolved: None,
    };
    let text = match args.format {
        Format::Json => pretty(&envelope("c1-classification", &config, &hash, serde_json::to_value(&class).unwrap())),
        Format::Csv => {
            let w = class.witness;
            let rational = class.rotation.rational.map(|r| r.to_string()).unwrap_or_default();
            format!(
                "{}verdict,rotation,rational,witness_x,witness_period,witness_multiplier\n{:?},{},{},{},{},{}\n",
                csv_preamble("c1-classification", &config, &hash),
                class.verdict,
                class.rotation.estimate,
                rational,
                w.map(|p| p.x.to_string()).unwrap_or_default(),
                w.map(|p| p.period.to_string()).unwrap_or_default(),
                w.map(|p| p.multiplier.to_string()).unwrap_or_default(),
            )
        }
        Format::Svg => unreachable!(),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &RunArgs, map: &DiffeoMap) -> CliResult<i32> {
    let theta_max = args.theta.filter(|_| args.example != Some(Example::Rotation)).unwrap_or(0.05);
    let points = args.grid.unwrap_or(51);
    if points < 2 {
        return Err(config_error("--grid must be at least 2 for a sweep"));
    }
    let thetas: Vec<f64> = (0..points).map(|j| theta_max * j as f64 / (points - 1) as f64).collect();
    let sweep = rotation_sweep(map, &thetas)?;
    let hash = map.descriptor_hash();
    let config = RunConfig {
        command: CommandKind::Sweep,
        args,
        metric_resolved: None,
        grid_resolved: Some(points),
        theta_resolved: Some(theta_max),
    };
    let text = match args.format {
        Format::Json => pretty(&envelope("rotation-sweep", &config, &hash, serde_json::to_value(&sweep).unwrap())),
        Format::Csv => csv_preamble("rotation-sweep", &config, &hash) + &sweep.to_csv(),
        Format::Svg => {
            let xs = sweep.rows.iter().map(|r| r.theta).collect();
            let ys = sweep.rows.iter().map(|r| r.rotation).collect();
            svg_comment(&config, &hash)
                + &line_plot_svg("rot(R_θ ∘ f)", "θ", "rotation number", &[PlotSeries { label: "rot".into(), xs, ys }])
        }
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_fragment(args: &RunArgs, map: &DiffeoMap) -> CliResult<i32> {
    let metric = args.metric.unwrap_or(MetricId::C1AC);
    let path = match metric {
        MetricId::C1AC => fragmentation_path_c1ac(map, args.epsilon)?,
        MetricId::C1Circle | MetricId::C1Interval => fragmentation_path_c1(map, args.epsilon)?,
        other => return Err(config_error(format!("--metric {other} has no fragmentation path; use c1ac, c1-circle or c1-interval"))),
    };
    let hash = map.descriptor_hash();
    let config = RunConfig {
        command: CommandKind::Fragment,
        args,
        metric_resolved: Some(metric),
        grid_resolved: None,
        theta_resolved: None,
    };
    let text = match args.format {
        Format::Json => pretty(&envelope("fragmentation-path", &config, &hash, serde_json::to_value(&path).unwrap())),
        Format::Csv => {
            let mut s = csv_preamble("fragmentation-path", &config, &hash);
            s.push_str(&format!("# N={} epsilon={} M={} residual={:e}\n", path.n, path.epsilon, path.m, path.residual));
            s.push_str("i,step_hash,distance\n");
            for (i, (h, d)) in path.steps.iter().zip(&path.step_distances).enumerate() {
                s.push_str(&format!("{},{h},{d:e}\n", i + 1));
            }
            s
        }
        Format::Svg => unreachable!(),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}
