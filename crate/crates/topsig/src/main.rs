use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use topsig::config::{BootstrapRunConfig, SignatureConfig, SimulateConfig};
use topsig::estimate::BandKind;
use topsig::functional::{EvaluationGrid, KernelSpec, ProjectionWindow, TruncationSpec};
use topsig::simulate::{NoiseModel, PeriodicTemplate, ReparamModel, Seed, StartLaw, VelocityLaw};
use topsig::{plot, validate, Error, PersistenceDiagram, TimeSeries};

/// Topological signatures of periodic-like signals: simulate the
/// reference models, compute sublevel-set persistence diagrams and
/// windowed signature curves, attach bootstrap confidence bands, render
/// plots and run the validation suite.
#[derive(Parser)]
#[command(name = "topsig", version, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an observation of the periodic model and write it as CSV.
    Simulate(SimulateArgs),
    /// Compute the sublevel-set persistence diagram of a signal.
    Diagram(DiagramArgs),
    /// Compute the windowed empirical signature curve of a signal.
    Signature(SignatureArgs),
    /// Signature with moving-block-bootstrap confidence bands.
    Bootstrap(BootstrapArgs),
    /// Run the validation checks and write a report.
    Validate(ValidateArgs),
    /// Render a curve or estimate JSON artifact as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TemplateKind {
    /// theta-scaled sine + triangle mixture over a 5 sin(4 pi t) carrier
    SineTriangle,
    /// pure sine with an integer number of oscillations per period
    Sine,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReparamKind {
    /// velocities form a Markov chain with a truncated Gaussian kernel
    Markov,
    /// independent uniform velocities
    Iid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Gamma0Kind {
    /// gamma_0 uniform on [0, 1) (stationary fractional part)
    Uniform,
    /// fixed gamma_0 (see --gamma0-value)
    Fixed,
}

#[derive(Args)]
struct SimulateArgs {
    /// Full simulation config as JSON; overrides the individual flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sine-triangle")]
    template: TemplateKind,
    /// Scale of the first harmonic and triangle component.
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Oscillations per period for --template sine.
    #[arg(long, default_value_t = 1)]
    frequency: u32,
    #[arg(long, value_enum, default_value = "markov")]
    reparam: ReparamKind,
    #[arg(long, default_value_t = 0.5)]
    v_min: f64,
    #[arg(long, default_value_t = 1.5)]
    v_max: f64,
    /// Scale of the truncated Gaussian velocity transitions.
    #[arg(long, default_value_t = 0.2)]
    eta: f64,
    #[arg(long, value_enum, default_value = "uniform")]
    gamma0: Gamma0Kind,
    #[arg(long, default_value_t = 0.0)]
    gamma0_value: f64,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    /// Noise correlation time in seconds.
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    /// Observation length in seconds.
    #[arg(long, default_value_t = 30.0)]
    duration: f64,
    /// Sampling rate in Hz.
    #[arg(long, default_value_t = 50.0)]
    rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Metadata JSON path (default: <out>.meta.json).
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct DiagramArgs {
    /// Input signal CSV (header `t,value`).
    #[arg(long)]
    input: PathBuf,
    /// Output diagram JSON path.
    #[arg(long)]
    out: PathBuf,
}

/// Signature parameters shared by `signature` and `bootstrap`.
#[derive(Args)]
struct SignatureFlags {
    /// Input signal CSV (header `t,value`).
    #[arg(long)]
    input: PathBuf,
    /// Window length in samples (M).
    #[arg(long, default_value_t = 150)]
    window: usize,
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Persistence truncation.
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    /// Persistence power.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value = "silhouette")]
    kernel: KernelKind,
    #[arg(long, default_value_t = -9.0)]
    proj_lower: f64,
    #[arg(long, default_value_t = 9.0)]
    proj_upper: f64,
    /// Bandwidth of the persistence-image kernel.
    #[arg(long, default_value_t = 1.0)]
    kernel_sigma: f64,
    /// Taper exponent of the persistence-image kernel (1 < r <= 2.5).
    #[arg(long, default_value_t = 1.1)]
    kernel_r: f64,
    /// Grid nodes per axis (default: 512 for curves, 64 for images).
    #[arg(long)]
    grid_count: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelKind {
    Silhouette,
    Image,
}

#[derive(Args)]
struct SignatureArgs {
    #[command(flatten)]
    flags: SignatureFlags,
    /// Output curve JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV export of the curve.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BootstrapArgs {
    #[command(flatten)]
    flags: SignatureFlags,
    /// Bootstrap replicate count (B).
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// Block length (L); defaults to num_windows^(2/5).
    #[arg(long)]
    block_len: Option<usize>,
    /// Two-sided band level.
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "pointwise")]
    band: BandArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output estimate JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV export `t,mean,lower,upper`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BandArg {
    Pointwise,
    Uniform,
}

#[derive(Args)]
struct ValidateArgs {
    /// Check name or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Curve or estimate JSON artifact.
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                Error::InvalidInput(_) => EXIT_USAGE,
                Error::Parse { .. } | Error::Io(_) | Error::Json(_) => EXIT_IO,
                Error::Numeric(_) => EXIT_NUMERIC,
            })
        }
    }
}

/// SIG_THREADS caps the worker count; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(value) = std::env::var("SIG_THREADS") {
        if let Ok(n) = value.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Diagram(args) => cmd_diagram(args),
        Command::Signature(args) => cmd_signature(args),
        Command::Bootstrap(args) => cmd_bootstrap(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text)?;
    Ok(())
}

fn write_json_doc(path: &Path, value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, Error> {
    let config = match &args.config {
        Some(path) => serde_json::from_str::<SimulateConfig>(&std::fs::read_to_string(path)?)?,
        None => {
            let template = match args.template {
                TemplateKind::SineTriangle => PeriodicTemplate::sine_triangle_mix(args.theta)?,
                TemplateKind::Sine => PeriodicTemplate::sine(args.frequency)?,
            };
            let law = match args.reparam {
                ReparamKind::Markov => VelocityLaw::MarkovTruncGauss {
                    v_min: args.v_min,
                    v_max: args.v_max,
                    eta: args.eta,
                },
                ReparamKind::Iid => VelocityLaw::IidUniform { v_min: args.v_min, v_max: args.v_max },
            };
            let start = match args.gamma0 {
                Gamma0Kind::Uniform => StartLaw::UniformFrac,
                Gamma0Kind::Fixed => StartLaw::Fixed { value: args.gamma0_value },
            };
            SimulateConfig {
                template,
                reparam: ReparamModel { law, h: 1.0 / args.rate, start },
                noise: NoiseModel { sigma: args.sigma, tau: args.tau },
                duration: args.duration,
                rate: args.rate,
                seed: Seed(args.seed),
            }
        }
    };

    let series = config.run()?;
    series.write_csv_path(&args.out)?;

    let meta_path = args
        .meta
        .unwrap_or_else(|| append_extension(&args.out, "meta.json"));
    let meta = serde_json::json!({
        "config": config,
        "samples": series.len(),
        "dt": series.dt(),
    });
    write_json_doc(&meta_path, &meta)?;
    Ok(ExitCode::SUCCESS)
}

fn append_extension(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

fn cmd_diagram(args: DiagramArgs) -> Result<ExitCode, Error> {
    let series = TimeSeries::read_csv_path(&args.input)?;
    let diagram = topsig::sublevel_diagram(&series);
    let doc = serde_json::json!({
        "points": diagram.points().iter().map(|p| vec![p.birth, p.death]).collect::<Vec<_>>(),
        "config": {"input": args.input},
    });
    write_json_doc(&args.out, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn signature_config(flags: &SignatureFlags) -> Result<SignatureConfig, Error> {
    let window = ProjectionWindow::new(flags.proj_lower, flags.proj_upper)?;
    let kernel = match flags.kernel {
        KernelKind::Silhouette => KernelSpec::silhouette(window),
        KernelKind::Image => {
            KernelSpec::persistence_image(window, flags.kernel_sigma, flags.kernel_r)?
        }
    };
    let grid = match flags.grid_count {
        None => None,
        Some(count) => {
            let default = kernel.default_grid();
            let axes = default
                .axes
                .iter()
                .map(|a| topsig::GridAxis { start: a.start, stop: a.stop, count })
                .collect();
            Some(EvaluationGrid::new(axes)?)
        }
    };
    Ok(SignatureConfig {
        window_len: flags.window,
        stride: flags.stride,
        truncation: TruncationSpec::new(flags.epsilon, flags.p)?,
        kernel,
        grid,
    })
}

fn cmd_signature(args: SignatureArgs) -> Result<ExitCode, Error> {
    let config = signature_config(&args.flags)?;
    let series = TimeSeries::read_csv_path(&args.flags.input)?;
    let curve = config.run(&series)?;

    let doc = serde_json::json!({
        "grid": curve.grid,
        "values": curve.values,
        "config": {"signature": config, "input": args.flags.input},
    });
    write_json_doc(&args.out, &doc)?;
    if let Some(csv) = &args.csv {
        let file = std::fs::File::create(csv)?;
        curve.write_csv(file)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bootstrap(args: BootstrapArgs) -> Result<ExitCode, Error> {
    let config = BootstrapRunConfig {
        signature: signature_config(&args.flags)?,
        replicates: args.replicates,
        block_len: args.block_len,
        alpha: args.alpha,
        band: match args.band {
            BandArg::Pointwise => BandKind::Pointwise,
            BandArg::Uniform => BandKind::Uniform,
        },
        seed: Seed(args.seed),
    };
    let series = TimeSeries::read_csv_path(&args.flags.input)?;
    let estimate = config.run(&series)?;

    let doc = serde_json::json!({
        "grid": estimate.grid,
        "mean": estimate.mean,
        "lower": estimate.lower,
        "upper": estimate.upper,
        "level": estimate.level,
        "band_kind": estimate.band_kind,
        "replicates": estimate.replicates,
        "config": {
            "bootstrap": config,
            "input": args.flags.input,
            "resolved_block_len": config.resolve_block_len(&series)?,
        },
    });
    write_json_doc(&args.out, &doc)?;
    if let Some(csv) = &args.csv {
        let file = std::fs::File::create(csv)?;
        estimate.write_csv(file)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let reports = validate::run_suite(&args.suite, Seed(args.seed))?;
    let doc = serde_json::to_value(&reports)?;
    match &args.out {
        Some(path) => write_json_doc(path, &doc)?,
        None => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    let mut all_passed = true;
    for report in &reports {
        let status = if report.passed() { "pass" } else { "FAIL" };
        eprintln!(
            "check {:<20} {} ({} trials, {} violations, worst margin {:+.3e})",
            report.check_id, status, report.trials, report.violations, report.worst_margin
        );
        all_passed &= report.passed();
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CHECK_FAILURE)
    })
}

fn cmd_plot(args: PlotArgs) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(&args.input)?;
    let doc: serde_json::Value = serde_json::from_str(&text)?;

    let svg = if doc.get("mean").is_some() {
        let estimate = topsig::SignatureEstimate {
            grid: serde_json::from_value(doc["grid"].clone())?,
            mean: serde_json::from_value(doc["mean"].clone())?,
            lower: serde_json::from_value(doc["lower"].clone())?,
            upper: serde_json::from_value(doc["upper"].clone())?,
            level: doc["level"].as_f64().unwrap_or(0.0),
            band_kind: serde_json::from_value(doc["band_kind"].clone())
                .unwrap_or(BandKind::Pointwise),
            replicates: doc["replicates"].as_u64().unwrap_or(0) as usize,
        };
        plot::render_estimate(&estimate)
    } else if doc.get("values").is_some() {
        let curve = topsig::FunctionalCurve {
            grid: serde_json::from_value(doc["grid"].clone())?,
            values: serde_json::from_value(doc["values"].clone())?,
        };
        plot::render_curve(&curve)
    } else if doc.get("points").is_some() {
        let diagram = PersistenceDiagram::read_json(text.as_bytes())?;
        return Err(Error::invalid(format!(
            "plotting persistence diagrams ({} points) is not supported; \
             plot a signature curve or estimate instead",
            diagram.len()
        )));
    } else {
        return Err(Error::invalid(
            "input JSON is neither a curve ({grid, values}) nor an estimate ({grid, mean, ...})",
        ));
    };
    write_text(&args.out, &svg)?;
    Ok(ExitCode::SUCCESS)
}
