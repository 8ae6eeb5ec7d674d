//! `bpl`: timing models, optimal-depth calculators and simulators for
//! bounded pipelines.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bpl_core::{
    bounded_time, build_table, empirical_depth_sweep, foata_normal_form, generalized_amdahl,
    monte_carlo_mean, optimal_depth_exact, optimal_depth_restart, optimal_depth_simplified,
    pipeline_trace, restart_distribution, restart_time, run_virtual, run_wallclock,
    simplified_distribution, simplified_error_bound, simplified_time, unit_label,
    DepthRecommendation, HazardDistribution, PipelineConfig, RestartModel, SimMode, SimRun,
    SweepMeta, SweepResult, SweepRow, TableFormat, Workload,
};

#[derive(Parser)]
#[command(
    name = "bpl",
    about = "Bounded-pipeline timing models, depth optimization and simulators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Processing-time formulas for a fixed configuration
    Time(TimeArgs),
    /// Optimal pipeline depth for a device count and workload
    Depth(DepthArgs),
    /// Reservation table and concurrency fractions
    Table(TableArgs),
    /// Capped normal form of the pipeline trace
    Foata(FoataArgs),
    /// Run one simulator against the analytic prediction
    Simulate(SimulateArgs),
    /// Time-versus-depth series written as CSV, JSON or SVG
    Sweep(SweepArgs),
}

/// Stage timing shared by every subcommand. Defaults give `h = 1`, so
/// results come out in whole cycles unless a delay is set explicitly.
#[derive(Args, Clone, Copy)]
struct Timing {
    /// Logical delay t_p of the whole operation, in time units
    #[arg(long = "tp", default_value_t = 0.0)]
    logical_delay: f64,
    /// Latch overhead t_o per stage, in time units
    #[arg(long = "to", default_value_t = 1.0)]
    latch_overhead: f64,
    /// Force t_p = 0, t_o = 1 so times are exact cycle counts
    #[arg(long = "unit-cycle")]
    unit_cycle: bool,
}

impl Timing {
    fn resolve(&self) -> (f64, f64) {
        if self.unit_cycle {
            (0.0, 1.0)
        } else {
            (self.logical_delay, self.latch_overhead)
        }
    }
}

#[derive(Args)]
struct TimeArgs {
    /// Pipeline depth p
    #[arg(short = 'p', long = "depth")]
    depth: usize,
    /// Device count q
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    /// Number of input elements n
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    #[command(flatten)]
    timing: Timing,
    /// Also print the single-hazard approximation and its error bound
    #[arg(long)]
    simplified: bool,
    /// Restart probability; adds the restart-model time
    #[arg(long = "b")]
    restart_probability: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DepthModel {
    Exact,
    Simplified,
    Restart,
}

impl DepthModel {
    fn as_str(&self) -> &'static str {
        match self {
            DepthModel::Exact => "exact",
            DepthModel::Simplified => "simplified",
            DepthModel::Restart => "restart",
        }
    }
}

#[derive(Args)]
struct DepthArgs {
    /// Device count q
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    /// Number of input elements n
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    #[command(flatten)]
    timing: Timing,
    /// Which time model to minimize (inferred as restart when --b is set)
    #[arg(long)]
    model: Option<DepthModel>,
    /// Restart probability for the restart model
    #[arg(long = "b")]
    restart_probability: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(short = 'p', long = "depth")]
    depth: usize,
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    /// Output format
    #[arg(long, default_value = "text")]
    format: TableFormat,
}

#[derive(Args)]
struct FoataArgs {
    #[arg(short = 'p', long = "depth")]
    depth: usize,
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    /// Print every block, not just the height
    #[arg(long)]
    blocks: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SimulateMode {
    Virtual,
    Wallclock,
    Montecarlo,
}

impl SimulateMode {
    fn as_str(&self) -> &'static str {
        match self {
            SimulateMode::Virtual => "virtual",
            SimulateMode::Wallclock => "wallclock",
            SimulateMode::Montecarlo => "montecarlo",
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(short = 'p', long = "depth")]
    depth: usize,
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    #[command(flatten)]
    timing: Timing,
    #[arg(long, value_enum)]
    mode: SimulateMode,
    /// Restart probability (montecarlo mode)
    #[arg(long = "b")]
    restart_probability: Option<f64>,
    /// Monte Carlo replications
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// RNG seed; falls back to $BPL_SEED, then 1
    #[arg(long, env = "BPL_SEED", default_value_t = 1)]
    seed: u64,
    /// Milliseconds of real time per model time unit (wallclock mode)
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Write the simulation timeline as CSV to this path
    #[arg(long)]
    timeline: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(short = 'q', long = "devices")]
    devices: usize,
    #[arg(short = 'n', long = "elements")]
    elements: usize,
    #[command(flatten)]
    timing: Timing,
    /// Restart probability; switches the model curve to the restart model
    #[arg(long = "b")]
    restart_probability: Option<f64>,
    /// Depth range, e.g. 1..20 (inclusive) or a single depth
    #[arg(long = "p-range", value_parser = parse_depth_range)]
    depth_range: (usize, usize),
    /// Also simulate each depth and include the measured time
    #[arg(long = "simulate", value_enum)]
    simulate: Option<SimulateMode>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, env = "BPL_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    out: OutputFormat,
    /// Output path; "-" writes to stdout
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: String,
}

fn parse_depth_range(text: &str) -> Result<(usize, usize), String> {
    let parse = |part: &str| {
        part.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad depth `{part}`: {e}"))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse(lo)?;
        let hi = parse(hi.strip_prefix('=').unwrap_or(hi))?;
        if lo == 0 || hi < lo {
            return Err(format!("range `{text}` is empty"));
        }
        Ok((lo, hi))
    } else {
        let depth = parse(text)?;
        if depth == 0 {
            return Err("depth must be at least 1".into());
        }
        Ok((depth, depth))
    }
}

enum CliError {
    /// Bad or inconsistent arguments (exit 2).
    Args(String),
    /// A model precondition was violated (exit 3).
    Model(bpl_core::Error),
    /// A simulation failed to complete (exit 4).
    Simulation(bpl_core::Error),
}

impl From<bpl_core::Error> for CliError {
    fn from(error: bpl_core::Error) -> Self {
        match error {
            bpl_core::Error::WorkerFailure(_) | bpl_core::Error::SimulationTimeout { .. } => {
                CliError::Simulation(error)
            }
            other => CliError::Model(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Args(_) => 2,
            CliError::Model(_) => 3,
            CliError::Simulation(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Args(message) => message.clone(),
            CliError::Model(error) => error.to_string(),
            CliError::Simulation(error) => error.to_string(),
        }
    }
}

fn io_error(error: std::io::Error, path: &str) -> CliError {
    CliError::Args(format!("cannot write `{path}`: {error}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Time(args) => cmd_time(args),
        Command::Depth(args) => cmd_depth(args),
        Command::Table(args) => cmd_table(args),
        Command::Foata(args) => cmd_foata(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message());
            ExitCode::from(error.exit_code())
        }
    }
}

fn restart_model(probability: Option<f64>) -> Result<Option<RestartModel>, CliError> {
    probability
        .map(RestartModel::new)
        .transpose()
        .map_err(CliError::from)
}

fn cmd_time(args: TimeArgs) -> Result<(), CliError> {
    let (tp, to) = args.timing.resolve();
    let cfg = PipelineConfig::new(args.depth, args.devices, tp, to)?;
    let workload = Workload::new(args.elements)?;
    let restart = restart_model(args.restart_probability)?;

    let h = cfg.cycle_time();
    let bounded = bounded_time(&cfg, workload);
    let simplified = args.simplified.then(|| simplified_time(&cfg, workload));
    let gap_bound = args.simplified.then(|| simplified_error_bound(&cfg));
    let restart_value = restart.map(|r| restart_time(&cfg, workload, r));

    if args.json {
        let value = json!({
            "params": params_json(Some(args.depth), args.devices, args.elements, tp, to, args.restart_probability),
            "unit": unit_label(tp, to),
            "h": h,
            "bounded": bounded,
            "simplified": simplified,
            "gap_bound": gap_bound,
            "restart": restart_value,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        let unit = unit_label(tp, to);
        println!("h = {h}");
        println!("bounded = {bounded} {unit}");
        if let (Some(simplified), Some(gap_bound)) = (simplified, gap_bound) {
            println!("simplified = {simplified} {unit}");
            println!("gap bound = {gap_bound} {unit}");
        }
        if let (Some(value), Some(b)) = (restart_value, args.restart_probability) {
            println!("restart (b = {b}) = {value} {unit}");
        }
    }
    Ok(())
}

fn cmd_depth(args: DepthArgs) -> Result<(), CliError> {
    let (tp, to) = args.timing.resolve();
    let workload = Workload::new(args.elements)?;
    let model = match (args.model, args.restart_probability) {
        (Some(DepthModel::Restart), None) => {
            return Err(CliError::Args(
                "--model restart needs a restart probability (--b)".into(),
            ))
        }
        (Some(model), _) => model,
        (None, Some(_)) => DepthModel::Restart,
        (None, None) => DepthModel::Exact,
    };
    let recommendation: DepthRecommendation = match model {
        DepthModel::Exact => optimal_depth_exact(args.devices, workload, tp, to)?,
        DepthModel::Simplified => optimal_depth_simplified(args.devices, workload, tp, to)?,
        DepthModel::Restart => {
            let restart = restart_model(args.restart_probability)?.expect("checked above");
            optimal_depth_restart(args.devices, workload, tp, to, restart)?
        }
    };

    if args.json {
        let value = json!({
            "params": params_json(None, args.devices, args.elements, tp, to, args.restart_probability),
            "model": model.as_str(),
            "real_optimum": recommendation.real_optimum,
            "integer_optimum": recommendation.integer_optimum,
            "predicted_time": recommendation.predicted_time,
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("model = {}", model.as_str());
        println!("real optimum = {}", recommendation.real_optimum);
        println!("integer optimum = {}", recommendation.integer_optimum);
        println!(
            "predicted time = {} {}",
            recommendation.predicted_time,
            unit_label(tp, to)
        );
    }
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    let table = build_table(args.depth, args.devices, args.elements)?;
    match args.format {
        TableFormat::Csv => print!("{}", table.render(TableFormat::Csv)),
        TableFormat::Text => {
            print!("{}", table.render(TableFormat::Text));
            println!("completion = {} cycles", table.completion_cycles());
            let profile = table.concurrency_fractions();
            let parts: Vec<String> = profile
                .level_slots
                .iter()
                .enumerate()
                .map(|(i, &slots)| format!("g_{} = {}/{}", i + 1, slots, profile.total_slots))
                .collect();
            println!("{}", parts.join(", "));
            let weighted = generalized_amdahl(&profile.fractions, profile.total_slots as f64)?;
            println!("concurrency-weighted completion = {weighted} cycles");
        }
    }
    Ok(())
}

fn cmd_foata(args: FoataArgs) -> Result<(), CliError> {
    let trace = pipeline_trace(args.depth, args.elements)?;
    let form = foata_normal_form(&trace, args.devices)?;
    println!("trace = {} ops", trace.ops().len());
    println!("height = {} blocks", form.height());
    if args.blocks {
        print!("{form}");
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let (tp, to) = args.timing.resolve();
    let cfg = PipelineConfig::new(args.depth, args.devices, tp, to)?;
    let workload = Workload::new(args.elements)?;
    let unit = unit_label(tp, to);

    let (simulated, analytic, stderr, run): (f64, f64, Option<f64>, Option<SimRun>) = match args
        .mode
    {
        SimulateMode::Virtual => {
            let run = run_virtual(&cfg, args.elements)?;
            (
                run.total_time,
                bounded_time(&cfg, workload),
                None,
                Some(run),
            )
        }
        SimulateMode::Wallclock => {
            let run = run_wallclock(&cfg, args.elements, args.scale)?;
            (
                run.total_time,
                bounded_time(&cfg, workload),
                None,
                Some(run),
            )
        }
        SimulateMode::Montecarlo => {
            let (dist, analytic) = montecarlo_reference(&cfg, workload, args.restart_probability)?;
            let stats = monte_carlo_mean(args.depth, &dist, args.elements, args.trials, args.seed)?;
            if dist.exceeds_depth(args.depth) {
                eprintln!(
                    "note: hazard types beyond the pipeline depth violate the \
                         always-active premise; results are arithmetic only"
                );
            }
            (stats.mean, analytic, Some(stats.stderr), None)
        }
    };

    if let (Some(path), Some(run)) = (&args.timeline, &run) {
        std::fs::write(path, run.timeline_csv())
            .map_err(|e| io_error(e, &path.display().to_string()))?;
    }

    let difference = simulated - analytic;
    if args.json {
        let value = json!({
            "params": params_json(Some(args.depth), args.devices, args.elements, tp, to, args.restart_probability),
            "mode": args.mode.as_str(),
            "unit": unit,
            "simulated": simulated,
            "analytic": analytic,
            "difference": difference,
            "stderr": stderr,
            "trials": (args.mode == SimulateMode::Montecarlo).then_some(args.trials),
            "seed": (args.mode == SimulateMode::Montecarlo).then_some(args.seed),
            "max_concurrency": run.as_ref().map(|r| r.max_concurrency()),
        });
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("mode = {}", args.mode.as_str());
        if args.mode == SimulateMode::Montecarlo {
            println!("trials = {}", args.trials);
            println!("seed = {}", args.seed);
        }
        println!("simulated = {simulated} {unit}");
        if let Some(stderr) = stderr {
            println!("stderr = {stderr} {unit}");
        }
        println!("analytic = {analytic} {unit}");
        println!("difference = {difference} {unit}");
        if let Some(run) = &run {
            println!(
                "max concurrency = {} (devices = {})",
                run.max_concurrency(),
                args.devices
            );
        }
    }
    Ok(())
}

fn montecarlo_reference(
    cfg: &PipelineConfig,
    workload: Workload,
    restart_probability: Option<f64>,
) -> Result<(HazardDistribution, f64), CliError> {
    match restart_model(restart_probability)? {
        Some(restart) => Ok((
            restart_distribution(cfg.depth, cfg.devices, restart)?,
            restart_time(cfg, workload, restart),
        )),
        None => Ok((
            simplified_distribution(cfg.depth, cfg.devices)?,
            simplified_time(cfg, workload),
        )),
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let (tp, to) = args.timing.resolve();
    let workload = Workload::new(args.elements)?;
    let restart = restart_model(args.restart_probability)?;
    let (lo, hi) = args.depth_range;

    if restart.is_some()
        && matches!(
            args.simulate,
            Some(SimulateMode::Virtual) | Some(SimulateMode::Wallclock)
        )
    {
        return Err(CliError::Args(
            "virtual and wallclock runs model the hazard-free pipeline; \
             drop --b or use --simulate montecarlo"
                .into(),
        ));
    }

    let label = if restart.is_some() {
        "restart"
    } else {
        "bounded"
    };
    let sweep = match args.simulate {
        Some(SimulateMode::Virtual) => empirical_depth_sweep(
            args.devices,
            args.elements,
            tp,
            to,
            lo..=hi,
            SimMode::Virtual,
            args.scale,
        )?,
        Some(SimulateMode::Wallclock) => empirical_depth_sweep(
            args.devices,
            args.elements,
            tp,
            to,
            lo..=hi,
            SimMode::Wallclock,
            args.scale,
        )?,
        other => {
            let mut rows = Vec::new();
            for depth in lo..=hi {
                let cfg = PipelineConfig::new(depth, args.devices, tp, to)?;
                let model_time = match restart {
                    Some(r) => restart_time(&cfg, workload, r),
                    None => bounded_time(&cfg, workload),
                };
                let simulated_time = match other {
                    Some(SimulateMode::Montecarlo) => {
                        let (dist, _) =
                            montecarlo_reference(&cfg, workload, args.restart_probability)?;
                        Some(
                            monte_carlo_mean(depth, &dist, args.elements, args.trials, args.seed)?
                                .mean
                                * cfg.cycle_time(),
                        )
                    }
                    _ => None,
                };
                rows.push(SweepRow {
                    depth,
                    model_time,
                    simulated_time,
                    label: label.to_string(),
                });
            }
            SweepResult::new(
                rows,
                SweepMeta {
                    devices: args.devices,
                    elements: args.elements,
                    logical_delay: tp,
                    latch_overhead: to,
                    restart_probability: args.restart_probability,
                    mode: other.map(|m| m.as_str().to_string()),
                    unit: unit_label(tp, to).to_string(),
                },
            )?
        }
    };

    let rendered = match args.out {
        OutputFormat::Csv => sweep.to_csv(),
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&sweep).unwrap();
            text.push('\n');
            text
        }
        OutputFormat::Svg => sweep.to_svg(),
    };
    if args.output == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(rendered.as_bytes())
            .map_err(|e| io_error(e, "stdout"))?;
    } else {
        std::fs::write(&args.output, rendered).map_err(|e| io_error(e, &args.output))?;
    }
    Ok(())
}

fn params_json(
    depth: Option<usize>,
    devices: usize,
    elements: usize,
    tp: f64,
    to: f64,
    restart_probability: Option<f64>,
) -> serde_json::Value {
    json!({
        "depth": depth,
        "devices": devices,
        "elements": elements,
        "logical_delay": tp,
        "latch_overhead": to,
        "restart_probability": restart_probability,
    })
}
