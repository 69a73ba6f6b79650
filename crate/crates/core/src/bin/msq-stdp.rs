use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use msq_stdp::harness::io::{emit_characterization, emit_frames, emit_train};
use msq_stdp::harness::{
    emit_csv, read_sigma_file, run_experiment, EngineSelection, ExperimentConfig, ParameterSet,
    Sweep,
};
use msq_stdp::protocols::DEFAULT_REPETITIONS;
use msq_stdp::{
    run_circuit, MemristiveSynapse, Polarity, Protocol, ProtocolSpec, Result, TripletVariant,
};

#[derive(Parser)]
#[command(
    name = "msq-stdp",
    version,
    about = "Triplet STDP: algorithmic model vs. quantized memristive circuit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a protocol through one or both engines and write a result CSV.
    Run(RunArgs),
    /// Apply identical programming pulses to a synapse and write the weight ramp.
    Characterize(CharacterizeArgs),
    /// Print the calibrated circuit constants for a parameter set.
    Calibrate {
        #[arg(long, default_value = "hippocampal")]
        params: String,
    },
    /// Run a single protocol point through the circuit and dump per-frame signals.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolKind {
    Pairing,
    Triplet,
    Quadruplet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Model,
    Circuit,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    PrePostPre,
    PostPrePost,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    Potentiate,
    Depress,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, value_enum)]
    protocol: ProtocolKind,
    /// Named parameter set (visual-cortex, hippocampal) or a TOML file.
    #[arg(long, default_value = "hippocampal")]
    params: String,
    /// Repetition frequency, Hz.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    /// Pairing interval, ms; positive means post after pre.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    dt: f64,
    #[arg(long, value_enum, default_value = "pre-post-pre")]
    variant: Variant,
    #[arg(long, default_value_t = 10.0)]
    dt1: f64,
    #[arg(long, default_value_t = 10.0)]
    dt2: f64,
    /// Quadruplet pair separation, ms.
    #[arg(long = "t", default_value_t = 20.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    repetitions: usize,
}

impl ProtocolArgs {
    fn spec(&self) -> ProtocolSpec {
        let protocol = match self.protocol {
            ProtocolKind::Pairing => Protocol::Pairing { dt_ms: self.dt },
            ProtocolKind::Triplet => Protocol::Triplet {
                variant: match self.variant {
                    Variant::PrePostPre => TripletVariant::PrePostPre,
                    Variant::PostPrePost => TripletVariant::PostPrePost,
                },
                dt1_ms: self.dt1,
                dt2_ms: self.dt2,
            },
            ProtocolKind::Quadruplet => Protocol::Quadruplet { t_ms: self.t },
        };
        ProtocolSpec {
            protocol,
            rho: self.rho,
            repetitions: self.repetitions,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    #[arg(long, value_enum, default_value = "both")]
    engine: Engine,
    /// `rho=..`, `dt=..`, `pairs=dt1/dt2,..` or `T=..`; defaults depend on the protocol.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long)]
    out: PathBuf,
    /// Standard errors, one per sweep point; switches the summary to NMSE.
    #[arg(long)]
    sigma: Option<PathBuf>,
    /// Evaluate the model at frame-quantized spike times.
    #[arg(long)]
    quantize_model: bool,
    /// Fail when any point's relative engine error exceeds this.
    #[arg(long)]
    abort_rel_error: Option<f64>,
}

#[derive(Args)]
struct CharacterizeArgs {
    #[arg(long, default_value_t = 100)]
    pulses: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "potentiate")]
    polarity: PolarityArg,
    /// Width of each pulse, ms.
    #[arg(long, default_value_t = 0.1)]
    width_ms: f64,
    #[arg(long, default_value = "hippocampal")]
    params: String,
    /// Starting weight; defaults to the bound opposite the ramp direction.
    #[arg(long)]
    w0: Option<f64>,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    protocol: ProtocolArgs,
    /// Per-slot frame signals.
    #[arg(long)]
    frames: Option<PathBuf>,
    /// The nominal spike train.
    #[arg(long)]
    train: Option<PathBuf>,
}

fn default_sweep(kind: ProtocolKind) -> Sweep {
    match kind {
        ProtocolKind::Pairing => Sweep::Dt(vec![
            -60.0, -40.0, -20.0, -10.0, -5.0, -3.0, 3.0, 5.0, 10.0, 20.0, 40.0, 60.0,
        ]),
        ProtocolKind::Triplet => {
            let grid = [6.0, 9.0, 15.0];
            Sweep::Intervals(
                grid.iter()
                    .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
                    .collect(),
            )
        }
        ProtocolKind::Quadruplet => Sweep::Separation(vec![
            -100.0, -60.0, -40.0, -20.0, -10.0, 10.0, 20.0, 40.0, 60.0, 100.0,
        ]),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let params = ParameterSet::resolve(&args.protocol.params)?;
    let sweep = match &args.sweep {
        Some(s) => s.parse()?,
        None => default_sweep(args.protocol.protocol),
    };
    let engine = match args.engine {
        Engine::Model => EngineSelection::Model,
        Engine::Circuit => EngineSelection::Circuit,
        Engine::Both => EngineSelection::Both,
    };
    let mut cfg = ExperimentConfig::new(params, engine, args.protocol.spec(), sweep);
    cfg.sigma = args.sigma.as_ref().map(read_sigma_file).transpose()?;
    cfg.quantize_model = args.quantize_model;
    cfg.abort_rel_error = args.abort_rel_error;

    let result = run_experiment(&cfg)?;
    emit_csv(&result, &args.out)?;
    println!(
        "{} points -> {}; {}; clamp_events={}",
        result.rows.len(),
        args.out.display(),
        result.summary,
        result.clamp_events
    );
    Ok(())
}

fn characterize(args: CharacterizeArgs) -> Result<()> {
    let params = ParameterSet::resolve(&args.params)?;
    let d = params.device;
    let (polarity, start) = match args.polarity {
        PolarityArg::Potentiate => (Polarity::Potentiate, d.w_min),
        PolarityArg::Depress => (Polarity::Depress, d.w_max),
    };
    let syn = MemristiveSynapse::new(d, args.w0.unwrap_or(start))?;
    let weights = syn.ramp_characterize(args.pulses, polarity, args.width_ms * 1e-3)?;
    emit_characterization(&weights, &args.out)?;
    println!(
        "{} pulses -> {}; final weight {}",
        weights.len(),
        args.out.display(),
        weights.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn calibrate(params: &str) -> Result<()> {
    let params = ParameterSet::resolve(params)?;
    let cfg = ExperimentConfig::new(
        params,
        EngineSelection::Circuit,
        ProtocolSpec::new(Protocol::Pairing { dt_ms: 10.0 }, 1.0),
        Sweep::Rho(vec![1.0]),
    );
    let cp = cfg.circuit_params()?;
    print!(
        "{}",
        toml::to_string(&cp).expect("circuit parameters serialize")
    );
    Ok(())
}

fn inspect(args: InspectArgs) -> Result<()> {
    let params = ParameterSet::resolve(&args.protocol.params)?;
    let spec = args.protocol.spec();
    let cfg = ExperimentConfig::new(
        params,
        EngineSelection::Both,
        spec,
        Sweep::Rho(vec![spec.rho]),
    );
    cfg.validate()?;
    let train = spec.generate()?;
    let cp = cfg.circuit_params()?;
    let syn = MemristiveSynapse::new(cfg.params.device, cfg.params.w0)?;
    let run = run_circuit(&train, &cp, syn)?;
    if let Some(path) = &args.frames {
        emit_frames(&run, path)?;
    }
    if let Some(path) = &args.train {
        emit_train(&train, path)?;
    }
    println!(
        "{} active frames; circuit dw={:.16e}; clamp_events={}",
        run.frames.len(),
        run.total_delta_w,
        run.clamp_events
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Characterize(args) => characterize(args),
        Command::Calibrate { params } => calibrate(&params),
        Command::Inspect(args) => inspect(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
