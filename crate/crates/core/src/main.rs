use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prodfec::decoder::{Algorithm, DecoderConfig, FailureMode};
use prodfec::sim::{self, StopRule, SweepConfig};
use prodfec::{bch, channel, product, Error};

#[derive(Parser)]
#[command(
    name = "prodfec",
    version,
    about = "BCH product-code decoder laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BER sweep over a list of Eb/N0 points.
    Sweep(SweepArgs),
    /// Net coding gain for a given threshold.
    Ncg {
        /// Coded Eb/N0 threshold in dB.
        #[arg(long)]
        threshold: f64,
        #[arg(long, default_value_t = 1e-15)]
        target_ber: f64,
    },
    /// Fit a waterfall model to a sweep CSV and extrapolate the threshold.
    Extrapolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-15)]
        target_ber: f64,
    },
    /// Single-threaded decoder throughput.
    Bench {
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long, default_value_t = 5.2)]
        ebn0: f64,
        #[arg(long, default_value_t = 5.0)]
        seconds: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quick internal consistency checks.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Ibdd,
    IbddSr,
}

#[derive(Clone, Copy, ValueEnum)]
enum FailureModeArg {
    Hardware,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long, default_value_t = 10)]
    iterations: usize,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::IbddSr)]
    algorithm: AlgorithmArg,
    #[arg(long, value_enum, default_value_t = FailureModeArg::Hardware)]
    failure_mode: FailureModeArg,
    /// Trailing plain iBDD iterations of iBDD-SR.
    #[arg(long, default_value_t = 2)]
    cleanup_iterations: usize,
    #[arg(long)]
    no_early_termination: bool,
}

impl DecoderArgs {
    fn config(&self) -> DecoderConfig {
        DecoderConfig {
            total_iterations: self.iterations,
            algorithm: match self.algorithm {
                AlgorithmArg::Ibdd => Algorithm::Ibdd,
                AlgorithmArg::IbddSr => Algorithm::IbddSr,
            },
            sr_failure_mode: match self.failure_mode {
                FailureModeArg::Hardware => FailureMode::HardwareKeep,
                FailureModeArg::Strict => FailureMode::StrictReset,
            },
            cleanup_ibdd_iterations: self.cleanup_iterations,
            early_termination: !self.no_early_termination,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// `start:step:stop` or a comma-separated list, in dB.
    #[arg(long)]
    ebn0: String,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, default_value_t = channel::DEFAULT_W)]
    w: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    min_block_errors: u64,
    #[arg(long, default_value_t = 1)]
    min_blocks: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_blocks: u64,
    #[arg(long, env = sim::WORKERS_ENV)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn output(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn sweep(args: &SweepArgs) -> Result<(), Error> {
    let cfg = SweepConfig {
        ebn0_points: sim::parse_ebn0_points(&args.ebn0)?,
        decoder: args.decoder.config(),
        w: args.w,
        seed: args.seed,
        stop: StopRule {
            min_block_errors: args.min_block_errors,
            min_blocks: args.min_blocks,
            max_blocks: args.max_blocks,
        },
        workers: args.workers.unwrap_or_else(sim::default_workers),
    };
    cfg.validate()?;
    let out = output(&args.out).map_err(|e| Error::Usage(format!("cannot open output: {e}")))?;
    let result = sim::run_sweep(&cfg)?;
    match args.format {
        Format::Csv => sim::write_csv(&result, out),
        Format::Json => sim::write_json(&sim::RunManifest::new(&cfg, &result), out),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn selftest() -> Result<(), Error> {
    use prodfec::galois::FieldElement;
    use rand::{Rng, SeedableRng};

    let fail = |what: &str| Err(Error::Usage(format!("selftest failed: {what}")));
    if FieldElement::ALPHA.pow(255)? != FieldElement::ONE || bch::build_generator().degree() != 24 {
        return fail("field or generator");
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let info: Vec<u8> = (0..bch::K).map(|_| rng.random_range(0..2)).collect();
        let c = bch::encode(&info)?;
        let mut r = c.clone();
        for p in rand::seq::index::sample(&mut rng, bch::N, 3) {
            r.flip(p);
        }
        if bch::bdd_decode(&r).decoded(&r).as_ref() != Some(&c) {
            return fail("three-error correction");
        }
    }
    let info = sim::random_info(7, 0);
    let block = product::encode_block(&info);
    if !product::is_valid_block(&block) || product::extract_info(block.bits()) != info {
        return fail("product encoding");
    }
    let ch =
        channel::ChannelConfig::new(5.5, product::code_parameters().rate, channel::DEFAULT_W, 3)?;
    let q = channel::quantize_block(&channel::transmit(&block, &ch, 0), ch.w)?;
    let (decoded, report) = prodfec::decoder::decode(&q, &DecoderConfig::ibdd_sr(10))?;
    if !report.success || &decoded != block.bits() {
        return fail("decoding at 5.5 dB");
    }
    eprintln!("selftest passed");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep(args) => sweep(&args),
        Command::Ncg {
            threshold,
            target_ber,
        } => print_json(&sim::ncg(threshold, target_ber)?),
        Command::Extrapolate { input, target_ber } => {
            let file = File::open(&input)
                .map_err(|e| Error::Usage(format!("{}: {e}", input.display())))?;
            let result = sim::read_csv(file)?;
            let fit = sim::extrapolate_threshold(&result, target_ber)?;
            log::warn!("extrapolated threshold is approximate");
            print_json(&fit)
        }
        Command::Bench {
            decoder,
            ebn0,
            seconds,
            seed,
        } => print_json(&sim::bench_throughput(
            &decoder.config(),
            ebn0,
            seconds,
            seed,
        )?),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
