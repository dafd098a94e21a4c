//! Monte Carlo BER simulation.
//!
//! Every simulated block draws its information bits and its channel noise
//! from ChaCha8 streams keyed by `(master seed, point index, block index)`,
//! so a sweep gives the same counters for any number of workers. Blocks are
//! simulated in parallel chunks and folded in index order; the stopping rule
//! is evaluated block by block during the fold.

mod bench;
mod ncg;
mod output;

pub use bench::{bench_throughput, BenchResult};
pub use ncg::{
    direct_threshold, extrapolate_threshold, ncg, uncoded_required_db, Extrapolation, NcgEstimate,
    NcgMethod,
};
pub use output::{read_csv, write_csv, write_json, RunManifest, CSV_HEADER};

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bch::K;
use crate::channel::{self, ChannelConfig};
use crate::decoder::{self, DecoderConfig};
use crate::error::{Error, Result};
use crate::product::{self, code_parameters, encode_block, BitMatrix, InfoBlock, INFO_BITS};

const DATA_DOMAIN: u64 = 0x6461_7461_5f76_3031;

/// Environment variable consulted for the default worker count.
pub const WORKERS_ENV: &str = "PRODFEC_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_block_errors: u64,
    pub min_blocks: u64,
    pub max_blocks: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_block_errors: 100,
            min_blocks: 1,
            max_blocks: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub ebn0_points: Vec<f64>,
    pub decoder: DecoderConfig,
    /// Reliability threshold.
    pub w: f64,
    pub seed: u64,
    pub stop: StopRule,
    pub workers: usize,
}

impl SweepConfig {
    pub fn new(ebn0_points: Vec<f64>, decoder: DecoderConfig) -> Self {
        SweepConfig {
            ebn0_points,
            decoder,
            w: channel::DEFAULT_W,
            seed: 0,
            stop: StopRule::default(),
            workers: default_workers(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.decoder.validate()?;
        if self.ebn0_points.is_empty() {
            return Err(Error::Config("no Eb/N0 points".into()));
        }
        for &e in &self.ebn0_points {
            self.channel(e)?;
        }
        let s = &self.stop;
        if s.min_blocks < 1 || s.max_blocks < s.min_blocks {
            return Err(Error::Config(format!(
                "need max_blocks ({}) >= min_blocks ({}) >= 1",
                s.max_blocks, s.min_blocks
            )));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    fn channel(&self, ebn0_db: f64) -> Result<ChannelConfig> {
        ChannelConfig::new(ebn0_db, code_parameters().rate, self.w, self.seed)
    }
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list of dB values.
pub fn parse_ebn0_points(spec: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("bad Eb/N0 value {t:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(Error::Config(format!("bad Eb/N0 range {spec:?}")));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(Error::Config(format!("bad Eb/N0 spec {spec:?}"))),
    }
}

/// Worker count from [`WORKERS_ENV`], else the number of available cores.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub blocks: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub block_errors: u64,
    pub output_ber: f64,
    pub output_bler: f64,
    /// Hard-decision error rate of the channel over all coded bits.
    pub channel_ber: f64,
    pub mean_iterations: f64,
    pub wall_time_s: f64,
    /// Channel hard-decision errors over all coded bits.
    #[serde(default)]
    pub channel_bit_errors: u64,
}

impl PointResult {
    /// Counters that must not depend on scheduling.
    pub fn counters(&self) -> (u64, u64, u64, u64, u64) {
        (
            self.blocks,
            self.info_bits,
            self.bit_errors,
            self.block_errors,
            self.channel_bit_errors,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rate: f64,
    pub points: Vec<PointResult>,
}

/// Outcome of one simulated block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BlockOutcome {
    pub bit_errors: u64,
    pub channel_errors: u64,
    pub iterations: u64,
}

fn stream_id(point_index: u64, block_index: u64) -> u64 {
    (point_index << 40) | block_index
}

/// Uniform information bits for one block.
pub fn random_info(seed: u64, stream: u64) -> InfoBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ DATA_DOMAIN);
    rng.set_stream(stream);
    random_info_with(&mut rng)
}

pub fn random_info_with(rng: &mut impl Rng) -> InfoBlock {
    let mut bits = Vec::with_capacity(INFO_BITS);
    while bits.len() < INFO_BITS {
        let word = rng.next_u64();
        let take = (INFO_BITS - bits.len()).min(64);
        bits.extend((0..take).map(|i| ((word >> i) & 1) as u8));
    }
    InfoBlock::new(BitMatrix::from_vec(K, K, bits).expect("231x231 bits")).expect("231x231")
}

/// Encodes, transmits, quantizes and decodes one block.
pub fn simulate_block(
    channel_cfg: &ChannelConfig,
    decoder_cfg: &DecoderConfig,
    point_index: u64,
    block_index: u64,
) -> BlockOutcome {
    let stream = stream_id(point_index, block_index);
    let info = random_info(channel_cfg.seed, stream);
    let block = encode_block(&info);
    let l = channel::transmit(&block, channel_cfg, stream);
    let q = channel::quantize_block(&l, channel_cfg.w).expect("block-sized channel output");
    let channel_errors = q.hd.hamming_distance(block.bits()) as u64;
    let (decoded, report) = decoder::decode(&q, decoder_cfg).expect("validated decoder config");
    let bit_errors = product::extract_info(&decoded)
        .bits()
        .hamming_distance(info.bits()) as u64;
    BlockOutcome {
        bit_errors,
        channel_errors,
        iterations: report.iterations_run as u64,
    }
}

fn chunk_len(workers: usize) -> u64 {
    (4 * workers).max(8) as u64
}

/// Runs the sweep described by `cfg`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let mut points = Vec::with_capacity(cfg.ebn0_points.len());
    for (pi, &ebn0) in cfg.ebn0_points.iter().enumerate() {
        let ch = cfg.channel(ebn0)?;
        let point =
            pool.install(|| run_point(&ch, &cfg.decoder, &cfg.stop, pi as u64, cfg.workers));
        log::info!(
            "Eb/N0 {:.3} dB: {} blocks, {} bit errors, {} block errors, BER {:.3e}",
            point.ebn0_db,
            point.blocks,
            point.bit_errors,
            point.block_errors,
            point.output_ber
        );
        points.push(point);
    }
    Ok(SweepResult {
        rate: code_parameters().rate,
        points,
    })
}

fn run_point(
    ch: &ChannelConfig,
    dec: &DecoderConfig,
    stop: &StopRule,
    point_index: u64,
    workers: usize,
) -> PointResult {
    use rayon::prelude::*;

    let start = Instant::now();
    let chunk = chunk_len(workers);
    let mut blocks = 0u64;
    let mut bit_errors = 0u64;
    let mut block_errors = 0u64;
    let mut channel_errors = 0u64;
    let mut iterations = 0u64;
    let mut next = 0u64;
    let mut last_log = Instant::now();

    'outer: while next < stop.max_blocks {
        let end = (next + chunk).min(stop.max_blocks);
        let outcomes: Vec<BlockOutcome> = (next..end)
            .into_par_iter()
            .map(|b| simulate_block(ch, dec, point_index, b))
            .collect();
        next = end;
        for o in outcomes {
            blocks += 1;
            bit_errors += o.bit_errors;
            block_errors += (o.bit_errors > 0) as u64;
            channel_errors += o.channel_errors;
            iterations += o.iterations;
            if blocks >= stop.min_blocks
                && (block_errors >= stop.min_block_errors || blocks >= stop.max_blocks)
            {
                break 'outer;
            }
        }
        if last_log.elapsed().as_secs() >= 10 {
            log::debug!(
                "Eb/N0 {:.3} dB: {blocks} blocks, {block_errors} block errors so far",
                ch.ebn0_db
            );
            last_log = Instant::now();
        }
    }

    let info_bits = blocks * INFO_BITS as u64;
    let coded_bits = blocks * product::BLOCK_BITS as u64;
    PointResult {
        ebn0_db: ch.ebn0_db,
        blocks,
        info_bits,
        bit_errors,
        block_errors,
        output_ber: ratio(bit_errors, info_bits),
        output_bler: ratio(block_errors, blocks),
        channel_ber: ratio(channel_errors, coded_bits),
        mean_iterations: iterations as f64 / blocks.max(1) as f64,
        wall_time_s: start.elapsed().as_secs_f64(),
        channel_bit_errors: channel_errors,
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}
