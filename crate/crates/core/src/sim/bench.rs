use std::time::{Duration, Instant};

use serde::Serialize;

use super::{random_info, stream_id};
use crate::channel::{self, ChannelConfig, QuantizedBlock};
use crate::decoder::{self, DecoderConfig};
use crate::error::Result;
use crate::product::{code_parameters, encode_block, INFO_BITS};

/// Number of distinct pre-generated blocks cycled through by the benchmark.
const POOL_BLOCKS: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BenchResult {
    pub blocks: u64,
    pub seconds: f64,
    pub info_bits_per_second: f64,
    pub blocks_per_second: f64,
    pub mean_corrections: f64,
    pub mean_iterations: f64,
}

/// Single-threaded decode throughput on pre-generated blocks at `ebn0_db`.
///
/// Channel generation is excluded from the timing. At least one pass over
/// the block pool is always timed.
pub fn bench_throughput(
    decoder_cfg: &DecoderConfig,
    ebn0_db: f64,
    seconds: f64,
    seed: u64,
) -> Result<BenchResult> {
    decoder_cfg.validate()?;
    let ch = ChannelConfig::new(ebn0_db, code_parameters().rate, channel::DEFAULT_W, seed)?;
    let pool: Vec<QuantizedBlock> = (0..POOL_BLOCKS)
        .map(|b| {
            let stream = stream_id(u32::MAX as u64, b);
            let block = encode_block(&random_info(seed, stream));
            channel::quantize_block(&channel::transmit(&block, &ch, stream), ch.w)
        })
        .collect::<Result<_>>()?;

    let budget = Duration::from_secs_f64(seconds.max(0.0));
    let start = Instant::now();
    let mut blocks = 0u64;
    let mut corrections = 0u64;
    let mut iterations = 0u64;
    while blocks < POOL_BLOCKS || start.elapsed() < budget {
        let q = &pool[(blocks % POOL_BLOCKS) as usize];
        let (_, report) = decoder::decode(q, decoder_cfg)?;
        corrections += report.corrections_applied as u64;
        iterations += report.iterations_run as u64;
        blocks += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    let bps = blocks as f64 / elapsed;
    Ok(BenchResult {
        blocks,
        seconds: elapsed,
        info_bits_per_second: bps * INFO_BITS as f64,
        blocks_per_second: bps,
        mean_corrections: corrections as f64 / blocks as f64,
        mean_iterations: iterations as f64 / blocks as f64,
    })
}
