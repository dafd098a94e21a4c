//! BPSK over a binary-input AWGN channel with 2-bit output quantization.
//!
//! Bit 0 maps to +1 and bit 1 to −1. The channel output y = x + n is kept
//! unnormalized and quantized into a hard decision (the sign) and a
//! reliability flag `|y| ≥ w`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bch::N;
use crate::error::{Error, Result};
use crate::math;
use crate::product::{BitMatrix, ProductBlock};

/// Default reliability threshold, also the fixed scaling weight of the
/// soft-assisted decoder.
pub const DEFAULT_W: f64 = 0.587;

const NOISE_DOMAIN: u64 = 0x6e6f_6973_655f_7631;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Eb/N0 per information bit, in dB. `+inf` gives a noiseless channel.
    pub ebn0_db: f64,
    pub rate: f64,
    pub w: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(ebn0_db: f64, rate: f64, w: f64, seed: u64) -> Result<Self> {
        let cfg = ChannelConfig {
            ebn0_db,
            rate,
            w,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return Err(Error::Config(format!("rate {} not in (0, 1]", self.rate)));
        }
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(Error::Config(format!("w must be positive, got {}", self.w)));
        }
        if self.ebn0_db.is_nan() || self.ebn0_db == f64::NEG_INFINITY {
            return Err(Error::Config(format!(
                "Eb/N0 {} dB is not usable",
                self.ebn0_db
            )));
        }
        Ok(())
    }

    /// σ² = 1 / (2 · rate · 10^(Eb/N0 / 10)).
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * 10f64.powf(self.ebn0_db / 10.0))
    }

    pub fn sigma(&self) -> f64 {
        self.noise_variance().sqrt()
    }
}

/// One quantized channel output: hard decision plus reliability flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantizedSymbol {
    pub hd: u8,
    pub reliable: bool,
}

/// The two decoder memories for one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantizedBlock {
    pub hd: BitMatrix,
    pub reliable: BitMatrix,
}

impl QuantizedBlock {
    pub fn new(hd: BitMatrix, reliable: BitMatrix) -> Result<Self> {
        for m in [&hd, &reliable] {
            if m.rows() != N || m.cols() != N {
                return Err(Error::Usage(format!(
                    "quantized block must be {N}x{N}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(QuantizedBlock { hd, reliable })
    }

    /// Noiseless reception of `block` with every bit marked `reliable`.
    pub fn from_block(block: &ProductBlock, reliable: bool) -> Self {
        let mut rel = BitMatrix::zeros(N, N);
        if reliable {
            for r in 0..N {
                rel.row_mut(r).fill(1);
            }
        }
        QuantizedBlock {
            hd: block.bits().clone(),
            reliable: rel,
        }
    }

    pub fn unreliable_count(&self) -> usize {
        N * N - self.reliable.count_ones()
    }
}

#[inline]
pub fn modulate(bit: u8) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Random stream for the noise of block `block_index` under `seed`.
pub fn noise_rng(seed: u64, block_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ NOISE_DOMAIN);
    rng.set_stream(block_index);
    rng
}

/// Raw channel outputs y = modulate(bit) + n, row-major.
///
/// Deterministic in `(cfg.seed, block_index)`.
pub fn transmit(block: &ProductBlock, cfg: &ChannelConfig, block_index: u64) -> Vec<f64> {
    let mut rng = noise_rng(cfg.seed, block_index);
    transmit_with(block, cfg.sigma(), &mut rng)
}

pub fn transmit_with(block: &ProductBlock, sigma: f64, rng: &mut impl Rng) -> Vec<f64> {
    block
        .bits()
        .as_slice()
        .iter()
        .map(|&b| {
            let n: f64 = rng.sample(StandardNormal);
            modulate(b) + sigma * n
        })
        .collect()
}

/// Hard decision `L < 0`, reliability `|L| ≥ w`.
#[inline]
pub fn quantize(l: f64, w: f64) -> QuantizedSymbol {
    QuantizedSymbol {
        hd: (l < 0.0) as u8,
        reliable: l.abs() >= w,
    }
}

pub fn quantize_block(l_values: &[f64], w: f64) -> Result<QuantizedBlock> {
    if l_values.len() != N * N {
        return Err(Error::Usage(format!(
            "expected {} channel values, got {}",
            N * N,
            l_values.len()
        )));
    }
    let mut hd = Vec::with_capacity(N * N);
    let mut rel = Vec::with_capacity(N * N);
    for &l in l_values {
        let q = quantize(l, w);
        hd.push(q.hd);
        rel.push(q.reliable as u8);
    }
    Ok(QuantizedBlock {
        hd: BitMatrix::from_vec(N, N, hd)?,
        reliable: BitMatrix::from_vec(N, N, rel)?,
    })
}

/// Uncoded BPSK bit error probability Q(√(2·rate·Eb/N0)).
pub fn channel_ber(cfg: &ChannelConfig) -> f64 {
    math::q(1.0 / cfg.sigma())
}

/// P(|y| < w) given the transmitted symbol +1.
pub fn unreliable_probability(cfg: &ChannelConfig) -> f64 {
    let s = cfg.sigma();
    math::phi((cfg.w - 1.0) / s) - math::phi((-cfg.w - 1.0) / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{encode_block, InfoBlock};
    use proptest::prelude::*;

    const RATE: f64 = 0.82063;

    #[test]
    fn modulation() {
        assert_eq!(modulate(0), 1.0);
        assert_eq!(modulate(1), -1.0);
        for b in 0..2 {
            assert_eq!(modulate(b) * modulate(b), 1.0);
        }
    }

    #[test]
    fn sigma_at_5_2_db() {
        let cfg = ChannelConfig::new(5.2, RATE, DEFAULT_W, 0).unwrap();
        assert!((cfg.sigma() - 0.4290).abs() < 5e-5);
    }

    #[test]
    fn analytic_channel_ber() {
        let cfg = ChannelConfig::new(5.2, RATE, DEFAULT_W, 0).unwrap();
        // Q(2.331) from a 40-digit oracle, at the exact rate 53361/65025.
        assert!((channel_ber(&cfg) - 0.009_870).abs() < 2e-6);
        let clean = ChannelConfig::new(f64::INFINITY, 1.0, DEFAULT_W, 0).unwrap();
        assert_eq!(channel_ber(&clean), 0.0);
    }

    #[test]
    fn quantizer_examples() {
        assert_eq!(
            quantize(1.0, 0.587),
            QuantizedSymbol {
                hd: 0,
                reliable: true
            }
        );
        assert_eq!(
            quantize(-0.3, 0.587),
            QuantizedSymbol {
                hd: 1,
                reliable: false
            }
        );
        assert_eq!(
            quantize(0.587, 0.587),
            QuantizedSymbol {
                hd: 0,
                reliable: true
            }
        );
        assert_eq!(quantize(0.0, 0.587).hd, 0);
    }

    #[test]
    fn noiseless_limit() {
        let cfg = ChannelConfig::new(f64::INFINITY, RATE, DEFAULT_W, 1).unwrap();
        let block = encode_block(&InfoBlock::zeros());
        let l = transmit(&block, &cfg, 0);
        assert!(l.iter().all(|&y| y == 1.0));
    }

    #[test]
    fn noise_is_unbiased_and_deterministic() {
        let cfg = ChannelConfig::new(5.2, RATE, DEFAULT_W, 7).unwrap();
        let block = ProductBlock::zeros();
        let l = transmit(&block, &cfg, 3);
        let n = l.len() as f64;
        let mean = l.iter().sum::<f64>() / n;
        assert!((mean - 1.0).abs() < 3.0 * cfg.sigma() / n.sqrt());
        assert_eq!(l, transmit(&block, &cfg, 3));
        assert_ne!(l, transmit(&block, &cfg, 4));
    }

    #[test]
    fn unreliable_fraction_matches_analytic() {
        let cfg = ChannelConfig::new(5.2, RATE, DEFAULT_W, 11).unwrap();
        let p = unreliable_probability(&cfg);
        // 40-digit oracle at the exact rate.
        assert!((p - 0.167_716).abs() < 1e-4);
        let block = ProductBlock::zeros();
        let mut unreliable = 0usize;
        let mut total = 0usize;
        for i in 0..20 {
            let q = quantize_block(&transmit(&block, &cfg, i), cfg.w).unwrap();
            unreliable += q.unreliable_count();
            total += N * N;
        }
        let measured = unreliable as f64 / total as f64;
        let se = (p * (1.0 - p) / total as f64).sqrt();
        assert!((measured - p).abs() < 4.0 * se, "{measured} vs {p}");
    }

    #[test]
    fn config_validation() {
        assert!(ChannelConfig::new(5.0, 0.0, 0.5, 0).is_err());
        assert!(ChannelConfig::new(5.0, 1.5, 0.5, 0).is_err());
        assert!(ChannelConfig::new(5.0, 0.8, 0.0, 0).is_err());
        assert!(ChannelConfig::new(f64::NAN, 0.8, 0.5, 0).is_err());
    }

    proptest! {
        #[test]
        fn sign_symmetry(l in -10.0f64..10.0, w in 0.01f64..3.0) {
            prop_assume!(l != 0.0);
            let a = quantize(l, w);
            let b = quantize(-l, w);
            prop_assert_eq!(b.hd, 1 - a.hd);
            prop_assert_eq!(a.reliable, b.reliable);
        }
    }
}
