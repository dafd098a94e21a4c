//! Iterative bounded-distance product decoders.
//!
//! [`Algorithm::Ibdd`] decodes rows then columns on hard decisions and writes
//! every successful component decode back. [`Algorithm::IbddSr`] combines
//! each component decode with the channel reliability: a bit flagged reliable
//! keeps its channel hard decision, an unreliable bit takes the component
//! decoder's output. After the soft-assisted iterations, a configurable number
//! of plain iBDD iterations clean up errors that were wrongly flagged
//! reliable.
//!
//! Row and column syndromes are maintained incrementally: every bit flip
//! updates one row syndrome and one column syndrome, so words with a zero
//! syndrome are skipped without touching their bits.

use serde::{Deserialize, Serialize};

use crate::bch::{self, PackedSyndrome, N};
use crate::channel::QuantizedBlock;
use crate::error::{Error, Result};
use crate::product::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Ibdd,
    IbddSr,
}

/// What an iBDD-SR pass writes to an unreliable bit when its component
/// decoder fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureMode {
    /// Leave the data memory unchanged.
    HardwareKeep,
    /// Reset the bit to its channel hard decision.
    StrictReset,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// One iteration is a row pass followed by a column pass.
    pub total_iterations: usize,
    pub algorithm: Algorithm,
    pub sr_failure_mode: FailureMode,
    /// Trailing plain iBDD iterations, counted inside `total_iterations`.
    /// Ignored for [`Algorithm::Ibdd`].
    pub cleanup_ibdd_iterations: usize,
    pub early_termination: bool,
}

impl DecoderConfig {
    pub fn ibdd(iterations: usize) -> Self {
        DecoderConfig {
            total_iterations: iterations,
            algorithm: Algorithm::Ibdd,
            sr_failure_mode: FailureMode::HardwareKeep,
            cleanup_ibdd_iterations: 0,
            early_termination: true,
        }
    }

    pub fn ibdd_sr(iterations: usize) -> Self {
        DecoderConfig {
            total_iterations: iterations,
            algorithm: Algorithm::IbddSr,
            sr_failure_mode: FailureMode::HardwareKeep,
            cleanup_ibdd_iterations: 2,
            early_termination: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_iterations == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        if self.algorithm == Algorithm::IbddSr
            && self.cleanup_ibdd_iterations > self.total_iterations
        {
            return Err(Error::Config(format!(
                "{} cleanup iterations exceed the total of {}",
                self.cleanup_ibdd_iterations, self.total_iterations
            )));
        }
        Ok(())
    }

    /// Number of leading soft-assisted iterations.
    pub fn sr_iterations(&self) -> usize {
        match self.algorithm {
            Algorithm::Ibdd => 0,
            Algorithm::IbddSr => self
                .total_iterations
                .saturating_sub(self.cleanup_ibdd_iterations),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PassStats {
    /// Component words with a nonzero syndrome.
    pub words_decoded: usize,
    pub failures: usize,
    pub corrections_applied: usize,
    /// Flips proposed by a successful component decode but rejected because
    /// the bit is reliable.
    pub masked_corrections: usize,
}

impl std::ops::AddAssign for PassStats {
    fn add_assign(&mut self, rhs: Self) {
        self.words_decoded += rhs.words_decoded;
        self.failures += rhs.failures;
        self.corrections_applied += rhs.corrections_applied;
        self.masked_corrections += rhs.masked_corrections;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    pub iterations_run: usize,
    pub terminated_early: bool,
    pub corrections_applied: usize,
    pub masked_corrections: usize,
    pub component_failures: usize,
    /// All row and column syndromes are zero at exit.
    pub success: bool,
}

/// B(·) of the soft-assisted message.
///
/// A reliable bit keeps its channel hard decision. Otherwise a successful
/// component decode (`mu = ±1`) yields B(mu), with B(+1) = 0 and B(−1) = 1;
/// a failure (`mu = 0`) keeps `current` or resets to `l_hd` depending on
/// `mode`.
#[inline]
pub fn sr_message(mu: i8, l_hd: u8, reliable: bool, current: u8, mode: FailureMode) -> u8 {
    if reliable {
        l_hd
    } else if mu > 0 {
        0
    } else if mu < 0 {
        1
    } else {
        match mode {
            FailureMode::HardwareKeep => current,
            FailureMode::StrictReset => l_hd,
        }
    }
}

/// Working memories of one decode.
#[derive(Clone, Debug)]
pub struct DecoderState {
    data: BitMatrix,
    channel_hd: BitMatrix,
    reliable: BitMatrix,
    row_syn: Vec<PackedSyndrome>,
    col_syn: Vec<PackedSyndrome>,
    /// Set once a plain iBDD pass has flipped a reliable bit.
    reliable_touched: bool,
}

impl DecoderState {
    pub fn new(q: &QuantizedBlock) -> Self {
        let data = q.hd.clone();
        let mut row_syn = vec![PackedSyndrome(0); N];
        let mut col_syn = vec![PackedSyndrome(0); N];
        for (r, rs) in row_syn.iter_mut().enumerate() {
            let rp = bch::position_syndrome(r);
            for (c, &b) in data.row(r).iter().enumerate() {
                if b != 0 {
                    *rs ^= bch::position_syndrome(c);
                    col_syn[c] ^= rp;
                }
            }
        }
        DecoderState {
            data,
            channel_hd: q.hd.clone(),
            reliable: q.reliable.clone(),
            row_syn,
            col_syn,
            reliable_touched: false,
        }
    }

    pub fn data(&self) -> &BitMatrix {
        &self.data
    }

    pub fn into_data(self) -> BitMatrix {
        self.data
    }

    pub fn channel_hd(&self) -> &BitMatrix {
        &self.channel_hd
    }

    pub fn reliable(&self) -> &BitMatrix {
        &self.reliable
    }

    /// All 510 component syndromes are zero.
    pub fn is_valid(&self) -> bool {
        self.row_syn
            .iter()
            .chain(&self.col_syn)
            .all(|s| s.is_zero())
    }

    /// Data equals the channel hard decision at every reliable position.
    pub fn mask_invariant_holds(&self) -> bool {
        self.data
            .as_slice()
            .iter()
            .zip(self.channel_hd.as_slice())
            .zip(self.reliable.as_slice())
            .all(|((&d, &h), &r)| r == 0 || d == h)
    }

    #[inline]
    fn flip(&mut self, r: usize, c: usize) {
        self.data.flip(r, c);
        self.row_syn[r] ^= bch::position_syndrome(c);
        self.col_syn[c] ^= bch::position_syndrome(r);
    }

    /// Decodes all 255 component words along `axis` in place.
    pub fn pass(&mut self, axis: Axis, algorithm: Algorithm, mode: FailureMode) -> PassStats {
        let mut stats = PassStats::default();
        let coords = |word: usize, pos: usize| match axis {
            Axis::Rows => (word, pos),
            Axis::Columns => (pos, word),
        };
        for word in 0..N {
            let s = match axis {
                Axis::Rows => self.row_syn[word],
                Axis::Columns => self.col_syn[word],
            };
            if algorithm == Algorithm::IbddSr && self.reliable_touched {
                self.restore_reliable(word, coords);
            }
            if s.is_zero() {
                continue;
            }
            stats.words_decoded += 1;
            match bch::locate_errors(s) {
                Some(positions) => {
                    for p in positions.iter() {
                        let (r, c) = coords(word, p);
                        match algorithm {
                            Algorithm::Ibdd => {
                                if self.reliable.get(r, c) != 0 {
                                    self.reliable_touched = true;
                                }
                                self.flip(r, c);
                                stats.corrections_applied += 1;
                            }
                            Algorithm::IbddSr => {
                                if self.reliable.get(r, c) != 0 {
                                    stats.masked_corrections += 1;
                                } else {
                                    self.flip(r, c);
                                    stats.corrections_applied += 1;
                                }
                            }
                        }
                    }
                }
                None => {
                    stats.failures += 1;
                    if algorithm == Algorithm::IbddSr && mode == FailureMode::StrictReset {
                        for p in 0..N {
                            let (r, c) = coords(word, p);
                            if self.data.get(r, c) != self.channel_hd.get(r, c) {
                                self.flip(r, c);
                            }
                        }
                    }
                }
            }
        }
        if algorithm == Algorithm::IbddSr {
            debug_assert!(
                self.mask_invariant_holds(),
                "reliable bit diverged from channel"
            );
        }
        stats
    }

    /// Writes the channel hard decision back to reliable bits of one word.
    fn restore_reliable(&mut self, word: usize, coords: impl Fn(usize, usize) -> (usize, usize)) {
        for p in 0..N {
            let (r, c) = coords(word, p);
            if self.reliable.get(r, c) != 0 && self.data.get(r, c) != self.channel_hd.get(r, c) {
                self.flip(r, c);
            }
        }
    }
}

/// Runs the configured decoder on one quantized block.
///
/// For [`Algorithm::Ibdd`] the reliability memory is ignored.
pub fn decode(q: &QuantizedBlock, cfg: &DecoderConfig) -> Result<(BitMatrix, DecodeReport)> {
    cfg.validate()?;
    let mut state = DecoderState::new(q);
    let report = run(&mut state, cfg);
    Ok((state.into_data(), report))
}

/// Runs the iteration schedule of `cfg` on an existing state.
pub fn run(state: &mut DecoderState, cfg: &DecoderConfig) -> DecodeReport {
    let sr_iterations = cfg.sr_iterations();
    let mut report = DecodeReport::default();
    for it in 0..cfg.total_iterations {
        let algorithm = if it < sr_iterations {
            Algorithm::IbddSr
        } else {
            Algorithm::Ibdd
        };
        let mut stats = state.pass(Axis::Rows, algorithm, cfg.sr_failure_mode);
        stats += state.pass(Axis::Columns, algorithm, cfg.sr_failure_mode);
        report.iterations_run += 1;
        report.corrections_applied += stats.corrections_applied;
        report.masked_corrections += stats.masked_corrections;
        report.component_failures += stats.failures;
        if cfg.early_termination && state.is_valid() {
            report.terminated_early = report.iterations_run < cfg.total_iterations;
            break;
        }
    }
    report.success = state.is_valid();
    report
}
