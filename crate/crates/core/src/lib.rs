//! Soft-assisted iterative bounded-distance decoding of a BCH(255,231)²
//! product code.
//!
//! - [`galois`]: GF(2⁸) arithmetic.
//! - [`bch`]: systematic BCH(255,231) encoder and t = 3 bounded-distance decoder.
//! - [`product`]: 255×255 product-code blocks.
//! - [`channel`]: BPSK over AWGN with a hard-decision bit and a reliability bit.
//! - [`decoder`]: iBDD and reliability-masked iBDD-SR product decoders.
//! - [`sim`]: Monte Carlo BER sweeps, net coding gain arithmetic, curve
//!   extrapolation and throughput benchmarks.

pub mod bch;
pub mod channel;
pub mod decoder;
pub mod error;
pub mod galois;
pub mod math;
pub mod product;
pub mod sim;

pub use error::{Error, Result};
