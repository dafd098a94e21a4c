//! Product code with BCH(255,231) rows and columns.
//!
//! Information bits occupy the top-left 231×231 region of the 255×255 block,
//! row parity sits in columns 231..255 and column parity in rows 231..255.
//! Storage is row-major; columns are read through strided views.

use serde::Serialize;

use crate::bch::{self, ComponentWord, K, N, PARITY_BITS, T};
use crate::error::{Error, Result};

/// Bits per product block.
pub const BLOCK_BITS: usize = N * N;
/// Information bits per product block.
pub const INFO_BITS: usize = K * K;

/// A dense matrix of bits, one byte per bit, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != rows * cols {
            return Err(Error::Usage(format!(
                "{rows}x{cols} matrix needs {} bits, got {}",
                rows * cols,
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Usage("matrix entries must be 0 or 1".into()));
        }
        Ok(BitMatrix { rows, cols, bits })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.bits[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: u8) {
        self.bits[r * self.cols + c] = bit & 1;
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.cols + c] ^= 1;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.bits[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.bits[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = u8> + '_ {
        self.bits[c..].iter().step_by(self.cols).copied()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn transpose(&self) -> Self {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.bits[c * self.rows + r] = self.bits[r * self.cols + c];
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// Number of positions where the two matrices differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Copies out the `rows × cols` submatrix anchored at the origin.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        let mut out = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            out.row_mut(r).copy_from_slice(&self.row(r)[..cols]);
        }
        out
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BitMatrix({}x{}, {} ones)",
            self.rows,
            self.cols,
            self.count_ones()
        )
    }
}

/// 231×231 information bits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InfoBlock(BitMatrix);

impl InfoBlock {
    pub fn new(bits: BitMatrix) -> Result<Self> {
        if bits.rows() != K || bits.cols() != K {
            return Err(Error::Usage(format!(
                "information block must be {K}x{K}, got {}x{}",
                bits.rows(),
                bits.cols()
            )));
        }
        Ok(InfoBlock(bits))
    }

    pub fn zeros() -> Self {
        InfoBlock(BitMatrix::zeros(K, K))
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.0
    }

    pub fn into_bits(self) -> BitMatrix {
        self.0
    }
}

/// A 255×255 product-code block.
///
/// Holds any 255×255 bit pattern; use [`is_valid_block`] to check whether it
/// is a codeword of the product code.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductBlock(BitMatrix);

impl ProductBlock {
    pub fn new(bits: BitMatrix) -> Result<Self> {
        if bits.rows() != N || bits.cols() != N {
            return Err(Error::Usage(format!(
                "product block must be {N}x{N}, got {}x{}",
                bits.rows(),
                bits.cols()
            )));
        }
        Ok(ProductBlock(bits))
    }

    pub fn zeros() -> Self {
        ProductBlock(BitMatrix::zeros(N, N))
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut BitMatrix {
        &mut self.0
    }

    pub fn into_bits(self) -> BitMatrix {
        self.0
    }

    pub fn row_word(&self, r: usize) -> ComponentWord {
        ComponentWord::from_bits(self.0.row(r)).expect("row has 255 bits")
    }

    pub fn column_word(&self, c: usize) -> ComponentWord {
        let bits: Vec<u8> = self.0.column(c).collect();
        ComponentWord::from_bits(&bits).expect("column has 255 bits")
    }
}

/// Systematic product encoding: rows first, then every column.
pub fn encode_block(info: &InfoBlock) -> ProductBlock {
    let mut out = BitMatrix::zeros(N, N);
    for r in 0..K {
        let row = out.row_mut(r);
        row[..K].copy_from_slice(info.0.row(r));
        let (head, tail) = row.split_at_mut(K);
        bch::parity_into(head, tail);
    }
    encode_columns(&mut out);
    ProductBlock(out)
}

/// Fills rows 231..255 with the column parity of rows 0..231.
fn encode_columns(m: &mut BitMatrix) {
    let mut column = [0u8; K];
    let mut parity = [0u8; PARITY_BITS];
    for c in 0..N {
        for (r, dst) in column.iter_mut().enumerate() {
            *dst = m.get(r, c);
        }
        bch::parity_into(&column, &mut parity);
        for (p, &bit) in parity.iter().enumerate() {
            m.set(K + p, c, bit);
        }
    }
}

/// Column-first product encoding. Produces the same block as
/// [`encode_block`] by linearity; kept as an independent route for checks.
pub fn encode_block_columns_first(info: &InfoBlock) -> ProductBlock {
    // Encoding columns of `info` is encoding rows of its transpose.
    let transposed = InfoBlock(info.0.transpose());
    let mut tmp = BitMatrix::zeros(N, N);
    for r in 0..K {
        let row = tmp.row_mut(r);
        row[..K].copy_from_slice(transposed.0.row(r));
        let (head, tail) = row.split_at_mut(K);
        bch::parity_into(head, tail);
    }
    // tmp rows 0..231 are the encoded columns; transpose back and finish rows.
    let mut out = tmp.transpose();
    for r in 0..N {
        let row = out.row_mut(r);
        let (head, tail) = row.split_at_mut(K);
        bch::parity_into(head, tail);
    }
    ProductBlock(out)
}

/// True iff every row and every column has an all-zero syndrome.
pub fn is_valid_block(block: &ProductBlock) -> bool {
    let m = &block.0;
    let mut col_syn = [bch::PackedSyndrome(0); N];
    for r in 0..N {
        let mut row_syn = bch::PackedSyndrome(0);
        for (c, &b) in m.row(r).iter().enumerate() {
            if b != 0 {
                row_syn ^= bch::position_syndrome(c);
                col_syn[c] ^= bch::position_syndrome(r);
            }
        }
        if !row_syn.is_zero() {
            return false;
        }
    }
    col_syn.iter().all(|s| s.is_zero())
}

/// The systematic 231×231 region of a 255×255 bit matrix.
pub fn extract_info(decoded: &BitMatrix) -> InfoBlock {
    InfoBlock(decoded.top_left(K, K))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub block_bits: usize,
    pub info_bits: usize,
    pub rate: f64,
    pub overhead: f64,
}

pub fn code_parameters() -> CodeParameters {
    CodeParameters {
        n: N,
        k: K,
        t: T,
        block_bits: BLOCK_BITS,
        info_bits: INFO_BITS,
        rate: INFO_BITS as f64 / BLOCK_BITS as f64,
        overhead: BLOCK_BITS as f64 / INFO_BITS as f64 - 1.0,
    }
}
