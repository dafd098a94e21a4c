//! Binary BCH(255,231) component code with t = 3.
//!
//! Bit index `i` of a [`ComponentWord`] is the coefficient of `x^(254 - i)`,
//! so index 0 is the highest-degree coefficient. Systematic encoding places
//! the 231 information bits at indices `0..231` and the 24 parity bits at
//! indices `231..255`.
//!
//! The bounded-distance decoder computes the syndromes S1..S6, finds the error
//! locator with Berlekamp–Massey and checks it with a Chien search. A locator
//! of degree ν is accepted only when it has exactly ν distinct roots, so the
//! decoder either returns a codeword within distance 3 of its input (which may
//! be the wrong one) or declares failure.

use std::fmt;
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::galois::{build_exp, FieldElement, FieldPolynomial, FIELD_ORDER};

/// Code length.
pub const N: usize = 255;
/// Information length.
pub const K: usize = 231;
/// Number of parity bits.
pub const PARITY_BITS: usize = N - K;
/// Guaranteed error-correcting radius.
pub const T: usize = 3;
/// Number of syndromes, 2t.
pub const NUM_SYNDROMES: usize = 2 * T;

/// Polynomial degree of bit index `i`.
#[inline]
pub const fn degree_of(index: usize) -> usize {
    N - 1 - index
}

/// A 255-bit row or column word. Each entry is 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComponentWord {
    bits: [u8; N],
}

impl ComponentWord {
    pub fn zeros() -> Self {
        ComponentWord { bits: [0; N] }
    }

    /// Builds a word from 255 values in `{0, 1}`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() != N {
            return Err(Error::Usage(format!(
                "component word needs {N} bits, got {}",
                bits.len()
            )));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Usage(format!("bit value {b} is not 0 or 1")));
        }
        let mut word = Self::zeros();
        word.bits.copy_from_slice(bits);
        Ok(word)
    }

    pub fn bits(&self) -> &[u8; N] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, index: usize) -> u8 {
        self.bits[index]
    }

    #[inline]
    pub fn set(&mut self, index: usize, bit: u8) {
        self.bits[index] = bit & 1;
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        self.bits[index] ^= 1;
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(other.bits.iter()) {
            *a ^= b;
        }
        out
    }

    pub fn distance(&self, other: &Self) -> usize {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// The information part, indices `0..231`.
    pub fn info(&self) -> &[u8] {
        &self.bits[..K]
    }
}

impl fmt::Debug for ComponentWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ones: Vec<usize> = (0..N).filter(|&i| self.bits[i] != 0).collect();
        write!(f, "ComponentWord(ones at {ones:?})")
    }
}

/// S1..S6, where `s[i]` is the received polynomial evaluated at α^(i+1).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SyndromeSet(pub [FieldElement; NUM_SYNDROMES]);

impl SyndromeSet {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }

    /// Expands the odd syndromes S1, S3, S5 with the Frobenius identity
    /// S2 = S1², S4 = S2², S6 = S3².
    pub fn from_packed(p: PackedSyndrome) -> Self {
        let s1 = FieldElement(p.0 as u8);
        let s3 = FieldElement((p.0 >> 8) as u8);
        let s5 = FieldElement((p.0 >> 16) as u8);
        let s2 = s1.square();
        let s4 = s2.square();
        let s6 = s3.square();
        SyndromeSet([s1, s2, s3, s4, s5, s6])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        out
    }
}

/// The three independent syndromes S1, S3, S5 of a binary word packed into
/// the low 24 bits of a `u32`. Syndromes are linear, so the packed syndrome
/// of a word is the xor of [`position_syndrome`] over its set bits.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Hash)]
pub struct PackedSyndrome(pub u32);

impl PackedSyndrome {
    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::BitXorAssign for PackedSyndrome {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

static POSITION_SYNDROME: [u32; N] = build_position_syndromes();

const fn build_position_syndromes() -> [u32; N] {
    let exp = build_exp();
    let mut table = [0u32; N];
    let mut i = 0;
    while i < N {
        let d = N - 1 - i;
        let s1 = exp[d % FIELD_ORDER] as u32;
        let s3 = exp[(3 * d) % FIELD_ORDER] as u32;
        let s5 = exp[(5 * d) % FIELD_ORDER] as u32;
        table[i] = s1 | (s3 << 8) | (s5 << 16);
        i += 1;
    }
    table
}

/// Packed syndrome of the weight-one word with a 1 at `index`.
#[inline]
pub fn position_syndrome(index: usize) -> PackedSyndrome {
    PackedSyndrome(POSITION_SYNDROME[index])
}

pub fn packed_syndrome(word: &ComponentWord) -> PackedSyndrome {
    let mut s = PackedSyndrome(0);
    for (i, &b) in word.bits.iter().enumerate() {
        if b != 0 {
            s ^= position_syndrome(i);
        }
    }
    s
}

/// `s[i] = Σ_j word_j · α^((i+1)·deg(j))`.
pub fn syndromes(word: &ComponentWord) -> SyndromeSet {
    SyndromeSet::from_packed(packed_syndrome(word))
}

/// Minimal polynomial over GF(2) of α^i: the product of `x + α^j` over the
/// cyclotomic coset of `i`.
fn minimal_polynomial(i: usize) -> FieldPolynomial {
    let mut coset = vec![i % FIELD_ORDER];
    loop {
        let next = (coset.last().unwrap() * 2) % FIELD_ORDER;
        if next == coset[0] {
            break;
        }
        coset.push(next);
    }
    coset.iter().fold(FieldPolynomial::one(), |acc, &j| {
        acc.mul(&FieldPolynomial::linear(FieldElement::alpha_pow(j as i64)))
    })
}

/// Generator polynomial: lcm of the minimal polynomials of α, α³ and α⁵.
///
/// The three cyclotomic cosets are disjoint, so the lcm is their product.
pub fn build_generator() -> FieldPolynomial {
    [1, 3, 5].iter().fold(FieldPolynomial::one(), |acc, &i| {
        acc.mul(&minimal_polynomial(i))
    })
}

/// Generator coefficients as bits (bit d = coefficient of x^d), degree 24.
static GENERATOR_BITS: LazyLock<u32> = LazyLock::new(|| {
    let g = build_generator();
    g.coeffs().iter().enumerate().fold(0u32, |acc, (d, c)| {
        debug_assert!(c.value() <= 1, "generator coefficient outside GF(2)");
        acc | ((c.value() as u32 & 1) << d)
    })
});

/// Remainder of `info(x)·x²⁴` modulo the generator, bit r = coefficient of x^r.
fn parity_register(info: &[u8]) -> u32 {
    const MASK: u32 = (1 << PARITY_BITS) - 1;
    let g = *GENERATOR_BITS & MASK;
    let mut reg = 0u32;
    for &b in info {
        let feedback = (b as u32 & 1) ^ (reg >> (PARITY_BITS - 1));
        reg = (reg << 1) & MASK;
        if feedback != 0 {
            reg ^= g;
        }
    }
    reg
}

/// Writes the 24 parity bits of `info` into `parity` (index order as in a
/// [`ComponentWord`]: highest degree first).
pub(crate) fn parity_into(info: &[u8], parity: &mut [u8]) {
    debug_assert_eq!(info.len(), K);
    debug_assert_eq!(parity.len(), PARITY_BITS);
    let reg = parity_register(info);
    for (r, p) in parity.iter_mut().enumerate() {
        *p = ((reg >> (PARITY_BITS - 1 - r)) & 1) as u8;
    }
}

/// Systematic encoding of 231 information bits.
pub fn encode(info: &[u8]) -> Result<ComponentWord> {
    if info.len() != K {
        return Err(Error::Usage(format!(
            "encoder needs {K} information bits, got {}",
            info.len()
        )));
    }
    let mut word = ComponentWord::zeros();
    for (dst, &b) in word.bits[..K].iter_mut().zip(info) {
        *dst = b & 1;
    }
    let (head, tail) = word.bits.split_at_mut(K);
    parity_into(head, tail);
    Ok(word)
}

/// Berlekamp–Massey over S1..S6. Returns the connection polynomial (at most
/// degree 6, lowest coefficient first) and its LFSR length.
fn berlekamp_massey(s: &SyndromeSet) -> ([FieldElement; 8], usize) {
    let zero = FieldElement::ZERO;
    let mut c = [zero; 8];
    let mut b = [zero; 8];
    c[0] = FieldElement::ONE;
    b[0] = FieldElement::ONE;
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last_d = FieldElement::ONE;

    for n in 0..NUM_SYNDROMES {
        let mut d = s.0[n];
        for (i, &ci) in c.iter().enumerate().take(l + 1).skip(1) {
            d += ci * s.0[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        // last_d is never zero: it starts at one and only takes nonzero d.
        let coef = d * last_d.inv().expect("nonzero discrepancy");
        let prev = c;
        for i in 0..8 - m {
            c[i + m] += coef * b[i];
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last_d = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    (c, l)
}

/// Error-locator polynomial Λ(x) with Λ(0) = 1 and degree ν ≤ 3, whose roots
/// are the inverse locators α^(-deg) of the error positions.
///
/// Returns `None` when the shortest LFSR generating the syndromes is longer
/// than 3 or its connection polynomial has degree below its length.
pub fn solve_error_locator(s: &SyndromeSet) -> Option<FieldPolynomial> {
    let (c, l) = berlekamp_massey(s);
    if l > T {
        return None;
    }
    let locator = FieldPolynomial::new(c[..=l].to_vec());
    (locator.degree() == l).then_some(locator)
}

/// Bit indices `i` with Λ(α^-(254-i)) = 0, or `None` if the number of
/// distinct roots differs from the degree of Λ.
pub fn chien_search(locator: &FieldPolynomial) -> Option<Vec<usize>> {
    let nu = locator.degree();
    if locator.is_zero() || nu > T {
        return None;
    }
    if nu == 0 {
        return Some(Vec::new());
    }
    let mut coeffs = [FieldElement::ZERO; T + 1];
    coeffs[..=nu].copy_from_slice(&locator.coeffs()[..=nu]);
    let found = chien_roots(&coeffs, nu)?;
    Some(found.as_slice().to_vec())
}

/// Up to three error positions, sorted ascending.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ErrorPositions {
    len: u8,
    pos: [u8; T],
}

impl ErrorPositions {
    fn push(&mut self, index: usize) {
        self.pos[self.len as usize] = index as u8;
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.pos[..self.len as usize].iter().map(|&p| p as usize)
    }

    pub fn as_slice(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Chien search over all 255 bit indices. Index i has degree d = 254 - i and
/// inverse locator α^(-d) = α^(i+1), so the candidate points are α^1..α^255.
fn chien_roots(coeffs: &[FieldElement; T + 1], nu: usize) -> Option<ErrorPositions> {
    let mut found = ErrorPositions::default();
    let step = [
        FieldElement::ONE,
        FieldElement::alpha_pow(1),
        FieldElement::alpha_pow(2),
        FieldElement::alpha_pow(3),
    ];
    let mut terms = *coeffs;
    for index in 0..N {
        let mut sum = terms[0];
        for j in 1..=nu {
            terms[j] *= step[j];
            sum += terms[j];
        }
        if sum.is_zero() {
            if found.len() == nu {
                return None;
            }
            found.push(index);
        }
    }
    (found.len() == nu).then_some(found)
}

/// Bounded-distance decoding from a packed syndrome. `Ok` with an empty set
/// means the syndrome is zero.
pub fn locate_errors(s: PackedSyndrome) -> Option<ErrorPositions> {
    if s.is_zero() {
        return Some(ErrorPositions::default());
    }
    let full = SyndromeSet::from_packed(s);
    let (c, l) = berlekamp_massey(&full);
    if l == 0 || l > T || c[l].is_zero() {
        return None;
    }
    if l == 1 {
        // Λ = 1 + X·x with X = S1 = α^deg.
        let deg = full.0[0].log().expect("S1 nonzero for a single error") as usize;
        let mut found = ErrorPositions::default();
        found.push(N - 1 - deg);
        return Some(found);
    }
    let mut coeffs = [FieldElement::ZERO; T + 1];
    coeffs[..=l].copy_from_slice(&c[..=l]);
    chien_roots(&coeffs, l)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BddKind {
    NoError,
    Corrected,
    Failure,
}

/// Result of bounded-distance decoding one component word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BddOutcome {
    pub kind: BddKind,
    /// Flipped bit indices, empty unless `kind` is `Corrected`.
    pub flips: Vec<usize>,
    /// Per-bit decoder output: +1 where the decoded bit is 0, −1 where it is
    /// 1, and 0 everywhere on failure.
    pub mu: Vec<i8>,
}

impl BddOutcome {
    /// The decoded word, or `None` on failure.
    pub fn decoded(&self, input: &ComponentWord) -> Option<ComponentWord> {
        if self.kind == BddKind::Failure {
            return None;
        }
        let mut out = input.clone();
        for &i in &self.flips {
            out.flip(i);
        }
        Some(out)
    }
}

fn mu_of(word: &ComponentWord) -> Vec<i8> {
    word.bits
        .iter()
        .map(|&b| if b == 0 { 1 } else { -1 })
        .collect()
}

pub fn bdd_decode(word: &ComponentWord) -> BddOutcome {
    let s = syndromes(word);
    if s.is_zero() {
        return BddOutcome {
            kind: BddKind::NoError,
            flips: Vec::new(),
            mu: mu_of(word),
        };
    }
    let failure = || BddOutcome {
        kind: BddKind::Failure,
        flips: Vec::new(),
        mu: vec![0; N],
    };
    let Some(locator) = solve_error_locator(&s) else {
        return failure();
    };
    let Some(flips) = chien_search(&locator) else {
        return failure();
    };
    let mut decoded = word.clone();
    for &i in &flips {
        decoded.flip(i);
    }
    BddOutcome {
        kind: BddKind::Corrected,
        mu: mu_of(&decoded),
        flips,
    }
}
