//! Block codes, their incidence vectors and codebook matrices.
//!
//! Symbols are stored 0-based (`0..q`); file formats and the CLI use the
//! 1-based alphabet `1..=q`.

mod field;
mod linear;

pub use field::{is_prime, FieldMatrix, PrimeField};
pub use linear::{
    coset_leaders, enumerate_codewords, parity_check_from_generator, syndrome, syndrome_index,
    LinearCode,
};

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::mailman::{self, BinaryMatrix, MailmanFactorization, OpCount};

pub type Symbol = u16;

/// Memory budget for enumerated codebooks and codebook matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_codewords: u64,
    pub max_matrix_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_codewords: 1 << 24,
            max_matrix_bits: 1 << 31,
        }
    }
}

/// An explicit codebook: `S` distinct words of length `n` over `0..q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    q: usize,
    n: usize,
    symbols: Vec<Symbol>,
}

impl Code {
    pub fn new(q: usize, n: usize, codewords: Vec<Vec<Symbol>>) -> Result<Self> {
        if q < 2 || q > Symbol::MAX as usize {
            return Err(Error::InvalidParams(format!("alphabet size {q} out of range")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("block length must be positive".into()));
        }
        if codewords.is_empty() {
            return Err(Error::InvalidParams("a code needs at least one codeword".into()));
        }
        let mut symbols = Vec::with_capacity(codewords.len() * n);
        for c in &codewords {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            check_symbols(c, q)?;
            symbols.extend_from_slice(c);
        }
        let mut seen = HashSet::with_capacity(codewords.len());
        for (i, c) in symbols.chunks_exact(n).enumerate() {
            if !seen.insert(c) {
                return Err(Error::DuplicateCodeword(i));
            }
        }
        Ok(Self { q, n, symbols })
    }

    /// Builds a code from words written in the 1-based alphabet `1..=q`.
    pub fn from_one_based(q: usize, n: usize, codewords: Vec<Vec<usize>>) -> Result<Self> {
        let zero_based = codewords
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|s| {
                        if s == 0 || s > q {
                            Err(Error::SymbolOutOfRange { symbol: s, q })
                        } else {
                            Ok((s - 1) as Symbol)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, n, zero_based)
    }

    /// Binary code from 0/1 strings such as `"001"`.
    pub fn binary(words: &[&str]) -> Result<Self> {
        let n = words.first().map_or(0, |w| w.len());
        let codewords = words
            .iter()
            .map(|w| {
                w.chars()
                    .map(|ch| match ch {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        _ => Err(Error::InvalidParams(format!("not a bit: {ch:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(2, n, codewords)
    }

    pub(crate) fn from_parts_unchecked(q: usize, n: usize, symbols: Vec<Symbol>) -> Self {
        debug_assert_eq!(symbols.len() % n, 0);
        Self { q, n, symbols }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords `S`.
    pub fn len(&self) -> usize {
        self.symbols.len() / self.n
    }

    /// Always false; a code holds at least one codeword.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn codeword(&self, i: usize) -> &[Symbol] {
        &self.symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.symbols.chunks_exact(self.n)
    }

    /// Smallest Hamming distance between two distinct codewords (`None` for S = 1).
    pub fn minimum_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = hamming_distance(self.codeword(i), self.codeword(j));
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }
}

pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn hamming_weight(v: &[Symbol]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

fn check_symbols(c: &[Symbol], q: usize) -> Result<()> {
    match c.iter().find(|&&s| s as usize >= q) {
        Some(&s) => Err(Error::SymbolOutOfRange {
            symbol: s as usize,
            q,
        }),
        None => Ok(()),
    }
}

/// One-hot encoding of a codeword: block `i` has its single one at `c[i]`.
pub fn incidence_vector(c: &[Symbol], q: usize) -> Result<Vec<u8>> {
    check_symbols(c, q)?;
    let mut v = vec![0u8; c.len() * q];
    for (i, &s) in c.iter().enumerate() {
        v[i * q + s as usize] = 1;
    }
    Ok(v)
}

/// Number of input tuples `q^(memory + 1)` for an ISI channel.
pub fn tuple_count(q: usize, memory: usize) -> Result<usize> {
    u32::try_from(memory + 1)
        .ok()
        .and_then(|e| q.checked_pow(e))
        .filter(|&t| t <= u32::MAX as usize)
        .ok_or_else(|| Error::InvalidParams(format!("q^(L+1) overflows for q={q}, L={memory}")))
}

/// Index of the tuple `(c_i, c_{i-1}, .., c_{i-L})` in base `q` with `c_i` most
/// significant, positions before the start reading `initial`.
pub fn tuple_indices(
    c: &[Symbol],
    q: usize,
    memory: usize,
    initial: Symbol,
) -> impl Iterator<Item = usize> + '_ {
    (0..c.len()).map(move |i| {
        (0..=memory).fold(0usize, |acc, lag| {
            let s = if i >= lag { c[i - lag] } else { initial };
            acc * q + s as usize
        })
    })
}

/// One-hot encoding of each position's input tuple, `n · q^(L+1)` entries.
pub fn incidence_vector_isi(
    c: &[Symbol],
    q: usize,
    memory: usize,
    initial: Symbol,
) -> Result<Vec<u8>> {
    check_symbols(c, q)?;
    check_symbols(&[initial], q)?;
    let block = tuple_count(q, memory)?;
    let mut v = vec![0u8; c.len() * block];
    for (i, t) in tuple_indices(c, q, memory, initial).enumerate() {
        v[i * block + t] = 1;
    }
    Ok(v)
}

/// The binary matrix whose columns are the codewords' incidence vectors,
/// together with its Mailman factorization.
#[derive(Clone, Debug)]
pub struct CodebookMatrix {
    bits: BinaryMatrix,
    factorization: Option<MailmanFactorization>,
    n: usize,
    q: usize,
    memory: usize,
    initial_symbol: Symbol,
}

pub fn build_codebook_matrix(code: &Code, limits: &Limits) -> Result<CodebookMatrix> {
    build(code, 0, 0, limits)
}

pub fn build_codebook_matrix_isi(
    code: &Code,
    memory: usize,
    initial_symbol: Symbol,
    limits: &Limits,
) -> Result<CodebookMatrix> {
    check_symbols(&[initial_symbol], code.q())?;
    build(code, memory, initial_symbol, limits)
}

fn build(code: &Code, memory: usize, initial: Symbol, limits: &Limits) -> Result<CodebookMatrix> {
    let block = tuple_count(code.q(), memory)?;
    let rows = code.n() * block;
    let bits = rows as u128 * code.len() as u128;
    if bits > limits.max_matrix_bits as u128 {
        return Err(Error::CapacityExceeded {
            what: "codebook matrix bits",
            requested: bits,
            limit: limits.max_matrix_bits as u128,
        });
    }
    let mut m = BinaryMatrix::zeros(rows, code.len());
    for (j, c) in code.iter().enumerate() {
        for (i, t) in tuple_indices(c, code.q(), memory, initial).enumerate() {
            m.set(i * block + t, j, true);
        }
    }
    let factorization = mailman::factorize(&m).ok();
    Ok(CodebookMatrix {
        bits: m,
        factorization,
        n: code.n(),
        q: code.q(),
        memory,
        initial_symbol: initial,
    })
}

impl CodebookMatrix {
    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    pub fn ones_per_column(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Channel memory `L` the columns were built for (0 when memoryless).
    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn initial_symbol(&self) -> Symbol {
        self.initial_symbol
    }

    /// Rows per position block, `q^(L+1)`.
    pub fn block_size(&self) -> usize {
        self.rows() / self.n
    }

    pub fn bits(&self) -> &BinaryMatrix {
        &self.bits
    }

    /// `None` only for single-codeword codes, which use the naive product.
    pub fn factorization(&self) -> Option<&MailmanFactorization> {
        self.factorization.as_ref()
    }

    /// Score vector `v · M`.
    pub fn scores(&self, v: &[f64]) -> Result<Vec<f64>> {
        match &self.factorization {
            Some(f) => mailman::vec_times_matrix(v, f),
            None => mailman::vec_times_matrix_naive(v, &self.bits),
        }
    }

    pub fn scores_parallel(&self, v: &[f64]) -> Result<Vec<f64>> {
        match &self.factorization {
            Some(f) => mailman::vec_times_matrix_parallel(v, f),
            None => mailman::vec_times_matrix_naive(v, &self.bits),
        }
    }

    /// Operations one call to [`CodebookMatrix::scores`] performs.
    pub fn op_count(&self) -> OpCount {
        match &self.factorization {
            Some(f) => mailman::op_count(f),
            None => OpCount {
                multiplications: 0,
                additions: self.bits.count_ones() as u64,
            },
        }
    }
}

/// Codebook matrix for erasure decoding: `n x S`, bit set where the codeword
/// bit is 1 (the `+1` entries of the bipolar matrix).
#[derive(Clone, Debug)]
pub struct BipolarCodebook {
    bits: BinaryMatrix,
    factorization: Option<MailmanFactorization>,
}

pub fn build_bipolar_codebook(code: &Code, limits: &Limits) -> Result<BipolarCodebook> {
    if code.q() != 2 {
        return Err(Error::NonBinaryCode(code.q()));
    }
    let bits = code.n() as u128 * code.len() as u128;
    if bits > limits.max_matrix_bits as u128 {
        return Err(Error::CapacityExceeded {
            what: "codebook matrix bits",
            requested: bits,
            limit: limits.max_matrix_bits as u128,
        });
    }
    let mut m = BinaryMatrix::zeros(code.n(), code.len());
    for (j, c) in code.iter().enumerate() {
        for (i, &s) in c.iter().enumerate() {
            if s == 1 {
                m.set(i, j, true);
            }
        }
    }
    let factorization = mailman::factorize(&m).ok();
    Ok(BipolarCodebook {
        bits: m,
        factorization,
    })
}

impl BipolarCodebook {
    pub fn rows(&self) -> usize {
        self.bits.rows()
    }

    pub fn cols(&self) -> usize {
        self.bits.cols()
    }

    pub fn bits(&self) -> &BinaryMatrix {
        &self.bits
    }

    pub fn scores(&self, v: &[f64]) -> Result<Vec<f64>> {
        match &self.factorization {
            Some(f) => mailman::vec_times_bipolar_matrix(v, f),
            None => mailman::vec_times_bipolar_matrix_naive(v, &self.bits),
        }
    }

    pub fn op_count(&self) -> OpCount {
        match &self.factorization {
            Some(f) => mailman::bipolar_op_count(f),
            None => OpCount {
                multiplications: 0,
                additions: self.rows() as u64,
            },
        }
    }
}
