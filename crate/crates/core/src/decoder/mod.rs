//! Decoding pipelines: build `V(y)`, multiply by the codebook matrix, scan.
//!
//! All indices in results are 0-based; the CLI adds one when printing.

mod select;
mod syndrome;

pub use select::{argmax_scan, top_list, TieTolerance};
pub use syndrome::{build_syndrome_matrix, syndrome_decode, SyndromeDecodeResult, SyndromeDecoder};

use serde::Serialize;

use crate::channels::{
    bipolar_received_vector, conditional_probability_vector, conditional_probability_vector_isi,
    Channel, ErasureObservation, IsiChannel,
};
use crate::codes::{BipolarCodebook, Code, CodebookMatrix, Symbol};
use crate::error::{Error, Result};

/// `scores[j] = ln P(y | c_j)`; entries may be `-inf`.
pub type ScoreVector = Vec<f64>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeResult {
    pub best_index: usize,
    pub best_codeword: Vec<Symbol>,
    pub best_score: f64,
    /// Every index tied with the maximum, ascending; `best_index` is the first.
    pub ties: Vec<usize>,
    pub scores: ScoreVector,
    /// Set when every codeword has zero likelihood.
    pub implausible: bool,
}

impl DecodeResult {
    /// Scan `scores` and fill in the winner. Panics on an empty vector.
    pub fn from_scores(code: &Code, scores: ScoreVector, tol: TieTolerance) -> Self {
        let (best, ties) = argmax_scan(&scores, tol);
        Self {
            best_index: best,
            best_codeword: code.codeword(best).to_vec(),
            best_score: scores[best],
            implausible: scores[best] == f64::NEG_INFINITY,
            ties,
            scores,
        }
    }

    pub fn is_tie(&self) -> bool {
        self.ties.len() > 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ListDecodeResult {
    /// `(index, score)`, score descending, tied scores by index.
    pub entries: Vec<(usize, f64)>,
}

impl ListDecodeResult {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_codebook(codebook: &CodebookMatrix, code: &Code) -> Result<()> {
    check_len(code.len(), codebook.cols())?;
    check_len(code.n(), codebook.ones_per_column())?;
    if codebook.q() != code.q() {
        return Err(Error::ChannelMismatch(format!(
            "codebook built for q={}, code has q={}",
            codebook.q(),
            code.q()
        )));
    }
    Ok(())
}

fn check_alphabet<C: Channel>(channel: &C, code: &Code) -> Result<()> {
    if channel.input_alphabet() != code.q() {
        return Err(Error::ChannelMismatch(format!(
            "channel input alphabet {} does not match code alphabet {}",
            channel.input_alphabet(),
            code.q()
        )));
    }
    Ok(())
}

/// Score vector `V(y) · M` for a memoryless channel.
pub fn score_vector<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &C,
    y: &[C::Output],
) -> Result<ScoreVector> {
    check_codebook(codebook, code)?;
    if codebook.memory() != 0 {
        return Err(Error::ChannelMismatch(format!(
            "codebook built for channel memory {}, channel is memoryless",
            codebook.memory()
        )));
    }
    check_alphabet(channel, code)?;
    check_len(code.n(), y.len())?;
    codebook.scores(&conditional_probability_vector(channel, y)?)
}

pub fn ml_decode<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &C,
    y: &[C::Output],
    tol: TieTolerance,
) -> Result<DecodeResult> {
    let scores = score_vector(codebook, code, channel, y)?;
    Ok(DecodeResult::from_scores(code, scores, tol))
}

pub fn list_decode<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &C,
    y: &[C::Output],
    ell: usize,
    tol: TieTolerance,
) -> Result<ListDecodeResult> {
    if ell == 0 || ell > code.len() {
        return Err(Error::ListSizeOutOfRange {
            list: ell,
            max: code.len(),
        });
    }
    let scores = score_vector(codebook, code, channel, y)?;
    Ok(ListDecodeResult {
        entries: top_list(&scores, ell, tol)?,
    })
}

/// Scores are `|K| - 2 d_K(y, c_j)`, `K` the unerased positions.
pub fn erasure_decode(
    codebook: &BipolarCodebook,
    code: &Code,
    y: &ErasureObservation,
    tol: TieTolerance,
) -> Result<DecodeResult> {
    if code.q() != 2 {
        return Err(Error::NonBinaryCode(code.q()));
    }
    check_len(code.len(), codebook.cols())?;
    check_len(code.n(), codebook.rows())?;
    check_len(code.n(), y.len())?;
    let scores = codebook.scores(&bipolar_received_vector(y))?;
    Ok(DecodeResult::from_scores(code, scores, tol))
}

pub fn isi_score_vector<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &IsiChannel<C>,
    y: &[C::Output],
) -> Result<ScoreVector> {
    check_codebook(codebook, code)?;
    if channel.q() != code.q()
        || channel.memory() != codebook.memory()
        || channel.initial_symbol() != codebook.initial_symbol()
    {
        return Err(Error::ChannelMismatch(format!(
            "channel (q={}, L={}, initial={}) vs codebook (q={}, L={}, initial={})",
            channel.q(),
            channel.memory(),
            channel.initial_symbol() + 1,
            codebook.q(),
            codebook.memory(),
            codebook.initial_symbol() + 1
        )));
    }
    check_len(code.n(), y.len())?;
    codebook.scores(&conditional_probability_vector_isi(channel, y)?)
}

pub fn isi_ml_decode<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &IsiChannel<C>,
    y: &[C::Output],
    tol: TieTolerance,
) -> Result<DecodeResult> {
    let scores = isi_score_vector(codebook, code, channel, y)?;
    Ok(DecodeResult::from_scores(code, scores, tol))
}

/// [`ml_decode`] over many observations, in parallel when enabled.
pub fn ml_decode_batch<C: Channel>(
    codebook: &CodebookMatrix,
    code: &Code,
    channel: &C,
    observations: &[Vec<C::Output>],
    tol: TieTolerance,
) -> Vec<Result<DecodeResult>> {
    crate::par::map(observations, |y| ml_decode(codebook, code, channel, y, tol))
}
