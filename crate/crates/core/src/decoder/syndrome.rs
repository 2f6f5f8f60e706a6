//! Binary syndrome decoding through a `2(n-k) x 2^(n-k)` distance matrix.
//!
//! Column `j` encodes the syndrome `b_j` of leader `j` bit by bit as
//! `u(b) = [b, 1-b]`; the observed syndrome `s` becomes `v(a) = [1-a, a]`.
//! Their product is `sum_i (1-s_i) b_i + s_i (1-b_i)`, the Hamming distance
//! between `s` and `b_j`, so the matching coset scores exactly zero.

use serde::Serialize;

use crate::codes::{coset_leaders, Limits, LinearCode, Symbol};
use crate::error::{Error, Result};
use crate::mailman::{self, BinaryMatrix, MailmanFactorization, OpCount};

/// Syndrome-distance matrix for `leaders`, which must be indexed by syndrome.
pub fn build_syndrome_matrix(code: &LinearCode, leaders: &[Vec<Symbol>]) -> Result<BinaryMatrix> {
    if code.q() != 2 {
        return Err(Error::NonBinaryCode(code.q()));
    }
    let r = code.n() - code.k();
    let mut m = BinaryMatrix::zeros(2 * r, leaders.len());
    for (j, e) in leaders.iter().enumerate() {
        for (i, &b) in code.syndrome(e)?.iter().enumerate() {
            m.set(2 * i + (1 - b as usize), j, true);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SyndromeDecodeResult {
    pub codeword: Vec<Symbol>,
    pub leader_index: usize,
    /// `d[j*]`; always 0 for a correct construction.
    pub coset_distance: f64,
}

/// Coset leaders plus their factorized distance matrix, built once per code.
#[derive(Clone, Debug)]
pub struct SyndromeDecoder {
    code: LinearCode,
    leaders: Vec<Vec<Symbol>>,
    matrix: BinaryMatrix,
    factorization: Option<MailmanFactorization>,
}

impl SyndromeDecoder {
    pub fn new(code: LinearCode, limits: &Limits) -> Result<Self> {
        if code.q() != 2 {
            return Err(Error::NonBinaryCode(code.q()));
        }
        let leaders = coset_leaders(&code, limits)?;
        let matrix = build_syndrome_matrix(&code, &leaders)?;
        let factorization = mailman::factorize(&matrix).ok();
        Ok(Self {
            code,
            leaders,
            matrix,
            factorization,
        })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn leaders(&self) -> &[Vec<Symbol>] {
        &self.leaders
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    /// `None` only when `n = k` (a single, zero, syndrome).
    pub fn factorization(&self) -> Option<&MailmanFactorization> {
        self.factorization.as_ref()
    }

    pub fn op_count(&self) -> OpCount {
        match &self.factorization {
            Some(f) => mailman::op_count(f),
            None => OpCount {
                multiplications: 0,
                additions: self.matrix.count_ones() as u64,
            },
        }
    }

    /// Distance from the syndrome of `y` to every leader's syndrome.
    pub fn distances(&self, y: &[Symbol]) -> Result<Vec<f64>> {
        if y.len() != self.code.n() {
            return Err(Error::DimensionMismatch {
                expected: self.code.n(),
                found: y.len(),
            });
        }
        if let Some(&s) = y.iter().find(|&&s| s > 1) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                q: 2,
            });
        }
        let v: Vec<f64> = self
            .code
            .syndrome(y)?
            .iter()
            .flat_map(|&a| [1.0 - a as f64, a as f64])
            .collect();
        match &self.factorization {
            Some(f) => mailman::vec_times_matrix(&v, f),
            None => mailman::vec_times_matrix_naive(&v, &self.matrix),
        }
    }

    pub fn decode(&self, y: &[Symbol]) -> Result<SyndromeDecodeResult> {
        let d = self.distances(y)?;
        let (j, &dist) = d
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .expect("at least one coset");
        if dist != 0.0 {
            return Err(Error::NoZeroDistanceCoset(dist));
        }
        let codeword = y.iter().zip(&self.leaders[j]).map(|(&a, &e)| a ^ e).collect();
        Ok(SyndromeDecodeResult {
            codeword,
            leader_index: j,
            coset_distance: dist,
        })
    }
}

/// One-shot form of [`SyndromeDecoder::decode`]; `leaders` and `matrix` must
/// come from [`coset_leaders`] and [`build_syndrome_matrix`] for `code`.
pub fn syndrome_decode(
    code: &LinearCode,
    leaders: &[Vec<Symbol>],
    matrix: &BinaryMatrix,
    y: &[Symbol],
) -> Result<SyndromeDecodeResult> {
    let expected = 1usize << (code.n() - code.k());
    if leaders.len() != expected || matrix.cols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: leaders.len().min(matrix.cols()),
        });
    }
    SyndromeDecoder {
        code: code.clone(),
        leaders: leaders.to_vec(),
        matrix: matrix.clone(),
        factorization: mailman::factorize(matrix).ok(),
    }
    .decode(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_codewords, hamming_distance};

    fn all_words(n: usize) -> impl Iterator<Item = Vec<Symbol>> {
        (0..1u32 << n).map(move |x| (0..n).map(|i| ((x >> (n - 1 - i)) & 1) as Symbol).collect())
    }

    #[test]
    fn repetition_matrix() {
        let code = LinearCode::new(2, vec![vec![1, 1, 1]]).unwrap();
        let leaders = coset_leaders(&code, &Limits::default()).unwrap();
        let m = build_syndrome_matrix(&code, &leaders).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 4));
        // Column j is u(bits of j): u(0) = [0, 1], u(1) = [1, 0].
        assert_eq!(m.column(0), vec![0, 1, 0, 1]);
        assert_eq!(m.column(1), vec![0, 1, 1, 0]);
        assert_eq!(m.column(2), vec![1, 0, 0, 1]);
        assert_eq!(m.column(3), vec![1, 0, 1, 0]);
    }

    #[test]
    fn hamming_exhaustive() {
        let code = LinearCode::hamming_7_4();
        let words = enumerate_codewords(&code, &Limits::default()).unwrap();
        let dec = SyndromeDecoder::new(code, &Limits::default()).unwrap();
        assert_eq!((dec.matrix().rows(), dec.matrix().cols()), (6, 8));
        assert!(dec.factorization().is_some());
        let cols: std::collections::HashSet<_> = (0..8).map(|j| dec.matrix().column(j)).collect();
        assert_eq!(cols.len(), 8);
        for y in all_words(7) {
            let r = dec.decode(&y).unwrap();
            assert_eq!(r.coset_distance, 0.0);
            assert!(words.iter().any(|c| c == &r.codeword[..]));
            let best = words.iter().map(|c| hamming_distance(c, &y)).min().unwrap();
            assert_eq!(hamming_distance(&r.codeword, &y), best);
        }
        for c in words.iter() {
            let r = dec.decode(c).unwrap();
            assert_eq!((r.leader_index, &r.codeword[..]), (0, c));
            for pos in 0..7 {
                let mut y = c.to_vec();
                y[pos] ^= 1;
                assert_eq!(dec.decode(&y).unwrap().codeword, c);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let dec = SyndromeDecoder::new(LinearCode::hamming_7_4(), &Limits::default()).unwrap();
        assert!(matches!(dec.decode(&[0; 6]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(dec.decode(&[0, 0, 2, 0, 0, 0, 0]), Err(Error::SymbolOutOfRange { .. })));
        let ternary = LinearCode::new(3, vec![vec![1, 2, 1]]).unwrap();
        assert!(matches!(SyndromeDecoder::new(ternary, &Limits::default()), Err(Error::NonBinaryCode(3))));
    }

    #[test]
    fn free_function_and_full_rank_code() {
        let code = LinearCode::hamming_7_4();
        let leaders = coset_leaders(&code, &Limits::default()).unwrap();
        let m = build_syndrome_matrix(&code, &leaders).unwrap();
        let r = syndrome_decode(&code, &leaders, &m, &[1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(r.codeword, vec![0; 7]);

        let identity = LinearCode::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let dec = SyndromeDecoder::new(identity, &Limits::default()).unwrap();
        assert_eq!(dec.decode(&[1, 0]).unwrap().codeword, vec![1, 0]);
    }
}
