//! Brute-force reference decoders.
//!
//! Each codeword's score is summed directly from channel log-likelihoods, and
//! selection is a plain two-pass scan or a full sort. Nothing here touches the
//! codebook matrix or the fast multiplication kernel.

use crate::channels::{Channel, IsiChannel};
use crate::codes::{hamming_distance, Code, Symbol};
use crate::decoder::{DecodeResult, TieTolerance};
use crate::error::{Error, Result};

/// Codebooks beyond this size are refused.
pub const MAX_CODEWORDS: usize = 1 << 20;

fn check(code: &Code, q: usize, len: usize) -> Result<()> {
    if code.len() > MAX_CODEWORDS {
        return Err(Error::CapacityExceeded {
            what: "oracle codewords",
            requested: code.len() as u128,
            limit: MAX_CODEWORDS as u128,
        });
    }
    if q != code.q() {
        return Err(Error::ChannelMismatch(format!(
            "channel alphabet {q} does not match code alphabet {}",
            code.q()
        )));
    }
    if len != code.n() {
        return Err(Error::DimensionMismatch {
            expected: code.n(),
            found: len,
        });
    }
    Ok(())
}

fn pick(code: &Code, scores: Vec<f64>, tol: TieTolerance) -> DecodeResult {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = tol.threshold(max);
    let ties: Vec<usize> = (0..scores.len()).filter(|&j| scores[j] >= floor).collect();
    let best = ties[0];
    DecodeResult {
        best_index: best,
        best_codeword: code.codeword(best).to_vec(),
        best_score: max,
        implausible: max == f64::NEG_INFINITY,
        ties,
        scores,
    }
}

/// Scores `sum_i ln P(y_i | c_i)` for every codeword.
pub fn esd_scores<C: Channel>(code: &Code, channel: &C, y: &[C::Output]) -> Result<Vec<f64>> {
    check(code, channel.input_alphabet(), y.len())?;
    code.iter()
        .map(|c| {
            let mut total = 0.0;
            for (&x, &yi) in c.iter().zip(y) {
                total += channel.log_likelihood(x as usize, yi)?;
            }
            Ok(total)
        })
        .collect()
}

pub fn esd_decode<C: Channel>(
    code: &Code,
    channel: &C,
    y: &[C::Output],
    tol: TieTolerance,
) -> Result<DecodeResult> {
    Ok(pick(code, esd_scores(code, channel, y)?, tol))
}

/// Scores `sum_i ln P(y_i | c_i, .., c_{i-L})`, missing history filled with
/// the channel's initial symbol.
pub fn esd_scores_isi<C: Channel>(
    code: &Code,
    channel: &IsiChannel<C>,
    y: &[C::Output],
) -> Result<Vec<f64>> {
    check(code, channel.q(), y.len())?;
    let memory = channel.memory();
    code.iter()
        .map(|c| {
            let mut total = 0.0;
            let mut tuple = vec![0 as Symbol; memory + 1];
            for (i, &yi) in y.iter().enumerate() {
                for (lag, slot) in tuple.iter_mut().enumerate() {
                    *slot = if lag <= i { c[i - lag] } else { channel.initial_symbol() };
                }
                total += channel.log_likelihood_tuple(&tuple, yi)?;
            }
            Ok(total)
        })
        .collect()
}

pub fn esd_decode_isi<C: Channel>(
    code: &Code,
    channel: &IsiChannel<C>,
    y: &[C::Output],
    tol: TieTolerance,
) -> Result<DecodeResult> {
    Ok(pick(code, esd_scores_isi(code, channel, y)?, tol))
}

/// Nearest codeword in Hamming distance; scores are negated distances.
pub fn min_distance_decode(code: &Code, y: &[Symbol]) -> Result<DecodeResult> {
    check(code, code.q(), y.len())?;
    let scores = code.iter().map(|c| -(hamming_distance(c, y) as f64)).collect();
    Ok(pick(code, scores, TieTolerance::EXACT))
}

/// Every index ordered by score descending, tie groups by index: walk the
/// sorted scores, and each group holds the scores tied with its first member.
pub fn full_ranking(scores: &[f64], tol: TieTolerance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut ranking = Vec::with_capacity(order.len());
    let mut i = 0;
    while i < order.len() {
        let floor = tol.threshold(scores[order[i]]);
        let mut group = vec![order[i]];
        i += 1;
        while i < order.len() && scores[order[i]] >= floor {
            group.push(order[i]);
            i += 1;
        }
        group.sort_unstable();
        ranking.extend(group);
    }
    ranking
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::DiscreteChannel;

    fn example1() -> Code {
        Code::binary(&["001", "010", "100", "111"]).unwrap()
    }

    #[test]
    fn example1_oracles() {
        let ch = DiscreteChannel::bsc(0.1).unwrap();
        let r = esd_decode(&example1(), &ch, &[0, 0, 0], TieTolerance::EXACT).unwrap();
        assert_eq!(r.ties, vec![0, 1, 2]);
        let r = min_distance_decode(&example1(), &[0, 0, 0]).unwrap();
        assert_eq!((r.ties, r.best_score), (vec![0, 1, 2], -1.0));
        let r = min_distance_decode(&example1(), &[1, 1, 1]).unwrap();
        assert_eq!((r.best_index, r.best_score), (3, 0.0));
    }

    #[test]
    fn noiseless_recovers() {
        let ch = DiscreteChannel::noiseless(2).unwrap();
        let r = esd_decode(&example1(), &ch, &[0, 1, 0], TieTolerance::EXACT).unwrap();
        assert_eq!((r.best_index, r.ties.len()), (1, 1));
    }

    #[test]
    fn min_distance_equals_bsc_esd() {
        let code = Code::binary(&["00000", "11100", "00111", "10101", "11011"]).unwrap();
        for p in [0.05, 0.2, 0.45] {
            let ch = DiscreteChannel::bsc(p).unwrap();
            for x in 0..32u32 {
                let y: Vec<usize> = (0..5).map(|i| ((x >> i) & 1) as usize).collect();
                let ys: Vec<Symbol> = y.iter().map(|&b| b as Symbol).collect();
                let a = esd_decode(&code, &ch, &y, TieTolerance::default()).unwrap();
                let b = min_distance_decode(&code, &ys).unwrap();
                assert_eq!(a.ties, b.ties);
            }
        }
    }

    #[test]
    fn isi_memoryless_equals_esd() {
        let ch = DiscreteChannel::from_probabilities(&[vec![0.8, 0.2], vec![0.35, 0.65]]).unwrap();
        let isi = IsiChannel::new(2, 0, 0, ch.clone()).unwrap();
        let y = [1, 1, 0];
        assert_eq!(
            esd_scores(&example1(), &ch, &y).unwrap(),
            esd_scores_isi(&example1(), &isi, &y).unwrap()
        );
        let single = Code::binary(&["101"]).unwrap();
        assert_eq!(esd_decode_isi(&single, &isi, &y, TieTolerance::EXACT).unwrap().best_index, 0);
    }

    #[test]
    fn ranking_groups() {
        let s = [1.0, 3.0, 1.0, 3.0, f64::NEG_INFINITY, 2.0];
        assert_eq!(full_ranking(&s, TieTolerance::EXACT), vec![1, 3, 5, 0, 2, 4]);
    }
}
