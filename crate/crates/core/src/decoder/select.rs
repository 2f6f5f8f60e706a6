//! Argmax and top-ℓ selection over score vectors.
//!
//! Two scores tie when the lower one is within `rel · |higher|` of the higher
//! one. Ranking walks the scores in descending order and opens a new tie group
//! whenever a score falls below the group leader's tolerance band; each group
//! is then listed by ascending codeword index.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance under which two scores count as tied.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TieTolerance(f64);

impl TieTolerance {
    pub const EXACT: TieTolerance = TieTolerance(0.0);

    pub fn relative(rel: f64) -> Result<Self> {
        if (0.0..1.0).contains(&rel) {
            Ok(Self(rel))
        } else {
            Err(Error::InvalidParams(format!("tie tolerance {rel} outside [0, 1)")))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    /// Lowest score still tied with `score`. Monotone non-decreasing in `score`.
    #[inline]
    pub fn threshold(&self, score: f64) -> f64 {
        if score.is_finite() {
            score - self.0 * score.abs()
        } else {
            score
        }
    }
}

impl Default for TieTolerance {
    /// `1e-9`: sums of identical addends taken in different orders differ in
    /// their last bits only.
    fn default() -> Self {
        Self(1e-9)
    }
}

/// Best index and full tie set of a score vector, in a single pass.
///
/// `best` is the smallest tied index. Panics on an empty vector.
pub fn argmax_scan(scores: &[f64], tol: TieTolerance) -> (usize, Vec<usize>) {
    assert!(!scores.is_empty(), "argmax of an empty score vector");
    let mut max = scores[0];
    let mut ties = vec![0];
    for (j, &s) in scores.iter().enumerate().skip(1) {
        if s > max {
            max = s;
            let floor = tol.threshold(max);
            ties.retain(|&i| scores[i] >= floor);
        }
        if s >= tol.threshold(max) {
            ties.push(j);
        }
    }
    (ties[0], ties)
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(other.1.cmp(&self.1))
    }
}

/// The `ell` best `(index, score)` pairs: score descending, tie groups by index.
///
/// A size-`ell` min-heap finds the `ell`-th largest score `t`; only scores
/// tied with `t` or above can appear, so just those are sorted.
pub fn top_list(scores: &[f64], ell: usize, tol: TieTolerance) -> Result<Vec<(usize, f64)>> {
    if ell == 0 || ell > scores.len() {
        return Err(Error::ListSizeOutOfRange {
            list: ell,
            max: scores.len(),
        });
    }
    let mut heap = BinaryHeap::with_capacity(ell + 1);
    for (j, &s) in scores.iter().enumerate() {
        heap.push(Reverse(Entry(s, j)));
        if heap.len() > ell {
            heap.pop();
        }
    }
    let cutoff = heap.peek().map(|Reverse(e)| tol.threshold(e.0)).expect("ell >= 1");
    let mut candidates: Vec<(usize, f64)> = scores
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >= cutoff)
        .map(|(j, &s)| (j, s))
        .collect();
    order_by_tie_groups(&mut candidates, tol);
    candidates.truncate(ell);
    Ok(candidates)
}

/// Sorts by score descending, then reorders each tie group by index.
fn order_by_tie_groups(entries: &mut [(usize, f64)], tol: TieTolerance) {
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut start = 0;
    while start < entries.len() {
        let floor = tol.threshold(entries[start].1);
        let end = start + entries[start..].iter().take_while(|e| e.1 >= floor).count();
        entries[start..end].sort_by_key(|e| e.0);
        start = end;
    }
}
