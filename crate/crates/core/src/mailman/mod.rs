//! Fast real-vector times binary-matrix products.
//!
//! A binary matrix `M` with `S` columns is cut row-wise into blocks of height
//! `h = floor(log2 S)`. Inside one block every column is one of the `2^h`
//! possible bit patterns, so `M_block = U · P` where `U` is the universal
//! matrix whose column `j` is the binary expansion of `j` and `P` picks one
//! column of `U` per column of `M`. A row vector times `U` costs `2^h - 1`
//! additions through the doubling recursion `[r, r + w0]`, and the product
//! with `P` is a gather. Summed over `ceil(m / h)` blocks this gives the
//! `O(m S / log S)` cost of the whole product, with no multiplications.

mod matrix;
mod parallel;

pub use matrix::BinaryMatrix;
pub use parallel::vec_times_matrix_parallel;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest universal-matrix height the kernel will materialize (`2^30` entries).
pub const MAX_HEIGHT: usize = 30;

/// Scalar operation tally.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub multiplications: u64,
    pub additions: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.multiplications + self.additions
    }

    /// Cost of the straightforward dense product of a length-`rows` vector with
    /// a `rows x cols` matrix: one multiplication and one accumulation per entry.
    pub fn dense_product(rows: usize, cols: usize) -> Self {
        let entries = (rows * cols) as u64;
        Self {
            multiplications: entries,
            additions: entries,
        }
    }
}

impl std::ops::Add for OpCount {
    type Output = OpCount;
    fn add(self, rhs: Self) -> Self {
        Self {
            multiplications: self.multiplications + rhs.multiplications,
            additions: self.additions + rhs.additions,
        }
    }
}

/// Sink for operation counts; the zero-sized `NoTally` compiles away.
pub(crate) trait Tally {
    fn add(&mut self, n: u64);
}

pub(crate) struct NoTally;

impl Tally for NoTally {
    #[inline(always)]
    fn add(&mut self, _: u64) {}
}

impl Tally for OpCount {
    #[inline(always)]
    fn add(&mut self, n: u64) {
        self.additions += n;
    }
}

/// One horizontal slice of the factorized matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowBlock {
    start: usize,
    height: usize,
    /// Pattern index of each column within this block; the first row of the
    /// block is the most significant bit.
    patterns: Vec<u32>,
}

impl RowBlock {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn patterns(&self) -> &[u32] {
        &self.patterns
    }
}

/// `M = U · P` factorization of a binary matrix, block by block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MailmanFactorization {
    rows: usize,
    cols: usize,
    blocks: Vec<RowBlock>,
}

/// Block height used for a matrix with `cols` columns.
pub fn block_height(cols: usize) -> usize {
    let log = (usize::BITS - 1 - cols.max(1).leading_zeros()) as usize;
    log.clamp(1, MAX_HEIGHT)
}

/// Factorizes `m` into row blocks of height `floor(log2 cols)` (the last block
/// takes whatever rows remain).
pub fn factorize(m: &BinaryMatrix) -> Result<MailmanFactorization> {
    let cols = m.cols();
    if cols < 2 {
        return Err(Error::DegenerateMatrix { cols });
    }
    let h = block_height(cols);
    let mut blocks = Vec::with_capacity(m.rows().div_ceil(h));
    let mut start = 0;
    while start < m.rows() {
        let height = h.min(m.rows() - start);
        let patterns = (0..cols)
            .map(|j| {
                (start..start + height).fold(0u32, |acc, r| (acc << 1) | m.get(r, j) as u32)
            })
            .collect();
        blocks.push(RowBlock {
            start,
            height,
            patterns,
        });
        start += height;
    }
    Ok(MailmanFactorization {
        rows: m.rows(),
        cols,
        blocks,
    })
}

impl MailmanFactorization {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn blocks(&self) -> &[RowBlock] {
        &self.blocks
    }

    /// Rebuilds the factorized matrix from `U` and the correspondence lists.
    pub fn reconstruct(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.rows, self.cols);
        for b in &self.blocks {
            for (j, &p) in b.patterns.iter().enumerate() {
                for t in 0..b.height {
                    if (p >> (b.height - 1 - t)) & 1 == 1 {
                        m.set(b.start + t, j, true);
                    }
                }
            }
        }
        m
    }
}

/// `w^T · U_{2^h}` for `h = w.len()`: entry `j` is the sum of the `w[t]` whose
/// bit (most significant first) is set in `j`.
pub fn vec_times_universal(w: &[f64]) -> Result<Vec<f64>> {
    if w.is_empty() || w.len() > MAX_HEIGHT {
        return Err(Error::HeightOutOfRange(w.len()));
    }
    let mut out = Vec::new();
    universal_product(w, &mut out, &mut NoTally);
    Ok(out)
}

/// Doubling recursion run bottom-up: start from `[0]`, and for the rows from
/// last to first append `r + w[t]` to the current table `r`.
#[inline]
pub(crate) fn universal_product<T: Tally>(w: &[f64], out: &mut Vec<f64>, tally: &mut T) {
    out.clear();
    out.reserve(1 << w.len());
    out.push(0.0);
    for &wt in w.iter().rev() {
        let len = out.len();
        for i in 0..len {
            let v = out[i] + wt;
            out.push(v);
        }
        tally.add(len as u64);
    }
}

fn check_input(v: &[f64], rows: usize) -> Result<()> {
    if v.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: v.len(),
        });
    }
    // -inf is a legal log-probability; +inf and NaN are not.
    if let Some(&bad) = v.iter().find(|x| x.is_nan() || *x == &f64::INFINITY) {
        return Err(Error::NonFiniteInput(bad));
    }
    Ok(())
}

/// `v · M` through the factorization.
///
/// `-inf` entries are handled exactly: the recursion only ever adds an entry
/// into the pattern sums whose bit selects it, so a `-inf` reaches precisely
/// the columns that have a one in that row.
pub fn vec_times_matrix(v: &[f64], f: &MailmanFactorization) -> Result<Vec<f64>> {
    check_input(v, f.rows)?;
    Ok(product(v, f, &mut NoTally))
}

/// As [`vec_times_matrix`], also returning the operations actually executed.
pub fn vec_times_matrix_counted(
    v: &[f64],
    f: &MailmanFactorization,
) -> Result<(Vec<f64>, OpCount)> {
    check_input(v, f.rows)?;
    let mut count = OpCount::default();
    let out = product(v, f, &mut count);
    Ok((out, count))
}

pub(crate) fn product<T: Tally>(v: &[f64], f: &MailmanFactorization, tally: &mut T) -> Vec<f64> {
    let mut out = vec![0.0; f.cols];
    let mut table = Vec::new();
    for b in &f.blocks {
        universal_product(&v[b.start..b.start + b.height], &mut table, tally);
        for (acc, &p) in out.iter_mut().zip(&b.patterns) {
            *acc += table[p as usize];
        }
        tally.add(f.cols as u64);
    }
    out
}

/// Exact number of operations [`vec_times_matrix`] performs on `f`.
pub fn op_count(f: &MailmanFactorization) -> OpCount {
    let additions = f
        .blocks
        .iter()
        .map(|b| ((1u64 << b.height) - 1) + f.cols as u64)
        .sum();
    OpCount {
        multiplications: 0,
        additions,
    }
}

/// Upper bound `4 m S / log2 S + 2 S + m` on the additions of one product.
pub fn addition_bound(rows: usize, cols: usize) -> f64 {
    let (m, s) = (rows as f64, cols as f64);
    4.0 * m * s / s.log2() + 2.0 * s + m
}

/// Reference product: column `j` sums `v[i]` over the rows where `M[i, j] = 1`,
/// top to bottom. Zero entries are skipped, never multiplied.
pub fn vec_times_matrix_naive(v: &[f64], m: &BinaryMatrix) -> Result<Vec<f64>> {
    Ok(vec_times_matrix_naive_counted(v, m)?.0)
}

pub fn vec_times_matrix_naive_counted(v: &[f64], m: &BinaryMatrix) -> Result<(Vec<f64>, OpCount)> {
    check_input(v, m.rows())?;
    let mut count = OpCount::default();
    let out = (0..m.cols())
        .map(|j| {
            let mut acc = 0.0;
            let mut adds = 0;
            for r in m.column_ones(j) {
                acc += v[r];
                adds += 1;
            }
            count.additions += adds;
            acc
        })
        .collect();
    Ok((out, count))
}

fn check_finite(v: &[f64], rows: usize) -> Result<()> {
    check_input(v, rows)?;
    match v.iter().find(|x| !x.is_finite()) {
        Some(&bad) => Err(Error::NonFiniteInput(bad)),
        None => Ok(()),
    }
}

/// `v · (2B - J)`, the product with the `{-1, +1}` matrix whose `+1` entries
/// are the ones of `B`, computed as `2 (v · B) - sum(v)`.
pub fn vec_times_bipolar_matrix(v: &[f64], f: &MailmanFactorization) -> Result<Vec<f64>> {
    check_finite(v, f.rows)?;
    let total: f64 = v.iter().sum();
    let mut out = product(v, f, &mut NoTally);
    for x in &mut out {
        *x = (*x + *x) - total;
    }
    Ok(out)
}

/// Operations of [`vec_times_bipolar_matrix`]: the binary product, the row sum
/// and two additions per column.
pub fn bipolar_op_count(f: &MailmanFactorization) -> OpCount {
    op_count(f)
        + OpCount {
            multiplications: 0,
            additions: f.rows.saturating_sub(1) as u64 + 2 * f.cols as u64,
        }
}

/// Reference bipolar product `sum_i v[i] * (2 B[i, j] - 1)`.
pub fn vec_times_bipolar_matrix_naive(v: &[f64], b: &BinaryMatrix) -> Result<Vec<f64>> {
    check_finite(v, b.rows())?;
    Ok((0..b.cols())
        .map(|j| {
            v.iter()
                .enumerate()
                .map(|(i, &x)| if b.get(i, j) { x } else { -x })
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example1() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[
            [1u8, 1, 0, 0],
            [0, 0, 1, 1],
            [1, 0, 1, 0],
            [0, 1, 0, 1],
            [0, 1, 1, 0],
            [1, 0, 0, 1],
        ])
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                if rng.random::<bool>() {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[test]
    fn universal_small_cases() {
        assert_eq!(vec_times_universal(&[5.0]).unwrap(), vec![0.0, 5.0]);
        assert_eq!(vec_times_universal(&[1.0, 2.0]).unwrap(), vec![0.0, 2.0, 1.0, 3.0]);
        assert!(matches!(vec_times_universal(&[]), Err(Error::HeightOutOfRange(0))));
        assert!(matches!(
            vec_times_universal(&[0.0; 31]),
            Err(Error::HeightOutOfRange(31))
        ));
    }

    #[test]
    fn universal_matches_bit_sums_exhaustively() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for h in 1..=10 {
            let w: Vec<f64> = (0..h).map(|_| rng.random_range(-4.0..4.0)).collect();
            let t = vec_times_universal(&w).unwrap();
            assert_eq!(t.len(), 1 << h);
            for (j, &tj) in t.iter().enumerate() {
                // Same addends, added in the order the recursion adds them
                // (least significant row first).
                let expected = (0..h)
                    .rev()
                    .filter(|&r| (j >> (h - 1 - r)) & 1 == 1)
                    .fold(0.0, |acc, r| acc + w[r]);
                assert_eq!(tj, expected, "h={h} j={j}");
            }
        }
    }

    #[test]
    fn example1_factorization() {
        let f = factorize(&example1()).unwrap();
        assert_eq!(f.blocks().len(), 3);
        assert!(f.blocks().iter().all(|b| b.height() == 2));
        assert_eq!(f.blocks()[0].patterns(), &[2, 2, 1, 1]);
        assert_eq!(f.blocks()[1].patterns(), &[2, 1, 2, 1]);
        assert_eq!(f.blocks()[2].patterns(), &[1, 2, 2, 1]);
        assert_eq!(f.reconstruct(), example1());
    }

    #[test]
    fn zero_matrix_and_degenerate_inputs() {
        let f = factorize(&BinaryMatrix::zeros(5, 8)).unwrap();
        assert!(f.blocks().iter().all(|b| b.patterns().iter().all(|&p| p == 0)));
        assert_eq!(f.blocks().iter().map(|b| b.height()).collect::<Vec<_>>(), vec![3, 2]);
        assert!(matches!(
            factorize(&BinaryMatrix::zeros(4, 1)),
            Err(Error::DegenerateMatrix { cols: 1 })
        ));
    }

    #[test]
    fn distinct_patterns_reconstruct() {
        let m = BinaryMatrix::from_rows(&[
            [0u8, 1, 1, 0],
            [1, 0, 1, 0],
            [0, 0, 1, 1],
            [1, 1, 0, 1],
        ]);
        let f = factorize(&m).unwrap();
        assert_eq!(f.blocks().len(), 2);
        assert_eq!(f.reconstruct(), m);
    }

    #[test]
    fn example1_product() {
        let (a, b) = (0.9f64.ln(), 0.1f64.ln());
        let v = [a, b, a, b, a, b];
        let m = example1();
        let f = factorize(&m).unwrap();
        let fast = vec_times_matrix(&v, &f).unwrap();
        let naive = vec_times_matrix_naive(&v, &m).unwrap();
        let expected = [2.0 * a + b, 2.0 * a + b, 2.0 * a + b, 3.0 * b];
        for k in 0..4 {
            assert!((fast[k] - expected[k]).abs() <= 1e-12 * expected[k].abs());
            assert!((naive[k] - expected[k]).abs() <= 1e-12 * expected[k].abs());
        }
        assert_eq!(vec_times_matrix(&[0.0; 6], &f).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn all_ones_naive() {
        let m = BinaryMatrix::from_rows(&[[1u8; 5]; 7]);
        assert_eq!(vec_times_matrix_naive(&[1.0; 7], &m).unwrap(), vec![7.0; 5]);
    }

    #[test]
    fn random_products_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let rows = rng.random_range(1..80);
            let cols = rng.random_range(2..300);
            let m = random_matrix(&mut rng, rows, cols);
            let v: Vec<f64> = (0..rows).map(|_| rng.random_range(-10.0..0.0)).collect();
            let f = factorize(&m).unwrap();
            let fast = vec_times_matrix(&v, &f).unwrap();
            let slow = vec_times_matrix_naive(&v, &m).unwrap();
            for (x, y) in fast.iter().zip(&slow) {
                assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
            }
        }
        let m = random_matrix(&mut rng, 64, 256);
        let v: Vec<f64> = (0..64).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = vec_times_matrix(&v, &factorize(&m).unwrap()).unwrap();
        let slow = vec_times_matrix_naive(&v, &m).unwrap();
        for (x, y) in fast.iter().zip(&slow) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }

    #[test]
    fn negative_infinity_reaches_only_selected_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rows = rng.random_range(2..40);
            let cols = rng.random_range(2..100);
            let m = random_matrix(&mut rng, rows, cols);
            let mut v: Vec<f64> = (0..rows).map(|_| rng.random_range(-3.0..0.0)).collect();
            for _ in 0..rng.random_range(1..4) {
                v[rng.random_range(0..rows)] = f64::NEG_INFINITY;
            }
            let fast = vec_times_matrix(&v, &factorize(&m).unwrap()).unwrap();
            let slow = vec_times_matrix_naive(&v, &m).unwrap();
            for (x, y) in fast.iter().zip(&slow) {
                assert!(!x.is_nan());
                if y.is_finite() {
                    assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
                } else {
                    assert_eq!(x, y);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let m = example1();
        let f = factorize(&m).unwrap();
        assert!(matches!(
            vec_times_matrix(&[0.0; 5], &f),
            Err(Error::DimensionMismatch { expected: 6, found: 5 })
        ));
        assert!(matches!(
            vec_times_matrix(&[0.0, 0.0, f64::NAN, 0.0, 0.0, 0.0], &f),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(vec_times_bipolar_matrix(&[f64::NEG_INFINITY, 0.0, 0.0, 0.0, 0.0, 0.0], &f).is_err());
    }

    #[test]
    fn bipolar_example() {
        // Columns are the codewords 001, 010, 100, 111, with 1 -> +1.
        let b = BinaryMatrix::from_rows(&[[0u8, 0, 1, 1], [0, 1, 0, 1], [1, 0, 0, 1]]);
        let f = factorize(&b).unwrap();
        assert_eq!(
            vec_times_bipolar_matrix(&[-1.0, 0.0, 1.0], &f).unwrap(),
            vec![2.0, 0.0, -2.0, 0.0]
        );
        assert_eq!(vec_times_bipolar_matrix(&[0.0; 3], &f).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn bipolar_random_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let rows = rng.random_range(1..40);
            let cols = rng.random_range(2..200);
            let b = random_matrix(&mut rng, rows, cols);
            let v: Vec<f64> = (0..rows).map(|_| rng.random_range(-2.0..2.0)).collect();
            let fast = vec_times_bipolar_matrix(&v, &factorize(&b).unwrap()).unwrap();
            let slow = vec_times_bipolar_matrix_naive(&v, &b).unwrap();
            for (x, y) in fast.iter().zip(&slow) {
                assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()) * rows as f64);
            }
        }
    }

    #[test]
    fn op_count_matches_instrumentation() {
        let f = factorize(&example1()).unwrap();
        let (_, counted) = vec_times_matrix_counted(&[1.0; 6], &f).unwrap();
        assert_eq!(counted, op_count(&f));
        // 3 blocks of height 2: 3 additions per universal product, 4 gathers per block.
        assert_eq!(op_count(&f), OpCount { multiplications: 0, additions: 3 * 3 + 3 * 4 });

        let f = factorize(&BinaryMatrix::zeros(1, 3)).unwrap();
        assert_eq!(f.blocks().len(), 1);
        assert_eq!(op_count(&f).additions, 1 + 3);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&mut rng, 512, 4096);
        let f = factorize(&m).unwrap();
        let (_, counted) = vec_times_matrix_counted(&vec![0.5; 512], &f).unwrap();
        assert_eq!(counted, op_count(&f));
        assert!((counted.additions as f64) <= 4.0 * 512.0 * 4096.0 / 12.0);
    }

    #[test]
    fn block_heights() {
        assert_eq!(block_height(2), 1);
        assert_eq!(block_height(3), 1);
        assert_eq!(block_height(4), 2);
        assert_eq!(block_height(4095), 11);
        assert_eq!(block_height(4096), 12);
        assert_eq!(block_height(usize::MAX), MAX_HEIGHT);
    }
}
