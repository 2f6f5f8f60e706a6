use super::{check_input, MailmanFactorization};
use crate::error::Result;

#[cfg(feature = "parallel")]
use super::{universal_product, NoTally};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
const GATHER_CHUNK: usize = 4096;

/// Multi-threaded [`super::vec_times_matrix`].
///
/// Universal products of the row blocks run concurrently; the gather then runs
/// over column chunks, each column still summing its blocks in block order, so
/// the result is bit-identical to the sequential kernel. Without the
/// `parallel` feature this is the sequential kernel.
pub fn vec_times_matrix_parallel(v: &[f64], f: &MailmanFactorization) -> Result<Vec<f64>> {
    check_input(v, f.rows)?;
    #[cfg(feature = "parallel")]
    {
        let tables: Vec<Vec<f64>> = f
            .blocks
            .par_iter()
            .map(|b| {
                let mut t = Vec::new();
                universal_product(&v[b.start..b.start + b.height], &mut t, &mut NoTally);
                t
            })
            .collect();
        let mut out = vec![0.0; f.cols];
        out.par_chunks_mut(GATHER_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                let base = c * GATHER_CHUNK;
                for (b, table) in f.blocks.iter().zip(&tables) {
                    let patterns = &b.patterns[base..base + chunk.len()];
                    for (acc, &p) in chunk.iter_mut().zip(patterns) {
                        *acc += table[p as usize];
                    }
                }
            });
        Ok(out)
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(super::product(v, f, &mut super::NoTally))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{factorize, vec_times_matrix, BinaryMatrix};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parallel_is_bit_identical_to_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (rows, cols) in [(6, 4), (64, 10_000), (200, 513)] {
            let mut m = BinaryMatrix::zeros(rows, cols);
            for j in 0..cols {
                for i in 0..rows {
                    m.set(i, j, rng.random::<bool>());
                }
            }
            let v: Vec<f64> = (0..rows).map(|_| rng.random_range(-5.0..1.0)).collect();
            let f = factorize(&m).unwrap();
            assert_eq!(
                vec_times_matrix_parallel(&v, &f).unwrap(),
                vec_times_matrix(&v, &f).unwrap()
            );
        }
    }
}
