use rand::Rng;

use super::field::{FieldMatrix, PrimeField};
use super::{hamming_weight, Code, Limits, Symbol};
use crate::error::{Error, Result};

/// A linear `[n, k]_q` code over a prime field, given by a full-rank generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    field: PrimeField,
    generator: FieldMatrix,
    parity_check: FieldMatrix,
}

impl LinearCode {
    /// Validates the generator and derives a parity-check matrix for it.
    pub fn new(q: usize, generator: Vec<Vec<Symbol>>) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let n = generator.first().map_or(0, |r| r.len());
        let generator = FieldMatrix::from_rows(generator, n)?;
        check_entries(&generator, q)?;
        let parity_check = parity_check_matrix(&field, &generator)?;
        Ok(Self {
            field,
            generator,
            parity_check,
        })
    }

    /// Uses a caller-supplied parity-check matrix after checking `G H^T = 0`
    /// and `rank H = n - k`.
    pub fn with_parity_check(
        q: usize,
        generator: Vec<Vec<Symbol>>,
        parity_check: Vec<Vec<Symbol>>,
    ) -> Result<Self> {
        let mut code = Self::new(q, generator)?;
        let h = FieldMatrix::from_rows(parity_check, code.n())?;
        check_entries(&h, q)?;
        let expected = code.n() - code.k();
        if h.rows() != expected || h.rank(&code.field) != expected {
            return Err(Error::InvalidParams(format!(
                "parity-check matrix must have rank n - k = {expected}"
            )));
        }
        if !code.generator.mul_transpose(&code.field, &h)?.is_zero() {
            return Err(Error::InvalidParams("G H^T is not zero".into()));
        }
        code.parity_check = h;
        Ok(code)
    }

    /// Random full-rank generator: rows are redrawn until each one raises the rank.
    pub fn random<R: Rng + ?Sized>(q: usize, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let field = PrimeField::new(q)?;
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        let mut rows: Vec<Vec<Symbol>> = Vec::with_capacity(k);
        while rows.len() < k {
            let candidate: Vec<Symbol> = (0..n).map(|_| rng.random_range(0..q as Symbol)).collect();
            rows.push(candidate);
            let m = FieldMatrix::from_rows(rows.clone(), n)?;
            if m.rank(&field) < rows.len() {
                rows.pop();
            }
        }
        Self::new(q, rows)
    }

    /// The `[7, 4]` Hamming code with generator `[I_4 | A]`.
    pub fn hamming_7_4() -> Self {
        Self::new(
            2,
            vec![
                vec![1, 0, 0, 0, 1, 1, 0],
                vec![0, 1, 0, 0, 1, 0, 1],
                vec![0, 0, 1, 0, 0, 1, 1],
                vec![0, 0, 0, 1, 1, 1, 1],
            ],
        )
        .expect("valid Hamming generator")
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn generator(&self) -> &FieldMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &FieldMatrix {
        &self.parity_check
    }

    /// `m · G` for a message over `0..q`.
    pub fn encode(&self, message: &[Symbol]) -> Result<Vec<Symbol>> {
        if message.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: message.len(),
            });
        }
        let f = &self.field;
        let mut c = vec![0; self.n()];
        for (r, &m) in message.iter().enumerate() {
            if m != 0 {
                for (x, &g) in c.iter_mut().zip(self.generator.row(r)) {
                    *x = f.add(*x, f.mul(m, g));
                }
            }
        }
        Ok(c)
    }

    pub fn syndrome(&self, v: &[Symbol]) -> Result<Vec<Symbol>> {
        syndrome(&self.field, &self.parity_check, v)
    }
}

fn check_entries(m: &FieldMatrix, q: usize) -> Result<()> {
    for r in 0..m.rows() {
        if let Some(&s) = m.row(r).iter().find(|&&s| s as usize >= q) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                q,
            });
        }
    }
    Ok(())
}

/// All `q^k` codewords `m · G`, messages in lexicographic order (first message
/// symbol most significant).
pub fn enumerate_codewords(code: &LinearCode, limits: &Limits) -> Result<Code> {
    let (q, n, k) = (code.q(), code.n(), code.k());
    let count = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > limits.max_codewords as u128 {
        return Err(Error::CapacityExceeded {
            what: "codewords",
            requested: count,
            limit: limits.max_codewords as u128,
        });
    }
    let count = count as usize;
    let f = code.field();
    let g = code.generator();
    let mut symbols = Vec::with_capacity(count * n);
    let mut message = vec![0 as Symbol; k];
    let mut word = vec![0 as Symbol; n];
    symbols.extend_from_slice(&word);
    // Odometer over messages: bumping digit t adds row t; a wrap from q-1 to 0
    // also adds row t once, which is q·row = 0, and carries.
    for _ in 1..count {
        for t in (0..k).rev() {
            for (x, &gv) in word.iter_mut().zip(g.row(t)) {
                *x = f.add(*x, gv);
            }
            message[t] += 1;
            if (message[t] as usize) < q {
                break;
            }
            message[t] = 0;
        }
        symbols.extend_from_slice(&word);
    }
    Ok(Code::from_parts_unchecked(q, n, symbols))
}

fn parity_check_matrix(f: &PrimeField, g: &FieldMatrix) -> Result<FieldMatrix> {
    let (k, n) = (g.rows(), g.cols());
    let mut reduced = g.clone();
    let pivots = reduced.reduce(f);
    if k == 0 || pivots.len() < k {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            expected: k,
        });
    }
    // With pivots moved to the front, G = [I_k | A] and H = [-A^T | I_{n-k}].
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut h = FieldMatrix::zeros(n - k, n);
    for (j, &fc) in free.iter().enumerate() {
        for (i, &pc) in pivots.iter().enumerate() {
            h.set(j, pc, f.neg(reduced.get(i, fc)));
        }
        h.set(j, fc, 1);
    }
    Ok(h)
}

/// Parity-check matrix `H` with `G H^T = 0`, as rows over `0..q`.
pub fn parity_check_from_generator(code: &LinearCode) -> Result<FieldMatrix> {
    parity_check_matrix(code.field(), code.generator())
}

/// `H · v^T` over the field.
pub fn syndrome(f: &PrimeField, h: &FieldMatrix, v: &[Symbol]) -> Result<Vec<Symbol>> {
    h.mul_vec(f, v)
}

/// Base-`q` value of a syndrome, first entry most significant.
pub fn syndrome_index(s: &[Symbol], q: usize) -> usize {
    s.iter().fold(0, |acc, &x| acc * q + x as usize)
}

/// One minimum-weight error pattern per syndrome, indexed by [`syndrome_index`].
///
/// Patterns are visited by non-decreasing weight and lexicographically within a
/// weight; the first pattern seen for a syndrome becomes its leader.
pub fn coset_leaders(code: &LinearCode, limits: &Limits) -> Result<Vec<Vec<Symbol>>> {
    let (q, n) = (code.q(), code.n());
    let r = n - code.k();
    let count = (q as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if count > limits.max_codewords as u128 {
        return Err(Error::CapacityExceeded {
            what: "coset leaders",
            requested: count,
            limit: limits.max_codewords as u128,
        });
    }
    let count = count as usize;
    let mut leaders: Vec<Option<Vec<Symbol>>> = vec![None; count];
    let mut found = 0;
    let mut pattern = vec![0 as Symbol; n];
    for weight in 0..=n {
        let done = visit_weight(&mut pattern, 0, weight, q, &mut |e| {
            let s = syndrome_index(&code.syndrome(e).expect("length n"), q);
            if leaders[s].is_none() {
                debug_assert_eq!(hamming_weight(e), weight);
                leaders[s] = Some(e.to_vec());
                found += 1;
            }
            found == count
        });
        if done {
            break;
        }
    }
    Ok(leaders
        .into_iter()
        .map(|l| l.expect("every syndrome is reached by some pattern"))
        .collect())
}

/// Visits every vector with exactly `remaining` nonzero entries in positions
/// `pos..`, in lexicographic order. Stops early when `f` returns true.
fn visit_weight<F: FnMut(&[Symbol]) -> bool>(
    e: &mut [Symbol],
    pos: usize,
    remaining: usize,
    q: usize,
    f: &mut F,
) -> bool {
    if pos == e.len() {
        return f(e);
    }
    if e.len() - pos > remaining {
        e[pos] = 0;
        if visit_weight(e, pos + 1, remaining, q, f) {
            return true;
        }
    }
    if remaining > 0 {
        for a in 1..q as Symbol {
            e[pos] = a;
            if visit_weight(e, pos + 1, remaining - 1, q, f) {
                e[pos] = 0;
                return true;
            }
        }
        e[pos] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::hamming_distance;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn words(c: &Code) -> Vec<Vec<Symbol>> {
        c.iter().map(|w| w.to_vec()).collect()
    }

    #[test]
    fn enumerate_small_codes() {
        let code = LinearCode::new(2, vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let c = enumerate_codewords(&code, &Limits::default()).unwrap();
        assert_eq!(words(&c), vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);

        let rep = LinearCode::new(2, vec![vec![1, 1, 1]]).unwrap();
        let c = enumerate_codewords(&rep, &Limits::default()).unwrap();
        assert_eq!(words(&c), vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn enumeration_matches_encode_over_f3() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let code = LinearCode::random(3, 5, 3, &mut rng).unwrap();
        let c = enumerate_codewords(&code, &Limits::default()).unwrap();
        assert_eq!(c.len(), 27);
        let mut idx = 0;
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    assert_eq!(c.codeword(idx), code.encode(&[a, b, d]).unwrap().as_slice());
                    idx += 1;
                }
            }
        }
    }

    #[test]
    fn rank_deficient_and_empty_generators() {
        assert!(matches!(
            LinearCode::new(2, vec![vec![1, 1, 0], vec![1, 1, 0]]),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
        assert!(matches!(
            LinearCode::new(2, vec![]),
            Err(Error::RankDeficient { rank: 0, expected: 0 })
        ));
        assert!(matches!(LinearCode::new(4, vec![vec![1, 0]]), Err(Error::NotPrime(4))));
    }

    #[test]
    fn capacity_cap() {
        let code = LinearCode::hamming_7_4();
        let limits = Limits {
            max_codewords: 15,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_codewords(&code, &limits),
            Err(Error::CapacityExceeded { requested: 16, .. })
        ));
    }

    #[test]
    fn parity_check_examples() {
        let code = LinearCode::new(2, vec![vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let h = parity_check_from_generator(&code).unwrap();
        assert_eq!(h.to_rows(), vec![vec![1, 1, 1]]);

        let ham = LinearCode::hamming_7_4();
        let h = ham.parity_check();
        assert_eq!((h.rows(), h.cols()), (3, 7));
        assert!(ham.generator().mul_transpose(ham.field(), h).unwrap().is_zero());
        let mut cols: Vec<usize> = (0..7)
            .map(|c| (0..3).fold(0, |acc, r| acc * 2 + h.get(r, c) as usize))
            .collect();
        cols.sort();
        assert_eq!(cols, (1..=7).collect::<Vec<_>>());

        let identity = LinearCode::new(3, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(identity.parity_check().rows(), 0);
    }

    #[test]
    fn parity_check_over_f5() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let n = rng.random_range(2..8);
            let k = rng.random_range(1..=n);
            let code = LinearCode::random(5, n, k, &mut rng).unwrap();
            let h = code.parity_check();
            assert_eq!(h.rank(code.field()), n - k);
            assert!(code.generator().mul_transpose(code.field(), h).unwrap().is_zero());
        }
    }

    #[test]
    fn supplied_parity_check_is_validated() {
        let g = vec![vec![1, 0, 1], vec![0, 1, 1]];
        assert!(LinearCode::with_parity_check(2, g.clone(), vec![vec![1, 1, 1]]).is_ok());
        assert!(LinearCode::with_parity_check(2, g, vec![vec![1, 0, 1]]).is_err());
    }

    #[test]
    fn syndromes() {
        let ham = LinearCode::hamming_7_4();
        let c = enumerate_codewords(&ham, &Limits::default()).unwrap();
        for w in c.iter() {
            assert_eq!(ham.syndrome(w).unwrap(), vec![0, 0, 0]);
        }
        for p in 0..7 {
            let mut e = vec![0; 7];
            e[p] = 1;
            let s = ham.syndrome(&e).unwrap();
            let col: Vec<Symbol> = (0..3).map(|r| ham.parity_check().get(r, p)).collect();
            assert_eq!(s, col);
        }
        assert_eq!(ham.syndrome(&[0; 7]).unwrap(), vec![0; 3]);
        assert!(matches!(ham.syndrome(&[0; 6]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hamming_coset_leaders() {
        let ham = LinearCode::hamming_7_4();
        let leaders = coset_leaders(&ham, &Limits::default()).unwrap();
        assert_eq!(leaders.len(), 8);
        assert_eq!(leaders[0], vec![0; 7]);
        let mut weights: Vec<usize> = leaders.iter().map(|e| hamming_weight(e)).collect();
        weights.sort();
        assert_eq!(weights, vec![0, 1, 1, 1, 1, 1, 1, 1]);
        for (j, e) in leaders.iter().enumerate() {
            assert_eq!(syndrome_index(&ham.syndrome(e).unwrap(), 2), j);
        }
    }

    #[test]
    fn full_rank_code_has_single_leader() {
        let code = LinearCode::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(coset_leaders(&code, &Limits::default()).unwrap(), vec![vec![0, 0]]);
    }

    /// Exhaustive coset scan: the leader's weight is minimal over its coset and,
    /// among the minimal ones, lexicographically first.
    fn check_leaders_by_brute_force(code: &LinearCode) {
        let (q, n) = (code.q(), code.n());
        let leaders = coset_leaders(code, &Limits::default()).unwrap();
        let mut best: Vec<Option<Vec<Symbol>>> = vec![None; leaders.len()];
        let total = q.pow(n as u32);
        for idx in 0..total {
            let mut v = vec![0 as Symbol; n];
            let mut x = idx;
            for p in (0..n).rev() {
                v[p] = (x % q) as Symbol;
                x /= q;
            }
            let s = syndrome_index(&code.syndrome(&v).unwrap(), q);
            let better = match &best[s] {
                None => true,
                Some(b) => hamming_weight(&v) < hamming_weight(b),
            };
            if better {
                best[s] = Some(v);
            }
        }
        for (l, b) in leaders.iter().zip(&best) {
            assert_eq!(Some(l), b.as_ref());
        }
    }

    #[test]
    fn coset_leaders_are_minimal() {
        let code = LinearCode::new(2, vec![vec![1, 0, 1, 1, 0], vec![0, 1, 0, 1, 1]]).unwrap();
        assert_eq!(coset_leaders(&code, &Limits::default()).unwrap().len(), 8);
        check_leaders_by_brute_force(&code);
        check_leaders_by_brute_force(&LinearCode::hamming_7_4());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (q, n, k) in [(2, 10, 4), (3, 5, 2), (2, 12, 6), (5, 4, 2)] {
            check_leaders_by_brute_force(&LinearCode::random(q, n, k, &mut rng).unwrap());
        }
    }

    #[test]
    fn repetition_code_leaders() {
        let code = LinearCode::with_parity_check(
            2,
            vec![vec![1, 1, 1]],
            vec![vec![1, 1, 0], vec![1, 0, 1]],
        )
        .unwrap();
        let leaders = coset_leaders(&code, &Limits::default()).unwrap();
        // Syndromes: 100 -> 11, 010 -> 10, 001 -> 01.
        assert_eq!(
            leaders,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn linear_closure_and_coset_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let code = LinearCode::random(3, 6, 3, &mut rng).unwrap();
        let f = *code.field();
        let words = enumerate_codewords(&code, &Limits::default()).unwrap();
        let set: std::collections::HashSet<Vec<Symbol>> = words.iter().map(|w| w.to_vec()).collect();
        for a in words.iter() {
            for b in words.iter() {
                let sum: Vec<Symbol> = a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect();
                assert!(set.contains(&sum));
            }
        }
        for _ in 0..50 {
            let v: Vec<Symbol> = (0..6).map(|_| rng.random_range(0..3)).collect();
            let c = words.codeword(rng.random_range(0..words.len()));
            let shifted: Vec<Symbol> = v.iter().zip(c).map(|(&x, &y)| f.add(x, y)).collect();
            assert_eq!(code.syndrome(&v).unwrap(), code.syndrome(&shifted).unwrap());
        }
        assert_eq!(words.minimum_distance(), (1..words.len()).map(|i| hamming_distance(words.codeword(0), words.codeword(i))).min());
    }
}
