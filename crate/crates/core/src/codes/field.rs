//! Dense matrices over a prime field `F_p`.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic modulo a prime `p < 2^16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: usize) -> Result<Self> {
        if !is_prime(p) || p > u16::MAX as usize {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn order(&self) -> usize {
        self.p as usize
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + b as u32) % self.p) as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        ((a as u32 + self.p - b as u32) % self.p) as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        ((a as u32 * b as u32) % self.p) as u16
    }

    /// Multiplicative inverse by Fermat's little theorem; `a` must be nonzero.
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        let mut base = a as u64;
        let mut exp = self.p as u64 - 2;
        let mut acc = 1u64;
        let p = self.p as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc as u16
    }
}

/// Row-major matrix with entries in `0..p`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u16>>, cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u16>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// `self · v^T` over the field.
    pub fn mul_vec(&self, f: &PrimeField, v: &[u16]) -> Result<Vec<u16>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// `self · other^T` over the field.
    pub fn mul_transpose(&self, f: &PrimeField, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut out = FieldMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let dot = self
                    .row(i)
                    .iter()
                    .zip(other.row(j))
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                out.set(i, j, dot);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reduces in place to reduced row echelon form; returns the pivot columns.
    pub fn reduce(&mut self, f: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = f.inv(self.get(row, col));
            for c in 0..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r != row && factor != 0 {
                    for c in 0..self.cols {
                        let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &PrimeField) -> usize {
        self.clone().reduce(f).len()
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldMatrix {}x{} {:?}", self.rows, self.cols, self.to_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let got: Vec<usize> = (0..30).filter(|&q| is_prime(q)).collect();
        assert_eq!(got, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(PrimeField::new(4).is_err());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn rank_and_reduce() {
        let f = PrimeField::new(3).unwrap();
        let mut m = FieldMatrix::from_rows(vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]], 3).unwrap();
        // Second row is twice the first over F_3.
        assert_eq!(m.rank(&f), 2);
        let pivots = m.reduce(&f);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(m.row(0), &[1, 2, 0]);
        assert_eq!(m.row(1), &[0, 0, 1]);
    }
}
