use std::fmt;

/// Dense binary matrix, bit-packed column-major into 64-bit words.
///
/// Each column occupies `ceil(rows / 64)` words; bit `r % 64` of word `r / 64`
/// holds row `r`. Unused high bits of the last word of a column are always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_col: usize,
    words: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_col = rows.div_ceil(64);
        Self {
            rows,
            cols,
            words_per_col,
            words: vec![0; words_per_col * cols],
        }
    }

    /// Builds a matrix from row-major 0/1 entries (useful for literals in tests).
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b != 0);
            }
        }
        m
    }

    /// Builds a matrix whose column `j` has ones exactly at `ones[j]`.
    pub fn from_column_supports<I>(rows: usize, supports: I) -> Self
    where
        I: IntoIterator,
        I::Item: AsRef<[usize]>,
    {
        let supports: Vec<I::Item> = supports.into_iter().collect();
        let mut m = Self::zeros(rows, supports.len());
        for (j, ones) in supports.iter().enumerate() {
            for &r in ones.as_ref() {
                m.set(r, j, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        let w = self.words[col * self.words_per_col + row / 64];
        (w >> (row % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "({row}, {col}) out of bounds");
        let w = &mut self.words[col * self.words_per_col + row / 64];
        let mask = 1u64 << (row % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Packed words of one column.
    #[inline]
    pub fn column_words(&self, col: usize) -> &[u64] {
        let start = col * self.words_per_col;
        &self.words[start..start + self.words_per_col]
    }

    /// Row indices of the ones in column `col`, ascending.
    pub fn column_ones(&self, col: usize) -> impl Iterator<Item = usize> + '_ {
        self.column_words(col)
            .iter()
            .enumerate()
            .flat_map(|(wi, &word)| {
                let mut w = word;
                std::iter::from_fn(move || {
                    if w == 0 {
                        return None;
                    }
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                })
            })
    }

    pub fn column_weight(&self, col: usize) -> usize {
        self.column_words(col)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Column `col` as a 0/1 vector.
    pub fn column(&self, col: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, col) as u8).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            let line: String = (0..self.cols.min(64))
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}
