//! Dense GF(2) matrices of arbitrary width.
//!
//! Used where the column count can exceed a single packed word, e.g. the
//! monomial evaluation matrices of the polynomial method.

use std::fmt;

/// A row vector over GF(2) of arbitrary length. Column `j` lives in word
/// `j / 64`, bit `j % 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut row = BitRow::zeros(bits.len());
        for (j, b) in bits.into_iter().enumerate() {
            if b {
                row.set(j);
            }
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.len);
        (self.words[j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize) {
        debug_assert!(j < self.len);
        self.words[j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub fn flip(&mut self, j: usize) {
        debug_assert!(j < self.len);
        self.words[j / 64] ^= 1 << (j % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn or_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// `self &= !other`
    pub fn and_not_assign(&mut self, other: &BitRow) {
        assert_eq!(self.len, other.len, "row length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn clear(&mut self, j: usize) {
        debug_assert!(j < self.len);
        self.words[j / 64] &= !(1 << (j % 64));
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest column index holding a one.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|j| if self.get(j) { '1' } else { '0' })
            .collect();
        write!(f, "BitRow({s})")
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitRow>,
    ncols: usize,
}

/// Output of [`BitMatrix::rref`]: the reduced rows (zero rows dropped) and
/// their pivot columns in increasing order.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<BitRow>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            rows: vec![BitRow::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i);
        }
        m
    }

    /// Panics if the rows have differing lengths.
    pub fn from_rows(rows: Vec<BitRow>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        BitMatrix { rows, ncols }
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let rows = (0..nrows)
            .map(|i| BitRow::from_bools((0..ncols).map(|j| f(i, j))))
            .collect();
        BitMatrix { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones() {
                t.rows[j].set(i);
            }
        }
        t
    }

    /// Reduced row-echelon form, pivoting on the leftmost column first.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r);
            let (pivot, rest) = tail.split_first_mut().expect("pivot row exists");
            for row in head.iter_mut().chain(rest.iter_mut()) {
                if row.get(col) {
                    row.xor_assign(pivot);
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        Echelon {
            rows,
            pivots,
            ncols: self.ncols,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : M x = 0}` in reduced row-echelon form.
    pub fn kernel(&self) -> Vec<BitRow> {
        self.rref().kernel()
    }

    pub fn mul_vec(&self, x: &BitRow) -> BitRow {
        assert_eq!(x.len(), self.ncols);
        BitRow::from_bools(self.rows.iter().map(|r| {
            r.words
                .iter()
                .zip(&x.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1
                == 1
        }))
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Null space basis read off the echelon form, returned in canonical
    /// reduced row-echelon form.
    pub fn kernel(&self) -> Vec<BitRow> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = BitRow::zeros(self.ncols);
            v.set(free);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if row.get(free) {
                    v.set(p);
                }
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return basis;
        }
        BitMatrix::from_rows(basis, self.ncols).rref().rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(
            rows.iter()
                .map(|r| BitRow::from_bools(r.chars().map(|c| c == '1')))
                .collect(),
            ncols,
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 4).rank(), 0);
        assert_eq!(m(&["11", "11"]).rank(), 1);
        assert_eq!(m(&["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn kernel_parity() {
        let k = m(&["11"]).kernel();
        assert_eq!(k, vec![BitRow::from_bools([true, true])]);
        assert!(BitMatrix::identity(2).kernel().is_empty());
        assert_eq!(BitMatrix::zeros(1, 3).kernel().len(), 3);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&["10110", "01101", "11011"]);
        for v in a.kernel() {
            assert!(a.mul_vec(&v).is_zero());
        }
        assert_eq!(a.kernel().len(), 5 - a.rank());
    }

    #[test]
    fn wide_rows() {
        let mut r = BitRow::zeros(200);
        r.set(3);
        r.set(130);
        assert_eq!(r.ones().collect::<Vec<_>>(), vec![3, 130]);
        assert_eq!(r.first_one(), Some(3));
        assert_eq!(r.count_ones(), 2);
        let t = BitMatrix::from_rows(vec![r], 200).transpose();
        assert_eq!(t.nrows(), 200);
        assert!(t.get(130, 0));
    }
}
