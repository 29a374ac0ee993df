use std::collections::BTreeSet;

use super::bitvector::{BitVector, MAX_DIM};
use super::matrix::{BitMatrix, BitRow};
use crate::error::{Error, Result};

/// A homomorphism F2^cols -> F2^rows, stored as `rows` row vectors of
/// dimension `cols`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearMap2 {
    cols: usize,
    matrix: Vec<BitVector>,
}

impl LinearMap2 {
    pub fn new(cols: usize, matrix: Vec<BitVector>) -> Result<Self> {
        if cols > MAX_DIM {
            return Err(Error::DimensionTooLarge(cols));
        }
        if matrix.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(matrix.len()));
        }
        if let Some(r) = matrix.iter().find(|r| r.dim() != cols) {
            return Err(Error::DimensionMismatch {
                left: r.dim(),
                right: cols,
            });
        }
        Ok(LinearMap2 { cols, matrix })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|i| BitVector::unit(n, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    /// Projection keeping the listed coordinates, in the given order.
    pub fn projection(n: usize, coords: &[usize]) -> Result<Self> {
        let rows = coords
            .iter()
            .map(|&c| BitVector::unit(n, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, rows)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[BitVector] {
        &self.matrix
    }

    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: self.cols,
            });
        }
        let m = self.rows();
        let mut bits = 0u128;
        for row in &self.matrix {
            bits = (bits << 1) | row.dot(x) as u128;
        }
        Ok(BitVector::from_bits_unchecked(m, bits))
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &LinearMap2) -> Result<LinearMap2> {
        if inner.rows() != self.cols {
            return Err(Error::DimensionMismatch {
                left: inner.rows(),
                right: self.cols,
            });
        }
        // Row r of the product is the sum of inner's rows selected by row r of self.
        let rows = self
            .matrix
            .iter()
            .map(|r| {
                r.support().fold(BitVector::zero(inner.cols), |acc, c| {
                    Ok(acc? + inner.matrix[c])
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinearMap2::new(inner.cols, rows)
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        BitMatrix::from_fn(self.rows(), self.cols, |i, j| self.matrix[i].get(j))
    }

    pub fn rank(&self) -> usize {
        rref(&self.matrix).len()
    }

    pub fn kernel(&self) -> Subspace2 {
        let basis = self
            .to_bit_matrix()
            .kernel()
            .into_iter()
            .map(|row| row_to_vector(&row))
            .collect();
        Subspace2 {
            n: self.cols,
            basis,
        }
    }
}

fn row_to_vector(row: &BitRow) -> BitVector {
    let n = row.len();
    let mut bits = 0u128;
    for j in 0..n {
        bits = (bits << 1) | row.get(j) as u128;
    }
    BitVector::from_bits_unchecked(n, bits)
}

/// Reduced row-echelon form of packed vectors, pivoting on the leftmost
/// coordinate first. Zero rows are dropped.
pub fn rref(vectors: &[BitVector]) -> Vec<BitVector> {
    let mut rows: Vec<BitVector> = vectors.to_vec();
    let n = rows.first().map_or(0, |v| v.dim());
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(col) {
                *row = *row + pivot;
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A linear subspace of F2^n with a canonical reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace2 {
    n: usize,
    basis: Vec<BitVector>,
}

impl Subspace2 {
    pub fn span<'a, I>(n: usize, generators: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a BitVector>,
    {
        let gens: Vec<BitVector> = generators.into_iter().copied().collect();
        if let Some(g) = gens.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch {
                left: g.dim(),
                right: n,
            });
        }
        Ok(Subspace2 {
            n,
            basis: rref(&gens),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.basis
    }

    /// Coordinates where the echelon basis has its pivots.
    pub fn pivot_coords(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|b| b.leading_coord().expect("basis vectors are nonzero"))
            .collect()
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        if x.dim() != self.n {
            return false;
        }
        let mut y = *x;
        for b in &self.basis {
            let p = b.leading_coord().expect("basis vectors are nonzero");
            if y.get(p) {
                y = y + *b;
            }
        }
        y.is_zero()
    }

    /// Number of elements, `2^dim`.
    pub fn cardinality(&self) -> u128 {
        if self.dim() >= 128 {
            u128::MAX
        } else {
            1u128 << self.dim()
        }
    }

    /// All elements, ordered by the coefficient vector over the basis.
    pub fn elements(&self) -> Result<Vec<BitVector>> {
        if self.dim() > 24 {
            return Err(Error::range(format!(
                "refusing to enumerate a subspace of dimension {}",
                self.dim()
            )));
        }
        let zero = BitVector::zero(self.n)?;
        Ok((0..1usize << self.dim())
            .map(|mask| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> (self.dim() - 1 - i) & 1 == 1)
                    .fold(zero, |acc, (_, b)| acc + *b)
            })
            .collect())
    }

    pub fn element_set(&self) -> Result<BTreeSet<BitVector>> {
        Ok(self.elements()?.into_iter().collect())
    }
}

/// A surjection F2^n -> F2^(n-1) with kernel exactly `{0, x}`.
///
/// Pivots on the smallest coordinate `p` with `x_p = 1`: `y` is first
/// reduced by `y_p * x` (which clears coordinate `p`) and coordinate `p` is
/// then dropped.
pub fn quotient_map(n: usize, x: &BitVector) -> Result<LinearMap2> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: n,
        });
    }
    let p = x
        .leading_coord()
        .ok_or_else(|| Error::range("cannot quotient by the zero vector"))?;
    let rows = (0..n)
        .filter(|&c| c != p)
        .map(|c| {
            let mut row = BitVector::unit(n, c)?;
            if x.get(c) {
                row = row + BitVector::unit(n, p)?;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    LinearMap2::new(n, rows)
}
