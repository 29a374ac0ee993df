use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported ambient dimension for packed vectors.
pub const MAX_DIM: usize = 128;

/// An element of F2^n packed into a single `u128`.
///
/// Coordinate 0 (the leftmost character of the bitstring form) is stored in
/// bit `n - 1`, so for a fixed `n` the numeric order of `bits` is the
/// lexicographic order of the bitstrings. Unused high bits are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    n: u8,
    bits: u128,
}

fn mask(n: usize) -> u128 {
    if n == MAX_DIM {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl BitVector {
    pub fn zero(n: usize) -> Result<Self> {
        Self::from_bits(n, 0)
    }

    /// Builds a vector from its packed word, where the least significant bit
    /// is the last (rightmost) coordinate.
    pub fn from_bits(n: usize, bits: u128) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        if bits & !mask(n) != 0 {
            return Err(Error::range(format!(
                "word {bits:#x} has bits outside dimension {n}"
            )));
        }
        Ok(BitVector { n: n as u8, bits })
    }

    /// Unit vector with coordinate `i` (0-based, leftmost first) set.
    pub fn unit(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::range(format!("coordinate {i} outside dimension {n}")));
        }
        Self::from_bits(n, 1u128 << (n - 1 - i))
    }

    pub fn from_coords<I: IntoIterator<Item = usize>>(n: usize, coords: I) -> Result<Self> {
        let mut v = Self::zero(n)?;
        for i in coords {
            v = v + Self::unit(n, i)?;
        }
        Ok(v)
    }

    pub(crate) fn from_bits_unchecked(n: usize, bits: u128) -> Self {
        debug_assert!(n <= MAX_DIM && bits & !mask(n) == 0);
        BitVector { n: n as u8, bits }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim(), "coordinate {i} outside dimension {}", self.n);
        (self.bits >> (self.dim() - 1 - i)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Coordinatewise XOR, the group law of F2^n.
    pub fn try_add(&self, other: &BitVector) -> Result<BitVector> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(BitVector {
            n: self.n,
            bits: self.bits ^ other.bits,
        })
    }

    /// GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.n, other.n);
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Whether every coordinate set in `self` is also set in `other`.
    #[inline]
    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        self.bits & !other.bits == 0
    }

    /// Smallest coordinate index carrying a one.
    pub fn leading_coord(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.dim() - 1 - (127 - self.bits.leading_zeros() as usize))
        }
    }

    /// Indices of the coordinates set to one, leftmost first.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| self.get(i))
    }

    /// Appends `extra` zero coordinates on the right.
    pub fn extend(&self, extra: usize) -> Result<BitVector> {
        let n = self.dim() + extra;
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        Ok(BitVector {
            n: n as u8,
            bits: self.bits.checked_shl(extra as u32).unwrap_or(0),
        })
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVector) -> Result<BitVector> {
        let v = self.extend(other.dim())?;
        Ok(BitVector {
            n: v.n,
            bits: v.bits | other.bits,
        })
    }

    /// All 2^n elements of F2^n in lexicographic order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = BitVector>> {
        if n > 24 {
            return Err(Error::range(format!(
                "refusing to enumerate F2^{n} (limit is 24)"
            )));
        }
        Ok((0..1u128 << n).map(move |b| BitVector::from_bits_unchecked(n, b)))
    }
}

impl Add for BitVector {
    type Output = BitVector;

    /// Panics on a dimension mismatch; use [`BitVector::try_add`] for the
    /// checked form.
    #[inline]
    fn add(self, rhs: BitVector) -> BitVector {
        assert_eq!(self.n, rhs.n, "adding vectors of different dimension");
        BitVector {
            n: self.n,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a bitstring such as `0101`; the empty string is the unique
    /// element of F2^0.
    fn from_str(s: &str) -> Result<Self> {
        let n = s.len();
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge(n));
        }
        let mut bits = 0u128;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::parse(0, format!("invalid bit {c:?} in {s:?}"))),
            }
        }
        Ok(BitVector { n: n as u8, bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(bv("0101").try_add(&bv("0011")).unwrap(), bv("0110"));
        assert_eq!(bv("00").try_add(&bv("11")).unwrap(), bv("11"));
        let x = bv("1011");
        assert!(x.try_add(&x).unwrap().is_zero());
    }

    #[test]
    fn add_rejects_mismatch() {
        assert_eq!(
            bv("01").try_add(&bv("011")),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn coordinate_orientation() {
        let v = bv("100");
        assert!(v.get(0));
        assert!(!v.get(2));
        assert_eq!(v.leading_coord(), Some(0));
        assert_eq!(bv("001").leading_coord(), Some(2));
        assert_eq!(BitVector::unit(3, 1).unwrap(), bv("010"));
        assert_eq!(v.to_string(), "100");
        assert!(bv("011") < bv("100"));
    }

    #[test]
    fn extend_and_concat() {
        assert_eq!(bv("10").extend(2).unwrap(), bv("1000"));
        assert_eq!(bv("10").concat(&bv("01")).unwrap(), bv("1001"));
        assert_eq!(bv("").concat(&bv("1")).unwrap(), bv("1"));
    }

    #[test]
    fn full_width() {
        let n = MAX_DIM;
        let v = BitVector::unit(n, 0).unwrap();
        assert_eq!(v.bits(), 1u128 << 127);
        assert!(BitVector::zero(n + 1).is_err());
        assert!(v.extend(1).is_err());
    }

    #[test]
    fn enumerate_all() {
        let all: Vec<_> = BitVector::all(2).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
    }
}
