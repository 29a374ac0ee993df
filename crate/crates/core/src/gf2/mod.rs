//! Exact linear algebra over GF(2).

mod bitvector;
mod linear;
mod matrix;

use std::collections::BTreeSet;

pub use bitvector::{BitVector, MAX_DIM};
pub use linear::{quotient_map, rref, LinearMap2, Subspace2};
pub use matrix::{BitMatrix, BitRow, Echelon};

use crate::error::{Error, Result};

/// `{x + y : x ∈ xs, y ∈ ys}`. In characteristic 2 this is also `xs - ys`.
pub fn sumset<'a, X, Y>(xs: X, ys: Y) -> Result<BTreeSet<BitVector>>
where
    X: IntoIterator<Item = &'a BitVector>,
    Y: IntoIterator<Item = &'a BitVector> + Clone,
{
    let mut out = BTreeSet::new();
    let mut dim = None;
    for x in xs {
        for y in ys.clone() {
            let d = *dim.get_or_insert(x.dim());
            if x.dim() != d || y.dim() != d {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: if x.dim() != d { x.dim() } else { y.dim() },
                });
            }
            out.insert(*x + *y);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<BitVector> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&["00"]), &set(&["01", "10"])).unwrap(), set(&["01", "10"]));
        assert_eq!(
            sumset(&set(&["00", "10"]), &set(&["00", "01"])).unwrap(),
            set(&["00", "01", "10", "11"])
        );
        let v = Subspace2::span(3, &set(&["110", "011"])).unwrap().element_set().unwrap();
        assert_eq!(sumset(&v, &v).unwrap(), v);
    }

    #[test]
    fn sumset_dimension_mismatch() {
        assert!(sumset(&set(&["00"]), &set(&["001"])).is_err());
        assert!(sumset(&set(&[]), &set(&["001"])).unwrap().is_empty());
    }
}
