//! Ambient groups, finite sets and candidate witnesses.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Ambient {
    /// The dyadic group F2^n.
    F2(usize),
    /// The integers.
    Z,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::F2(n) => write!(f, "f2 n={n}"),
            Ambient::Z => f.write_str("z"),
        }
    }
}

/// An element of one of the supported ambient groups.
pub trait GroupElement: Copy + Eq + Ord + Hash + fmt::Debug + fmt::Display {
    fn ambient(&self) -> Ambient;

    /// Group addition; fails on a dimension mismatch or integer overflow.
    fn group_add(&self, rhs: &Self) -> Result<Self>;
}

impl GroupElement for BitVector {
    fn ambient(&self) -> Ambient {
        Ambient::F2(self.dim())
    }

    fn group_add(&self, rhs: &Self) -> Result<Self> {
        self.try_add(rhs)
    }
}

impl GroupElement for i64 {
    fn ambient(&self) -> Ambient {
        Ambient::Z
    }

    fn group_add(&self, rhs: &Self) -> Result<Self> {
        i64::checked_add(*self, *rhs)
            .ok_or_else(|| Error::Overflow(format!("{self} + {rhs} exceeds 64 bits")))
    }
}

fn check_ambient<E: GroupElement>(ambient: Ambient, e: &E) -> Result<()> {
    if e.ambient() == ambient {
        Ok(())
    } else {
        Err(Error::AmbientMismatch {
            expected: ambient,
            found: e.ambient(),
        })
    }
}

/// A finite subset of an ambient group. The ambient is explicit so that the
/// empty set and complements in F2^n are well defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSet<E> {
    ambient: Ambient,
    elems: BTreeSet<E>,
}

impl<E: GroupElement> FiniteSet<E> {
    /// Rejects repeated elements and elements from a different ambient.
    pub fn new<I: IntoIterator<Item = E>>(ambient: Ambient, elems: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in elems {
            check_ambient(ambient, &e)?;
            if !set.insert(e) {
                return Err(Error::DuplicateElement(e.to_string()));
            }
        }
        Ok(FiniteSet {
            ambient,
            elems: set,
        })
    }

    /// Like [`FiniteSet::new`] but merges repeated elements.
    pub fn from_iter_dedup<I: IntoIterator<Item = E>>(ambient: Ambient, elems: I) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in elems {
            check_ambient(ambient, &e)?;
            set.insert(e);
        }
        Ok(FiniteSet {
            ambient,
            elems: set,
        })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.elems.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &E> + '_ {
        self.elems.iter()
    }

    pub fn elements(&self) -> &BTreeSet<E> {
        &self.elems
    }
}

impl FiniteSet<BitVector> {
    /// Dimension `n` of the ambient F2^n.
    pub fn dim(&self) -> usize {
        match self.ambient {
            Ambient::F2(n) => n,
            Ambient::Z => unreachable!("bit-vector sets always live in F2^n"),
        }
    }

    /// `F2^n \ A` for the declared ambient dimension.
    pub fn complement(&self) -> Result<Vec<BitVector>> {
        Ok(BitVector::all(self.dim())?
            .filter(|x| !self.contains(x))
            .collect())
    }
}

/// Candidate sequences `s`, `t` for the k-order property.
///
/// Only lengths and ambients are validated here; distinctness is part of
/// what [`crate::orderprop::verify_witness`] checks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness<E> {
    ambient: Ambient,
    s: Vec<E>,
    t: Vec<E>,
}

impl<E: GroupElement> Witness<E> {
    pub fn new(ambient: Ambient, s: Vec<E>, t: Vec<E>) -> Result<Self> {
        if s.len() != t.len() {
            return Err(Error::LengthMismatch {
                s: s.len(),
                t: t.len(),
            });
        }
        for e in s.iter().chain(&t) {
            check_ambient(ambient, e)?;
        }
        Ok(Witness { ambient, s, t })
    }

    pub fn empty(ambient: Ambient) -> Self {
        Witness {
            ambient,
            s: Vec::new(),
            t: Vec::new(),
        }
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// The order `k`.
    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn s(&self) -> &[E] {
        &self.s
    }

    pub fn t(&self) -> &[E] {
        &self.t
    }

    /// `s_i + t_j` with 0-based indices.
    pub fn cell(&self, i: usize, j: usize) -> Result<E> {
        self.s[i].group_add(&self.t[j])
    }

    /// Reorders `s` by `sigma` and `t` by `tau`: `s'_i = s_{sigma(i)}`.
    pub fn permuted(&self, sigma: &[usize], tau: &[usize]) -> Self {
        Witness {
            ambient: self.ambient,
            s: sigma.iter().map(|&i| self.s[i]).collect(),
            t: tau.iter().map(|&j| self.t[j]).collect(),
        }
    }
}

impl Witness<BitVector> {
    /// Adds `g` to every entry; all sums `s_i + t_j` are unchanged.
    pub fn translate(&self, g: &BitVector) -> Result<Self> {
        let shift = |v: &[BitVector]| v.iter().map(|x| x.try_add(g)).collect::<Result<Vec<_>>>();
        Ok(Witness {
            ambient: self.ambient,
            s: shift(&self.s)?,
            t: shift(&self.t)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_rejects_duplicates_and_foreign_elements() {
        assert!(FiniteSet::new(Ambient::Z, [1i64, 2, 1]).is_err());
        let x: BitVector = "01".parse().unwrap();
        assert!(matches!(
            FiniteSet::new(Ambient::F2(3), [x]),
            Err(Error::AmbientMismatch { .. })
        ));
        assert_eq!(FiniteSet::from_iter_dedup(Ambient::Z, [1i64, 1]).unwrap().len(), 1);
    }

    #[test]
    fn complement_in_declared_ambient() {
        let a = FiniteSet::new(Ambient::F2(2), ["00".parse::<BitVector>().unwrap()]).unwrap();
        assert_eq!(a.complement().unwrap().len(), 3);
        let empty = FiniteSet::<BitVector>::new(Ambient::F2(3), []).unwrap();
        assert_eq!(empty.complement().unwrap().len(), 8);
    }

    #[test]
    fn witness_shape_checks() {
        assert!(matches!(
            Witness::new(Ambient::Z, vec![1i64], vec![]),
            Err(Error::LengthMismatch { s: 1, t: 0 })
        ));
        let w = Witness::new(Ambient::Z, vec![-1i64, -2], vec![1, 2]).unwrap();
        assert_eq!(w.k(), 2);
        assert_eq!(w.cell(1, 0).unwrap(), -1);
        assert_eq!(w.permuted(&[1, 0], &[0, 1]).s(), &[-2, -1]);
    }

    #[test]
    fn integer_overflow_is_an_error() {
        assert!(i64::MAX.group_add(&1).is_err());
    }
}
