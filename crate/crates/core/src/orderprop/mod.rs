//! The k-order property: witness verification, canonical enumerations,
//! exact maximisation and a DIMACS encoding.
//!
//! `s` and `t` witness the k-order property in `A` when `s_i + t_j ∈ A`
//! holds exactly for `i <= j`. Indices reported to users are 1-based.

mod brute;
mod cnf;
mod domain;
mod solver;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use brute::max_order_bruteforce;
pub use cnf::{export_cnf, CnfExport, CnfLayout, Role, RoleVars};
pub use domain::CandidateDomains;
pub use solver::{max_order_exact, SolveOptions, SolveReport, SolveStatus};

use crate::error::{Error, Result};
use crate::group::{Ambient, FiniteSet, GroupElement, Witness};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Expectation {
    /// `i <= j` but `s_i + t_j` is missing from `A`.
    ExpectedInA,
    /// `i > j` but `s_i + t_j` lies in `A`.
    ExpectedNotInA,
}

/// The first obstruction found, with 1-based indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    DuplicateS { i: usize, j: usize },
    DuplicateT { i: usize, j: usize },
    Cell { i: usize, j: usize, expected: Expectation },
    RowRepeat { row: usize, j1: usize, j2: usize },
    ColumnRepeat { col: usize, i1: usize, i2: usize },
    /// `M_{ij} = M_{i'j'}` with `i <= j < i' <= j'`.
    Staircase { first: (usize, usize), second: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateS { i, j } => write!(f, "s{i} = s{j} duplicate"),
            Violation::DuplicateT { i, j } => write!(f, "t{i} = t{j} duplicate"),
            Violation::Cell { i, j, expected } => {
                let what = match expected {
                    Expectation::ExpectedInA => "expected-in-A",
                    Expectation::ExpectedNotInA => "expected-not-in-A",
                };
                write!(f, "({i},{j}) {what}")
            }
            Violation::RowRepeat { row, j1, j2 } => {
                write!(f, "row {row} repeats a value in columns {j1} and {j2}")
            }
            Violation::ColumnRepeat { col, i1, i2 } => {
                write!(f, "column {col} repeats a value in rows {i1} and {i2}")
            }
            Violation::Staircase { first, second } => write!(
                f,
                "staircase cells ({},{}) and ({},{}) coincide",
                first.0, first.1, second.0, second.1
            ),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub violation: Option<Violation>,
}

impl Verdict {
    pub fn valid() -> Self {
        Verdict { violation: None }
    }

    fn invalid(v: Violation) -> Self {
        Verdict { violation: Some(v) }
    }

    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => f.write_str("valid"),
            Some(v) => write!(f, "invalid: {v}"),
        }
    }
}

/// Two cells `(row, col)` of the witness matrix.
type CellPair = ((usize, usize), (usize, usize));

fn first_duplicate<E: Eq + std::hash::Hash>(xs: &[E]) -> Option<(usize, usize)> {
    let mut seen = HashMap::new();
    for (j, x) in xs.iter().enumerate() {
        if let Some(&i) = seen.get(x) {
            return Some((i + 1, j + 1));
        }
        seen.insert(x, j);
    }
    None
}

fn require_same_ambient(a: Ambient, b: Ambient) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AmbientMismatch {
            expected: a,
            found: b,
        })
    }
}

/// Checks distinctness of `s` and of `t`, then every cell in row-major
/// order. `k = 0` is vacuously valid.
pub fn verify_witness<E: GroupElement>(a: &FiniteSet<E>, w: &Witness<E>) -> Result<Verdict> {
    require_same_ambient(a.ambient(), w.ambient())?;
    if let Some((i, j)) = first_duplicate(w.s()) {
        return Ok(Verdict::invalid(Violation::DuplicateS { i, j }));
    }
    if let Some((i, j)) = first_duplicate(w.t()) {
        return Ok(Verdict::invalid(Violation::DuplicateT { i, j }));
    }
    let k = w.k();
    for i in 0..k {
        for j in 0..k {
            let inside = a.contains(&w.cell(i, j)?);
            if inside != (i <= j) {
                let expected = if i <= j {
                    Expectation::ExpectedInA
                } else {
                    Expectation::ExpectedNotInA
                };
                return Ok(Verdict::invalid(Violation::Cell {
                    i: i + 1,
                    j: j + 1,
                    expected,
                }));
            }
        }
    }
    Ok(Verdict::valid())
}

/// Recovers the unique enumeration of `S` and `T` witnessing the order
/// property, if there is one.
///
/// In a witness `s_i` has exactly `k + 1 - i` partners in `T` and `t_j`
/// exactly `j` partners in `S`, so sorting by these degrees pins the
/// order. Returns `Ok(None)` when degrees collide or the sorted sequences
/// fail verification.
pub fn canonical_enumeration<E: GroupElement>(
    a: &FiniteSet<E>,
    s_set: &BTreeSet<E>,
    t_set: &BTreeSet<E>,
) -> Result<Option<Witness<E>>> {
    if s_set.len() != t_set.len() {
        return Err(Error::LengthMismatch {
            s: s_set.len(),
            t: t_set.len(),
        });
    }
    let degree = |x: &E, others: &BTreeSet<E>| -> Result<usize> {
        let mut d = 0;
        for y in others {
            if a.contains(&x.group_add(y)?) {
                d += 1;
            }
        }
        Ok(d)
    };
    let mut s: Vec<(usize, E)> = s_set
        .iter()
        .map(|x| Ok((degree(x, t_set)?, *x)))
        .collect::<Result<_>>()?;
    let mut t: Vec<(usize, E)> = t_set
        .iter()
        .map(|y| Ok((degree(y, s_set)?, *y)))
        .collect::<Result<_>>()?;
    s.sort_by_key(|x| std::cmp::Reverse(x.0));
    t.sort_by_key(|x| x.0);
    let collide = |v: &[(usize, E)]| v.windows(2).any(|p| p[0].0 == p[1].0);
    if collide(&s) || collide(&t) {
        return Ok(None);
    }
    let w = Witness::new(
        a.ambient(),
        s.into_iter().map(|p| p.1).collect(),
        t.into_iter().map(|p| p.1).collect(),
    )?;
    Ok(verify_witness(a, &w)?.is_valid().then_some(w))
}

/// Combinatorial rigidity of the matrix `M_{ij} = s_i + t_j` forced by the
/// order property in characteristic 2: rows and columns carry distinct
/// values and `M_{ij} != M_{i'j'}` whenever `i <= j < i' <= j'`.
pub fn staircase_check<E: GroupElement>(w: &Witness<E>) -> Result<Verdict> {
    if !matches!(w.ambient(), Ambient::F2(_)) {
        return Err(Error::UnsupportedAmbient(w.ambient()));
    }
    let k = w.k();
    let mut m = vec![Vec::with_capacity(k); k];
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..k {
            row.push(w.cell(i, j)?);
        }
    }
    for (i, row) in m.iter().enumerate() {
        if let Some((j1, j2)) = first_duplicate(row) {
            return Ok(Verdict::invalid(Violation::RowRepeat {
                row: i + 1,
                j1,
                j2,
            }));
        }
    }
    for j in 0..k {
        let col: Vec<E> = m.iter().map(|row| row[j]).collect();
        if let Some((i1, i2)) = first_duplicate(&col) {
            return Ok(Verdict::invalid(Violation::ColumnRepeat {
                col: j + 1,
                i1,
                i2,
            }));
        }
    }
    // For each value, among its upper-triangular cells find the one with the
    // smallest column and the one with the largest row; a clash exists iff
    // the former column is strictly below the latter row.
    let mut extremes: HashMap<E, CellPair> = HashMap::new();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i) {
            let e = extremes.entry(v).or_insert(((i, j), (i, j)));
            if j < e.0 .1 {
                e.0 = (i, j);
            }
            if i > e.1 .0 {
                e.1 = (i, j);
            }
        }
    }
    let mut clash: Option<CellPair> = None;
    for &(lo, hi) in extremes.values() {
        if lo.1 < hi.0 && clash.is_none_or(|c| (lo, hi) < c) {
            clash = Some((lo, hi));
        }
    }
    Ok(match clash {
        Some((a, b)) => Verdict::invalid(Violation::Staircase {
            first: (a.0 + 1, a.1 + 1),
            second: (b.0 + 1, b.1 + 1),
        }),
        None => Verdict::valid(),
    })
}

/// Diagonal `{s_i + t_i}`; for a valid witness in F2^n these are `k`
/// distinct elements of `A`.
pub fn diagonal<E: GroupElement>(w: &Witness<E>) -> Result<Vec<E>> {
    (0..w.k()).map(|i| w.cell(i, i)).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVector;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn f2_set(n: usize, xs: &[&str]) -> FiniteSet<BitVector> {
        FiniteSet::new(Ambient::F2(n), xs.iter().map(|x| bv(x))).unwrap()
    }

    fn f2_wit(n: usize, s: &[&str], t: &[&str]) -> Witness<BitVector> {
        Witness::new(
            Ambient::F2(n),
            s.iter().map(|x| bv(x)).collect(),
            t.iter().map(|x| bv(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn verify_ap_example() {
        let a = FiniteSet::new(Ambient::Z, [0i64, 1, 2]).unwrap();
        let w = Witness::new(Ambient::Z, vec![-1, -2, -3], vec![1, 2, 3]).unwrap();
        assert!(verify_witness(&a, &w).unwrap().is_valid());
    }

    #[test]
    fn verify_reports_first_cell() {
        let a = f2_set(2, &["00"]);
        let w = f2_wit(2, &["00", "01"], &["00", "01"]);
        let v = verify_witness(&a, &w).unwrap();
        assert_eq!(
            v.violation,
            Some(Violation::Cell {
                i: 1,
                j: 2,
                expected: Expectation::ExpectedInA
            })
        );
        assert_eq!(v.violation.unwrap().to_string(), "(1,2) expected-in-A");
    }

    #[test]
    fn verify_single_cell_and_empty() {
        let a = f2_set(3, &["101"]);
        assert!(verify_witness(&a, &f2_wit(3, &["000"], &["101"])).unwrap().is_valid());
        assert!(verify_witness(&a, &Witness::empty(Ambient::F2(3))).unwrap().is_valid());
    }

    #[test]
    fn verify_reports_duplicates_and_ambient() {
        let a = f2_set(2, &["00", "01"]);
        let w = f2_wit(2, &["00", "00"], &["00", "01"]);
        assert_eq!(
            verify_witness(&a, &w).unwrap().violation,
            Some(Violation::DuplicateS { i: 1, j: 2 })
        );
        let other = f2_wit(3, &["000"], &["000"]);
        assert!(verify_witness(&a, &other).is_err());
    }

    #[test]
    fn verify_z_overflow_is_rejected() {
        let a = FiniteSet::new(Ambient::Z, [0i64]).unwrap();
        let w = Witness::new(Ambient::Z, vec![i64::MAX], vec![1]).unwrap();
        assert!(matches!(verify_witness(&a, &w), Err(Error::Overflow(_))));
    }

    #[test]
    fn canonical_ap() {
        let a = FiniteSet::new(Ambient::Z, [0i64, 1, 2]).unwrap();
        let w = canonical_enumeration(&a, &[-3, -1, -2].into(), &[3, 1, 2].into())
            .unwrap()
            .unwrap();
        assert_eq!(w.s(), &[-1, -2, -3]);
        assert_eq!(w.t(), &[1, 2, 3]);
    }

    #[test]
    fn canonical_failure_and_mismatch() {
        let a = f2_set(2, &["00"]);
        let s: BTreeSet<_> = [bv("00"), bv("01")].into();
        assert_eq!(canonical_enumeration(&a, &s, &s).unwrap(), None);
        let t: BTreeSet<_> = [bv("00")].into();
        assert!(canonical_enumeration(&a, &s, &t).is_err());
    }

    #[test]
    fn canonical_failure_matches_exhaustive_orderings() {
        // Every ordering of S = T = {00, 01} fails against A = {00}.
        let a = f2_set(2, &["00"]);
        let perms = [[0usize, 1], [1, 0]];
        let base = f2_wit(2, &["00", "01"], &["00", "01"]);
        for sigma in &perms {
            for tau in &perms {
                assert!(!verify_witness(&a, &base.permuted(sigma, tau)).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn staircase_examples() {
        let a = f2_set(2, &["00", "01", "11"]);
        let w = f2_wit(2, &["00", "10"], &["00", "11"]);
        assert!(verify_witness(&a, &w).unwrap().is_valid());
        assert!(staircase_check(&w).unwrap().is_valid());

        // M11 = M22 = 00 with distinct rows and columns.
        let bad = f2_wit(2, &["00", "01"], &["00", "01"]);
        assert_eq!(
            staircase_check(&bad).unwrap().violation,
            Some(Violation::Staircase {
                first: (1, 1),
                second: (2, 2)
            })
        );

        let z = Witness::new(Ambient::Z, vec![-1i64], vec![1]).unwrap();
        assert!(matches!(staircase_check(&z), Err(Error::UnsupportedAmbient(Ambient::Z))));
    }

    #[test]
    fn staircase_row_repeat() {
        let w = f2_wit(2, &["00", "01"], &["10", "10"]);
        assert_eq!(
            staircase_check(&w).unwrap().violation,
            Some(Violation::RowRepeat { row: 1, j1: 1, j2: 2 })
        );
    }
}
