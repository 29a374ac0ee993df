use std::collections::BTreeSet;

use crate::error::Result;
use crate::gf2::{sumset, BitVector};
use crate::group::FiniteSet;

/// Finite search domains for witnesses in F2^n.
///
/// Lemma: if `A` has the k-order property then it has a witness with
/// `t_1 = 0`, `t_j ∈ A + A` and `s_i ∈ A + A + A`.
///
/// Proof: replacing `(s, t)` by `(s + t_1, t + t_1)` leaves every sum
/// `s_i + t_j` unchanged and makes `t_1 = 0`. Then `s_1 = s_1 + t_1 ∈ A`;
/// each `t_j` satisfies `s_1 + t_j ∈ A`, so `t_j ∈ s_1 + A ⊆ A + A`; and
/// each `s_i` satisfies `s_i + t_i ∈ A`, so `s_i ∈ t_i + A ⊆ A + A + A`.
#[derive(Clone, Debug)]
pub struct CandidateDomains {
    /// `A + A`, sorted lexicographically.
    pub t_domain: Vec<BitVector>,
    /// `A + A + A`, sorted lexicographically.
    pub s_domain: Vec<BitVector>,
}

impl CandidateDomains {
    pub fn new(a: &FiniteSet<BitVector>) -> Result<Self> {
        let two: BTreeSet<BitVector> = sumset(a.elements(), a.elements())?;
        let three = sumset(&two, a.elements())?;
        Ok(CandidateDomains {
            t_domain: two.into_iter().collect(),
            s_domain: three.into_iter().collect(),
        })
    }
}
