use super::domain::CandidateDomains;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::group::FiniteSet;

/// Exhaustive reference for [`super::max_order_exact`], limited to
/// `|A| <= 8` and `n <= 5`.
///
/// Enumerates every sequence `t_1 = 0, s_1, t_2, s_2, ...` over the confined
/// domains, keeping a sequence only while its prefix satisfies the
/// definition cell by cell. No bounds or precomputed adjacency are used.
pub fn max_order_bruteforce(a: &FiniteSet<BitVector>) -> Result<usize> {
    if a.len() > 8 || a.dim() > 5 {
        return Err(Error::range(format!(
            "brute force needs |A| <= 8 and n <= 5, got |A| = {} and n = {}",
            a.len(),
            a.dim()
        )));
    }
    if a.is_empty() {
        return Ok(0);
    }
    let doms = CandidateDomains::new(a)?;
    let zero = BitVector::zero(a.dim())?;
    let mut s = Vec::new();
    let mut t = Vec::new();
    Ok(extend(a, &doms, &zero, &mut s, &mut t))
}

fn extend(
    a: &FiniteSet<BitVector>,
    doms: &CandidateDomains,
    zero: &BitVector,
    s: &mut Vec<BitVector>,
    t: &mut Vec<BitVector>,
) -> usize {
    let r = s.len();
    let mut best = r;
    let t_options: &[BitVector] = if r == 0 {
        std::slice::from_ref(zero)
    } else {
        &doms.t_domain
    };
    for &tr in t_options {
        if t.contains(&tr) {
            continue;
        }
        for &sr in &doms.s_domain {
            if s.contains(&sr) {
                continue;
            }
            // New column r: rows i <= r must land in A.
            let column_ok = s.iter().chain([&sr]).all(|si| a.contains(&(*si + tr)));
            // New row r: columns j < r must avoid A.
            let row_ok = t.iter().all(|tj| !a.contains(&(sr + *tj)));
            if column_ok && row_ok {
                s.push(sr);
                t.push(tr);
                best = best.max(extend(a, doms, zero, s, t));
                s.pop();
                t.pop();
            }
        }
    }
    best
}
