//! Explicit sets carrying large order-property witnesses: arithmetic
//! progressions in Z, and a dyadic construction in F2^n whose order grows
//! faster than the square root of its size.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::group::{Ambient, FiniteSet, GroupElement, Witness};
use crate::orderprop::verify_witness;

/// Largest dyadic parameter accepted; `k = C(2l, l) 2^l` reaches 1120 at 4.
pub const MAX_DYADIC_L: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionMeta {
    Ap {
        start: i64,
        diff: i64,
        len: usize,
    },
    Dyadic {
        l: usize,
        r: usize,
        k: usize,
        /// `|A|` from the closed counting formula.
        size_formula: u128,
        size_bound: f64,
    },
}

#[derive(Clone, Debug)]
pub struct ConstructedInstance<E> {
    pub set: FiniteSet<E>,
    pub witness: Witness<E>,
    pub meta: ConstructionMeta,
    /// Size before [`pad_to_size`] added fresh elements, if it did.
    pub padded_from: Option<usize>,
}

impl<E: GroupElement> ConstructedInstance<E> {
    fn checked(set: FiniteSet<E>, witness: Witness<E>, meta: ConstructionMeta) -> Result<Self> {
        let verdict = verify_witness(&set, &witness)?;
        if let Some(v) = verdict.violation {
            return Err(Error::Invariant(format!("constructed witness fails: {v}")));
        }
        Ok(ConstructedInstance {
            set,
            witness,
            meta,
            padded_from: None,
        })
    }

    pub fn order(&self) -> usize {
        self.witness.k()
    }

    /// `log k / log |A|`.
    pub fn order_exponent(&self) -> f64 {
        (self.order() as f64).ln() / (self.set.len() as f64).ln()
    }
}

/// `A = {x, x+d, ..., x+(N-1)d}` with `s_i = x - id`, `t_i = id`, so that
/// `s_i + t_j = x + (j-i)d ∈ A` exactly when `i <= j`.
pub fn ap_witness(start: i64, diff: i64, len: usize) -> Result<ConstructedInstance<i64>> {
    if diff == 0 {
        return Err(Error::range("common difference must be nonzero"));
    }
    if len == 0 {
        return Err(Error::range("progression length must be positive"));
    }
    let (x, d, n) = (start as i128, diff as i128, len as i128);
    for v in [x + (n - 1) * d, x - n * d, n * d] {
        if i64::try_from(v).is_err() {
            return Err(Error::Overflow(format!(
                "progression ({start}, {diff}, {len}) leaves the 64-bit range"
            )));
        }
    }
    let set = FiniteSet::new(Ambient::Z, (0..len as i64).map(|i| start + i * diff))?;
    let idx = 1..=len as i64;
    let witness = Witness::new(
        Ambient::Z,
        idx.clone().map(|i| start - i * diff).collect(),
        idx.map(|i| i * diff).collect(),
    )?;
    ConstructedInstance::checked(
        set,
        witness,
        ConstructionMeta::Ap {
            start,
            diff,
            len,
        },
    )
}

/// Deterministic choices behind the dyadic construction.
#[derive(Clone, Debug)]
pub struct DyadicPlan {
    pub l: usize,
    /// `C(2l, l)`.
    pub r: usize,
    /// `S_1..S_R` as sorted 0-based coordinate lists, with
    /// `S_r ∪ S_{R+1-r} = [2l]`.
    pub subsets: Vec<Vec<usize>>,
    /// Width of each coset tag block, `ceil(log2 R)`.
    pub tag_bits: usize,
    /// Ambient dimension `2l + 2 * tag_bits`.
    pub dim: usize,
    /// `enumerations[i][m]` is `v_{m+1}^{(i+1)}`, listing `V_{S_i}` in
    /// lexicographic order of its restriction to `S_i`.
    pub enumerations: Vec<Vec<BitVector>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn dyadic_plan(l: usize) -> Result<DyadicPlan> {
    if !(1..=MAX_DYADIC_L).contains(&l) {
        return Err(Error::range(format!(
            "dyadic parameter l must lie in 1..={MAX_DYADIC_L}, got {l}"
        )));
    }
    let all = k_subsets(2 * l, l);
    let r = all.len();
    let mut subsets: Vec<Option<Vec<usize>>> = vec![None; r];
    let mut assigned = BTreeSet::new();
    let mut front = 0;
    for s in &all {
        if assigned.contains(s) {
            continue;
        }
        let comp: Vec<usize> = (0..2 * l).filter(|c| !s.contains(c)).collect();
        subsets[front] = Some(s.clone());
        subsets[r - 1 - front] = Some(comp.clone());
        assigned.insert(s.clone());
        assigned.insert(comp);
        front += 1;
    }
    let subsets: Vec<Vec<usize>> = subsets
        .into_iter()
        .map(|s| s.expect("every index is paired"))
        .collect();

    let tag_bits = (usize::BITS - (r - 1).leading_zeros()) as usize;
    let dim = 2 * l + 2 * tag_bits;
    let enumerations = subsets
        .iter()
        .map(|s| {
            (0..1usize << l)
                .map(|mask| {
                    BitVector::from_coords(
                        dim,
                        s.iter()
                            .enumerate()
                            .filter(|(q, _)| mask >> (l - 1 - q) & 1 == 1)
                            .map(|(_, &c)| c),
                    )
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DyadicPlan {
        l,
        r,
        subsets,
        tag_bits,
        dim,
        enumerations,
    })
}

impl DyadicPlan {
    fn tag(&self, block: usize, value: usize) -> Result<BitVector> {
        let offset = 2 * self.l + block * self.tag_bits;
        BitVector::from_coords(
            self.dim,
            (0..self.tag_bits)
                .filter(|q| value >> (self.tag_bits - 1 - q) & 1 == 1)
                .map(|q| offset + q),
        )
    }

    /// Coset representative `u_{b+1}`: the binary code of `b` on the
    /// first tag block.
    pub fn u(&self, b: usize) -> Result<BitVector> {
        self.tag(0, b)
    }

    /// Coset representative `w_{b+1}`: the binary code of `b` on the
    /// second tag block.
    pub fn w(&self, b: usize) -> Result<BitVector> {
        self.tag(1, b)
    }

    /// `|A|` as `Σ_{i<j} 2^{|S_i ∪ S_{R+1-j}|} + R 2^{l-1} (2^l + 1)`.
    pub fn size_formula(&self) -> u128 {
        let r = self.r;
        let mut total = 0u128;
        for i in 0..r {
            for j in i + 1..r {
                let union: BTreeSet<_> = self.subsets[i]
                    .iter()
                    .chain(&self.subsets[r - 1 - j])
                    .collect();
                total += 1u128 << union.len();
            }
        }
        total + r as u128 * (1u128 << (self.l - 1)) * ((1u128 << self.l) + 1)
    }

    /// `Δ_{i,j}` with 0-based `i <= j`.
    fn delta(&self, i: usize, j: usize) -> Vec<BitVector> {
        let r = self.r;
        let left = &self.enumerations[i];
        if i < j {
            let right = &self.enumerations[r - 1 - j];
            left.iter()
                .flat_map(|a| right.iter().map(move |b| *a + *b))
                .collect()
        } else {
            let right = &self.enumerations[r - 1 - i];
            (0..left.len())
                .flat_map(|m| (m..right.len()).map(move |n| left[m] + right[n]))
                .collect()
        }
    }
}

/// `A = ⋃_{i<=j} (u_i + w_j + Δ_{i,j})` with the block witness
/// `s_{a + 2^l(b-1)} = u_b + v_a^{(b)}`,
/// `t_{a + 2^l(b-1)} = w_b + v_a^{(R+1-b)}` of order `R 2^l`.
pub fn dyadic_construction(l: usize) -> Result<ConstructedInstance<BitVector>> {
    let plan = dyadic_plan(l)?;
    let r = plan.r;
    let mut elems = BTreeSet::new();
    for i in 0..r {
        let ui = plan.u(i)?;
        for j in i..r {
            let shift = ui + plan.w(j)?;
            elems.extend(plan.delta(i, j).into_iter().map(|d| d + shift));
        }
    }
    let set = FiniteSet::new(Ambient::F2(plan.dim), elems)?;

    let mut s = Vec::new();
    let mut t = Vec::new();
    for b in 0..r {
        let (ub, wb) = (plan.u(b)?, plan.w(b)?);
        s.extend(plan.enumerations[b].iter().map(|v| ub + *v));
        t.extend(plan.enumerations[r - 1 - b].iter().map(|v| wb + *v));
    }
    let witness = Witness::new(Ambient::F2(plan.dim), s, t)?;
    let meta = ConstructionMeta::Dyadic {
        l,
        r,
        k: witness.k(),
        size_formula: plan.size_formula(),
        size_bound: size_bound(l)?.closed_form,
    };
    ConstructedInstance::checked(set, witness, meta)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeBound {
    /// `2^{4l} (1 + 1/√2)^{2l}`.
    pub closed_form: f64,
    /// `Σ_s C(l,s)^2 2^{-s}`.
    pub binomial_sum: f64,
    /// `C(2l,l) 2^{2l} Σ_s C(l,s)^2 2^{-s}`, the step before the closed form.
    pub chain: f64,
}

pub fn size_bound(l: usize) -> Result<SizeBound> {
    if l == 0 {
        return Err(Error::range("l must be positive"));
    }
    let lf = l as f64;
    let binomial_sum: f64 = (0..=l)
        .map(|s| (binomial(l, s) as f64).powi(2) * 2f64.powi(-(s as i32)))
        .sum();
    Ok(SizeBound {
        closed_form: 2f64.powf(4.0 * lf) * (1.0 + 1.0 / 2f64.sqrt()).powf(2.0 * lf),
        binomial_sum,
        chain: binomial(2 * l, l) as f64 * 2f64.powf(2.0 * lf) * binomial_sum,
    })
}

/// `log_8(1 + (5 - 2√2)/(3 + 2√2))`, the exponent gain of the dyadic
/// construction: sets of size `N` with order `N^{1/(2-c) - o(1)}`.
pub fn dyadic_exponent_constant() -> f64 {
    let r2 = 2f64.sqrt();
    (1.0 + (5.0 - 2.0 * r2) / (3.0 + 2.0 * r2)).log(8.0)
}

/// Adds `target - |A|` fresh elements without disturbing the witness.
///
/// Every vector gains a new block of `ceil(log2(m + 1))` coordinates; old
/// elements and witness entries are zero there while the `m` fresh elements
/// carry the distinct nonzero codes `1..=m`. Sums `s_i + t_j` stay zero on
/// the block, so membership of every witness cell is unchanged.
pub fn pad_to_size(
    inst: &ConstructedInstance<BitVector>,
    target: usize,
) -> Result<ConstructedInstance<BitVector>> {
    let have = inst.set.len();
    if target < have {
        return Err(Error::range(format!(
            "cannot pad a set of size {have} down to {target}"
        )));
    }
    if target == have {
        return Ok(inst.clone());
    }
    let m = target - have;
    let width = (usize::BITS - m.leading_zeros()) as usize;
    let old_dim = inst.set.dim();
    let new_dim = old_dim + width;
    let lift = |xs: &[BitVector]| xs.iter().map(|x| x.extend(width)).collect::<Result<Vec<_>>>();
    let zero = BitVector::zero(old_dim)?;
    let mut elems = inst
        .set
        .iter()
        .map(|x| x.extend(width))
        .collect::<Result<Vec<_>>>()?;
    for code in 1..=m {
        elems.push(zero.concat(&BitVector::from_bits(width, code as u128)?)?);
    }
    let set = FiniteSet::new(Ambient::F2(new_dim), elems)?;
    let witness = Witness::new(
        Ambient::F2(new_dim),
        lift(inst.witness.s())?,
        lift(inst.witness.t())?,
    )?;
    let mut out = ConstructedInstance::checked(set, witness, inst.meta.clone())?;
    out.padded_from = Some(inst.padded_from.unwrap_or(have));
    Ok(out)
}

/// A set of exactly `target` elements: the largest dyadic instance that
/// fits, padded with fresh elements.
pub fn dyadic_for_size(target: usize) -> Result<ConstructedInstance<BitVector>> {
    let mut best = None;
    for l in 1..=MAX_DYADIC_L {
        if dyadic_plan(l)?.size_formula() <= target as u128 {
            best = Some(l);
        }
    }
    let l = best.ok_or_else(|| {
        Error::range(format!("no dyadic instance has at most {target} elements"))
    })?;
    pad_to_size(&dyadic_construction(l)?, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ap_small() {
        let inst = ap_witness(0, 1, 3).unwrap();
        assert_eq!(inst.set.elements(), &[0, 1, 2].into());
        assert_eq!(inst.witness.s(), &[-1, -2, -3]);
        assert_eq!(inst.witness.t(), &[1, 2, 3]);
    }

    #[test]
    fn ap_even_step() {
        let inst = ap_witness(0, 2, 4).unwrap();
        assert_eq!(inst.set.elements(), &[0, 2, 4, 6].into());
        assert_eq!(inst.witness.s(), &[-2, -4, -6, -8]);
        assert_eq!(inst.witness.t(), &[2, 4, 6, 8]);
        assert!(verify_witness(&inst.set, &inst.witness).unwrap().is_valid());
    }

    #[test]
    fn ap_rejects_degenerate_and_overflow() {
        assert!(ap_witness(5, 0, 3).is_err());
        assert!(ap_witness(0, 1, 0).is_err());
        assert!(matches!(ap_witness(i64::MAX - 1, 1, 3), Err(Error::Overflow(_))));
        assert!(matches!(ap_witness(i64::MIN + 2, 1, 3), Err(Error::Overflow(_))));
    }

    #[test]
    fn plan_l1() {
        let p = dyadic_plan(1).unwrap();
        assert_eq!(p.r, 2);
        assert_eq!(p.subsets, vec![vec![0], vec![1]]);
        assert_eq!(p.dim, 4);
        let v: Vec<String> = p.enumerations[0].iter().map(|v| v.to_string()).collect();
        assert_eq!(v, ["0000", "1000"]);
    }

    #[test]
    fn plan_l2_pairs_complements() {
        let p = dyadic_plan(2).unwrap();
        assert_eq!(p.r, 6);
        for r in 0..6 {
            let mut union: Vec<usize> = p.subsets[r].iter().chain(&p.subsets[5 - r]).copied().collect();
            union.sort();
            assert_eq!(union, vec![0, 1, 2, 3]);
        }
        let distinct: BTreeSet<_> = p.subsets.iter().collect();
        assert_eq!(distinct.len(), 6);
        assert_eq!(p.subsets[0], vec![0, 1]);
        assert_eq!(p.subsets[5], vec![2, 3]);
    }

    #[test]
    fn plan_range() {
        assert!(dyadic_plan(0).is_err());
        assert!(dyadic_plan(5).is_err());
        for l in 1..=MAX_DYADIC_L {
            let p = dyadic_plan(l).unwrap();
            assert_eq!(p.r % 2, 0);
            for s in &p.subsets {
                assert_eq!(s.len(), l);
                let comp: Vec<usize> = (0..2 * l).filter(|c| !s.contains(c)).collect();
                assert_ne!(&comp, s);
            }
        }
    }

    #[test]
    fn dyadic_l1() {
        let inst = dyadic_construction(1).unwrap();
        assert_eq!(inst.order(), 4);
        assert_eq!(inst.set.len(), 8);
        match inst.meta {
            ConstructionMeta::Dyadic { size_formula, .. } => assert_eq!(size_formula, 8),
            _ => unreachable!(),
        }
    }

    #[test]
    fn size_bound_values() {
        let b1 = size_bound(1).unwrap();
        assert!((b1.closed_form - 46.627_416_997_969_52).abs() < 1e-9);
        let b2 = size_bound(2).unwrap();
        assert!((b2.closed_form - 2_174.116_016).abs() < 1e-3);
        assert!(size_bound(0).is_err());
        for l in 1..=8 {
            let b = size_bound(l).unwrap();
            assert!(b.chain <= b.closed_form * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exponent_constant() {
        assert!((dyadic_exponent_constant() - 0.152_3).abs() < 1e-3);
    }

    #[test]
    fn padding() {
        let inst = dyadic_construction(1).unwrap();
        let padded = pad_to_size(&inst, 10).unwrap();
        assert_eq!(padded.set.len(), 10);
        assert_eq!(padded.order(), 4);
        assert_eq!(padded.padded_from, Some(8));
        assert!(verify_witness(&padded.set, &padded.witness).unwrap().is_valid());
        assert_eq!(pad_to_size(&inst, 8).unwrap().set, inst.set);
        assert!(pad_to_size(&inst, 7).is_err());
    }

    #[test]
    fn sized_instances() {
        assert!(dyadic_for_size(7).is_err());
        let inst = dyadic_for_size(200).unwrap();
        assert_eq!(inst.set.len(), 200);
        assert_eq!(inst.order(), 24);
    }
}
