//! Compressing an order-property witness into a small dyadic group.
//!
//! Given a witness of order `k` in F2^N and `l <= k/4`, the middle block of
//! the witness is pushed through a linear map that is injective on the
//! relevant sumset, giving a set in some F2^n with the `(k - 2l + 1)`-order
//! property and `2^n` bounded polynomially in `k/l` and `|A|/k`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gf2::{quotient_map, sumset, BitVector, LinearMap2, Subspace2};
use crate::group::{Ambient, FiniteSet, Witness};
use crate::orderprop::verify_witness;

/// The four blocks of a witness of order `k`, using 1-based index ranges
/// `S' = s_1..s_l`, `S⁺ = s_l..s_{k-l}`, `T' = t_{k-l}..t_k`,
/// `T⁺ = t_l..t_{k-l}`.
#[derive(Clone, Debug)]
pub struct WitnessPartition {
    pub s_prime: BTreeSet<BitVector>,
    pub s_plus: BTreeSet<BitVector>,
    pub t_prime: BTreeSet<BitVector>,
    pub t_plus: BTreeSet<BitVector>,
    pub l: usize,
    pub k: usize,
    pub a_size: usize,
    /// `l / k`.
    pub eta: Ratio<u64>,
    /// `|A| / k`.
    pub big_k: Ratio<u64>,
}

fn check_l(l: usize, k: usize) -> Result<()> {
    if l == 0 || 4 * l > k {
        return Err(Error::range(format!(
            "need 1 <= l <= k/4, got l = {l} with k = {k}"
        )));
    }
    Ok(())
}

pub fn partition_witness(
    a: &FiniteSet<BitVector>,
    w: &Witness<BitVector>,
    l: usize,
) -> Result<WitnessPartition> {
    let k = w.k();
    check_l(l, k)?;
    if let Some(v) = verify_witness(a, w)?.violation {
        return Err(Error::InvalidWitness(v.to_string()));
    }
    let pick = |xs: &[BitVector], lo: usize, hi: usize| -> BTreeSet<BitVector> {
        xs[lo - 1..hi].iter().copied().collect()
    };
    let part = WitnessPartition {
        s_prime: pick(w.s(), 1, l),
        s_plus: pick(w.s(), l, k - l),
        t_prime: pick(w.t(), k - l, k),
        t_plus: pick(w.t(), l, k - l),
        l,
        k,
        a_size: a.len(),
        eta: Ratio::new(l as u64, k as u64),
        big_k: Ratio::new(a.len() as u64, k as u64),
    };
    for (x, y, name) in [
        (&part.s_prime, &part.t_plus, "S' + T+"),
        (&part.s_prime, &part.t_prime, "S' + T'"),
        (&part.s_plus, &part.t_prime, "S+ + T'"),
    ] {
        if !sumset(x, y)?.iter().all(|z| a.contains(z)) {
            return Err(Error::Invariant(format!("{name} is not contained in A")));
        }
    }
    Ok(part)
}

/// The chain of upper bounds on `|S⁺ + T⁺|` obtained from three uses of
/// the Ruzsa triangle inequality `|X + Z||Y| <= |X + Y||Y + Z|`.
#[derive(Clone, Debug)]
pub struct RuzsaReport {
    pub plus_sum: usize,
    /// `|S⁺+T'| |T'+T⁺| / |T'|`.
    pub first: BigRational,
    /// `|S⁺+T'| |T'+S'| |S'+T⁺| / (|T'| |S'|)`.
    pub second: BigRational,
    /// `|A|^3 / l^2`, which equals `η^{-2} K^3 k`.
    pub third: BigRational,
    /// `2 |A|^3 min(|S⁺|, |T⁺|) / (l^2 k)`.
    pub fourth: BigRational,
    pub holds: bool,
}

fn big(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn ruzsa_check(p: &WitnessPartition) -> Result<RuzsaReport> {
    let size = |x: &BTreeSet<BitVector>, y: &BTreeSet<BitVector>| -> Result<BigRational> {
        Ok(big(sumset(x, y)?.len()))
    };
    let plus_sum = sumset(&p.s_plus, &p.t_plus)?.len();
    let s_t_prime = size(&p.s_plus, &p.t_prime)?;
    let first = &s_t_prime * size(&p.t_prime, &p.t_plus)? / big(p.t_prime.len());
    let second = &s_t_prime * size(&p.t_prime, &p.s_prime)? * size(&p.s_prime, &p.t_plus)?
        / (big(p.t_prime.len()) * big(p.s_prime.len()));
    let a3 = big(p.a_size) * big(p.a_size) * big(p.a_size);
    let third = &a3 / (big(p.l) * big(p.l));
    let fourth = big(2) * &a3 * big(p.s_plus.len().min(p.t_plus.len()))
        / (big(p.l) * big(p.l) * big(p.k));
    let holds = big(plus_sum) <= first && first <= second && second <= third && third <= fourth;
    Ok(RuzsaReport {
        plus_sum,
        first,
        second,
        third,
        fourth,
        holds,
    })
}

/// One quotient step of [`minimal_model`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelStep {
    /// Dimension before the step.
    pub n: usize,
    /// `|D|` before the step.
    pub d_size: usize,
    /// The least element outside `D`, which spans the kernel of the step.
    pub removed: BitVector,
}

#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub n: usize,
    pub phi: LinearMap2,
    /// `|φ(S⁺) + φ(S⁺) + φ(T⁺) + φ(T⁺)|`, equal to `2^n` at termination.
    pub d_size: usize,
    /// Dimension of the span of `S⁺ ∪ T⁺`, the starting point.
    pub start_dim: usize,
    pub trace: Vec<ModelStep>,
}

fn image(phi: &LinearMap2, xs: &BTreeSet<BitVector>) -> Result<BTreeSet<BitVector>> {
    xs.iter().map(|x| phi.apply(x)).collect()
}

/// A homomorphism `φ: F2^N -> F2^n` injective on `S⁺ + T⁺` with
/// `2^n = |φ(S⁺) + φ(S⁺) + φ(T⁺) + φ(T⁺)|`.
///
/// Starts from the projection of the span of `S⁺ ∪ T⁺` onto its pivot
/// coordinates, then repeatedly quotients by the least `x ∉ D`. If two
/// points of `S⁺ + T⁺` merged, their difference would be `x ∈ D`, so
/// injectivity survives each step; it is re-checked anyway.
pub fn minimal_model(p: &WitnessPartition, ambient_n: usize) -> Result<MinimalModel> {
    let involved: Vec<BitVector> = p.s_plus.iter().chain(&p.t_plus).copied().collect();
    let span = Subspace2::span(ambient_n, &involved)?;
    let mut phi = LinearMap2::projection(ambient_n, &span.pivot_coords())?;
    let mut n = span.dim();
    let plus_sum = sumset(&p.s_plus, &p.t_plus)?;
    let mut trace = Vec::new();
    loop {
        let images = image(&phi, &plus_sum)?;
        if images.len() != plus_sum.len() {
            return Err(Error::Invariant(format!(
                "φ is not injective on S+ + T+ at n = {n}"
            )));
        }
        let ss = sumset(&image(&phi, &p.s_plus)?, &image(&phi, &p.s_plus)?)?;
        let tt = sumset(&image(&phi, &p.t_plus)?, &image(&phi, &p.t_plus)?)?;
        let d = sumset(&ss, &tt)?;
        if n < 128 && d.len() as u128 == 1u128 << n {
            return Ok(MinimalModel {
                n,
                phi,
                d_size: d.len(),
                start_dim: span.dim(),
                trace,
            });
        }
        let x = (0u128..)
            .map(|b| BitVector::from_bits(n, b).expect("index below |D| + 1 fits"))
            .find(|x| !d.contains(x))
            .expect("D is a proper subset");
        trace.push(ModelStep {
            n,
            d_size: d.len(),
            removed: x,
        });
        phi = quotient_map(n, &x)?.compose(&phi)?;
        n -= 1;
    }
}

#[derive(Clone, Debug)]
pub struct ModelResult {
    pub n: usize,
    pub phi: LinearMap2,
    pub a_prime: FiniteSet<BitVector>,
    /// Order `k - 2l + 1`.
    pub witness_prime: Witness<BitVector>,
    /// Whether `2^n <= 16 η^{-10} K^15 k`.
    pub bound_ok: bool,
    /// `log2(16 η^{-10} K^15 k) - n`.
    pub bound_slack_log2: f64,
    pub eta: Ratio<u64>,
    pub big_k: Ratio<u64>,
    pub d_size: usize,
    pub l: usize,
    pub k: usize,
    pub trace: Vec<ModelStep>,
}

/// Runs [`partition_witness`] and [`minimal_model`] and transports the
/// middle of the witness: `A' = {φ(s_i + t_j) : l <= i <= j <= k-l}` with
/// `s'_i = φ(s_{l+i-1})`, `t'_j = φ(t_{l+j-1})`.
pub fn compress(
    a: &FiniteSet<BitVector>,
    w: &Witness<BitVector>,
    l: usize,
) -> Result<ModelResult> {
    let part = partition_witness(a, w, l)?;
    let model = minimal_model(&part, a.dim())?;
    let k = w.k();
    let m = k - 2 * l + 1;
    let phi = &model.phi;
    let s: Vec<BitVector> = w.s()[l - 1..k - l]
        .iter()
        .map(|x| phi.apply(x))
        .collect::<Result<_>>()?;
    let t: Vec<BitVector> = w.t()[l - 1..k - l]
        .iter()
        .map(|x| phi.apply(x))
        .collect::<Result<_>>()?;
    let mut elems = BTreeSet::new();
    for i in l..=k - l {
        for j in i..=k - l {
            elems.insert(phi.apply(&(w.s()[i - 1] + w.t()[j - 1]))?);
        }
    }
    let ambient = Ambient::F2(model.n);
    let a_prime = FiniteSet::new(ambient, elems)?;
    let witness_prime = Witness::new(ambient, s, t)?;
    debug_assert_eq!(witness_prime.k(), m);
    if let Some(v) = verify_witness(&a_prime, &witness_prime)?.violation {
        return Err(Error::Invariant(format!("compressed witness fails: {v}")));
    }

    // 2^n <= 16 (k/l)^10 (|A|/k)^15 k  <=>  2^n l^10 k^4 <= 16 |A|^15.
    let lhs = (BigUint::from(1u8) << model.n) * BigUint::from(l).pow(10) * BigUint::from(k).pow(4);
    let rhs = BigUint::from(16u8) * BigUint::from(a.len()).pow(15);
    let log2 = |x: &BigUint| x.to_f64().map_or(f64::INFINITY, f64::log2);
    let bound_slack_log2 = log2(&rhs) - log2(&lhs);

    Ok(ModelResult {
        n: model.n,
        phi: model.phi,
        a_prime,
        witness_prime,
        bound_ok: lhs <= rhs,
        bound_slack_log2,
        eta: part.eta,
        big_k: part.big_k,
        d_size: model.d_size,
        l,
        k,
        trace: model.trace,
    })
}

/// Nonempty `Z ⊆ T` minimizing `|S + Z| / |Z|`; ties go to the smaller
/// `|Z|`, then to the lexicographically smaller sorted element list.
pub fn petridis_minimizer(
    s: &BTreeSet<BitVector>,
    t: &BTreeSet<BitVector>,
) -> Result<(BTreeSet<BitVector>, Ratio<u64>)> {
    if t.is_empty() || t.len() > 15 {
        return Err(Error::range(format!(
            "exhaustive search needs 1 <= |T| <= 15, got {}",
            t.len()
        )));
    }
    let elems: Vec<BitVector> = t.iter().copied().collect();
    let mut best: Option<(Ratio<u64>, Vec<BitVector>)> = None;
    for mask in 1u32..1 << elems.len() {
        let z: Vec<BitVector> = (0..elems.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| elems[b])
            .collect();
        let ratio = Ratio::new(sumset(s, &z)?.len() as u64, z.len() as u64);
        let better = match &best {
            None => true,
            Some((r, bz)) => (ratio, z.len(), &z) < (*r, bz.len(), bz),
        };
        if better {
            best = Some((ratio, z));
        }
    }
    let (ratio, z) = best.expect("T is nonempty");
    Ok((z.into_iter().collect(), ratio))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PetridisCheck {
    /// `|S + Z + C|`.
    pub lhs: usize,
    /// `|Z + C|`.
    pub zc: usize,
    pub holds: bool,
}

/// `|S + Z + C| <= ratio |Z + C|` for a minimizer `Z` with its ratio.
pub fn petridis_check(
    s: &BTreeSet<BitVector>,
    z: &BTreeSet<BitVector>,
    ratio: Ratio<u64>,
    c: &BTreeSet<BitVector>,
) -> Result<PetridisCheck> {
    let zc = sumset(z, c)?;
    let lhs = sumset(s, &zc)?.len();
    Ok(PetridisCheck {
        lhs,
        zc: zc.len(),
        holds: Ratio::from_integer(lhs as u64) <= ratio * Ratio::from_integer(zc.len() as u64),
    })
}
