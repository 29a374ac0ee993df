//! The polynomial method over F2: spaces of low-degree multilinear
//! polynomials, binomial tail bounds via binary entropy, and rank
//! certificates bounding the order of a witness.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitRow, BitVector};
use crate::group::{FiniteSet, Witness};
use crate::orderprop::verify_witness;

/// Largest `n` for which evaluation matrices and truth tables are built.
pub const MAX_DENSE_DIM: usize = 14;

const REL_TOL: f64 = 1e-9;

/// Row `n` of Pascal's triangle; exact for `n <= 127`.
fn pascal_row(n: usize) -> Result<Vec<u128>> {
    if n > 127 {
        return Err(Error::range(format!("binomial row {n} exceeds 128-bit range")));
    }
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    Ok(row)
}

/// `dim S_n^d = Σ_{r=0}^{d} C(n, r)`, the number of multilinear monomials of
/// degree at most `d` in `n` variables.
pub fn dim_snd(n: usize, d: usize) -> Result<u128> {
    if d > n {
        return Err(Error::range(format!("degree {d} exceeds {n} variables")));
    }
    Ok(pascal_row(n)?[..=d].iter().sum())
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::range(format!("entropy argument {p} outside [0, 1]")));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}

fn integral_threshold(n: usize, p: f64) -> Result<usize> {
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::range(format!("p = {p} must lie in (1/2, 1]")));
    }
    let np = p * n as f64;
    let r = np.round();
    if (np - r).abs() > 1e-9 * np.max(1.0) {
        return Err(Error::range(format!("p n = {np} is not an integer")));
    }
    Ok(r as usize)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyBound {
    /// `Σ_{r=pn}^{n} C(n, r)`, exact.
    pub lhs: u128,
    /// `2^{H(p) n}`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `Σ_{r >= pn} C(n, r) <= 2^{H(p) n}` for `p ∈ (1/2, 1]` with `pn`
/// integral. Only the right-hand side carries a relative tolerance.
pub fn entropy_bound_check(n: usize, p: f64) -> Result<EntropyBound> {
    let r = integral_threshold(n, p)?;
    let lhs: u128 = pascal_row(n)?[r..].iter().sum();
    let rhs = (entropy(p)? * n as f64).exp2();
    Ok(EntropyBound {
        lhs,
        rhs,
        holds: lhs as f64 <= rhs * (1.0 + REL_TOL),
    })
}

/// The monomials `x_I = ∏_{i∈I} x_i` with `|I| <= d`, ordered by degree and
/// then lexicographically on the sorted index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    /// `I` as the indicator vector in F2^n.
    monomials: Vec<BitVector>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n > MAX_DENSE_DIM {
            return Err(Error::range(format!(
                "monomial basis limited to n <= {MAX_DENSE_DIM}, got {n}"
            )));
        }
        if d > n {
            return Err(Error::range(format!("degree {d} exceeds {n} variables")));
        }
        let mut monomials = Vec::with_capacity(dim_snd(n, d)? as usize);
        for r in 0..=d {
            push_subsets(n, r, 0, &mut Vec::new(), &mut monomials)?;
        }
        Ok(MonomialBasis { n, d, monomials })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[BitVector] {
        &self.monomials
    }
}

fn push_subsets(
    n: usize,
    r: usize,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<BitVector>,
) -> Result<()> {
    if cur.len() == r {
        out.push(BitVector::from_coords(n, cur.iter().copied())?);
        return Ok(());
    }
    for i in start..n {
        cur.push(i);
        push_subsets(n, r, i + 1, cur, out)?;
        cur.pop();
    }
    Ok(())
}

/// A multilinear polynomial over F2 given by its coefficients on a
/// [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    basis: Arc<MonomialBasis>,
    coeffs: BitRow,
}

impl Poly2 {
    pub fn new(basis: Arc<MonomialBasis>, coeffs: BitRow) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return Err(Error::LengthMismatch {
                s: coeffs.len(),
                t: basis.dim(),
            });
        }
        Ok(Poly2 { basis, coeffs })
    }

    pub fn zero(basis: Arc<MonomialBasis>) -> Self {
        let coeffs = BitRow::zeros(basis.dim());
        Poly2 { basis, coeffs }
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &BitRow {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Largest degree of a monomial with nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .ones()
            .map(|j| self.basis.monomials[j].weight() as usize)
            .max()
    }

    pub fn plus(&self, other: &Poly2) -> Result<Poly2> {
        if self.basis != other.basis {
            return Err(Error::Invariant("adding polynomials over different bases".into()));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.xor_assign(&other.coeffs);
        Ok(Poly2 {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    /// `P(x) = Σ_{I ⊆ supp x} c_I`.
    pub fn evaluate(&self, x: &BitVector) -> Result<bool> {
        if x.dim() != self.basis.n {
            return Err(Error::DimensionMismatch {
                left: self.basis.n,
                right: x.dim(),
            });
        }
        Ok(self
            .coeffs
            .ones()
            .filter(|&j| self.basis.monomials[j].is_subset_of(x))
            .count()
            % 2
            == 1)
    }

    /// Truth table indexed by `x.bits()`, via the subset-sum transform.
    pub fn values(&self) -> BitRow {
        let n = self.basis.n;
        let mut table = vec![false; 1 << n];
        for j in self.coeffs.ones() {
            table[self.basis.monomials[j].bits() as usize] ^= true;
        }
        for b in 0..n {
            for m in 0..table.len() {
                if m >> b & 1 == 1 {
                    table[m] ^= table[m ^ (1 << b)];
                }
            }
        }
        BitRow::from_bools(table)
    }

    /// `{x : P(x) = 1}` in lexicographic order.
    pub fn support(&self) -> Vec<BitVector> {
        let n = self.basis.n;
        self.values()
            .ones()
            .map(|m| BitVector::from_bits(n, m as u128).expect("index fits dimension"))
            .collect()
    }
}

/// `V = {F ∈ S_n^d : F = 0 on F2^n \ A}` with the data behind its
/// dimension count.
#[derive(Clone, Debug)]
pub struct VanishingSpace {
    pub monomials: Arc<MonomialBasis>,
    pub basis: Vec<Poly2>,
    /// `|F2^n \ A|`, the number of rows of the evaluation matrix.
    pub complement_size: usize,
    /// Rank of the evaluation matrix.
    pub eval_rank: usize,
}

impl VanishingSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn vanishing_space(a: &FiniteSet<BitVector>, d: usize) -> Result<VanishingSpace> {
    let n = a.dim();
    let monomials = Arc::new(MonomialBasis::new(n, d)?);
    let outside = a.complement()?;
    let eval = BitMatrix::from_fn(outside.len(), monomials.dim(), |i, j| {
        monomials.monomials[j].is_subset_of(&outside[i])
    });
    let ech = eval.rref();
    let basis = ech
        .kernel()
        .into_iter()
        .map(|coeffs| Poly2::new(monomials.clone(), coeffs))
        .collect::<Result<Vec<_>>>()?;
    Ok(VanishingSpace {
        monomials,
        complement_size: outside.len(),
        eval_rank: ech.rank(),
        basis,
    })
}

/// A polynomial in the span of `basis` whose support `Σ` admits no nonzero
/// element of the span vanishing on it; hence `|Σ| >= dim`.
///
/// Starts from the sum of the basis and, while some nonzero `Q` in the span
/// vanishes on the current support, replaces `P` by `P + Q`, which strictly
/// enlarges the support.
pub fn max_support_poly(basis: &[Poly2]) -> Result<(Poly2, Vec<BitVector>)> {
    let first = basis
        .first()
        .ok_or_else(|| Error::range("the vanishing space is trivial"))?;
    let tables: Vec<BitRow> = basis.iter().map(Poly2::values).collect();
    let mut combo = BitRow::from_bools(std::iter::repeat_n(true, basis.len()));
    let mut values = BitRow::zeros(tables[0].len());
    for t in &tables {
        values.xor_assign(t);
    }
    loop {
        let support: Vec<usize> = values.ones().collect();
        let restricted = BitMatrix::from_fn(support.len(), basis.len(), |p, b| {
            tables[b].get(support[p])
        });
        let kernel = restricted.kernel();
        if kernel.is_empty() {
            break;
        }
        let mut q = BitRow::zeros(basis.len());
        for v in &kernel {
            q.xor_assign(v);
        }
        let before = support.len();
        for b in q.ones() {
            values.xor_assign(&tables[b]);
        }
        combo.xor_assign(&q);
        if values.count_ones() <= before {
            return Err(Error::Invariant("support failed to grow".into()));
        }
    }
    let mut coeffs = BitRow::zeros(first.basis().dim());
    for b in combo.ones() {
        coeffs.xor_assign(basis[b].coeffs());
    }
    let p = Poly2::new(first.basis().clone(), coeffs)?;
    let support = p.support();
    Ok((p, support))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeMode {
    /// `d = pn - 1` must be even.
    Strict,
    /// Any `d`, with the rank split at `⌊d/2⌋`.
    Relaxed,
}

pub const CERTIFICATE_CSV_HEADER: &str = "n,d,p,dimV,support,I,rank,upper,k";

#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub dim_v: usize,
    pub support_size: usize,
    pub i_size: usize,
    pub rank: usize,
    /// `2 dim S_n^{⌊d/2⌋}`.
    pub upper: u128,
    pub k: usize,
}

impl RankCertificate {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.p,
            self.dim_v,
            self.support_size,
            self.i_size,
            self.rank,
            self.upper,
            self.k
        )
    }
}

impl fmt::Display for RankCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, p = {}, d = {}", self.n, self.p, self.d)?;
        writeln!(f, "dim V = {}", self.dim_v)?;
        writeln!(f, "|support P| = {}", self.support_size)?;
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "|I| = {}", self.i_size)?;
        writeln!(f, "rank (P(s_i + t_j)) = {}", self.rank)?;
        write!(f, "2 dim S_n^{} = {}", self.d / 2, self.upper)
    }
}

/// Certifies `|I| <= rank (P(s_i + t_j)) <= 2 dim S_n^{⌊d/2⌋}` for a
/// polynomial `P` of degree `d = pn - 1` vanishing off `A` with maximal
/// support, where `I = {i : P(s_i + t_i) = 1}`.
///
/// Cells below the diagonal lie off `A`, so the matrix is upper triangular
/// and the rows indexed by `I` are independent. The upper bound comes from
/// splitting every monomial of `P(x + y)` into a factor of degree at most
/// `⌊d/2⌋` in `x` or in `y`.
pub fn rank_certificate(
    a: &FiniteSet<BitVector>,
    w: &Witness<BitVector>,
    p: f64,
    mode: DegreeMode,
) -> Result<RankCertificate> {
    let n = a.dim();
    if n > MAX_DENSE_DIM {
        return Err(Error::range(format!(
            "rank certificates limited to n <= {MAX_DENSE_DIM}, got {n}"
        )));
    }
    if let Some(v) = verify_witness(a, w)?.violation {
        return Err(Error::InvalidWitness(v.to_string()));
    }
    let r = integral_threshold(n, p)?;
    if r == 0 {
        return Err(Error::range("p n must be at least 1"));
    }
    let d = r - 1;
    if mode == DegreeMode::Strict && d % 2 == 1 {
        return Err(Error::range(format!(
            "p n - 1 = {d} is odd; choose p with p n odd or use relaxed mode"
        )));
    }
    let space = vanishing_space(a, d)?;
    let (poly, support_size) = if space.dim() == 0 {
        (Poly2::zero(space.monomials.clone()), 0)
    } else {
        let (poly, support) = max_support_poly(&space.basis)?;
        (poly, support.len())
    };
    let values = poly.values();
    let k = w.k();
    let m = BitMatrix::from_fn(k, k, |i, j| {
        values.get((w.s()[i] + w.t()[j]).bits() as usize)
    });
    for i in 0..k {
        for j in 0..i {
            if m.get(i, j) {
                return Err(Error::Invariant(format!(
                    "P is nonzero at cell ({}, {}) outside A",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let rank = m.rank();
    if rank != m.transpose().rank() {
        return Err(Error::Invariant("row and column rank disagree".into()));
    }
    let i_size = (0..k).filter(|&i| m.get(i, i)).count();
    let upper = 2 * dim_snd(n, d / 2)?;
    if i_size > rank || rank as u128 > upper {
        return Err(Error::Invariant(format!(
            "certificate chain fails: |I| = {i_size}, rank = {rank}, upper = {upper}"
        )));
    }
    Ok(RankCertificate {
        n,
        d,
        p,
        dim_v: space.dim(),
        support_size,
        i_size,
        rank,
        upper,
        k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityBound {
    /// `max{H(p)n + 1, H(1 - p/2)n + 2}` at the minimizer.
    pub log2_bound: f64,
    /// `2^{log2_bound}`; infinite once it leaves the double range.
    pub k_bound: f64,
    pub p_star: f64,
    /// `p_star n`, always odd.
    pub r: usize,
}

/// Minimizes `max{2^{H(p)n+1}, 2^{H(1-p/2)n+2}}` over `p = r/n ∈ (1/2, 1]`
/// with `r` odd, so that `d = r - 1` is even. Ties go to the smaller `r`.
pub fn stability_upper_bound(n: usize) -> Result<StabilityBound> {
    let mut best: Option<StabilityBound> = None;
    for r in (n / 2 + 1..=n).filter(|r| r % 2 == 1) {
        let p = r as f64 / n as f64;
        let nf = n as f64;
        let log2_bound = (entropy(p)? * nf + 1.0).max(entropy(1.0 - p / 2.0)? * nf + 2.0);
        if best.is_none_or(|b| log2_bound < b.log2_bound) {
            best = Some(StabilityBound {
                log2_bound,
                k_bound: log2_bound.exp2(),
                p_star: p,
                r,
            });
        }
    }
    best.ok_or_else(|| Error::range(format!("no odd r with n/2 < r <= n for n = {n}")))
}

/// `(c0, c)` with `c0 = 1 - H(2/3)` and `c = c0 / (15 - 14 c0)`.
pub fn theorem_constant() -> (f64, f64) {
    let c0 = 1.0 - entropy(2.0 / 3.0).expect("2/3 lies in [0, 1]");
    (c0, c0 / (15.0 - 14.0 * c0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Ambient;

    fn f2_set(n: usize, xs: impl IntoIterator<Item = BitVector>) -> FiniteSet<BitVector> {
        FiniteSet::new(Ambient::F2(n), xs).unwrap()
    }

    #[test]
    fn dims() {
        assert_eq!(dim_snd(4, 2).unwrap(), 11);
        assert_eq!(dim_snd(7, 7).unwrap(), 128);
        assert_eq!(dim_snd(9, 0).unwrap(), 1);
        assert_eq!(dim_snd(127, 127).unwrap(), 1u128 << 127);
        assert!(dim_snd(3, 4).is_err());
        assert_eq!(MonomialBasis::new(4, 2).unwrap().dim(), 11);
    }

    #[test]
    fn monomial_order() {
        let b = MonomialBasis::new(3, 2).unwrap();
        let m: Vec<String> = b.monomials().iter().map(|v| v.to_string()).collect();
        assert_eq!(m, ["000", "100", "010", "001", "110", "101", "011"]);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!((entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((entropy(2.0 / 3.0).unwrap() - (3f64.log2() - 2.0 / 3.0)).abs() < 1e-12);
        assert!(entropy(1.5).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn entropy_bound_examples() {
        let b = entropy_bound_check(4, 0.75).unwrap();
        assert_eq!(b.lhs, 5);
        assert!((b.rhs - 9.48).abs() < 0.01);
        assert!(b.holds);
        let b = entropy_bound_check(2, 1.0).unwrap();
        assert_eq!(b.lhs, 1);
        assert_eq!(b.rhs, 1.0);
        assert!(b.holds);
        assert!(entropy_bound_check(4, 0.5).is_err());
        assert!(entropy_bound_check(4, 0.7).is_err());
    }

    #[test]
    fn evaluation_matches_truth_table() {
        let basis = Arc::new(MonomialBasis::new(3, 2).unwrap());
        let coeffs = BitRow::from_bools([true, false, true, false, false, true, false]);
        let p = Poly2::new(basis, coeffs).unwrap();
        let table = p.values();
        for x in BitVector::all(3).unwrap() {
            assert_eq!(p.evaluate(&x).unwrap(), table.get(x.bits() as usize));
        }
        // 1 + x2 + x1 x3
        assert!(p.evaluate(&"000".parse().unwrap()).unwrap());
        assert!(!p.evaluate(&"010".parse().unwrap()).unwrap());
        assert!(!p.evaluate(&"101".parse().unwrap()).unwrap());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn vanishing_examples() {
        let full = f2_set(3, BitVector::all(3).unwrap());
        assert_eq!(vanishing_space(&full, 2).unwrap().dim(), 7);
        let empty = f2_set(3, []);
        assert_eq!(vanishing_space(&empty, 3).unwrap().dim(), 0);
        let half = f2_set(3, BitVector::all(3).unwrap().filter(|x| x.get(0)));
        let v = vanishing_space(&half, 1).unwrap();
        assert_eq!(v.dim(), 1);
        for p in &v.basis {
            for x in half.complement().unwrap() {
                assert!(!p.evaluate(&x).unwrap());
            }
        }
    }

    #[test]
    fn max_support_examples() {
        let basis = Arc::new(MonomialBasis::new(3, 0).unwrap());
        let one = Poly2::new(basis, BitRow::from_bools([true])).unwrap();
        let (_, s) = max_support_poly(std::slice::from_ref(&one)).unwrap();
        assert_eq!(s.len(), 8);

        let full = f2_set(3, BitVector::all(3).unwrap());
        let v = vanishing_space(&full, 3).unwrap();
        let (_, s) = max_support_poly(&v.basis).unwrap();
        assert_eq!(s.len(), 8);
        assert!(max_support_poly(&[]).is_err());
    }

    #[test]
    fn stability_bound_small() {
        let b = stability_upper_bound(3).unwrap();
        assert_eq!(b.r, 3);
        assert!(stability_upper_bound(2).is_err());
        for n in [30, 60, 90] {
            let b = stability_upper_bound(n).unwrap();
            assert_eq!(b.r % 2, 1);
            assert!((b.p_star - 2.0 / 3.0).abs() <= 2.0 / n as f64);
        }
    }

    #[test]
    fn constants() {
        let (c0, c) = theorem_constant();
        assert!((c0 - 0.081_704).abs() < 1e-5);
        assert!((c - 0.005_896_6).abs() < 1e-6);
        assert!(c < 0.5);
    }
}
