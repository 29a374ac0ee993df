use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Duration;

use anyhow::{bail, ensure, Context, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabset::constructions::dyadic_construction;
use stabset::orderprop::{max_order_exact, SolveOptions, SolveStatus};
use stabset::{Ambient, BitVector, FiniteSet, Subspace2, Witness};

pub const CSV_HEADER: &str = "instance-id,N,n,kmax,status,runtime";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `N` distinct uniform elements of F2^n.
    Random,
    /// A uniform coset of a random subspace of the given dimension.
    Subspace,
    /// The dyadic construction with parameter `l`.
    Dyadic,
    /// `{0, 1, ..., N-1}` written in binary, as vectors in F2^{bits}.
    ApEncoded,
}

impl FromStr for Generator {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => Generator::Random,
            "subspace" => Generator::Subspace,
            "dyadic" => Generator::Dyadic,
            "ap-encoded" => Generator::ApEncoded,
            _ => bail!("unknown generator {s:?} (random, subspace, dyadic, ap-encoded)"),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub generator: Generator,
    pub range: RangeInclusive<usize>,
    pub n: usize,
    /// Instances per parameter value for the seeded generators.
    pub reps: usize,
    pub seed: u64,
    pub time_limit: Duration,
}

#[derive(Clone, Debug)]
pub struct ExperimentRow {
    pub id: String,
    pub size: usize,
    pub n: usize,
    pub kmax: usize,
    pub status: SolveStatus,
    pub runtime: Duration,
}

impl ExperimentRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6}",
            self.id,
            self.size,
            self.n,
            self.kmax,
            self.status,
            self.runtime.as_secs_f64()
        )
    }
}

/// `a..b` (inclusive) or a single value; `a > b` gives an empty range.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || format!("bad range {text:?}, expected a..b or a single value");
    match text.split_once("..") {
        Some((a, b)) => Ok(a.trim().parse().with_context(bad)?..=b.trim().parse().with_context(bad)?),
        None => {
            let v = text.trim().parse().with_context(bad)?;
            Ok(v..=v)
        }
    }
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Result<FiniteSet<BitVector>> {
    ensure!(n <= 20, "random sets limited to n <= 20");
    ensure!(size <= 1 << n, "cannot pick {size} distinct elements of F2^{n}");
    let elems = sample(rng, 1 << n, size)
        .into_iter()
        .map(|b| BitVector::from_bits(n, b as u128))
        .collect::<stabset::Result<Vec<_>>>()?;
    Ok(FiniteSet::new(Ambient::F2(n), elems)?)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Result<BitVector> {
    let bits: u128 = rng.gen();
    let mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    Ok(BitVector::from_bits(n, bits & mask)?)
}

fn random_coset(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Result<FiniteSet<BitVector>> {
    ensure!(dim <= n && dim <= 20, "subspace dimension {dim} must be at most min(n, 20)");
    let mut gens = Vec::new();
    while Subspace2::span(n, &gens)?.dim() < dim {
        gens.push(random_vector(rng, n)?);
    }
    let shift = random_vector(rng, n)?;
    let space = Subspace2::span(n, &gens)?;
    Ok(FiniteSet::new(
        Ambient::F2(n),
        space.elements()?.into_iter().map(|x| x + shift),
    )?)
}

fn ap_encoded(size: usize) -> Result<FiniteSet<BitVector>> {
    let n = (usize::BITS - size.saturating_sub(1).leading_zeros()).max(1) as usize;
    Ok(FiniteSet::new(
        Ambient::F2(n),
        (0..size)
            .map(|v| BitVector::from_bits(n, v as u128))
            .collect::<stabset::Result<Vec<_>>>()?,
    )?)
}

fn solve(
    id: String,
    a: &FiniteSet<BitVector>,
    incumbent: Option<Witness<BitVector>>,
    time_limit: Duration,
) -> Result<ExperimentRow> {
    let report = max_order_exact(
        a,
        &SolveOptions {
            time_limit: Some(time_limit),
            incumbent,
        },
    )?;
    Ok(ExperimentRow {
        id,
        size: a.len(),
        n: a.dim(),
        kmax: report.kmax,
        status: report.status,
        runtime: report.elapsed,
    })
}

/// Runs the sweep in a fixed order; output other than `runtime` depends
/// only on the sweep parameters.
pub fn run_experiment(sweep: &Sweep) -> Result<Vec<ExperimentRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
    let mut rows = Vec::new();
    let n = sweep.n;
    for param in sweep.range.clone() {
        match sweep.generator {
            Generator::Random => {
                for rep in 0..sweep.reps {
                    let a = random_set(&mut rng, n, param)?;
                    let id = format!("random-n{n}-N{param}-r{rep}");
                    rows.push(solve(id, &a, None, sweep.time_limit)?);
                }
            }
            Generator::Subspace => {
                for rep in 0..sweep.reps {
                    let a = random_coset(&mut rng, n, param)?;
                    let id = format!("subspace-n{n}-d{param}-r{rep}");
                    rows.push(solve(id, &a, None, sweep.time_limit)?);
                }
            }
            Generator::Dyadic => {
                let inst = dyadic_construction(param)?;
                let id = format!("dyadic-l{param}");
                rows.push(solve(id, &inst.set, Some(inst.witness), sweep.time_limit)?);
            }
            Generator::ApEncoded => {
                let a = ap_encoded(param)?;
                let id = format!("ap-encoded-N{param}");
                rows.push(solve(id, &a, None, sweep.time_limit)?);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..8").unwrap(), 4..=8);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("5..4").unwrap().is_empty());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_set(&mut rng, 4, 6).unwrap().len(), 6);
        assert!(random_set(&mut rng, 2, 5).is_err());
        assert_eq!(random_coset(&mut rng, 5, 3).unwrap().len(), 8);
        let ap = ap_encoded(5);
        assert_eq!(ap.unwrap().dim(), 3);
        assert!("bogus".parse::<Generator>().is_err());
    }
}
