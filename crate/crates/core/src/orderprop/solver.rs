use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use super::domain::CandidateDomains;
use super::verify_witness;
use crate::error::{Error, Result};
use crate::gf2::{BitRow, BitVector};
use crate::group::{FiniteSet, Witness};

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    /// A known witness used as the initial lower bound.
    pub incumbent: Option<Witness<BitVector>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Exact,
    /// The time limit was hit; `kmax` is only a lower bound.
    LowerBoundOnly,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Exact => "exact",
            SolveStatus::LowerBoundOnly => "lower-bound-only",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub kmax: usize,
    pub witness: Witness<BitVector>,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub status: SolveStatus,
}

struct Search {
    a_index: HashMap<BitVector, usize>,
    a_len: usize,
    doms: CandidateDomains,
    /// For each t candidate: the s candidates with `s + t ∈ A`.
    s_partners: Vec<BitRow>,
    /// For each s candidate: the t candidates with `s + t ∈ A`.
    t_partners: Vec<BitRow>,
    zero_t: usize,
    s_stack: Vec<usize>,
    t_stack: Vec<usize>,
    best_k: usize,
    best: Option<(Vec<usize>, Vec<usize>)>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl Search {
    fn upper_bound(&self, tcand: &BitRow, used: &BitRow) -> usize {
        // Future t's are distinct members of tcand. Future diagonal values are
        // distinct members of A that avoid every upper-triangular value of the
        // current prefix (staircase rigidity), so they avoid `used`.
        self.s_stack.len() + tcand.count_ones().min(self.a_len - used.count_ones())
    }

    fn dfs(&mut self, tcand: &BitRow, forbidden: &BitRow, used: &BitRow) {
        let r = self.s_stack.len();
        if r > self.best_k {
            self.best_k = r;
            self.best = Some((self.s_stack.clone(), self.t_stack.clone()));
        }
        if self.upper_bound(tcand, used) <= self.best_k {
            return;
        }
        let t_choices: Vec<usize> = if r == 0 {
            vec![self.zero_t]
        } else {
            tcand.ones().collect()
        };
        for t in t_choices {
            let mut s_choices = self.s_partners[t].clone();
            s_choices.and_not_assign(forbidden);
            if s_choices.is_zero() {
                continue;
            }
            let t_vec = self.doms.t_domain[t];
            let mut used_col = used.clone();
            for &i in &self.s_stack {
                used_col.set(self.a_index[&(self.doms.s_domain[i] + t_vec)]);
            }
            let mut next_forbidden = forbidden.clone();
            next_forbidden.or_assign(&self.s_partners[t]);
            let s_choices: Vec<usize> = s_choices.ones().collect();
            for s in s_choices {
                self.nodes += 1;
                if self.nodes.is_multiple_of(4096) {
                    if let Some(d) = self.deadline {
                        if Instant::now() >= d {
                            self.timed_out = true;
                        }
                    }
                }
                if self.timed_out {
                    return;
                }
                let mut next_used = used_col.clone();
                next_used.set(self.a_index[&(self.doms.s_domain[s] + t_vec)]);
                let mut next_tcand = tcand.clone();
                next_tcand.and_assign(&self.t_partners[s]);
                next_tcand.clear(t);
                self.s_stack.push(s);
                self.t_stack.push(t);
                self.dfs(&next_tcand, &next_forbidden, &next_used);
                self.s_stack.pop();
                self.t_stack.pop();
                if self.timed_out || self.upper_bound(tcand, used) <= self.best_k {
                    return;
                }
            }
        }
    }
}

/// Exact maximum `k` such that `A ⊆ F2^n` has the k-order property.
///
/// Depth-first branch and bound over the confined domains of
/// [`CandidateDomains`]: at depth `r` it picks `t_r ∈ ⋂_{i<r}(s_i + A)`
/// (with `t_1 = 0`) and then `s_r ∈ (t_r + A) \ ⋃_{j<r}(t_j + A)`, so every
/// prefix is itself a witness. Distinctness of the entries follows from
/// these domains. Candidates are tried in lexicographic order and the
/// reported witness is the first maximal one found; `kmax <= |A|` always.
pub fn max_order_exact(a: &FiniteSet<BitVector>, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let n = a.dim();
    let ambient = a.ambient();
    let mut incumbent = Witness::empty(ambient);
    if let Some(w) = &opts.incumbent {
        let verdict = verify_witness(a, w)?;
        if let Some(v) = verdict.violation {
            return Err(Error::InvalidWitness(format!("incumbent: {v}")));
        }
        incumbent = w.clone();
    }
    if a.is_empty() {
        return Ok(SolveReport {
            kmax: 0,
            witness: incumbent,
            nodes_explored: 0,
            elapsed: start.elapsed(),
            status: SolveStatus::Exact,
        });
    }

    let doms = CandidateDomains::new(a)?;
    let a_index: HashMap<BitVector, usize> =
        a.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let (nt, ns) = (doms.t_domain.len(), doms.s_domain.len());
    let mut s_partners = vec![BitRow::zeros(ns); nt];
    let mut t_partners = vec![BitRow::zeros(nt); ns];
    for (ti, t) in doms.t_domain.iter().enumerate() {
        for (si, s) in doms.s_domain.iter().enumerate() {
            if a_index.contains_key(&(*s + *t)) {
                s_partners[ti].set(si);
                t_partners[si].set(ti);
            }
        }
    }
    let zero = BitVector::zero(n)?;
    let zero_t = doms
        .t_domain
        .binary_search(&zero)
        .map_err(|_| Error::Invariant("0 ∉ A + A for nonempty A".into()))?;

    let mut search = Search {
        a_len: a.len(),
        a_index,
        doms,
        s_partners,
        t_partners,
        zero_t,
        s_stack: Vec::new(),
        t_stack: Vec::new(),
        best_k: incumbent.k(),
        best: None,
        nodes: 0,
        deadline: opts.time_limit.map(|d| start + d),
        timed_out: false,
    };
    let mut all_t = BitRow::zeros(nt);
    for i in 0..nt {
        all_t.set(i);
    }
    search.dfs(&all_t, &BitRow::zeros(ns), &BitRow::zeros(a.len()));

    let witness = match &search.best {
        Some((s, t)) => Witness::new(
            ambient,
            s.iter().map(|&i| search.doms.s_domain[i]).collect(),
            t.iter().map(|&j| search.doms.t_domain[j]).collect(),
        )?,
        None => incumbent,
    };
    Ok(SolveReport {
        kmax: search.best_k,
        witness,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
        status: if search.timed_out {
            SolveStatus::LowerBoundOnly
        } else {
            SolveStatus::Exact
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Ambient;

    fn f2_set(n: usize, xs: &[&str]) -> FiniteSet<BitVector> {
        FiniteSet::new(Ambient::F2(n), xs.iter().map(|x| x.parse().unwrap())).unwrap()
    }

    fn solve(a: &FiniteSet<BitVector>) -> SolveReport {
        let r = max_order_exact(a, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Exact);
        assert!(verify_witness(a, &r.witness).unwrap().is_valid());
        assert_eq!(r.witness.k(), r.kmax);
        r
    }

    #[test]
    fn empty_set() {
        assert_eq!(solve(&f2_set(2, &[])).kmax, 0);
    }

    #[test]
    fn whole_group() {
        assert_eq!(solve(&f2_set(2, &["00", "01", "10", "11"])).kmax, 1);
    }

    #[test]
    fn three_of_four() {
        let r = solve(&f2_set(2, &["00", "01", "11"]));
        assert_eq!(r.kmax, 2);
    }

    #[test]
    fn incumbent_is_checked() {
        let a = f2_set(2, &["00"]);
        let bad = Witness::new(
            Ambient::F2(2),
            vec!["00".parse().unwrap(), "01".parse().unwrap()],
            vec!["00".parse().unwrap(), "01".parse().unwrap()],
        )
        .unwrap();
        let opts = SolveOptions {
            incumbent: Some(bad),
            ..Default::default()
        };
        assert!(matches!(max_order_exact(&a, &opts), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn zero_time_limit_reports_lower_bound() {
        // Large enough that the first deadline check happens mid-search.
        let xs: Vec<BitVector> = (0u128..64)
            .filter(|x| x.count_ones() % 3 != 1)
            .map(|x| BitVector::from_bits(6, x).unwrap())
            .collect();
        let a = FiniteSet::new(Ambient::F2(6), xs).unwrap();
        let opts = SolveOptions {
            time_limit: Some(Duration::ZERO),
            ..Default::default()
        };
        let r = max_order_exact(&a, &opts).unwrap();
        if r.status == SolveStatus::LowerBoundOnly {
            assert!(verify_witness(&a, &r.witness).unwrap().is_valid());
        }
        assert!(r.kmax <= a.len());
    }
}
