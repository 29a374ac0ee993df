use std::fmt::Write as _;

use super::domain::CandidateDomains;
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::group::{FiniteSet, Witness};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Role {
    S,
    T,
}

/// One-hot block of variables selecting the value of `s_index` or `t_index`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RoleVars {
    pub role: Role,
    /// 1-based position in the sequence.
    pub index: usize,
    /// DIMACS number of the variable for `domain[0]`.
    pub first_var: usize,
    pub domain: Vec<BitVector>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfLayout {
    pub k: usize,
    pub n: usize,
    pub blocks: Vec<RoleVars>,
    pub num_vars: usize,
}

#[derive(Clone, Debug)]
pub struct CnfExport {
    pub text: String,
    pub layout: CnfLayout,
    pub num_clauses: usize,
}

impl CnfLayout {
    /// Decodes a model (the set of true DIMACS variables, any order) into
    /// the witness it selects.
    pub fn decode(&self, true_vars: &[i64]) -> Result<Witness<BitVector>> {
        let mut s = vec![None; self.k];
        let mut t = vec![None; self.k];
        for &v in true_vars.iter().filter(|&&v| v > 0) {
            let v = v as usize;
            let Some(b) = self
                .blocks
                .iter()
                .find(|b| v >= b.first_var && v < b.first_var + b.domain.len())
            else {
                continue;
            };
            let slot = match b.role {
                Role::S => &mut s[b.index - 1],
                Role::T => &mut t[b.index - 1],
            };
            if slot.replace(b.domain[v - b.first_var]).is_some() {
                return Err(Error::InvalidWitness(format!(
                    "model selects two values for one position (var {v})"
                )));
            }
        }
        let unwrap = |xs: Vec<Option<BitVector>>| {
            xs.into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::InvalidWitness("model leaves a position unset".into()))
        };
        Witness::new(crate::group::Ambient::F2(self.n), unwrap(s)?, unwrap(t)?)
    }

    /// Rebuilds the layout from the `c` header lines written by
    /// [`export_cnf`].
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut k = None;
        let mut n = None;
        let mut blocks = Vec::new();
        let mut num_vars = None;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let mut words = line.split_whitespace();
            match (words.next(), words.next()) {
                (Some("c"), Some("order-property")) => {
                    for w in words {
                        if let Some(v) = w.strip_prefix("k=") {
                            k = v.parse().ok();
                        } else if let Some(v) = w.strip_prefix("n=") {
                            n = v.parse().ok();
                        }
                    }
                }
                (Some("c"), Some("role")) => {
                    let name = words.next().ok_or_else(|| Error::parse(line_no, "missing role"))?;
                    let (role, idx) = match name.split_at(1) {
                        ("s", i) => (Role::S, i),
                        ("t", i) => (Role::T, i),
                        _ => return Err(Error::parse(line_no, format!("bad role {name}"))),
                    };
                    let index = idx
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad role {name}")))?;
                    let first_var = words
                        .next()
                        .and_then(|w| w.strip_prefix("first="))
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::parse(line_no, "missing first="))?;
                    let domain = words
                        .skip_while(|w| *w != "domain")
                        .skip(1)
                        .map(|w| w.parse::<BitVector>())
                        .collect::<Result<Vec<_>>>()
                        .map_err(|_| Error::parse(line_no, "bad domain element"))?;
                    blocks.push(RoleVars {
                        role,
                        index,
                        first_var,
                        domain,
                    });
                }
                (Some("p"), Some("cnf")) => {
                    num_vars = words.next().and_then(|v| v.parse().ok());
                }
                _ => {}
            }
        }
        match (k, n, num_vars) {
            (Some(k), Some(n), Some(num_vars)) => Ok(CnfLayout {
                k,
                n,
                blocks,
                num_vars,
            }),
            _ => Err(Error::parse(0, "missing order-property header or problem line")),
        }
    }
}

/// DIMACS CNF that is satisfiable iff `A` has the k-order property.
///
/// One-hot variables pick each `t_j` (with `t_1 = 0`, `t_j ∈ A + A`
/// otherwise) and each `s_i ∈ A + A + A`. Clauses: exactly one value per
/// position, a binary clause forbidding every pair of values that breaks
/// cell `(i, j)`, and pairwise distinctness within `s` and within `t`.
/// The variable count is `1 + (k-1)|A+A| + k|A+A+A|`.
pub fn export_cnf(a: &FiniteSet<BitVector>, k: usize) -> Result<CnfExport> {
    if k == 0 {
        return Err(Error::range("k must be at least 1"));
    }
    let n = a.dim();
    let doms = CandidateDomains::new(a)?;
    let zero = BitVector::zero(n)?;

    let mut blocks = Vec::with_capacity(2 * k);
    let mut next = 1;
    for j in 1..=k {
        let domain = if j == 1 {
            vec![zero]
        } else {
            doms.t_domain.clone()
        };
        blocks.push(RoleVars {
            role: Role::T,
            index: j,
            first_var: next,
            domain,
        });
        next += blocks.last().map_or(0, |b| b.domain.len());
    }
    for i in 1..=k {
        blocks.push(RoleVars {
            role: Role::S,
            index: i,
            first_var: next,
            domain: doms.s_domain.clone(),
        });
        next += doms.s_domain.len();
    }
    let num_vars = next - 1;
    let t_block = |j: usize| &blocks[j - 1];
    let s_block = |i: usize| &blocks[k + i - 1];

    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut empty_domain = false;
    for b in &blocks {
        if b.domain.is_empty() {
            empty_domain = true;
            continue;
        }
        let vars: Vec<i64> = (0..b.domain.len()).map(|x| (b.first_var + x) as i64).collect();
        clauses.push(vars.clone());
        for x in 0..vars.len() {
            for y in x + 1..vars.len() {
                clauses.push(vec![-vars[x], -vars[y]]);
            }
        }
    }
    for i in 1..=k {
        for j in 1..=k {
            let (sb, tb) = (s_block(i), t_block(j));
            for (x, sv) in sb.domain.iter().enumerate() {
                for (y, tv) in tb.domain.iter().enumerate() {
                    if a.contains(&(*sv + *tv)) != (i <= j) {
                        clauses.push(vec![
                            -((sb.first_var + x) as i64),
                            -((tb.first_var + y) as i64),
                        ]);
                    }
                }
            }
        }
    }
    let distinct = |b1: &RoleVars, b2: &RoleVars, out: &mut Vec<Vec<i64>>| {
        for (x, v) in b1.domain.iter().enumerate() {
            if let Ok(y) = b2.domain.binary_search(v) {
                out.push(vec![
                    -((b1.first_var + x) as i64),
                    -((b2.first_var + y) as i64),
                ]);
            }
        }
    };
    for p in 1..=k {
        for q in p + 1..=k {
            distinct(s_block(p), s_block(q), &mut clauses);
            distinct(t_block(p), t_block(q), &mut clauses);
        }
    }
    if empty_domain {
        clauses.push(Vec::new());
    }

    let mut text = String::new();
    writeln!(text, "c order-property k={k} n={n}").unwrap();
    writeln!(
        text,
        "c vars = 1 + (k-1)*|A+A| + k*|A+A+A| = 1 + {}*{} + {}*{} = {num_vars}",
        k - 1,
        doms.t_domain.len(),
        k,
        doms.s_domain.len()
    )
    .unwrap();
    writeln!(text, "c variable first+x selects domain[x] for the role").unwrap();
    for b in &blocks {
        let name = match b.role {
            Role::S => 's',
            Role::T => 't',
        };
        write!(text, "c role {name}{} first={} domain", b.index, b.first_var).unwrap();
        for v in &b.domain {
            write!(text, " {v}").unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "p cnf {num_vars} {}", clauses.len()).unwrap();
    for c in &clauses {
        for lit in c {
            write!(text, "{lit} ").unwrap();
        }
        text.push_str("0\n");
    }
    Ok(CnfExport {
        text,
        num_clauses: clauses.len(),
        layout: CnfLayout {
            k,
            n,
            blocks,
            num_vars,
        },
    })
}
