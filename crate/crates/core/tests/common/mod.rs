#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabset::{Ambient, BitVector, FiniteSet, LinearMap2, Witness};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bv(s: &str) -> BitVector {
    s.parse().unwrap()
}

pub fn f2_set(n: usize, xs: impl IntoIterator<Item = BitVector>) -> FiniteSet<BitVector> {
    FiniteSet::new(Ambient::F2(n), xs).unwrap()
}

pub fn random_set(rng: &mut ChaCha8Rng, n: usize, size: usize) -> FiniteSet<BitVector> {
    f2_set(
        n,
        sample(rng, 1 << n, size)
            .into_iter()
            .map(|b| BitVector::from_bits(n, b as u128).unwrap()),
    )
}

/// Set of density about `p` in F2^n.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize, p: f64) -> FiniteSet<BitVector> {
    f2_set(n, BitVector::all(n).unwrap().filter(|_| rng.gen_bool(p)))
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap2 {
    loop {
        let rows = (0..n)
            .map(|_| BitVector::from_bits(n, rng.gen::<u128>() & ((1u128 << n) - 1)).unwrap())
            .collect();
        let m = LinearMap2::new(n, rows).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

/// `(L(A) + g, L(s) + g, L(t))`, which preserves the order property.
pub fn affine_image(
    a: &FiniteSet<BitVector>,
    w: &Witness<BitVector>,
    l: &LinearMap2,
    g: BitVector,
) -> (FiniteSet<BitVector>, Witness<BitVector>) {
    let n = a.dim();
    let set = f2_set(n, a.iter().map(|x| l.apply(x).unwrap() + g));
    let wit = Witness::new(
        Ambient::F2(n),
        w.s().iter().map(|x| l.apply(x).unwrap() + g).collect(),
        w.t().iter().map(|x| l.apply(x).unwrap()).collect(),
    )
    .unwrap();
    (set, wit)
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Plain DPLL with unit propagation over DIMACS text. Returns a model as
/// the list of true variables.
pub fn dpll(dimacs: &str) -> Option<Vec<i64>> {
    let mut num_vars = 0usize;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut cur = Vec::new();
    for line in dimacs.lines() {
        let line = line.trim();
        if line.starts_with('c') || line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            num_vars = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        for lit in line.split_whitespace() {
            let lit: i64 = lit.parse().unwrap();
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                cur.push(lit);
            }
        }
    }
    let mut assign = vec![0i8; num_vars + 1];
    if solve(&clauses, &mut assign) {
        Some((1..=num_vars as i64).filter(|&v| assign[v as usize] == 1).collect())
    } else {
        None
    }
}

fn value(assign: &[i8], lit: i64) -> i8 {
    let v = assign[lit.unsigned_abs() as usize];
    if lit > 0 {
        v
    } else {
        -v
    }
}

fn solve(clauses: &[Vec<i64>], assign: &mut Vec<i8>) -> bool {
    let saved = assign.clone();
    loop {
        let mut changed = false;
        for c in clauses {
            if c.iter().any(|&l| value(assign, l) == 1) {
                continue;
            }
            let open: Vec<i64> = c.iter().copied().filter(|&l| value(assign, l) == 0).collect();
            match open.len() {
                0 => {
                    *assign = saved;
                    return false;
                }
                1 => {
                    assign[open[0].unsigned_abs() as usize] = if open[0] > 0 { 1 } else { -1 };
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let Some(var) = (1..assign.len()).find(|&v| assign[v] == 0) else {
        return true;
    };
    for val in [1, -1] {
        let before = assign.clone();
        assign[var] = val;
        if solve(clauses, assign) {
            return true;
        }
        *assign = before;
    }
    *assign = saved;
    false
}
