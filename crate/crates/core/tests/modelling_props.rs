mod common;

use std::collections::BTreeSet;

use common::*;
use num_rational::Ratio;
use rand::Rng;
use stabset::constructions::dyadic_construction;
use stabset::gf2::sumset;
use stabset::modelling::{
    compress, minimal_model, partition_witness, petridis_check, petridis_minimizer, ruzsa_check,
    WitnessPartition,
};
use stabset::orderprop::verify_witness;
use stabset::{BitVector, Subspace2};

fn partition_of(s_plus: BTreeSet<BitVector>, t_plus: BTreeSet<BitVector>) -> WitnessPartition {
    WitnessPartition {
        s_prime: s_plus.iter().take(1).copied().collect(),
        t_prime: t_plus.iter().take(1).copied().collect(),
        s_plus,
        t_plus,
        l: 1,
        k: 4,
        a_size: 4,
        eta: Ratio::new(1, 4),
        big_k: Ratio::from_integer(1),
    }
}

#[test]
fn model_of_an_embedded_plane() {
    let plane = Subspace2::span(6, &[bv("101000"), bv("000011")]).unwrap();
    let elems = plane.element_set().unwrap();
    let m = minimal_model(&partition_of(elems.clone(), elems.clone()), 6).unwrap();
    assert_eq!(m.n, 2);
    assert_eq!(m.d_size, 4);
    let images: BTreeSet<_> = elems.iter().map(|x| m.phi.apply(x).unwrap()).collect();
    assert_eq!(images.len(), 4);
}

#[test]
fn model_of_the_trivial_group() {
    let zero: BTreeSet<_> = [BitVector::zero(5).unwrap()].into();
    let m = minimal_model(&partition_of(zero.clone(), zero), 5).unwrap();
    assert_eq!(m.n, 0);
    assert_eq!(m.d_size, 1);
}

#[test]
fn model_of_a_sparse_set_needs_quotients() {
    let s: BTreeSet<_> = [bv("000000"), bv("100000"), bv("010000")].into();
    let t: BTreeSet<_> = [bv("000000"), bv("001000")].into();
    let m = minimal_model(&partition_of(s.clone(), t.clone()), 6).unwrap();
    assert_eq!(1usize << m.n, m.d_size);
    let plus = sumset(&s, &t).unwrap();
    let images: BTreeSet<_> = plus.iter().map(|x| m.phi.apply(x).unwrap()).collect();
    assert_eq!(images.len(), plus.len());
    // The trace records strictly decreasing dimensions.
    for (step, next) in m.trace.iter().zip(m.trace.iter().skip(1)) {
        assert_eq!(next.n + 1, step.n);
    }
}

#[test]
fn ruzsa_on_a_subspace() {
    let v = Subspace2::span(4, &[bv("1000"), bv("0100")]).unwrap().element_set().unwrap();
    let zero: BTreeSet<_> = [BitVector::zero(4).unwrap()].into();
    let p = WitnessPartition {
        s_prime: zero.clone(),
        t_prime: zero,
        s_plus: v.clone(),
        t_plus: v.clone(),
        l: 1,
        k: 4,
        a_size: 4,
        eta: Ratio::new(1, 4),
        big_k: Ratio::from_integer(1),
    };
    let report = ruzsa_check(&p).unwrap();
    assert_eq!(report.plus_sum, 4);
    assert!(report.holds);
}

#[test]
fn dyadic_partitions_satisfy_ruzsa() {
    let d1 = dyadic_construction(1).unwrap();
    assert!(ruzsa_check(&partition_witness(&d1.set, &d1.witness, 1).unwrap()).unwrap().holds);
    let d2 = dyadic_construction(2).unwrap();
    for l in 1..=6 {
        let p = partition_witness(&d2.set, &d2.witness, l).unwrap();
        assert_eq!(p.s_prime.len(), l);
        assert_eq!(p.t_prime.len(), l + 1);
        assert_eq!(p.s_plus.len(), 24 - 2 * l + 1);
        assert!(ruzsa_check(&p).unwrap().holds, "l = {l}");
    }
    assert!(partition_witness(&d2.set, &d2.witness, 7).is_err());
}

#[test]
fn compress_dyadic_two_at_quarter() {
    let d2 = dyadic_construction(2).unwrap();
    let m = compress(&d2.set, &d2.witness, 6).unwrap();
    assert_eq!(m.witness_prime.k(), 13);
    assert!(verify_witness(&m.a_prime, &m.witness_prime).unwrap().is_valid());
    assert!(m.bound_ok);
    assert_eq!(1usize << m.n, m.d_size);
    assert_eq!(m.eta, Ratio::new(1, 4));
    assert_eq!(m.big_k, Ratio::from_integer(7));
}

#[test]
fn compress_survives_affine_disguise() {
    // Random invertible linear images plus translates of the dyadic
    // witnesses stay valid and compress at every admissible l.
    let mut r = rng(17);
    for l_param in 1..=2 {
        let inst = dyadic_construction(l_param).unwrap();
        let n = inst.set.dim();
        for _ in 0..3 {
            let lin = random_invertible(&mut r, n);
            let g = BitVector::from_bits(n, r.gen::<u128>() & ((1 << n) - 1)).unwrap();
            let (a, w) = affine_image(&inst.set, &inst.witness, &lin, g);
            for l in 1..=w.k() / 4 {
                let m = compress(&a, &w, l).unwrap();
                assert_eq!(m.witness_prime.k(), w.k() - 2 * l + 1);
                assert_eq!(1usize << m.n, m.d_size);
                assert!(m.bound_ok);
                assert!(ruzsa_check(&partition_witness(&a, &w, l).unwrap()).unwrap().holds);
            }
        }
    }
}

#[test]
fn petridis_brute_force_on_subspaces() {
    let v = Subspace2::span(3, &[bv("100"), bv("010"), bv("001")]).unwrap().element_set().unwrap();
    let t: BTreeSet<_> = [bv("000"), bv("011"), bv("101")].into();
    let (z, ratio) = petridis_minimizer(&v, &t).unwrap();
    assert_eq!(ratio, Ratio::new(8, 3));
    assert_eq!(z, t);
}

fn sample(r: &mut rand_chacha::ChaCha8Rng, max: usize) -> BTreeSet<BitVector> {
    let size = r.gen_range(1..=max);
    random_set(r, 5, size).elements().clone()
}

#[test]
fn petridis_inequality_on_samples() {
    let mut r = rng(29);
    for _ in 0..10 {
        let s = sample(&mut r, 5);
        let t = sample(&mut r, 6);
        let (z, ratio) = petridis_minimizer(&s, &t).unwrap();
        assert!(!z.is_empty() && z.is_subset(&t));
        let elems: Vec<_> = t.iter().copied().collect();
        for mask in 1u32..1 << elems.len() {
            let y: BTreeSet<_> = (0..elems.len()).filter(|b| mask >> b & 1 == 1).map(|b| elems[b]).collect();
            let ry = Ratio::new(sumset(&s, &y).unwrap().len() as u64, y.len() as u64);
            assert!(ratio <= ry);
        }
        for _ in 0..100 {
            let c = sample(&mut r, 4);
            let check = petridis_check(&s, &z, ratio, &c).unwrap();
            assert!(check.holds, "S = {s:?}, Z = {z:?}, C = {c:?}");
        }
    }
}
