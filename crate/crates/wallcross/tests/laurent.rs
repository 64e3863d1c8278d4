//! Laurent arithmetic against a naive dense convolution oracle, plus the
//! weight-grading invariants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use wallcross::{rat, ChartRing, LaurentElement, Rat};

fn ring() -> ChartRing {
    ChartRing::new("U1", &[("x", (1, 0)), ("u", (0, 1))])
}

fn random_elem(rng: &mut ChaCha8Rng, ring: &ChartRing) -> LaurentElement {
    let mut e = LaurentElement::zero(ring);
    for _ in 0..rng.gen_range(1..5) {
        let exps = vec![rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
        let m = LaurentElement::monomial(ring, &exps, rat(rng.gen_range(-4..=4)));
        e = e.add(&m);
    }
    e
}

/// independent oracle: dense convolution over a map.
fn convolve(a: &LaurentElement, b: &LaurentElement) -> BTreeMap<Vec<i64>, Rat> {
    let mut out: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(p, q)| p + q).collect();
            *out.entry(e).or_insert_with(|| rat(0)) += ca.clone() * cb;
        }
    }
    out.retain(|_, c| c != &rat(0));
    out
}

#[test]
fn x_times_x_inverse_is_one() {
    let r = ring();
    let x = LaurentElement::var(&r, "x");
    let xinv = LaurentElement::monomial(&r, &[-1, 0], rat(1));
    assert_eq!(x.mul(&xinv), LaurentElement::one(&r));
}

#[test]
fn transition_function_product() {
    // y^{n1} * y^{-1} = y^{n1-1} in the chart with coordinates (y, v)
    let r2 = ChartRing::new("U2", &[("y", (-1, 0)), ("v", (3, 1))]);
    let n1 = 3;
    let a = LaurentElement::monomial(&r2, &[n1, 0], rat(1));
    let b = LaurentElement::monomial(&r2, &[-1, 0], rat(1));
    assert_eq!(a.mul(&b), LaurentElement::monomial(&r2, &[n1 - 1, 0], rat(1)));
}

#[test]
fn mul_matches_convolution_oracle() {
    let r = ring();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let a = random_elem(&mut rng, &r);
        let b = random_elem(&mut rng, &r);
        assert_eq!(a.mul(&b).terms, convolve(&a, &b));
    }
}

#[test]
fn mul_associative_commutative() {
    let r = ring();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..30 {
        let a = random_elem(&mut rng, &r);
        let b = random_elem(&mut rng, &r);
        let c = random_elem(&mut rng, &r);
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

#[test]
fn weight_is_monoid_homomorphism() {
    let r = ring();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let ea = vec![rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
        let eb = vec![rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
        let a = LaurentElement::monomial(&r, &ea, rat(2));
        let b = LaurentElement::monomial(&r, &eb, rat(3));
        let wa = a.weight(&r).unwrap();
        let wb = b.weight(&r).unwrap();
        let wab = a.mul(&b).weight(&r).unwrap();
        assert_eq!(wab, (wa.0 + wb.0, wa.1 + wb.1));
    }
}

#[test]
fn weight_inversion_roundtrip() {
    let r = ring();
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            let w = r.monomial_weight(&[a, b]);
            assert_eq!(r.exps_of_weight(w), Some(vec![a, b]));
        }
    }
}

#[test]
fn substitution_roundtrip() {
    // single(n): chart 2 coords (y,v) with y = x^{-1}, v = u x^n; inverse
    // substitution x = y^{-1}, u = v y^n. round trip is the identity.
    let n = 3i64;
    let r1 = ring();
    let r2 = ChartRing::new("U2", &[("y", (-1, 0)), ("v", (n, 1))]);
    let to2 = vec![vec![-1, 0], vec![n, 1]]; // x -> y^{-1}, u -> v*y^n
    let to1 = vec![vec![-1, 0], vec![n, 1]]; // y -> x^{-1}, v -> u*x^n
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let a = random_elem(&mut rng, &r1);
        let round = a.substitute(&r2, &to2).substitute(&r1, &to1);
        assert_eq!(round, a);
    }
}
