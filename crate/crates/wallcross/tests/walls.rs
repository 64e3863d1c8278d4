//! wall-and-chamber layer: chern-character oracles, twisted characters,
//! exact central charges, wall equations, chamber enumeration and labels,
//! and the structured component reports against golden files.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallcross::mchull::{hankel_rank_ideal, Poly};
use wallcross::walls::*;
use wallcross::{rat, ratq, Rat};

fn rrat(rng: &mut ChaCha8Rng) -> Rat {
    ratq(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4))
}

fn random_class(rng: &mut ChaCha8Rng, r: usize) -> NumClass {
    NumClass {
        ch0: rng.gen_range(-3i64..=3),
        ch1: (0..=r).map(|_| rrat(rng)).collect(),
        ch2: rrat(rng),
    }
}

fn linear_coeffs(p: &Poly, r: usize) -> Vec<Rat> {
    (0..r)
        .map(|i| {
            let mut m = vec![0u32; r];
            m[i] = 1;
            p.terms.get(&m).cloned().unwrap_or_else(Rat::zero)
        })
        .collect()
}

fn same_wall(p: &Poly, coeffs: &[i64]) -> bool {
    let r = coeffs.len();
    let got = linear_coeffs(p, r);
    let want: Vec<Rat> = coeffs.iter().map(|&c| rat(c)).collect();
    got == want || got.iter().zip(&want).all(|(a, b)| a == &(-b))
}

// ---- intersection data ----------------------------------------------------

#[test]
fn gram_validation_rejects_bad_input() {
    // not symmetric
    assert!(IntersectionDatum::new(
        vec![vec![-2, 1], vec![0, -2]],
        vec![rat(0), rat(0)],
        Rat::zero(),
        rat(2)
    )
    .is_err());
    // not negative definite: positive diagonal
    assert!(IntersectionDatum::new(vec![vec![1]], vec![rat(0)], Rat::zero(), rat(2)).is_err());
    // not negative definite: determinant 4 - 9 < 0
    assert!(IntersectionDatum::new(
        vec![vec![-2, 3], vec![3, -2]],
        vec![rat(0), rat(0)],
        Rat::zero(),
        rat(2)
    )
    .is_err());
    // polarization square must be positive
    assert!(IntersectionDatum::new(vec![vec![-3]], vec![rat(0)], Rat::zero(), rat(0)).is_err());
    assert!(IntersectionDatum::chain(3, 3).is_ok());
    assert!(IntersectionDatum::disjoint(&[3, 4, 5]).is_ok());
}

#[test]
fn beta_vector_reproduces_the_stored_pairings() {
    for datum in [
        IntersectionDatum::single(4).unwrap(),
        IntersectionDatum::disjoint(&[3, 4]).unwrap(),
        IntersectionDatum::chain(3, 4).unwrap(),
    ] {
        let b = datum.beta_vector();
        for i in 0..datum.r {
            let mut pairing = Rat::zero();
            for j in 0..datum.r {
                pairing += rat(datum.gram[i][j]) * &b[j];
            }
            assert_eq!(pairing, datum.beta_curve[i]);
        }
        // beta^2 < 0 when beta lies in the span of the contracted curves
        assert!(datum.beta_sq().is_negative());
    }
}

// ---- twisted characters ---------------------------------------------------

#[test]
fn ch_beta_fixes_the_point_class_and_specializes_for_torsion_classes() {
    let datum = IntersectionDatum::chain(3, 3).unwrap();
    let pt = NumClass::point(2);
    assert_eq!(ch_beta(&pt, &datum), pt);
    // for ch0 = 0 the twist only shifts ch2 by -beta.ch1
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let mut v = random_class(&mut rng, 2);
        v.ch0 = 0;
        let t = ch_beta(&v, &datum);
        assert_eq!(t.ch1, v.ch1);
        assert_eq!(t.ch2, &v.ch2 - datum.pair_beta(&v.ch1));
    }
}

#[test]
fn ch_beta_composed_with_its_inverse_is_the_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for datum in [
        IntersectionDatum::disjoint(&[3, 4]).unwrap(),
        IntersectionDatum::chain(3, 4).unwrap(),
    ] {
        for _ in 0..50 {
            let v = random_class(&mut rng, datum.r);
            assert_eq!(ch_beta_inverse(&ch_beta(&v, &datum), &datum), v);
            assert_eq!(ch_beta(&ch_beta_inverse(&v, &datum), &datum), v);
        }
    }
}

// ---- curve-object characters ----------------------------------------------

/// oracle: ch(O_S(D)) = (1, D, D^2/2), and the structure sequence
/// 0 -> O_S(-D) -> O_S -> O_D -> 0 with point twists.
fn oracle_on_divisor(d: &[i64], twist: i64, datum: &IntersectionDatum) -> NumClass {
    let r = datum.r;
    let mut ch1 = vec![Rat::zero(); r + 1];
    let mut dsq = Rat::zero();
    for i in 0..r {
        ch1[i] = rat(d[i]);
        for j in 0..r {
            dsq += rat(d[i] * d[j] * datum.gram[i][j]);
        }
    }
    // ch(O_S) - ch(O_S(-D)) = (0, D, -D^2/2), then each twist adds a point
    NumClass { ch0: 0, ch1, ch2: -dsq / rat(2) + rat(twist) }
}

#[test]
fn curve_object_characters_match_the_structure_sequence_oracle() {
    let single = IntersectionDatum::single(3).unwrap();
    for k in -3..=3 {
        let spec = ObjectSpec::OnCurve { index: 0, twist: k, shifted: false };
        assert_eq!(ch_of_curve_object(&spec, &single), oracle_on_divisor(&[1], k, &single));
        let shifted = ObjectSpec::OnCurve { index: 0, twist: k, shifted: true };
        assert_eq!(
            ch_of_curve_object(&shifted, &single),
            oracle_on_divisor(&[1], k, &single).neg()
        );
    }
    // anchor values for n = 3: ch(O_C) = (0, C, 3/2), and ch(O_C(-1)[1]) =
    // (0, -C, 1 - 3/2) so that the pair sums to the point class
    let oc = ch_of_curve_object(&ObjectSpec::OnCurve { index: 0, twist: 0, shifted: false }, &single);
    assert_eq!(oc.ch2, ratq(3, 2));
    let shifted =
        ch_of_curve_object(&ObjectSpec::OnCurve { index: 0, twist: -1, shifted: true }, &single);
    assert_eq!(shifted.ch1[0], rat(-1));
    assert_eq!(shifted.ch2, ratq(-1, 2));
    assert_eq!(oc.add(&shifted), NumClass::point(1));
    // chain bundles against the divisor C1 + C2
    let chain = IntersectionDatum::chain(3, 4).unwrap();
    for (t1, t2) in [(0i64, 0i64), (1, -2), (-1, 3)] {
        let spec = ObjectSpec::OnChain { t1, t2, shifted: false };
        assert_eq!(
            ch_of_curve_object(&spec, &chain),
            oracle_on_divisor(&[1, 1], t1 + t2, &chain)
        );
    }
}

#[test]
fn destabilizer_and_cofactors_sum_to_the_point_class() {
    for datum in [
        IntersectionDatum::single(3).unwrap(),
        IntersectionDatum::disjoint(&[3, 4]).unwrap(),
        IntersectionDatum::chain(3, 3).unwrap(),
        IntersectionDatum::chain(3, 4).unwrap(),
    ] {
        let arr = wall_arrangement(&datum).unwrap();
        for w in &arr.walls {
            let mut total = ch_of_curve_object(&w.destabilizer, &datum);
            for c in &w.cofactors {
                total = total.add(&ch_of_curve_object(c, &datum));
            }
            assert_eq!(total, NumClass::point(datum.r), "wall {}", w.name);
        }
    }
}

// ---- twist offsets --------------------------------------------------------

#[test]
fn default_twist_offsets_are_zero() {
    assert_eq!(IntersectionDatum::single(3).unwrap().twist_offsets().unwrap(), vec![0]);
    assert_eq!(IntersectionDatum::single(1).unwrap().twist_offsets().unwrap(), vec![0]);
    assert_eq!(
        IntersectionDatum::disjoint(&[3, 4, 5]).unwrap().twist_offsets().unwrap(),
        vec![0, 0, 0]
    );
    assert_eq!(IntersectionDatum::chain(3, 4).unwrap().twist_offsets().unwrap(), vec![0, 0]);
}

#[test]
fn twist_offsets_bracket_nondefault_pairings() {
    // beta.C = 1/3 gives bracket quantity 1/3 + 3/2 = 11/6, so k = 2
    let datum =
        IntersectionDatum::new(vec![vec![-3]], vec![ratq(1, 3)], Rat::zero(), rat(2)).unwrap();
    assert_eq!(datum.twist_offsets().unwrap(), vec![2]);
}

#[test]
fn twist_offsets_error_on_a_boundary_or_a_chain_violation() {
    // beta.C = -3/2 puts the bracket quantity at the integer 0
    let datum =
        IntersectionDatum::new(vec![vec![-3]], vec![ratq(-3, 2)], Rat::zero(), rat(2)).unwrap();
    assert!(datum.twist_offsets().is_err());
    // each bracket quantity -1/4 is fine alone but the sum -1/2 is not < -1
    let datum = IntersectionDatum::new(
        vec![vec![-3, 1], vec![1, -3]],
        vec![ratq(-7, 4), ratq(-7, 4)],
        Rat::zero(),
        rat(2),
    )
    .unwrap();
    assert!(datum.twist_offsets().is_err());
}

// ---- central charges ------------------------------------------------------

#[test]
fn central_charge_of_the_point_class_is_minus_one() {
    for datum in [
        IntersectionDatum::single(5).unwrap(),
        IntersectionDatum::chain(3, 3).unwrap(),
    ] {
        let (re, im) = central_charge(&NumClass::point(datum.r), &datum);
        assert_eq!(re, Poly::monomial(datum.r, &vec![0; datum.r], rat(-1)));
        assert!(im.is_zero());
    }
}

#[test]
fn imaginary_parts_of_the_destabilizers_are_the_expected_forms() {
    // O_C on single(n): Im Z = omega.C = -n eps
    let single = IntersectionDatum::single(3).unwrap();
    let oc = ch_of_curve_object(&ObjectSpec::OnCurve { index: 0, twist: 0, shifted: false }, &single);
    let (_, im) = central_charge(&oc, &single);
    assert_eq!(im, Poly::var(1, 0).scale(&rat(-3)));
    // O_{C1}(k1-1)[1] on the chain: Im Z = n1 eps1 - eps2
    let chain = IntersectionDatum::chain(3, 4).unwrap();
    let d1 = ch_of_curve_object(&ObjectSpec::OnCurve { index: 0, twist: -1, shifted: true }, &chain);
    let (_, im) = central_charge(&d1, &chain);
    let expected = Poly::var(2, 0).scale(&rat(3)).add(&Poly::var(2, 1).scale(&rat(-1)));
    assert_eq!(im, expected);
}

#[test]
fn central_charge_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for datum in [
        IntersectionDatum::disjoint(&[3, 4]).unwrap(),
        IntersectionDatum::chain(3, 4).unwrap(),
    ] {
        for _ in 0..20 {
            let a = random_class(&mut rng, datum.r);
            let b = random_class(&mut rng, datum.r);
            let (ra, ia) = central_charge(&a, &datum);
            let (rb, ib) = central_charge(&b, &datum);
            let (rs, is) = central_charge(&a.add(&b), &datum);
            assert_eq!(rs, ra.add(&rb));
            assert_eq!(is, ia.add(&ib));
        }
    }
}

// ---- wall equations -------------------------------------------------------

#[test]
fn wall_equations_match_the_known_forms() {
    // single(n): the only wall is eps = 0
    for n in [1i64, 3, 5] {
        let datum = IntersectionDatum::single(n).unwrap();
        let arr = wall_arrangement(&datum).unwrap();
        assert_eq!(arr.walls.len(), 1);
        assert!(same_wall(&arr.walls[0].form, &[1]));
        assert_eq!(render_form(&arr.walls[0].form), "e1");
    }
    // chain(n1,n2): -n1 eps1 + eps2, eps1 - n2 eps2, (n1-1) eps1 + (n2-1) eps2
    for (n1, n2) in [(3i64, 3i64), (3, 4), (5, 3)] {
        let datum = IntersectionDatum::chain(n1, n2).unwrap();
        let arr = wall_arrangement(&datum).unwrap();
        assert_eq!(arr.walls.len(), 3);
        assert!(same_wall(&arr.walls[0].form, &[-n1, 1]), "W1 for chain({n1},{n2})");
        assert!(same_wall(&arr.walls[1].form, &[1, -n2]), "W2 for chain({n1},{n2})");
        let g = num_integer::gcd(n1 - 1, n2 - 1);
        assert!(
            same_wall(&arr.walls[2].form, &[(n1 - 1) / g, (n2 - 1) / g]),
            "W12 for chain({n1},{n2})"
        );
    }
    let datum = IntersectionDatum::chain(3, 3).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    assert_eq!(render_form(&arr.walls[0].form), "3*e1 - e2");
    assert_eq!(render_form(&arr.walls[1].form), "e1 - 3*e2");
    assert_eq!(render_form(&arr.walls[2].form), "e1 + e2");
}

#[test]
fn wall_locus_of_proportional_charges_is_degenerate() {
    let datum = IntersectionDatum::single(3).unwrap();
    let pt = NumClass::point(1);
    assert!(wall_locus(&pt, &pt, &datum).is_err());
}

#[test]
fn wall_locus_derives_from_the_charge_formula() {
    // against an independent expansion: with v = [pt], Z(v) = (-1, 0), so the
    // wall polynomial must be exactly Im Z(u)
    let datum = IntersectionDatum::chain(3, 4).unwrap();
    let u = ch_of_curve_object(&ObjectSpec::OnChain { t1: 0, t2: 0, shifted: false }, &datum);
    let (_, im) = central_charge(&u, &datum);
    let wall = wall_locus(&u, &NumClass::point(2), &datum).unwrap();
    // primitive rescaling of im
    let c = &im.terms[&vec![1u32, 0]] / &wall.terms[&vec![1u32, 0]];
    assert_eq!(wall.scale(&c), im);
}

// ---- chambers -------------------------------------------------------------

#[test]
fn disjoint_chamber_counts_and_labels() {
    for ns in [vec![3i64], vec![3, 4], vec![3, 4, 5], vec![3, 3, 4, 5]] {
        let datum = IntersectionDatum::disjoint(&ns).unwrap();
        let arr = wall_arrangement(&datum).unwrap();
        let r = ns.len();
        assert_eq!(arr.chambers.len(), 1 << r);
        assert_eq!(arr.transversality, Transversality::Transversal);
        let geo = &arr.chambers[arr.geometric];
        assert_eq!(geo.label, ChamberLabel::Subset(vec![]));
        // the label is the set of walls where the sign differs from geometric
        for c in &arr.chambers {
            let diff: Vec<usize> =
                (0..r).filter(|&i| c.signs[i] != geo.signs[i]).collect();
            assert_eq!(c.label, ChamberLabel::Subset(diff));
        }
        // the geometric representative is inside the ample cone
        for f in ample_forms(&datum) {
            let mut val = Rat::zero();
            for (m, co) in &f.terms {
                let i = m.iter().position(|&e| e == 1).unwrap();
                val += co * &geo.representative[i];
            }
            assert!(val.is_positive());
        }
    }
}

#[test]
fn chain_chambers_are_six_cyclically_labeled_cells() {
    for (n1, n2) in [(3i64, 3i64), (3, 4), (4, 3)] {
        let datum = IntersectionDatum::chain(n1, n2).unwrap();
        let arr = wall_arrangement(&datum).unwrap();
        assert_eq!(arr.chambers.len(), 6);
        assert_eq!(arr.transversality, Transversality::ConcurrentNonTransversal);
        for (i, c) in arr.chambers.iter().enumerate() {
            assert_eq!(c.label, ChamberLabel::Cyclic(i + 1));
        }
        // consecutive chambers differ in exactly one wall sign, opposite
        // chambers have opposite signs
        for i in 0..6 {
            let a = &arr.chambers[i].signs;
            let b = &arr.chambers[(i + 1) % 6].signs;
            assert_eq!(a.iter().zip(b).filter(|(x, y)| x != y).count(), 1);
            let o = &arr.chambers[(i + 3) % 6].signs;
            assert!(a.iter().zip(o).all(|(x, y)| *x == -y));
        }
        // C1 is geometric: both ample forms positive at its representative
        assert_eq!(arr.geometric, 0);
        let rep = &arr.chambers[0].representative;
        let amp1 = rat(-n1) * &rep[0] + &rep[1];
        let amp2 = &rep[0] - rat(n2) * &rep[1];
        assert!(amp1.is_positive() && amp2.is_positive());
        // W1 sits between C1 and C2
        assert_ne!(arr.chambers[0].signs[0], arr.chambers[1].signs[0]);
        assert_eq!(arr.chambers[0].signs[1..], arr.chambers[1].signs[1..]);
    }
}

#[test]
fn chain_chamber_positions_match_the_figure() {
    // schematic coordinates of the six chambers for n1 = n2 = 3, read off the
    // figure: C1 bottom-left, then counterclockwise
    let datum = IntersectionDatum::chain(3, 3).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    let probe = [
        (ratq(-6, 5), ratq(-6, 5)),
        (ratq(1, 4), ratq(-3, 2)),
        (ratq(5, 4), ratq(-1, 2)),
        (ratq(6, 5), ratq(6, 5)),
        (ratq(-1, 2), ratq(5, 4)),
        (ratq(-3, 2), ratq(1, 4)),
    ];
    for (i, (x, y)) in probe.iter().enumerate() {
        let pt = vec![x.clone(), y.clone()];
        let signs: Vec<i8> = arr
            .walls
            .iter()
            .map(|w| {
                let c = linear_coeffs(&w.form, 2);
                let v = &c[0] * &pt[0] + &c[1] * &pt[1];
                if v.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect();
        assert_eq!(signs, arr.chambers[i].signs, "probe point for C{}", i + 1);
    }
}

#[test]
fn degenerate_chain_data_is_rejected_early() {
    // two (-1)-curves meeting: the gram matrix [[-1,1],[1,-1]] is only
    // negative semidefinite, so the arrangement can never degenerate silently
    let bad = IntersectionDatum::new(
        vec![vec![-1, 1], vec![1, -1]],
        vec![ratq(-5, 4), ratq(-5, 4)],
        Rat::zero(),
        rat(2),
    );
    assert!(bad.is_err());
    // a (-2,-2) chain with bracket-safe pairings still yields three distinct
    // walls and six chambers
    let datum = IntersectionDatum::new(
        vec![vec![-2, 1], vec![1, -2]],
        vec![ratq(-7, 4), ratq(-7, 4)],
        Rat::zero(),
        rat(2),
    )
    .unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    assert_eq!(arr.chambers.len(), 6);
}

// ---- component reports ----------------------------------------------------

#[test]
fn single_curve_reports_follow_the_trichotomy() {
    // n = 1: the non-geometric side is the contracted surface T
    let datum = IntersectionDatum::single(1).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    let rep = component_report(&arr, &datum, &ChamberLabel::Subset(vec![0])).unwrap();
    assert_eq!(rep.components, vec![Component { name: "T".into(), dimension: 2 }]);
    assert!(rep.gluings.is_empty());
    // n = 2: both sides are S
    let datum = IntersectionDatum::single(2).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    let rep = component_report(&arr, &datum, &ChamberLabel::Subset(vec![0])).unwrap();
    assert_eq!(rep.components, vec![Component { name: "S".into(), dimension: 2 }]);
    // n = 4: S glued to P^3 along a rational normal curve
    let datum = IntersectionDatum::single(4).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    let rep = component_report(&arr, &datum, &ChamberLabel::Subset(vec![0])).unwrap();
    assert_eq!(
        rep.components,
        vec![
            Component { name: "S".into(), dimension: 2 },
            Component { name: "P^3".into(), dimension: 3 },
        ]
    );
    assert_eq!(rep.gluings.len(), 1);
    assert_eq!(rep.gluings[0].locus_a, "C");
    assert_eq!(rep.gluings[0].locus_b, "rational normal curve");
    // geometric chamber: S alone
    let geo = component_report(&arr, &datum, &ChamberLabel::Subset(vec![])).unwrap();
    assert_eq!(geo.components, vec![Component { name: "S".into(), dimension: 2 }]);
    // the on-wall note carries the strictly semistable pair and the
    // quotient-singularity tag matching the invariant-ring presentation
    assert_eq!(geo.walls.len(), 1);
    assert_eq!(geo.walls[0].strictly_semistable, "O_C (+) O_C(-1)[1]");
    assert_eq!(geo.walls[0].singularity.as_deref(), Some("1/4(1,1)"));
    // cross-wire: the tagged n indexes a nonempty hankel rank ideal
    assert!(!hankel_rank_ideal(4, 4).gens.is_empty());
}

#[test]
fn chain_reports_match_the_proposition() {
    let datum = IntersectionDatum::chain(3, 3).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    // C1: just the surface
    let c1 = component_report(&arr, &datum, &ChamberLabel::Cyclic(1)).unwrap();
    assert_eq!(c1.components, vec![Component { name: "S".into(), dimension: 2 }]);
    // C2: S glued to P^{n1-1} along C1
    let c2 = component_report(&arr, &datum, &ChamberLabel::Cyclic(2)).unwrap();
    assert_eq!(c2.components.len(), 2);
    assert_eq!(c2.components[1].name, "P^2");
    assert_eq!(c2.gluings[0].locus_a, "C1");
    // C6 is the mirror along the other curve
    let c6 = component_report(&arr, &datum, &ChamberLabel::Cyclic(6)).unwrap();
    assert_eq!(c6.components[1].name, "P^2");
    assert_eq!(c6.gluings[0].locus_a, "C2");
    // C3: three components and three gluing edges
    let c3 = component_report(&arr, &datum, &ChamberLabel::Cyclic(3)).unwrap();
    assert_eq!(
        c3.components,
        vec![
            Component { name: "S".into(), dimension: 2 },
            Component { name: "Bl_pt P^2".into(), dimension: 2 },
            Component { name: "P^3".into(), dimension: 3 },
        ]
    );
    assert_eq!(c3.gluings.len(), 3);
    assert_eq!(c3.gluings[0].locus_a, "exceptional divisor");
    assert_eq!(c3.gluings[0].locus_b, "linear P^1");
    assert_eq!(c3.gluings[1].locus_a, "C2");
    assert_eq!(c3.gluings[2].locus_a, "C1");
    assert_eq!(c3.gluings[2].locus_b, "strict transform of a rational normal curve");
    // C5 mirrors C3
    let c5 = component_report(&arr, &datum, &ChamberLabel::Cyclic(5)).unwrap();
    assert_eq!(c5.gluings[1].locus_a, "C1");
    assert_eq!(c5.gluings[2].locus_a, "C2");
    // C4 has no description and is refused
    assert!(component_report(&arr, &datum, &ChamberLabel::Cyclic(4)).is_err());
}

#[test]
fn chain_reports_with_distinct_self_intersections() {
    let datum = IntersectionDatum::chain(3, 4).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    let c3 = component_report(&arr, &datum, &ChamberLabel::Cyclic(3)).unwrap();
    // blow-up of P^{n1-1} = P^2 and the big component P^{n1+n2-3} = P^4
    assert_eq!(c3.components[1].name, "Bl_pt P^2");
    assert_eq!(c3.components[2].name, "P^4");
    assert_eq!(c3.gluings[1].locus_b, "rational normal curve in a complementary P^3");
    let c5 = component_report(&arr, &datum, &ChamberLabel::Cyclic(5)).unwrap();
    assert_eq!(c5.components[1].name, "Bl_pt P^3");
    assert_eq!(c5.components[2].name, "P^4");
    assert_eq!(c5.gluings[1].locus_b, "rational normal curve in a complementary P^2");
}

#[test]
fn small_chain_and_small_disjoint_reports_are_refused() {
    let datum = IntersectionDatum::chain(2, 3).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    assert!(component_report(&arr, &datum, &ChamberLabel::Cyclic(2)).is_err());
    let datum = IntersectionDatum::disjoint(&[2, 4]).unwrap();
    let arr = wall_arrangement(&datum).unwrap();
    assert!(component_report(&arr, &datum, &ChamberLabel::Subset(vec![0])).is_err());
    // but a subset avoiding the small curve is fine
    assert!(component_report(&arr, &datum, &ChamberLabel::Subset(vec![1])).is_ok());
}

// ---- golden files ---------------------------------------------------------

fn golden_reports() -> Vec<(&'static str, ComponentReport)> {
    let disjoint = IntersectionDatum::disjoint(&[3, 4]).unwrap();
    let arr = wall_arrangement(&disjoint).unwrap();
    let a = component_report(&arr, &disjoint, &ChamberLabel::Subset(vec![0, 1])).unwrap();
    let chain = IntersectionDatum::chain(3, 3).unwrap();
    let arrc = wall_arrangement(&chain).unwrap();
    let b = component_report(&arrc, &chain, &ChamberLabel::Cyclic(3)).unwrap();
    vec![("disjoint_3_4_chamber_12.json", a), ("chain_3_3_c3.json", b)]
}

#[test]
fn component_reports_match_the_golden_files() {
    for (name, report) in golden_reports() {
        let path = format!("{}/tests/golden/{}", env!("CARGO_MANIFEST_DIR"), name);
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing golden file {path}: {e}"));
        let want: serde_json::Value = serde_json::from_str(&text).unwrap();
        let got = serde_json::to_value(&report).unwrap();
        assert_eq!(got, want, "golden mismatch for {name}");
    }
}

#[test]
#[ignore]
fn regenerate_golden_files() {
    for (name, report) in golden_reports() {
        let dir = format!("{}/tests/golden", env!("CARGO_MANIFEST_DIR"));
        std::fs::create_dir_all(&dir).unwrap();
        let path = format!("{dir}/{name}");
        let text = serde_json::to_string_pretty(&report).unwrap();
        std::fs::write(&path, text + "\n").unwrap();
    }
    panic!("golden files regenerated; rerun the comparison test");
}
