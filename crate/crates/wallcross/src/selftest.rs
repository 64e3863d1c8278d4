//! the acceptance suite: every headline computation of the engine checked
//! against an independent closed form, a golden file, or a literal identity.
//!
//! the same criteria back both `wallcross selftest` and the `acceptance`
//! integration test, so the command-line path and the test path cannot
//! drift apart. randomized checks use a fixed seed and are deterministic.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cech::{
    bracket, ext_dimensions, face, hom_differential, total_differential, CechElement,
};
use crate::curvechains::{
    chain_locus_xi, hom_dimension, rank_stratify, xi_composition_matrix, Scenario, Stratum,
    XiClass,
};
use crate::localmodel::{build_model, resolve_sheaf, Complex, ModelTag, SheafName, ToricModel};
use crate::mchull::{
    chain_hull_candidate, chain_problem, compare_with_hankel, extend_order, hull_start,
    invariant_subring, single_hull_candidate, single_problem, stopping_check,
    stopping_check_up_to_change, MatchVerdict, Poly, StopVerdict, TruncatedIdeal,
};
use crate::tw::{
    solve_primitive, tw_bracket, tw_differential, tw_equal, tw_face_compatible, tw_is_zero,
    tw_space_basis, SimplexForm, TWElement,
};
use crate::walls::{
    component_report, render_form, wall_arrangement, ChamberLabel, IntersectionDatum,
    Transversality,
};
use crate::{rat, ratq, LaurentElement, Rat};

// ---- outcome bookkeeping ---------------------------------------------------

/// verdict of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    /// the check still passed, but only after the weight window had to be
    /// enlarged beyond the configured margin: the configuration is too
    /// tight for a clean run.
    EnvironmentLimited(String),
    Fail(String),
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub index: usize,
    pub name: &'static str,
    pub status: Status,
}

/// run all ten criteria. `margin` overrides the weight-window margin used
/// by the cohomology computations (None picks the model default).
pub fn run_all(margin: Option<i64>) -> Vec<Outcome> {
    let mut out = Vec::new();
    let criteria: Vec<(&'static str, Box<dyn Fn() -> Status>)> = vec![
        ("hom table on chains, closed form vs cech", Box::new(move || criterion_hom_table(margin))),
        ("single-curve ext dimensions", Box::new(move || criterion_single_ext(margin))),
        ("bracket identities of the displayed representatives", Box::new(|| criterion_representatives())),
        ("single-curve hull stops on the quadrics", Box::new(|| criterion_single_hull())),
        ("invariant ring matches the hankel germ", Box::new(|| criterion_invariants())),
        ("triple-point obstruction ladder", Box::new(|| criterion_chain_hull())),
        ("wall equations and chamber counts", Box::new(|| criterion_walls())),
        ("rank stratification vs brute force", Box::new(|| criterion_stratification())),
        ("dgla property suites and window stability", Box::new(move || criterion_properties(margin))),
        ("component reports vs golden files", Box::new(|| criterion_golden())),
    ];
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = std::time::Instant::now();
        let status = f();
        eprintln!("criterion {}: {} [{:?}]", i + 1, name, start.elapsed());
        out.push(Outcome { index: i + 1, name, status });
    }
    out
}

// ---- 1: hom dimension table -------------------------------------------------

fn criterion_hom_table(margin: Option<i64>) -> Status {
    let mut enlarged = false;
    for (n1, n2) in [(3, 3), (3, 4)] {
        let model = build_model(ModelTag::Chain { n1, n2 });
        let e = resolve_sheaf(&SheafName::OnChain { a: 0, b: 0 }, &model);
        for a in -3..=3 {
            for b in -3..=3 {
                let f = resolve_sheaf(&SheafName::OnChain { a, b }, &model);
                let (dims, wi) = ext_dimensions(&e, &f, margin);
                enlarged |= wi.enlargements > 0;
                let got = dims.get(&0).copied().unwrap_or(0);
                let want = hom_dimension(a, b);
                if got != want {
                    return Status::Fail(format!(
                        "chain({n1},{n2}) hom({a},{b}): cech gives {got}, closed form {want}"
                    ));
                }
            }
        }
    }
    env_limited(margin, enlarged)
}

fn env_limited(margin: Option<i64>, enlarged: bool) -> Status {
    if margin.is_some() && enlarged {
        Status::EnvironmentLimited(
            "the configured weight-window margin was too small; the window had to be enlarged"
                .into(),
        )
    } else {
        Status::Pass
    }
}

// ---- 2: single-curve ext dimensions -----------------------------------------

fn criterion_single_ext(margin: Option<i64>) -> Status {
    let mut enlarged = false;
    for n in [3i64, 4, 5] {
        let m = build_model(ModelTag::Single { n });
        let oc = resolve_sheaf(&SheafName::OnCurve { k: 0 }, &m);
        let tw = resolve_sheaf(&SheafName::OnCurve { k: -1 }, &m);
        let (dims, wi) = ext_dimensions(&oc, &tw, margin);
        enlarged |= wi.enlargements > 0;
        if dims.get(&2).copied().unwrap_or(0) != n as usize {
            return Status::Fail(format!("Ext^2(O_C, O_C(-1)) != {n} on single({n}): {dims:?}"));
        }
        let e = resolve_sheaf(&SheafName::SingleE, &m);
        let (dims, wi) = ext_dimensions(&e, &e, margin);
        enlarged |= wi.enlargements > 0;
        let want: BTreeMap<i64, usize> =
            [(0, 2), (1, (n + 2) as usize), (2, (2 * n - 2) as usize), (3, (n - 2) as usize)]
                .into_iter()
                .filter(|&(_, d)| d > 0)
                .collect();
        if dims != want {
            return Status::Fail(format!("RHom(E,E) on single({n}): got {dims:?}, want {want:?}"));
        }
    }
    env_limited(margin, enlarged)
}

// ---- 3: displayed representatives -------------------------------------------

fn one_component(ov: &[usize], s: i64, t: i64, mat: Vec<Vec<LaurentElement>>) -> CechElement {
    let mut components = BTreeMap::new();
    components.insert((ov.to_vec(), s, t), mat);
    CechElement { components }
}

fn rep_mono(m: &Arc<ToricModel>, chart: usize, e: &[i64], c: i64) -> LaurentElement {
    LaurentElement::monomial(&m.charts[chart], e, rat(c))
}

fn rep_zero(m: &Arc<ToricModel>, chart: usize) -> LaurentElement {
    LaurentElement::zero(&m.charts[chart])
}

/// alpha_i: dt0 paired with the overlap cochain carrying y^i in the
/// (-1,-1) corner of the endomorphism matrix.
pub fn rep_alpha(m: &Arc<ToricModel>, i: i64) -> TWElement {
    let mat =
        vec![vec![rep_zero(m, 0), rep_mono(m, 0, &[-i, 0], 1)], vec![rep_zero(m, 0), rep_zero(m, 0)]];
    TWElement::pair(SimplexForm::bary_dt(1, 0), one_component(&[0, 1], -1, -1, mat))
}

/// gamma_k: dt0 paired with the overlap cochain (y^k; 0), (0, -y^k).
pub fn rep_gamma(m: &Arc<ToricModel>, k: i64) -> TWElement {
    let c = one_component(&[0, 1], -2, -1, vec![vec![rep_mono(m, 0, &[-k, 0], 1)], vec![rep_zero(m, 0)]])
        .add(&one_component(&[0, 1], -1, 0, vec![vec![rep_zero(m, 0), rep_mono(m, 0, &[-k, 0], -1)]]));
    TWElement::pair(SimplexForm::bary_dt(1, 0), c)
}

/// beta_j: the global-section lift, x^j on the first chart and y^{1-j} on
/// the second, with the induced face lift at level one.
pub fn rep_beta(e: &Complex, m: &Arc<ToricModel>, j: i64) -> TWElement {
    let c1 = one_component(&[0], -2, -1, vec![vec![rep_zero(m, 0)], vec![rep_mono(m, 0, &[j, 0], 1)]])
        .add(&one_component(&[0], -1, 0, vec![vec![rep_mono(m, 0, &[j, 0], 1), rep_zero(m, 0)]]));
    let c2 = one_component(&[1], -2, -1, vec![vec![rep_zero(m, 1)], vec![rep_mono(m, 1, &[1 - j, 0], 1)]])
        .add(&one_component(&[1], -1, 0, vec![vec![rep_mono(m, 1, &[1 - j, 0], 1), rep_zero(m, 1)]]));
    let level0 = c1.add(&c2);
    let targets = vec![vec![0, 1]];
    let level1 = face(e, e, 1, &level0, &targets);
    TWElement::pair(SimplexForm::one(0), level0).add(&TWElement::pair(SimplexForm::one(1), level1))
}

/// mu: supported on the first chart, level-one part weighted by t0; its
/// differential is gamma_0.
pub fn rep_mu(e: &Complex, m: &Arc<ToricModel>) -> TWElement {
    let level0 = one_component(&[0], -2, -1, vec![vec![rep_mono(m, 0, &[0, 0], 1)], vec![rep_zero(m, 0)]])
        .add(&one_component(&[0], -1, 0, vec![vec![rep_zero(m, 0), rep_mono(m, 0, &[0, 0], -1)]]));
    let targets = vec![vec![0, 1]];
    let level1 = face(e, e, 1, &level0, &targets);
    TWElement::pair(SimplexForm::one(0), level0)
        .add(&TWElement::pair(SimplexForm::bary_t(1, 0), level1))
}

/// eta: supported on the second chart, level-one part weighted by t1; its
/// differential is gamma_n.
pub fn rep_eta(e: &Complex, m: &Arc<ToricModel>) -> TWElement {
    let level0 = one_component(&[1], -2, -1, vec![vec![rep_mono(m, 1, &[0, 0], -1)], vec![rep_zero(m, 1)]])
        .add(&one_component(&[1], -1, 0, vec![vec![rep_zero(m, 1), rep_mono(m, 1, &[0, 0], 1)]]));
    let targets = vec![vec![0, 1]];
    let level1 = face(e, e, 0, &level0, &targets);
    TWElement::pair(SimplexForm::one(0), level0)
        .add(&TWElement::pair(SimplexForm::bary_t(1, 1), level1))
}

fn criterion_representatives() -> Status {
    for n in [3i64, 4] {
        let m = build_model(ModelTag::Single { n });
        let e = resolve_sheaf(&SheafName::SingleE, &m);
        for i in 1..=n {
            let a = rep_alpha(&m, i);
            if !tw_face_compatible(&e, &e, &a) || !tw_is_zero(&tw_differential(&e, &e, &a)) {
                return Status::Fail(format!("alpha_{i} not a closed compatible element (n={n})"));
            }
        }
        for j in 0..=1 {
            let b = rep_beta(&e, &m, j);
            if !tw_face_compatible(&e, &e, &b) || !tw_is_zero(&tw_differential(&e, &e, &b)) {
                return Status::Fail(format!("beta_{j} not a closed compatible element (n={n})"));
            }
        }
        for i in 1..=n {
            for j in 0..=1 {
                let br = tw_bracket(&e, &rep_alpha(&m, i), &rep_beta(&e, &m, j));
                if !tw_equal(&br, &rep_gamma(&m, i - j)) {
                    return Status::Fail(format!("[alpha_{i}, beta_{j}] != gamma_{} (n={n})", i - j));
                }
            }
        }
        if !tw_equal(&tw_differential(&e, &e, &rep_mu(&e, &m)), &rep_gamma(&m, 0)) {
            return Status::Fail(format!("gamma_0 != d mu (n={n})"));
        }
        if !tw_equal(&tw_differential(&e, &e, &rep_eta(&e, &m)), &rep_gamma(&m, n)) {
            return Status::Fail(format!("gamma_{n} != d eta (n={n})"));
        }
        for k in [0, n] {
            match solve_primitive(&e, &e, &rep_gamma(&m, k)) {
                Some(y) if tw_equal(&tw_differential(&e, &e, &y), &rep_gamma(&m, k)) => {}
                _ => return Status::Fail(format!("no primitive found for gamma_{k} (n={n})")),
            }
        }
        if solve_primitive(&e, &e, &rep_gamma(&m, 1)).is_some() {
            return Status::Fail(format!("gamma_1 is unexpectedly exact (n={n})"));
        }
    }
    Status::Pass
}

// ---- 4: single-curve hull ----------------------------------------------------

fn criterion_single_hull() -> Status {
    for n in [3i64, 4] {
        let p = single_problem(n);
        let st1 = hull_start(&p, 5);
        let st2 = match extend_order(&p, &st1) {
            Ok(s) => s,
            Err(e) => return Status::Fail(format!("single({n}) order two failed: {e}")),
        };
        let candidate = single_hull_candidate(n, 5);
        match stopping_check(&st2, &candidate, 3) {
            StopVerdict::HullEqualsCandidate { d: 3 } => {}
            other => {
                // the criterion allows a weight-homogeneous coordinate change
                let w = p.combined_weights();
                let (v, _) = stopping_check_up_to_change(&st2, &candidate, 3, &w);
                if v != (StopVerdict::HullEqualsCandidate { d: 3 }) {
                    return Status::Fail(format!("single({n}) stopping check: {other:?}"));
                }
            }
        }
    }
    Status::Pass
}

// ---- 5: invariant subring vs hankel -------------------------------------------

fn criterion_invariants() -> Status {
    for n in [3i64, 4] {
        let p = single_problem(n);
        let hull_ideal = single_hull_candidate(n, 5);
        let pres = invariant_subring(&hull_ideal, &p.aut_weights, &p.geo_weights, 2, 2);
        if pres.gen_monos.len() != (n + 1) as usize {
            return Status::Fail(format!(
                "single({n}): expected {} invariant generators, got {}",
                n + 1,
                pres.gen_monos.len()
            ));
        }
        match compare_with_hankel(&pres, n as usize) {
            MatchVerdict::Match { .. } => {}
            other => return Status::Fail(format!("single({n}) hankel comparison: {other:?}")),
        }
    }
    Status::Pass
}

// ---- 6: triple-point obstruction ladder ----------------------------------------

/// the expected order-two ideal on chain(n1,n2): m^3 + (q_j r, j = 2..n2-1).
fn chain_expected_j2(nv: usize, n1: i64, n2: i64) -> TruncatedIdeal {
    // coordinates: p_1..p_{n1-2}, q_1..q_{n2-1}, r
    let np = (n1 - 2) as usize;
    let mut gens = Vec::new();
    for j in 2..n2 {
        let mut m = vec![0u32; nv];
        m[np + j as usize - 1] = 1;
        m[nv - 1] = 1;
        gens.push(Poly::monomial(nv, &m, rat(1)));
    }
    TruncatedIdeal::maximal_power(nv, 5, 3).plus(&gens)
}

/// the expected order-three ideal: m J_2 + (p_i q_1 r, q_j r + q_1 q_{j-1} r).
fn chain_expected_j3(j2: &TruncatedIdeal, nv: usize, n1: i64, n2: i64) -> TruncatedIdeal {
    let np = (n1 - 2) as usize;
    let mut gens = Vec::new();
    for i in 0..np {
        let mut m = vec![0u32; nv];
        m[i] = 1;
        m[np] = 1; // q_1
        m[nv - 1] = 1;
        gens.push(Poly::monomial(nv, &m, rat(1)));
    }
    for j in 2..n2 {
        let mut lead = vec![0u32; nv];
        lead[np + j as usize - 1] = 1;
        lead[nv - 1] = 1;
        let mut cross = vec![0u32; nv];
        cross[np] += 1; // q_1
        cross[np + j as usize - 2] += 1; // q_{j-1}
        cross[nv - 1] = 1;
        gens.push(Poly::monomial(nv, &lead, rat(1)).add(&Poly::monomial(nv, &cross, rat(1))));
    }
    j2.times_maximal().plus(&gens)
}

fn criterion_chain_hull() -> Status {
    for (n1, n2) in [(3i64, 3i64), (3, 4)] {
        let p = chain_problem(n1, n2);
        let nv = p.nvars();
        let st1 = hull_start(&p, 5);
        let st2 = match extend_order(&p, &st1) {
            Ok(s) => s,
            Err(e) => return Status::Fail(format!("chain({n1},{n2}) order two failed: {e}")),
        };
        if !st2.ideal.equals(&chain_expected_j2(nv, n1, n2)) {
            return Status::Fail(format!("chain({n1},{n2}): J_2 differs from the displayed ideal"));
        }
        let st3 = match extend_order(&p, &st2) {
            Ok(s) => s,
            Err(e) => return Status::Fail(format!("chain({n1},{n2}) order three failed: {e}")),
        };
        let j3 = chain_expected_j3(&chain_expected_j2(nv, n1, n2), nv, n1, n2);
        if !st3.ideal.equals(&j3) {
            return Status::Fail(format!("chain({n1},{n2}): J_3 differs from the displayed ideal"));
        }
        let candidate = chain_hull_candidate(n1, n2, 5);
        let w = p.combined_weights();
        let (verdict, _) = stopping_check_up_to_change(&st3, &candidate, 4, &w);
        if verdict != (StopVerdict::HullEqualsCandidate { d: 4 }) {
            return Status::Fail(format!("chain({n1},{n2}) stopping check: {verdict:?}"));
        }
    }
    Status::Pass
}

// ---- 7: wall equations and chamber counts ---------------------------------------

fn same_form(a: &Poly, b: &Poly) -> bool {
    let b = crate::walls::normalize_primitive(b);
    a.sub(&b).is_zero() || a.add(&b).is_zero()
}

fn linear_form(r: usize, coeffs: &[i64]) -> Poly {
    let mut p = Poly::zero(r);
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            let mut m = vec![0u32; r];
            m[i] = 1;
            p.add_term(&m, &rat(c));
        }
    }
    p
}

fn criterion_walls() -> Status {
    // single(n): the slice wall is epsilon = 0
    for n in [1i64, 3, 5] {
        let datum = IntersectionDatum::single(n).map_err(Status::Fail);
        let datum = match datum {
            Ok(d) => d,
            Err(s) => return s,
        };
        let arr = match wall_arrangement(&datum) {
            Ok(a) => a,
            Err(e) => return Status::Fail(e),
        };
        if arr.walls.len() != 1 || render_form(&arr.walls[0].form) != "e1" {
            return Status::Fail(format!("single({n}) wall is not epsilon = 0"));
        }
        if arr.chambers.len() != 2 {
            return Status::Fail(format!("single({n}) chamber count != 2"));
        }
    }
    // chain(n1,n2): the three displayed lines
    for (n1, n2) in [(3i64, 3i64), (3, 4)] {
        let datum = IntersectionDatum::chain(n1, n2).unwrap();
        let arr = match wall_arrangement(&datum) {
            Ok(a) => a,
            Err(e) => return Status::Fail(e),
        };
        let want = [
            ("W1", linear_form(2, &[-n1, 1])),
            ("W2", linear_form(2, &[1, -n2])),
            ("W12", linear_form(2, &[n1 - 1, n2 - 1])),
        ];
        for (name, form) in &want {
            let Some(w) = arr.walls.iter().find(|w| &w.name == name) else {
                return Status::Fail(format!("chain({n1},{n2}): wall {name} missing"));
            };
            if !same_form(&w.form, form) {
                return Status::Fail(format!("chain({n1},{n2}): wall {name} has the wrong equation"));
            }
        }
        if arr.chambers.len() != 6 || arr.transversality != Transversality::ConcurrentNonTransversal {
            return Status::Fail(format!("chain({n1},{n2}): expected six concurrent chambers"));
        }
        for k in 1..=6usize {
            if !arr.chambers.iter().any(|c| c.label == ChamberLabel::Cyclic(k)) {
                return Status::Fail(format!("chain({n1},{n2}): chamber C{k} missing"));
            }
        }
        if arr.chambers[arr.geometric].label != ChamberLabel::Cyclic(1) {
            return Status::Fail(format!("chain({n1},{n2}): geometric chamber is not C1"));
        }
    }
    // disjoint configurations: 2^r chambers, subset labels
    for r in 1..=4usize {
        let ns: Vec<i64> = (0..r).map(|i| 3 + i as i64).collect();
        let datum = IntersectionDatum::disjoint(&ns).unwrap();
        let arr = match wall_arrangement(&datum) {
            Ok(a) => a,
            Err(e) => return Status::Fail(e),
        };
        if arr.walls.len() != r || arr.chambers.len() != (1 << r) {
            return Status::Fail(format!("disjoint r={r}: wrong wall or chamber count"));
        }
        for (i, w) in arr.walls.iter().enumerate() {
            let mut coeffs = vec![0i64; r];
            coeffs[i] = 1;
            if !same_form(&w.form, &linear_form(r, &coeffs)) {
                return Status::Fail(format!("disjoint r={r}: wall {} is not epsilon_{}", w.name, i + 1));
            }
        }
        let geo = &arr.chambers[arr.geometric];
        if geo.label != ChamberLabel::Subset(vec![]) {
            return Status::Fail(format!("disjoint r={r}: geometric chamber is not the empty subset"));
        }
        let full: Vec<usize> = (0..r).collect();
        if !arr.chambers.iter().any(|c| c.label == ChamberLabel::Subset(full.clone())) {
            return Status::Fail(format!("disjoint r={r}: full-subset chamber missing"));
        }
    }
    Status::Pass
}

// ---- 8: rank stratification -------------------------------------------------------

fn rrat(rng: &mut ChaCha8Rng) -> Rat {
    ratq(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3))
}

fn criterion_stratification() -> Status {
    let mut rng = ChaCha8Rng::seed_from_u64(2045);
    // 200 random samples per scenario against the brute-force matrix rank
    for scenario in [Scenario::Single { n: 4 }, Scenario::Chain { n1: 3, n2: 3 }] {
        for _ in 0..200 {
            let coeffs: Vec<Rat> = (0..4).map(|_| rrat(&mut rng)).collect();
            let xi = XiClass::new(scenario, coeffs);
            let rank = xi_composition_matrix(&xi).rank();
            let want = match rank_stratify(&xi) {
                Stratum::Zero => 0,
                Stratum::RationalNormalLocus(..) | Stratum::ExceptionalLocus => 1,
                Stratum::Generic => 2,
            };
            if rank != want {
                return Status::Fail(format!("stratum/rank mismatch at {:?}", xi.coeffs));
            }
        }
    }
    // the parametrized loci really have rank <= 1
    for _ in 0..40 {
        let (b0, b1) = (rrat(&mut rng), rrat(&mut rng));
        if b0.is_zero() && b1.is_zero() {
            continue;
        }
        let n = 4i64;
        let coeffs: Vec<Rat> = (0..n)
            .map(|i| {
                let mut c = Rat::one();
                for _ in 0..i {
                    c *= &b0;
                }
                for _ in 0..(n - 1 - i) {
                    c *= &b1;
                }
                c
            })
            .collect();
        let xi = XiClass::new(Scenario::Single { n }, coeffs);
        if xi_composition_matrix(&xi).rank() > 1 {
            return Status::Fail(format!("rational-normal point ({b0},{b1}) has rank > 1"));
        }
        let (lambda, mu) = (rrat(&mut rng), rrat(&mut rng));
        if !lambda.is_zero() || !mu.is_zero() {
            let xi = chain_locus_xi(&lambda, &mu, 3, 3);
            if xi_composition_matrix(&xi).rank() > 1 {
                return Status::Fail(format!("chain locus point ({lambda},{mu}) has rank > 1"));
            }
        }
    }
    // 200 random off-locus points have rank exactly 2
    let mut seen = 0;
    while seen < 200 {
        let coeffs: Vec<Rat> = (0..4).map(|_| rrat(&mut rng)).collect();
        for scenario in [Scenario::Single { n: 4 }, Scenario::Chain { n1: 3, n2: 3 }] {
            let xi = XiClass::new(scenario, coeffs.clone());
            if matches!(rank_stratify(&xi), Stratum::Generic) {
                if xi_composition_matrix(&xi).rank() != 2 {
                    return Status::Fail(format!("off-locus point {:?} has rank != 2", xi.coeffs));
                }
                seen += 1;
            }
        }
    }
    Status::Pass
}

// ---- 9: property suites --------------------------------------------------------

/// random level-0 cochain of pure internal degree n with polynomial entries.
pub fn random_cochain(e: &Complex, f: &Complex, n: i64, rng: &mut ChaCha8Rng) -> CechElement {
    let model = &e.model;
    let mut components = BTreeMap::new();
    for i in 0..model.ncharts() {
        let ring = &model.charts[i];
        for &s in &e.degrees() {
            let t = s + n;
            if !f.terms.contains_key(&t) {
                continue;
            }
            let mut m = vec![vec![LaurentElement::zero(ring); e.rank(s)]; f.rank(t)];
            for row in m.iter_mut() {
                for entry in row.iter_mut() {
                    let exps = vec![rng.gen_range(0i64..=2), rng.gen_range(0i64..=2)];
                    *entry = LaurentElement::monomial(ring, &exps, rat(rng.gen_range(-3..=3)));
                }
            }
            components.insert((vec![i], s, t), m);
        }
    }
    CechElement { components }.normalize()
}

/// random homogeneous totalized element of the given degree: a rational
/// combination of the exact basis of the weight-(w) degree-(k) slice.
fn random_tw(pool: &[(i64, Vec<TWElement>)], k: i64, rng: &mut ChaCha8Rng) -> TWElement {
    let mut x = TWElement::zero();
    for (deg, basis) in pool {
        if *deg != k {
            continue;
        }
        for b in basis {
            let c = rat(rng.gen_range(-3i64..=3));
            if !c.is_zero() {
                x = x.add(&b.scale(&c));
            }
        }
    }
    x
}

fn sign(k: i64) -> Rat {
    if k % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

fn criterion_properties(margin: Option<i64>) -> Status {
    let mut rng = ChaCha8Rng::seed_from_u64(4099);
    let m = build_model(ModelTag::Single { n: 2 });
    let e = resolve_sheaf(&SheafName::SingleE, &m);

    // cochain-level identities on 100 random homogeneous triples
    for _ in 0..100 {
        let (dx, dy, dz) = (rng.gen_range(-1i64..=1), rng.gen_range(-1i64..=1), rng.gen_range(-1i64..=1));
        let x = random_cochain(&e, &e, dx, &mut rng);
        let y = random_cochain(&e, &e, dy, &mut rng);
        let z = random_cochain(&e, &e, dz, &mut rng);
        // d^2 = 0
        if !total_differential(&e, &e, &total_differential(&e, &e, &x)).is_zero() {
            return Status::Fail(format!("D^2 != 0 at internal degree {dx}"));
        }
        // graded antisymmetry
        let anti = bracket(&e, &x, &y).add(&bracket(&e, &y, &x).scale(&sign(dx * dy)));
        if !anti.is_zero() {
            return Status::Fail(format!("bracket antisymmetry failed at degrees ({dx},{dy})"));
        }
        // graded jacobi
        let lhs = bracket(&e, &x, &bracket(&e, &y, &z));
        let rhs = bracket(&e, &bracket(&e, &x, &y), &z)
            .add(&bracket(&e, &y, &bracket(&e, &x, &z)).scale(&sign(dx * dy)));
        if !lhs.sub(&rhs).is_zero() {
            return Status::Fail(format!("bracket jacobi failed at degrees ({dx},{dy},{dz})"));
        }
        // leibniz for the internal differential
        let lhs = hom_differential(&e, &e, &bracket(&e, &x, &y));
        let rhs = bracket(&e, &hom_differential(&e, &e, &x), &y)
            .add(&bracket(&e, &x, &hom_differential(&e, &e, &y)).scale(&sign(dx)));
        if !lhs.sub(&rhs).is_zero() {
            return Status::Fail(format!("bracket leibniz failed at degrees ({dx},{dy})"));
        }
    }

    // totalized identities on 100 random homogeneous triples drawn from the
    // compatible basis of a few weights
    let mut pool: Vec<(i64, Vec<TWElement>)> = Vec::new();
    for w in [(0, 0), (1, 0), (0, 1)] {
        for k in 0..=2i64 {
            let basis: Vec<TWElement> = tw_space_basis(&e, &e, w, k, 1).into_iter().take(3).collect();
            if !basis.is_empty() {
                pool.push((k, basis));
            }
        }
    }
    for _ in 0..100 {
        let (kx, ky, kz) = (rng.gen_range(0i64..=2), rng.gen_range(0i64..=2), rng.gen_range(0i64..=2));
        let x = random_tw(&pool, kx, &mut rng);
        let y = random_tw(&pool, ky, &mut rng);
        let z = random_tw(&pool, kz, &mut rng);
        // d^2 = 0 and face compatibility is preserved by d and the bracket
        let dx = tw_differential(&e, &e, &x);
        if !tw_is_zero(&tw_differential(&e, &e, &dx)) {
            return Status::Fail(format!("tw d^2 != 0 at degree {kx}"));
        }
        if !tw_face_compatible(&e, &e, &x) || !tw_face_compatible(&e, &e, &dx) {
            return Status::Fail("tw differential broke face compatibility".into());
        }
        let br = tw_bracket(&e, &x, &y);
        if !tw_face_compatible(&e, &e, &br) {
            return Status::Fail("tw bracket broke face compatibility".into());
        }
        // graded antisymmetry
        let anti = br.add(&tw_bracket(&e, &y, &x).scale(&sign(kx * ky)));
        if !tw_is_zero(&anti) {
            return Status::Fail(format!("tw antisymmetry failed at degrees ({kx},{ky})"));
        }
        // graded jacobi
        let lhs = tw_bracket(&e, &x, &tw_bracket(&e, &y, &z));
        let rhs = tw_bracket(&e, &tw_bracket(&e, &x, &y), &z)
            .add(&tw_bracket(&e, &y, &tw_bracket(&e, &x, &z)).scale(&sign(kx * ky)));
        if !tw_is_zero(&lhs.sub(&rhs)) {
            return Status::Fail(format!("tw jacobi failed at degrees ({kx},{ky},{kz})"));
        }
        // leibniz
        let lhs = tw_differential(&e, &e, &br);
        let rhs = tw_bracket(&e, &tw_differential(&e, &e, &x), &y)
            .add(&tw_bracket(&e, &x, &tw_differential(&e, &e, &y)).scale(&sign(kx)));
        if !tw_is_zero(&lhs.sub(&rhs)) {
            return Status::Fail(format!("tw leibniz failed at degrees ({kx},{ky})"));
        }
    }

    // window stability: all cohomology dimensions are unchanged under
    // margin + 2, for a spread of pairs on both model families
    let mut enlarged = false;
    let pairs: Vec<(Complex, Complex)> = {
        let ms = build_model(ModelTag::Single { n: 3 });
        let mc = build_model(ModelTag::Chain { n1: 3, n2: 3 });
        vec![
            (resolve_sheaf(&SheafName::SingleE, &ms), resolve_sheaf(&SheafName::SingleE, &ms)),
            (
                resolve_sheaf(&SheafName::OnCurve { k: 0 }, &ms),
                resolve_sheaf(&SheafName::OnCurve { k: -1 }, &ms),
            ),
            (resolve_sheaf(&SheafName::Point, &ms), resolve_sheaf(&SheafName::Point, &ms)),
            (
                resolve_sheaf(&SheafName::OnChain { a: 0, b: 0 }, &mc),
                resolve_sheaf(&SheafName::OnChain { a: 0, b: -1 }, &mc),
            ),
        ]
    };
    for (a, b) in &pairs {
        let base = match a.model.tag {
            ModelTag::Single { n } => 2 * n,
            ModelTag::Chain { n1, n2 } => 2 * n1.max(n2),
        };
        let m0 = margin.unwrap_or(base);
        let (d0, w0) = ext_dimensions(a, b, Some(m0));
        let (d1, w1) = ext_dimensions(a, b, Some(m0 + 2));
        enlarged |= w0.enlargements > 0 || w1.enlargements > 0;
        if d0 != d1 {
            return Status::Fail(format!(
                "ext dimensions changed under margin +2: {d0:?} vs {d1:?}"
            ));
        }
    }
    env_limited(margin, enlarged)
}

// ---- 10: golden component reports --------------------------------------------------

const GOLDEN_DISJOINT: &str = include_str!("../tests/golden/disjoint_3_4_chamber_12.json");
const GOLDEN_CHAIN: &str = include_str!("../tests/golden/chain_3_3_c3.json");

fn criterion_golden() -> Status {
    let disjoint = IntersectionDatum::disjoint(&[3, 4]).unwrap();
    let arr = match wall_arrangement(&disjoint) {
        Ok(a) => a,
        Err(e) => return Status::Fail(e),
    };
    let report = match component_report(&arr, &disjoint, &ChamberLabel::Subset(vec![0, 1])) {
        Ok(r) => r,
        Err(e) => return Status::Fail(e),
    };
    let got = serde_json::to_value(&report).unwrap();
    let want: serde_json::Value = serde_json::from_str(GOLDEN_DISJOINT).unwrap();
    if got != want {
        return Status::Fail("disjoint(3,4) chamber {1,2} report differs from the golden file".into());
    }
    let chain = IntersectionDatum::chain(3, 3).unwrap();
    let arr = match wall_arrangement(&chain) {
        Ok(a) => a,
        Err(e) => return Status::Fail(e),
    };
    let report = match component_report(&arr, &chain, &ChamberLabel::Cyclic(3)) {
        Ok(r) => r,
        Err(e) => return Status::Fail(e),
    };
    let got = serde_json::to_value(&report).unwrap();
    let want: serde_json::Value = serde_json::from_str(GOLDEN_CHAIN).unwrap();
    if got != want {
        return Status::Fail("chain(3,3) chamber C3 report differs from the golden file".into());
    }
    Status::Pass
}
