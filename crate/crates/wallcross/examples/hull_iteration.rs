//! the Maurer-Cartan hull at a wall point: iterate the obstruction
//! calculus order by order, certify the stopping degree, and present the
//! invariant subring of the resulting germ.

use wallcross::mchull::{
    compare_with_hankel, extend_order, hull_start, invariant_subring, single_hull_candidate,
    single_problem, stopping_check, StopVerdict,
};

fn main() {
    let n = 3i64;
    let p = single_problem(n);
    println!("coordinates: {}", p.coord_names.join(", "));

    let st1 = hull_start(&p, 5);
    let st2 = extend_order(&p, &st1).expect("order two");
    println!("order {} reached; {} obstruction generator(s)", st2.order, st2.obstruction_gens.len());

    // the quadric candidate p_i q0 + p_{i+1} q1 certifies the hull at d = 3
    let candidate = single_hull_candidate(n, 5);
    let verdict = stopping_check(&st2, &candidate, 3);
    println!("stopping verdict: {verdict:?}");
    assert_eq!(verdict, StopVerdict::HullEqualsCandidate { d: 3 });

    // the invariant ring of the germ is the 1/n(1,1) hankel singularity
    let pres = invariant_subring(&candidate, &p.aut_weights, &p.geo_weights, 2, 2);
    println!("{} invariant generators, {} relation(s)", pres.gen_monos.len(), pres.relations.len());
    println!("hankel comparison: {:?}", compare_with_hankel(&pres, n as usize));
}
