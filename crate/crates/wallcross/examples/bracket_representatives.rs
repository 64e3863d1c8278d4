//! the explicit totalized representatives on a single curve: the classes
//! alpha_i, beta_j span the first cohomology, their brackets land on the
//! gamma classes, and exactly gamma_0 and gamma_n are exact.

use wallcross::localmodel::{build_model, resolve_sheaf, ModelTag, SheafName};
use wallcross::selftest::{rep_alpha, rep_beta, rep_eta, rep_gamma, rep_mu};
use wallcross::tw::{solve_primitive, tw_bracket, tw_differential, tw_equal, tw_is_zero};

fn main() {
    let n = 3i64;
    let m = build_model(ModelTag::Single { n });
    let e = resolve_sheaf(&SheafName::SingleE, &m);

    for i in 1..=n {
        for j in 0..=1 {
            let br = tw_bracket(&e, &rep_alpha(&m, i), &rep_beta(&e, &m, j));
            let hit = tw_equal(&br, &rep_gamma(&m, i - j));
            println!("[alpha_{i}, beta_{j}] = gamma_{}: {hit}", i - j);
        }
    }

    // gamma_0 and gamma_n bound the displayed primitives mu and eta
    let dmu = tw_differential(&e, &e, &rep_mu(&e, &m));
    println!("gamma_0 = d mu: {}", tw_equal(&dmu, &rep_gamma(&m, 0)));
    let deta = tw_differential(&e, &e, &rep_eta(&e, &m));
    println!("gamma_{n} = d eta: {}", tw_equal(&deta, &rep_gamma(&m, n)));

    // the middle gammas survive in cohomology
    for k in 1..n {
        let exact = solve_primitive(&e, &e, &rep_gamma(&m, k)).is_some();
        println!("gamma_{k} exact: {exact}");
    }

    // and every alpha is closed
    assert!((1..=n).all(|i| tw_is_zero(&tw_differential(&e, &e, &rep_alpha(&m, i)))));
}
