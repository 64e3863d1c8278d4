//! closed-form rank stratification of first-order classes on curve chains:
//! the composition matrix has rank 0, 1 or 2, and the rank <= 1 locus is a
//! parametrized rational normal curve plus the exceptional directions.

use wallcross::curvechains::{
    chain_locus_xi, ext1_long_sequence_dims, rank_stratify, xi_composition_matrix, Scenario,
    XiClass,
};
use wallcross::rat;

fn main() {
    // a generic class on single(4): rank 2, smooth hull of dimension n-1
    let xi = XiClass::new(Scenario::Single { n: 4 }, vec![rat(1), rat(2), rat(3), rat(5)]);
    let d = ext1_long_sequence_dims(&xi);
    println!(
        "generic single(4): {:?}, rank {}, self-extensions {}",
        rank_stratify(&xi),
        xi_composition_matrix(&xi).rank(),
        d.ext1_dim
    );

    // a geometric sequence lies on the rational normal locus
    let xi = XiClass::new(Scenario::Single { n: 4 }, vec![rat(27), rat(18), rat(12), rat(8)]);
    println!("geometric single(4): {:?}", rank_stratify(&xi));

    // the chain locus through parameters (lambda, mu)
    let xi = chain_locus_xi(&rat(1), &rat(2), 3, 3);
    let coeffs: Vec<String> = xi.coeffs.iter().map(|c| c.to_string()).collect();
    println!("chain locus (1,2) on chain(3,3): coefficients ({})", coeffs.join(", "));
    println!("  stratum {:?}", rank_stratify(&xi));

    // the exceptional directions: second-branch coordinates all zero
    let xi = XiClass::new(Scenario::Chain { n1: 3, n2: 3 }, vec![rat(1), rat(-1), rat(0), rat(0)]);
    println!("exceptional chain(3,3): {:?}", rank_stratify(&xi));
}
