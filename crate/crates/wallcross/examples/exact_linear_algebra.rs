//! exact rational linear algebra: rank, kernel, and solving, with no
//! floating point anywhere.

use wallcross::{rat, ratq, QMatrix};

fn main() {
    // a 3x4 matrix with a one-dimensional kernel
    let m = QMatrix::from_rows(&[
        vec![rat(1), rat(2), rat(3), rat(4)],
        vec![rat(2), rat(4), rat(6), rat(8)],
        vec![rat(0), rat(1), ratq(1, 2), rat(0)],
    ]);
    println!("rank = {}", m.rank());
    for (i, k) in m.kernel_basis().iter().enumerate() {
        let entries: Vec<String> = k.iter().map(|x| x.to_string()).collect();
        println!("kernel vector {i}: ({})", entries.join(", "));
        // exact check: m * k = 0
        assert!(m.mul_vec(k).iter().all(|x| x == &rat(0)));
    }
    // solve m x = b exactly
    let b = vec![rat(10), rat(20), ratq(5, 2)];
    let x = m.solve_linear(&b).expect("consistent system");
    let entries: Vec<String> = x.iter().map(|v| v.to_string()).collect();
    println!("a solution of m x = b: ({})", entries.join(", "));
    assert_eq!(m.mul_vec(&x), b);
}
