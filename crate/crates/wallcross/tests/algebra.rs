//! linear algebra tests against an independent dense elimination oracle.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallcross::{rat, QMatrix, Rat};

/// independent oracle: plain dense row reduction, counting pivots.
fn dense_rank(rows: &[Vec<Rat>]) -> usize {
    let mut a: Vec<Vec<Rat>> = rows.to_vec();
    if a.is_empty() {
        return 0;
    }
    let ncols = a[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].recip();
        for j in 0..ncols {
            let v = a[rank][j].clone() * &inv;
            a[rank][j] = v;
        }
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..ncols {
                    let sub = a[rank][j].clone() * &f;
                    a[r][j] -= sub;
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rat>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rat(rng.gen_range(-5..=5))).collect())
        .collect()
}

#[test]
fn identity_rank() {
    assert_eq!(QMatrix::identity(3).rank(), 3);
}

#[test]
fn jump_locus_matrix_rank_one() {
    // the two-column matrix whose rows are (a_{i,n-1-i}) shifted by one slot,
    // evaluated on the decomposable family a_{i,j} = b0^i b1^j with b0=b1=1, n=4:
    // all entries 1, so the rank drops to 1.
    let n = 4usize;
    let (b0, b1): (i64, i64) = (1, 1);
    let a = |i: u32, j: u32| rat(b0.pow(i) * b1.pow(j));
    let rows: Vec<Vec<Rat>> = (0..n - 1)
        .map(|k| vec![a(k as u32, (n - 1 - k) as u32 - 1), a(k as u32 + 1, (n - 1 - k) as u32 - 1)])
        .collect();
    assert_eq!(QMatrix::from_rows(&rows).rank(), 1);
}

#[test]
fn rank_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..30 {
        let rows = random_matrix(&mut rng, 5, 5);
        assert_eq!(QMatrix::from_rows(&rows).rank(), dense_rank(&rows));
    }
}

#[test]
fn zero_matrix_kernel_is_everything() {
    assert_eq!(QMatrix::zero(2, 2).kernel_basis().len(), 2);
}

#[test]
fn bidiagonal_kernel_is_decomposable_family() {
    // (n-1) x n bidiagonal matrix with rows (..., b1, -b0, ...): the kernel is
    // spanned by (b0^i b1^{n-1-i})_i.
    let n = 4usize;
    let (b0, b1) = (rat(1), rat(2));
    let mut m = QMatrix::zero(n - 1, n);
    for r in 0..n - 1 {
        m.set(r, r, b1.clone());
        m.set(r, r + 1, -b0.clone());
    }
    let ker = m.kernel_basis();
    assert_eq!(ker.len(), 1);
    // row r says b1*v_r = b0*v_{r+1}, so v_i is proportional to b1^i b0^{n-1-i}
    let expect: Vec<Rat> = (0..n).map(|i| rat(2i64.pow(i as u32))).collect();
    let k = &ker[0];
    let scale = expect[0].clone() / k[0].clone();
    for i in 0..n {
        assert_eq!(k[i].clone() * &scale, expect[i]);
    }
}

#[test]
fn rank_nullity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let rows = random_matrix(&mut rng, 4, 6);
        let m = QMatrix::from_rows(&rows);
        assert_eq!(m.rank() + m.kernel_basis().len(), 6);
        for v in m.kernel_basis() {
            assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn solve_identity() {
    let b = vec![rat(3), rat(-7), rat(2)];
    assert_eq!(QMatrix::identity(3).solve_linear(&b), Some(b));
}

#[test]
fn solve_inconsistent() {
    let b = vec![rat(1), rat(0)];
    assert_eq!(QMatrix::zero(2, 3).solve_linear(&b), None);
}

#[test]
fn solve_residual_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let rows = random_matrix(&mut rng, 4, 5);
        let m = QMatrix::from_rows(&rows);
        // build a guaranteed-consistent rhs
        let x0: Vec<Rat> = (0..5).map(|_| rat(rng.gen_range(-3..=3))).collect();
        let b = m.mul_vec(&x0);
        let x = m.solve_linear(&b).expect("consistent by construction");
        assert_eq!(m.mul_vec(&x), b);
    }
}
