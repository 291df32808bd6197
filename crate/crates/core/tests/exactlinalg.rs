use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torfill::exactlinalg::*;
use torfill::sampling::random_int_matrix;
use torfill::IntMatrix;

fn m(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_i64(rows)
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_rect<R: Rng>(rng: &mut R, r: usize, c: usize, bound: i64) -> IntMatrix {
    let rows = (0..r)
        .map(|_| (0..c).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect();
    Matrix::from_rows(rows).unwrap()
}

fn unimodular(u: &IntMatrix) -> bool {
    det_exact(u).unwrap().abs() == BigInt::from(1)
}

fn check_hnf(a: &IntMatrix) {
    let r = hnf(a);
    assert_eq!(a.mul(&r.u).unwrap(), r.h);
    assert!(unimodular(&r.u));
    let mut last_row = None;
    for (k, &(pr, pc)) in r.pivots.iter().enumerate() {
        assert_eq!(pc, k);
        assert!(last_row.is_none_or(|l| pr > l));
        last_row = Some(pr);
        let piv = r.h.get(pr, pc);
        assert!(piv.is_positive());
        // zero above the pivot, reduced to its left
        for i in 0..pr {
            assert!(r.h.get(i, pc).is_zero());
        }
        for c in 0..pc {
            let e = r.h.get(pr, c);
            assert!(!e.is_negative() && e < piv);
        }
    }
    for c in r.pivots.len()..a.cols() {
        assert!(r.h.column(c).iter().all(Zero::is_zero));
    }
}

#[test]
fn snf_examples() {
    assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])).diagonal(), big(&[1, 6]));
    assert_eq!(snf(&m(&[&[1, 1], &[1, 0]])).diagonal(), big(&[1, 1]));
    assert_eq!(snf(&Matrix::<BigInt>::zeros(3, 3)).diagonal(), big(&[0, 0, 0]));
    assert_eq!(snf(&m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(), big(&[2, 6, 12]));
}

#[test]
fn hnf_examples() {
    let r = hnf(&Matrix::<BigInt>::identity(3));
    assert_eq!(r.h, Matrix::identity(3));
    assert_eq!(r.u, Matrix::identity(3));
    let r = hnf(&m(&[&[2, 4]]));
    assert_eq!(r.h, m(&[&[2, 0]]));
    check_hnf(&m(&[&[2, 4]]));
    let r = hnf(&m(&[&[0, 1], &[1, 0]]));
    assert_eq!(r.h, Matrix::identity(2));
    assert_eq!(r.u, m(&[&[0, 1], &[1, 0]]));
}

#[test]
fn diophantine_examples() {
    let b = big(&[4, -7, 2]);
    assert_eq!(solve_diophantine(&Matrix::identity(3), &b).unwrap(), Some(b));
    assert_eq!(solve_diophantine(&m(&[&[2]]), &big(&[3])).unwrap(), None);
    let x = solve_diophantine(&m(&[&[2, 3]]), &big(&[1])).unwrap().unwrap();
    assert_eq!(x[0].clone() * 2 + x[1].clone() * 3, BigInt::from(1));
    assert!(solve_diophantine(&m(&[&[2, 3]]), &big(&[1, 2])).is_err());
}

#[test]
fn det_charpoly_pow_examples() {
    let a = m(&[&[2, 1], &[1, 1]]);
    assert_eq!(det_exact(&a).unwrap(), BigInt::from(1));
    assert_eq!(charpoly(&a).unwrap(), big(&[1, -3, 1]));
    assert_eq!(mat_pow(&a, 2).unwrap(), m(&[&[5, 3], &[3, 2]]));
    assert_eq!(mat_pow(&a, 0).unwrap(), Matrix::identity(2));
    assert!(det_exact(&m(&[&[1, 2]])).is_err());
}

#[test]
fn cokernel_examples() {
    let a = m(&[&[2, 1], &[1, 1]]);
    let c = coker_structure(&a.sub(&Matrix::identity(2)).unwrap());
    assert_eq!((c.torsion_order.clone(), c.free_rank), (BigInt::from(1), 0));
    let a2 = mat_pow(&a, 2).unwrap().sub(&Matrix::identity(2)).unwrap();
    assert_eq!(a2, m(&[&[4, 3], &[3, 1]]));
    assert_eq!(coker_structure(&a2).torsion_order, BigInt::from(5));
    let z = coker_structure(&Matrix::<BigInt>::zeros(2, 2));
    assert_eq!((z.torsion_order, z.free_rank), (BigInt::from(1), 2));
    let d = coker_structure(&m(&[&[2, 0], &[0, 4]]));
    assert_eq!(d.torsion_factors, big(&[2, 4]));
}

#[test]
fn torsion_order_is_abs_det() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..500 {
        let a = random_int_matrix(&mut rng, 1 + t % 4, 20);
        let s = snf(&a);
        assert!(s.verify());
        assert!(unimodular(&s.p) && unimodular(&s.q));
        let d = det_exact(&a).unwrap();
        let c = coker_from_snf(&s);
        if d.is_zero() {
            assert!(c.free_rank > 0);
        } else {
            assert_eq!(c.free_rank, 0);
            assert_eq!(c.torsion_order, d.abs());
        }
    }
}

#[test]
fn cayley_hamilton() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for t in 0..200 {
        let a = random_int_matrix(&mut rng, 1 + t % 4, 9);
        let cp = charpoly(&a).unwrap();
        assert!(poly_at_matrix(&cp, &a).unwrap().is_zero());
        // constant term is (-1)^n det A
        let n = a.rows();
        let sign = if n % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        assert_eq!(cp[0], sign * det_exact(&a).unwrap());
    }
}

/// Lattice membership via the Smith form: b is in the column lattice iff each (P b)_i is
/// divisible by d_i, and vanishes where d_i = 0 or beyond the diagonal.
fn snf_member(a: &IntMatrix, b: &[BigInt]) -> bool {
    let s = snf(a);
    let pb = s.p.mul_vec(b).unwrap();
    let diag = s.diagonal();
    pb.iter().enumerate().all(|(i, v)| match diag.get(i) {
        Some(d) if !d.is_zero() => v.is_multiple_of(d),
        _ => v.is_zero(),
    })
}

#[test]
fn diophantine_matches_snf_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut solved = 0;
    for _ in 0..400 {
        let (r, c) = (rng.gen_range(1..4), rng.gen_range(1..5));
        let a = random_rect(&mut rng, r, c, 6);
        let b: Vec<BigInt> = (0..r).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
        let got = solve_diophantine(&a, &b).unwrap();
        assert_eq!(got.is_some(), snf_member(&a, &b), "{a} {b:?}");
        if let Some(x) = got {
            assert_eq!(a.mul_vec(&x).unwrap(), b);
            solved += 1;
        }
    }
    assert!(solved > 50);
}

#[test]
fn diophantine_brute_force_small() {
    // exhaustive search over a box decides membership for tiny systems
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..150 {
        let a = random_rect(&mut rng, 1, 2, 4);
        let b = vec![BigInt::from(rng.gen_range(-6..=6))];
        let (p, q) = (a.get(0, 0).clone(), a.get(0, 1).clone());
        let g = p.gcd(&q);
        let oracle = if g.is_zero() { b[0].is_zero() } else { b[0].is_multiple_of(&g) };
        assert_eq!(solve_diophantine(&a, &b).unwrap().is_some(), oracle);
        let found = (-30..=30).any(|x: i64| (-30..=30).any(|y: i64| p.clone() * x + q.clone() * y == b[0]));
        assert_eq!(found, oracle);
    }
}

#[test]
fn kernel_vectors() {
    let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
    let v = kernel_vector(&a).unwrap();
    assert!(a.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
    assert!(kernel_vector(&Matrix::<BigInt>::identity(2)).is_none());
    assert_eq!(rank(&a), 1);
}

#[test]
fn generic_over_machine_integers() {
    let a: Matrix<i64> = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
    assert_eq!(det_exact(&a).unwrap(), 1);
    assert_eq!(snf(&Matrix::<i128>::from_i64(&[&[2, 0], &[0, 3]])).diagonal(), vec![1i128, 6]);
    assert_eq!(a.to_big(), m(&[&[2, 1], &[1, 1]]));
}

proptest! {
    #[test]
    fn hnf_invariants(seed in 0u64..10_000, r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_hnf(&random_rect(&mut rng, r, c, 12));
    }

    #[test]
    fn snf_invariants_rectangular(seed in 0u64..10_000, r in 1usize..5, c in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_rect(&mut rng, r, c, 12);
        let s = snf(&a);
        prop_assert!(s.verify());
        prop_assert_eq!(s.rank(), rank(&a));
    }

    #[test]
    fn pow_is_repeated_product(seed in 0u64..1000, k in 0u64..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_int_matrix(&mut rng, 3, 3);
        let mut want = Matrix::identity(3);
        for _ in 0..k {
            want = want.mul(&a).unwrap();
        }
        prop_assert_eq!(mat_pow(&a, k).unwrap(), want);
    }
}
