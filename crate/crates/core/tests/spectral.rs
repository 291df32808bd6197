use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torfill::exactlinalg::{det_exact, mat_pow, Matrix};
use torfill::sampling::{random_int_matrix, random_sln};
use torfill::spectral::poly::{cyclotomic, euler_phi, unit_circle_root_count, IntPoly};
use torfill::spectral::*;
use torfill::IntMatrix;

fn m(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_i64(rows)
}

fn golden_sq() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

fn companion(c: &[i64]) -> IntMatrix {
    // monic, ascending coefficients without the leading 1
    let n = c.len();
    let mut a = Matrix::zeros(n, n);
    for i in 1..n {
        a.set(i, i - 1, BigInt::from(1));
    }
    for (i, &ci) in c.iter().enumerate() {
        a.set(i, n - 1, BigInt::from(-ci));
    }
    a
}

fn is_nilpotent(a: &IntMatrix) -> bool {
    mat_pow(a, a.rows() as u64).unwrap().is_zero()
}

#[test]
fn cat_map_summary() {
    let s = analyze(&m(&[&[2, 1], &[1, 1]])).unwrap();
    assert!((s.rho - golden_sq()).abs() < 1e-12);
    assert!((s.log_sum - 0.9624236501192069).abs() < 1e-12);
    assert!(!s.unit_root_flag);
    assert_eq!(s.charpoly, vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]);
}

#[test]
fn identity_summary() {
    let s = analyze(&Matrix::identity(3)).unwrap();
    assert_eq!(s.rho, 1.0);
    assert_eq!(s.log_sum, 0.0);
    assert!(s.unit_root_flag);
}

#[test]
fn single_precision_path() {
    let s: SpectralSummary<f32> = analyze_with(&m(&[&[2, 1], &[1, 1]]), RootConfig::default()).unwrap();
    assert!((s.rho as f64 - golden_sq()).abs() < 1e-5);
}

#[test]
fn family_closed_form() {
    for i in 1..=50i64 {
        let s = analyze(&m(&[&[i + 1, i], &[1, 1]])).unwrap();
        let want = family_rho(i as u64);
        assert!((s.rho - want).abs() / want < 1e-9, "i = {i}");
        // bracket on log rho: ln i < ln rho < ln(i + 2)
        assert!((i as f64).ln() < s.rho.ln() && s.rho.ln() < ((i + 2) as f64).ln());
    }
}

#[test]
fn entropy_adds_over_blocks() {
    let a = m(&[&[2, 1], &[1, 1]]);
    let b = a.block_diag(&a);
    assert!((entropy(&b).unwrap() - 2.0 * entropy(&a).unwrap()).abs() < 1e-12);
    let lb = fv_lower_bound(&b, 4).unwrap();
    assert!((lb - sauer_coefficient(4) * 1.9248473002384139).abs() < 1e-12);
}

#[test]
fn lower_bound_values() {
    let v = fv_lower_bound(&m(&[&[2, 1], &[1, 1]]), 2).unwrap();
    assert!((v - 2.0 / (6.0 * 3f64.ln()) * 0.9624236501192069).abs() < 1e-12);
    assert!((v - 0.2921).abs() < 1e-4);
    assert_eq!(fv_lower_bound(&Matrix::identity(2), 2).unwrap(), 0.0);
    assert_eq!(fv_lower_bound(&m(&[&[0, -1], &[1, 0]]), 2).unwrap(), 0.0);
}

#[test]
fn salem_roots_are_split_exactly() {
    // Salem polynomial of degree 4: two real roots off the circle, two on it
    let p = [1, -1, -1, -1, 1];
    assert_eq!(unit_circle_root_count(&IntPoly::from_i64(&p)), 2);
    let s = analyze(&companion(&p[..4])).unwrap();
    // the real root above 1, by bisection
    let f = |x: f64| x.powi(4) - x.powi(3) - x * x - x + 1.0;
    let (mut lo, mut hi) = (1.5, 2.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((s.rho - lo).abs() < 1e-10);
    assert!((s.log_sum - lo.ln()).abs() < 1e-10);
    assert_eq!(s.roots.iter().filter(|r| r.status == CircleStatus::On).count(), 2);
}

#[test]
fn unit_circle_counts() {
    assert_eq!(unit_circle_root_count(&IntPoly::from_i64(&[1, -3, 1])), 0);
    assert_eq!(unit_circle_root_count(&cyclotomic(7)), 6);
    assert_eq!(unit_circle_root_count(&IntPoly::from_i64(&[-1, 1])), 1);
    assert_eq!(unit_circle_root_count(&IntPoly::from_i64(&[-2, 0, 1])), 0);
}

#[test]
fn cyclotomic_degrees() {
    for k in 1..40u64 {
        assert_eq!(cyclotomic(k).degree() as u64, euler_phi(k));
    }
    assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
}

#[test]
fn squarefree_parts() {
    // (x - 1)^2 (x + 2)
    let p = IntPoly::from_i64(&[-1, 1]).mul(&IntPoly::from_i64(&[-1, 1])).mul(&IntPoly::from_i64(&[2, 1]));
    let d = p.squarefree_decomposition();
    assert_eq!(d, vec![(IntPoly::from_i64(&[2, 1]), 1), (IntPoly::from_i64(&[-1, 1]), 2)]);
}

#[test]
fn root_of_unity_detection() {
    assert!(has_root_of_unity_eigenvalue(&m(&[&[0, -1], &[1, 0]])).unwrap());
    assert!(!has_root_of_unity_eigenvalue(&m(&[&[2, 1], &[1, 1]])).unwrap());
    assert!(has_root_of_unity_eigenvalue(&Matrix::identity(2)).unwrap());
}

#[test]
fn root_of_unity_matches_power_oracle() {
    // lambda a primitive d-th root of unity with phi(d) <= n iff det(A^d - I) = 0 for such d
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = 2 + (rand::Rng::gen_range(&mut rng, 0..2));
        let a = random_int_matrix(&mut rng, n, 2);
        let oracle = (1..=2 * n * n + 2)
            .filter(|&d| euler_phi(d as u64) <= n as u64)
            .any(|d| {
                let b = mat_pow(&a, d as u64).unwrap().sub(&Matrix::identity(n)).unwrap();
                det_exact(&b).unwrap() == BigInt::from(0)
            });
        assert_eq!(has_root_of_unity_eigenvalue(&a).unwrap(), oracle, "{a}");
    }
}

#[test]
fn basic_inequalities_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for t in 0..500 {
        let n = 1 + t % 4;
        let a = random_int_matrix(&mut rng, n, 5);
        let b = basic_inequalities(&a, n).unwrap();
        assert!(b.left_holds, "{a}: {b:?}");
        if is_nilpotent(&a) {
            assert!(!b.right_holds);
            continue;
        }
        assert!(b.right_holds, "{a}: {b:?}");
        checked += 1;
    }
    assert!(checked > 400);
}

#[test]
fn cat_map_inequalities() {
    let b = basic_inequalities(&m(&[&[2, 1], &[1, 1]]), 2).unwrap();
    assert!((b.ln_rho - b.entropy).abs() < 1e-12);
    assert!((b.n_ln_rho - 1.9248473002384139).abs() < 1e-12);
    let a = m(&[&[2, 1], &[1, 1]]);
    let d = a.block_diag(&a);
    let b = basic_inequalities(&d, 4).unwrap();
    assert!(b.ln_rho < b.entropy - 0.5);
}

#[test]
fn gelfand_values() {
    let a = m(&[&[2, 1], &[1, 1]]);
    let g = gelfand_sequence(&a, 64).unwrap();
    assert!((g[1] - 5f64.sqrt()).abs() < 1e-12);
    assert!((g[63] - golden_sq()).abs() / golden_sq() < 0.1);
    assert!(gelfand_sequence(&Matrix::identity(3), 5).unwrap().iter().all(|&v| v == 1.0));
}

#[test]
fn gelfand_tail_tracks_rho() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    while seen < 50 {
        let n = 2 + seen % 2;
        let a = random_sln(&mut rng, n, 6);
        let s = analyze(&a).unwrap();
        if s.unit_root_flag || s.roots.iter().any(|r| r.status == CircleStatus::On) {
            continue;
        }
        let g = gelfand_sequence(&a, 64).unwrap()[63];
        assert!((g - s.rho).abs() / s.rho < 0.1, "{a}");
        // rho^j <= n * max|entry of A^j|
        assert!(g >= s.rho * (n as f64).powf(-1.0 / 64.0) * (1.0 - 1e-9));
        seen += 1;
    }
}

#[test]
fn ck_formula() {
    let a = m(&[&[2, 1], &[1, 1]]);
    assert!((ck_det_formula(&a, 1).unwrap() - 1.0).abs() < 1e-12);
    assert!((ck_det_formula(&a, 2).unwrap() - 5.0).abs() < 1e-9);
    let u = m(&[&[1, 1], &[0, 1]]);
    for k in 1..6 {
        assert!((ck_det_formula(&u, k).unwrap() - k as f64).abs() < 1e-9);
    }
}

#[test]
fn ck_formula_matches_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    while seen < 40 {
        let a = random_int_matrix(&mut rng, 2 + seen % 2, 3);
        let d1 = det_exact(&a.sub(&Matrix::identity(a.rows())).unwrap()).unwrap();
        if d1 == BigInt::from(0) {
            continue;
        }
        for k in 1..5 {
            let dk = det_power_minus_identity(&a, k).unwrap();
            let want = torfill::scalar::ln_abs(&dk) - torfill::scalar::ln_abs(&d1);
            let got = ck_det_formula_ln(&a, k).unwrap();
            if dk == BigInt::from(0) {
                assert_eq!(got, f64::NEG_INFINITY);
            } else {
                assert!((got - want).abs() < 1e-8, "{a} k={k}: {got} vs {want}");
            }
        }
        seen += 1;
    }
}

#[test]
fn torsion_growth() {
    let a = m(&[&[2, 1], &[1, 1]]);
    let t = torsion_growth_table(&a, 40).unwrap();
    assert_eq!(t[0].torsion_order, BigInt::from(1));
    assert_eq!(t[1].torsion_order, BigInt::from(5));
    let last = &t[39];
    assert!((last.log_tors_over_k - 0.9624236501192069).abs() / 0.9624236501192069 < 0.05);
    // |det(A^k - I)| = tr(A^k) - 2 for this matrix
    for row in &t {
        let p = mat_pow(&a, row.k).unwrap();
        assert_eq!(row.torsion_order, p.trace() - BigInt::from(2));
        assert!(row.full_rank);
    }
}

#[test]
fn torsion_rows_flag_degenerate_powers() {
    let r = m(&[&[0, -1], &[1, 0]]);
    let t = torsion_growth_table(&r, 8).unwrap();
    for row in &t {
        assert_eq!(row.full_rank, row.k % 4 != 0);
    }
}

proptest! {
    #[test]
    fn full_rank_rows_equal_determinant(seed in 0u64..1000, n in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_int_matrix(&mut rng, n, 3);
        for row in torsion_growth_table(&a, 4).unwrap() {
            if row.full_rank {
                prop_assert_eq!(row.torsion_order, det_power_minus_identity(&a, row.k).unwrap());
            }
        }
    }
}
