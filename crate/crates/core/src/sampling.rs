//! Random matrix generators for batch experiments and property checks.

use num_bigint::BigInt;
use rand::Rng;

use crate::exactlinalg::Matrix;
use crate::scalar::log2_abs;

pub fn random_int_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<BigInt> {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect();
    Matrix::from_rows(rows).expect("square")
}

/// Elementary matrix I + e * E_ij.
pub fn elementary(n: usize, i: usize, j: usize, e: i64) -> Matrix<BigInt> {
    let mut m = Matrix::identity(n);
    m.set(i, j, BigInt::from(e));
    m
}

/// Word in E12^e and E21^e, alternating, with exponents in +-{1,2,3}.
///
/// Lengths are drawn uniformly from 1..=max_len; the word is truncated as soon as the next
/// letter would push the max-entry norm above `max_norm`.
pub fn random_sl2_word<R: Rng>(rng: &mut R, max_len: usize, max_norm: f64) -> Matrix<BigInt> {
    let len = rng.gen_range(1..=max_len);
    let mut m = Matrix::identity(2);
    let mut upper = rng.gen_bool(0.5);
    for _ in 0..len {
        let e = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let step = if upper { elementary(2, 0, 1, e) } else { elementary(2, 1, 0, e) };
        let next = m.mul(&step).expect("2x2");
        if log2_abs(&next.max_abs()) > max_norm.log2() {
            break;
        }
        m = next;
        upper = !upper;
    }
    m
}

/// Product of random elementary matrices in SL(n, Z).
pub fn random_sln<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Matrix<BigInt> {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let e = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
        m = m.mul(&elementary(n, i, j, e)).expect("square");
    }
    m
}
