//! Exact integer linear algebra.

mod matrix;
mod normal_form;

use thiserror::Error;

pub use matrix::Matrix;
pub use normal_form::{coker_from_snf, coker_structure, hnf, snf, CokernelStructure, HnfResult, SnfResult};

use crate::scalar::Int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

fn require_square<T: Int>(a: &Matrix<T>) -> Result<usize, LinalgError> {
    if a.is_square() {
        Ok(a.rows())
    } else {
        Err(LinalgError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        })
    }
}

/// Solves `A x = b` over the integers. `Ok(None)` means b is not in the column lattice.
pub fn solve_diophantine<T: Int>(a: &Matrix<T>, b: &[T]) -> Result<Option<Vec<T>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let res = hnf(a);
    let mut r = b.to_vec();
    let mut y = vec![T::zero(); a.cols()];
    for &(pr, pc) in &res.pivots {
        let piv = res.h.get(pr, pc);
        if !r[pr].is_multiple_of(piv) {
            return Ok(None);
        }
        let c = r[pr].clone() / piv.clone();
        if c.is_zero() {
            continue;
        }
        for (i, ri) in r.iter_mut().enumerate().skip(pr) {
            let h = res.h.get(i, pc);
            if !h.is_zero() {
                *ri = ri.clone() - c.clone() * h.clone();
            }
        }
        y[pc] = c;
    }
    if r.iter().any(|v| !v.is_zero()) {
        return Ok(None);
    }
    let x = res.u.mul_vec(&y)?;
    debug_assert_eq!(a.mul_vec(&x)?, b);
    Ok(Some(x))
}

/// Determinant by Bareiss fraction-free elimination.
pub fn det_exact<T: Int>(a: &Matrix<T>) -> Result<T, LinalgError> {
    let n = require_square(a)?;
    if n == 0 {
        return Ok(T::one());
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                return Ok(T::zero());
            };
            m.swap_rows(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(i, j).clone() * m.get(k, k).clone()
                    - m.get(i, k).clone() * m.get(k, j).clone())
                    / prev.clone();
                m.set(i, j, v);
            }
        }
        prev = m.get(k, k).clone();
    }
    Ok(sign * m.get(n - 1, n - 1).clone())
}

/// Characteristic polynomial det(xI - A), coefficients in ascending degree (monic).
///
/// Faddeev-LeVerrier; every division by k is exact, so all intermediates stay integral.
pub fn charpoly<T: Int>(a: &Matrix<T>) -> Result<Vec<T>, LinalgError> {
    let n = require_square(a)?;
    let mut c = vec![T::zero(); n + 1];
    c[n] = T::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m)?;
        for i in 0..n {
            let v = next.get(i, i).clone() + c[n - k + 1].clone();
            next.set(i, i, v);
        }
        m = next;
        let tr = a.mul(&m)?.trace();
        c[n - k] = -(tr / T::from_small(k as i64));
    }
    Ok(c)
}

/// A^k by binary powering.
pub fn mat_pow<T: Int>(a: &Matrix<T>, mut k: u64) -> Result<Matrix<T>, LinalgError> {
    let n = require_square(a)?;
    let mut result = Matrix::identity(n);
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = result.mul(&base)?;
        }
        k >>= 1;
        if k > 0 {
            base = base.mul(&base)?;
        }
    }
    Ok(result)
}

pub fn rank<T: Int>(a: &Matrix<T>) -> usize {
    hnf(a).rank()
}

/// Evaluates an integer polynomial (ascending coefficients) at a square matrix.
pub fn poly_at_matrix<T: Int>(coeffs: &[T], a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let n = require_square(a)?;
    let mut acc = Matrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = acc.mul(a)?.add(&Matrix::identity(n).scale(c))?;
    }
    Ok(acc)
}

/// Primitive integer vector spanning part of the kernel of `a`, if the kernel is nonzero.
pub fn kernel_vector<T: Int>(a: &Matrix<T>) -> Option<Vec<T>> {
    let res = hnf(a);
    let free = (0..a.cols()).find(|c| res.pivots.iter().all(|&(_, pc)| pc != *c))?;
    let v = res.u.column(free);
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    Some(v.into_iter().map(|x| x / g.clone()).collect())
}
