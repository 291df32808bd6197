//! Filling certificates: exact witnesses for boundaries of parallelogram cycles.

pub mod base;
mod certificate;
pub mod engine;
pub mod expr;
pub mod io;
pub mod solver;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::chains::ChainError;
use crate::exactlinalg::{mat_pow, Matrix};

pub use base::{base_certificate, BaseKey, CertCache};
pub use certificate::{verify_certificate, FaceMismatch, FillingCertificate, Verification};
pub use engine::{
    combine_rects, paral_to_rects, rect_to_unit, reduce_parallelogram, s1_reduce, slide, slim_reduce,
    ReductionReport, S1Check, S1Trace, SignedRect,
};
pub use expr::{CycleExpr, CycleTerm, Fill, MoveKind, MovePiece, MoveRecord};
pub use solver::fill_by_solve;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FillError {
    #[error("input chain is not a cycle")]
    NotACycle,
    #[error("no filling found with box size up to {box_size}")]
    Unfillable { box_size: u32 },
    #[error("candidate set too large")]
    CandidateSetTooLarge,
    #[error("integer overflow in the sparse solver")]
    Overflow,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("unsupported base key {0}")]
    UnsupportedKey(String),
    #[error("generators are linearly independent")]
    NotDependent,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// One power in [`fv_upper_experiment`].
#[derive(Clone, Debug)]
pub struct FvRow {
    pub j: u64,
    pub cost: BigInt,
    pub cost_over_j: f64,
    pub log2_norm: f64,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct FvUpperReport {
    pub rows: Vec<FvRow>,
    /// Least-squares slope and intercept of cost against log2 of the sup norm.
    pub slope: f64,
    pub intercept: f64,
}

/// Reduces A^j for j = 1..=j_max in parallel; rows come back in order of j.
pub fn fv_upper_experiment(a: &Matrix<BigInt>, j_max: u64) -> Result<FvUpperReport, FillError> {
    let rows = (1..=j_max)
        .into_par_iter()
        .map(|j| {
            let p = mat_pow(a, j).map_err(|_| FillError::UnsupportedDimension(a.rows()))?;
            let r = reduce_parallelogram(&p)?;
            let cost_f = crate::scalar::ln_abs(&r.cost).exp();
            Ok(FvRow {
                j,
                cost_over_j: if r.cost == BigInt::from(0) { 0.0 } else { cost_f / j as f64 },
                log2_norm: r.log2_norm,
                verified: r.certificate.verify().ok,
                cost: r.cost,
            })
        })
        .collect::<Result<Vec<_>, FillError>>()?;
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.log2_norm, r.cost_over_j * r.j as f64))
        .collect();
    let (slope, intercept) = least_squares(&pts);
    Ok(FvUpperReport { rows, slope, intercept })
}

/// Slope and intercept of the ordinary least-squares line; flat when x has no spread.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.is_empty() {
        return (0.0, 0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Affine fit minimising the largest relative residual |y - f(x)| / f(x).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_rel_residual: f64,
}

/// Bisects on the residual bound t; for fixed t the feasible (slope, intercept) set is an
/// intersection of strips, and its width in the intercept is concave in the slope.
pub fn minimax_relative_fit(pts: &[(f64, f64)]) -> RelativeFit {
    let width_at = |t: f64, s: f64| {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for &(x, y) in pts {
            lo = lo.max(y / (1.0 + t) - s * x);
            if t < 1.0 {
                hi = hi.min(y / (1.0 - t) - s * x);
            }
        }
        (hi - lo, lo)
    };
    let best_slope = |t: f64| {
        let ymax = pts.iter().map(|p| p.1.abs()).fold(1.0, f64::max);
        let xspan = pts.iter().map(|p| p.0.abs()).fold(1e-9, f64::max);
        let (mut a, mut b) = (-4.0 * ymax / xspan, 4.0 * ymax / xspan);
        for _ in 0..200 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if width_at(t, m1).0 < width_at(t, m2).0 {
                a = m1;
            } else {
                b = m2;
            }
        }
        let s = 0.5 * (a + b);
        let (w, lo) = width_at(t, s);
        (w, s, lo)
    };
    if pts.is_empty() {
        return RelativeFit { slope: 0.0, intercept: 0.0, max_rel_residual: 0.0 };
    }
    let (mut lo_t, mut hi_t) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo_t + hi_t);
        if best_slope(mid).0 >= 0.0 {
            hi_t = mid;
        } else {
            lo_t = mid;
        }
    }
    let (_, slope, intercept) = best_slope(hi_t);
    let max_rel_residual = pts
        .iter()
        .map(|&(x, y)| {
            let f = slope * x + intercept;
            if f > 0.0 { (y - f).abs() / f } else { f64::INFINITY }
        })
        .fold(0.0, f64::max);
    RelativeFit { slope, intercept, max_rel_residual }
}
