//! Eigenvalue analytics for integer matrices.
//!
//! Unit-circle membership is decided exactly: zero roots and cyclotomic factors are split off
//! the characteristic polynomial, and for every remaining squarefree factor the number of roots
//! on the circle is counted with a Sturm sequence. Floating point only locates roots.

pub mod poly;
pub mod roots;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactlinalg::{charpoly, coker_structure, mat_pow, rank, LinalgError, Matrix};
use crate::scalar::{ln_abs, Real};
use poly::{cyclotomic, cyclotomic_indices, unit_circle_root_count, IntPoly};
use roots::enclose_roots;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("root separation not reached within {0} iterations")]
    PrecisionExhausted(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleStatus {
    Inside,
    On,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootInfo<R> {
    pub value: Complex<R>,
    pub radius: R,
    pub multiplicity: usize,
    pub status: CircleStatus,
    /// Known in closed form (zero or a root of unity).
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSummary<R> {
    /// det(xI - A), ascending coefficients.
    pub charpoly: Vec<BigInt>,
    pub roots: Vec<RootInfo<R>>,
    pub rho: R,
    /// Sum of ln|lambda| over eigenvalues outside the unit circle, with multiplicity.
    pub log_sum: R,
    /// Every eigenvalue lies on the unit circle.
    pub unit_root_flag: bool,
}

impl<R: Real> SpectralSummary<R> {
    pub fn dim(&self) -> usize {
        self.charpoly.len() - 1
    }

    /// Largest inclusion radius relative to the modulus, over roots off the circle.
    pub fn relative_radius(&self) -> R {
        self.roots
            .iter()
            .filter(|r| !r.exact)
            .map(|r| r.radius / (r.value.norm() - r.radius).max(R::min_positive_value()))
            .fold(R::zero(), R::max)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { max_iterations: 2000 }
    }
}

fn lit<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("literal fits")
}

pub fn analyze(a: &Matrix<BigInt>) -> Result<SpectralSummary<f64>, SpectralError> {
    analyze_with(a, RootConfig::default())
}

pub fn analyze_with<R: Real>(a: &Matrix<BigInt>, cfg: RootConfig) -> Result<SpectralSummary<R>, SpectralError> {
    let cp = charpoly(a)?;
    analyze_poly(&cp, cfg)
}

/// Spectral summary of the roots of a monic integer polynomial.
pub fn analyze_poly<R: Real>(cp: &[BigInt], cfg: RootConfig) -> Result<SpectralSummary<R>, SpectralError> {
    let n = cp.len() - 1;
    let mut roots = Vec::new();
    let zeros = cp.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(RootInfo {
            value: Complex::new(R::zero(), R::zero()),
            radius: R::zero(),
            multiplicity: zeros,
            status: CircleStatus::Inside,
            exact: true,
        });
    }
    let mut rest = IntPoly::new(cp[zeros..].to_vec());
    let tau = R::PI() * lit::<R>(2.0);
    for m in cyclotomic_indices(n) {
        if rest.degree() == 0 {
            break;
        }
        let phi = cyclotomic(m);
        let mut mult = 0;
        while let Some(q) = rest.exact_div(&phi) {
            rest = q;
            mult += 1;
        }
        if mult == 0 {
            continue;
        }
        for k in 1..=m {
            if num_integer::gcd(k, m) == 1 {
                let theta = tau * lit::<R>(k as f64) / lit::<R>(m as f64);
                roots.push(RootInfo {
                    value: Complex::from_polar(R::one(), theta),
                    radius: lit::<R>(4.0) * R::epsilon(),
                    multiplicity: mult,
                    status: CircleStatus::On,
                    exact: true,
                });
            }
        }
    }
    for (factor, mult) in rest.squarefree_decomposition() {
        let enc = enclose_roots::<R>(&factor, cfg.max_iterations)
            .ok_or(SpectralError::PrecisionExhausted(cfg.max_iterations))?;
        let on_count = unit_circle_root_count(&factor);
        // the on_count enclosures closest to the circle hold the circle roots; the rest must
        // be certified off it
        let mut order: Vec<usize> = (0..enc.len()).collect();
        let dist = |i: usize| (enc[i].center.norm() - R::one()).abs();
        order.sort_by(|&i, &j| dist(i).partial_cmp(&dist(j)).expect("finite"));
        let mut status = vec![CircleStatus::On; enc.len()];
        for &i in &order[on_count..] {
            if dist(i) <= enc[i].radius {
                return Err(SpectralError::PrecisionExhausted(cfg.max_iterations));
            }
            status[i] = if enc[i].center.norm() > R::one() {
                CircleStatus::Outside
            } else {
                CircleStatus::Inside
            };
        }
        for (e, s) in enc.into_iter().zip(status) {
            roots.push(RootInfo {
                value: e.center,
                radius: e.radius,
                multiplicity: mult,
                status: s,
                exact: false,
            });
        }
    }
    let rho = roots
        .iter()
        .map(|r| if r.status == CircleStatus::On { R::one() } else { r.value.norm() })
        .fold(R::zero(), R::max);
    let log_sum = roots
        .iter()
        .filter(|r| r.status == CircleStatus::Outside)
        .map(|r| r.value.norm().ln() * lit::<R>(r.multiplicity as f64))
        .fold(R::zero(), |a, b| a + b);
    let unit_root_flag = roots.iter().all(|r| r.status == CircleStatus::On);
    Ok(SpectralSummary {
        charpoly: cp.to_vec(),
        roots,
        rho,
        log_sum,
        unit_root_flag,
    })
}

/// Topological entropy of the induced torus map (natural log).
pub fn entropy(a: &Matrix<BigInt>) -> Result<f64, SpectralError> {
    Ok(analyze(a)?.log_sum)
}

/// Sauer coefficient 2 / (n (n+1) ln(n+1)).
pub fn sauer_coefficient(n: usize) -> f64 {
    let n = n as f64;
    2.0 / (n * (n + 1.0) * (n + 1.0).ln())
}

pub fn fv_lower_bound(a: &Matrix<BigInt>, n: usize) -> Result<f64, SpectralError> {
    Ok(sauer_coefficient(n) * entropy(a)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasicInequalities {
    pub ln_rho: f64,
    pub entropy: f64,
    pub n_ln_rho: f64,
    /// Allowance from the inclusion radii.
    pub slack: f64,
    pub left_holds: bool,
    pub right_holds: bool,
}

/// ln rho <= entropy <= n ln rho. The right inequality fails exactly for nilpotent matrices.
pub fn basic_inequalities(a: &Matrix<BigInt>, n: usize) -> Result<BasicInequalities, SpectralError> {
    let s = analyze(a)?;
    let ln_rho = s.rho.ln();
    let n_ln_rho = n as f64 * ln_rho;
    let slack = (n as f64 + 1.0) * (s.relative_radius() + 1e-12);
    Ok(BasicInequalities {
        ln_rho,
        entropy: s.log_sum,
        n_ln_rho,
        slack,
        left_holds: ln_rho <= s.log_sum + slack,
        right_holds: s.log_sum <= n_ln_rho + slack,
    })
}

/// Exact test for an eigenvalue that is a root of unity.
pub fn has_root_of_unity_eigenvalue(a: &Matrix<BigInt>) -> Result<bool, SpectralError> {
    let cp = IntPoly::new(charpoly(a)?);
    Ok(cyclotomic_indices(a.rows()).into_iter().any(|m| cyclotomic(m).divides(&cp)))
}

/// ||A^j||^(1/j) for j = 1..=j_max, with the max-entry norm.
pub fn gelfand_sequence(a: &Matrix<BigInt>, j_max: usize) -> Result<Vec<f64>, SpectralError> {
    let mut p = a.clone();
    let mut out = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        if j > 1 {
            p = p.mul(a)?;
        }
        let m = p.max_abs();
        out.push(if m.is_zero() { 0.0 } else { (ln_abs(&m) / j as f64).exp() });
    }
    Ok(out)
}

/// Natural log of k^(a-g) * prod_{lambda != 1} |lambda^k - 1| / |lambda - 1|, where a and g are
/// the algebraic and geometric multiplicities of the eigenvalue 1. Returns `-inf` when some
/// lambda^k = 1 with lambda != 1.
pub fn ck_det_formula_ln(a: &Matrix<BigInt>, k: u64) -> Result<f64, SpectralError> {
    let s = analyze(a)?;
    let n = a.rows();
    let mut total = 0.0;
    let mut alg = 0;
    for r in &s.roots {
        let is_one = r.exact && r.status == CircleStatus::On && (r.value - Complex::new(1.0, 0.0)).norm() < 1e-12;
        if is_one {
            alg = r.multiplicity;
            continue;
        }
        let lk = pow_complex(r.value, k);
        let num = (lk - Complex::new(1.0, 0.0)).norm();
        let den = (r.value - Complex::new(1.0, 0.0)).norm();
        let term = if r.exact && num < 1e-9 { f64::NEG_INFINITY } else { num.ln() - den.ln() };
        total += term * r.multiplicity as f64;
    }
    let ia = Matrix::<BigInt>::identity(n).sub(a)?;
    let geo = n - rank(&ia);
    Ok(total + (alg - geo) as f64 * (k as f64).ln())
}

pub fn ck_det_formula(a: &Matrix<BigInt>, k: u64) -> Result<f64, SpectralError> {
    Ok(ck_det_formula_ln(a, k)?.exp())
}

fn pow_complex(z: Complex<f64>, k: u64) -> Complex<f64> {
    if z.norm() == 0.0 {
        return if k == 0 { Complex::new(1.0, 0.0) } else { z };
    }
    Complex::from_polar(z.norm().powf(k as f64), z.arg() * k as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub k: u64,
    pub invariant_factors: Vec<BigInt>,
    pub torsion_order: BigInt,
    pub free_rank: usize,
    /// det(A^k - I) != 0; only these rows enter limit reporting.
    pub full_rank: bool,
    pub log_tors_over_k: f64,
    /// Entropy of A, the expected limit of log_tors_over_k.
    pub target: f64,
}

/// Torsion of H_1 of the k-fold cyclic cover's mapping torus, via coker(A^k - I).
pub fn torsion_growth_table(a: &Matrix<BigInt>, k_max: u64) -> Result<Vec<GrowthRow>, SpectralError> {
    let target = entropy(a)?;
    let n = a.rows();
    let mut powers = Vec::with_capacity(k_max as usize);
    let mut p = Matrix::<BigInt>::identity(n);
    for _ in 0..k_max {
        p = p.mul(a)?;
        powers.push(p.clone());
    }
    let rows = powers
        .into_par_iter()
        .enumerate()
        .map(|(i, pk)| {
            let k = i as u64 + 1;
            let b = pk.sub(&Matrix::identity(n)).expect("square");
            let cs = coker_structure(&b);
            GrowthRow {
                k,
                log_tors_over_k: ln_abs(&cs.torsion_order) / k as f64,
                full_rank: cs.free_rank == 0,
                invariant_factors: cs.torsion_factors,
                torsion_order: cs.torsion_order,
                free_rank: cs.free_rank,
                target,
            }
        })
        .collect();
    Ok(rows)
}

/// |det(A^k - I)| computed exactly, for cross-checks.
pub fn det_power_minus_identity(a: &Matrix<BigInt>, k: u64) -> Result<BigInt, SpectralError> {
    let n = a.rows();
    let b = mat_pow(a, k)?.sub(&Matrix::identity(n))?;
    Ok(crate::exactlinalg::det_exact(&b)?.abs())
}

/// Closed form of the spectral radius of [[i+1, i], [1, 1]].
pub fn family_rho(i: u64) -> f64 {
    let i = i as f64;
    (i + 2.0 + (i * i + 4.0 * i).sqrt()) / 2.0
}
