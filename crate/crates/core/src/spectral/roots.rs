//! Simultaneous root iteration with a-posteriori inclusion disks.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::ToPrimitive;

use super::poly::IntPoly;
use crate::scalar::Real;

/// Approximate root with a radius such that the disk around it holds exactly one true root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure<R> {
    pub center: Complex<R>,
    pub radius: R,
}

fn to_real<R: Real>(c: &BigInt) -> Option<R> {
    R::from_f64(c.to_f64()?).filter(|v| v.is_finite())
}

fn lit<R: Real>(v: f64) -> R {
    R::from_f64(v).expect("literal fits")
}

/// Horner value and a bound on its rounding error (coefficient conversion included).
fn eval_with_error<R: Real>(c: &[R], z: Complex<R>) -> (Complex<R>, R) {
    let d = c.len();
    let mut v = Complex::new(R::zero(), R::zero());
    let mut mag = R::zero();
    let az = z.norm();
    for &ck in c.iter().rev() {
        v = v * z + Complex::new(ck, R::zero());
        mag = mag * az + ck.abs();
    }
    let gamma = lit::<R>(4.0 * d as f64 + 8.0) * R::epsilon();
    (v, gamma * mag)
}

fn eval_derivative<R: Real>(c: &[R], z: Complex<R>) -> Complex<R> {
    let mut v = Complex::new(R::zero(), R::zero());
    for (k, &ck) in c.iter().enumerate().skip(1).rev() {
        v = v * z + Complex::new(ck * lit::<R>(k as f64), R::zero());
    }
    v
}

fn initial_guesses<R: Real>(c: &[R]) -> Vec<Complex<R>> {
    let d = c.len() - 1;
    let lc = c[d].abs();
    // Fujiwara-style bound on the root moduli
    let mut bound = R::zero();
    for (k, ck) in c.iter().enumerate().take(d) {
        let r = (ck.abs() / lc).powf(R::one() / lit::<R>((d - k) as f64));
        bound = bound.max(r);
    }
    let radius = (bound * lit::<R>(2.0)).max(lit::<R>(1e-3)) * lit::<R>(0.5);
    let tau = R::PI() * lit::<R>(2.0);
    (0..d)
        .map(|j| {
            let theta = tau * lit::<R>(j as f64) / lit::<R>(d as f64) + lit::<R>(0.4);
            Complex::from_polar(radius, theta)
        })
        .collect()
}

/// Inclusion radii for all approximations, or `None` if some radius is not finite.
fn inclusion_radii<R: Real>(c: &[R], z: &[Complex<R>]) -> Option<Vec<R>> {
    let d = z.len();
    let lc = c[d];
    let safety = R::one() + lit::<R>(8.0 * d as f64 + 8.0) * R::epsilon();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let (v, err) = eval_with_error(c, z[i]);
        let mut den = Complex::new(lc, R::zero());
        for j in 0..d {
            if j != i {
                den *= z[i] - z[j];
            }
        }
        let r = lit::<R>(d as f64) * (v.norm() + err) / den.norm() * safety;
        if !r.is_finite() {
            return None;
        }
        out.push(r);
    }
    Some(out)
}

fn disjoint<R: Real>(z: &[Complex<R>], r: &[R]) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() <= r[i] + r[j] {
                return false;
            }
        }
    }
    true
}

/// Roots of a squarefree integer polynomial with pairwise disjoint inclusion disks.
///
/// Returns `None` if the iteration cap is reached before the disks separate.
pub fn enclose_roots<R: Real>(p: &IntPoly, max_iterations: usize) -> Option<Vec<Enclosure<R>>> {
    let d = p.degree();
    if d == 0 {
        return Some(vec![]);
    }
    let c: Vec<R> = p.coeffs().iter().map(to_real).collect::<Option<_>>()?;
    if d == 1 {
        let center = Complex::new(-c[0] / c[1], R::zero());
        let radius = center.norm() * lit::<R>(4.0) * R::epsilon();
        return Some(vec![Enclosure { center, radius }]);
    }
    let mut z = initial_guesses(&c);
    let tiny = R::epsilon() * lit::<R>(4.0);
    for iter in 0..max_iterations {
        let mut max_step = R::zero();
        for i in 0..d {
            let (v, _) = eval_with_error(&c, z[i]);
            let dv = eval_derivative(&c, z[i]);
            if v.norm() == R::zero() {
                continue;
            }
            let w = v / dv;
            let mut s = Complex::new(R::zero(), R::zero());
            for j in 0..d {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = w / (Complex::new(R::one(), R::zero()) - w * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (z[i].norm() + R::one()));
            }
        }
        let converged = max_step <= tiny;
        if converged || iter % 8 == 7 {
            if let Some(r) = inclusion_radii(&c, &z) {
                if disjoint(&z, &r) {
                    return Some(z.into_iter().zip(r).map(|(center, radius)| Enclosure { center, radius }).collect());
                }
            }
            if converged && iter > 64 {
                return None;
            }
        }
    }
    None
}
