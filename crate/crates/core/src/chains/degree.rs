use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ChainError, TorusChain};
use crate::exactlinalg::{det_exact, Matrix};
use crate::scalar::Int;

fn ceil_div<T: Int>(p: &T, q: &T) -> T {
    -((-p.clone()).div_floor(q))
}

fn adjugate<T: Int>(e: &Matrix<T>) -> Matrix<T> {
    let n = e.rows();
    if n == 1 {
        return Matrix::identity(1);
    }
    let mut adj = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<Vec<T>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| e.get(r, c).clone()).collect())
                .collect();
            let minor = det_exact(&Matrix::from_rows(rows).expect("square")).expect("square");
            let cof = if (i + j) % 2 == 0 { minor } else { -minor };
            adj.set(j, i, cof);
        }
    }
    adj
}

/// Integer interval `[lo, hi]` (empty when lo > hi).
struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Int> Interval<T> {
    fn count(&self) -> T {
        if self.hi < self.lo {
            T::zero()
        } else {
            self.hi.clone() - self.lo.clone() + T::one()
        }
    }

    /// Intersects with {t : a + b t > 0} (strict) or {t : a + b t >= 0}.
    fn restrict(&mut self, a: &T, b: &T, strict: bool) {
        if b.is_zero() {
            let ok = if strict { a.is_positive() } else { !a.is_negative() };
            if !ok {
                self.hi = self.lo.clone() - T::one();
            }
        } else if b.is_positive() {
            let lo = if strict {
                (-a.clone()).div_floor(b) + T::one()
            } else {
                ceil_div(&-a.clone(), b)
            };
            self.lo = self.lo.clone().max(lo);
        } else {
            let nb = -b.clone();
            let hi = if strict {
                ceil_div(a, &nb) - T::one()
            } else {
                a.div_floor(&nb)
            };
            self.hi = self.hi.clone().min(hi);
        }
    }
}

/// Local degree of a top-degree chain at a rational point of T^n.
///
/// Each nondegenerate simplex contributes its coefficient times the orientation sign times the
/// number of integer translates of `x` in its interior. Fails with `NonGenericPoint` when a
/// translate of `x` lies on the boundary of some simplex.
pub fn degree_at_point<T: Int>(c: &TorusChain<T>, x: &[Ratio<T>]) -> Result<T, ChainError> {
    let n = c.ambient_dim();
    if c.degree() != n {
        return Err(ChainError::NotTopDegree {
            degree: c.degree(),
            dim: n,
        });
    }
    if x.len() != n {
        return Err(ChainError::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let den = x.iter().fold(T::one(), |l, r| l.lcm(r.denom()));
    let y: Vec<T> = x
        .iter()
        .map(|r| r.numer().clone() * (den.clone() / r.denom().clone()))
        .collect();

    let mut total = T::zero();
    for (s, coeff) in c.iter() {
        let e = s.edge_matrix();
        let d = det_exact(&e).expect("square edge matrix");
        if d.is_zero() {
            continue;
        }
        let sign = d.signum();
        let adj = adjugate(&e);
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for i in 0..n {
            let coords: Vec<T> = s.vertices().map(|v| v[i].clone()).collect();
            let vmin = coords.iter().min().expect("vertices").clone();
            let vmax = coords.iter().max().expect("vertices").clone();
            lo.push(ceil_div(&(vmin * den.clone() - y[i].clone()), &den));
            hi.push((vmax * den.clone() - y[i].clone()).div_floor(&den));
        }
        if (0..n).any(|i| hi[i] < lo[i]) {
            continue;
        }
        let mut m: Vec<T> = lo[..n - 1].to_vec();
        let mut inside = T::zero();
        loop {
            // N_j = alpha_j + beta_j * t for the last coordinate t
            let mut alpha = Vec::with_capacity(n + 1);
            let mut beta = Vec::with_capacity(n + 1);
            alpha.push(T::zero());
            beta.push(T::zero());
            for j in 0..n {
                let mut a = adj.get(j, n - 1).clone() * y[n - 1].clone();
                for l in 0..n - 1 {
                    a = a + adj.get(j, l).clone() * (y[l].clone() + den.clone() * m[l].clone());
                }
                alpha.push(a);
                beta.push(adj.get(j, n - 1).clone() * den.clone());
            }
            let sa = alpha[1..].iter().fold(T::zero(), |acc, v| acc + v.clone());
            let sb = beta[1..].iter().fold(T::zero(), |acc, v| acc + v.clone());
            alpha[0] = den.clone() * d.clone() - sa;
            beta[0] = -sb;
            let mut open = Interval { lo: lo[n - 1].clone(), hi: hi[n - 1].clone() };
            let mut closed = Interval { lo: lo[n - 1].clone(), hi: hi[n - 1].clone() };
            for j in 0..=n {
                let a = alpha[j].clone() * sign.clone();
                let b = beta[j].clone() * sign.clone();
                open.restrict(&a, &b, true);
                closed.restrict(&a, &b, false);
            }
            let oc = open.count();
            if closed.count() != oc {
                return Err(ChainError::NonGenericPoint);
            }
            inside = inside + oc;

            let mut idx = 0;
            loop {
                if idx == n - 1 {
                    break;
                }
                m[idx] = m[idx].clone() + T::one();
                if m[idx] <= hi[idx] {
                    break;
                }
                m[idx] = lo[idx].clone();
                idx += 1;
            }
            if idx == n - 1 {
                break;
            }
        }
        total = total + coeff.clone() * sign * inside;
    }
    Ok(total)
}

/// Draws a rational point with odd denominator of roughly `bits` bits.
pub fn random_generic_point<T: Int, R: Rng>(rng: &mut R, n: usize, bits: u32) -> Vec<Ratio<T>> {
    let span = 1i64 << bits.min(40);
    let den = 2 * rng.gen_range(span / 2..span) + 1;
    (0..n)
        .map(|_| Ratio::new(T::from_small(rng.gen_range(0..den)), T::from_small(den)))
        .collect()
}

/// Degree of a top-degree chain, resampling the point until it is generic.
pub fn degree<T: Int>(c: &TorusChain<T>, seed: u64) -> Result<T, ChainError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64u32 {
        let x = random_generic_point(&mut rng, c.ambient_dim(), 8 + attempt / 2);
        match degree_at_point(c, &x) {
            Err(ChainError::NonGenericPoint) => continue,
            other => return other,
        }
    }
    Err(ChainError::NonGenericPoint)
}
