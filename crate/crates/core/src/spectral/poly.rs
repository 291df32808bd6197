//! Dense integer polynomials (ascending coefficients) with the exact tools the root
//! classifier needs: division, gcd, squarefree parts, cyclotomics and Sturm counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// x - r
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients reversed: x^deg p(1/x).
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let s = if self.lc().is_negative() { -g } else { g };
        Self::new(self.coeffs.iter().map(|c| c / &s).collect())
    }

    fn to_rat(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    }

    fn from_rat(r: &[BigRational]) -> Self {
        let den = r.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Self::new(r.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect()).primitive()
    }

    /// Exact quotient if `d` divides `self` over the integers.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = rat_divmod(&self.to_rat(), &d.to_rat());
        if !r.iter().all(Zero::is_zero) || !q.iter().all(|c| c.is_integer()) {
            return None;
        }
        Some(Self::new(q.iter().map(|c| c.to_integer()).collect()))
    }

    pub fn divides(&self, p: &Self) -> bool {
        p.exact_div(self).is_some()
    }

    /// Primitive gcd over Q.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = rat_gcd(&self.to_rat(), &other.to_rat());
        if g.is_empty() {
            return Self::new(vec![]);
        }
        Self::from_rat(&g)
    }

    /// Yun's squarefree decomposition: primitive factors paired with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.to_rat();
        let fp = self.derivative().to_rat();
        let a = rat_gcd(&f, &fp);
        let mut b = rat_divmod(&f, &a).0;
        let c = rat_divmod(&fp, &a).0;
        let mut d = rat_sub(&c, &rat_derivative(&b));
        let mut i = 1;
        while b.len() > 1 {
            let a = rat_gcd(&b, &d);
            if a.len() > 1 {
                out.push((Self::from_rat(&a), i));
            }
            b = rat_divmod(&b, &a).0;
            let c = rat_divmod(&d, &a).0;
            d = rat_sub(&c, &rat_derivative(&b));
            i += 1;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).cloned().unwrap_or_default()
                        - other.coeffs.get(i).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn sturm_count(&self, a: &BigRational, b: &BigRational) -> usize {
        let mut seq = vec![self.to_rat(), self.derivative().to_rat()];
        trim(seq.last_mut().unwrap());
        while !seq.last().unwrap().is_empty() {
            let n = seq.len();
            let (_, r) = rat_divmod(&seq[n - 2], &seq[n - 1]);
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        seq.pop();
        let changes = |x: &BigRational| {
            let vals: Vec<BigRational> = seq
                .iter()
                .map(|p| p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c))
                .filter(|v| !v.is_zero())
                .collect();
            vals.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
        };
        changes(a).saturating_sub(changes(b))
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    trim(&mut out);
    out
}

fn rat_derivative(a: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect()
}

/// Monic gcd; empty when both inputs vanish.
fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = rat_divmod(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lc) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lc;
        }
    }
    a
}

fn rat_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r: Vec<BigRational> = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by the zero polynomial");
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The m-th cyclotomic polynomial.
pub fn cyclotomic(m: u64) -> IntPoly {
    let mut c = vec![BigInt::zero(); m as usize + 1];
    c[0] = BigInt::from(-1);
    c[m as usize] = BigInt::one();
    let mut p = IntPoly::new(c);
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = p.exact_div(&cyclotomic(d)).expect("cyclotomic factorization");
        }
    }
    p
}

/// All m with phi(m) <= n, ascending.
pub fn cyclotomic_indices(n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![];
    }
    // phi(m) >= sqrt(m/2), so m <= 2 n^2 suffices
    let bound = 2 * (n as u64) * (n as u64) + 2;
    (1..=bound).filter(|&m| euler_phi(m) <= n as u64).collect()
}

/// For a palindromic polynomial h of degree 2m, returns r with h(x) = x^m r(x + 1/x).
pub fn palindromic_trace_poly(h: &IntPoly) -> IntPoly {
    let c = h.coeffs();
    let m = h.degree() / 2;
    // D_0 = 2, D_1 = t, D_{j+1} = t D_j - D_{j-1}
    let mut dickson = vec![IntPoly::from_i64(&[2]), IntPoly::from_i64(&[0, 1])];
    for j in 1..m {
        let next = IntPoly::from_i64(&[0, 1]).mul(&dickson[j]).sub(&dickson[j - 1]);
        dickson.push(next);
    }
    let mut r = IntPoly::new(vec![c[m].clone()]);
    for j in 1..=m {
        let term = IntPoly::new(dickson[j].coeffs().iter().map(|d| d * &c[m + j]).collect());
        r = r.sub(&IntPoly::new(term.coeffs().iter().map(|x| -x).collect()));
    }
    r
}

/// Number of roots on the unit circle of a squarefree integer polynomial, decided exactly.
///
/// Unit-circle roots are shared with the reciprocal polynomial; after removing the factors
/// x - 1 and x + 1 the common part is palindromic and its roots on the circle correspond to the
/// real roots of its trace polynomial inside (-2, 2).
pub fn unit_circle_root_count(s: &IntPoly) -> usize {
    if s.degree() == 0 {
        return 0;
    }
    let mut g = s.gcd(&s.reciprocal());
    let mut count = 0;
    for r in [1, -1] {
        let lin = IntPoly::linear_root(r);
        if let Some(q) = g.exact_div(&lin) {
            g = q;
            count += 1;
        }
    }
    if g.degree() == 0 {
        return count;
    }
    let t = palindromic_trace_poly(&g);
    let two = BigRational::from_integer(BigInt::from(2));
    count + 2 * t.sturm_count(&-two.clone(), &two)
}
