//! Moves and reductions. Every move is a pushed base certificate followed by prism lifts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::base::{base_certificate, BaseKey};
use super::expr::{CycleExpr, Fill, MoveKind, MovePiece};
use super::FillError;
use crate::chains::{perm_sign, LinearTorusMap};
use crate::exactlinalg::{kernel_vector, rank, Matrix};
use crate::Chain;

type V = Vec<BigInt>;

fn unit(n: usize, i: usize) -> V {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

fn scale(v: &[BigInt], c: &BigInt) -> V {
    v.iter().map(|x| x * c).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> V {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[BigInt], b: &[BigInt]) -> V {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn replaced(g: &[V], j: usize, v: V) -> Vec<V> {
    let mut h = g.to_vec();
    h[j] = v;
    h
}

fn scalar(x: &BigInt) -> V {
    vec![x.clone()]
}

/// Pushes the base certificate of `key` along `active`, lifts by the generators of `g`
/// outside `positions`, and reorders so the base slots sit at `positions`.
pub fn apply_base(
    key: BaseKey,
    kind: MoveKind,
    params: Vec<BigInt>,
    active: &[V],
    positions: &[usize],
    g: &[V],
) -> Result<MovePiece, FillError> {
    let cert = base_certificate(key)?;
    let universal = key.universal_cycle()?;
    debug_assert_eq!(universal.degree, positions.len());
    let n = g.first().map_or_else(|| active[0].len(), Vec::len);
    let f = LinearTorusMap::from_images(n, active)?;
    let mut piece = MovePiece {
        kind,
        params,
        lifts: 0,
        target: universal.push(active, n),
        witness: cert.witness.pushforward(&f)?,
    };
    let rest: Vec<usize> = (0..g.len()).filter(|i| !positions.contains(i)).collect();
    for &r in &rest {
        piece = piece.lift(&g[r]);
    }
    let perm: Vec<usize> = positions.iter().chain(&rest).copied().collect();
    Ok(unpermute_piece(piece, &perm))
}

fn unpermute_piece(p: MovePiece, perm: &[usize]) -> MovePiece {
    if perm.iter().enumerate().all(|(i, &j)| i == j) {
        return p;
    }
    let sign = BigInt::from(perm_sign(perm));
    MovePiece {
        target: p.target.unpermute(perm),
        witness: p.witness.scaled(&sign),
        ..p
    }
}

/// Fills Q(g[j -> a+b]) - Q(g[j -> a]) - Q(g[j -> b]).
pub fn split_move(g: &[V], j: usize, a: &[BigInt], b: &[BigInt]) -> Result<MovePiece, FillError> {
    let h = replaced(g, j, add(a, b));
    let params = [a, b].concat();
    apply_base(BaseKey::Split1, MoveKind::Split, params, &[a.to_vec(), b.to_vec()], &[j], &h)
}

/// Fills Q(g) + Q(g[j -> -g_j]).
pub fn negate_move(g: &[V], j: usize) -> Result<MovePiece, FillError> {
    apply_base(BaseKey::Neg1, MoveKind::Negate, g[j].clone(), &[g[j].clone()], &[j], g)
}

/// Fills Q(g) when g_j = 0.
pub fn zero_move(g: &[V], j: usize) -> Result<MovePiece, FillError> {
    debug_assert!(is_zero(&g[j]));
    apply_base(BaseKey::Zero0, MoveKind::ZeroGen, vec![BigInt::from(j)], &[g[j].clone()], &[j], g)
}

/// Fills Q(g) - Q(g[j -> g_j - k g_i]) for k in 1..=3.
pub fn dehn_move(g: &[V], i: usize, j: usize, k: u8) -> Result<MovePiece, FillError> {
    let params = vec![BigInt::from(k)];
    apply_base(BaseKey::Dehn(k), MoveKind::Dehn, params, &[g[i].clone(), g[j].clone()], &[i, j], g)
}

/// Fills Q(x, 2y) - Q(2x, y) in the slots (i, j), where g_i = x and g_j = 2y.
pub fn double_halve_move(g: &[V], i: usize, j: usize, y: &[BigInt]) -> Result<MovePiece, FillError> {
    debug_assert_eq!(scale(y, &BigInt::from(2)), g[j]);
    let params = [g[i].clone(), y.to_vec()].concat();
    apply_base(BaseKey::DoubleHalve, MoveKind::DoubleHalve, params, &[g[i].clone(), y.to_vec()], &[i, j], g)
}

/// Zero-cost record of Q(g) - sign(perm) Q(t) with t[i] = g[perm[i]].
pub fn rearrange_move(g: &[V], perm: &[usize]) -> MovePiece {
    let n = g[0].len();
    let t: Vec<V> = perm.iter().map(|&p| g[p].clone()).collect();
    let mut target = CycleExpr::zero(n, g.len());
    target.push_term(BigInt::one(), g.to_vec());
    target.push_term(-BigInt::from(perm_sign(perm)), t);
    MovePiece {
        kind: MoveKind::Rearrange,
        params: perm.iter().map(|&p| BigInt::from(p)).collect(),
        lifts: 0,
        target,
        witness: Chain::zero(n, g.len() + 1),
    }
}

/// Run of the circle algorithm on (|a|, |l|).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct S1Trace {
    pub a: BigInt,
    pub l: BigInt,
    /// (x_i, y_i, k_i) for i = 0..=M; the last entry is the terminal state with k = 0.
    pub phase1: Vec<(BigInt, BigInt, u8)>,
    /// a_0 = |a|, .., a_N = 1.
    pub a_seq: Vec<BigInt>,
    pub i_odd: Vec<usize>,
    pub i_even: Vec<usize>,
    pub n: usize,
    pub m: usize,
    /// Second coordinate handed to phase 1.
    pub l_total: BigInt,
    pub moves: usize,
}

/// Invariant checks for an [`S1Trace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct S1Check {
    pub x_powers: bool,
    pub y_divisible: bool,
    pub y_terminal_zero: bool,
    /// M <= 1 + log2(L)/2, L the phase-1 input.
    pub m_bound: bool,
    /// M <= 1 + log2(l)/2 with l the original second argument.
    pub m_bound_literal: bool,
    pub a_halving: bool,
    pub l_binary: bool,
    pub l_product: bool,
    pub l_le_2al: bool,
}

impl S1Check {
    /// All invariants that the algorithm guarantees.
    pub fn ok(&self) -> bool {
        self.x_powers
            && self.y_divisible
            && self.y_terminal_zero
            && self.m_bound
            && self.a_halving
            && self.l_binary
            && self.l_product
            && self.l_le_2al
    }
}

fn log2_big(x: &BigInt) -> f64 {
    crate::scalar::log2_abs(x)
}

impl S1Trace {
    pub fn check(&self) -> S1Check {
        let a = self.a.abs();
        let l = self.l.abs();
        let mut x_powers = true;
        let mut y_divisible = true;
        for (i, (x, y, _)) in self.phase1.iter().enumerate() {
            let p = BigInt::one() << i;
            x_powers &= *x == p;
            y_divisible &= y.is_multiple_of(&p);
        }
        let y_terminal_zero = self.phase1.last().is_some_and(|t| t.1.is_zero()) && self.phase1.len() == self.m + 1;
        let m = self.m as f64;
        let slack = 1e-12;
        let m_bound = self.l_total.is_zero() || m <= 1.0 + log2_big(&self.l_total) / 2.0 + slack;
        let m_bound_literal = l.is_zero() || m <= 1.0 + log2_big(&l) / 2.0 + slack;
        let a_halving = self
            .a_seq
            .iter()
            .enumerate()
            .all(|(i, ai)| ai.clone() << i <= a)
            && self.a_seq.last().is_none_or(|x| x.is_one() || a.is_zero());
        let bits = (BigInt::one() << self.n) + self.i_odd.iter().map(|&i| BigInt::one() << i).sum::<BigInt>();
        let l_binary = a.is_zero() || self.l_total == &l * bits;
        let l_product = self.l_total == &a * &l;
        let l_le_2al = self.l_total <= BigInt::from(2) * &a * &l;
        S1Check {
            x_powers,
            y_divisible,
            y_terminal_zero,
            m_bound,
            m_bound_literal,
            a_halving,
            l_binary,
            l_product,
            l_le_2al,
        }
    }
}

/// Fills Q(a, l) in T^1.
pub fn s1_reduce(a: &BigInt, l: &BigInt) -> Result<(Fill, S1Trace), FillError> {
    let mut trace = S1Trace {
        a: a.clone(),
        l: l.clone(),
        ..Default::default()
    };
    let mut fill = Fill::empty(1, 2);
    let g = vec![scalar(a), scalar(l)];
    if a.is_zero() || l.is_zero() {
        fill.add_piece(zero_move(&g, if a.is_zero() { 0 } else { 1 })?);
        trace.moves = fill.pieces.len();
        return Ok((fill, trace));
    }
    // Q(a,l) = [Q(a,l) + Q(-a,l)] - Q(-a,l)
    if let Some(j) = (0..2).find(|&j| g[j][0].is_negative()) {
        let h = replaced(&g, j, scalar(&-g[j][0].clone()));
        let (inner, t) = s1_reduce(&h[0][0], &h[1][0])?;
        fill.add_piece(negate_move(&g, j)?);
        fill.extend(inner.neg());
        trace = S1Trace {
            a: a.clone(),
            l: l.clone(),
            moves: fill.pieces.len(),
            ..t
        };
        return Ok((fill, trace));
    }
    let two = BigInt::from(2);
    // phase 2: Q(a, l) - Q(1, L)
    let mut ai = a.clone();
    let mut y = l.clone();
    let mut i = 0usize;
    let mut remainders: Vec<BigInt> = Vec::new();
    trace.a_seq.push(ai.clone());
    while !ai.is_one() {
        let gi = vec![scalar(&ai), scalar(&y)];
        if ai.is_even() {
            let h = &ai / &two;
            let g2 = vec![scalar(&h), scalar(&(&y * &two))];
            fill.add_piece(double_halve_move(&g2, 0, 1, &scalar(&y))?.neg());
            trace.i_even.push(i);
            ai = h;
        } else {
            let rest = &ai - 1;
            fill.add_piece(split_move(&gi, 0, &scalar(&BigInt::one()), &scalar(&rest))?);
            let h = &rest / &two;
            let g2 = vec![scalar(&h), scalar(&(&y * &two))];
            fill.add_piece(double_halve_move(&g2, 0, 1, &scalar(&y))?.neg());
            trace.i_odd.push(i);
            remainders.push(y.clone());
            ai = h;
        }
        y = &y * &two;
        i += 1;
        trace.a_seq.push(ai.clone());
    }
    trace.n = i;
    let mut acc = y;
    for r in remainders.iter().rev() {
        let total = &acc + r;
        let gs = vec![scalar(&BigInt::one()), scalar(&total)];
        fill.add_piece(split_move(&gs, 1, &scalar(&acc), &scalar(r))?.neg());
        acc = total;
    }
    trace.l_total = acc.clone();
    // phase 1 on (1, L)
    let mut x = BigInt::one();
    let mut y = acc;
    let four = BigInt::from(4);
    while !y.is_zero() {
        let t = (&y / &x).mod_floor(&four);
        let k: u8 = t.try_into().expect("residue mod 4");
        trace.phase1.push((x.clone(), y.clone(), k));
        let y1 = &y - &x * BigInt::from(k);
        if k != 0 {
            fill.add_piece(dehn_move(&[scalar(&x), scalar(&y)], 0, 1, k)?);
        }
        let half = &y1 / &two;
        fill.add_piece(double_halve_move(&[scalar(&x), scalar(&y1)], 0, 1, &scalar(&half))?);
        x = &x * &two;
        y = half;
    }
    trace.phase1.push((x.clone(), BigInt::zero(), 0));
    trace.m = trace.phase1.len() - 1;
    let mut last = zero_move(&[scalar(&x), scalar(&BigInt::zero())], 1)?;
    last.kind = MoveKind::S1Base;
    fill.add_piece(last);
    trace.moves = fill.pieces.len();
    Ok((fill, trace))
}

/// Fills Q(d u0, w + m u0) - Q(d u0, w).
pub fn slide(u0: &[BigInt], d: &BigInt, m: &BigInt, w: &[BigInt]) -> Result<Fill, FillError> {
    let n = u0.len();
    let mut fill = Fill::empty(n, 2);
    if m.is_zero() {
        return Ok(fill);
    }
    let du = scale(u0, d);
    let mu = scale(u0, m);
    let g = vec![du.clone(), add(w, &mu)];
    let mut p = split_move(&g, 1, w, &mu)?;
    p.kind = MoveKind::Slide;
    p.params = [u0.to_vec(), vec![d.clone(), m.clone()], w.to_vec()].concat();
    fill.add_piece(p);
    let (s1, _) = s1_reduce(d, m)?;
    fill.extend(s1.push(&[u0.to_vec()], n));
    Ok(fill)
}

/// Fills Q(x + m u0, d u0) - Q(x, d u0).
pub fn slide_first(u0: &[BigInt], d: &BigInt, m: &BigInt, x: &[BigInt]) -> Result<Fill, FillError> {
    Ok(slide(u0, d, m, x)?.unpermute(&[1, 0]))
}

fn rect_gens(sizes: &[BigInt]) -> Vec<V> {
    crate::chains::rectangle_gens(sizes)
}

fn unit_sizes(first: BigInt, n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::one(); n];
    s[0] = first;
    s
}

/// Fills R(a_1..a_n) - R(a_1 ... a_n, 1, .., 1).
pub fn rect_to_unit(sizes: &[BigInt]) -> Result<Fill, FillError> {
    let n = sizes.len();
    let mut fill = Fill::empty(n, n);
    let prod: BigInt = sizes.iter().product();
    let unit_target = unit_sizes(prod.clone(), n);
    if n == 1 || sizes == unit_target.as_slice() {
        return Ok(fill);
    }
    if prod.is_zero() {
        let g = rect_gens(sizes);
        let j = sizes.iter().position(Zero::is_zero).expect("a zero size");
        fill.add_piece(zero_move(&g, j)?);
        fill.add_piece(zero_move(&rect_gens(&unit_target), 0)?.neg());
        return Ok(fill);
    }
    if n == 2 {
        return rect_to_unit_2(&sizes[0], &sizes[1]);
    }
    // R(a) - R(a_1 a_n, a_2, .., a_{n-1}, 1): planar case in the (e_1, e_n) plane
    let e = |i| unit(n, i);
    let plane = rect_to_unit_2(&sizes[0], &sizes[n - 1])?;
    let mut first = plane.push(&[e(0), e(n - 1)], n);
    for (i, a) in sizes.iter().enumerate().take(n - 1).skip(1) {
        first = first.lift(&scale(&e(i), a));
    }
    let mut perm = vec![0, n - 1];
    perm.extend(1..n - 1);
    fill.extend(first.unpermute(&perm));
    // R(a_1 a_n, a_2, .., a_{n-1}, 1) - R(prod, 1, .., 1) by induction, lifted along e_n
    let mut inner: Vec<BigInt> = sizes[..n - 1].to_vec();
    inner[0] = &sizes[0] * &sizes[n - 1];
    let rec = rect_to_unit(&inner)?;
    let images: Vec<V> = (0..n - 1).map(e).collect();
    fill.extend(rec.push(&images, n).lift(&e(n - 1)));
    Ok(fill)
}

/// Four slides taking R(a1, a2) to R(a1 a2, 1).
fn rect_to_unit_2(a1: &BigInt, a2: &BigInt) -> Result<Fill, FillError> {
    let mut fill = Fill::empty(2, 2);
    if a2.is_one() {
        return Ok(fill);
    }
    let one = BigInt::one();
    let e1 = unit(2, 0);
    let e2 = unit(2, 1);
    let diag = add(&e1, &e2);
    let p = a1 * a2;
    // each slide fills X_{i+1} - X_i; the sum fills X_last - R(a1, a2)
    fill.extend(slide(&e1, a1, a2, &scale(&e2, a2))?);
    fill.extend(slide_first(&diag, a2, &-one.clone(), &scale(&e1, a1))?);
    let v = sub(&scale(&e1, &(a1 - 1)), &e2);
    fill.extend(slide(&v, &one, a2, &scale(&diag, a2))?);
    if !a1.is_one() {
        fill.extend(slide_first(&e1, &p, &(&one - a1), &v)?);
    }
    // Q(-e2, p e1) - R(p, 1) = -[Q(p e1, e2) + Q(p e1, -e2)]
    fill.add_piece(negate_move(&[scale(&e1, &p), e2.clone()], 1)?);
    Ok(fill.neg())
}

/// Fills sum eps_i R(l_i, 1..1) - R(sum eps_i l_i, 1..1); returns the combined size.
pub fn combine_rects(terms: &[(BigInt, BigInt)], n: usize) -> Result<(Fill, BigInt), FillError> {
    let mut fill = Fill::empty(n, n);
    let mut sizes: Vec<BigInt> = Vec::new();
    for (eps, l) in terms {
        if eps.is_zero() {
            continue;
        }
        if l.is_zero() {
            // eps R(0, 1..1) is filled outright
            fill.extend(Fill::single(zero_move(&rect_gens(&unit_sizes(BigInt::zero(), n)), 0)?).scaled(eps));
            continue;
        }
        let reps = eps.abs();
        let mut count = BigInt::zero();
        while count < reps {
            if eps.is_negative() {
                // -R(l) - R(-l)
                fill.add_piece(negate_move(&rect_gens(&unit_sizes(l.clone(), n)), 0)?.neg());
                sizes.push(-l.clone());
            } else {
                sizes.push(l.clone());
            }
            count += 1;
        }
    }
    let Some((first, rest)) = sizes.split_first() else {
        fill.add_piece(zero_move(&rect_gens(&unit_sizes(BigInt::zero(), n)), 0)?.neg());
        return Ok((fill, BigInt::zero()));
    };
    let e1 = unit(n, 0);
    let mut acc = first.clone();
    for l in rest {
        let total = &acc + l;
        let g = rect_gens(&unit_sizes(total.clone(), n));
        fill.add_piece(split_move(&g, 0, &scale(&e1, &acc), &scale(&e1, l))?.neg());
        acc = total;
    }
    Ok((fill, acc))
}

fn parallel(a: &[BigInt], b: &[BigInt]) -> bool {
    let n = a.len();
    (0..n).all(|i| (i + 1..n).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Primitive direction u0 and coefficients with a = alpha u0, b = beta u0.
fn common_direction(a: &[BigInt], b: &[BigInt]) -> (V, BigInt, BigInt) {
    let g = a.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let lead = a.iter().find(|x| !x.is_zero()).expect("nonzero vector");
    let g = if lead.is_negative() { -g } else { g };
    let u0: V = a.iter().map(|x| x / &g).collect();
    let idx = u0.iter().position(|x| !x.is_zero()).expect("nonzero direction");
    let beta = &b[idx] / &u0[idx];
    (u0, g, beta)
}

/// Fills Q(g) for a parallel pair (i, j) via the circle algorithm.
pub fn parallel_pair_fill(g: &[V], i: usize, j: usize) -> Result<Fill, FillError> {
    let n = g[0].len();
    let (u0, alpha, beta) = common_direction(&g[i], &g[j]);
    let (s1, _) = s1_reduce(&alpha, &beta)?;
    let mut f = s1.push(&[u0], n);
    let rest: Vec<usize> = (0..g.len()).filter(|&r| r != i && r != j).collect();
    for &r in &rest {
        f = f.lift(&g[r]);
    }
    let mut perm = vec![i, j];
    perm.extend(rest);
    Ok(f.unpermute(&perm))
}

/// Fills Q(g) for linearly dependent generators.
pub fn slim_reduce(gens: &[V]) -> Result<Fill, FillError> {
    let n = gens[0].len();
    let k = gens.len();
    let m = Matrix::from_columns(gens).map_err(|_| FillError::NotDependent)?;
    if rank(&m) >= k {
        return Err(FillError::NotDependent);
    }
    let mut fill = Fill::empty(n, k);
    let mut g = gens.to_vec();
    let mut c: Option<Vec<BigInt>> = None;
    loop {
        if let Some(j) = g.iter().position(|v| is_zero(v)) {
            fill.add_piece(zero_move(&g, j)?);
            return Ok(fill);
        }
        for i in 0..k {
            for j in i + 1..k {
                if parallel(&g[i], &g[j]) {
                    fill.extend(parallel_pair_fill(&g, i, j)?);
                    return Ok(fill);
                }
            }
        }
        // integer relation sum c_i g_i = 0, kept in step with the generators
        let rel = match c.take() {
            Some(r) => r,
            None => {
                let m = Matrix::from_columns(&g).expect("uniform dimension");
                kernel_vector(&m).ok_or(FillError::NotDependent)?
            }
        };
        let p = (0..k)
            .filter(|&i| !rel[i].is_zero())
            .min_by_key(|&i| rel[i].abs())
            .ok_or(FillError::NotDependent)?;
        let r = (0..k)
            .filter(|&i| i != p && !rel[i].is_zero())
            .max_by_key(|&i| rel[i].abs())
            .expect("a relation with one nonzero entry forces a zero generator");
        // g_p -> g_p - q g_r turns c_r into c_r + q c_p = c_r mod c_p
        let q = -rel[r].div_floor(&rel[p]);
        let shift = scale(&g[r], &q);
        let new_p = sub(&g[p], &shift);
        fill.add_piece(split_move(&g, p, &new_p, &shift)?);
        fill.extend(parallel_pair_fill(&replaced(&g, p, shift.clone()), p, r)?);
        g[p] = new_p;
        let mut rel = rel;
        rel[r] = &rel[r] + &q * &rel[p];
        c = Some(rel);
    }
}

/// A signed rectangle R(sizes) with coefficient `sign`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedRect {
    pub sign: BigInt,
    pub sizes: Vec<BigInt>,
}

/// Fills Q(v_1..v_n) - sum sign_i R(sizes_i).
pub fn paral_to_rects(vs: &[V]) -> Result<(Vec<SignedRect>, Fill), FillError> {
    let n = vs.len();
    let mut fill = Fill::empty(n, n);
    if n == 1 {
        return Ok((
            vec![SignedRect {
                sign: BigInt::one(),
                sizes: vs[0].clone(),
            }],
            fill,
        ));
    }
    let perp = |v: &V| {
        let mut w = v.clone();
        w[n - 1] = BigInt::zero();
        w
    };
    let par = |v: &V| {
        let mut w = vec![BigInt::zero(); n];
        w[n - 1] = v[n - 1].clone();
        w
    };
    // (coefficient, generators, indices taken parallel)
    let mut terms: Vec<(BigInt, Vec<V>, Vec<usize>)> = vec![(BigInt::one(), vs.to_vec(), Vec::new())];
    for j in 0..n {
        let mut next = Vec::new();
        for (c, g, mask) in terms {
            let a = perp(&g[j]);
            let b = par(&g[j]);
            match (is_zero(&a), is_zero(&b)) {
                (true, true) => {
                    fill.add_piece(zero_move(&g, j)?.scaled(&c));
                }
                (false, true) => next.push((c, g, mask)),
                (true, false) => {
                    let mut m = mask;
                    m.push(j);
                    next.push((c, g, m));
                }
                (false, false) => {
                    fill.add_piece(split_move(&g, j, &a, &b)?.scaled(&c));
                    let mut m = mask.clone();
                    m.push(j);
                    next.push((c.clone(), replaced(&g, j, a), mask));
                    next.push((c, replaced(&g, j, b), m));
                }
            }
        }
        terms = next;
    }
    let mut rects = Vec::new();
    for (c, g, mask) in terms {
        if mask.len() != 1 {
            fill.extend(slim_reduce(&g)?.scaled(&c));
            continue;
        }
        let i = mask[0];
        let others: Vec<usize> = (0..n).filter(|&r| r != i).collect();
        let low: Vec<V> = others.iter().map(|&r| g[r][..n - 1].to_vec()).collect();
        let (sub_rects, sub_fill) = paral_to_rects(&low)?;
        let mut perm = others.clone();
        perm.push(i);
        let sign = BigInt::from(perm_sign(&perm));
        if perm.iter().enumerate().any(|(a, &b)| a != b) {
            fill.add_piece(rearrange_move(&g, &perm).scaled(&c));
        }
        let images: Vec<V> = (0..n - 1).map(|r| unit(n, r)).collect();
        let lifted = sub_fill.push(&images, n).lift(&g[i]);
        let f = &c * &sign;
        fill.extend(lifted.scaled(&f));
        for r in sub_rects {
            let mut sizes = r.sizes;
            sizes.push(g[i][n - 1].clone());
            rects.push(SignedRect {
                sign: &r.sign * &f,
                sizes,
            });
        }
    }
    Ok((rects, fill))
}

/// Full reduction of Q(columns of A) to R(det A, 1, .., 1).
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub matrix: Matrix<BigInt>,
    pub certificate: super::FillingCertificate,
    pub fill: Fill,
    pub rects: Vec<SignedRect>,
    /// Size of the final unit rectangle; equals det A.
    pub final_size: BigInt,
    /// l1 norm of the assembled witness.
    pub cost: BigInt,
    /// Sum of the per-move costs; at least `cost`.
    pub move_cost_sum: BigInt,
    pub log2_norm: f64,
}

impl ReductionReport {
    pub fn records(&self) -> Vec<super::MoveRecord> {
        self.fill.records()
    }
}

pub fn reduce_parallelogram(a: &Matrix<BigInt>) -> Result<ReductionReport, FillError> {
    if !a.is_square() || a.rows() == 0 {
        return Err(FillError::UnsupportedDimension(a.rows()));
    }
    let n = a.rows();
    let cols = a.columns();
    let (rects, mut fill) = paral_to_rects(&cols)?;
    let mut units = Vec::new();
    for r in &rects {
        fill.extend(rect_to_unit(&r.sizes)?.scaled(&r.sign));
        units.push((r.sign.clone(), r.sizes.iter().product::<BigInt>()));
    }
    let (comb, total) = combine_rects(&units, n)?;
    fill.extend(comb);
    let mut target = CycleExpr::zero(n, n);
    target.push_term(BigInt::one(), cols);
    target.push_term(-BigInt::one(), rect_gens(&unit_sizes(total.clone(), n)));
    let witness = fill.witness();
    let certificate = super::FillingCertificate::new(target.to_chain()?, witness);
    let cost = certificate.cost.clone();
    Ok(ReductionReport {
        matrix: a.clone(),
        move_cost_sum: fill.move_cost_sum(),
        certificate,
        fill,
        rects,
        final_size: total,
        cost,
        log2_norm: crate::scalar::log2_abs(&a.max_abs()),
    })
}
