//! Exact search for a filling chain over a bounded candidate set.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{FillError, FillingCertificate};
use crate::chains::StraightSimplex;
use crate::exactlinalg::{solve_diophantine, Matrix};
use crate::{Chain, Simplex};

/// Abort threshold for the candidate enumeration.
pub const MAX_CANDIDATES: u64 = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub box_start: u32,
    pub max_expand: u32,
    /// Greedy l1 improvement passes after the exact solve.
    pub improve: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            box_start: 1,
            max_expand: 3,
            improve: true,
        }
    }
}

/// Fills the cycle `z` by solving the boundary system over candidate simplices.
///
/// Candidates of degree deg(z)+1 have per-coordinate spread at most `s_c + box - 1`,
/// where `s_c` is the largest spread of a simplex of `z` in coordinate `c`. The box grows
/// from `box` to `max_expand`, or to the largest size whose candidate set stays under
/// [`MAX_CANDIDATES`]; degenerate candidates join only at that last size.
pub fn fill_by_solve(z: &Chain, box_size: u32, max_expand: u32) -> Result<FillingCertificate, FillError> {
    fill_with(
        z,
        SolveOptions {
            box_start: box_size,
            max_expand,
            improve: true,
        },
    )
}

pub fn fill_with(z: &Chain, opts: SolveOptions) -> Result<FillingCertificate, FillError> {
    if !z.boundary().is_zero() {
        return Err(FillError::NotACycle);
    }
    let n = z.ambient_dim();
    let k = z.degree();
    if z.is_zero() {
        return Ok(FillingCertificate::new(z.clone(), Chain::zero(n, k + 1)));
    }
    let spread = target_spread(z)?;
    let first = opts.box_start.max(1);
    let widths_at = |b: u32| spread.iter().map(|s| s + b as i64 - 1).collect::<Vec<i64>>();
    // the final expansion is the largest box whose candidate set fits
    let last = (first..=opts.max_expand.max(first))
        .take_while(|&b| candidate_count(k + 1, &widths_at(b)).is_some_and(|c| c <= MAX_CANDIDATES))
        .last()
        .ok_or(FillError::CandidateSetTooLarge)?;
    for b in first..=last {
        let cands = enumerate_candidates(n, k + 1, &widths_at(b), b == last)?;
        if let Some(mut w) = solve_over(z, &cands)? {
            if opts.improve {
                improve_l1(&mut w);
            }
            let cert = FillingCertificate::new(z.clone(), w);
            debug_assert!(cert.verify().ok);
            return Ok(cert);
        }
    }
    Err(FillError::Unfillable { box_size: last })
}

fn target_spread(z: &Chain) -> Result<Vec<i64>, FillError> {
    let mut out = vec![0i64; z.ambient_dim()];
    for (s, _) in z.iter() {
        for (o, v) in out.iter_mut().zip(s.spread()) {
            *o = (*o).max(v.to_i64().ok_or(FillError::CandidateSetTooLarge)?);
        }
    }
    Ok(out)
}

/// Tuples (x_1..x_m) such that {0, x_1, .., x_m} has spread at most `w`.
fn coordinate_tuples(m: usize, w: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-w; m];
    loop {
        let lo = cur.iter().copied().fold(0, i64::min);
        let hi = cur.iter().copied().fold(0, i64::max);
        if hi - lo <= w {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            if cur[i] < w {
                cur[i] += 1;
                break;
            }
            cur[i] = -w;
            i += 1;
        }
    }
}

/// Size of the candidate set before the degeneracy filter; `None` on overflow.
pub fn candidate_count(degree: usize, widths: &[i64]) -> Option<u64> {
    widths
        .iter()
        .try_fold(1u64, |acc, &w| acc.checked_mul(coordinate_tuples(degree, w).len() as u64))
}

/// Canonical simplices of the given degree with per-coordinate spread bounded by `widths`.
pub fn enumerate_candidates(
    n: usize,
    degree: usize,
    widths: &[i64],
    allow_degenerate: bool,
) -> Result<Vec<Simplex>, FillError> {
    match candidate_count(degree, widths) {
        Some(t) if t <= MAX_CANDIDATES => {}
        _ => return Err(FillError::CandidateSetTooLarge),
    }
    let per: Vec<Vec<Vec<i64>>> = widths.iter().map(|&w| coordinate_tuples(degree, w)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        // vertices 1..=degree, coordinate c taken from per[c][idx[c]]
        let verts: Vec<Vec<i64>> = (0..degree)
            .map(|j| (0..n).map(|c| per[c][idx[c]][j]).collect())
            .collect();
        let distinct = {
            let mut seen: HashSet<&[i64]> = HashSet::new();
            let zero = vec![0i64; n];
            seen.insert(&zero);
            verts.iter().all(|v| seen.insert(v))
        };
        if allow_degenerate || distinct {
            let mut all = vec![vec![BigInt::zero(); n]];
            all.extend(verts.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()));
            out.push(StraightSimplex::canonicalize(&all).expect("uniform dimension"));
        }
        let mut c = 0;
        loop {
            if c == n {
                break 'outer;
            }
            idx[c] += 1;
            if idx[c] < per[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
    Ok(out)
}

/// Solves boundary(x) = z over the candidate columns.
fn solve_over(z: &Chain, cands: &[Simplex]) -> Result<Option<Chain>, FillError> {
    let mut face_index: HashMap<Simplex, u32> = HashMap::new();
    let index_of = |s: Simplex, map: &mut HashMap<Simplex, u32>| -> u32 {
        let next = map.len() as u32;
        *map.entry(s).or_insert(next)
    };
    let mut columns: Vec<Vec<(u32, i128)>> = Vec::with_capacity(cands.len());
    for s in cands {
        let b = Chain::from_simplex(s.clone(), BigInt::from(1)).boundary();
        let mut col = Vec::with_capacity(b.len());
        for (f, c) in b.iter() {
            col.push((index_of(f.clone(), &mut face_index), c.to_i128().expect("small")));
        }
        columns.push(col);
    }
    let mut rhs: HashMap<u32, i128> = HashMap::new();
    for (f, c) in z.iter() {
        let Some(&r) = face_index.get(f) else {
            // a target face no candidate can produce
            return Ok(None);
        };
        rhs.insert(r, c.to_i128().ok_or(FillError::Overflow)?);
    }
    let mut sys = SparseSystem::new(face_index.len(), &columns, &rhs);
    let Some(x) = sys.solve()? else {
        return Ok(None);
    };
    let mut w = Chain::zero(z.ambient_dim(), z.degree() + 1);
    for (j, v) in x {
        w.add_term(cands[j as usize].clone(), v);
    }
    Ok((w.boundary() == *z).then_some(w))
}

type SparseRow = Vec<(u32, i128)>;

/// Row-oriented sparse integer system with unit-pivot elimination.
struct SparseSystem {
    rows: Vec<Vec<(u32, i128)>>,
    rhs: Vec<i128>,
    col_rows: Vec<HashSet<u32>>,
    active: Vec<bool>,
    /// (length, row) for active rows that may hold a unit entry
    queue: BTreeSet<(usize, u32)>,
    /// (pivot column, pivot row snapshot, rhs)
    pivots: Vec<(u32, SparseRow, i128)>,
}

impl SparseSystem {
    fn new(nrows: usize, columns: &[Vec<(u32, i128)>], rhs: &HashMap<u32, i128>) -> Self {
        let mut rows: Vec<Vec<(u32, i128)>> = vec![Vec::new(); nrows];
        let mut col_rows = vec![HashSet::new(); columns.len()];
        for (j, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                rows[r as usize].push((j as u32, v));
                col_rows[j].insert(r);
            }
        }
        for r in &mut rows {
            r.sort_unstable_by_key(|e| e.0);
        }
        let mut b = vec![0i128; nrows];
        for (&r, &v) in rhs {
            b[r as usize] = v;
        }
        let queue = rows.iter().enumerate().map(|(i, r)| (r.len(), i as u32)).collect();
        Self {
            rows,
            rhs: b,
            col_rows,
            active: vec![true; nrows],
            queue,
            pivots: Vec::new(),
        }
    }

    fn pick_pivot(&mut self) -> Option<(u32, u32)> {
        while let Some(&(len, r)) = self.queue.iter().next() {
            self.queue.remove(&(len, r));
            let row = &self.rows[r as usize];
            if !self.active[r as usize] || row.is_empty() {
                continue;
            }
            let best = row
                .iter()
                .filter(|e| e.1.abs() == 1)
                .min_by_key(|e| self.col_rows[e.0 as usize].len())
                .map(|e| e.0);
            if let Some(c) = best {
                return Some((r, c));
            }
        }
        None
    }

    fn solve(&mut self) -> Result<Option<Vec<(u32, BigInt)>>, FillError> {
        while let Some((r, c)) = self.pick_pivot() {
            self.eliminate(r, c)?;
        }
        // rows left without a unit entry
        let mut rest_rows = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if !self.active[i] {
                continue;
            }
            if row.is_empty() {
                if self.rhs[i] != 0 {
                    return Ok(None);
                }
            } else {
                rest_rows.push(i);
            }
        }
        let mut x: HashMap<u32, BigInt> = HashMap::new();
        if !rest_rows.is_empty() {
            let mut cols: Vec<u32> = rest_rows
                .iter()
                .flat_map(|&i| self.rows[i].iter().map(|e| e.0))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            cols.sort_unstable();
            let pos: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let mut m = Matrix::<BigInt>::zeros(rest_rows.len(), cols.len());
            let mut b = Vec::with_capacity(rest_rows.len());
            for (ri, &i) in rest_rows.iter().enumerate() {
                for &(c, v) in &self.rows[i] {
                    m.set(ri, pos[&c], BigInt::from(v));
                }
                b.push(BigInt::from(self.rhs[i]));
            }
            let Some(sol) = solve_diophantine(&m, &b).map_err(|_| FillError::Overflow)? else {
                return Ok(None);
            };
            for (c, v) in cols.into_iter().zip(sol) {
                if !v.is_zero() {
                    x.insert(c, v);
                }
            }
        }
        for (c, row, b) in self.pivots.iter().rev() {
            let mut acc = BigInt::from(*b);
            let mut piv = 0i128;
            for &(j, v) in row {
                if j == *c {
                    piv = v;
                } else if let Some(xj) = x.get(&j) {
                    acc -= xj * BigInt::from(v);
                }
            }
            // unit pivot: dividing by +-1 is multiplying by it
            let val = acc * BigInt::from(piv);
            if !val.is_zero() {
                x.insert(*c, val);
            }
        }
        let mut out: Vec<(u32, BigInt)> = x.into_iter().collect();
        out.sort_unstable_by_key(|e| e.0);
        Ok(Some(out))
    }

    fn eliminate(&mut self, r: u32, c: u32) -> Result<(), FillError> {
        let prow = std::mem::take(&mut self.rows[r as usize]);
        let pb = self.rhs[r as usize];
        let piv = prow.iter().find(|e| e.0 == c).expect("pivot entry").1;
        self.active[r as usize] = false;
        for &(j, _) in &prow {
            self.col_rows[j as usize].remove(&r);
        }
        let others: Vec<u32> = self.col_rows[c as usize].iter().copied().collect();
        for o in others {
            let orow = &self.rows[o as usize];
            let a = orow.iter().find(|e| e.0 == c).expect("column index in sync").1;
            let f = a.checked_mul(piv).ok_or(FillError::Overflow)?;
            let old_len = orow.len();
            let merged = axpy(orow, &prow, f)?;
            for &(j, _) in orow {
                self.col_rows[j as usize].remove(&o);
            }
            for &(j, _) in &merged {
                self.col_rows[j as usize].insert(o);
            }
            self.queue.remove(&(old_len, o));
            self.queue.insert((merged.len(), o));
            self.rows[o as usize] = merged;
            let nb = self.rhs[o as usize]
                .checked_sub(f.checked_mul(pb).ok_or(FillError::Overflow)?)
                .ok_or(FillError::Overflow)?;
            self.rhs[o as usize] = nb;
        }
        self.pivots.push((c, prow, pb));
        Ok(())
    }
}

/// a - f * b on sorted sparse rows.
fn axpy(a: &[(u32, i128)], b: &[(u32, i128)], f: i128) -> Result<Vec<(u32, i128)>, FillError> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = b[j].1.checked_mul(f).ok_or(FillError::Overflow)?;
            out.push((b[j].0, -v));
            j += 1;
        } else {
            let v = a[i]
                .1
                .checked_sub(b[j].1.checked_mul(f).ok_or(FillError::Overflow)?)
                .ok_or(FillError::Overflow)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// Greedy descent on l1 by adding boundaries of simplices one degree up.
pub fn improve_l1(w: &mut Chain) {
    let n = w.ambient_dim();
    loop {
        let mut improved = false;
        let supp: Vec<Simplex> = w.iter().map(|(s, _)| s.clone()).collect();
        for s in supp {
            if w.coeff(&s).is_zero() {
                continue;
            }
            for rho in cofaces(&s, n) {
                let b = Chain::from_simplex(rho, BigInt::from(1)).boundary();
                for sign in [1i64, -1] {
                    let f = BigInt::from(sign);
                    let delta: BigInt = b
                        .iter()
                        .map(|(t, c)| {
                            let old = w.coeff(t);
                            let new = &old + c * &f;
                            new.abs() - old.abs()
                        })
                        .sum();
                    if delta.is_negative() {
                        w.add_scaled(&b, &f);
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            return;
        }
    }
}

/// Simplices obtained by inserting a vertex near `s` at any position.
fn cofaces(s: &Simplex, n: usize) -> Vec<Simplex> {
    let verts: Vec<Vec<BigInt>> = s.vertices().map(<[BigInt]>::to_vec).collect();
    let lo: Vec<BigInt> = (0..n).map(|c| verts.iter().map(|v| v[c].clone()).min().unwrap() - 1).collect();
    let hi: Vec<BigInt> = (0..n).map(|c| verts.iter().map(|v| v[c].clone()).max().unwrap() + 1).collect();
    let mut points = vec![Vec::new()];
    for c in 0..n {
        let mut next = Vec::new();
        let mut x = lo[c].clone();
        while x <= hi[c] {
            for p in &points {
                let mut q: Vec<BigInt> = p.clone();
                q.push(x.clone());
                next.push(q);
            }
            x += 1;
        }
        points = next;
    }
    let mut out = Vec::new();
    for p in &points {
        for pos in 0..=verts.len() {
            let mut vs = verts.clone();
            vs.insert(pos, p.clone());
            out.push(StraightSimplex::canonicalize(&vs).expect("uniform dimension"));
        }
    }
    out
}
