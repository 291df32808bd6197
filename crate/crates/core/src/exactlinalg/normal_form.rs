
use super::Matrix;
use crate::scalar::Int;

/// Smith normal form `P * A * Q = D`.
#[derive(Clone, Debug)]
pub struct SnfResult<T> {
    pub p: Matrix<T>,
    pub d: Matrix<T>,
    pub q: Matrix<T>,
    pub original: Matrix<T>,
}

impl<T: Int> SnfResult<T> {
    /// Diagonal entries d_1, ..., d_min(m,n).
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Re-checks `P A Q = D`, the diagonal shape and successive divisibility.
    pub fn verify(&self) -> bool {
        let Ok(pa) = self.p.mul(&self.original) else { return false };
        let Ok(paq) = pa.mul(&self.q) else { return false };
        if paq != self.d {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        let mut seen_zero = false;
        for w in 0..diag.len() {
            if diag[w].is_negative() {
                return false;
            }
            if diag[w].is_zero() {
                seen_zero = true;
            } else if seen_zero {
                return false;
            }
            if w + 1 < diag.len() && !diag[w].is_zero() && !diag[w + 1].is_multiple_of(&diag[w]) {
                return false;
            }
        }
        true
    }
}

/// Column Hermite normal form `A * U = H`.
#[derive(Clone, Debug)]
pub struct HnfResult<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// (row, column) of every pivot, in increasing order.
    pub pivots: Vec<(usize, usize)>,
}

impl<T: Int> HnfResult<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn smallest_nonzero<T: Int>(d: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn snf<T: Int>(a: &Matrix<T>) -> SnfResult<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = Matrix::identity(m);
    let mut q = Matrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&d, t) else {
                return SnfResult { p, d, q, original: a.clone() };
            };
            d.swap_rows(t, pi);
            p.swap_rows(t, pi);
            d.swap_cols(t, pj);
            q.swap_cols(t, pj);
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let f = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &f);
                p.add_row_multiple(i, t, &f);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let f = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &f);
                q.add_col_multiple(j, t, &f);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = T::one();
                    d.add_row_multiple(t, i, &one);
                    p.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }
    SnfResult { p, d, q, original: a.clone() }
}

pub fn hnf<T: Int>(a: &Matrix<T>) -> HnfResult<T> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = Matrix::identity(n);
    let mut pivots = Vec::new();
    let mut col = 0;
    for row in 0..m {
        if col == n {
            break;
        }
        for j in col + 1..n {
            let b = h.get(row, j).clone();
            if b.is_zero() {
                continue;
            }
            let a0 = h.get(row, col).clone();
            if a0.is_zero() {
                h.swap_cols(col, j);
                u.swap_cols(col, j);
                continue;
            }
            if b.is_multiple_of(&a0) {
                let f = -(b / a0);
                h.add_col_multiple(j, col, &f);
                u.add_col_multiple(j, col, &f);
                continue;
            }
            let eg = a0.extended_gcd(&b);
            let g = eg.gcd;
            let (ag, bg) = (a0 / g.clone(), b / g);
            // [x -b/g; y a/g] has determinant 1
            let nb = -bg;
            h.combine_cols(col, j, &eg.x, &eg.y, &nb, &ag);
            u.combine_cols(col, j, &eg.x, &eg.y, &nb, &ag);
        }
        let pivot = h.get(row, col).clone();
        if pivot.is_zero() {
            continue;
        }
        if pivot.is_negative() {
            h.negate_col(col);
            u.negate_col(col);
        }
        let pivot = h.get(row, col).clone();
        for c in 0..col {
            let f = -h.get(row, c).div_floor(&pivot);
            if !f.is_zero() {
                h.add_col_multiple(c, col, &f);
                u.add_col_multiple(c, col, &f);
            }
        }
        pivots.push((row, col));
        col += 1;
    }
    HnfResult { h, u, pivots }
}

/// Structure of the cokernel `Z^m / A Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelStructure<T> {
    pub torsion_factors: Vec<T>,
    pub free_rank: usize,
    pub torsion_order: T,
}

pub fn coker_structure<T: Int>(a: &Matrix<T>) -> CokernelStructure<T> {
    coker_from_snf(&snf(a))
}

pub fn coker_from_snf<T: Int>(s: &SnfResult<T>) -> CokernelStructure<T> {
    let diag = s.diagonal();
    let nonzero: Vec<T> = diag.into_iter().filter(|d| !d.is_zero()).collect();
    let free_rank = s.d.rows() - nonzero.len();
    let torsion_order = nonzero.iter().fold(T::one(), |acc, d| acc * d.clone());
    CokernelStructure {
        torsion_factors: nonzero.into_iter().filter(|d| !d.is_one()).collect(),
        free_rank,
        torsion_order,
    }
}
