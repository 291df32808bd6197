use itertools::Itertools;

use super::{ChainError, StraightSimplex, TorusChain};
use crate::exactlinalg::{det_exact, Matrix};
use crate::scalar::Int;

/// Q(v_1, ..., v_k): iterated prism of the segment [0, v_1].
pub fn parallelogram_cycle<T: Int>(gens: &[Vec<T>]) -> Result<TorusChain<T>, ChainError> {
    let first = gens.first().ok_or(ChainError::EmptySimplex)?;
    let n = first.len();
    let seg = StraightSimplex::canonicalize(&[vec![T::zero(); n], first.clone()])?;
    let mut c = TorusChain::from_simplex(seg, T::one());
    for v in &gens[1..] {
        c = c.prism(v)?;
    }
    Ok(c)
}

/// R(a_1, ..., a_n) = Q(a_1 e_1, ..., a_n e_n).
pub fn rectangle_cycle<T: Int>(sizes: &[T]) -> Result<TorusChain<T>, ChainError> {
    parallelogram_cycle(&rectangle_gens(sizes))
}

pub fn rectangle_gens<T: Int>(sizes: &[T]) -> Vec<Vec<T>> {
    let n = sizes.len();
    sizes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut v = vec![T::zero(); n];
            v[i] = a.clone();
            v
        })
        .collect()
}

/// Homology class of Q(v_1..v_k) in H_k(T^n) as the vector of k x k minors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyClassVector<T> {
    pub n: usize,
    pub k: usize,
    pub minors: Vec<T>,
}

impl<T: Int> HomologyClassVector<T> {
    pub fn zero(n: usize, k: usize) -> Self {
        let len = (0..n).combinations(k).count();
        Self {
            n,
            k,
            minors: vec![T::zero(); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.minors.iter().all(|m| m.is_zero())
    }

    /// self += c * other
    pub fn add_scaled(&mut self, other: &Self, c: &T) {
        assert_eq!((self.n, self.k), (other.n, other.k), "class shape mismatch");
        for (a, b) in self.minors.iter_mut().zip(&other.minors) {
            *a = a.clone() + b.clone() * c.clone();
        }
    }
}

/// Coordinate subsets of size k in lexicographic order; their order fixes the minor layout.
pub fn coordinate_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

pub fn parallelogram_class<T: Int>(gens: &[Vec<T>]) -> Result<HomologyClassVector<T>, ChainError> {
    let first = gens.first().ok_or(ChainError::EmptySimplex)?;
    let n = first.len();
    let k = gens.len();
    if let Some(bad) = gens.iter().find(|v| v.len() != n) {
        return Err(ChainError::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let minors = coordinate_subsets(n, k)
        .into_iter()
        .map(|rows| {
            let sub: Vec<Vec<T>> = rows
                .iter()
                .map(|&r| gens.iter().map(|g| g[r].clone()).collect())
                .collect();
            det_exact(&Matrix::from_rows(sub).expect("square minor")).expect("square minor")
        })
        .collect();
    Ok(HomologyClassVector { n, k, minors })
}

/// Sign of the permutation given as a list of images.
pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
