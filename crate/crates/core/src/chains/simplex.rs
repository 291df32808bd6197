use super::ChainError;
use crate::exactlinalg::Matrix;
use crate::scalar::Int;

/// Straight simplex in T^n with integer vertices, stored with its first vertex at the origin.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StraightSimplex<T> {
    dim: usize,
    /// Vertices flattened row by row; the first `dim` entries are zero.
    coords: Vec<T>,
}

impl<T: Int> StraightSimplex<T> {
    pub fn canonicalize(vertices: &[Vec<T>]) -> Result<Self, ChainError> {
        let first = vertices.first().ok_or(ChainError::EmptySimplex)?;
        let dim = first.len();
        if dim == 0 {
            return Err(ChainError::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut coords = Vec::with_capacity(dim * vertices.len());
        for v in vertices {
            if v.len() != dim {
                return Err(ChainError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            coords.extend(v.iter().zip(first).map(|(a, b)| a.clone() - b.clone()));
        }
        Ok(Self { dim, coords })
    }

    /// Canonicalizes a flattened vertex list (`dim` coordinates per vertex).
    pub(crate) fn from_flat(dim: usize, mut coords: Vec<T>) -> Self {
        debug_assert!(dim > 0 && !coords.is_empty() && coords.len().is_multiple_of(dim));
        if coords[..dim].iter().any(|c| !c.is_zero()) {
            let first: Vec<T> = coords[..dim].to_vec();
            for (i, c) in coords.iter_mut().enumerate() {
                *c = c.clone() - first[i % dim].clone();
            }
        }
        Self { dim, coords }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coords.len() / self.dim - 1
    }

    pub fn vertex(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks(self.dim)
    }

    pub(crate) fn flat(&self) -> &[T] {
        &self.coords
    }

    /// Face obtained by deleting vertex `i`.
    pub fn face(&self, i: usize) -> Self {
        let mut coords = Vec::with_capacity(self.coords.len() - self.dim);
        for (j, v) in self.vertices().enumerate() {
            if j != i {
                coords.extend_from_slice(v);
            }
        }
        Self::from_flat(self.dim, coords)
    }

    pub fn is_degenerate(&self) -> bool {
        let vs: Vec<&[T]> = self.vertices().collect();
        (0..vs.len()).any(|i| (i + 1..vs.len()).any(|j| vs[i] == vs[j]))
    }

    /// n x k matrix whose columns are the vertices 1..=k (vertex 0 is the origin).
    pub fn edge_matrix(&self) -> Matrix<T> {
        let cols: Vec<Vec<T>> = self.vertices().skip(1).map(<[T]>::to_vec).collect();
        if cols.is_empty() {
            return Matrix::zeros(self.dim, 0);
        }
        Matrix::from_columns(&cols).expect("uniform vertex dimension")
    }

    /// Per-coordinate spread max - min over the vertices.
    pub fn spread(&self) -> Vec<T> {
        (0..self.dim)
            .map(|c| {
                let it = self.vertices().map(|v| v[c].clone());
                let (lo, hi) = it.fold((T::zero(), T::zero()), |(lo, hi), x| {
                    (lo.min(x.clone()), hi.max(x))
                });
                hi - lo
            })
            .collect()
    }
}
