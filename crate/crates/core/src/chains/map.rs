use super::{ChainError, StraightSimplex};
use crate::exactlinalg::Matrix;
use crate::scalar::Int;

/// Affine map x -> M x + t, inducing T^n -> T^m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearTorusMap<T> {
    matrix: Matrix<T>,
    translation: Vec<T>,
}

impl<T: Int> LinearTorusMap<T> {
    pub fn new(matrix: Matrix<T>, translation: Vec<T>) -> Result<Self, ChainError> {
        if translation.len() != matrix.rows() {
            return Err(ChainError::DimensionMismatch {
                expected: matrix.rows(),
                found: translation.len(),
            });
        }
        Ok(Self { matrix, translation })
    }

    pub fn linear(matrix: Matrix<T>) -> Self {
        let translation = vec![T::zero(); matrix.rows()];
        Self { matrix, translation }
    }

    /// Linear map sending the i-th standard basis vector to `images[i]`.
    pub fn from_images(target_dim: usize, images: &[Vec<T>]) -> Result<Self, ChainError> {
        if let Some(bad) = images.iter().find(|v| v.len() != target_dim) {
            return Err(ChainError::DimensionMismatch {
                expected: target_dim,
                found: bad.len(),
            });
        }
        let m = if images.is_empty() {
            Matrix::zeros(target_dim, 0)
        } else {
            Matrix::from_columns(images).expect("checked dimensions")
        };
        Ok(Self::linear(m))
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(Matrix::identity(n))
    }

    pub fn translation(v: Vec<T>) -> Self {
        Self {
            matrix: Matrix::identity(v.len()),
            translation: v,
        }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn translation_vector(&self) -> &[T] {
        &self.translation
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let mut y = self.matrix.mul_vec(x).expect("point dimension matches source");
        for (a, t) in y.iter_mut().zip(&self.translation) {
            *a = a.clone() + t.clone();
        }
        y
    }

    /// Linear part only; used for generating vectors, which ignore translations.
    pub fn apply_linear(&self, x: &[T]) -> Vec<T> {
        self.matrix.mul_vec(x).expect("vector dimension matches source")
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Self) -> Result<Self, ChainError> {
        if self.source_dim() != inner.target_dim() {
            return Err(ChainError::DimensionMismatch {
                expected: self.source_dim(),
                found: inner.target_dim(),
            });
        }
        let matrix = self.matrix.mul(&inner.matrix).expect("checked");
        let translation = self.apply(&inner.translation);
        Ok(Self { matrix, translation })
    }

    pub fn push_simplex(&self, s: &StraightSimplex<T>) -> StraightSimplex<T> {
        let m = self.target_dim();
        let mut coords = Vec::with_capacity(m * (s.degree() + 1));
        for v in s.vertices() {
            coords.extend(self.apply_linear(v));
        }
        StraightSimplex::from_flat(m, coords)
    }
}
