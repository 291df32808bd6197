use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::{ChainError, LinearTorusMap, StraightSimplex};
use crate::scalar::Int;

/// Finite integer combination of straight simplices of one degree in T^n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusChain<T> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<StraightSimplex<T>, T>,
}

impl<T: Int> TorusChain<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_simplex(s: StraightSimplex<T>, coeff: T) -> Self {
        let mut c = Self::zero(s.ambient_dim(), s.degree());
        c.add_term(s, coeff);
        c
    }

    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (StraightSimplex<T>, T)>,
    ) -> Result<Self, ChainError> {
        let mut c = Self::zero(dim, degree);
        for (s, k) in terms {
            c.check_simplex(&s)?;
            c.add_term(s, k);
        }
        Ok(c)
    }

    fn check_simplex(&self, s: &StraightSimplex<T>) -> Result<(), ChainError> {
        if s.ambient_dim() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        if s.degree() != self.degree {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: s.degree(),
            });
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StraightSimplex<T>, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &StraightSimplex<T>) -> T {
        self.terms.get(s).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `coeff * s`; panics if `s` does not match the chain's shape.
    pub fn add_term(&mut self, s: StraightSimplex<T>, coeff: T) {
        assert!(
            s.ambient_dim() == self.dim && s.degree() == self.degree,
            "simplex shape does not match chain"
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + coeff;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), ChainError> {
        if self.dim != other.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree && !other.is_zero() {
            return Err(ChainError::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// self += factor * other
    pub fn try_add_scaled(&mut self, other: &Self, factor: &T) -> Result<(), ChainError> {
        self.check_same_shape(other)?;
        if factor.is_zero() {
            return Ok(());
        }
        for (s, k) in &other.terms {
            self.add_term(s.clone(), k.clone() * factor.clone());
        }
        Ok(())
    }

    /// self += factor * other; panics on shape mismatch.
    pub fn add_scaled(&mut self, other: &Self, factor: &T) {
        self.try_add_scaled(other, factor).expect("chain shape mismatch");
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChainError> {
        let mut c = self.clone();
        c.try_add_scaled(other, &T::one())?;
        Ok(c)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChainError> {
        let mut c = self.clone();
        c.try_add_scaled(other, &-T::one())?;
        Ok(c)
    }

    pub fn scaled(&self, factor: &T) -> Self {
        let mut c = Self::zero(self.dim, self.degree);
        if !factor.is_zero() {
            c.terms = self
                .terms
                .iter()
                .map(|(s, k)| (s.clone(), k.clone() * factor.clone()))
                .collect();
        }
        c
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-T::one())
    }

    pub fn l1_norm(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, k| acc + k.abs())
    }

    /// Singular boundary. The boundary of a 0-chain is the zero 0-chain.
    pub fn boundary(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (s, k) in &self.terms {
            for i in 0..=self.degree {
                let c = if i % 2 == 0 { k.clone() } else { -k.clone() };
                out.add_term(s.face(i), c);
            }
        }
        out
    }

    pub fn pushforward(&self, f: &LinearTorusMap<T>) -> Result<Self, ChainError> {
        if f.source_dim() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: f.source_dim(),
                found: self.dim,
            });
        }
        let mut out = Self::zero(f.target_dim(), self.degree);
        for (s, k) in &self.terms {
            out.add_term(f.push_simplex(s), k.clone());
        }
        Ok(out)
    }

    /// Prism operator for the translation homotopy along `v`.
    pub fn prism(&self, v: &[T]) -> Result<Self, ChainError> {
        if v.len() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let n = self.dim;
        let k = self.degree;
        let mut out = Self::zero(n, k + 1);
        for (s, coeff) in &self.terms {
            let q = s.flat();
            for i in 0..=k {
                let split = k - i;
                let mut coords = Vec::with_capacity((k + 2) * n);
                coords.extend_from_slice(&q[..(split + 1) * n]);
                for j in split..=k {
                    coords.extend(q[j * n..(j + 1) * n].iter().zip(v).map(|(a, b)| a.clone() + b.clone()));
                }
                let c = if i % 2 == 0 { coeff.clone() } else { -coeff.clone() };
                out.add_term(StraightSimplex::from_flat(n, coords), c);
            }
        }
        Ok(out)
    }
}
