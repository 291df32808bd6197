//! Integral chains of straight simplices on tori.

mod chain;
mod cycles;
mod degree;
mod map;
mod serial;
mod simplex;

use thiserror::Error;

pub use chain::TorusChain;
pub use cycles::{
    coordinate_subsets, parallelogram_class, parallelogram_cycle, perm_sign, rectangle_cycle,
    rectangle_gens, HomologyClassVector,
};
pub use degree::{degree, degree_at_point, random_generic_point};
pub use map::LinearTorusMap;
pub use serial::ChainRecord;
pub use simplex::StraightSimplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("simplex needs at least one vertex")]
    EmptySimplex,
    #[error("sample point lies on a face; resample")]
    NonGenericPoint,
    #[error("degree is defined for top-degree chains only (degree {degree} in dimension {dim})")]
    NotTopDegree { degree: usize, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
