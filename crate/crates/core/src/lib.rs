//! Exact filling certificates and spectral bounds for linear self-maps of tori.
//!
//! The exact core is generic over [`scalar::Int`]; the aliases below fix it to `BigInt`.
//! Root finding is generic over [`scalar::Real`] and aliased to `f64`.

pub mod chains;
pub mod exactlinalg;
pub mod filling;
pub mod psl2z;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod spectral;

pub use num_bigint::BigInt;

pub type IntMatrix = exactlinalg::Matrix<BigInt>;
pub type Simplex = chains::StraightSimplex<BigInt>;
pub type Chain = chains::TorusChain<BigInt>;
pub type TorusMap = chains::LinearTorusMap<BigInt>;
