use num_bigint::BigInt;
use num_traits::Signed;

use super::expr::CycleExpr;
use crate::{Chain, Simplex};

/// A witness chain whose boundary is the target cycle. `cost` is the l1 norm of the witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillingCertificate {
    pub target: Chain,
    pub witness: Chain,
    pub cost: BigInt,
}

impl FillingCertificate {
    pub fn new(target: Chain, witness: Chain) -> Self {
        let cost = witness.l1_norm();
        Self { target, witness, cost }
    }

    pub fn verify(&self) -> Verification {
        verify_certificate(self, None)
    }
}

/// Face where boundary(witness) and target disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMismatch {
    pub face: Simplex,
    pub expected: BigInt,
    pub found: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub ok: bool,
    pub boundary_ok: bool,
    pub cost_ok: bool,
    /// Present when a parallelogram expression for the target was supplied.
    pub class_ok: Option<bool>,
    /// First few faces where the boundary differs.
    pub mismatches: Vec<FaceMismatch>,
    pub mismatch_count: usize,
}

const MAX_REPORTED: usize = 8;

/// Exact check of a certificate; `expr` adds the class-sum test.
pub fn verify_certificate(cert: &FillingCertificate, expr: Option<&CycleExpr>) -> Verification {
    let shape_ok = cert.witness.ambient_dim() == cert.target.ambient_dim()
        && (cert.witness.degree() == cert.target.degree() + 1 || cert.witness.is_zero());
    let mut diff = if shape_ok {
        cert.witness.boundary()
    } else {
        Chain::zero(cert.target.ambient_dim(), cert.target.degree())
    };
    if shape_ok && diff.degree() != cert.target.degree() {
        diff = Chain::zero(cert.target.ambient_dim(), cert.target.degree());
    }
    let diff = diff.sub(&cert.target).unwrap_or_else(|_| cert.target.neg());
    let mismatches: Vec<FaceMismatch> = diff
        .iter()
        .take(MAX_REPORTED)
        .map(|(s, d)| {
            let expected = cert.target.coeff(s);
            FaceMismatch {
                face: s.clone(),
                found: &expected + d,
                expected,
            }
        })
        .collect();
    let boundary_ok = shape_ok && diff.is_zero();
    let cost_ok = cert.cost == cert.witness.l1_norm() && !cert.cost.is_negative();
    let class_ok = expr.map(|e| {
        let chain_matches = e.to_chain().map(|c| c == cert.target).unwrap_or(false);
        chain_matches && e.class().map(|c| c.is_zero()).unwrap_or(false)
    });
    Verification {
        ok: boundary_ok && cost_ok && class_ok.unwrap_or(true),
        boundary_ok,
        cost_ok,
        class_ok,
        mismatch_count: diff.len(),
        mismatches,
    }
}
