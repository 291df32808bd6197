use serde::{Deserialize, Serialize};

use super::{ChainError, StraightSimplex, TorusChain};
use crate::scalar::Int;

/// One chain term; integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub coeff: String,
    pub vertices: Vec<Vec<String>>,
}

fn parse_int<T: Int>(s: &str) -> Result<T, ChainError> {
    s.trim()
        .parse::<T>()
        .map_err(|_| ChainError::Parse(format!("not an integer: {s:?}")))
}

impl<T: Int> TorusChain<T> {
    /// Terms in canonical (sorted) order.
    pub fn to_records(&self) -> Vec<ChainRecord> {
        self.iter()
            .map(|(s, k)| ChainRecord {
                coeff: k.to_string(),
                vertices: s
                    .vertices()
                    .map(|v| v.iter().map(ToString::to_string).collect())
                    .collect(),
            })
            .collect()
    }

    pub fn from_records(dim: usize, degree: usize, records: &[ChainRecord]) -> Result<Self, ChainError> {
        let mut terms = Vec::with_capacity(records.len());
        for r in records {
            let coeff: T = parse_int(&r.coeff)?;
            let verts = r
                .vertices
                .iter()
                .map(|v| v.iter().map(|s| parse_int(s)).collect::<Result<Vec<T>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            terms.push((StraightSimplex::canonicalize(&verts)?, coeff));
        }
        TorusChain::from_terms(dim, degree, terms)
    }
}
