//! JSON container for certificates. Integers are decimal strings.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::expr::{MoveKind, MoveRecord};
use super::{FillError, FillingCertificate};
use crate::chains::ChainRecord;
use crate::Chain;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub kind: MoveKind,
    pub params: Vec<String>,
    pub lifts: usize,
    pub cost: String,
    pub class_delta: Vec<String>,
}

impl From<&MoveRecord> for TraceRecord {
    fn from(r: &MoveRecord) -> Self {
        Self {
            kind: r.kind,
            params: r.params.iter().map(ToString::to_string).collect(),
            lifts: r.lifts,
            cost: r.cost.to_string(),
            class_delta: r.class_delta.minors.iter().map(ToString::to_string).collect(),
        }
    }
}

/// On-disk certificate; `degree` is the degree of the target cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub version: u32,
    pub ambient_dim: usize,
    pub degree: usize,
    pub target: Vec<ChainRecord>,
    pub witness: Vec<ChainRecord>,
    pub cost: String,
    #[serde(default)]
    pub trace: Vec<TraceRecord>,
}

impl CertificateFile {
    pub fn from_certificate(cert: &FillingCertificate, trace: &[MoveRecord]) -> Self {
        Self {
            version: FORMAT_VERSION,
            ambient_dim: cert.target.ambient_dim(),
            degree: cert.target.degree(),
            target: cert.target.to_records(),
            witness: cert.witness.to_records(),
            cost: cert.cost.to_string(),
            trace: trace.iter().map(TraceRecord::from).collect(),
        }
    }

    /// Rebuilds the certificate, keeping the stored cost so that verification can catch tampering.
    pub fn certificate(&self) -> Result<FillingCertificate, FillError> {
        if self.version != FORMAT_VERSION {
            return Err(FillError::Io(format!("unsupported certificate version {}", self.version)));
        }
        let target = Chain::from_records(self.ambient_dim, self.degree, &self.target)?;
        let witness = Chain::from_records(self.ambient_dim, self.degree + 1, &self.witness)?;
        let cost: BigInt = self
            .cost
            .trim()
            .parse()
            .map_err(|_| FillError::Io(format!("bad cost {:?}", self.cost)))?;
        Ok(FillingCertificate { target, witness, cost })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, FillError> {
        serde_json::from_str(s).map_err(|e| FillError::Io(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, FillError> {
        let s = std::fs::read_to_string(path).map_err(|e| FillError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn write(&self, path: &Path) -> Result<(), FillError> {
        std::fs::write(path, self.to_json()).map_err(|e| FillError::Io(format!("{}: {e}", path.display())))
    }
}

/// Bare cycle container used as input to `fill`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleFile {
    pub ambient_dim: usize,
    pub degree: usize,
    pub cycle: Vec<ChainRecord>,
}

impl CycleFile {
    pub fn from_chain(c: &Chain) -> Self {
        Self {
            ambient_dim: c.ambient_dim(),
            degree: c.degree(),
            cycle: c.to_records(),
        }
    }

    pub fn chain(&self) -> Result<Chain, FillError> {
        Ok(Chain::from_records(self.ambient_dim, self.degree, &self.cycle)?)
    }
}
