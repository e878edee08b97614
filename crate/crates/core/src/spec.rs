//! Problem descriptions on the wire: the embedding matrix, the
//! parameter, and run options, round-tripping losslessly through JSON.
//! Matrix entries serialize as plain numbers while they fit an i64 and
//! as decimal strings beyond that, so arbitrarily large entries survive.

use num::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, Parameter};
use crate::intmat::IntMat;
use crate::lattice::{validate_embedding, LatticeError, TorusEmbedding};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix entry '{0}' is not an integer")]
    BadEntry(String),
    #[error("rho rows have inconsistent lengths")]
    RaggedMatrix,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

/// An integer that stays exact in JSON: a number when small, a decimal
/// string when large.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireInt {
    Small(i64),
    Big(String),
}

impl WireInt {
    pub fn from_bigint(v: &BigInt) -> Self {
        match i64::try_from(v) {
            Ok(s) => WireInt::Small(s),
            Err(_) => WireInt::Big(v.to_string()),
        }
    }

    pub fn to_bigint(&self) -> Result<BigInt, SpecError> {
        match self {
            WireInt::Small(v) => Ok(BigInt::from(*v)),
            WireInt::Big(s) => s
                .parse()
                .map_err(|_| SpecError::BadEntry(s.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub rho: Vec<Vec<WireInt>>,
    pub lambda: Vec<i64>,
    pub p: i64,
    #[serde(default)]
    pub options: Options,
}

impl ProblemSpec {
    pub fn new(rho_rows: &[Vec<i64>], lambda: Vec<i64>, p: i64) -> Self {
        ProblemSpec {
            rho: rho_rows
                .iter()
                .map(|r| r.iter().map(|&v| WireInt::Small(v)).collect())
                .collect(),
            lambda,
            p,
            options: Options::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn embedding(&self) -> Result<TorusEmbedding, SpecError> {
        let n = self.rho.len();
        let k = self.rho.first().map_or(0, |r| r.len());
        if self.rho.iter().any(|r| r.len() != k) {
            return Err(SpecError::RaggedMatrix);
        }
        let mut m = IntMat::zero(n, k);
        for (i, row) in self.rho.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.to_bigint()?;
            }
        }
        Ok(validate_embedding(m)?)
    }

    pub fn arrangement(&self) -> Result<Arrangement, SpecError> {
        let emb = self.embedding()?;
        let param = Parameter::new(self.lambda.clone(), self.p)?;
        Ok(Arrangement::new(emb, param)?)
    }

    pub fn truncation(&self) -> usize {
        self.options.truncation.unwrap_or(4)
    }

    pub fn seed(&self) -> u64 {
        self.options.seed.unwrap_or(0)
    }

    /// The worked three-chamber example: scalar torus in rank 3.
    pub fn p2_example(lambda: i64) -> Self {
        ProblemSpec::new(&[vec![1], vec![1], vec![1]], vec![lambda], 5)
    }
}
