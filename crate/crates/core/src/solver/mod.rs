//! Certificate-producing solvers for weighted zero-sum subsequences.
//!
//! [`dp`] holds the complete decision procedures (reachable-sum DP with
//! backtracking). [`pipelines`] and [`cubp`] hold the constructive routes for
//! unit weights, which never report "not found" when their preconditions hold.

use std::collections::HashMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::algebra::{mul_mod, ResidueSequence};
use crate::error::{Error, Result};
use crate::weights::WeightSet;

pub mod cubp;
pub mod dp;
pub mod pipelines;

pub use cubp::cubp_solve;
pub use dp::{solve_any, solve_consecutive, solve_fixed_length};
pub use pipelines::{
    cun_pipeline, dun_pipeline, eun_pipeline, lemma_even_weights, lemma_gri_weights, lift_by_p,
};

/// Which zero-sum structure a certificate proves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    AnySubsequence,
    ConsecutiveBlock,
    FixedLength(usize),
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::AnySubsequence => f.write_str("any"),
            CertificateKind::ConsecutiveBlock => f.write_str("consecutive"),
            CertificateKind::FixedLength(l) => write!(f, "length:{l}"),
        }
    }
}

impl std::str::FromStr for CertificateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "any" => Ok(CertificateKind::AnySubsequence),
            "consecutive" => Ok(CertificateKind::ConsecutiveBlock),
            other => other
                .strip_prefix("length:")
                .and_then(|l| l.parse::<usize>().ok())
                .filter(|&l| l > 0)
                .map(CertificateKind::FixedLength)
                .ok_or_else(|| Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

/// Selected positions (0-based, ascending) and a weight for each; valid when
/// `Σ weights[k] · x[indices[k]] ≡ 0 (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumCertificate {
    pub kind: CertificateKind,
    pub modulus: u64,
    pub indices: Vec<usize>,
    pub weights: Vec<u64>,
}

impl ZeroSumCertificate {
    /// Check the certificate against a sequence and weight set by direct
    /// evaluation. Returns the reason on failure.
    pub fn check(&self, seq: &ResidueSequence, weights: &WeightSet) -> std::result::Result<(), String> {
        let n = seq.modulus();
        if self.modulus != n || weights.modulus() != n {
            return Err(format!(
                "modulus mismatch: certificate {}, sequence {n}, weights {}",
                self.modulus,
                weights.modulus()
            ));
        }
        self.check_shape(seq.len())?;
        if let Some(w) = self.weights.iter().find(|&&w| !weights.contains(w)) {
            return Err(format!("weight {w} is not in the weight set"));
        }
        let total = self
            .indices
            .iter()
            .zip(&self.weights)
            .fold(0u64, |acc, (&i, &w)| (acc + mul_mod(w, seq.terms()[i], n)) % n);
        if total != 0 {
            return Err(format!("weighted sum is {total}, not 0 mod {n}"));
        }
        Ok(())
    }

    pub fn verify(&self, seq: &ResidueSequence, weights: &WeightSet) -> bool {
        self.check(seq, weights).is_ok()
    }

    pub(crate) fn check_shape(&self, len: usize) -> std::result::Result<(), String> {
        if self.indices.is_empty() {
            return Err("empty index set".into());
        }
        if self.indices.len() != self.weights.len() {
            return Err("indices and weights differ in length".into());
        }
        if !self.indices.windows(2).all(|w| w[0] < w[1]) {
            return Err("indices must be strictly increasing".into());
        }
        if self.indices.last().is_some_and(|&i| i >= len) {
            return Err("index out of range".into());
        }
        match self.kind {
            CertificateKind::AnySubsequence => {}
            CertificateKind::ConsecutiveBlock => {
                if self.indices.last().unwrap() - self.indices[0] + 1 != self.indices.len() {
                    return Err("block is not contiguous".into());
                }
            }
            CertificateKind::FixedLength(l) => {
                if self.indices.len() != l {
                    return Err(format!("expected {l} indices, got {}", self.indices.len()));
                }
            }
        }
        Ok(())
    }

    /// Selected positions in the 1-based convention used for display.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

// {"kind":"consecutive","n":8,"indices":[2,3,4],"weights":{"2":1,"3":5,"4":1}}
// Indices are 1-based on the wire.
impl Serialize for ZeroSumCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Weights<'a>(&'a ZeroSumCertificate);
        impl Serialize for Weights<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.indices.len()))?;
                for (i, w) in self.0.indices.iter().zip(&self.0.weights) {
                    map.serialize_entry(&(i + 1).to_string(), w)?;
                }
                map.end()
            }
        }
        let (kind, length) = match self.kind {
            CertificateKind::AnySubsequence => ("any", None),
            CertificateKind::ConsecutiveBlock => ("consecutive", None),
            CertificateKind::FixedLength(l) => ("length", Some(l)),
        };
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("kind", kind)?;
        if let Some(l) = length {
            map.serialize_entry("length", &l)?;
        }
        map.serialize_entry("n", &self.modulus)?;
        map.serialize_entry("indices", &self.one_based())?;
        map.serialize_entry("weights", &Weights(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for ZeroSumCertificate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            kind: String,
            length: Option<usize>,
            n: u64,
            indices: Vec<usize>,
            weights: HashMap<String, u64>,
        }
        let w = Wire::deserialize(deserializer)?;
        let kind = match (w.kind.as_str(), w.length) {
            ("any", None) => CertificateKind::AnySubsequence,
            ("consecutive", None) => CertificateKind::ConsecutiveBlock,
            ("length", Some(l)) => CertificateKind::FixedLength(l),
            (k, _) => return Err(de::Error::custom(format!("bad certificate kind {k:?}"))),
        };
        let mut indices = Vec::with_capacity(w.indices.len());
        let mut weights = Vec::with_capacity(w.indices.len());
        for i in w.indices {
            if i == 0 {
                return Err(de::Error::custom("indices are 1-based"));
            }
            let weight = w
                .weights
                .get(&i.to_string())
                .ok_or_else(|| de::Error::custom(format!("no weight for index {i}")))?;
            indices.push(i - 1);
            weights.push(*weight);
        }
        Ok(ZeroSumCertificate {
            kind,
            modulus: w.n,
            indices,
            weights,
        })
    }
}

/// How a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Dp,
    ConstructiveCun,
    ConstructiveDun,
    ConstructiveEun,
    LemmaEven,
    LemmaB,
    Cubp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Found(ZeroSumCertificate),
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverVerdict {
    pub outcome: Outcome,
    pub method: SolverMethod,
}

impl SolverVerdict {
    pub fn found(&self) -> Option<&ZeroSumCertificate> {
        match &self.outcome {
            Outcome::Found(c) => Some(c),
            Outcome::NotFound => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.outcome, Outcome::Found(_))
    }
}

/// Run the complete DP solver for the given kind.
pub fn solve(
    seq: &ResidueSequence,
    weights: &WeightSet,
    kind: CertificateKind,
) -> Result<SolverVerdict> {
    match kind {
        CertificateKind::AnySubsequence => Ok(solve_any(seq, weights)),
        CertificateKind::ConsecutiveBlock => Ok(solve_consecutive(seq, weights)),
        CertificateKind::FixedLength(l) => solve_fixed_length(seq, weights, l),
    }
}
