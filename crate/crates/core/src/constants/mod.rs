//! The constants `D_A(n)`, `C_A(n)` and `E_A(n)`: exhaustive computation,
//! closed-form prediction, extremal sequences and lower-bound witnesses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::ResidueSequence;
use crate::error::{Error, Result};
use crate::module::FiniteModule;
use crate::solver::{self, CertificateKind};
use crate::weights::WeightSetSpec;

pub mod extremal;
pub mod predict;
pub mod search;
pub mod witness;

pub use extremal::{
    check_equivalence, classify_c_extremal_pow2, classify_e_extremal_pow2, enumerate_extremal,
    CExtremalTree, EquivalenceWitness,
};
pub use predict::predict;
pub use search::{compute_exhaustive, compute_group_c, compute_group_constant, SearchOptions};
pub use witness::{build_witness_concat_d, build_witness_product_c, c_units_witness};

/// Default search budget, in elementary DP steps.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Which constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstantKind {
    D,
    C,
    E,
}

impl ConstantKind {
    pub const ALL: [ConstantKind; 3] = [ConstantKind::D, ConstantKind::C, ConstantKind::E];

    /// The zero-sum structure whose absence defines an extremal sequence.
    pub fn certificate_kind(self, n: u64) -> CertificateKind {
        match self {
            ConstantKind::D => CertificateKind::AnySubsequence,
            ConstantKind::C => CertificateKind::ConsecutiveBlock,
            ConstantKind::E => CertificateKind::FixedLength(n as usize),
        }
    }

    /// Whether the defining property ignores term order.
    pub fn is_order_free(self) -> bool {
        !matches!(self, ConstantKind::C)
    }
}

impl fmt::Display for ConstantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantKind::D => "D",
            ConstantKind::C => "C",
            ConstantKind::E => "E",
        })
    }
}

impl FromStr for ConstantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "D" | "d" => Ok(ConstantKind::D),
            "C" | "c" => Ok(ConstantKind::C),
            "E" | "e" => Ok(ConstantKind::E),
            other => Err(Error::Parse(format!("unknown constant {other:?}"))),
        }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Method {
    Exhaustive,
    ClosedForm(String),
    /// A witness of length `value - 1` shows `value` is a lower bound.
    LowerWitnessOnly,
    /// `value` is an upper bound only.
    UpperBoundOnly,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exhaustive => f.write_str("exhaustive"),
            Method::ClosedForm(id) => write!(f, "closed_form:{id}"),
            Method::LowerWitnessOnly => f.write_str("lower_witness_only"),
            Method::UpperBoundOnly => f.write_str("upper_bound_only"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Method::Exhaustive),
            "lower_witness_only" => Ok(Method::LowerWitnessOnly),
            "upper_bound_only" => Ok(Method::UpperBoundOnly),
            other => other
                .strip_prefix("closed_form:")
                .filter(|id| !id.is_empty())
                .map(|id| Method::ClosedForm(id.to_string()))
                .ok_or_else(|| Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// A constant's value together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ResultWire", try_from = "ResultWire")]
pub struct ConstantResult {
    pub kind: ConstantKind,
    pub n: u64,
    pub weights: WeightSetSpec,
    pub value: u64,
    pub method: Method,
    /// Sequence of length `value - 1` without the zero-sum structure.
    pub witness: Option<ResidueSequence>,
}

#[derive(Serialize, Deserialize)]
struct ResultWire {
    kind: ConstantKind,
    n: u64,
    weights: WeightSetSpec,
    value: u64,
    method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<u64>>,
}

impl From<ConstantResult> for ResultWire {
    fn from(r: ConstantResult) -> Self {
        ResultWire {
            kind: r.kind,
            n: r.n,
            weights: r.weights,
            value: r.value,
            method: r.method.to_string(),
            witness: r.witness.map(|w| w.terms().to_vec()),
        }
    }
}

impl TryFrom<ResultWire> for ConstantResult {
    type Error = Error;

    fn try_from(w: ResultWire) -> Result<Self> {
        Ok(ConstantResult {
            kind: w.kind,
            n: w.n,
            weights: w.weights,
            value: w.value,
            method: w.method.parse()?,
            witness: w
                .witness
                .map(|t| ResidueSequence::from_values(w.n, &t))
                .transpose()?,
        })
    }
}

impl ConstantResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// True when there is no witness, or the witness has length `value - 1`
    /// and the complete solver finds no qualifying zero-sum structure in it.
    pub fn witness_is_extremal(&self) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(true);
        };
        if w.len() as u64 + 1 != self.value {
            return Ok(false);
        }
        let a = self.weights.materialize(self.n)?;
        let kind = self.kind.certificate_kind(self.n);
        if let CertificateKind::FixedLength(l) = kind {
            if l > w.len() {
                return Ok(true);
            }
        }
        Ok(!solver::solve(w, &a, kind)?.is_found())
    }
}

/// `Z_{n_1} × ... × Z_{n_t}` with every `n_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    module: FiniteModule,
}

impl GroupSpec {
    pub fn new(factors: &[u64]) -> Result<Self> {
        if factors.iter().any(|&f| f < 2) {
            return Err(Error::Precondition("every cyclic factor needs order at least 2".into()));
        }
        Ok(Self {
            module: FiniteModule::product(factors)?,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// `Z_2^a`.
    pub fn elementary_2(a: usize) -> Result<Self> {
        Self::new(&vec![2; a])
    }

    pub fn factors(&self) -> &[u64] {
        self.module.factors()
    }

    pub fn order(&self) -> usize {
        self.module.order()
    }

    pub fn module(&self) -> &FiniteModule {
        &self.module
    }

    /// `G × H`.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut f = self.factors().to_vec();
        f.extend_from_slice(other.factors());
        GroupSpec::new(&f).expect("factors already valid")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors().iter().map(|n| format!("Z_{n}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// A sequence of elements of a [`GroupSpec`], each given by its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSequence {
    pub group: GroupSpec,
    pub terms: Vec<Vec<u64>>,
}

impl GroupSequence {
    pub fn new(group: GroupSpec, terms: Vec<Vec<u64>>) -> Result<Self> {
        for t in &terms {
            if t.len() != group.factors().len() {
                return Err(Error::Precondition(format!(
                    "element {t:?} has the wrong number of coordinates for {group}"
                )));
            }
        }
        let terms = terms
            .into_iter()
            .map(|t| t.iter().zip(group.factors()).map(|(x, f)| x % f).collect())
            .collect();
        Ok(Self { group, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn codes(&self) -> Vec<usize> {
        self.terms
            .iter()
            .map(|t| self.group.module().encode(t))
            .collect()
    }

    /// Does some nonempty subsequence have a zero weighted sum?
    pub fn has_zero_sum(&self, weights: &[u64]) -> bool {
        solver::dp::find_any(self.group.module(), weights, &self.codes()).is_some()
    }

    /// Does some block of consecutive terms have a zero weighted sum?
    pub fn has_zero_sum_block(&self, weights: &[u64]) -> bool {
        solver::dp::find_block(self.group.module(), weights, &self.codes()).is_some()
    }
}
