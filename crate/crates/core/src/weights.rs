//! Weight sets `A ⊆ Z_n`: a symbolic descriptor and its materialization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{gcd, mul_mod, pow_mod, reduce, RingSpec};
use crate::error::{Error, Result};

/// Symbolic weight set, independent of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightSetSpec {
    /// `U(n)`.
    Units,
    /// `U(n)^k = { x^k : x ∈ U(n) }`.
    UnitKthPowers(u32),
    /// Odd representatives in `[1, n)`.
    Odd,
    /// Even representatives in `[2, n)`; zero is excluded.
    Even,
    /// `{1, 2, ..., r}`.
    Interval(u64),
    Singleton(u64),
    One,
    Explicit(Vec<i64>),
}

impl WeightSetSpec {
    pub fn materialize(&self, n: u64) -> Result<WeightSet> {
        let ring = RingSpec::new(n)?;
        self.materialize_in(&ring)
    }

    pub fn materialize_in(&self, ring: &RingSpec) -> Result<WeightSet> {
        let n = ring.n();
        let mut values: Vec<u64> = match self {
            WeightSetSpec::Units => ring.units(),
            WeightSetSpec::UnitKthPowers(k) => {
                if *k < 2 {
                    return Err(Error::InvalidWeightSpec(format!(
                        "unit power exponent must be at least 2, got {k}"
                    )));
                }
                ring.units()
                    .into_iter()
                    .map(|x| pow_mod(x, u64::from(*k), n))
                    .collect()
            }
            WeightSetSpec::Odd => (1..n).step_by(2).collect(),
            WeightSetSpec::Even => (2..n).step_by(2).collect(),
            WeightSetSpec::Interval(r) => {
                if *r == 0 || *r >= n {
                    return Err(Error::InvalidWeightSpec(format!(
                        "interval bound must satisfy 1 <= r < {n}, got {r}"
                    )));
                }
                (1..=*r).collect()
            }
            WeightSetSpec::Singleton(m) => {
                if *m >= n {
                    return Err(Error::InvalidWeightSpec(format!(
                        "singleton weight {m} is not in [0, {n})"
                    )));
                }
                vec![*m]
            }
            WeightSetSpec::One => vec![1 % n],
            WeightSetSpec::Explicit(xs) => xs.iter().map(|&x| reduce(x, n)).collect(),
        };
        values.sort_unstable();
        values.dedup();
        if values.is_empty() {
            return Err(Error::EmptyWeightSet {
                spec: self.to_string(),
                n,
            });
        }
        Ok(WeightSet {
            spec: self.clone(),
            modulus: n,
            values,
        })
    }
}

impl fmt::Display for WeightSetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSetSpec::Units => f.write_str("units"),
            WeightSetSpec::UnitKthPowers(k) => write!(f, "units^k:{k}"),
            WeightSetSpec::Odd => f.write_str("odd"),
            WeightSetSpec::Even => f.write_str("even"),
            WeightSetSpec::Interval(r) => write!(f, "interval:{r}"),
            WeightSetSpec::Singleton(m) => write!(f, "singleton:{m}"),
            WeightSetSpec::One => f.write_str("one"),
            WeightSetSpec::Explicit(xs) => {
                let parts: Vec<String> = xs.iter().map(i64::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for WeightSetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unrecognized weight set {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.trim())),
            None => (s, None),
        };
        let int_arg = |a: Option<&str>| -> Result<u64> {
            a.ok_or_else(bad)?
                .parse::<u64>()
                .map_err(|_| bad())
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("units", None) => Ok(WeightSetSpec::Units),
            ("units^k", a) => {
                let k = int_arg(a)?;
                Ok(WeightSetSpec::UnitKthPowers(u32::try_from(k).map_err(|_| bad())?))
            }
            ("odd", None) => Ok(WeightSetSpec::Odd),
            ("even", None) => Ok(WeightSetSpec::Even),
            ("interval", a) => Ok(WeightSetSpec::Interval(int_arg(a)?)),
            ("singleton", a) => Ok(WeightSetSpec::Singleton(int_arg(a)?)),
            ("one", None) => Ok(WeightSetSpec::One),
            ("explicit", Some(a)) => {
                let mut xs = crate::algebra::parse_values(a)?;
                if xs.is_empty() {
                    return Err(bad());
                }
                xs.sort_unstable();
                xs.dedup();
                Ok(WeightSetSpec::Explicit(xs))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for WeightSetSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightSetSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A materialized, nonempty weight set modulo `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSet {
    spec: WeightSetSpec,
    modulus: u64,
    values: Vec<u64>,
}

impl WeightSet {
    /// A weight set given directly by its residues.
    pub fn from_values(modulus: u64, values: &[u64]) -> Result<Self> {
        let spec = WeightSetSpec::Explicit(values.iter().map(|&v| v as i64).collect());
        spec.materialize(modulus)
    }

    pub fn spec(&self) -> &WeightSetSpec {
        &self.spec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Sorted, deduplicated residues.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.values.binary_search(&(x % self.modulus)).is_ok()
    }

    /// True when every element is a unit and the set is closed under
    /// multiplication, i.e. it is a subgroup of `U(n)`.
    pub fn is_unit_subgroup(&self) -> bool {
        let n = self.modulus;
        self.values.iter().all(|&a| gcd(a, n) == 1)
            && self.values.iter().all(|&a| {
                self.values
                    .iter()
                    .all(|&b| self.contains(mul_mod(a, b, n)))
            })
    }
}
