//! Closed forms for the constants.

use crate::algebra::{gcd, is_prime, RingSpec};
use crate::error::{Error, Result};
use crate::weights::{WeightSet, WeightSetSpec};

use super::{ConstantKind, ConstantResult, Method};

/// `D` value and formula id for a weight set, when a closed form covers it.
/// `C` is handled alongside since most families share the argument.
struct Known {
    d: Option<(u64, &'static str)>,
    c: Option<(u64, &'static str)>,
    /// `E` given directly (otherwise `D + n - 1`).
    e: Option<(u64, &'static str)>,
}

const NONE: Known = Known {
    d: None,
    c: None,
    e: None,
};

fn classify(ring: &RingSpec, a: &WeightSet) -> Known {
    let n = ring.n();
    let vals = a.values();
    let omega = u64::from(ring.big_omega());

    if vals == ring.units().as_slice() {
        return Known {
            d: Some((omega + 1, "units-omega+1")),
            c: Some((1 << omega, "units-2^omega")),
            e: Some((n + omega, "units-n+omega")),
        };
    }
    if vals.len() == 1 && gcd(vals[0], n) == 1 {
        return Known {
            d: Some((n, "cyclic-n")),
            c: Some((n, "cyclic-n")),
            e: None,
        };
    }
    // {1, ..., r}
    let r = vals.len() as u64;
    if r < n && vals.iter().enumerate().all(|(i, &v)| v == i as u64 + 1) {
        let v = n.div_ceil(r);
        return Known {
            d: Some((v, "interval-ceil(n/r)")),
            c: Some((v, "interval-ceil(n/r)")),
            e: None,
        };
    }
    let all_odd = vals.iter().all(|v| v % 2 == 1);
    let all_even = vals.iter().all(|v| v % 2 == 0);
    if n.is_multiple_of(2) {
        let v2 = ring.valuation(2);
        let m = n >> v2;
        // any {m} ⊆ A ⊆ odd elements
        if all_odd && a.contains(m) {
            return Known {
                d: Some((u64::from(v2) + 1, "odd-v2+1")),
                c: Some((1 << v2, "odd-2^v2")),
                e: None,
            };
        }
        if all_even && vals.len() as u64 == n / 2 - 1 {
            return Known {
                d: Some((2, "even-2")),
                c: Some((2, "even-2")),
                e: None,
            };
        }
    } else if n >= 3 && vals.len() as u64 == (n - 1) / 2 && (all_odd || all_even) {
        return Known {
            d: Some((3, "half-3")),
            c: Some((3, "half-3")),
            e: None,
        };
    }
    NONE
}

/// Prime `p ≡ 1 (mod k)` and `A = U(p)^k`: `D ≥ 3` always, and `D ≤ k` when
/// `p`, `k` are odd primes with `p ≢ 1 (mod k²)`.
fn kth_power_bounds(n: u64, k: u32) -> Option<(u64, Option<u64>)> {
    let k = u64::from(k);
    if !is_prime(n) || !(n - 1).is_multiple_of(k) {
        return None;
    }
    let upper = (n > 2 && k > 2 && is_prime(k) && !(n - 1).is_multiple_of(k * k)).then_some(k);
    Some((3, upper))
}

fn result(kind: ConstantKind, n: u64, spec: &WeightSetSpec, value: u64, method: Method) -> ConstantResult {
    ConstantResult {
        kind,
        n,
        weights: spec.clone(),
        value,
        method,
        witness: None,
    }
}

/// Predict a constant from the closed forms. Uncovered cases are
/// [`Error::NoFormula`]; partial knowledge is reported with
/// [`Method::UpperBoundOnly`].
pub fn predict(kind: ConstantKind, n: u64, spec: &WeightSetSpec) -> Result<ConstantResult> {
    let ring = RingSpec::new(n)?;
    let a = spec.materialize_in(&ring)?;
    let uncovered = || Error::NoFormula(format!("{kind} for {spec} modulo {n}"));

    if let WeightSetSpec::UnitKthPowers(k) = spec {
        if a.values() != ring.units().as_slice() {
            let (lower, upper) = kth_power_bounds(n, *k).ok_or_else(uncovered)?;
            let upper = upper.ok_or_else(uncovered)?;
            let (value, method) = if upper == lower {
                (upper, Method::ClosedForm("kth-power-3".into()))
            } else {
                (upper, Method::UpperBoundOnly)
            };
            return match kind {
                ConstantKind::D => Ok(result(kind, n, spec, value, method)),
                ConstantKind::E if upper == lower => Ok(result(
                    kind,
                    n,
                    spec,
                    value + n - 1,
                    Method::ClosedForm("kth-power-3,d+n-1".into()),
                )),
                _ => Err(uncovered()),
            };
        }
    }

    let known = classify(&ring, &a);
    let (value, id) = match kind {
        ConstantKind::D => known.d.ok_or_else(uncovered)?,
        ConstantKind::C => known.c.ok_or_else(uncovered)?,
        ConstantKind::E => match (known.e, known.d) {
            (Some(e), _) => e,
            (None, Some((d, _))) => (d + n - 1, "d+n-1"),
            (None, None) => return Err(uncovered()),
        },
    };
    let id = match (kind, known.e.is_none(), known.d) {
        (ConstantKind::E, true, Some((_, d_id))) => format!("{d_id},{id}"),
        _ => id.to_string(),
    };
    Ok(result(kind, n, spec, value, Method::ClosedForm(id)))
}
