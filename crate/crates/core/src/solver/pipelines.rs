//! Constructive unit-weight routes.
//!
//! Each term `x_j` gets an indicator row whose columns are the sets
//! `X_i^(p) = { j : x_j ≢ 0 mod p^i }` for every prime power `p^i` dividing `n`.
//! A selection with even intersection against every column admits unit weights
//! prime by prime; those are glued with the Chinese remainder theorem.

use crate::algebra::{crt, gcd, inv_mod, is_prime, mul_mod, ResidueSequence, RingSpec};
use crate::error::{Error, Result};
use crate::gf2::{self, GF2Matrix, GF2Vector, SupportSelection};
use crate::weights::WeightSetSpec;

use super::{CertificateKind, Outcome, SolverMethod, SolverVerdict, ZeroSumCertificate};

/// One row per term, one column per prime power `p^i | n` (`i ≥ 1`).
pub fn indicator_matrix(seq: &ResidueSequence, ring: &RingSpec) -> GF2Matrix {
    let cols: Vec<u64> = ring
        .factors()
        .iter()
        .flat_map(|&(p, r)| (1..=r).map(move |i| p.pow(i)))
        .collect();
    let rows = seq
        .terms()
        .iter()
        .map(|&x| {
            let bits: Vec<bool> = cols.iter().map(|&q| x % q != 0).collect();
            GF2Vector::from_bits(&bits)
        })
        .collect();
    GF2Matrix::new(rows, cols.len()).expect("rows share the column count")
}

fn ring_for(seq: &ResidueSequence) -> Result<RingSpec> {
    if seq.modulus() < 2 {
        return Err(Error::Precondition("modulus must be at least 2".into()));
    }
    RingSpec::new(seq.modulus())
}

/// Unit weights for the selected indices, prime power by prime power.
fn assemble_weights(seq: &ResidueSequence, ring: &RingSpec, indices: &[usize]) -> Result<Vec<u64>> {
    let chosen = seq.select(indices);
    let mut per_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for (p, _, q) in ring.prime_powers() {
        let local = chosen.project(q)?;
        per_prime.push((q, lemma_gri_weights(&local, p)?));
    }
    (0..indices.len())
        .map(|k| {
            let congruences: Vec<(u64, u64)> =
                per_prime.iter().map(|(q, w)| (w[k] % q, *q)).collect();
            crt(&congruences)
                .map(|(a, _)| a)
                .ok_or_else(|| Error::Precondition("incompatible congruences".into()))
        })
        .collect()
}

fn certify(
    seq: &ResidueSequence,
    ring: &RingSpec,
    kind: CertificateKind,
    sel: SupportSelection,
) -> Result<ZeroSumCertificate> {
    let indices = sel.indices();
    let weights = assemble_weights(seq, ring, &indices)?;
    let cert = ZeroSumCertificate {
        kind,
        modulus: ring.n(),
        indices,
        weights,
    };
    let units = WeightSetSpec::Units.materialize_in(ring)?;
    cert.check(seq, &units)
        .map_err(|e| Error::Precondition(format!("constructed certificate failed: {e}")))?;
    Ok(cert)
}

/// Consecutive block with unit weights; needs `|S| ≥ 2^Ω(n)`.
pub fn cun_pipeline(seq: &ResidueSequence) -> Result<ZeroSumCertificate> {
    let ring = ring_for(seq)?;
    let need = 1usize << ring.big_omega();
    if seq.len() < need {
        return Err(Error::Precondition(format!(
            "need at least 2^Ω(n) = {need} terms, got {}",
            seq.len()
        )));
    }
    let sel = gf2::kernel_window(&indicator_matrix(seq, &ring))?;
    certify(seq, &ring, CertificateKind::ConsecutiveBlock, sel)
}

/// Subsequence with unit weights; guaranteed when `|S| ≥ Ω(n) + 1`. Shorter
/// sequences are still accepted when their indicator rows happen to be
/// dependent.
pub fn dun_pipeline(seq: &ResidueSequence) -> Result<ZeroSumCertificate> {
    let ring = ring_for(seq)?;
    let need = ring.big_omega() as usize + 1;
    let sel = gf2::kernel_subset(&indicator_matrix(seq, &ring)).map_err(|_| {
        Error::Precondition(format!(
            "need at least Ω(n) + 1 = {need} terms, got {}",
            seq.len()
        ))
    })?;
    certify(seq, &ring, CertificateKind::AnySubsequence, sel)
}

/// Length-`m` subsequence with unit weights; needs `m` even, `m ≥ 2^Ω(n)` and
/// `|S| ≥ m + Ω(n)`. Only the first `m + Ω(n)` terms are used.
pub fn eun_pipeline(seq: &ResidueSequence, m: usize) -> Result<ZeroSumCertificate> {
    let ring = ring_for(seq)?;
    let omega = ring.big_omega() as usize;
    if m == 0 || m % 2 == 1 {
        return Err(Error::Precondition(format!("length {m} must be even and positive")));
    }
    if m < 1 << omega {
        return Err(Error::Precondition(format!(
            "length {m} is below 2^Ω(n) = {}",
            1usize << omega
        )));
    }
    if seq.len() < m + omega {
        return Err(Error::Precondition(format!(
            "need at least m + Ω(n) = {} terms, got {}",
            m + omega,
            seq.len()
        )));
    }
    let sel = gf2::kernel_fixed_weight(&indicator_matrix(seq, &ring), m)?;
    certify(seq, &ring, CertificateKind::FixedLength(m), sel)
}

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    let mut v = 0;
    let mut x = x;
    while v < cap && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Unit weights over `Z_{p^r}` when every `X_i = { j : x_j ≢ 0 mod p^i }` has
/// even size.
///
/// Terms of equal valuation `v < r` are paired in index order: the first of a
/// pair gets weight 1 and the second the least `a` with
/// `u + a·u' ≡ 0 (mod p^(r-v))`, where `u`, `u'` are the unit parts. Zero terms
/// get weight 1.
pub fn lemma_gri_weights(seq: &ResidueSequence, p: u64) -> Result<Vec<u64>> {
    let q = seq.modulus();
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let mut r = 0u32;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    if rest != 1 || r == 0 {
        return Err(Error::Precondition(format!("{q} is not a power of {p}")));
    }
    let vals: Vec<u32> = seq.terms().iter().map(|&x| valuation(x, p, r)).collect();
    for i in 1..=r {
        let size = vals.iter().filter(|&&v| v < i).count();
        if size % 2 == 1 {
            return Err(Error::Precondition(format!(
                "{size} terms are nonzero mod {p}^{i}; the count must be even"
            )));
        }
    }

    let mut weights = vec![1u64; seq.len()];
    for v in 0..r {
        let class: Vec<usize> = (0..seq.len()).filter(|&j| vals[j] == v).collect();
        let modulus = p.pow(r - v);
        let scale = p.pow(v);
        for pair in class.chunks(2) {
            let (i, j) = (pair[0], pair[1]);
            let ui = seq.terms()[i] / scale % modulus;
            let uj = seq.terms()[j] / scale % modulus;
            let inv = inv_mod(uj, modulus).expect("unit part is invertible");
            weights[j] = (modulus - mul_mod(ui, inv, modulus)) % modulus;
        }
    }
    Ok(weights)
}

/// Unit weights over `Z_{2^r}` when the number of odd terms is even and
/// nonzero. Even terms get weight 1; the odd terms are steered to targets
/// `1, -1, 1, -1, ..., 1, t - 1` where `t` cancels the even part.
pub fn lemma_even_weights(seq: &ResidueSequence) -> Result<Vec<u64>> {
    let q = seq.modulus();
    if q < 2 || !q.is_power_of_two() {
        return Err(Error::Precondition(format!("{q} is not a power of 2 above 1")));
    }
    let odd: Vec<usize> = (0..seq.len()).filter(|&j| seq.terms()[j] % 2 == 1).collect();
    if odd.is_empty() || odd.len() % 2 == 1 {
        return Err(Error::Precondition(format!(
            "need a nonzero even number of units, got {}",
            odd.len()
        )));
    }
    let even_sum = seq
        .terms()
        .iter()
        .filter(|&&x| x % 2 == 0)
        .fold(0u64, |acc, &x| (acc + x) % q);
    let t = (q - even_sum) % q;
    let mut weights = vec![1u64; seq.len()];
    let last = odd.len() - 1;
    for (k, &j) in odd.iter().enumerate() {
        let target = if k == last {
            (t + q - 1) % q
        } else if k % 2 == 0 {
            1
        } else {
            q - 1
        };
        let inv = inv_mod(seq.terms()[j], q).expect("odd residues are units");
        weights[j] = mul_mod(target, inv, q);
    }
    Ok(weights)
}

/// Divide every term by `p`, solve over `Z_{n/p}` with `U(n/p)` weights, and
/// lift each weight to its least unit preimage modulo `n`.
pub fn lift_by_p(seq: &ResidueSequence, p: u64, kind: CertificateKind) -> Result<SolverVerdict> {
    let n = seq.modulus();
    if !is_prime(p) || !n.is_multiple_of(p) {
        return Err(Error::Precondition(format!("{p} is not a prime divisor of {n}")));
    }
    if let Some(x) = seq.terms().iter().find(|&&x| x % p != 0) {
        return Err(Error::Precondition(format!("{p} does not divide the term {x}")));
    }
    let m = n / p;
    let divided = ResidueSequence::from_values(m, &seq.terms().iter().map(|x| x / p).collect::<Vec<_>>())?;
    let units = WeightSetSpec::Units.materialize(m)?;
    let inner = super::solve(&divided, &units, kind)?;
    let outcome = match inner.outcome {
        Outcome::Found(c) => {
            let weights = c
                .weights
                .iter()
                .map(|&w| {
                    (0..p)
                        .map(|k| w % m + k * m)
                        .find(|&a| gcd(a, n) == 1)
                        .expect("U(n) maps onto U(n/p)")
                })
                .collect();
            Outcome::Found(ZeroSumCertificate {
                kind,
                modulus: n,
                indices: c.indices,
                weights,
            })
        }
        Outcome::NotFound => Outcome::NotFound,
    };
    Ok(SolverVerdict {
        outcome,
        method: SolverMethod::LemmaB,
    })
}

/// Run a pipeline and wrap it as a verdict.
pub fn constructive(seq: &ResidueSequence, kind: CertificateKind) -> Result<SolverVerdict> {
    let (cert, method) = match kind {
        CertificateKind::ConsecutiveBlock => (cun_pipeline(seq)?, SolverMethod::ConstructiveCun),
        CertificateKind::AnySubsequence => (dun_pipeline(seq)?, SolverMethod::ConstructiveDun),
        CertificateKind::FixedLength(m) => (eun_pipeline(seq, m)?, SolverMethod::ConstructiveEun),
    };
    Ok(SolverVerdict {
        outcome: Outcome::Found(cert),
        method,
    })
}
