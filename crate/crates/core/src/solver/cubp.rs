//! Zero-sum certificates with `k`-th power residue weights modulo a prime.
//!
//! With `p ≡ 1 (mod k)` and `p ≢ 1 (mod k²)`, `U(p)^k` has index `k` in `U(p)`
//! and its cosets are `U(p)^k · c^l` for an element `c` of order `k`. Either
//! two terms share a coset, or `k` terms cover all cosets and
//! `1 + c + ... + c^(k-1) = 0` supplies the weights.

use crate::algebra::{inv_mod, is_prime, mul_mod, pow_mod, primitive_root, ResidueSequence};
use crate::error::{Error, Result};

use super::{CertificateKind, ZeroSumCertificate};

/// Coset structure of `U(p)^k` inside `U(p)`.
#[derive(Debug, Clone)]
pub struct PowerCosets {
    p: u64,
    k: u64,
    c: u64,
    c_inv: u64,
}

impl PowerCosets {
    pub fn new(p: u64, k: u64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::Precondition(format!("{p} is not an odd prime")));
        }
        if !is_prime(k) || k == 2 {
            return Err(Error::Precondition(format!("{k} is not an odd prime")));
        }
        if !(p - 1).is_multiple_of(k) {
            return Err(Error::Precondition(format!("{p} is not 1 mod {k}")));
        }
        if k.checked_mul(k).is_some_and(|k2| (p - 1).is_multiple_of(k2)) {
            return Err(Error::Precondition(format!("{p} is 1 mod {k}^2")));
        }
        let g = primitive_root(p).expect("primes have primitive roots");
        let c = pow_mod(g, (p - 1) / k, p);
        let c_inv = inv_mod(c, p).expect("c is a unit");
        Ok(Self { p, k, c, c_inv })
    }

    /// The fixed element of order `k`.
    pub fn generator(&self) -> u64 {
        self.c
    }

    pub fn is_power(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p) && pow_mod(x, (self.p - 1) / self.k, self.p) == 1
    }

    /// `(a, l)` with `x = a · c^l`, `a ∈ U(p)^k`, `0 ≤ l < k`.
    pub fn decompose(&self, x: u64) -> (u64, u64) {
        let mut a = x % self.p;
        for l in 0..self.k {
            if self.is_power(a) {
                return (a, l);
            }
            a = mul_mod(a, self.c_inv, self.p);
        }
        unreachable!("the k cosets cover U(p)")
    }
}

/// Certificate for a sequence of at least `k` units modulo `p` with weights in
/// `U(p)^k`. Prefers the lexicographically smallest same-coset pair.
pub fn cubp_solve(seq: &ResidueSequence, k: u64) -> Result<ZeroSumCertificate> {
    let p = seq.modulus();
    let cosets = PowerCosets::new(p, k)?;
    if (seq.len() as u64) < k {
        return Err(Error::Precondition(format!(
            "need at least {k} terms, got {}",
            seq.len()
        )));
    }
    if let Some(x) = seq.terms().iter().find(|&&x| x == 0) {
        return Err(Error::Precondition(format!("term {x} is not a unit")));
    }
    let parts: Vec<(u64, u64)> = seq.terms().iter().map(|&x| cosets.decompose(x)).collect();

    let pair = (0..parts.len())
        .flat_map(|i| (i + 1..parts.len()).map(move |j| (i, j)))
        .find(|&(i, j)| parts[i].1 == parts[j].1);

    let (indices, weights) = match pair {
        Some((i, j)) => {
            let (a, _) = parts[i];
            let (b, _) = parts[j];
            (vec![i, j], vec![(p - b) % p, a])
        }
        None => {
            let k = k as usize;
            let weights = parts[..k]
                .iter()
                .map(|&(a, _)| inv_mod(a, p).expect("units invert"))
                .collect();
            ((0..k).collect(), weights)
        }
    };
    Ok(ZeroSumCertificate {
        kind: CertificateKind::AnySubsequence,
        modulus: p,
        indices,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSetSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seq(n: u64, xs: &[i64]) -> ResidueSequence {
        ResidueSequence::new(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn order_k_element() {
        assert_eq!(PowerCosets::new(7, 3).unwrap().generator(), 2);
        let c = PowerCosets::new(31, 3).unwrap().generator();
        assert_eq!(c, 25); // 3^10 mod 31
        assert_ne!(c, 1);
        assert_eq!(pow_mod(c, 3, 31), 1);
    }

    #[test]
    fn examples() {
        let powers = WeightSetSpec::UnitKthPowers(3).materialize(7).unwrap();
        assert_eq!(powers.values(), &[1, 6]);

        let s = seq(7, &[2, 2, 5]);
        let c = cubp_solve(&s, 3).unwrap();
        assert_eq!((c.indices.clone(), c.weights.clone()), (vec![0, 1], vec![6, 1]));
        c.check(&s, &powers).unwrap();

        let s = seq(7, &[1, 2, 3]);
        let c = cubp_solve(&s, 3).unwrap();
        assert_eq!((c.indices.clone(), c.weights.clone()), (vec![0, 1, 2], vec![1, 1, 6]));
        c.check(&s, &powers).unwrap();
    }

    #[test]
    fn rejects_outside_regime() {
        assert!(cubp_solve(&seq(7, &[1, 2]), 3).is_err());
        assert!(cubp_solve(&seq(7, &[1, 2, 0]), 3).is_err());
        assert!(cubp_solve(&seq(13, &[1, 2, 3]), 3).is_ok());
        assert!(cubp_solve(&seq(19, &[1, 2, 3]), 3).is_err()); // 19 ≡ 1 mod 9
        assert!(cubp_solve(&seq(11, &[1, 2, 3]), 3).is_err());
        assert!(cubp_solve(&seq(7, &[1, 2, 3]), 2).is_err());
    }

    fn all_sequences(p: u64, k: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (1..p).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn exhaustive_small_primes() {
        for (p, k) in [(7u64, 3usize), (11, 5)] {
            let powers = WeightSetSpec::UnitKthPowers(k as u32).materialize(p).unwrap();
            for xs in all_sequences(p, k) {
                let s = ResidueSequence::from_values(p, &xs).unwrap();
                cubp_solve(&s, k as u64).unwrap().check(&s, &powers).unwrap();
            }
        }
    }

    #[test]
    fn random_p31() {
        let powers = WeightSetSpec::UnitKthPowers(3).materialize(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let xs: Vec<u64> = (0..3).map(|_| rng.random_range(1..31)).collect();
            let s = ResidueSequence::from_values(31, &xs).unwrap();
            cubp_solve(&s, 3).unwrap().check(&s, &powers).unwrap();
        }
    }
}
