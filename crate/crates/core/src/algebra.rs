//! Arithmetic in `Z_n`: factorization, residues, sequences and the natural
//! projections `Z_n -> Z_m` for `m | n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Reduce a signed integer to its canonical representative in `[0, n)`.
pub fn reduce(x: i64, n: u64) -> u64 {
    (x as i128).rem_euclid(n as i128) as u64
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest primitive root modulo a prime `p`.
pub fn primitive_root(p: u64) -> Option<u64> {
    if !is_prime(p) {
        return None;
    }
    if p == 2 {
        return Some(1);
    }
    let order_primes: Vec<u64> = factorize(p - 1)
        .ok()?
        .factors()
        .iter()
        .map(|&(q, _)| q)
        .collect();
    (2..p).find(|&g| order_primes.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
}

/// Combine `x ≡ r_i (mod m_i)` for pairwise coprime moduli into the least
/// nonnegative solution modulo `Π m_i`.
pub fn crt(congruences: &[(u64, u64)]) -> Option<(u64, u64)> {
    let mut value = 0u64;
    let mut modulus = 1u64;
    for &(r, m) in congruences {
        if gcd(modulus, m) != 1 {
            return None;
        }
        // value + modulus * t ≡ r (mod m)
        let inv = inv_mod(modulus % m, m)?;
        let diff = (r % m + m - value % m) % m;
        let t = mul_mod(diff, inv, m);
        value += modulus * t;
        modulus *= m;
    }
    Some((value % modulus, modulus))
}

/// A modulus together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    n: u64,
    factors: Vec<(u64, u32)>,
    big_omega: u32,
}

impl RingSpec {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime factors `(p, r)` in ascending order of `p`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.big_omega
    }

    /// `v_p(n)`; zero when `p` does not divide `n`.
    pub fn valuation(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, r)| r)
    }

    /// `(p, r, p^r)` for every prime divisor.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, r)| (p, r, p.pow(r)))
    }

    pub fn is_unit(&self, x: u64) -> bool {
        gcd(x % self.n, self.n) == 1
    }

    pub fn units(&self) -> Vec<u64> {
        (0..self.n).filter(|&x| self.is_unit(x)).collect()
    }

    pub fn euler_phi(&self) -> u64 {
        self.prime_powers()
            .map(|(p, _, q)| q / p * (p - 1))
            .product()
    }
}

/// Factor `n` by trial division, switching to a primality test once the
/// cofactor might be prime.
pub fn factorize(n: u64) -> Result<RingSpec> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while rest > 1 {
        if p.saturating_mul(p) > rest || (p == 1001 && is_prime(rest)) {
            factors.push((rest, 1));
            break;
        }
        if rest.is_multiple_of(p) {
            let mut r = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                r += 1;
            }
            factors.push((p, r));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let big_omega = factors.iter().map(|&(_, r)| r).sum();
    Ok(RingSpec {
        n,
        factors,
        big_omega,
    })
}

/// An element of `Z_n`, stored as its representative in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    /// Image under the natural map `Z_n -> Z_m`.
    pub fn project(self, m: u64) -> Result<Residue> {
        check_divisor(self.modulus, m)?;
        Ok(Residue {
            value: self.value % m,
            modulus: m,
        })
    }
}

fn check_divisor(n: u64, m: u64) -> Result<()> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(Error::NotADivisor { n, m });
    }
    Ok(())
}

/// An ordered sequence of residues sharing one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueSequence {
    modulus: u64,
    terms: Vec<u64>,
}

impl ResidueSequence {
    /// Build from arbitrary integers, reducing each into `[0, n)`.
    pub fn new<I: IntoIterator<Item = i64>>(modulus: u64, terms: I) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            modulus,
            terms: terms.into_iter().map(|x| reduce(x, modulus)).collect(),
        })
    }

    /// Build from nonnegative values, reducing modulo `n`.
    pub fn from_values(modulus: u64, terms: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Self {
            modulus,
            terms: terms.iter().map(|&x| x % modulus).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Residue> {
        self.terms.get(i).map(|&value| Residue {
            value,
            modulus: self.modulus,
        })
    }

    pub fn sum(&self) -> u64 {
        self.terms
            .iter()
            .fold(0u64, |acc, &x| (acc + x) % self.modulus)
    }

    /// Termwise image under `Z_n -> Z_m`.
    pub fn project(&self, m: u64) -> Result<ResidueSequence> {
        check_divisor(self.modulus, m)?;
        Ok(ResidueSequence {
            modulus: m,
            terms: self.terms.iter().map(|&x| x % m).collect(),
        })
    }

    /// `S - a`, subtracting `a` from every term.
    pub fn shift(&self, a: u64) -> ResidueSequence {
        let n = self.modulus;
        let a = a % n;
        ResidueSequence {
            modulus: n,
            terms: self.terms.iter().map(|&x| (x + n - a) % n).collect(),
        }
    }

    /// Subsequence at the given (0-based) positions.
    pub fn select(&self, indices: &[usize]) -> ResidueSequence {
        ResidueSequence {
            modulus: self.modulus,
            terms: indices.iter().map(|&i| self.terms[i]).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> ResidueSequence {
        ResidueSequence {
            modulus: self.modulus,
            terms: self
                .terms
                .iter()
                .map(|&x| mul_mod(x, c, self.modulus))
                .collect(),
        }
    }
}

impl fmt::Display for ResidueSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parse a comma separated list of integers, as accepted on the command line.
pub fn parse_values(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let r = factorize(12).unwrap();
        assert_eq!(r.factors(), &[(2, 2), (3, 1)]);
        assert_eq!(r.big_omega(), 3);
        let r = factorize(8).unwrap();
        assert_eq!(r.factors(), &[(2, 3)]);
        assert_eq!(r.big_omega(), 3);
        let r = factorize(1).unwrap();
        assert!(r.factors().is_empty());
        assert_eq!(r.big_omega(), 0);
        assert_eq!(factorize(0), Err(Error::ZeroModulus));
    }

    #[test]
    fn valuation_of_absent_prime_is_zero() {
        let r = factorize(360).unwrap();
        assert_eq!(r.valuation(2), 3);
        assert_eq!(r.valuation(3), 2);
        assert_eq!(r.valuation(5), 1);
        assert_eq!(r.valuation(7), 0);
    }

    #[test]
    fn factorize_large_prime_cofactor() {
        let p = 1_000_000_007u64;
        let r = factorize(6 * p).unwrap();
        assert_eq!(r.factors(), &[(2, 1), (3, 1), (p, 1)]);
    }

    #[test]
    fn factorization_reconstructs_n() {
        for n in 1..=1_000_000u64 {
            let r = factorize(n).unwrap();
            let prod: u64 = r.prime_powers().map(|(_, _, q)| q).product();
            assert_eq!(prod, n);
            assert!(r.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(r.factors().iter().all(|&(p, e)| is_prime(p) && e >= 1));
        }
    }

    #[test]
    fn phi_matches_gcd_count() {
        for n in 1..=300u64 {
            let r = factorize(n).unwrap();
            let count = (0..n).filter(|&x| gcd(x, n) == 1).count() as u64;
            assert_eq!(r.euler_phi(), count, "n = {n}");
            assert_eq!(r.units().len() as u64, count);
        }
    }

    #[test]
    fn project_examples() {
        let x = Residue::new(7, 12).unwrap();
        assert_eq!(x.project(4).unwrap().value(), 3);
        assert_eq!(Residue::new(0, 30).unwrap().project(5).unwrap().value(), 0);
        assert!(x.project(5).is_err());
        let s = ResidueSequence::new(12, [5, 6, 7]).unwrap();
        assert_eq!(s.project(3).unwrap().terms(), &[2, 0, 1]);
    }

    #[test]
    fn project_is_ring_homomorphism() {
        let res = |x: u64, n: u64| Residue::new(x as i64, n).unwrap();
        for n in 1..=100u64 {
            for m in (1..=n).filter(|m| n % m == 0) {
                for x in 0..n {
                    let px = res(x, n).project(m).unwrap().value();
                    for y in 0..n {
                        let py = res(y, n).project(m).unwrap().value();
                        let sum = res((x + y) % n, n).project(m).unwrap().value();
                        let prod = res(x * y % n, n).project(m).unwrap().value();
                        assert_eq!(sum, (px + py) % m);
                        assert_eq!(prod, px * py % m);
                    }
                }
                let seq = ResidueSequence::from_values(n, &(0..n).collect::<Vec<_>>()).unwrap();
                let projected = seq.project(m).unwrap();
                assert!(projected.terms().iter().zip(0..n).all(|(&p, x)| p == res(x, n).project(m).unwrap().value()));
            }
        }
    }

    #[test]
    fn projection_of_units_is_onto() {
        for n in 2..=200u64 {
            let rn = factorize(n).unwrap();
            for m in (2..=n).filter(|m| n % m == 0) {
                let rm = factorize(m).unwrap();
                let same_support = rn.factors().len() == rm.factors().len();
                if !same_support {
                    continue;
                }
                let mut image: Vec<u64> = rn.units().iter().map(|&u| u % m).collect();
                image.sort_unstable();
                image.dedup();
                assert_eq!(image, rm.units(), "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn shift_examples() {
        let s = ResidueSequence::new(8, [1, 3, 5]).unwrap();
        assert_eq!(s.shift(1).terms(), &[0, 2, 4]);
        let z = ResidueSequence::new(4, [0, 0]).unwrap();
        assert_eq!(z.shift(0), z);
        let s = ResidueSequence::new(5, [1, 2, 3, 4, 0]).unwrap();
        let t = s.shift(2);
        assert_eq!(t.terms(), &[4, 0, 1, 2, 3]);
        assert_eq!(s.sum(), 0);
        assert_eq!(t.sum(), 0);
    }

    #[test]
    fn negative_inputs_are_reduced() {
        let s = ResidueSequence::new(7, [-1, -8, 15]).unwrap();
        assert_eq!(s.terms(), &[6, 6, 1]);
    }

    #[test]
    fn crt_and_inverse() {
        assert_eq!(crt(&[(1, 4), (2, 3)]), Some((5, 12)));
        assert_eq!(crt(&[(1, 4), (2, 6)]), None);
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(31), Some(3));
        assert_eq!(primitive_root(11), Some(2));
    }
}
