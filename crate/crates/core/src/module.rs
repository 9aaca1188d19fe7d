//! Finite abelian groups `Z_{n_1} × ... × Z_{n_t}` with integer weights acting
//! diagonally, and bitsets of group elements.
//!
//! Elements are encoded as `usize` in mixed radix, first factor most
//! significant. For a single factor the code of `x` is `x` itself.

use crate::error::{Error, Result};

/// Bitset over the elements of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumSet {
    words: Vec<u64>,
    len: usize,
}

impl SumSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64).max(1)],
            len,
        }
    }

    pub fn singleton(len: usize, x: usize) -> Self {
        let mut s = Self::new(len);
        s.insert(x);
        s
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &SumSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &SumSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn intersects(&self, other: &SumSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    fn mask_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << r) - 1;
        }
    }

    fn shl(&self, k: usize) -> SumSet {
        let mut out = SumSet::new(self.len);
        let (ws, bs) = (k / 64, k % 64);
        for i in (ws..self.words.len()).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            out.words[i] = w;
        }
        out.mask_tail();
        out
    }

    fn shr(&self, k: usize) -> SumSet {
        let mut out = SumSet::new(self.len);
        let (ws, bs) = (k / 64, k % 64);
        let nw = self.words.len();
        for i in 0..nw.saturating_sub(ws) {
            let mut w = self.words[i + ws] >> bs;
            if bs > 0 && i + ws + 1 < nw {
                w |= self.words[i + ws + 1] << (64 - bs);
            }
            out.words[i] = w;
        }
        out
    }

    /// Cyclic rotation: bit `i` moves to `(i + k) mod len`.
    fn rotate(&self, k: usize) -> SumSet {
        let n = self.len;
        let k = k % n;
        if k == 0 {
            return self.clone();
        }
        if self.words.len() == 1 {
            let w = self.words[0];
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            return SumSet {
                words: vec![((w << k) | (w >> (n - k))) & mask],
                len: n,
            };
        }
        let mut out = self.shl(k);
        out.union_with(&self.shr(n - k));
        out
    }
}

/// `Z_{n_1} × ... × Z_{n_t}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteModule {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteModule {
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::product(&[n])
    }

    pub fn product(factors: &[u64]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::ZeroModulus);
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(usize::try_from(f).ok()?))
            .ok_or_else(|| Error::Precondition("group order overflows".into()))?;
        Ok(Self {
            factors: factors.to_vec(),
            order,
        })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// Exponent of the group (lcm of the factors).
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &f| {
            acc / crate::algebra::gcd(acc, f) * f
        })
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        self.factors
            .iter()
            .zip(coords)
            .fold(0usize, |acc, (&f, &c)| acc * f as usize + (c % f) as usize)
    }

    pub fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = (x % f as usize) as u64;
            x /= f as usize;
        }
        out
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        if let [n] = self.factors[..] {
            return (x + y) % n as usize;
        }
        let (a, b) = (self.decode(x), self.decode(y));
        let sum: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.factors)
            .map(|((p, q), f)| (p + q) % f)
            .collect();
        self.encode(&sum)
    }

    pub fn neg(&self, x: usize) -> usize {
        if let [n] = self.factors[..] {
            return (n as usize - x) % n as usize;
        }
        let a = self.decode(x);
        let out: Vec<u64> = a
            .iter()
            .zip(&self.factors)
            .map(|(p, f)| (f - p) % f)
            .collect();
        self.encode(&out)
    }

    /// `a · x`, the integer `a` acting on every coordinate.
    pub fn scale(&self, a: u64, x: usize) -> usize {
        if let [n] = self.factors[..] {
            return crate::algebra::mul_mod(a, x as u64, n) as usize;
        }
        let coords = self.decode(x);
        let out: Vec<u64> = coords
            .iter()
            .zip(&self.factors)
            .map(|(&c, &f)| crate::algebra::mul_mod(a, c, f))
            .collect();
        self.encode(&out)
    }

    /// `{ s + y : s ∈ set }`.
    pub fn translate(&self, set: &SumSet, y: usize) -> SumSet {
        if self.is_cyclic() {
            return set.rotate(y);
        }
        let mut out = SumSet::new(self.order);
        for s in set.iter() {
            out.insert(self.add(s, y));
        }
        out
    }

    /// `{ -s : s ∈ set }`.
    pub fn negate(&self, set: &SumSet) -> SumSet {
        let mut out = SumSet::new(self.order);
        for s in set.iter() {
            out.insert(self.neg(s));
        }
        out
    }

    /// `{ a · s : s ∈ set }`.
    pub fn scale_set(&self, a: u64, set: &SumSet) -> SumSet {
        let mut out = SumSet::new(self.order);
        for s in set.iter() {
            out.insert(self.scale(a, s));
        }
        out
    }

    /// `set ⊕ multiples`: every `s + y` with `s ∈ set`, `y` in the list.
    pub fn sumset(&self, set: &SumSet, multiples: &[Multiple]) -> SumSet {
        let mut out = SumSet::new(self.order);
        for m in multiples {
            out.union_with(&self.translate(set, m.value));
        }
        out
    }

    /// Distinct values `a · x` for `a` in `weights`, each with the smallest
    /// weight producing it.
    pub fn multiples(&self, weights: &[u64], x: usize) -> Vec<Multiple> {
        let mut out: Vec<Multiple> = Vec::with_capacity(weights.len());
        let mut seen = SumSet::new(self.order);
        let mut sorted = weights.to_vec();
        sorted.sort_unstable();
        for a in sorted {
            let v = self.scale(a, x);
            if !seen.contains(v) {
                seen.insert(v);
                out.push(Multiple { value: v, weight: a });
            }
        }
        out
    }
}

/// A value `a · x` together with the weight `a` realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Multiple {
    pub value: usize,
    pub weight: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_translate(m: &FiniteModule, set: &SumSet, y: usize) -> SumSet {
        let mut out = SumSet::new(m.order());
        for s in 0..m.order() {
            if set.contains(s) {
                out.insert(m.add(s, y));
            }
        }
        out
    }

    proptest! {
        #[test]
        fn rotation_matches_naive(n in 1usize..300, bits in proptest::collection::vec(any::<bool>(), 300), y in 0usize..300) {
            let m = FiniteModule::cyclic(n as u64).unwrap();
            let mut s = SumSet::new(n);
            for (i, b) in bits.iter().take(n).enumerate() {
                if *b { s.insert(i); }
            }
            let y = y % n;
            prop_assert_eq!(m.translate(&s, y), naive_translate(&m, &s, y));
        }
    }

    #[test]
    fn encode_decode_product() {
        let m = FiniteModule::product(&[2, 4]).unwrap();
        assert_eq!(m.order(), 8);
        for x in 0..8 {
            assert_eq!(m.encode(&m.decode(x)), x);
        }
        let x = m.encode(&[1, 3]);
        let y = m.encode(&[1, 2]);
        assert_eq!(m.decode(m.add(x, y)), vec![0, 1]);
        assert_eq!(m.decode(m.neg(x)), vec![1, 1]);
        assert_eq!(m.decode(m.scale(3, x)), vec![1, 1]);
        assert_eq!(m.exponent(), 4);
    }

    #[test]
    fn multiples_keep_smallest_weight() {
        let m = FiniteModule::cyclic(8).unwrap();
        let mult = m.multiples(&[1, 3, 5, 7], 4);
        assert_eq!(mult, vec![Multiple { value: 4, weight: 1 }]);
        let mult = m.multiples(&[7, 5, 3, 1], 2);
        assert_eq!(
            mult,
            vec![
                Multiple { value: 2, weight: 1 },
                Multiple { value: 6, weight: 3 }
            ]
        );
    }
}
