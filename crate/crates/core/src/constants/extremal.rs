//! Extremal sequences: enumeration, `A`-equivalence and the structural
//! classifications over `Z_{2^r}`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{gcd, mul_mod, ResidueSequence, RingSpec};
use crate::error::{Error, Result};
use crate::module::FiniteModule;
use crate::weights::{WeightSet, WeightSetSpec};

use super::search::{Search, SearchOptions};
use super::ConstantKind;

/// `c · y_{σ(i)} = a_i · x_i` for every `i` (all indices 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceWitness {
    pub c: u64,
    pub sigma: Vec<usize>,
    pub weights: Vec<u64>,
}

impl EquivalenceWitness {
    pub fn holds(&self, s: &ResidueSequence, t: &ResidueSequence, a: &WeightSet) -> bool {
        let n = s.modulus();
        let mut seen = vec![false; t.len()];
        s.len() == t.len()
            && self.sigma.len() == s.len()
            && self.weights.len() == s.len()
            && self.sigma.iter().all(|&j| j < t.len() && !std::mem::replace(&mut seen[j], true))
            && self.weights.iter().all(|&w| a.contains(w))
            && (0..s.len()).all(|i| {
                mul_mod(self.c, t.terms()[self.sigma[i]], n) == mul_mod(self.weights[i], s.terms()[i], n)
            })
    }
}

fn require_subgroup(a: &WeightSet) -> Result<()> {
    if a.is_unit_subgroup() {
        Ok(())
    } else {
        Err(Error::NotASubgroup(a.modulus()))
    }
}

/// Least element of the orbit `A·x`.
fn orbit_min(a: &WeightSet, x: u64) -> u64 {
    let n = a.modulus();
    a.values().iter().map(|&w| mul_mod(w, x, n)).min().unwrap_or(x)
}

/// Find `(c, σ, a_i)` relating `S` and `T`, or `None` after trying every unit.
pub fn check_equivalence(
    s: &ResidueSequence,
    t: &ResidueSequence,
    a: &WeightSet,
) -> Result<Option<EquivalenceWitness>> {
    require_subgroup(a)?;
    let n = s.modulus();
    if t.modulus() != n || a.modulus() != n {
        return Err(Error::Precondition("sequences and weights need a common modulus".into()));
    }
    if s.len() != t.len() {
        return Err(Error::Precondition(format!(
            "lengths differ: {} and {}",
            s.len(),
            t.len()
        )));
    }
    let ring = RingSpec::new(n)?;
    for c in ring.units() {
        // orbit representative of c·y_j -> positions j still unmatched
        let mut pool: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (j, &y) in t.terms().iter().enumerate().rev() {
            pool.entry(orbit_min(a, mul_mod(c, y, n))).or_default().push(j);
        }
        let mut sigma = Vec::with_capacity(s.len());
        let mut weights = Vec::with_capacity(s.len());
        let matched = s.terms().iter().all(|&x| {
            let Some(j) = pool.get_mut(&orbit_min(a, x)).and_then(Vec::pop) else {
                return false;
            };
            let target = mul_mod(c, t.terms()[j], n);
            let w = a
                .values()
                .iter()
                .copied()
                .find(|&w| mul_mod(w, x, n) == target)
                .expect("same orbit");
            sigma.push(j);
            weights.push(w);
            true
        });
        if matched {
            return Ok(Some(EquivalenceWitness { c, sigma, weights }));
        }
    }
    Ok(None)
}

/// Equivalence-class key: least over units `c` of the sorted orbit
/// representatives of `c·S`.
fn class_key(ring: &RingSpec, a: &WeightSet, xs: &[u64]) -> Vec<u64> {
    let n = ring.n();
    ring.units()
        .into_iter()
        .map(|c| {
            let mut k: Vec<u64> = xs.iter().map(|&x| orbit_min(a, mul_mod(c, x, n))).collect();
            k.sort_unstable();
            k
        })
        .min()
        .expect("U(n) is nonempty")
}

/// All extremal sequences of length `value - 1` (as sorted multisets for `D`
/// and `E`), or one lexicographically least representative per
/// `A`-equivalence class when `up_to_equivalence` is set.
pub fn enumerate_extremal(
    kind: ConstantKind,
    n: u64,
    spec: &WeightSetSpec,
    up_to_equivalence: bool,
    budget: u64,
) -> Result<Vec<ResidueSequence>> {
    let ring = RingSpec::new(n)?;
    let a = spec.materialize_in(&ring)?;
    if up_to_equivalence {
        require_subgroup(&a)?;
    }
    let module = FiniteModule::cyclic(n)?;
    let mut search = Search::new(&module, a.values(), kind, SearchOptions::with_budget(budget));
    let (value, _) = search.run()?;
    let found = search.enumerate(value as usize - 1, kind.is_order_free())?;
    let mut seqs: Vec<Vec<u64>> = found
        .into_iter()
        .map(|s| s.into_iter().map(|x| x as u64).collect())
        .collect();
    seqs.sort();
    if up_to_equivalence {
        let mut classes: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
        for s in seqs {
            classes.entry(class_key(&ring, &a, &s)).or_insert(s);
        }
        seqs = classes.into_values().collect();
        seqs.sort();
    }
    seqs.into_iter()
        .map(|s| ResidueSequence::from_values(n, &s))
        .collect()
}

fn pow2_exponent(n: u64) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Precondition(format!("{n} is not a power of 2 above 1")));
    }
    Ok(n.trailing_zeros())
}

/// Recursive decomposition of a sequence over `Z_{2^r}` of length `2^r - 1`:
/// an odd middle term flanked by two even halves which, halved, are again
/// of this shape over `Z_{2^(r-1)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CExtremalTree {
    pub modulus: u64,
    pub middle: u64,
    pub middle_is_odd: bool,
    pub halves_even: bool,
    pub left: Option<Box<CExtremalTree>>,
    pub right: Option<Box<CExtremalTree>>,
}

impl CExtremalTree {
    pub fn is_extremal(&self) -> bool {
        self.middle_is_odd
            && self.halves_even
            && self.left.as_ref().is_none_or(|t| t.is_extremal())
            && self.right.as_ref().is_none_or(|t| t.is_extremal())
    }
}

fn c_tree(modulus: u64, xs: &[u64]) -> CExtremalTree {
    let mid = xs.len() / 2;
    let middle = xs[mid];
    let (l, r) = (&xs[..mid], &xs[mid + 1..]);
    let halves_even = l.iter().chain(r).all(|x| x % 2 == 0);
    let sub = |h: &[u64]| -> Option<Box<CExtremalTree>> {
        (halves_even && !h.is_empty()).then(|| {
            let halved: Vec<u64> = h.iter().map(|x| x / 2).collect();
            Box::new(c_tree(modulus / 2, &halved))
        })
    };
    CExtremalTree {
        modulus,
        middle,
        middle_is_odd: middle % 2 == 1,
        halves_even,
        left: sub(l),
        right: sub(r),
    }
}

/// Is `S` (length `2^r - 1` over `Z_{2^r}`) `C`-extremal for `U(2^r)`?
pub fn classify_c_extremal_pow2(s: &ResidueSequence) -> Result<(bool, CExtremalTree)> {
    let r = pow2_exponent(s.modulus())?;
    let want = (1usize << r) - 1;
    if s.len() != want {
        return Err(Error::Precondition(format!(
            "expected length {want}, got {}",
            s.len()
        )));
    }
    let tree = c_tree(s.modulus(), s.terms());
    Ok((tree.is_extremal(), tree))
}

/// Is `S` (length `2^r + r - 1` over `Z_{2^r}`) `E`-extremal for `U(2^r)`?
/// Decided by the valuation profile: one term of each valuation `0..r-2`, an
/// odd number of valuation `r-1`, and zeros otherwise.
pub fn classify_e_extremal_pow2(s: &ResidueSequence) -> Result<bool> {
    let n = s.modulus();
    let r = pow2_exponent(n)?;
    let want = (1usize << r) + r as usize - 1;
    if s.len() != want {
        return Err(Error::Precondition(format!(
            "expected length {want}, got {}",
            s.len()
        )));
    }
    let mut counts = vec![0usize; r as usize + 1];
    for &x in s.terms() {
        let v = if x == 0 { r } else { x.trailing_zeros().min(r) };
        counts[v as usize] += 1;
    }
    let r = r as usize;
    Ok(counts[..r - 1].iter().all(|&c| c == 1) && counts[r - 1] % 2 == 1)
}

/// Apply `(c, σ, a_i)` to a sequence: `y_{σ(i)} = c⁻¹ a_i x_i`.
pub fn transform(s: &ResidueSequence, c: u64, sigma: &[usize], weights: &[u64]) -> Result<ResidueSequence> {
    let n = s.modulus();
    if gcd(c, n) != 1 {
        return Err(Error::Precondition(format!("{c} is not a unit modulo {n}")));
    }
    let c_inv = crate::algebra::inv_mod(c, n).expect("unit");
    let mut out = vec![0u64; s.len()];
    for (i, (&j, &w)) in sigma.iter().zip(weights).enumerate() {
        out[j] = mul_mod(c_inv, mul_mod(w, s.terms()[i], n), n);
    }
    ResidueSequence::from_values(n, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_BUDGET;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn seq(n: u64, xs: &[i64]) -> ResidueSequence {
        ResidueSequence::new(n, xs.iter().copied()).unwrap()
    }

    fn units(n: u64) -> WeightSet {
        WeightSetSpec::Units.materialize(n).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let (s, t) = (seq(8, &[1, 2, 4]), seq(8, &[3, 6, 4]));
        let w = check_equivalence(&s, &t, &units(8)).unwrap().unwrap();
        assert!(w.holds(&s, &t, &units(8)));
        assert_eq!(w.c, 1);

        let w = check_equivalence(&s, &s, &units(8)).unwrap().unwrap();
        assert_eq!((w.c, w.sigma.clone(), w.weights.clone()), (1, vec![0, 1, 2], vec![1, 1, 1]));

        assert_eq!(check_equivalence(&seq(4, &[1, 0]), &seq(4, &[1, 1]), &units(4)).unwrap(), None);

        let not_group = WeightSetSpec::Interval(2).materialize(8).unwrap();
        assert!(matches!(
            check_equivalence(&s, &t, &not_group),
            Err(Error::NotASubgroup(8))
        ));
    }

    #[test]
    fn c_classifier_examples() {
        assert!(classify_c_extremal_pow2(&seq(8, &[4, 2, 4, 1, 4, 2, 4])).unwrap().0);
        assert!(!classify_c_extremal_pow2(&seq(8, &[1, 2, 4])).is_ok_and(|r| r.0));
        assert!(classify_c_extremal_pow2(&seq(8, &[1, 2, 4])).is_err());
        assert!(!classify_c_extremal_pow2(&seq(8, &[4, 2, 4, 2, 4, 2, 4])).unwrap().0);
        assert!(classify_c_extremal_pow2(&seq(2, &[1])).unwrap().0);
        assert!(!classify_c_extremal_pow2(&seq(4, &[2, 0, 2])).unwrap().0);
    }

    #[test]
    fn e_classifier_examples() {
        assert!(classify_e_extremal_pow2(&seq(8, &[1, 2, 4, 4, 4, 0, 0, 0, 0, 0])).unwrap());
        assert!(!classify_e_extremal_pow2(&seq(8, &[1, 3, 4, 0, 0, 0, 0, 0, 0, 0])).unwrap());
        assert!(!classify_e_extremal_pow2(&seq(8, &[1, 2, 4, 4, 0, 0, 0, 0, 0, 0])).unwrap());
        assert!(classify_e_extremal_pow2(&seq(8, &[1, 2, 4])).is_err());
    }

    #[test]
    fn d2_one() {
        let l = enumerate_extremal(ConstantKind::D, 2, &WeightSetSpec::One, false, DEFAULT_BUDGET).unwrap();
        assert_eq!(l, vec![seq(2, &[1])]);
    }

    fn all_sequences(n: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
        (0..n.pow(len as u32)).map(move |mut code| {
            (0..len)
                .map(|_| {
                    let x = code % n;
                    code /= n;
                    x
                })
                .collect()
        })
    }

    fn all_multisets(n: u64, len: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    let lo = v.last().copied().unwrap_or(0);
                    (lo..n).map(move |x| {
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
    fn c_classifier_matches_enumeration() {
        for r in 1..=3u32 {
            let n = 1u64 << r;
            let listed: BTreeSet<Vec<u64>> =
                enumerate_extremal(ConstantKind::C, n, &WeightSetSpec::Units, false, DEFAULT_BUDGET)
                    .unwrap()
                    .into_iter()
                    .map(|s| s.terms().to_vec())
                    .collect();
            for xs in all_sequences(n, (1 << r) - 1) {
                let s = ResidueSequence::from_values(n, &xs).unwrap();
                assert_eq!(classify_c_extremal_pow2(&s).unwrap().0, listed.contains(&xs), "{xs:?}");
            }
        }
    }

    #[test]
    fn e_classifier_matches_enumeration() {
        for r in 2..=3u32 {
            let n = 1u64 << r;
            let listed: BTreeSet<Vec<u64>> =
                enumerate_extremal(ConstantKind::E, n, &WeightSetSpec::Units, false, DEFAULT_BUDGET)
                    .unwrap()
                    .into_iter()
                    .map(|s| s.terms().to_vec())
                    .collect();
            for xs in all_multisets(n, (1 << r) + r as usize - 1) {
                let s = ResidueSequence::from_values(n, &xs).unwrap();
                assert_eq!(classify_e_extremal_pow2(&s).unwrap(), listed.contains(&xs), "{xs:?}");
            }
        }
    }

    #[test]
    fn enumeration_is_closed_under_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = units(8);
        for kind in [ConstantKind::E, ConstantKind::D, ConstantKind::C] {
            let listed: BTreeSet<Vec<u64>> =
                enumerate_extremal(kind, 8, &WeightSetSpec::Units, false, DEFAULT_BUDGET)
                    .unwrap()
                    .into_iter()
                    .map(|s| s.terms().to_vec())
                    .collect();
            let pool: Vec<&Vec<u64>> = listed.iter().collect();
            for _ in 0..500 {
                let s = ResidueSequence::from_values(8, pool[rng.random_range(0..pool.len())]).unwrap();
                let c = u.values()[rng.random_range(0..4)];
                let mut sigma: Vec<usize> = (0..s.len()).collect();
                if kind == ConstantKind::C {
                    // reordering is not a symmetry of consecutive blocks
                } else {
                    sigma.shuffle(&mut rng);
                }
                let w: Vec<u64> = (0..s.len()).map(|_| u.values()[rng.random_range(0..4)]).collect();
                let t = transform(&s, c, &sigma, &w).unwrap();
                let mut key = t.terms().to_vec();
                if kind.is_order_free() {
                    key.sort_unstable();
                }
                assert!(listed.contains(&key), "{kind}: {t} from {s}");
                let found = check_equivalence(&s, &t, &u).unwrap().unwrap();
                assert!(found.holds(&s, &t, &u));
            }
        }
    }
}
