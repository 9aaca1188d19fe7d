//! Lower-bound witnesses built from smaller ones.

use crate::algebra::{crt, ResidueSequence, RingSpec};
use crate::error::{Error, Result};
use crate::weights::WeightSetSpec;

use super::search::compute_exhaustive;
use super::{ConstantKind, GroupSequence, GroupSpec, DEFAULT_BUDGET};

/// `x` placed in one factor of a product, zeros in the other.
fn embed(first: bool, other: &GroupSpec, x: &[u64]) -> Vec<u64> {
    let zeros = vec![0; other.factors().len()];
    if first {
        [x, &zeros].concat()
    } else {
        [&zeros, x].concat()
    }
}

/// `(x_1,0),...,(x_k,0),(0,y_1),(x_1,0),...,(x_k,0),(0,y_2),...,(0,y_l),(x_1,0),...,(x_k,0)`:
/// no weighted zero-sum block in `G1 × G2` when neither input has one.
pub fn build_witness_product_c(s1: &GroupSequence, s2: &GroupSequence, weights: &[u64]) -> Result<GroupSequence> {
    for (name, s) in [("first", s1), ("second", s2)] {
        if s.has_zero_sum_block(weights) {
            return Err(Error::Precondition(format!(
                "{name} sequence has a weighted zero-sum block"
            )));
        }
    }
    let (g1, g2) = (&s1.group, &s2.group);
    let block: Vec<Vec<u64>> = s1.terms.iter().map(|x| embed(true, g2, x)).collect();
    let mut terms = block.clone();
    for y in &s2.terms {
        terms.push(embed(false, g1, y));
        terms.extend(block.iter().cloned());
    }
    GroupSequence::new(g1.product(g2), terms)
}

/// `(x_1,0),...,(x_k,0),(0,y_1),...,(0,y_l)`: no weighted zero-sum
/// subsequence in `G1 × G2` when neither input has one.
pub fn build_witness_concat_d(s1: &GroupSequence, s2: &GroupSequence, weights: &[u64]) -> Result<GroupSequence> {
    for (name, s) in [("first", s1), ("second", s2)] {
        if s.has_zero_sum(weights) {
            return Err(Error::Precondition(format!(
                "{name} sequence has a weighted zero-sum subsequence"
            )));
        }
    }
    let (g1, g2) = (&s1.group, &s2.group);
    let mut terms: Vec<Vec<u64>> = s1.terms.iter().map(|x| embed(true, g2, x)).collect();
    terms.extend(s2.terms.iter().map(|y| embed(false, g1, y)));
    GroupSequence::new(g1.product(g2), terms)
}

/// `(1)`, then `S_r = (2·S_{r-1}, 1, 2·S_{r-1})` over `Z_{2^r}`.
fn pow2_c_witness(r: u32) -> Vec<u64> {
    let mut s = vec![1u64];
    for _ in 1..r {
        let doubled: Vec<u64> = s.iter().map(|x| 2 * x).collect();
        s = [doubled.clone(), vec![1], doubled].concat();
    }
    s
}

/// A sequence over `Z_n` of length `2^Ω(n) - 1` with no `U(n)`-weighted
/// zero-sum block. Prime-power pieces come from the doubling recursion
/// (`p = 2`) or exhaustive search (odd `p`); they are interleaved in the
/// product of the prime-power rings and mapped into `Z_n` by CRT.
pub fn c_units_witness(n: u64) -> Result<ResidueSequence> {
    let ring = RingSpec::new(n)?;
    if n < 2 {
        return Err(Error::Precondition("modulus must be at least 2".into()));
    }
    let units = ring.units();
    let mut acc: Option<GroupSequence> = None;
    for (p, r, q) in ring.prime_powers() {
        let piece = if p == 2 {
            pow2_c_witness(r)
        } else {
            let res = compute_exhaustive(ConstantKind::C, q, &WeightSetSpec::Units, DEFAULT_BUDGET)?;
            if res.value != 1 << r {
                return Err(Error::Precondition(format!(
                    "exhaustive C over Z_{q} is {}, not {}",
                    res.value,
                    1u64 << r
                )));
            }
            res.witness.expect("exhaustive results carry a witness").terms().to_vec()
        };
        let g = GroupSpec::cyclic(q)?;
        let seq = GroupSequence::new(g, piece.into_iter().map(|x| vec![x]).collect())?;
        acc = Some(match acc {
            None => seq,
            Some(prev) => build_witness_product_c(&prev, &seq, &units)?,
        });
    }
    let acc = acc.expect("n ≥ 2 has a prime factor");
    let moduli = acc.group.factors().to_vec();
    let terms: Vec<u64> = acc
        .terms
        .iter()
        .map(|coords| {
            let cong: Vec<(u64, u64)> = coords.iter().copied().zip(moduli.iter().copied()).collect();
            crt(&cong).expect("coprime moduli").0
        })
        .collect();
    ResidueSequence::from_values(n, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_consecutive;

    fn gs(factors: &[u64], terms: &[&[u64]]) -> GroupSequence {
        GroupSequence::new(
            GroupSpec::new(factors).unwrap(),
            terms.iter().map(|t| t.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_examples() {
        let s = gs(&[2], &[&[1]]);
        let w = build_witness_product_c(&s, &s, &[1]).unwrap();
        assert_eq!(w.terms, vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
        assert!(!w.has_zero_sum_block(&[1]));

        let s1 = gs(&[2, 2], &[&[1, 0]]);
        let w = build_witness_product_c(&s1, &s, &[1]).unwrap();
        assert_eq!(w.group.factors(), &[2, 2, 2]);
        assert_eq!(w.len(), 3);
        assert!(!w.has_zero_sum_block(&[1]));

        let empty = gs(&[3], &[]);
        let w = build_witness_product_c(&s, &empty, &[1]).unwrap();
        assert_eq!(w.terms, vec![vec![1, 0]]);

        assert!(build_witness_product_c(&gs(&[2], &[&[1], &[1]]), &s, &[1]).is_err());
    }

    #[test]
    fn concat_examples() {
        let s = gs(&[2], &[&[1]]);
        let w = build_witness_concat_d(&s, &s, &[1]).unwrap();
        assert_eq!(w.terms, vec![vec![1, 0], vec![0, 1]]);
        assert!(!w.has_zero_sum(&[1]));

        let mut acc = s.clone();
        for a in 2..=4 {
            acc = build_witness_concat_d(&acc, &s, &[1]).unwrap();
            assert_eq!(acc.len(), a);
            assert!(!acc.has_zero_sum(&[1]));
        }

        let w = build_witness_concat_d(&s, &gs(&[4], &[&[1]]), &[1]).unwrap();
        assert_eq!(w.terms, vec![vec![1, 0], vec![0, 1]]);
        assert!(!w.has_zero_sum(&[1]));
        assert!(build_witness_concat_d(&gs(&[2], &[&[0]]), &s, &[1]).is_err());
    }

    #[test]
    fn builders_preserve_premise() {
        // every pair of short premise-satisfying sequences over Z_2, Z_3
        let pieces = [
            gs(&[2], &[]),
            gs(&[2], &[&[1]]),
            gs(&[3], &[&[1]]),
            gs(&[3], &[&[1], &[1]]),
            gs(&[3], &[&[2], &[2]]),
        ];
        for a in &pieces {
            for b in &pieces {
                let c = build_witness_product_c(a, b, &[1]).unwrap();
                assert_eq!(c.len(), (a.len() + 1) * (b.len() + 1) - 1);
                assert!(!c.has_zero_sum_block(&[1]));
                let d = build_witness_concat_d(a, b, &[1]).unwrap();
                assert!(!d.has_zero_sum(&[1]));
            }
        }
    }

    #[test]
    fn doubling_recursion() {
        assert_eq!(pow2_c_witness(1), vec![1]);
        assert_eq!(pow2_c_witness(3), vec![4, 2, 4, 1, 4, 2, 4]);
    }

    #[test]
    fn crt_witnesses_are_extremal() {
        for n in [2u64, 6, 12, 16, 18, 20, 30, 36] {
            let w = c_units_witness(n).unwrap();
            let omega = RingSpec::new(n).unwrap().big_omega();
            assert_eq!(w.len(), (1usize << omega) - 1, "n = {n}");
            let u = WeightSetSpec::Units.materialize(n).unwrap();
            assert!(!solve_consecutive(&w, &u).is_found(), "n = {n}: {w}");
        }
    }
}
