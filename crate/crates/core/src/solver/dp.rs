//! Complete decision procedures over reachable-sum sets.
//!
//! The generic `find_*` functions work in any [`FiniteModule`] with integer
//! weights; elements are module codes. They return `(indices, weights)` with
//! 0-based ascending indices. Ties are broken toward the lexicographically
//! smallest index list (for blocks: smallest end index, then shortest), and
//! each weight is the smallest one consistent with the chosen indices.

use crate::algebra::ResidueSequence;
use crate::error::{Error, Result};
use crate::module::{FiniteModule, Multiple, SumSet};
use crate::weights::WeightSet;

use super::{CertificateKind, Outcome, SolverMethod, SolverVerdict, ZeroSumCertificate};

pub type Selection = (Vec<usize>, Vec<u64>);

fn term_multiples(module: &FiniteModule, weights: &[u64], terms: &[usize]) -> Vec<Vec<Multiple>> {
    terms
        .iter()
        .map(|&x| module.multiples(weights, x))
        .collect()
}

fn sub(module: &FiniteModule, t: usize, y: usize) -> usize {
    module.add(t, module.neg(y))
}

/// Walk back from total `0` through the partial-sum sets recorded for each
/// chosen index, picking the smallest weight that stays inside the previous set.
fn backtrack_weights(
    module: &FiniteModule,
    mult: &[Vec<Multiple>],
    chosen: &[usize],
    history: &[SumSet],
) -> Vec<u64> {
    let order = module.order();
    let mut weights = vec![0; chosen.len()];
    let mut t = 0usize;
    for k in (0..chosen.len()).rev() {
        let before = if k == 0 {
            SumSet::singleton(order, 0)
        } else {
            history[k - 1].clone()
        };
        let m = mult[chosen[k]]
            .iter()
            .find(|m| before.contains(sub(module, t, m.value)))
            .expect("partial sums were recorded consistently");
        weights[k] = m.weight;
        t = sub(module, t, m.value);
    }
    debug_assert_eq!(t, 0);
    weights
}

/// Some nonempty subsequence with weights summing to zero.
pub fn find_any(module: &FiniteModule, weights: &[u64], terms: &[usize]) -> Option<Selection> {
    let order = module.order();
    let m = terms.len();
    let mult = term_multiples(module, weights, terms);

    // achievable sums of (possibly empty) subsets of terms[j..]
    let mut suffix = vec![SumSet::singleton(order, 0); m + 1];
    for j in (0..m).rev() {
        let mut s = module.sumset(&suffix[j + 1], &mult[j]);
        s.union_with(&suffix[j + 1]);
        suffix[j] = s;
    }
    let completable: Vec<SumSet> = suffix.iter().map(|s| module.negate(s)).collect();

    let mut partial = SumSet::singleton(order, 0);
    let mut chosen = Vec::new();
    let mut history = Vec::new();
    let mut start = 0;
    loop {
        let (i, ok) = (start..m).find_map(|i| {
            let mut cand = module.sumset(&partial, &mult[i]);
            cand.intersect_with(&completable[i + 1]);
            (!cand.is_empty()).then_some((i, cand))
        })?;
        chosen.push(i);
        let done = ok.contains(0);
        history.push(ok.clone());
        if done {
            break;
        }
        partial = ok;
        start = i + 1;
    }
    // keep only the prefix sums that lead to the final zero
    let weights = backtrack_weights(module, &mult, &chosen, &history);
    Some((chosen, weights))
}

/// A block of consecutive terms, all weighted, summing to zero.
pub fn find_block(module: &FiniteModule, weights: &[u64], terms: &[usize]) -> Option<Selection> {
    let order = module.order();
    let mult = term_multiples(module, weights, terms);
    for end in 0..terms.len() {
        // tails[k] = sums of terms[end-k+1..=end] (tails[0] is the empty block)
        let mut tails = vec![SumSet::singleton(order, 0)];
        for start in (0..=end).rev() {
            let next = module.sumset(tails.last().unwrap(), &mult[start]);
            let hit = next.contains(0);
            tails.push(next);
            if hit {
                let mut w = Vec::with_capacity(end - start + 1);
                let mut t = 0usize;
                for (offset, k) in (start..=end).enumerate() {
                    let rest = &tails[end - start - offset];
                    let m = mult[k]
                        .iter()
                        .find(|m| rest.contains(sub(module, t, m.value)))
                        .expect("tail sums recorded");
                    w.push(m.weight);
                    t = sub(module, t, m.value);
                }
                return Some(((start..=end).collect(), w));
            }
        }
    }
    None
}

/// Exactly `len` terms with weights summing to zero.
pub fn find_fixed_length(
    module: &FiniteModule,
    weights: &[u64],
    terms: &[usize],
    len: usize,
) -> Option<Selection> {
    let order = module.order();
    let m = terms.len();
    if len == 0 || len > m {
        return None;
    }
    let mult = term_multiples(module, weights, terms);

    // suffix[j][c]: sums of exactly c terms chosen from terms[j..]
    let empty = SumSet::new(order);
    let mut suffix = vec![vec![empty.clone(); len + 1]; m + 1];
    suffix[m][0] = SumSet::singleton(order, 0);
    for j in (0..m).rev() {
        let mut row = suffix[j + 1].clone();
        for c in 1..=len {
            let add = module.sumset(&suffix[j + 1][c - 1], &mult[j]);
            row[c].union_with(&add);
        }
        suffix[j] = row;
    }
    let completable: Vec<Vec<SumSet>> = suffix
        .iter()
        .map(|row| row.iter().map(|s| module.negate(s)).collect())
        .collect();

    let mut partial = SumSet::singleton(order, 0);
    let mut chosen = Vec::with_capacity(len);
    let mut history = Vec::with_capacity(len);
    let mut start = 0;
    for picked in 1..=len {
        let (i, ok) = (start..m).find_map(|i| {
            let mut cand = module.sumset(&partial, &mult[i]);
            cand.intersect_with(&completable[i + 1][len - picked]);
            (!cand.is_empty()).then_some((i, cand))
        })?;
        chosen.push(i);
        history.push(ok.clone());
        partial = ok;
        start = i + 1;
    }
    debug_assert!(partial.contains(0));
    let weights = backtrack_weights(module, &mult, &chosen, &history);
    Some((chosen, weights))
}

fn cyclic_problem(seq: &ResidueSequence, weights: &WeightSet) -> (FiniteModule, Vec<usize>) {
    assert_eq!(
        seq.modulus(),
        weights.modulus(),
        "sequence and weight set must share a modulus"
    );
    let module = FiniteModule::cyclic(seq.modulus()).expect("positive modulus");
    let terms = seq.terms().iter().map(|&x| x as usize).collect();
    (module, terms)
}

fn verdict(
    found: Option<Selection>,
    kind: CertificateKind,
    modulus: u64,
) -> SolverVerdict {
    let outcome = match found {
        Some((indices, weights)) => Outcome::Found(ZeroSumCertificate {
            kind,
            modulus,
            indices,
            weights,
        }),
        None => Outcome::NotFound,
    };
    SolverVerdict {
        outcome,
        method: SolverMethod::Dp,
    }
}

/// Does `seq` have an `A`-weighted zero-sum subsequence?
pub fn solve_any(seq: &ResidueSequence, weights: &WeightSet) -> SolverVerdict {
    let (module, terms) = cyclic_problem(seq, weights);
    let found = find_any(&module, weights.values(), &terms);
    verdict(found, CertificateKind::AnySubsequence, seq.modulus())
}

/// Does `seq` have an `A`-weighted zero-sum block of consecutive terms?
pub fn solve_consecutive(seq: &ResidueSequence, weights: &WeightSet) -> SolverVerdict {
    let (module, terms) = cyclic_problem(seq, weights);
    let found = find_block(&module, weights.values(), &terms);
    verdict(found, CertificateKind::ConsecutiveBlock, seq.modulus())
}

/// Does `seq` have an `A`-weighted zero-sum subsequence of length `len`?
pub fn solve_fixed_length(
    seq: &ResidueSequence,
    weights: &WeightSet,
    len: usize,
) -> Result<SolverVerdict> {
    if len == 0 || len > seq.len() {
        return Err(Error::Precondition(format!(
            "length {len} must lie in [1, {}]",
            seq.len()
        )));
    }
    let (module, terms) = cyclic_problem(seq, weights);
    let found = find_fixed_length(&module, weights.values(), &terms, len);
    Ok(verdict(found, CertificateKind::FixedLength(len), seq.modulus()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightSetSpec;

    fn seq(n: u64, xs: &[i64]) -> ResidueSequence {
        ResidueSequence::new(n, xs.iter().copied()).unwrap()
    }

    fn w(spec: &str, n: u64) -> WeightSet {
        spec.parse::<WeightSetSpec>().unwrap().materialize(n).unwrap()
    }

    fn found(v: &SolverVerdict, s: &ResidueSequence, a: &WeightSet) -> ZeroSumCertificate {
        let c = v.found().expect("expected a certificate").clone();
        c.check(s, a).unwrap();
        c
    }

    #[test]
    fn any_examples() {
        let s = seq(8, &[1, 2, 4]);
        assert_eq!(solve_any(&s, &w("units", 8)).outcome, Outcome::NotFound);

        for n in [1u64, 5, 12] {
            let s = seq(n, &[0]);
            let a = w("units", n);
            let c = found(&solve_any(&s, &a), &s, &a);
            assert_eq!(c.indices, vec![0]);
        }

        let s = seq(8, &[1, 3]);
        let a = w("units", 8);
        let c = found(&solve_any(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 1]);
        // exhaustive scan over U(8)^2: both (5,1) and (1,5) work
        let pairs: Vec<(u64, u64)> = [1u64, 3, 5, 7]
            .iter()
            .flat_map(|&p| [1u64, 3, 5, 7].map(move |q| (p, q)))
            .filter(|&(p, q)| (p + 3 * q) % 8 == 0)
            .collect();
        assert!(pairs.contains(&(5, 1)));
        assert!(pairs.contains(&(c.weights[0], c.weights[1])));
    }

    #[test]
    fn any_prefers_lexicographically_smallest_indices() {
        // zero-sum sets for {1}: {0,1,2} (1+2+3=6) and {2,3} (3+3)
        let s = seq(6, &[1, 2, 3, 3]);
        let a = w("one", 6);
        let c = found(&solve_any(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 1, 2]);
        // no zero-sum set contains both 0 and 1 here
        let s = seq(6, &[1, 4, 2, 3, 3]);
        let c = found(&solve_any(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 2, 3]);
    }

    #[test]
    fn consecutive_examples() {
        let s = seq(8, &[4, 2, 4, 1, 4, 2, 4]);
        assert_eq!(solve_consecutive(&s, &w("units", 8)).outcome, Outcome::NotFound);
        for n in [2u64, 7, 12] {
            let s = seq(n, &[1]);
            assert_eq!(solve_consecutive(&s, &w("units", n)).outcome, Outcome::NotFound);
        }
        let s = seq(2, &[1, 1]);
        let a = w("one", 2);
        let c = found(&solve_consecutive(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 1]);
    }

    #[test]
    fn consecutive_is_earliest_end_then_shortest() {
        let s = seq(6, &[1, 2, 3, 3, 0]);
        let a = w("one", 6);
        let c = found(&solve_consecutive(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 1, 2]);
        let s = seq(6, &[5, 1, 2, 4]);
        let c = found(&solve_consecutive(&s, &a), &s, &a);
        assert_eq!(c.indices, vec![0, 1]);
    }

    #[test]
    fn fixed_length_examples() {
        let s = seq(8, &[1, 2, 4, 0, 0, 0, 0, 0, 0, 0]);
        let v = solve_fixed_length(&s, &w("units", 8), 8).unwrap();
        assert_eq!(v.outcome, Outcome::NotFound);

        for n in [3u64, 8] {
            let s = ResidueSequence::from_values(n, &vec![0; n as usize]).unwrap();
            let a = w("units", n);
            let c = found(&solve_fixed_length(&s, &a, n as usize).unwrap(), &s, &a);
            assert_eq!(c.indices.len(), n as usize);
        }

        let s = seq(2, &[1, 1, 0]);
        let a = w("one", 2);
        let c = found(&solve_fixed_length(&s, &a, 2).unwrap(), &s, &a);
        assert_eq!(c.indices, vec![0, 1]);

        assert!(solve_fixed_length(&s, &a, 4).is_err());
        assert!(solve_fixed_length(&s, &a, 0).is_err());
    }

    #[test]
    fn product_group_any() {
        let g = FiniteModule::product(&[2, 2]).unwrap();
        let x = g.encode(&[1, 0]);
        let y = g.encode(&[0, 1]);
        let z = g.encode(&[1, 1]);
        assert_eq!(find_any(&g, &[1], &[x, y]), None);
        let (ix, _) = find_any(&g, &[1], &[x, y, z]).unwrap();
        assert_eq!(ix, vec![0, 1, 2]);
        assert_eq!(find_block(&g, &[1], &[x, y, x]), None);
    }

    fn naive_zero(n: u64, xs: &[u64], a: &[u64]) -> bool {
        // any weight tuple from A^{|xs|} summing to zero
        let mut sums = vec![0u64];
        for &x in xs {
            sums = sums
                .iter()
                .flat_map(|&s| a.iter().map(move |&w| (s + w * x) % n))
                .collect();
            sums.sort_unstable();
            sums.dedup();
        }
        sums.contains(&0)
    }

    fn naive(n: u64, xs: &[u64], a: &[u64], kind: CertificateKind) -> bool {
        let m = xs.len();
        match kind {
            CertificateKind::ConsecutiveBlock => (0..m)
                .any(|i| (i..m).any(|j| naive_zero(n, &xs[i..=j], a))),
            _ => (1u32..1 << m).any(|mask| {
                let pick: Vec<u64> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| xs[i]).collect();
                let len_ok = match kind {
                    CertificateKind::FixedLength(l) => pick.len() == l,
                    _ => true,
                };
                len_ok && naive_zero(n, &pick, a)
            }),
        }
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_enumeration(
            n in 2u64..=12,
            raw in proptest::collection::vec(0u64..12, 1..=6),
            which in 0usize..4,
            l in 1usize..=6,
        ) {
            let spec = ["units", "one", "odd", "explicit:1,-1"][which];
            let a = w(spec, n);
            let xs: Vec<u64> = raw.iter().map(|x| x % n).collect();
            let s = ResidueSequence::from_values(n, &xs).unwrap();
            let mut kinds = vec![CertificateKind::AnySubsequence, CertificateKind::ConsecutiveBlock];
            if l <= xs.len() {
                kinds.push(CertificateKind::FixedLength(l));
            }
            for kind in kinds {
                let v = super::super::solve(&s, &a, kind).unwrap();
                proptest::prop_assert_eq!(v.is_found(), naive(n, &xs, a.values(), kind));
                if let Some(c) = v.found() {
                    proptest::prop_assert!(c.check(&s, &a).is_ok());
                    proptest::prop_assert_eq!(c.kind, kind);
                }
            }
        }

        #[test]
        fn full_length_survives_unshift(
            n in 1u64..=10,
            raw in proptest::collection::vec(0u64..10, 10),
            shift in 0u64..10,
        ) {
            let xs: Vec<u64> = raw.iter().take(n as usize).map(|x| x % n).collect();
            let s = ResidueSequence::from_values(n, &xs).unwrap();
            let one = w("one", n);
            let len = n as usize;
            if solve_fixed_length(&s.shift(shift % n), &one, len).unwrap().is_found() {
                proptest::prop_assert!(solve_fixed_length(&s, &one, len).unwrap().is_found());
            }
        }
    }
}
