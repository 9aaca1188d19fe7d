//! Exhaustive computation of the constants.
//!
//! A sequence is summarized by what its qualifying weighted sums can reach:
//!
//! * `D`: all sums over nonempty subsequences, `V' = V ∪ ((V ∪ {0}) + A·x)`;
//! * `C`: sums over blocks ending at the last term, `U' = (U ∪ {0}) + A·x`;
//! * `E`: for every `c ≤ |G|`, sums over `c`-term subsequences,
//!   `R'_c = R_c ∪ (R_{c-1} + A·x)`.
//!
//! A sequence lacks the structure iff `0` is not reachable (in `R_{|G|}` for
//! `E`). The constant is one more than the longest path through such states,
//! found by depth-first search memoized on the state. Scaling by an integer
//! coprime to the group exponent maps qualifying sums to qualifying sums for
//! every weight set, so memo keys are reduced to the least scaled state.

use std::collections::HashMap;

use crate::algebra::{gcd, ResidueSequence};
use crate::error::{Error, Result};
use crate::module::FiniteModule;
use crate::weights::WeightSetSpec;

use super::{ConstantKind, ConstantResult, GroupSpec, Method, DEFAULT_BUDGET};

/// Controls for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of state transitions evaluated.
    pub budget: u64,
    /// Reduce memo keys under unit scaling.
    pub symmetry: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            symmetry: true,
        }
    }
}

impl SearchOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

/// Trivial upper bound on the constant.
pub fn trivial_upper(kind: ConstantKind, order: usize) -> u64 {
    match kind {
        ConstantKind::C | ConstantKind::D => order as u64,
        ConstantKind::E => 2 * order as u64 - 1,
    }
}

type State = Box<[u64]>;

struct Exhausted;

pub(crate) struct Search<'a> {
    module: &'a FiniteModule,
    kind: ConstantKind,
    order: usize,
    wpl: usize,
    levels: usize,
    /// Distinct values `a·x` for each element `x`.
    mult: Vec<Vec<usize>>,
    /// `add[x * order + y]`, when small enough to tabulate.
    add: Option<Vec<u32>>,
    /// Permutations `x ↦ c·x` for units `c ≠ 1` of the exponent.
    scalers: Vec<Vec<usize>>,
    memo: HashMap<State, u32>,
    steps: u64,
    budget: u64,
    deepest: u32,
}

const ADD_TABLE_MAX: usize = 1024;

impl<'a> Search<'a> {
    pub(crate) fn new(
        module: &'a FiniteModule,
        weights: &[u64],
        kind: ConstantKind,
        opts: SearchOptions,
    ) -> Self {
        let order = module.order();
        let mult = (0..order)
            .map(|x| {
                module
                    .multiples(weights, x)
                    .into_iter()
                    .map(|m| m.value)
                    .collect()
            })
            .collect();
        let add = (!module.is_cyclic() && order <= ADD_TABLE_MAX).then(|| {
            (0..order * order)
                .map(|i| module.add(i / order, i % order) as u32)
                .collect()
        });
        let exp = module.exponent();
        let scalers = if opts.symmetry {
            (2..exp)
                .filter(|&c| gcd(c, exp) == 1)
                .map(|c| (0..order).map(|x| module.scale(c, x)).collect())
                .collect()
        } else {
            Vec::new()
        };
        let levels = match kind {
            ConstantKind::E => order,
            _ => 1,
        };
        Self {
            module,
            kind,
            order,
            wpl: order.div_ceil(64),
            levels,
            mult,
            add,
            scalers,
            memo: HashMap::new(),
            steps: 0,
            budget: opts.budget,
            deepest: 0,
        }
    }

    fn root(&self) -> State {
        vec![0; self.wpl * self.levels].into_boxed_slice()
    }

    /// OR `src + y` into `dst`.
    fn translate_or(&self, src: &[u64], y: usize, dst: &mut [u64]) {
        let n = self.order;
        if self.module.is_cyclic() {
            if y == 0 {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d |= s;
                }
                return;
            }
            if self.wpl == 1 {
                let w = src[0];
                let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
                dst[0] |= ((w << y) | (w >> (n - y))) & mask;
                return;
            }
        }
        for (wi, &w) in src.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let s = wi * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                let t = match (&self.add, self.module.is_cyclic()) {
                    (_, true) => (s + y) % n,
                    (Some(tab), false) => tab[s * n + y] as usize,
                    (None, false) => self.module.add(s, y),
                };
                dst[t / 64] |= 1 << (t % 64);
            }
        }
    }

    /// `(src ∪ {0}) + A·x`, OR-ed into `dst`.
    fn extend_or(&self, src: Option<&[u64]>, x: usize, dst: &mut [u64]) {
        for &v in &self.mult[x] {
            dst[v / 64] |= 1 << (v % 64);
            if let Some(src) = src {
                self.translate_or(src, v, dst);
            }
        }
    }

    /// Successor state, or `None` when appending `x` creates the structure.
    fn child(&mut self, state: &[u64], x: usize) -> Option<State> {
        self.steps += 1;
        let w = self.wpl;
        let mut next = vec![0u64; state.len()];
        match self.kind {
            ConstantKind::D => {
                next.copy_from_slice(state);
                self.extend_or(Some(state), x, &mut next);
            }
            ConstantKind::C => self.extend_or(Some(state), x, &mut next),
            ConstantKind::E => {
                next.copy_from_slice(state);
                // level c (1-based) lives at words [(c-1)w, cw)
                for c in 1..=self.levels {
                    let (lo, hi) = ((c - 1) * w, c * w);
                    let prev = (c > 1).then(|| &state[(c - 2) * w..(c - 1) * w]);
                    if c > 1 && prev.unwrap().iter().all(|&b| b == 0) {
                        continue;
                    }
                    let mut dst = next[lo..hi].to_vec();
                    match prev {
                        None => self.extend_or(None, x, &mut dst),
                        Some(prev) => {
                            for &v in &self.mult[x] {
                                self.translate_or(prev, v, &mut dst);
                            }
                        }
                    }
                    next[lo..hi].copy_from_slice(&dst);
                }
            }
        }
        let last = &next[(self.levels - 1) * w..];
        (last[0] & 1 == 0).then(|| next.into_boxed_slice())
    }

    fn canonical(&self, state: &[u64]) -> State {
        let mut best: State = state.into();
        let mut buf = vec![0u64; state.len()];
        for perm in &self.scalers {
            buf.iter_mut().for_each(|b| *b = 0);
            for (wi, &w) in state.iter().enumerate() {
                let base = (wi / self.wpl) * self.wpl;
                let offset = (wi % self.wpl) * 64;
                let mut w = w;
                while w != 0 {
                    let s = offset + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let t = perm[s];
                    buf[base + t / 64] |= 1 << (t % 64);
                }
            }
            if buf[..] < best[..] {
                best = buf.clone().into_boxed_slice();
            }
        }
        best
    }

    fn longest(&mut self, state: &[u64], depth: u32) -> std::result::Result<u32, Exhausted> {
        let key = self.canonical(state);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.deepest = self.deepest.max(depth);
        let mut best = 0;
        for x in 0..self.order {
            if self.steps >= self.budget {
                return Err(Exhausted);
            }
            if let Some(next) = self.child(state, x) {
                best = best.max(1 + self.longest(&next, depth + 1)?);
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }

    fn exhausted(&self) -> Error {
        Error::BudgetExceeded {
            lower: u64::from(self.deepest) + 1,
            upper: trivial_upper(self.kind, self.order),
        }
    }

    /// The constant and the lexicographically least longest sequence
    /// without the structure.
    pub(crate) fn run(&mut self) -> Result<(u64, Vec<usize>)> {
        let root = self.root();
        let best = self.longest(&root, 0).map_err(|_| self.exhausted())?;
        let mut witness = Vec::with_capacity(best as usize);
        let mut state = root;
        let mut remaining = best;
        while remaining > 0 {
            let (x, next) = (0..self.order)
                .find_map(|x| {
                    let next = self.child(&state, x)?;
                    let len = self.longest(&next, 0).ok()?;
                    (len + 1 == remaining).then_some((x, next))
                })
                .expect("memoized path exists");
            witness.push(x);
            state = next;
            remaining -= 1;
        }
        Ok((u64::from(best) + 1, witness))
    }

    /// Every sequence (nondecreasing when `sorted`) of length `len` without
    /// the structure.
    pub(crate) fn enumerate(&mut self, len: usize, sorted: bool) -> Result<Vec<Vec<usize>>> {
        let root = self.root();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(len);
        self.enumerate_from(&root, len, sorted, &mut prefix, &mut out)
            .map_err(|_| self.exhausted())?;
        Ok(out)
    }

    fn enumerate_from(
        &mut self,
        state: &[u64],
        len: usize,
        sorted: bool,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> std::result::Result<(), Exhausted> {
        if prefix.len() == len {
            out.push(prefix.clone());
            return Ok(());
        }
        let start = if sorted { prefix.last().copied().unwrap_or(0) } else { 0 };
        let need = (len - prefix.len() - 1) as u32;
        for x in start..self.order {
            if self.steps >= self.budget {
                return Err(Exhausted);
            }
            let Some(next) = self.child(state, x) else {
                continue;
            };
            if self.longest(&next, prefix.len() as u32 + 1)? < need {
                continue;
            }
            prefix.push(x);
            self.enumerate_from(&next, len, sorted, prefix, out)?;
            prefix.pop();
        }
        Ok(())
    }
}

/// Exact constant over a product group with integer weights, and a
/// lexicographically least extremal sequence (as element codes).
pub fn group_constant_with_witness(
    group: &GroupSpec,
    weights: &[u64],
    kind: ConstantKind,
    opts: SearchOptions,
) -> Result<(u64, Vec<usize>)> {
    Search::new(group.module(), weights, kind, opts).run()
}

/// Exact constant over a product group with integer weights.
pub fn compute_group_constant(
    group: &GroupSpec,
    weights: &[u64],
    kind: ConstantKind,
    budget: u64,
) -> Result<u64> {
    group_constant_with_witness(group, weights, kind, SearchOptions::with_budget(budget)).map(|r| r.0)
}

/// Unweighted `C(G)`.
pub fn compute_group_c(group: &GroupSpec, budget: u64) -> Result<u64> {
    compute_group_constant(group, &[1], ConstantKind::C, budget)
}

/// Exact `D_A(n)`, `C_A(n)` or `E_A(n)` with an extremal witness.
pub fn compute_exhaustive(
    kind: ConstantKind,
    n: u64,
    spec: &WeightSetSpec,
    budget: u64,
) -> Result<ConstantResult> {
    compute_exhaustive_with(kind, n, spec, SearchOptions::with_budget(budget))
}

pub fn compute_exhaustive_with(
    kind: ConstantKind,
    n: u64,
    spec: &WeightSetSpec,
    opts: SearchOptions,
) -> Result<ConstantResult> {
    let a = spec.materialize(n)?;
    let module = FiniteModule::cyclic(n)?;
    let (value, witness) = Search::new(&module, a.values(), kind, opts).run()?;
    let witness: Vec<u64> = witness.into_iter().map(|x| x as u64).collect();
    Ok(ConstantResult {
        kind,
        n,
        weights: spec.clone(),
        value,
        method: Method::Exhaustive,
        witness: Some(ResidueSequence::from_values(n, &witness)?),
    })
}
