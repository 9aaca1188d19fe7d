//! Bit-packed linear algebra over F_2 for the kernel-vector lemmas.
//!
//! A [`GF2Matrix`] with `m` rows and `a` columns is read as a sequence of `m`
//! elements of `Z_2^a`. Every kernel routine returns a [`SupportSelection`]
//! of rows whose XOR is zero:
//!
//! * [`kernel_window`]: a consecutive block, guaranteed once `m >= 2^a`;
//! * [`kernel_subset`]: any nonempty set, guaranteed once `m >= a + 1`;
//! * [`kernel_fixed_weight`]: exactly `m` rows out of `m + a`, for even
//!   `m >= 2^a`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Fixed-length bit string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vector {
    words: Vec<u64>,
    len: usize,
}

impl GF2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parse a string of `0`/`1` characters.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self::from_bits(&bits))
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &GF2Vector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &GF2Vector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    fn highest_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

impl fmt::Debug for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vector({self})")
    }
}

impl fmt::Display for GF2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `m × a` matrix stored as `m` packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: Vec<GF2Vector>,
    cols: usize,
}

impl GF2Matrix {
    pub fn new(rows: Vec<GF2Vector>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Precondition(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Self { rows, cols })
    }

    /// Rows given as `0`/`1` strings of equal length.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| GF2Vector::from_str_bits(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols)
    }

    pub fn rows(&self) -> &[GF2Vector] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &GF2Vector {
        &self.rows[i]
    }

    pub fn transpose(&self) -> GF2Matrix {
        let rows = (0..self.cols)
            .map(|c| {
                let bits: Vec<bool> = self.rows.iter().map(|r| r.get(c)).collect();
                GF2Vector::from_bits(&bits)
            })
            .collect();
        GF2Matrix {
            rows,
            cols: self.rows.len(),
        }
    }

    /// XOR of the selected rows, computed independently of any solver state.
    pub fn xor_rows(&self, indices: &[usize]) -> GF2Vector {
        let mut acc = GF2Vector::zeros(self.cols);
        for &i in indices {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    fn truncated(&self, m: usize) -> GF2Matrix {
        GF2Matrix {
            rows: self.rows[..m].to_vec(),
            cols: self.cols,
        }
    }

    /// Text fixture form: first line `m a`, then one line of bits per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows.len(), self.cols);
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }
}

impl FromStr for GF2Matrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad header {header:?}")))?;
        let [m, a] = dims[..] else {
            return Err(Error::Parse(format!("header must be `m a`, got {header:?}")));
        };
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            // a zero-column matrix has no row lines
            let line = if a == 0 { "" } else {
                lines
                    .next()
                    .ok_or_else(|| Error::Parse(format!("expected {m} rows")))?
            };
            if line.len() != a {
                return Err(Error::Parse(format!(
                    "row {line:?} does not have {a} columns"
                )));
            }
            rows.push(GF2Vector::from_str_bits(line)?);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {m} rows")));
        }
        GF2Matrix::new(rows, a)
    }
}

/// A nonempty set of row indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportSelection {
    /// Rows `start..=end`.
    Window { start: usize, end: usize },
    /// Sorted, distinct row indices.
    Subset(Vec<usize>),
}

impl SupportSelection {
    pub fn indices(&self) -> Vec<usize> {
        match self {
            SupportSelection::Window { start, end } => (*start..=*end).collect(),
            SupportSelection::Subset(ix) => ix.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SupportSelection::Window { start, end } => end - start + 1,
            SupportSelection::Subset(ix) => ix.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices in the 1-based convention used for display.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }
}

fn pow2_at_most(a: usize, m: usize) -> bool {
    a < usize::BITS as usize && (1usize << a) <= m
}

/// A consecutive block of rows with zero XOR; the block with the smallest end
/// index is returned, and among those the shortest.
pub fn kernel_window(p: &GF2Matrix) -> Result<SupportSelection> {
    let (m, a) = (p.row_count(), p.col_count());
    if !pow2_at_most(a, m) {
        return Err(Error::Precondition(format!(
            "kernel window needs at least 2^{a} rows, got {m}"
        )));
    }
    // latest index at which each prefix XOR was seen
    let mut seen: HashMap<GF2Vector, usize> = HashMap::new();
    let mut prefix = GF2Vector::zeros(a);
    seen.insert(prefix.clone(), 0);
    for j in 1..=m {
        prefix.xor_assign(p.row(j - 1));
        if let Some(&i) = seen.get(&prefix) {
            return Ok(SupportSelection::Window {
                start: i,
                end: j - 1,
            });
        }
        seen.insert(prefix.clone(), j);
    }
    unreachable!("pigeonhole on 2^a prefix values")
}

/// A nonempty set of rows with zero XOR, found by elimination in row order;
/// the first row that reduces to zero closes the returned dependency.
pub fn kernel_subset(p: &GF2Matrix) -> Result<SupportSelection> {
    let m = p.row_count();
    let mut basis: Vec<(usize, GF2Vector, GF2Vector)> = Vec::new();
    for k in 0..m {
        let mut v = p.row(k).clone();
        let mut combo = GF2Vector::unit(m, k);
        for (pivot, b, bc) in &basis {
            if v.get(*pivot) {
                v.xor_assign(b);
                combo.xor_assign(bc);
            }
        }
        match v.highest_bit() {
            None => return Ok(SupportSelection::Subset(combo.ones().collect())),
            Some(pivot) => basis.push((pivot, v, combo)),
        }
    }
    Err(Error::NoKernel)
}

/// Exactly `m` rows among the first `m + a` whose XOR is zero, for even
/// `m >= 2^a`.
pub fn kernel_fixed_weight(p: &GF2Matrix, m: usize) -> Result<SupportSelection> {
    let a = p.col_count();
    if !m.is_multiple_of(2) || !pow2_at_most(a, m) || p.row_count() < m + a {
        return Err(Error::Precondition(format!(
            "fixed-weight kernel needs even m >= 2^a and m + a rows (m = {m}, a = {a}, rows = {})",
            p.row_count()
        )));
    }
    let q = p.truncated(m + a);
    let found = fixed_weight_constructive(&q, m)
        .filter(|ix| ix.len() == m && q.xor_rows(ix).is_zero());
    match found {
        Some(ix) => Ok(SupportSelection::Subset(ix)),
        None if m + a <= 24 => fixed_weight_exhaustive(&q, m)
            .map(SupportSelection::Subset)
            .ok_or(Error::NoKernel),
        None => Err(Error::NoKernel),
    }
}

/// Groups of equal rows, in order of first occurrence.
fn equal_row_groups(rows: &[GF2Vector]) -> Vec<Vec<usize>> {
    let mut slot: HashMap<&GF2Vector, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let g = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

fn take_pairs(pairs: &[(usize, usize)], count: usize) -> Option<Vec<usize>> {
    if pairs.len() < count {
        return None;
    }
    Some(pairs[..count].iter().flat_map(|&(i, j)| [i, j]).collect())
}

fn fixed_weight_constructive(q: &GF2Matrix, m: usize) -> Option<Vec<usize>> {
    let a = q.col_count();
    let groups = equal_row_groups(q.rows());

    // Equal rows cancel in pairs; the odd copy of each value (its last
    // occurrence) forms the distinct part.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut distinct: Vec<usize> = Vec::new();
    for g in &groups {
        let paired = g.len() - g.len() % 2;
        pairs.extend(g[..paired].chunks(2).map(|c| (c[0], c[1])));
        if g.len() % 2 == 1 {
            distinct.push(g[g.len() - 1]);
        }
    }
    pairs.sort_unstable();
    distinct.sort_unstable();

    let mut chosen = if distinct.len() <= a {
        take_pairs(&pairs, m / 2)?
    } else {
        // Translate so that one odd-multiplicity value becomes zero; with m
        // even this does not change which m-subsets have zero sum.
        let first_odd = *distinct.iter().min()?;
        let shift = q.row(first_odd).clone();
        let shifted: Vec<GF2Vector> = distinct
            .iter()
            .map(|&i| {
                let mut v = q.row(i).clone();
                v.xor_assign(&shift);
                v
            })
            .collect();
        let zero_pos = distinct.iter().position(|&i| q.row(i) == &shift)?;

        // Peel zero-sum subsets off the distinct part until what remains is
        // independent.
        let mut rest: Vec<usize> = (0..distinct.len()).collect();
        let mut zero_sum: Vec<usize> = Vec::new();
        loop {
            let sub = GF2Matrix {
                rows: rest.iter().map(|&k| shifted[k].clone()).collect(),
                cols: a,
            };
            match kernel_subset(&sub) {
                Ok(sel) => {
                    let picked: Vec<usize> = sel.indices().iter().map(|&k| rest[k]).collect();
                    zero_sum.extend(&picked);
                    rest.retain(|k| !picked.contains(k));
                }
                Err(_) => break,
            }
        }
        if zero_sum.len() % 2 == 1 {
            zero_sum.retain(|&k| k != zero_pos);
        }
        let l = zero_sum.len();
        if l > m {
            return None;
        }
        let mut ix: Vec<usize> = zero_sum.iter().map(|&k| distinct[k]).collect();
        ix.extend(take_pairs(&pairs, (m - l) / 2)?);
        ix
    };
    chosen.sort_unstable();
    Some(chosen)
}

fn fixed_weight_exhaustive(q: &GF2Matrix, m: usize) -> Option<Vec<usize>> {
    let k = q.row_count();
    let mut ix: Vec<usize> = (0..m).collect();
    loop {
        if q.xor_rows(&ix).is_zero() {
            return Some(ix);
        }
        // next m-combination of 0..k in lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if ix[i] < k - m + i {
                break;
            }
        }
        ix[i] += 1;
        for j in i + 1..m {
            ix[j] = ix[j - 1] + 1;
        }
    }
}

/// Basis of the null space `{ y : B y = 0 }` of the matrix whose rows are
/// `rows` (all of length `len`).
fn null_space(rows: &[GF2Vector], len: usize) -> (usize, Vec<GF2Vector>) {
    let mut r: Vec<GF2Vector> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..len {
        let Some(p) = (rank..r.len()).find(|&i| r[i].get(col)) else {
            continue;
        };
        r.swap(rank, p);
        let pivot_row = r[rank].clone();
        for (i, row) in r.iter_mut().enumerate() {
            if i != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let basis = (0..len)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut y = GF2Vector::unit(len, free);
            for (i, &pc) in pivots.iter().enumerate() {
                if r[i].get(free) {
                    y.set(pc, true);
                }
            }
            y
        })
        .collect();
    (rank, basis)
}

/// A weight-`m` vector inside the span of `basis`, where the basis has `m`
/// independent vectors of length `m + a`, `m` even and `m >= 2^a`.
///
/// The columns of a parity-check matrix for the span are fed to
/// [`kernel_fixed_weight`]; the selected columns are the support of the
/// returned vector.
pub fn subspace_weight_m_vector(basis: &[GF2Vector]) -> Result<GF2Vector> {
    let m = basis.len();
    let len = basis.first().map_or(0, GF2Vector::len);
    if basis.iter().any(|b| b.len() != len) || len < m {
        return Err(Error::Precondition("basis vectors must share a length >= m".into()));
    }
    let a = len - m;
    if m == 0 || !m.is_multiple_of(2) || !pow2_at_most(a, m) {
        return Err(Error::Precondition(format!(
            "need even m >= 2^a (m = {m}, a = {a})"
        )));
    }
    let (rank, parity_rows) = null_space(basis, len);
    if rank != m {
        return Err(Error::Precondition("basis is linearly dependent".into()));
    }
    let columns = GF2Matrix::new(parity_rows, len)?.transpose();
    let sel = kernel_fixed_weight(&columns, m)?;
    let mut v = GF2Vector::zeros(len);
    for i in sel.indices() {
        v.set(i, true);
    }
    Ok(v)
}

/// Reduce `v` against `basis`; zero iff `v` lies in the span.
pub fn reduce_against(basis: &[GF2Vector], v: &GF2Vector) -> GF2Vector {
    let mut echelon: Vec<(usize, GF2Vector)> = Vec::new();
    for b in basis {
        let mut b = b.clone();
        for (p, e) in &echelon {
            if b.get(*p) {
                b.xor_assign(e);
            }
        }
        if let Some(p) = b.highest_bit() {
            echelon.push((p, b));
        }
    }
    let mut v = v.clone();
    for (p, e) in &echelon {
        if v.get(*p) {
            v.xor_assign(e);
        }
    }
    v
}

/// Outcome of the `l(n, m̄)` check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LBarCheck {
    /// `l(n, m̄) = m - 1`.
    Guaranteed {
        value: usize,
        /// Basis `e_1, ..., e_{m-1}` of a subspace with no weight-`m` vector.
        lower_witness: Vec<GF2Vector>,
        /// For small `n`: every `m`-dimensional subspace was enumerated and
        /// found to contain a weight-`m` vector.
        exhaustive_upper: Option<bool>,
    },
    /// Parameters outside the range where the value is known.
    NotGuaranteed,
}

/// Largest `n` for which [`check_l_bar`] enumerates subspaces.
pub const L_BAR_EXHAUSTIVE_MAX_N: usize = 8;

/// `l(n, m̄)`, the largest dimension of a subspace of F_2^n without a vector
/// of weight `m`, in the regime `m` even, `m <= n`, `m >= 2^(n-m)`.
///
/// Note the regime is `m <= n`: for `m > n` there are no weight-`m` vectors
/// in F_2^n and the value would be `n`.
pub fn check_l_bar(n: usize, m: usize) -> LBarCheck {
    if m == 0 || !m.is_multiple_of(2) || m > n || !pow2_at_most(n - m, m) {
        return LBarCheck::NotGuaranteed;
    }
    let lower_witness: Vec<GF2Vector> = (0..m - 1).map(|i| GF2Vector::unit(n, i)).collect();
    let exhaustive_upper = (n <= L_BAR_EXHAUSTIVE_MAX_N)
        .then(|| subspaces(n, m).all(|basis| span_has_weight(&basis, m)));
    LBarCheck::Guaranteed {
        value: m - 1,
        lower_witness,
        exhaustive_upper,
    }
}

/// `l(n, m̄)` by enumerating every subspace of F_2^n (small `n` only).
pub fn l_bar_exhaustive(n: usize, m: usize) -> usize {
    assert!(n <= L_BAR_EXHAUSTIVE_MAX_N, "exhaustive l(n, m) is limited to small n");
    (0..=n)
        .rev()
        .find(|&k| subspaces(n, k).any(|basis| !span_has_weight(&basis, m)))
        .unwrap_or(0)
}

/// Does the span of `basis` (bitmask form) contain a vector of weight `m`?
fn span_has_weight(basis: &[u64], m: usize) -> bool {
    (0u64..1 << basis.len()).any(|mask| {
        let v = basis
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(0u64, |acc, (_, b)| acc ^ b);
        v.count_ones() as usize == m
    })
}

/// All `k`-dimensional subspaces of F_2^n, each given once by its reduced row
/// echelon basis (vectors as bitmasks, bit `i` = coordinate `i`).
fn subspaces(n: usize, k: usize) -> impl Iterator<Item = Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    for pivots in combinations(n, k) {
        // free positions: for row i, columns after its pivot that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| {
                let pivots = &pivots;
                (p + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        for assignment in 0u64..1 << free.len() {
            let mut basis: Vec<u64> = pivots.iter().map(|&p| 1u64 << p).collect();
            for (bit, &(i, c)) in free.iter().enumerate() {
                if assignment >> bit & 1 == 1 {
                    basis[i] |= 1 << c;
                }
            }
            out.push(basis);
        }
    }
    out.into_iter()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> GF2Matrix {
        GF2Matrix::from_rows(rows).unwrap()
    }

    /// Every window with zero XOR, by direct scan.
    fn zero_windows(p: &GF2Matrix) -> Vec<(usize, usize)> {
        let m = p.row_count();
        let mut out = Vec::new();
        for i in 0..m {
            for j in i..m {
                let ix: Vec<usize> = (i..=j).collect();
                if p.xor_rows(&ix).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn window_examples() {
        assert_eq!(
            kernel_window(&mat(&["1", "1", "0"])).unwrap(),
            SupportSelection::Window { start: 0, end: 1 }
        );
        let p = mat(&["01", "10", "11", "00"]);
        assert_eq!(zero_windows(&p), vec![(0, 2), (0, 3), (3, 3)]);
        // smallest end index wins
        assert_eq!(
            kernel_window(&p).unwrap(),
            SupportSelection::Window { start: 0, end: 2 }
        );
        assert_eq!(
            kernel_window(&mat(&["00", "00", "00", "00"])).unwrap(),
            SupportSelection::Window { start: 0, end: 0 }
        );
        assert!(kernel_window(&mat(&["01", "10", "11"])).is_err());
    }

    #[test]
    fn window_is_earliest_then_shortest() {
        let p = mat(&["1", "0", "1", "1"]);
        // zero windows: (1,1) ends at 1
        assert_eq!(
            kernel_window(&p).unwrap(),
            SupportSelection::Window { start: 1, end: 1 }
        );
        let p = mat(&["10", "01", "01", "10"]);
        assert_eq!(
            kernel_window(&p).unwrap(),
            SupportSelection::Window { start: 1, end: 2 }
        );
    }

    #[test]
    fn subset_examples() {
        assert_eq!(
            kernel_subset(&mat(&["01", "10", "11"])).unwrap(),
            SupportSelection::Subset(vec![0, 1, 2])
        );
        assert_eq!(
            kernel_subset(&mat(&["1", "1"])).unwrap(),
            SupportSelection::Subset(vec![0, 1])
        );
        assert_eq!(
            kernel_subset(&mat(&["10", "00", "01"])).unwrap(),
            SupportSelection::Subset(vec![1])
        );
        assert_eq!(kernel_subset(&mat(&["10", "01"])), Err(Error::NoKernel));
    }

    #[test]
    fn fixed_weight_examples() {
        assert_eq!(
            kernel_fixed_weight(&mat(&["1", "1", "0"]), 2).unwrap(),
            SupportSelection::Subset(vec![0, 1])
        );
        assert_eq!(
            kernel_fixed_weight(&mat(&["1", "0", "0"]), 2).unwrap(),
            SupportSelection::Subset(vec![1, 2])
        );
        let p = mat(&["01", "10", "11", "00", "01", "11"]);
        let sel = kernel_fixed_weight(&p, 4).unwrap();
        assert_eq!(sel.len(), 4);
        assert!(p.xor_rows(&sel.indices()).is_zero());
        // brute force over all C(6,4) subsets finds at least one solution
        assert!(fixed_weight_exhaustive(&p, 4).is_some());
    }

    #[test]
    fn fixed_weight_rejects_bad_parameters() {
        let p = mat(&["1", "0", "0", "1"]);
        assert!(kernel_fixed_weight(&p, 3).is_err());
        let p = mat(&["10", "01", "11", "00"]);
        assert!(kernel_fixed_weight(&p, 2).is_err());
        assert!(kernel_fixed_weight(&mat(&["1", "0"]), 2).is_err());
    }

    #[test]
    fn fixed_weight_agrees_with_exhaustive_on_small_matrices() {
        // every matrix with a = 1, m = 2 (3 rows) and a = 2, m = 4 (6 rows)
        for (a, m) in [(1usize, 2usize), (2, 4), (1, 4)] {
            let k = m + a;
            for code in 0u64..1 << (k * a) {
                let rows: Vec<GF2Vector> = (0..k)
                    .map(|r| {
                        let bits: Vec<bool> =
                            (0..a).map(|c| code >> (r * a + c) & 1 == 1).collect();
                        GF2Vector::from_bits(&bits)
                    })
                    .collect();
                let p = GF2Matrix::new(rows, a).unwrap();
                let constructive = fixed_weight_constructive(&p, m).unwrap();
                assert_eq!(constructive.len(), m);
                assert!(p.xor_rows(&constructive).is_zero(), "{}", p.to_text());
            }
        }
    }

    #[test]
    fn subspace_examples() {
        let v = |s: &str| GF2Vector::from_str_bits(s).unwrap();
        let w = subspace_weight_m_vector(&[v("110"), v("001")]).unwrap();
        assert_eq!(w, v("110"));
        let w = subspace_weight_m_vector(&[v("101"), v("011")]).unwrap();
        assert_eq!(w.weight(), 2);
        assert!(reduce_against(&[v("101"), v("011")], &w).is_zero());
        let basis: Vec<GF2Vector> = (0..4).map(|i| GF2Vector::unit(6, i)).collect();
        assert_eq!(subspace_weight_m_vector(&basis).unwrap(), v("111100"));
        assert!(subspace_weight_m_vector(&[v("110"), v("110")]).is_err());
    }

    #[test]
    fn full_space_when_codimension_zero() {
        let basis: Vec<GF2Vector> = (0..4).map(|i| GF2Vector::unit(4, i)).collect();
        assert_eq!(subspace_weight_m_vector(&basis).unwrap().weight(), 4);
    }

    #[test]
    fn two_dimensional_subspaces_of_f2_cubed() {
        assert_eq!(subspaces(3, 2).count(), 7);
        assert!(subspaces(3, 2).all(|b| span_has_weight(&b, 2)));
        assert_eq!(subspaces(6, 4).count(), 651);
    }

    #[test]
    fn l_bar_examples() {
        match check_l_bar(3, 2) {
            LBarCheck::Guaranteed {
                value,
                lower_witness,
                exhaustive_upper,
            } => {
                assert_eq!(value, 1);
                assert_eq!(lower_witness, vec![GF2Vector::unit(3, 0)]);
                assert_eq!(exhaustive_upper, Some(true));
            }
            LBarCheck::NotGuaranteed => panic!("(3,2) is in range"),
        }
        assert!(matches!(
            check_l_bar(6, 4),
            LBarCheck::Guaranteed { value: 3, exhaustive_upper: Some(true), .. }
        ));
        assert!(matches!(
            check_l_bar(4, 4),
            LBarCheck::Guaranteed { value: 3, .. }
        ));
        assert_eq!(check_l_bar(4, 2), LBarCheck::NotGuaranteed);
        assert_eq!(check_l_bar(5, 3), LBarCheck::NotGuaranteed);
        assert_eq!(l_bar_exhaustive(3, 2), 1);
        assert_eq!(l_bar_exhaustive(6, 4), 3);
        // outside the regime the value differs: span{1000, 0111} avoids weight 2
        assert_eq!(l_bar_exhaustive(4, 2), 2);
    }

    #[test]
    fn matrix_text_round_trip() {
        let p = mat(&["01", "10", "11"]);
        let text = p.to_text();
        assert_eq!(text, "3 2\n01\n10\n11\n");
        assert_eq!(text.parse::<GF2Matrix>().unwrap(), p);
        assert!("2 2\n01\n".parse::<GF2Matrix>().is_err());
        assert!("1 2\n012\n".parse::<GF2Matrix>().is_err());
    }

    fn matrix_from_bits(bits: &[bool], m: usize, a: usize) -> GF2Matrix {
        let rows = (0..m)
            .map(|i| GF2Vector::from_bits(&bits[i * a..(i + 1) * a]))
            .collect();
        GF2Matrix::new(rows, a).unwrap()
    }

    /// XOR of selected rows, accumulated column by column from raw bits.
    fn independent_xor_is_zero(p: &GF2Matrix, ix: &[usize]) -> bool {
        (0..p.col_count()).all(|c| ix.iter().filter(|&&i| p.row(i).get(c)).count() % 2 == 0)
    }

    proptest::proptest! {
        #[test]
        fn window_selections_are_kernel_vectors(
            a in 1usize..=6,
            bits in proptest::collection::vec(proptest::bool::ANY, 64 * 6),
        ) {
            let p = matrix_from_bits(&bits, 1 << a, a);
            let sel = kernel_window(&p).unwrap();
            let ix = sel.indices();
            proptest::prop_assert!(!ix.is_empty());
            proptest::prop_assert!(ix.windows(2).all(|w| w[1] == w[0] + 1));
            proptest::prop_assert!(independent_xor_is_zero(&p, &ix));
        }

        #[test]
        fn subset_selections_are_kernel_vectors(
            a in 1usize..=10,
            extra in 0usize..4,
            bits in proptest::collection::vec(proptest::bool::ANY, 14 * 10),
        ) {
            let p = matrix_from_bits(&bits, a + 1 + extra, a);
            let ix = kernel_subset(&p).unwrap().indices();
            proptest::prop_assert!(!ix.is_empty());
            proptest::prop_assert!(independent_xor_is_zero(&p, &ix));
        }

        #[test]
        fn fixed_weight_selections_are_kernel_vectors(
            a in 1usize..=3,
            half in 1usize..=5,
            bits in proptest::collection::vec(proptest::bool::ANY, 13 * 3),
        ) {
            let m = (2 * half).max(1 << a);
            let p = matrix_from_bits(&bits, m + a, a);
            let ix = kernel_fixed_weight(&p, m).unwrap().indices();
            proptest::prop_assert_eq!(ix.len(), m);
            proptest::prop_assert!(independent_xor_is_zero(&p, &ix));
        }

        #[test]
        fn weight_m_vector_lies_in_span(
            a in 0usize..=2,
            half in 1usize..=4,
            bits in proptest::collection::vec(proptest::bool::ANY, 10 * 10),
        ) {
            let m = (2 * half).max(1 << a);
            let len = m + a;
            let basis: Vec<GF2Vector> = (0..m)
                .map(|i| GF2Vector::from_bits(&bits[i * len..(i + 1) * len]))
                .collect();
            // only independent bases are in the domain
            let mut echelon: Vec<GF2Vector> = Vec::new();
            for b in &basis {
                let r = reduce_against(&echelon, b);
                if !r.is_zero() {
                    echelon.push(r);
                }
            }
            proptest::prop_assume!(echelon.len() == m);
            let w = subspace_weight_m_vector(&basis).unwrap();
            proptest::prop_assert_eq!(w.weight(), m);
            proptest::prop_assert!(reduce_against(&echelon, &w).is_zero());
        }
    }
}
