//! Permutations, patterns, brute-force enumeration of pattern avoiders and
//! the `insert` / `decompose` grafting pair.
//!
//! Positions and values are one-based throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Default cap on the size of brute-force enumerations.
pub const DEFAULT_ORACLE_MAX_N: usize = 10;

/// Environment variable overriding [`DEFAULT_ORACLE_MAX_N`].
pub const ORACLE_MAX_N_ENV: &str = "PERMLAB_ORACLE_MAX_N";

/// Current oracle cap, honouring `PERMLAB_ORACLE_MAX_N`.
pub fn oracle_limit() -> usize {
    std::env::var(ORACLE_MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_MAX_N)
}

/// A permutation of `1..=N`, `N >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid("a permutation needs at least one entry"));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n {
                return Err(invalid(format!("value {v} outside 1..={n}")));
            }
            if seen[v] {
                return Err(invalid(format!("value {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation { values }
    }

    pub fn identity(n: usize) -> Self {
        Permutation { values: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `σ_i` for one-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Left-to-right maxima as `(position, value)` pairs.
    pub fn left_to_right_maxima(&self) -> Vec<(usize, usize)> {
        let mut best = 0;
        let mut out = Vec::new();
        for (k, &v) in self.values.iter().enumerate() {
            if v > best {
                best = v;
                out.push((k + 1, v));
            }
        }
        out
    }

    pub fn avoids(&self, pat: &Pattern) -> bool {
        !contains(self, pat)
    }
}

impl fmt::Display for Permutation {
    /// Digits run together for `N <= 9` (`435621`), comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse().map_err(|_| invalid(format!("bad entry {p:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| invalid(format!("bad digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// A pattern `τ`: a permutation of length at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(Permutation);

impl Pattern {
    pub fn new(perm: Permutation) -> Result<Self> {
        if perm.len() < 2 {
            return Err(invalid("patterns have length at least 2"));
        }
        Ok(Pattern(perm))
    }

    /// The pattern 312 (high, low, middle).
    pub fn p312() -> Self {
        Pattern(Permutation { values: vec![3, 1, 2] })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_perm(&self) -> &Permutation {
        &self.0
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::new(s.parse()?)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Relative-order standardisation: entry `i` of the result is the rank of
/// `window[i]` among the window's entries.
pub fn pattern_of(window: &[i64]) -> Result<Permutation> {
    if window.is_empty() {
        return Err(invalid("empty window"));
    }
    let mut order: Vec<usize> = (0..window.len()).collect();
    order.sort_by_key(|&k| window[k]);
    if order.windows(2).any(|w| window[w[0]] == window[w[1]]) {
        return Err(invalid("window entries must be distinct"));
    }
    let mut ranks = vec![0; window.len()];
    for (rank, &k) in order.iter().enumerate() {
        ranks[k] = rank + 1;
    }
    Ok(Permutation { values: ranks })
}

fn standardize(window: &[usize]) -> Permutation {
    let as_i64: Vec<i64> = window.iter().map(|&v| v as i64).collect();
    pattern_of(&as_i64).expect("entries of a permutation are distinct")
}

/// Depth-first search for indices `idx[0] < … < idx[k-1]` whose values have
/// the pattern's relative order. With `last` set, the final index is pinned.
fn occurrence(values: &[usize], pat: &[usize], last: Option<usize>) -> bool {
    fn go(values: &[usize], pat: &[usize], chosen: &mut Vec<usize>, start: usize, end: usize) -> bool {
        let m = chosen.len();
        if m == pat.len() {
            return true;
        }
        let (lo, hi) = if m + 1 == pat.len() && end < values.len() {
            (end, end + 1)
        } else {
            (start, end.min(values.len()))
        };
        for idx in lo..hi {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(l, &c)| (values[c] < values[idx]) == (pat[l] < pat[m]));
            if ok {
                chosen.push(idx);
                if go(values, pat, chosen, idx + 1, end) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let end = last.unwrap_or(values.len());
    go(values, pat, &mut Vec::with_capacity(pat.len()), 0, end)
}

/// Whether some subsequence of `perm` has the relative order of `pat`.
pub fn contains(perm: &Permutation, pat: &Pattern) -> bool {
    if pat.len() > perm.len() {
        return false;
    }
    occurrence(&perm.values, &pat.0.values, None)
}

/// Lazy lexicographic enumeration of `S_N(τ)` by backtracking.
///
/// A prefix is abandoned as soon as its newest entry completes an occurrence
/// of the pattern.
#[derive(Debug, Clone)]
pub struct Avoiders {
    n: usize,
    pat: Vec<usize>,
    prefix: Vec<usize>,
    used: Vec<bool>,
    cursor: Vec<usize>,
    done: bool,
}

impl Avoiders {
    fn pop(&mut self) {
        if let Some(v) = self.prefix.pop() {
            self.used[v] = false;
        }
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        loop {
            if self.done {
                return None;
            }
            let d = self.prefix.len();
            if d == self.n {
                let out = Permutation { values: self.prefix.clone() };
                self.pop();
                return Some(out);
            }
            let mut extended = false;
            while self.cursor[d] <= self.n {
                let v = self.cursor[d];
                self.cursor[d] += 1;
                if self.used[v] {
                    continue;
                }
                self.prefix.push(v);
                if self.prefix.len() >= self.pat.len()
                    && occurrence(&self.prefix, &self.pat, Some(d))
                {
                    self.prefix.pop();
                    continue;
                }
                self.used[v] = true;
                self.cursor[d + 1] = 1;
                extended = true;
                break;
            }
            if !extended {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.pop();
            }
        }
    }
}

/// All of `S_N(τ)` in lexicographic order. Refuses `N` above [`oracle_limit`].
pub fn enumerate_avoiders(n: usize, pat: &Pattern) -> Result<Avoiders> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let limit = oracle_limit();
    if n > limit {
        return Err(Error::OracleLimit { n, limit });
    }
    let mut cursor = vec![1; n + 1];
    cursor[0] = 1;
    Ok(Avoiders {
        n,
        pat: pat.0.values.clone(),
        prefix: Vec::with_capacity(n),
        used: vec![false; n + 1],
        cursor,
        done: false,
    })
}

/// A set of `(position, value)` constraints `σ_i = j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventSpec {
    constraints: Vec<(usize, usize)>,
}

impl EventSpec {
    pub fn new(mut constraints: Vec<(usize, usize)>) -> Result<Self> {
        constraints.sort_unstable();
        for w in constraints.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(invalid(format!("position {} constrained twice", w[0].0)));
            }
        }
        let mut vals: Vec<usize> = constraints.iter().map(|c| c.1).collect();
        vals.sort_unstable();
        if vals.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("two positions share a value"));
        }
        if constraints.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(invalid("positions and values are one-based"));
        }
        Ok(EventSpec { constraints })
    }

    pub fn empty() -> Self {
        EventSpec::default()
    }

    /// Constraints sorted by position.
    pub fn constraints(&self) -> &[(usize, usize)] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn holds(&self, perm: &Permutation) -> bool {
        self.constraints
            .iter()
            .all(|&(i, j)| i <= perm.len() && perm.at(i) == j)
    }
}

/// Whether `σ_i = j` and `σ_k < j` for every `k < i` (the boxed set).
pub fn in_sbox(perm: &Permutation, i: usize, j: usize) -> bool {
    perm.at(i) == j && perm.values[..i - 1].iter().all(|&v| v < j)
}

/// The grafting `Insert(τ, σ, i)`: `τ` is placed just above `σ_i` and
/// immediately to its left, shifting the parts of `σ` above `σ_i` up by `M`.
pub fn insert(tau: &Permutation, sigma: &Permutation, i: usize) -> Result<Permutation> {
    let (n, m) = (sigma.len(), tau.len());
    if i == 0 || i > n {
        return Err(invalid(format!("insert position {i} outside 1..={n}")));
    }
    let pivot = sigma.at(i);
    let lift = |v: usize| if v > pivot { v + m } else { v };
    let mut out = Vec::with_capacity(n + m);
    out.extend(sigma.values[..i - 1].iter().map(|&v| lift(v)));
    out.extend(tau.values.iter().map(|&v| v + pivot));
    out.extend(sigma.values[i - 1..].iter().map(|&v| lift(v)));
    Ok(Permutation { values: out })
}

/// Output of [`decompose`]: `sigma == insert(tilde, hat, i0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub hat: Permutation,
    pub tilde: Permutation,
    pub i0: usize,
}

/// Splits `σ ∈ S•(M, M−t, j)` with `j < M−t` into the boxed part `σ̂` and the
/// 312-avoider `σ̃` grafted above the point at `i0 = min{i : σ_i > j}`.
pub fn decompose(sigma: &Permutation, t: usize, j: usize) -> Result<Decomposition> {
    let m = sigma.len();
    if t >= m {
        return Err(invalid(format!("t = {t} must be below M = {m}")));
    }
    let pos = m - t;
    if j == 0 || j >= pos {
        return Err(invalid(format!("need 1 <= j < M - t, got j = {j}, M - t = {pos}")));
    }
    if sigma.at(pos) != j {
        return Err(invalid(format!(
            "sigma_{pos} = {} but the point must have value j = {j}",
            sigma.at(pos)
        )));
    }
    if contains(sigma, &Pattern::p312()) {
        return Err(invalid(format!("{sigma} contains 312")));
    }
    let i0 = (1..=m).find(|&i| sigma.at(i) > j).expect("i0 exists when j < M - t");
    let vals = &sigma.values;
    let mut hat_window: Vec<usize> = vals[..i0 - 1].to_vec();
    hat_window.extend_from_slice(&vals[pos - 1..]);
    let hat = standardize(&hat_window);
    let tilde = standardize(&vals[i0 - 1..pos - 1]);
    Ok(Decomposition { hat, tilde, i0 })
}
