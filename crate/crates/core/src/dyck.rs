//! Dyck paths and segments, the bijection between `S_N(312)` and Dyck paths
//! of length `2N`, and exact uniform sampling of Dyck paths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigmath::{binomial, exact_div};
use crate::error::{invalid, Error, Result};
use crate::perm::{contains, Pattern, Permutation};

/// A sequence of `±1` steps whose partial sums stay nonnegative and end at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath {
    up: Vec<bool>,
}

impl DyckPath {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        let mut height: i64 = 0;
        let mut up = Vec::with_capacity(steps.len());
        for (k, &s) in steps.iter().enumerate() {
            match s {
                1 => height += 1,
                -1 => height -= 1,
                _ => return Err(invalid(format!("step {k} is {s}, expected +1 or -1"))),
            }
            if height < 0 {
                return Err(invalid(format!("path drops below zero after step {}", k + 1)));
            }
            up.push(s == 1);
        }
        if height != 0 {
            return Err(invalid(format!("path ends at height {height}, not 0")));
        }
        Ok(DyckPath { up })
    }

    fn from_ups_unchecked(up: Vec<bool>) -> Self {
        DyckPath { up }
    }

    /// Number of steps, `2L`.
    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// Semilength `L`.
    pub fn semilength(&self) -> usize {
        self.up.len() / 2
    }

    pub fn steps(&self) -> Vec<i8> {
        self.up.iter().map(|&u| if u { 1 } else { -1 }).collect()
    }

    /// Heights `Y_0 = 0, Y_1, …, Y_{2L}`.
    pub fn heights(&self) -> Vec<i64> {
        let mut h = Vec::with_capacity(self.up.len() + 1);
        let mut y = 0;
        h.push(0);
        for &u in &self.up {
            y += if u { 1 } else { -1 };
            h.push(y);
        }
        h
    }

    /// Peaks `(X_i, Y_i)` with `Y_{i-1} = Y_{i+1} = Y_i - 1`.
    pub fn peaks(&self) -> Vec<(usize, i64)> {
        let h = self.heights();
        (1..self.up.len())
            .filter(|&i| self.up[i - 1] && !self.up[i])
            .map(|i| (i, h[i]))
            .collect()
    }

    /// The path `(UD)^n`.
    pub fn alternating(n: usize) -> Self {
        DyckPath { up: (0..2 * n).map(|k| k % 2 == 0).collect() }
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.up.iter().map(|&u| if u { 'U' } else { 'D' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(1),
                'D' | 'd' => Ok(-1),
                other => Err(invalid(format!("unexpected step {other:?}, use U or D"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        DyckPath::new(steps)
    }
}

/// Endpoints of a Dyck segment `(x0, y0) -> (xk, yk)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentEndpoints {
    pub x0: i64,
    pub y0: i64,
    pub xk: i64,
    pub yk: i64,
}

impl SegmentEndpoints {
    pub fn new(x0: i64, y0: i64, xk: i64, yk: i64) -> Self {
        SegmentEndpoints { x0, y0, xk, yk }
    }
}

/// Number of Dyck segments between the endpoints (reflection principle).
pub fn count_segments(e: SegmentEndpoints) -> Result<BigUint> {
    if e.y0 < 0 || e.yk < 0 {
        return Err(invalid("segment heights must be nonnegative"));
    }
    if e.x0 < 0 {
        return Err(invalid("segment must start at x0 >= 0"));
    }
    let dx = e.xk - e.x0;
    let dy = e.yk - e.y0;
    if dx < 0 || dy.abs() > dx || (dx - dy).rem_euclid(2) != 0 {
        return Ok(BigUint::zero());
    }
    let all = binomial(dx, (dx + dy) / 2);
    let reflected = binomial(dx, (dx + e.yk + e.y0 + 2) / 2);
    Ok(all - reflected)
}

/// Closed form for segments from the origin: `(2y+2)/(x+y+2) · C(x, (x+y)/2)`.
pub fn count_segments_origin(xk: i64, yk: i64) -> BigUint {
    if xk < 0 || yk < 0 || yk > xk || (xk - yk) % 2 != 0 {
        return BigUint::zero();
    }
    let num = binomial(xk, (xk + yk) / 2) * (2 * yk as u64 + 2);
    exact_div(&num, &BigUint::from((xk + yk + 2) as u64), "segments from origin")
}

/// Maps `σ ∈ S_N(312)` to its Dyck path: each left-to-right maximum `M_t`
/// contributes `M_t − M_{t−1}` up-steps and the run `W_t` following it
/// contributes `|W_t| + 1` down-steps.
pub fn perm_to_dyck(perm: &Permutation) -> Result<DyckPath> {
    if contains(perm, &Pattern::p312()) {
        return Err(invalid(format!("{perm} contains 312")));
    }
    let n = perm.len();
    let maxima = perm.left_to_right_maxima();
    let mut up = Vec::with_capacity(2 * n);
    let mut prev_max = 0;
    for (t, &(pos, val)) in maxima.iter().enumerate() {
        let next_pos = maxima.get(t + 1).map_or(n + 1, |m| m.0);
        up.extend(std::iter::repeat_n(true, val - prev_max));
        up.extend(std::iter::repeat_n(false, next_pos - pos));
        prev_max = val;
    }
    Ok(DyckPath::from_ups_unchecked(up))
}

/// Inverse of [`perm_to_dyck`]. Each peak opens a new left-to-right maximum
/// equal to the number of up-steps so far; every further down-step of that
/// run emits the largest unused value below the current maximum.
pub fn dyck_to_perm(path: &DyckPath) -> Permutation {
    let n = path.semilength();
    let mut out = Vec::with_capacity(n);
    // Unused values below the current maximum; the top is the largest.
    let mut pending: Vec<usize> = Vec::with_capacity(n);
    let mut ups = 0;
    let mut k = 0;
    while k < path.up.len() {
        let before = ups;
        while k < path.up.len() && path.up[k] {
            ups += 1;
            k += 1;
        }
        pending.extend(before + 1..ups);
        let mut first = true;
        while k < path.up.len() && !path.up[k] {
            if first {
                out.push(ups);
                first = false;
            } else {
                out.push(pending.pop().expect("a Dyck path never overdraws"));
            }
            k += 1;
        }
    }
    Permutation::from_vec_unchecked(out)
}

/// Uniform Dyck path of semilength `n` drawn from `rng` by the cycle lemma:
/// shuffle `n` up-steps and `n + 1` down-steps, rotate to start just after
/// the first minimum of the partial sums, and drop the final down-step.
pub fn sample_dyck_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DyckPath {
    let mut steps: Vec<bool> = (0..2 * n + 1).map(|k| k < n).collect();
    steps.shuffle(rng);
    let mut height: i64 = 0;
    let mut min = 0;
    let mut argmin = 0;
    for (k, &u) in steps.iter().enumerate() {
        height += if u { 1 } else { -1 };
        if height < min {
            min = height;
            argmin = k + 1;
        }
    }
    let len = steps.len();
    steps.rotate_left(argmin % len);
    let last = steps.pop();
    debug_assert_eq!(last, Some(false));
    DyckPath::from_ups_unchecked(steps)
}

/// Uniform Dyck path of semilength `n`, deterministic in `seed`.
pub fn sample_dyck(n: usize, seed: u64) -> DyckPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_dyck_with(n, &mut rng)
}

/// All Dyck paths of semilength `n`, in lexicographic order with `U < D`.
pub fn all_dyck_paths(n: usize) -> Vec<DyckPath> {
    fn go(n: usize, ups: usize, downs: usize, cur: &mut Vec<bool>, out: &mut Vec<DyckPath>) {
        if cur.len() == 2 * n {
            out.push(DyckPath::from_ups_unchecked(cur.clone()));
            return;
        }
        if ups < n {
            cur.push(true);
            go(n, ups + 1, downs, cur, out);
            cur.pop();
        }
        if downs < ups {
            cur.push(false);
            go(n, ups, downs + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, 0, &mut Vec::with_capacity(2 * n), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigmath::catalan;

    #[test]
    fn segment_examples() {
        let c = |x0, y0, xk, yk| count_segments(SegmentEndpoints::new(x0, y0, xk, yk)).unwrap();
        assert_eq!(c(0, 0, 2, 0), BigUint::from(1u32));
        assert_eq!(c(0, 0, 3, 0), BigUint::zero());
        assert_eq!(c(5, 0, 3, 0), BigUint::zero());
        assert_eq!(c(0, 0, 2, 4), BigUint::zero());
        for l in 0..=10 {
            assert_eq!(c(0, 0, 2 * l, 0), catalan(l as usize));
        }
        assert!(count_segments(SegmentEndpoints::new(0, -1, 2, 0)).is_err());
    }

    #[test]
    fn origin_form_examples() {
        assert_eq!(count_segments_origin(4, 0), BigUint::from(2u32));
        assert_eq!(count_segments_origin(1, 1), BigUint::from(1u32));
        assert_eq!(count_segments_origin(3, 0), BigUint::zero());
        assert_eq!(count_segments_origin(11, 3), BigUint::from(165u32));
        assert_eq!(
            count_segments_origin(11, 3),
            count_segments(SegmentEndpoints::new(0, 0, 11, 3)).unwrap()
        );
    }

    #[test]
    fn figure_permutation() {
        let perm: Permutation = "25647318".parse().unwrap();
        let path = perm_to_dyck(&perm).unwrap();
        assert_eq!(path.to_string(), "UUDUUUDUDDUDDDUD");
        assert!(path.peaks().contains(&(11, 3)));
        assert_eq!(dyck_to_perm(&path), perm);
    }

    #[test]
    fn identity_is_alternating() {
        for n in 1..8 {
            let path = perm_to_dyck(&Permutation::identity(n)).unwrap();
            assert_eq!(path, DyckPath::alternating(n));
            assert_eq!(dyck_to_perm(&path), Permutation::identity(n));
        }
        assert_eq!(perm_to_dyck(&"1".parse().unwrap()).unwrap().steps(), vec![1, -1]);
    }

    #[test]
    fn rejects_312() {
        assert!(perm_to_dyck(&"312".parse().unwrap()).is_err());
    }

    #[test]
    fn parse_rejects_invalid_paths() {
        assert!("UDDU".parse::<DyckPath>().is_err());
        assert!("UUD".parse::<DyckPath>().is_err());
        assert!("UXD".parse::<DyckPath>().is_err());
        assert_eq!("UD".parse::<DyckPath>().unwrap().semilength(), 1);
    }

    #[test]
    fn sampler_basics() {
        assert_eq!(sample_dyck(1, 7), DyckPath::alternating(1));
        assert_eq!(sample_dyck(40, 99), sample_dyck(40, 99));
        for seed in 0..50 {
            let p = sample_dyck(12, seed);
            assert_eq!(p.len(), 24);
            assert!(DyckPath::new(p.steps()).is_ok());
        }
    }

    #[test]
    fn all_paths_count() {
        for n in 0..=8 {
            assert_eq!(BigUint::from(all_dyck_paths(n).len()), catalan(n));
        }
    }
}
