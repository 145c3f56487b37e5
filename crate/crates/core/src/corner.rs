//! The lower-right corner limit: one-point limits `ρ`, the jump law `π`,
//! limiting ones/zeros configurations and the corner random walk.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bigmath::{binomial, catalan, catalan_table};
use crate::error::{invalid, Error, Result};
use crate::prob::ExactProb;

/// Default cap on `|F|` for [`theta_limit`]; the sum has `2^|F|` terms.
pub const DEFAULT_SUBSET_LIMIT: usize = 20;

/// A point `(−i, j)` of the second quadrant, `i, j >= 1`.
///
/// `(−i, j)` stands for position `N − i + 1` and value `j` of a permutation
/// of length `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CornerPoint {
    neg_i: i64,
    j: i64,
}

impl CornerPoint {
    pub fn new(neg_i: i64, j: i64) -> Result<Self> {
        if neg_i > -1 || j < 1 {
            return Err(invalid(format!("({neg_i}, {j}) is not in the quadrant")));
        }
        Ok(CornerPoint { neg_i, j })
    }

    /// The point `(−a, b)`.
    pub fn from_depth(a: usize, b: usize) -> Result<Self> {
        CornerPoint::new(-(a as i64), b as i64)
    }

    pub fn neg_i(&self) -> i64 {
        self.neg_i
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    /// Column offset `a` in `(−a, b)`.
    pub fn depth(&self) -> usize {
        (-self.neg_i) as usize
    }

    pub fn height(&self) -> usize {
        self.j as usize
    }
}

impl fmt::Display for CornerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.neg_i, self.j)
    }
}

/// A chain of points `(−A_m, B_m)` built from positive increments
/// `(a_m, b_m)`, so both coordinates grow strictly in absolute value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CornerChain {
    increments: Vec<(usize, usize)>,
}

impl CornerChain {
    pub fn new(increments: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = increments.iter().find(|&&(a, b)| a == 0 || b == 0) {
            return Err(invalid(format!("chain increment ({a}, {b}) must be positive")));
        }
        Ok(CornerChain { increments })
    }

    /// Chain through the given points, ordered by depth. Fails unless the
    /// points are strictly northwest-ordered.
    pub fn from_points(points: &[CornerPoint]) -> Result<Self> {
        let mut pts = points.to_vec();
        pts.sort_by_key(|p| p.depth());
        let mut incs = Vec::with_capacity(pts.len());
        let (mut a0, mut b0) = (0, 0);
        for p in pts {
            let (a, b) = (p.depth(), p.height());
            if a <= a0 || b <= b0 {
                return Err(invalid(format!("{p} breaks the northwest order")));
            }
            incs.push((a - a0, b - b0));
            a0 = a;
            b0 = b;
        }
        Ok(CornerChain { increments: incs })
    }

    pub fn increments(&self) -> &[(usize, usize)] {
        &self.increments
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// `(A_m, B_m)` for `m = 1..=k`.
    pub fn partial_sums(&self) -> Vec<(usize, usize)> {
        self.increments
            .iter()
            .scan((0, 0), |acc, &(a, b)| {
                acc.0 += a;
                acc.1 += b;
                Some(*acc)
            })
            .collect()
    }

    /// `(A_k, B_k)`, or `(0, 0)` for the empty chain.
    pub fn extent(&self) -> (usize, usize) {
        self.partial_sums().last().copied().unwrap_or((0, 0))
    }

    pub fn points(&self) -> Vec<CornerPoint> {
        self.partial_sums()
            .into_iter()
            .map(|(a, b)| CornerPoint::from_depth(a, b).expect("positive"))
            .collect()
    }
}

impl FromStr for CornerChain {
    type Err = Error;

    /// `"a:b,a:b,..."`; the empty string is the empty chain.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return CornerChain::new(vec![]);
        }
        let incs = s
            .split(',')
            .map(|part| {
                let (a, b) = part
                    .split_once(':')
                    .ok_or_else(|| invalid(format!("increment {part:?} is not a:b")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|e| invalid(format!("increment {part:?}: {e}")))
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        CornerChain::new(incs)
    }
}

/// Required ones `D` and required zeros `F` of the limiting indicator field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerEvent {
    ones: BTreeSet<CornerPoint>,
    zeros: BTreeSet<CornerPoint>,
}

impl CornerEvent {
    pub fn new(ones: Vec<CornerPoint>, zeros: Vec<CornerPoint>) -> Result<Self> {
        let ones: BTreeSet<_> = ones.into_iter().collect();
        let zeros: BTreeSet<_> = zeros.into_iter().collect();
        if let Some(p) = ones.intersection(&zeros).next() {
            return Err(invalid(format!("{p} is required to be both one and zero")));
        }
        Ok(CornerEvent { ones, zeros })
    }

    pub fn ones(&self) -> impl Iterator<Item = &CornerPoint> {
        self.ones.iter()
    }

    pub fn zeros(&self) -> impl Iterator<Item = &CornerPoint> {
        self.zeros.iter()
    }
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn pow4(e: usize) -> BigUint {
    BigUint::one() << (2 * e)
}

fn check_positive(a: usize, b: usize) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(invalid(format!("need a, b >= 1, got ({a}, {b})")));
    }
    Ok(())
}

fn rho_ratio(a: usize, b: usize) -> BigRational {
    let (ai, bi) = (a as i64, b as i64);
    // Common denominator b·a·4^{a+b−1}.
    let mut num = BigUint::zero();
    for i0 in (bi - ai + 1).max(1)..=bi {
        let w = binomial(i0 + 2 * (ai - 1) - bi, ai - 1) * binomial(i0 + bi - 2, bi - 1);
        num += (w * ((bi - i0 + 1) * (bi - i0 + 1)) as u64) << (2 * (bi - i0) as usize);
    }
    ratio(num, BigUint::from((a * b) as u64) * pow4(a + b - 1))
}

/// `ρ(a, b)`, the limit of `P_N(σ_{N−a+1} = b)`.
pub fn rho(a: usize, b: usize) -> Result<ExactProb> {
    check_positive(a, b)?;
    Ok(ExactProb::from_ratio(rho_ratio(a, b)))
}

/// `π(−a, b) = C_{a−1} C_{b−1} / 4^{a+b−1}`, the jump law of the walk.
pub fn pi_jump(a: usize, b: usize) -> Result<ExactProb> {
    check_positive(a, b)?;
    Ok(ExactProb::from_ratio(ratio(catalan(a - 1) * catalan(b - 1), pow4(a + b - 1))))
}

/// Coordinate marginal `p(x) = C_{x−1} / (2·4^{x−1})`; `π(−a, b) = p(a) p(b)`.
pub fn marginal(x: usize) -> Result<ExactProb> {
    if x == 0 {
        return Err(invalid("need x >= 1"));
    }
    Ok(ExactProb::from_ratio(ratio(catalan(x - 1), pow4(x - 1) << 1)))
}

/// `P(X > x) = C(2x, x) / 4^x` for `X ~ p`.
pub fn marginal_tail(x: usize) -> ExactProb {
    let x = x as i64;
    ExactProb::from_ratio(ratio(binomial(2 * x, x), pow4(x as usize)))
}

/// Limit of the probability that every chain point is a point of `σ`:
/// `∏ ρ(a_m, b_m)`.
pub fn chain_limit_prob(chain: &CornerChain) -> ExactProb {
    let mut out = BigRational::one();
    for &(a, b) in chain.increments() {
        out *= rho_ratio(a, b);
    }
    ExactProb::from_ratio(out)
}

/// Limit of the probability that the chain is exactly the set of points of
/// `σ` inside its bounding corner rectangle: `∏ π(−a_m, b_m)`.
pub fn chain_exact_corner_prob(chain: &CornerChain) -> ExactProb {
    let cat = catalan_table(chain.increments().iter().map(|&(a, b)| a.max(b)).max().unwrap_or(1));
    let mut num = BigUint::one();
    let mut shift = 0usize;
    for &(a, b) in chain.increments() {
        num *= &cat[a - 1] * &cat[b - 1];
        shift += 2 * (a + b - 1);
    }
    ExactProb::from_ratio(ratio(num, BigUint::one() << shift))
}

/// Limiting probability that every point of `D` is a one and every point
/// of `F` is a zero, by inclusion–exclusion over subsets of `F`.
pub fn theta_limit(event: &CornerEvent) -> Result<ExactProb> {
    theta_limit_with(event, DEFAULT_SUBSET_LIMIT)
}

/// [`theta_limit`] with an explicit cap on `|F|`.
pub fn theta_limit_with(event: &CornerEvent, subset_limit: usize) -> Result<ExactProb> {
    let zeros: Vec<CornerPoint> = event.zeros().copied().collect();
    if zeros.len() > subset_limit {
        return Err(Error::SubsetLimit { size: zeros.len(), limit: subset_limit });
    }
    let ones: Vec<CornerPoint> = event.ones().copied().collect();
    let mut total = BigRational::zero();
    for mask in 0u64..(1u64 << zeros.len()) {
        let mut pts = ones.clone();
        pts.extend(zeros.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, p)| *p));
        let Ok(chain) = CornerChain::from_points(&pts) else {
            continue;
        };
        let term = chain_limit_prob(&chain).into_ratio();
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(ExactProb::from_ratio(total))
}

const TAIL_TABLE_MAX: usize = 1 << 20;

fn tail_store() -> &'static RwLock<Arc<Vec<f64>>> {
    static STORE: OnceLock<RwLock<Arc<Vec<f64>>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(Arc::new(vec![1.0])))
}

/// Snapshot of `T(x) = P(X > x)` for `x = 0..len`, `len >= min(upto + 1, cap)`.
fn tail_table(upto: usize) -> Arc<Vec<f64>> {
    let want = (upto + 1).min(TAIL_TABLE_MAX);
    {
        let snap = tail_store().read().expect("tail table poisoned");
        if snap.len() >= want {
            return Arc::clone(&snap);
        }
    }
    let mut guard = tail_store().write().expect("tail table poisoned");
    if guard.len() < want {
        let target = want.max(2 * guard.len()).min(TAIL_TABLE_MAX);
        let mut next = Vec::with_capacity(target);
        next.extend_from_slice(&guard);
        while next.len() < target {
            let x = next.len() - 1;
            let t = next[x] * (2 * x + 1) as f64 / (2 * x + 2) as f64;
            next.push(t);
        }
        *guard = Arc::new(next);
    }
    Arc::clone(&guard)
}

/// Inverse-CDF draw from `p`, or `None` when the draw exceeds `cap`.
///
/// `X = min{x : T(x) < U}` for `U` uniform on `(0, 1]`.
pub fn sample_marginal<R: Rng + ?Sized>(rng: &mut R, cap: usize) -> Option<usize> {
    let u: f64 = 1.0 - rng.random::<f64>();
    let table = tail_table(cap.min(1 << 10));
    if let Some(x) = search(&table, u, cap) {
        return Some(x);
    }
    let table = tail_table(cap);
    if let Some(x) = search(&table, u, cap) {
        return Some(x);
    }
    // Past the stored table: keep the recurrence going without storing.
    let mut x = table.len() - 1;
    let mut t = table[x];
    while x < cap {
        t *= (2 * x + 1) as f64 / (2 * x + 2) as f64;
        x += 1;
        if t < u {
            return Some(x);
        }
    }
    None
}

fn search(table: &[f64], u: f64, cap: usize) -> Option<usize> {
    let last = (table.len() - 1).min(cap);
    if table[last] >= u {
        return None;
    }
    // table[0] = 1 >= u, so the answer lies in 1..=last.
    Some(table[..=last].partition_point(|&t| t >= u))
}

/// One jump `(a, b) ~ π`, or `None` if it leaves the `caps` window.
pub fn sample_jump<R: Rng + ?Sized>(rng: &mut R, caps: (usize, usize)) -> Option<(usize, usize)> {
    let a = sample_marginal(rng, caps.0)?;
    let b = sample_marginal(rng, caps.1)?;
    Some((a, b))
}

/// Partial sums `V_1, V_2, …` of i.i.d. `π` jumps, stopped at the first one
/// outside `[−max_a, −1] × [1, max_b]`.
pub fn sample_corner_walk(seed: u64, window: (usize, usize)) -> Result<Vec<CornerPoint>> {
    let (max_a, max_b) = window;
    if max_a == 0 || max_b == 0 {
        return Err(invalid("window bounds must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b) = (0usize, 0usize);
    let mut out = Vec::new();
    while let Some((da, db)) = sample_jump(&mut rng, (max_a - a, max_b - b)) {
        a += da;
        b += db;
        out.push(CornerPoint::from_depth(a, b)?);
    }
    Ok(out)
}

/// `step,neg_a,b` rows, one per walk point, steps counted from 1.
pub fn trajectory_csv(points: &[CornerPoint]) -> String {
    let mut out = String::from("step,neg_a,b\n");
    for (k, p) in points.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", k + 1, p.neg_i(), p.j()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactProb {
        ExactProb::from_ratio(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho(1, 1).unwrap(), q(1, 4));
        assert_eq!(rho(1, 2).unwrap(), q(1, 16));
        assert_eq!(rho(2, 1).unwrap(), q(1, 16));
        assert_eq!(rho(2, 3).unwrap(), q(5, 128));
        for a in 1..12 {
            for b in 1..12 {
                assert_eq!(rho(a, b).unwrap(), rho(b, a).unwrap());
            }
        }
        assert!(rho(0, 2).is_err());
    }

    #[test]
    fn pi_values_and_factorization() {
        assert_eq!(pi_jump(1, 1).unwrap(), q(1, 4));
        assert_eq!(pi_jump(2, 1).unwrap(), q(1, 16));
        for a in 1..=200 {
            let pa = marginal(a).unwrap();
            for b in (1..=200).step_by(7) {
                assert_eq!(pi_jump(a, b).unwrap(), pa.and_independent(&marginal(b).unwrap()));
            }
        }
    }

    #[test]
    fn marginal_tail_identity() {
        let mut acc = BigRational::zero();
        for x in 1..=200 {
            acc += marginal(x).unwrap().into_ratio();
            assert_eq!(BigRational::one() - &acc, marginal_tail(x).into_ratio());
        }
    }

    #[test]
    fn float_tail_tracks_exact() {
        let t = tail_table(5000);
        for x in [1usize, 2, 10, 100, 1000, 5000] {
            let exact = marginal_tail(x).to_f64();
            assert!((t[x] / exact - 1.0).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn chain_parsing_and_points() {
        let c: CornerChain = "1:2,4:2,2:3".parse().unwrap();
        assert_eq!(c.partial_sums(), vec![(1, 2), (5, 4), (7, 7)]);
        assert_eq!(CornerChain::from_points(&c.points()).unwrap(), c);
        assert!("1:0".parse::<CornerChain>().is_err());
        assert!("1-2".parse::<CornerChain>().is_err());
        assert!("".parse::<CornerChain>().unwrap().is_empty());
        let bad = [CornerPoint::new(-1, 3).unwrap(), CornerPoint::new(-2, 2).unwrap()];
        assert!(CornerChain::from_points(&bad).is_err());
    }

    #[test]
    fn chain_products() {
        let c: CornerChain = "1:2,4:2,2:3".parse().unwrap();
        let want = rho(1, 2).unwrap().and_independent(&rho(4, 2).unwrap()).and_independent(&rho(2, 3).unwrap());
        assert_eq!(chain_limit_prob(&c), want);
        let want = pi_jump(1, 2)
            .unwrap()
            .and_independent(&pi_jump(4, 2).unwrap())
            .and_independent(&pi_jump(2, 3).unwrap());
        assert_eq!(chain_exact_corner_prob(&c), want);
        assert_eq!(chain_exact_corner_prob(&"1:1".parse().unwrap()), q(1, 4));
    }

    #[test]
    fn theta_examples() {
        let p11 = CornerPoint::new(-1, 1).unwrap();
        let ev = CornerEvent::new(vec![p11], vec![]).unwrap();
        assert_eq!(theta_limit(&ev).unwrap(), q(1, 4));
        let ev = CornerEvent::new(vec![], vec![p11]).unwrap();
        assert_eq!(theta_limit(&ev).unwrap(), q(3, 4));
        // southwest-northeast pair
        let ev = CornerEvent::new(vec![CornerPoint::new(-3, 1).unwrap(), CornerPoint::new(-1, 2).unwrap()], vec![])
            .unwrap();
        assert!(theta_limit(&ev).unwrap().is_zero());
        assert!(CornerEvent::new(vec![p11], vec![p11]).is_err());
        let many: Vec<_> = (1..=21).map(|b| CornerPoint::new(-1, b).unwrap()).collect();
        let ev = CornerEvent::new(vec![], many).unwrap();
        assert!(matches!(theta_limit(&ev), Err(Error::SubsetLimit { size: 21, limit: 20 })));
    }

    #[test]
    fn walk_is_deterministic_chain() {
        let w = sample_corner_walk(7, (500, 500)).unwrap();
        assert_eq!(w, sample_corner_walk(7, (500, 500)).unwrap());
        assert!(!w.is_empty());
        for pair in w.windows(2) {
            assert!(pair[1].depth() > pair[0].depth() && pair[1].height() > pair[0].height());
        }
        assert!(w.iter().all(|p| p.depth() <= 500 && p.height() <= 500));
        assert!(sample_corner_walk(7, (0, 3)).is_err());
        let csv = trajectory_csv(&w[..1]);
        assert!(csv.starts_with("step,neg_a,b\n1,-"));
    }

    #[test]
    fn marginal_respects_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            if let Some(x) = sample_marginal(&mut rng, 5) {
                assert!((1..=5).contains(&x));
            }
        }
    }
}
