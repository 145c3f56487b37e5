//! Exact counts of 312-avoiding permutations with specified points below
//! the diagonal, and the corresponding exact probabilities.
//!
//! Every public function takes positions `i` (not offsets `t = N − i`).
//! Fractional prefactors are cleared by a common denominator per sum and
//! the division at the end is checked to be exact.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;

use crate::bigmath::{catalan, catalan_table, exact_div, BinomialColumn};
use crate::corner::CornerChain;
use crate::error::{invalid, Error, Result};
use crate::perm::EventSpec;
use crate::prob::ExactProb;

fn check_index(name: &str, v: usize, n: usize) -> Result<()> {
    if v == 0 || v > n {
        return Err(invalid(format!("{name} = {v} outside 1..={n}")));
    }
    Ok(())
}

fn sq(x: i64) -> u64 {
    (x * x) as u64
}

/// `|S□(N, i, j)|`: `σ_i = j` and every earlier entry is below `j`.
pub fn count_sbox(n: usize, i: usize, j: usize) -> Result<BigUint> {
    check_index("i", i, n)?;
    check_index("j", j, n)?;
    Ok(sbox_raw(n as i64, i as i64, j as i64))
}

fn sbox_raw(n: i64, i: i64, j: i64) -> BigUint {
    if j < i {
        return BigUint::zero();
    }
    let num = crate::bigmath::binomial(2 * n - i - j, n - i)
        * crate::bigmath::binomial(i + j - 2, j - 1)
        * sq(j - i + 1);
    exact_div(&num, &BigUint::from((j * (n - i + 1)) as u64), "boxed count")
}

/// `|S•(N, i, j)|` for a point strictly below the diagonal (`j < i`).
pub fn count_one_point(n: usize, i: usize, j: usize) -> Result<BigUint> {
    check_index("i", i, n)?;
    check_index("j", j, n)?;
    if j >= i {
        return Err(Error::Unsupported(format!(
            "point ({i}, {j}) is on or above the diagonal; only j < i has a closed form"
        )));
    }
    Ok(one_point_raw(n as i64, (n - i) as i64, j as i64))
}

/// Sum over the graft position `i0` of `C_{N−t−i0} · |S□(t+i0, i0, j)|`.
fn one_point_raw(n: i64, t: i64, j: i64) -> BigUint {
    debug_assert!(j >= 1 && j < n - t);
    let cat = catalan_table((n - t) as usize);
    let lo = (j - t).max(1);
    let mut col_t = BinomialColumn::new(lo + 2 * t - j, t);
    let mut col_j = BinomialColumn::new(lo + j - 2, j - 1);
    let mut sum = BigUint::zero();
    for i0 in lo..=j {
        let term = &cat[(n - t - i0) as usize] * col_t.value() * col_j.value();
        sum += term * sq(j - i0 + 1);
        col_t.advance();
        col_j.advance();
    }
    exact_div(&sum, &BigUint::from((j * (t + 1)) as u64), "one-point sum")
}

/// Checks `j_k < … < j_1 < i_1 < … < i_k <= N` for points given as
/// `(position, value)` in increasing position order.
fn validate_decreasing(n: usize, points: &[(usize, usize)]) -> Result<()> {
    if points.is_empty() {
        return Err(invalid("at least one point is required"));
    }
    for (m, &(i, j)) in points.iter().enumerate() {
        check_index(&format!("i_{}", m + 1), i, n)?;
        check_index(&format!("j_{}", m + 1), j, n)?;
    }
    for (m, w) in points.windows(2).enumerate() {
        if w[0].0 >= w[1].0 {
            return Err(invalid(format!(
                "need i_{} < i_{}, got {} >= {}",
                m + 1,
                m + 2,
                w[0].0,
                w[1].0
            )));
        }
        if w[0].1 <= w[1].1 {
            return Err(invalid(format!(
                "need j_{} > j_{}, got {} <= {}",
                m + 1,
                m + 2,
                w[0].1,
                w[1].1
            )));
        }
    }
    let (i1, j1) = points[0];
    if j1 >= i1 {
        return Err(invalid(format!("need j_1 < i_1, got {j1} >= {i1}")));
    }
    Ok(())
}

/// `|S↘k(N)|` for points `(i_m, j_m)` with increasing positions and
/// decreasing values, all below the diagonal.
///
/// `k = 1` is [`count_one_point`], `k = 2` the explicit double sum
/// [`count_two_decreasing`], larger `k` the general recursion.
pub fn count_k_decreasing(n: usize, points: &[(usize, usize)]) -> Result<BigUint> {
    validate_decreasing(n, points)?;
    Ok(match points {
        [(i, j)] => one_point_raw(n as i64, (n - i) as i64, *j as i64),
        [(i1, j1), (i2, j2)] => two_decreasing_raw(n, *i1, *i2, *j1, *j2),
        _ => decreasing_recursive_raw(n, points),
    })
}

/// Same count as [`count_k_decreasing`], always through the recursion that
/// peels off the last point.
pub fn count_k_decreasing_recursive(n: usize, points: &[(usize, usize)]) -> Result<BigUint> {
    validate_decreasing(n, points)?;
    Ok(decreasing_recursive_raw(n, points))
}

fn decreasing_recursive_raw(n: usize, points: &[(usize, usize)]) -> BigUint {
    let (last, rest) = points.split_last().expect("non-empty");
    if rest.is_empty() {
        return one_point_raw(n as i64, (n - last.0) as i64, last.1 as i64);
    }
    let (ik, jk) = (last.0 as i64, last.1 as i64);
    let tk = n as i64 - ik;
    let mut sum = BigUint::zero();
    for i in (jk - tk).max(1)..=jk {
        let boxed = sbox_raw(tk + i, i, jk);
        if boxed.is_zero() {
            continue;
        }
        let shifted: Vec<(usize, usize)> = rest
            .iter()
            .map(|&(p, v)| ((p as i64 - i + 1) as usize, (v as i64 - jk) as usize))
            .collect();
        sum += boxed * decreasing_recursive_raw((ik - i) as usize, &shifted);
    }
    sum
}

/// `|S↘(N)|` for `σ_{i1} = j1`, `σ_{i2} = j2`, `j2 < j1 < i1 < i2`, by the
/// explicit two-point double sum.
pub fn count_two_decreasing(n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<BigUint> {
    validate_decreasing(n, &[(i1, j1), (i2, j2)])?;
    Ok(two_decreasing_raw(n, i1, i2, j1, j2))
}

fn two_decreasing_raw(n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> BigUint {
    let (n, i1, i2, j1, j2) = (n as i64, i1 as i64, i2 as i64, j1 as i64, j2 as i64);
    let (t1, t2) = (n - i1, n - i2);
    let (jp, tp) = (j1 - j2, t1 - t2 - 1);
    let cat = catalan_table(n as usize);

    // Inner weights depend only on i0; the outer index only shifts the
    // Catalan factor.
    let lo0 = (jp - tp).max(1);
    let mut col_a = BinomialColumn::new(lo0 + 2 * tp - jp, tp);
    let mut col_b = BinomialColumn::new(lo0 + jp - 2, jp - 1);
    let mut weights = Vec::with_capacity((jp - lo0 + 1) as usize);
    for i0 in lo0..=jp {
        weights.push((i0, col_a.value() * col_b.value() * sq(jp - i0 + 1)));
        col_a.advance();
        col_b.advance();
    }

    let lo1 = (j2 - t2).max(1);
    let mut col_c = BinomialColumn::new(lo1 + 2 * t2 - j2, t2);
    let mut col_d = BinomialColumn::new(lo1 + j2 - 2, j2 - 1);
    let mut sum = BigUint::zero();
    for a in lo1..=j2 {
        let mut inner = BigUint::zero();
        for (i0, w) in &weights {
            inner += &cat[(n - t1 - a - i0 + 1) as usize] * w;
        }
        sum += inner * col_c.value() * col_d.value() * sq(j2 - a + 1);
        col_c.advance();
        col_d.advance();
    }
    let den = BigUint::from((j2 * (t2 + 1)) as u64) * BigUint::from((jp * (t1 - t2)) as u64);
    exact_div(&sum, &den, "two-point decreasing sum")
}

/// `|S↗(N)|` for `σ_{i1} = j1`, `σ_{i2} = j2` with `j1 < i1 < i2` and
/// `j1 < j2 < i2`. Zero unless `j2 >= i1 + 1`.
pub fn count_two_increasing(n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<BigUint> {
    for (name, v) in [("i1", i1), ("i2", i2), ("j1", j1), ("j2", j2)] {
        check_index(name, v, n)?;
    }
    if j1 >= i1 {
        return Err(invalid(format!("need j1 < i1, got {j1} >= {i1}")));
    }
    if i1 >= i2 {
        return Err(invalid(format!("need i1 < i2, got {i1} >= {i2}")));
    }
    if j1 >= j2 {
        return Err(invalid(format!("need j1 < j2, got {j1} >= {j2}")));
    }
    if j2 >= i2 {
        return Err(invalid(format!("need j2 < i2, got {j2} >= {i2}")));
    }
    if j2 < i1 + 1 {
        return Ok(BigUint::zero());
    }
    Ok(two_increasing_raw(n as i64, i1 as i64, i2 as i64, j1 as i64, j2 as i64))
}

fn two_increasing_raw(n: i64, i1: i64, i2: i64, j1: i64, j2: i64) -> BigUint {
    let (t1, t2) = (n - i1, n - i2);
    let cat = catalan_table(n as usize);
    let lo1 = (j1 - j2 + i1 + 1).max(1);
    let lo2 = (i1 + 1).max(j2 - t2);

    // Factors depending on i2 alone.
    let mut col_t = BinomialColumn::new(lo2 + 2 * t2 - j2, t2);
    let mut right = Vec::with_capacity((j2 - lo2 + 1).max(0) as usize);
    for b in lo2..=j2 {
        let f = &cat[(n - t2 - b) as usize] * col_t.value() * ((j2 - b + 1) as u64);
        right.push(BigInt::from(f));
        col_t.advance();
    }

    let c0 = j2 - j1 - 2 * (i1 + 1);
    let k2 = j2 - i1;
    let mut col_left = BinomialColumn::new(lo1 + j1 - 2, j1 - 1);
    let mut sum = BigInt::zero();
    for a in lo1..=j1 {
        // Middle segment count C(m, k1) − C(m, k2) with m = a + b + c0.
        let k1 = j2 + a - j1 - 1 - i1;
        let mut first = BinomialColumn::new(a + lo2 + c0, k1);
        let mut second = BinomialColumn::new(a + lo2 + c0, k2);
        let mut inner = BigInt::zero();
        for f in &right {
            let middle = BigInt::from(first.value().clone()) - BigInt::from(second.value().clone());
            if !middle.is_zero() {
                inner += f * middle;
            }
            first.advance();
            second.advance();
        }
        let left = &cat[(n - t1 - a) as usize] * col_left.value() * ((j1 - a + 1) as u64);
        sum += inner * BigInt::from(left);
        col_left.advance();
    }
    let (sign, mag) = sum.into_parts();
    assert!(sign != Sign::Minus, "increasing-pair sum is negative");
    exact_div(&mag, &BigUint::from((j1 * (t2 + 1)) as u64), "increasing-pair sum")
}

/// `|Λ_N(T)|`: the chain `T` is exactly the set of points of `σ` in the
/// corner rectangle `[N−A_k+1, N] × [1, B_k]`.
pub fn count_lambda(n: usize, chain: &CornerChain) -> Result<BigUint> {
    let (a_tot, b_tot) = chain.extent();
    if n < a_tot + b_tot {
        return Err(invalid(format!("need N >= A_k + B_k = {}, got N = {n}", a_tot + b_tot)));
    }
    let k = chain.len();
    let cat = catalan_table(n);
    let mut out = cat[n - a_tot - b_tot + k].clone();
    for &(a, b) in chain.increments() {
        out *= &cat[a - 1];
        out *= &cat[b - 1];
    }
    Ok(out)
}

/// Exact count for an event of specified points, dispatching on geometry:
/// a decreasing chain below the diagonal or a single increasing pair.
pub fn event_count(n: usize, spec: &EventSpec) -> Result<BigUint> {
    for &(i, j) in spec.constraints() {
        check_index("position", i, n)?;
        check_index("value", j, n)?;
        if j >= i {
            return Err(Error::Unsupported(format!(
                "point ({i}, {j}) is on or above the diagonal"
            )));
        }
    }
    let pts = spec.constraints();
    match pts.len() {
        0 => Ok(catalan(n)),
        _ if pts.windows(2).all(|w| w[0].1 > w[1].1) => count_k_decreasing(n, pts),
        2 => count_two_increasing(n, pts[0].0, pts[1].0, pts[0].1, pts[1].1),
        _ => Err(Error::Unsupported(
            "only decreasing chains or a single increasing pair have closed forms".into(),
        )),
    }
}

/// `P_N` of the event, `count / C_N` in lowest terms.
pub fn event_prob(n: usize, spec: &EventSpec) -> Result<ExactProb> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let count = event_count(n, spec)?;
    Ok(ExactProb::from_counts(&count, &catalan(n)))
}

/// `P_N(σ_{N−t−A_m+1} = j + B_m for all m | σ_{N−t+1} = j)` for the chain's
/// partial sums `(A_m, B_m)`.
pub fn conditional_corner_prob(n: usize, t: usize, j: usize, chain: &CornerChain) -> Result<ExactProb> {
    if t == 0 || t > n {
        return Err(invalid(format!("t = {t} outside 1..={n}")));
    }
    if j == 0 || j + t >= n {
        return Err(invalid(format!("need 1 <= j < N - t, got j = {j}, N - t = {}", n - t)));
    }
    if chain.is_empty() {
        return Ok(ExactProb::one());
    }
    let mut points: Vec<(usize, usize)> = Vec::with_capacity(chain.len() + 1);
    for (a, b) in chain.partial_sums() {
        if a > n - t {
            return Err(invalid(format!("chain offset A = {a} runs past position 1")));
        }
        points.push((n - t - a + 1, j + b));
    }
    points.reverse();
    let (i_first, j_first) = points[0];
    if j_first >= i_first {
        return Err(invalid(format!(
            "chain point ({i_first}, {j_first}) is not below the diagonal"
        )));
    }
    points.push((n - t + 1, j));
    let joint = count_k_decreasing(n, &points)?;
    let given = one_point_raw(n as i64, (t - 1) as i64, j as i64);
    Ok(ExactProb::from_counts(&joint, &given))
}

/// `Cov_N(Z(i1, j1), Z(i2, j2))` where `Z(i, j)` indicates `σ_i = j`.
pub fn exact_covariance(n: usize, p1: (usize, usize), p2: (usize, usize)) -> Result<num_rational::BigRational> {
    let single = |p: (usize, usize)| event_prob(n, &EventSpec::new(vec![p])?);
    let joint = if p1.0 == p2.0 {
        return Err(invalid("the two points need distinct positions"));
    } else if p1.1 == p2.1 {
        ExactProb::zero()
    } else {
        event_prob(n, &EventSpec::new(vec![p1, p2])?)?
    };
    let (a, b) = (single(p1)?, single(p2)?);
    Ok(joint.as_ratio() - a.as_ratio() * b.as_ratio())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn sbox_examples() {
        assert_eq!(count_sbox(5, 2, 2).unwrap(), u(5));
        assert_eq!(count_sbox(5, 3, 2).unwrap(), u(0));
        assert!(count_sbox(5, 6, 2).is_err());
        assert!(count_sbox(5, 1, 0).is_err());
        for n in 1..12 {
            for j in 1..=n {
                assert_eq!(count_sbox(n, j, j).unwrap(), catalan(j - 1) * catalan(n - j));
            }
        }
    }

    #[test]
    fn one_point_examples() {
        assert_eq!(count_one_point(3, 2, 1).unwrap(), u(1));
        assert_eq!(count_one_point(4, 3, 2).unwrap(), u(3));
        assert!(matches!(count_one_point(4, 2, 2), Err(Error::Unsupported(_))));
        assert!(matches!(count_one_point(4, 2, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn symmetry_grid() {
        // 312 is fixed by reverse-complement-inverse: (i, j) -> (N+1-j, N+1-i).
        for n in 2..=14 {
            for i in 2..=n {
                for j in 1..i {
                    assert_eq!(
                        count_one_point(n, i, j).unwrap(),
                        count_one_point(n, n + 1 - j, n + 1 - i).unwrap(),
                        "n={n} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn ordering_errors_name_the_inequality() {
        let e = count_k_decreasing(9, &[(5, 2), (4, 1)]).unwrap_err();
        assert!(e.to_string().contains("i_1 < i_2"), "{e}");
        let e = count_k_decreasing(9, &[(5, 2), (7, 3)]).unwrap_err();
        assert!(e.to_string().contains("j_1 > j_2"), "{e}");
        let e = count_k_decreasing(9, &[(3, 4), (7, 1)]).unwrap_err();
        assert!(e.to_string().contains("j_1 < i_1"), "{e}");
        assert!(count_two_increasing(9, 4, 7, 2, 8).is_err());
    }

    #[test]
    fn two_decreasing_forms_agree() {
        for n in 4..=11 {
            for i1 in 2..n {
                for i2 in i1 + 1..=n {
                    for j1 in 2..i1 {
                        for j2 in 1..j1 {
                            let pts = [(i1, j1), (i2, j2)];
                            assert_eq!(
                                count_k_decreasing(n, &pts).unwrap(),
                                count_k_decreasing_recursive(n, &pts).unwrap(),
                                "{pts:?} n={n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn increasing_impossible_geometry() {
        // j2 < i1 + 1
        assert_eq!(count_two_increasing(9, 5, 8, 2, 4).unwrap(), u(0));
        assert_eq!(count_two_increasing(9, 5, 8, 2, 5).unwrap(), u(0));
    }

    #[test]
    fn event_prob_examples() {
        let p = event_prob(3, &EventSpec::new(vec![(2, 1)]).unwrap()).unwrap();
        assert_eq!(p.to_string(), "1/5");
        let p = event_prob(4, &EventSpec::new(vec![(3, 2)]).unwrap()).unwrap();
        assert_eq!(p.to_string(), "3/14");
        let p = event_prob(9, &EventSpec::new(vec![(5, 2), (8, 4)]).unwrap()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_json(), serde_json::json!({"num": "0", "den": "1"}));
        assert_eq!(event_prob(6, &EventSpec::empty()).unwrap(), ExactProb::one());
    }

    #[test]
    fn event_prob_rejects_unsupported() {
        let above = EventSpec::new(vec![(2, 3)]).unwrap();
        assert!(matches!(event_prob(5, &above), Err(Error::Unsupported(_))));
        let mixed = EventSpec::new(vec![(4, 2), (6, 3), (8, 1)]).unwrap();
        assert!(matches!(event_prob(9, &mixed), Err(Error::Unsupported(_))));
        let outside = EventSpec::new(vec![(12, 3)]).unwrap();
        assert!(matches!(event_prob(9, &outside), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn lambda_examples() {
        let single = CornerChain::new(vec![(1, 1)]).unwrap();
        assert_eq!(count_lambda(3, &single).unwrap(), u(2));
        for n in 2..30 {
            assert_eq!(count_lambda(n, &single).unwrap(), catalan(n - 1));
        }
        assert!(count_lambda(1, &single).is_err());
    }

    #[test]
    fn conditional_basics() {
        let empty = CornerChain::new(vec![]).unwrap();
        assert_eq!(conditional_corner_prob(9, 3, 2, &empty).unwrap(), ExactProb::one());
        let c = CornerChain::new(vec![(1, 1)]).unwrap();
        assert!(conditional_corner_prob(9, 3, 6, &c).is_err());
        assert!(conditional_corner_prob(9, 0, 2, &c).is_err());
        let p = conditional_corner_prob(9, 3, 2, &c).unwrap();
        let joint = count_k_decreasing(9, &[(6, 3), (7, 2)]).unwrap();
        let given = count_one_point(9, 7, 2).unwrap();
        assert_eq!(p, ExactProb::from_counts(&joint, &given));
    }
}
