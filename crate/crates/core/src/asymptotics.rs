//! Leading-order large-N approximations and the upper-tail rate function.
//!
//! Everything here is `f64`. The error terms are not modelled; compare
//! against the exact counts to see how far a given `N` is from the limit.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// A scaled point `(β, α) = (i/N, j/N)` with `0 < α, β < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPoint {
    pub alpha: f64,
    pub beta: f64,
}

impl ScaledPoint {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(alpha) || !open(beta) {
            return Err(domain(format!("scaled point ({alpha}, {beta}) outside (0,1)^2")));
        }
        Ok(ScaledPoint { alpha, beta })
    }

    pub fn delta(&self) -> f64 {
        self.beta - self.alpha
    }

    /// `(i, j) = (⌊βN⌋, ⌊αN⌋)`.
    pub fn at(&self, n: usize) -> (usize, usize) {
        ((self.beta * n as f64).floor() as usize, (self.alpha * n as f64).floor() as usize)
    }
}

fn gap(n: usize, i: usize, j: usize) -> f64 {
    (i as f64 - j as f64) / n as f64
}

fn check_point(n: usize, i: usize, j: usize) -> Result<()> {
    if j == 0 || i > n {
        return Err(domain(format!("point ({i}, {j}) outside 1..={n}")));
    }
    if j >= i {
        return Err(domain(format!("need j < i, got ({i}, {j})")));
    }
    Ok(())
}

/// `P_N(σ_i = j)` to leading order, with `Δ = (i−j)/N`:
/// `N^{−3/2} / (2√π ((1−Δ)Δ)^{3/2})`.
pub fn approx_one_point(n: usize, i: usize, j: usize) -> Result<f64> {
    check_point(n, i, j)?;
    let d = gap(n, i, j);
    if d >= 1.0 {
        return Err(domain("i − j must be smaller than N"));
    }
    Ok((n as f64).powf(-1.5) / (2.0 * PI.sqrt() * ((1.0 - d) * d).powf(1.5)))
}

/// `P_N(σ_{i1} = j1, σ_{i2} = j2)` for `j2 < j1 < i1 < i2`:
/// `N^{−3} / (4π ((Δ2−Δ1) Δ1 (1−Δ2))^{3/2})`.
pub fn approx_two_decreasing(n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<f64> {
    check_point(n, i1, j1)?;
    check_point(n, i2, j2)?;
    if !(j2 < j1 && i1 < i2) {
        return Err(domain("need j2 < j1 < i1 < i2"));
    }
    let (d1, d2) = (gap(n, i1, j1), gap(n, i2, j2));
    if d2 <= d1 {
        return Err(domain("need i2 − j2 > i1 − j1"));
    }
    if d2 >= 1.0 {
        return Err(domain("i2 − j2 must be smaller than N"));
    }
    Ok((n as f64).powi(-3) / (4.0 * PI * ((d2 - d1) * d1 * (1.0 - d2)).powf(1.5)))
}

/// `P_N(σ_{i1} = j1, σ_{i2} = j2)` for `j1 < i1 < j2 < i2`:
/// `N^{−3} / (4π ((1−Δ1−Δ2) Δ1 Δ2)^{3/2})`.
pub fn approx_two_increasing(n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> Result<f64> {
    check_point(n, i1, j1)?;
    check_point(n, i2, j2)?;
    if !(i1 < j2) {
        return Err(domain("need j1 < i1 < j2 < i2"));
    }
    let (d1, d2) = (gap(n, i1, j1), gap(n, i2, j2));
    if d1 + d2 >= 1.0 {
        return Err(domain("need Δ1 + Δ2 < 1"));
    }
    Ok((n as f64).powi(-3) / (4.0 * PI * ((1.0 - d1 - d2) * d1 * d2).powf(1.5)))
}

/// Relative order of two points, selecting the covariance limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovCase {
    /// `α2 < α1 < β1 < β2`
    A,
    /// `α1 < β1 < α2 < β2`
    B,
    /// `α1 < α2 < β1 < β2`
    C,
}

/// `lim N³ Cov_N(Z(i1, j1), Z(i2, j2))` as a function of the gaps.
pub fn cov_limit(case: CovCase, d1: f64, d2: f64) -> Result<f64> {
    if !(d1 > 0.0 && d2 > 0.0 && d1 < 1.0 && d2 < 1.0) {
        return Err(domain(format!("gaps ({d1}, {d2}) outside (0,1)")));
    }
    let base = 4.0 * PI * (d1 * d2 * (1.0 - d1) * (1.0 - d2)).powf(1.5);
    match case {
        CovCase::A => {
            if d2 <= d1 {
                return Err(domain("case a needs Δ2 > Δ1"));
            }
            Ok(((d2 * (1.0 - d1) / (d2 - d1)).powf(1.5) - 1.0) / base)
        }
        CovCase::B => {
            if d1 + d2 >= 1.0 {
                return Err(domain("case b needs Δ1 + Δ2 < 1"));
            }
            Ok((((1.0 - d1) * (1.0 - d2) / (1.0 - d1 - d2)).powf(1.5) - 1.0) / base)
        }
        CovCase::C => Ok(-1.0 / base),
    }
}

/// `x^x` with `0^0 = 1`.
fn xx(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (x * x.ln()).exp()
    }
}

/// Exponential rate of having a point near `(s, t)`: `1` on and below the
/// diagonal, strictly less above it.
pub fn kstar(s: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("({s}, {t}) outside [0,1]^2")));
    }
    if t <= s {
        return Ok(1.0);
    }
    Ok(0.25 * xx(2.0 - s - t) * xx(s + t) / (xx(1.0 - s) * xx(1.0 - t) * xx(t) * xx(s)))
}
