//! Exact uniform sampling of 312-avoiding permutations and Monte Carlo
//! estimates built on it.

use rand::Rng;
use serde::Serialize;

use crate::dyck::{dyck_to_perm, sample_dyck, sample_dyck_with};
use crate::error::{invalid, Result};
use crate::exec::{block_rng, run_blocks, Execution};
use crate::perm::{EventSpec, Permutation};

/// A uniform element of `S_N(312)`, determined by `seed`.
pub fn sample_uniform_312(n: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    Ok(dyck_to_perm(&sample_dyck(n, seed)))
}

pub fn sample_uniform_312_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    dyck_to_perm(&sample_dyck_with(n, rng))
}

/// `count` independent uniform samples, identical for every `exec`.
pub fn sample_many(n: usize, count: usize, seed: u64, exec: Execution) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let blocks = run_blocks(exec, count, |k, len| {
        let mut rng = block_rng(seed, k as u64);
        (0..len).map(|_| sample_uniform_312_with(n, &mut rng)).collect::<Vec<_>>()
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub hits: u64,
    pub samples: u64,
    pub estimate: f64,
    pub stderr: f64,
}

/// Empirical frequency of `spec` with its binomial standard error.
pub fn estimate_event(n: usize, spec: &EventSpec, samples: usize, seed: u64, exec: Execution) -> Result<Estimate> {
    if samples == 0 {
        return Err(invalid("samples must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if let Some(&(i, j)) = spec.constraints().iter().find(|&&(i, j)| i > n || j > n) {
        return Err(invalid(format!("constraint {i}:{j} outside 1..={n}")));
    }
    let hits: u64 = run_blocks(exec, samples, |k, len| {
        let mut rng = block_rng(seed, k as u64);
        (0..len).filter(|_| spec.holds(&sample_uniform_312_with(n, &mut rng))).count() as u64
    })?
    .into_iter()
    .sum();
    let p = hits as f64 / samples as f64;
    Ok(Estimate {
        hits,
        samples: samples as u64,
        estimate: p,
        stderr: (p * (1.0 - p) / samples as f64).sqrt(),
    })
}

/// Occupancy counts of `(i/N, σ_i/N)`; rows are position bins, columns
/// value bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Heatmap {
    #[serde(rename = "N")]
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub bins: usize,
    #[serde(skip)]
    pub counts: Vec<Vec<u64>>,
}

/// Bin of `x/n` for `x` in `1..=n`: `[k/bins, (k+1)/bins)`, last bin closed.
pub fn bin_of(x: usize, n: usize, bins: usize) -> usize {
    (x * bins / n).min(bins - 1)
}

pub fn heatmap(n: usize, samples: usize, seed: u64, bins: usize, exec: Execution) -> Result<Heatmap> {
    if bins == 0 {
        return Err(invalid("bins must be at least 1"));
    }
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let partials = run_blocks(exec, samples, |k, len| {
        let mut rng = block_rng(seed, k as u64);
        let mut grid = vec![0u64; bins * bins];
        for _ in 0..len {
            let perm = sample_uniform_312_with(n, &mut rng);
            for (pos, &v) in perm.values().iter().enumerate() {
                grid[bin_of(pos + 1, n, bins) * bins + bin_of(v, n, bins)] += 1;
            }
        }
        grid
    })?;
    let mut flat = vec![0u64; bins * bins];
    for g in partials {
        for (acc, x) in flat.iter_mut().zip(g) {
            *acc += x;
        }
    }
    Ok(Heatmap { n, samples, seed, bins, counts: flat.chunks(bins).map(<[u64]>::to_vec).collect() })
}

impl Heatmap {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Row-major CSV, one line per position bin, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.counts {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// `{N, samples, seed, bins}`.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("heatmap metadata serializes")
    }

    /// Fraction of the mass in cells whose value-bin centre exceeds the
    /// position-bin centre by more than `margin`.
    pub fn fraction_above(&self, margin: f64) -> f64 {
        self.fraction_where(|s, t| t > s + margin)
    }

    pub fn fraction_below(&self, margin: f64) -> f64 {
        self.fraction_where(|s, t| t < s - margin)
    }

    fn fraction_where(&self, keep: impl Fn(f64, f64) -> bool) -> f64 {
        let centre = |k: usize| (k as f64 + 0.5) / self.bins as f64;
        let mut hit = 0u64;
        for (r, row) in self.counts.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if keep(centre(r), centre(c)) {
                    hit += x;
                }
            }
        }
        hit as f64 / self.total().max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Pattern;

    #[test]
    fn single_point() {
        for seed in 0..5 {
            assert_eq!(sample_uniform_312(1, seed).unwrap().values(), &[1]);
        }
        assert!(sample_uniform_312(0, 1).is_err());
    }

    #[test]
    fn samples_avoid_312() {
        let p = Pattern::p312();
        for perm in sample_many(30, 200, 4, Execution::Sequential).unwrap() {
            assert!(perm.avoids(&p));
        }
    }

    #[test]
    fn empty_event_is_certain() {
        let e = estimate_event(7, &EventSpec::empty(), 100, 1, Execution::Sequential).unwrap();
        assert_eq!((e.estimate, e.stderr), (1.0, 0.0));
        assert!(estimate_event(7, &EventSpec::empty(), 0, 1, Execution::Sequential).is_err());
    }

    #[test]
    fn bins_close_top_edge() {
        assert_eq!(bin_of(10, 10, 4), 3);
        assert_eq!(bin_of(1, 10, 4), 0);
        assert_eq!(bin_of(5, 10, 2), 1);
        assert_eq!(bin_of(4, 10, 2), 0);
    }

    #[test]
    fn heatmap_conserves_mass() {
        let h = heatmap(40, 30, 2, 7, Execution::Sequential).unwrap();
        assert_eq!(h.total(), 30 * 40);
        for r in 0..7 {
            let row: u64 = h.counts[r].iter().sum();
            let col: u64 = h.counts.iter().map(|row| row[r]).sum();
            let width = (1..=40).filter(|&x| bin_of(x, 40, 7) == r).count() as u64;
            assert_eq!(row, 30 * width);
            assert_eq!(col, 30 * width);
        }
        assert_eq!(h.sidecar(), serde_json::json!({"N": 40, "samples": 30, "seed": 2, "bins": 7}));
        assert!(heatmap(40, 3, 2, 0, Execution::Sequential).is_err());
    }
}
