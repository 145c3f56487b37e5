//! Formula-versus-oracle checks for every small `N`, as a printable table.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bigmath::catalan;
use crate::corner::CornerChain;
use crate::dyck::{dyck_to_perm, perm_to_dyck};
use crate::error::{Error, Result};
use crate::exact::{
    count_k_decreasing, count_k_decreasing_recursive, count_lambda, count_one_point, count_sbox,
    count_two_increasing,
};
use crate::oracle::{avoiders_312, chain_is_exact};
use crate::perm::oracle_limit;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub n: usize,
    pub cases: usize,
    pub failures: usize,
    /// First mismatch, if any.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.failures == 0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,n,cases,failures,status\n");
        for r in &self.rows {
            let status = if r.failures == 0 { "pass" } else { "FAIL" };
            out.push_str(&format!("{},{},{},{},{status}\n", r.check, r.n, r.cases, r.failures));
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<22} {:>3} {:>8} {:>8}  status", "check", "N", "cases", "failures")?;
        for r in &self.rows {
            let status = if r.failures == 0 { "pass" } else { "FAIL" };
            writeln!(f, "{:<22} {:>3} {:>8} {:>8}  {status}", r.check, r.n, r.cases, r.failures)?;
            if let Some(d) = &r.detail {
                writeln!(f, "    first mismatch: {d}")?;
            }
        }
        Ok(())
    }
}

struct Tally {
    row: VerifyRow,
}

impl Tally {
    fn new(check: &str, n: usize) -> Self {
        Tally { row: VerifyRow { check: check.into(), n, cases: 0, failures: 0, detail: None } }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.row.cases += 1;
        if !ok {
            self.row.failures += 1;
            if self.row.detail.is_none() {
                self.row.detail = Some(what());
            }
        }
    }

    fn compare(&mut self, formula: Result<BigUint>, oracle: u64, what: impl FnOnce() -> String) {
        let got = formula.ok();
        let ok = got.as_ref() == Some(&BigUint::from(oracle));
        self.record(ok, || format!("{}: formula {:?}, oracle {oracle}", what(), got.map(|g| g.to_string())));
    }
}

/// Increment chains with every `a, b <= 3`, at most 3 steps, fitting in `N`.
fn small_chains(n: usize) -> Vec<CornerChain> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<(usize, usize)>> = vec![vec![]];
    while let Some(incs) = stack.pop() {
        let (a, b) = incs.iter().fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        if !incs.is_empty() {
            out.push(CornerChain::new(incs.clone()).expect("positive increments"));
        }
        if incs.len() == 3 {
            continue;
        }
        for da in 1..=3 {
            for db in 1..=3 {
                if a + da + b + db <= n {
                    let mut next = incs.clone();
                    next.push((da, db));
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// Runs every check for `N = 1..=max_n`. Refuses `max_n` above the oracle cap.
pub fn verify(max_n: usize) -> Result<VerifyReport> {
    let limit = oracle_limit();
    if max_n > limit {
        return Err(Error::OracleLimit { n: max_n, limit });
    }
    let mut report = VerifyReport::default();
    for n in 1..=max_n {
        report.rows.extend(verify_n(n)?);
    }
    Ok(report)
}

fn verify_n(n: usize) -> Result<Vec<VerifyRow>> {
    let perms = avoiders_312(n)?;
    let idx = |i: usize, j: usize| (i - 1) * n + (j - 1);

    // Occupancy tables: single points, boxed points, ordered pairs, decreasing triples.
    let mut single = vec![0u64; n * n];
    let mut boxed = vec![0u64; n * n];
    let mut pair = vec![0u64; n * n * n * n];
    let mut triple = std::collections::HashMap::<[usize; 6], u64>::new();
    for p in &perms {
        let v = p.values();
        let mut prefix_max = 0;
        for i in 1..=n {
            single[idx(i, v[i - 1])] += 1;
            if prefix_max < v[i - 1] {
                boxed[idx(i, v[i - 1])] += 1;
            }
            prefix_max = prefix_max.max(v[i - 1]);
        }
        for i1 in 1..=n {
            for i2 in i1 + 1..=n {
                pair[idx(i1, v[i1 - 1]) * n * n + idx(i2, v[i2 - 1])] += 1;
                for i3 in i2 + 1..=n {
                    let (j1, j2, j3) = (v[i1 - 1], v[i2 - 1], v[i3 - 1]);
                    if j1 > j2 && j2 > j3 && j1 < i1 {
                        *triple.entry([i1, j1, i2, j2, i3, j3]).or_default() += 1;
                    }
                }
            }
        }
    }
    let pair_at = |i1: usize, j1: usize, i2: usize, j2: usize| pair[idx(i1, j1) * n * n + idx(i2, j2)];

    let mut rows = Vec::new();

    let mut t = Tally::new("catalan", n);
    t.compare(Ok(catalan(n)), perms.len() as u64, || format!("N={n}"));
    rows.push(t.row);

    let mut t = Tally::new("boxed", n);
    for i in 1..=n {
        for j in 1..=n {
            t.compare(count_sbox(n, i, j), boxed[idx(i, j)], || format!("({i},{j})"));
        }
    }
    rows.push(t.row);

    let mut t = Tally::new("one_point", n);
    for i in 2..=n {
        for j in 1..i {
            t.compare(count_one_point(n, i, j), single[idx(i, j)], || format!("({i},{j})"));
        }
    }
    rows.push(t.row);

    let mut t_explicit = Tally::new("two_decreasing", n);
    let mut t_rec = Tally::new("two_decreasing_rec", n);
    let mut t_inc = Tally::new("two_increasing", n);
    for i1 in 2..=n {
        for j1 in 1..i1 {
            for i2 in i1 + 1..=n {
                for j2 in 1..j1 {
                    let pts = [(i1, j1), (i2, j2)];
                    let oracle = pair_at(i1, j1, i2, j2);
                    t_explicit.compare(count_k_decreasing(n, &pts), oracle, || format!("{pts:?}"));
                    t_rec.compare(count_k_decreasing_recursive(n, &pts), oracle, || format!("{pts:?}"));
                }
                for j2 in j1 + 1..i2 {
                    let oracle = pair_at(i1, j1, i2, j2);
                    t_inc.compare(count_two_increasing(n, i1, i2, j1, j2), oracle, || {
                        format!("({i1},{j1}),({i2},{j2})")
                    });
                }
            }
        }
    }
    rows.extend([t_explicit.row, t_rec.row, t_inc.row]);

    let mut t = Tally::new("three_decreasing", n);
    for i1 in 2..=n {
        for j1 in 1..i1 {
            for i2 in i1 + 1..=n {
                for j2 in 1..j1 {
                    for i3 in i2 + 1..=n {
                        for j3 in 1..j2 {
                            let pts = [(i1, j1), (i2, j2), (i3, j3)];
                            let oracle = triple.get(&[i1, j1, i2, j2, i3, j3]).copied().unwrap_or(0);
                            t.compare(count_k_decreasing(n, &pts), oracle, || format!("{pts:?}"));
                        }
                    }
                }
            }
        }
    }
    rows.push(t.row);

    let mut t = Tally::new("lambda", n);
    for chain in small_chains(n) {
        let oracle = perms.iter().filter(|p| chain_is_exact(p, &chain)).count() as u64;
        t.compare(count_lambda(n, &chain), oracle, || format!("{:?}", chain.increments()));
    }
    rows.push(t.row);

    let mut t = Tally::new("bijection", n);
    for p in &perms {
        let ok = match perm_to_dyck(p) {
            Ok(path) => {
                let maxima: Vec<(usize, usize)> = p.left_to_right_maxima();
                let peaks = path.peaks();
                dyck_to_perm(&path) == *p && peaks.len() == maxima.len()
            }
            Err(_) => false,
        };
        t.record(ok, || format!("{p}"));
    }
    rows.push(t.row);

    Ok(rows)
}
