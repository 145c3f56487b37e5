//! Brute-force counts over an explicit enumeration of `S_N(312)`.
//!
//! These share no code with the closed forms and are the reference every
//! formula is checked against. All of them refuse `N` above
//! [`oracle_limit`](crate::perm::oracle_limit).

use num_bigint::BigUint;

use crate::corner::CornerChain;
use crate::error::{invalid, Result};
use crate::perm::{enumerate_avoiders, in_sbox, EventSpec, Pattern, Permutation};

/// `S_N(312)` as a vector.
pub fn avoiders_312(n: usize) -> Result<Vec<Permutation>> {
    Ok(enumerate_avoiders(n, &Pattern::p312())?.collect())
}

fn count_where(n: usize, keep: impl Fn(&Permutation) -> bool) -> Result<BigUint> {
    Ok(BigUint::from(enumerate_avoiders(n, &Pattern::p312())?.filter(|p| keep(p)).count()))
}

/// `|S_N(312)|`.
pub fn oracle_total(n: usize) -> Result<BigUint> {
    count_where(n, |_| true)
}

/// Number of 312-avoiders satisfying every constraint of `spec`.
pub fn oracle_event_count(n: usize, spec: &EventSpec) -> Result<BigUint> {
    count_where(n, |p| spec.holds(p))
}

pub fn oracle_sbox_count(n: usize, i: usize, j: usize) -> Result<BigUint> {
    if i == 0 || i > n || j == 0 || j > n {
        return Err(invalid(format!("({i}, {j}) outside 1..={n}")));
    }
    count_where(n, |p| in_sbox(p, i, j))
}

/// Whether the points of `perm` inside the chain's corner rectangle are
/// exactly the chain.
pub fn chain_is_exact(perm: &Permutation, chain: &CornerChain) -> bool {
    let n = perm.len();
    let (a_tot, b_tot) = chain.extent();
    let mut want: Vec<(usize, usize)> =
        chain.partial_sums().into_iter().map(|(a, b)| (n - a + 1, b)).collect();
    want.sort_unstable();
    let found: Vec<(usize, usize)> = (n - a_tot + 1..=n)
        .map(|i| (i, perm.at(i)))
        .filter(|&(_, v)| v <= b_tot)
        .collect();
    found == want
}

/// `|Λ_N(T)|` by enumeration.
pub fn oracle_lambda_count(n: usize, chain: &CornerChain) -> Result<BigUint> {
    let (a, b) = chain.extent();
    if n < a + b {
        return Err(invalid(format!("need N >= A_k + B_k = {}", a + b)));
    }
    count_where(n, |p| chain_is_exact(p, chain))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_are_catalan() {
        let want = [1u32, 2, 5, 14, 42, 132, 429];
        for (n, &w) in (1..).zip(&want) {
            assert_eq!(oracle_total(n).unwrap(), BigUint::from(w));
        }
    }

    #[test]
    fn small_counts() {
        let spec = EventSpec::new(vec![(3, 2)]).unwrap();
        assert_eq!(oracle_event_count(4, &spec).unwrap(), BigUint::from(3u32));
        assert_eq!(oracle_sbox_count(5, 2, 2).unwrap(), BigUint::from(5u32));
        let c = CornerChain::new(vec![(1, 1)]).unwrap();
        assert_eq!(oracle_lambda_count(3, &c).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn respects_cap() {
        assert!(oracle_total(crate::perm::oracle_limit() + 1).is_err());
    }
}
