//! Big-integer helpers: binomial coefficients with the zero convention,
//! incremental binomial columns, and a shared Catalan table.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// `C(n, k)`, taken to be 0 whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for m in 1..=k {
        acc *= (n - k + m) as u64;
        acc /= m as u64;
    }
    acc
}

/// `C(n, k)` for a fixed `k` and increasing `n`, updated in O(size) per step.
#[derive(Debug, Clone)]
pub(crate) struct BinomialColumn {
    n: i64,
    k: i64,
    value: BigUint,
}

impl BinomialColumn {
    pub(crate) fn new(n: i64, k: i64) -> Self {
        BinomialColumn { n, k, value: binomial(n, k) }
    }

    pub(crate) fn value(&self) -> &BigUint {
        &self.value
    }

    pub(crate) fn advance(&mut self) {
        let next = self.n + 1;
        if self.k < 0 || next < self.k {
            self.value.set_zero();
        } else if next == self.k {
            self.value.set_one();
        } else {
            self.value *= next as u64;
            self.value /= (next - self.k) as u64;
        }
        self.n = next;
    }
}

/// Divides `num` by `den`, panicking if the division is not exact.
///
/// Every closed form here is a sum of terms whose common denominator must
/// cancel; a remainder means the formula was applied outside its hypotheses.
pub(crate) fn exact_div(num: &BigUint, den: &BigUint, what: &str) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "{what}: sum is not divisible by its denominator");
    q
}

fn catalan_store() -> &'static RwLock<Arc<Vec<BigUint>>> {
    static STORE: OnceLock<RwLock<Arc<Vec<BigUint>>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(Arc::new(vec![BigUint::one()])))
}

/// Snapshot of the Catalan table covering at least `C_0..=C_upto`.
///
/// The table is append-only; readers keep their snapshot even while another
/// thread extends it.
pub fn catalan_table(upto: usize) -> Arc<Vec<BigUint>> {
    {
        let table = catalan_store().read().expect("catalan table poisoned");
        if table.len() > upto {
            return Arc::clone(&table);
        }
    }
    let mut guard = catalan_store().write().expect("catalan table poisoned");
    if guard.len() <= upto {
        let mut grown: Vec<BigUint> = Vec::with_capacity((upto + 1).max(2 * guard.len()));
        grown.extend(guard.iter().cloned());
        let target = (upto + 1).max(2 * guard.len());
        while grown.len() < target {
            let m = grown.len() as u64; // computing C_m from C_{m-1}
            let next = grown[grown.len() - 1].clone() * (2 * (2 * m - 1)) / (m + 1);
            grown.push(next);
        }
        *guard = Arc::new(grown);
    }
    Arc::clone(&guard)
}

/// The Catalan number `C_n = C(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    catalan_table(n)[n].clone()
}
