//! Memoized big-integer factorials shared across threads.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

fn table() -> &'static RwLock<Vec<BigInt>> {
    static TABLE: OnceLock<RwLock<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![BigInt::one()]))
}

/// `n!`. The table only ever grows, and every thread extends it the same way.
pub fn factorial(n: usize) -> BigInt {
    {
        let t = table().read().unwrap_or_else(|e| e.into_inner());
        if let Some(v) = t.get(n) {
            return v.clone();
        }
    }
    let mut t = table().write().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}
