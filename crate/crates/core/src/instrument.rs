//! Deterministic operation counters.
//!
//! Kernels report the scalar work they do through two per-thread counters:
//!
//! * `accumulate`: multiplications and additions that combine matrix entries
//!   with coefficients (the sums and products of a matrix-vector or
//!   matrix-matrix product).
//! * `entry`: work spent producing a single matrix entry, such as a
//!   closed-form evaluation, one recurrence step, or a power of `l`.
//!
//! Counters are thread-local, so concurrent measurements never interfere.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

thread_local! {
    static ACCUMULATE: Cell<u64> = const { Cell::new(0) };
    static ENTRY: Cell<u64> = const { Cell::new(0) };
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub accumulate: u64,
    pub entry: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.accumulate + self.entry
    }
}

pub(crate) fn accumulate(n: u64) {
    ACCUMULATE.with(|c| c.set(c.get() + n));
}

pub(crate) fn entry(n: u64) {
    ENTRY.with(|c| c.set(c.get() + n));
}

fn snapshot() -> OpCounts {
    OpCounts {
        accumulate: ACCUMULATE.with(Cell::get),
        entry: ENTRY.with(Cell::get),
    }
}

/// Runs `f` and returns the operations it performed on this thread.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, OpCounts) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    (
        out,
        OpCounts {
            accumulate: after.accumulate - before.accumulate,
            entry: after.entry - before.entry,
        },
    )
}
