//! The time-frequency resource grid.

use serde::Serialize;

use crate::error::{Error, Result};

/// A frame of `p` frequency channels by `q` time slots, `n_ru = p * q`
/// resource units in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ResourceGrid {
    pub p: u64,
    pub q: u64,
}

impl ResourceGrid {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if p < 1 || q < 1 {
            return Err(Error::Precondition(format!(
                "grid dimensions must be >= 1, got p = {p}, q = {q}"
            )));
        }
        if p.checked_mul(q).is_none() {
            return Err(Error::Range(format!("p * q overflows u64 for p = {p}, q = {q}")));
        }
        Ok(Self { p, q })
    }

    /// Total number of resource units, `p * q`.
    #[inline]
    pub fn n_ru(&self) -> u64 {
        self.p * self.q
    }

    /// Whether a latin pattern of `n` repetitions fits: `n <= min(p, q)`.
    #[inline]
    pub fn latin_feasible(&self, n: u64) -> bool {
        n <= self.p.min(self.q)
    }
}

/// Most balanced divisor pair `(p, q)` of `n_ru` with both factors >= `n`.
///
/// Minimizes `|p - q|`; ties (and the orientation of the unique answer) are
/// broken toward `p >= q` so output is deterministic. Errors when no divisor
/// pair qualifies (e.g. `n_ru` prime with `n >= 2`, or `n_ru < n^2`), so
/// callers may fall back to uniform sampling or adjust `n_ru`.
pub fn balanced_factorization(n_ru: u64, n: u64) -> Result<ResourceGrid> {
    if n_ru < 1 || n < 1 {
        return Err(Error::Precondition(format!(
            "n_ru and n must be >= 1, got n_ru = {n_ru}, n = {n}"
        )));
    }
    // The best q is the largest divisor <= sqrt(n_ru) that is >= n; the
    // cofactor p = n_ru / q is then automatically >= q >= n.
    let root = n_ru.isqrt();
    let mut best: Option<u64> = None;
    for q in (n..=root).rev() {
        if n_ru % q == 0 {
            best = Some(q);
            break;
        }
    }
    match best {
        Some(q) => ResourceGrid::new(n_ru / q, q),
        None => Err(Error::NoLatinFactorization { n_ru, n }),
    }
}
