//! Coefficients of the rising factorial `x (x+1) ... (x+n-1) = sum_j c(j, n) x^j`,
//! i.e. the unsigned Stirling numbers of the first kind.

use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Rows built by the shared cache before any growth.
pub const DEFAULT_MAX_N: usize = 16;

/// Largest row whose entries all fit in a `u128` (34! < 2^128 < 35!).
pub const MAX_SUPPORTED_N: usize = 34;

#[derive(Debug, Clone, PartialEq)]
pub struct StirlingTable {
    max_n: usize,
    // row n holds c(0, n) ..= c(n, n)
    rows: Vec<Vec<u128>>,
    ln_rows: Vec<Vec<f64>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Result<Self> {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![1]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![0u128; n + 1];
            for (j, cell) in row.iter_mut().enumerate().skip(1) {
                let carry = prev.get(j - 1).copied().unwrap_or(0);
                let stay = prev.get(j).copied().unwrap_or(0);
                *cell = stay
                    .checked_mul((n - 1) as u128)
                    .and_then(|v| v.checked_add(carry))
                    .ok_or(Error::StirlingOverflow { n })?;
            }
            rows.push(row);
        }
        let ln_rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| (c as f64).ln()).collect())
            .collect();
        Ok(Self { max_n, rows, ln_rows })
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `c(j, n)`; zero for `j > n`. Panics if `n > max_n`.
    pub fn get(&self, j: usize, n: usize) -> u128 {
        self.rows[n].get(j).copied().unwrap_or(0)
    }

    /// `ln c(j, n)`, `-inf` where the coefficient vanishes.
    pub fn ln(&self, j: usize, n: usize) -> f64 {
        self.ln_rows[n].get(j).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn row(&self, n: usize) -> &[u128] {
        &self.rows[n]
    }
}

pub fn stirling_table(max_n: usize) -> Result<StirlingTable> {
    StirlingTable::new(max_n)
}

fn cache() -> &'static RwLock<Arc<StirlingTable>> {
    static CACHE: OnceLock<RwLock<Arc<StirlingTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Arc::new(StirlingTable::new(DEFAULT_MAX_N).unwrap())))
}

/// Shared table covering at least row `n`, grown on demand.
pub fn shared_table(n: usize) -> Result<Arc<StirlingTable>> {
    {
        let table = cache().read().unwrap();
        if table.max_n >= n {
            return Ok(Arc::clone(&table));
        }
    }
    let mut guard = cache().write().unwrap();
    if guard.max_n < n {
        let grown = (guard.max_n * 2).max(n).min(MAX_SUPPORTED_N.max(n));
        *guard = Arc::new(StirlingTable::new(grown)?);
    }
    Ok(Arc::clone(&guard))
}
