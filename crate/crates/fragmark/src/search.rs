//! Multi-threaded exhaustive search for the embedding permutation.
//!
//! Candidates are enumerated in lexicographic order and split into work
//! units of [`WORK_UNIT`] ranks; rayon spreads the units over a pool of
//! workers that share the read-only block observations. Survivors are
//! merged and sorted, so the report does not depend on the schedule.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use fragmark_core::attacks::WORK_UNIT;
use fragmark_core::{CrackBudget, CrackResult, Cracker, GrayImage, SchemeParams};
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CrackReport {
    pub result: CrackResult,
    pub elements: usize,
    pub total_candidates: u64,
    pub threads: usize,
    pub elapsed: Duration,
}

impl CrackReport {
    /// `key=value` lines, one `survivor=` line per surviving permutation.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "elements={}", self.elements);
        let _ = writeln!(out, "total_candidates={}", self.total_candidates);
        let _ = writeln!(out, "tested_count={}", self.result.tested_count);
        let _ = writeln!(out, "survivors={}", self.result.survivors.len());
        for s in &self.result.survivors {
            let _ = writeln!(out, "survivor={s}");
        }
        let _ = writeln!(out, "threads={}", self.threads);
        let _ = writeln!(out, "elapsed_seconds={:.6}", self.elapsed.as_secs_f64());
        out
    }
}

/// `log2(n!)`.
pub fn log2_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).log2()).sum()
}

/// Explanation printed when a search is refused.
pub fn refusal_message(elements: usize, allow_long: bool) -> String {
    // One decimal, truncated, to match the usual way the bound is quoted.
    let bits = (log2_factorial(elements) * 10.0).floor() / 10.0;
    let hint = if allow_long || elements > fragmark_core::attacks::LONG_SEARCH_ELEMENTS {
        ""
    } else {
        "; pass --long to run it anyway"
    };
    format!(
        "refusing exhaustive search over {elements}! ≈ 2^{bits:.1} candidate permutations{hint}"
    )
}

pub fn crack_parallel(
    img_a: &GrayImage,
    img_b: &GrayImage,
    params: &SchemeParams,
    budget: CrackBudget,
    threads: Option<usize>,
) -> Result<CrackReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Usage(format!("cannot start worker pool: {e}")))?;
    let start = Instant::now();
    let cracker = Cracker::new(img_a, img_b, params, budget)?;
    let units: Vec<(u64, u64)> = cracker.work_units(WORK_UNIT).collect();
    let parts: Vec<_> = pool.install(|| {
        units
            .par_iter()
            .map(|&(first, count)| cracker.screen(first, count))
            .collect()
    });
    let result = cracker.finish(parts)?;
    Ok(CrackReport {
        elements: cracker.elements(),
        total_candidates: cracker.total_candidates(),
        threads: pool.current_num_threads(),
        elapsed: start.elapsed(),
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_bounds() {
        assert!((log2_factorial(8) - 40320f64.log2()).abs() < 1e-9);
        assert!((log2_factorial(32) - 117.6).abs() < 0.1);
        assert!((log2_factorial(48) - 202.9).abs() < 0.1);
    }

    #[test]
    fn refusal_quotes_bound() {
        assert!(refusal_message(32, false).contains("2^117.6"));
        assert!(refusal_message(48, true).contains("2^202.9"));
        assert!(refusal_message(12, false).contains("--long"));
    }
}
