//! Empirical failure-probability estimation, exact brute-force oracles on
//! tiny instances, and the empirical minimum-resource search.
//!
//! Determinism contract: an estimate depends only on the job parameters and
//! the master seed. Sample `i` draws everything it needs from
//! `SplitMix64::substream(master_seed, i)`, so the result is bit-identical
//! for any chunk size and any number of worker threads; chunking only sets
//! the granularity of parallel work.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{balanced_factorization, ResourceGrid};
use crate::numerics;
use crate::pattern::{enumerate_patterns, sample_flat_into};
use crate::rng::SplitMix64;
use crate::types::{DimensioningResult, FailureEstimate, Method, SampleMode, ScenarioConfig};

/// Joint pattern-space limit for [`exact_failure_bruteforce`].
pub const BRUTE_FORCE_LIMIT: f64 = 1e8;

/// Grid for a simulation: explicit, or an `n_ru` budget factorized
/// automatically (most balanced split with both factors >= n in latin mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridSpec {
    Explicit(ResourceGrid),
    Auto { n_ru: u64 },
}

/// One Monte-Carlo estimation job.
#[derive(Debug, Clone)]
pub struct SimJob {
    pub scenario: ScenarioConfig,
    pub grid: GridSpec,
    pub mode: SampleMode,
    pub samples: u64,
    pub master_seed: u64,
    /// Samples per parallel work unit. Has no effect on the result.
    pub chunk_size: u64,
}

impl SimJob {
    pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;

    pub fn new(
        scenario: ScenarioConfig,
        grid: GridSpec,
        mode: SampleMode,
        samples: u64,
        master_seed: u64,
    ) -> Self {
        Self {
            scenario,
            grid,
            mode,
            samples,
            master_seed,
            chunk_size: Self::DEFAULT_CHUNK_SIZE,
        }
    }

    /// Resolve the grid spec, auto-factorizing when needed.
    pub fn resolve_grid(&self) -> Result<ResourceGrid> {
        match self.grid {
            GridSpec::Explicit(g) => Ok(g),
            GridSpec::Auto { n_ru } => match self.mode {
                SampleMode::Latin => balanced_factorization(n_ru, self.scenario.n),
                // the split is irrelevant to uniform sampling; pick the most
                // balanced one for reporting
                SampleMode::Uniform => balanced_factorization(n_ru, 1),
            },
        }
    }

    pub fn validate(&self) -> Result<ResourceGrid> {
        self.scenario.validate()?;
        if self.samples < 1 {
            return Err(Error::Precondition("samples must be >= 1".into()));
        }
        if self.chunk_size < 1 {
            return Err(Error::Precondition("chunk_size must be >= 1".into()));
        }
        let grid = self.resolve_grid()?;
        let n = self.scenario.n;
        match self.mode {
            SampleMode::Latin if !grid.latin_feasible(n) => Err(Error::Precondition(format!(
                "n = {n} exceeds min(p, q) = {} for latin sampling on a {} x {} grid",
                grid.p.min(grid.q),
                grid.p,
                grid.q
            ))),
            SampleMode::Uniform if n > grid.n_ru() => Err(Error::Precondition(format!(
                "n = {n} exceeds n_ru = {} for uniform sampling",
                grid.n_ru()
            ))),
            _ => Ok(grid),
        }
    }
}

/// Simulate one frame per sample: a target pattern plus `d` i.i.d.
/// interferer patterns. A repetition is lost when more than `ncmax`
/// interferers land on its resource unit; the transmission fails when all
/// `n` repetitions are lost.
pub fn estimate_failure(job: &SimJob) -> Result<FailureEstimate> {
    let grid = job.validate()?;
    let scenario = job.scenario;
    let n = scenario.n as usize;
    let mode = job.mode;
    let samples = job.samples;
    let chunk = job.chunk_size;
    let n_chunks = samples.div_ceil(chunk);

    let failures: u64 = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * chunk;
            let end = (start + chunk).min(samples);
            let mut target: Vec<u64> = Vec::with_capacity(n);
            let mut other: Vec<u64> = Vec::with_capacity(n);
            let mut scratch: Vec<u64> = Vec::with_capacity(n);
            let mut counts: Vec<u64> = vec![0; n];
            let mut fails = 0u64;
            for i in start..end {
                let mut rng = SplitMix64::substream(job.master_seed, i);
                sample_flat_into(&grid, scenario.n, mode, &mut rng, &mut target, &mut scratch);
                target.sort_unstable();
                counts.iter_mut().for_each(|c| *c = 0);
                let mut cells_lost = 0usize;
                for _ in 0..scenario.d {
                    sample_flat_into(&grid, scenario.n, mode, &mut rng, &mut other, &mut scratch);
                    for &cell in &other {
                        if let Ok(j) = target.binary_search(&cell) {
                            counts[j] += 1;
                            if counts[j] == scenario.ncmax + 1 {
                                cells_lost += 1;
                            }
                        }
                    }
                    // once every repetition is lost the sample's outcome is
                    // fixed; later draws cannot change it and other samples
                    // use their own substreams
                    if cells_lost == n {
                        break;
                    }
                }
                if cells_lost == n {
                    fails += 1;
                }
            }
            fails
        })
        .sum();

    Ok(FailureEstimate::from_counts(failures, samples, job.master_seed))
}

/// Exact failure probability by full enumeration of every joint assignment
/// of the target and `d` interferer patterns, uniformly weighted. Oracle for
/// the estimator and the analytic approximation; refuses joint spaces larger
/// than [`BRUTE_FORCE_LIMIT`].
pub fn exact_failure_bruteforce(
    scenario: &ScenarioConfig,
    grid: &ResourceGrid,
    mode: SampleMode,
) -> Result<f64> {
    scenario.validate()?;
    let patterns = enumerate_patterns(grid, scenario.n, mode)?;
    let flats: Vec<Vec<u64>> = patterns.iter().map(|p| p.flat_indices(grid)).collect();
    let space = flats.len() as u64;
    let assignments = scenario.d + 1;
    let size = (space as f64).powi(assignments as i32);
    if !(size <= BRUTE_FORCE_LIMIT) {
        return Err(Error::StateSpaceTooLarge {
            patterns: space,
            assignments,
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let n = scenario.n as usize;
    let ncmax = scenario.ncmax;
    let mut failures: u64 = 0;

    // depth-first over interferer assignments with incremental counts
    fn recurse(
        depth_left: u64,
        flats: &[Vec<u64>],
        target: &[u64],
        counts: &mut [u64],
        cells_lost: &mut usize,
        ncmax: u64,
        failures: &mut u64,
    ) {
        if depth_left == 0 {
            if *cells_lost == target.len() {
                *failures += 1;
            }
            return;
        }
        for interferer in flats {
            for &cell in interferer {
                if let Ok(j) = target.binary_search(&cell) {
                    counts[j] += 1;
                    if counts[j] == ncmax + 1 {
                        *cells_lost += 1;
                    }
                }
            }
            recurse(depth_left - 1, flats, target, counts, cells_lost, ncmax, failures);
            for &cell in interferer {
                if let Ok(j) = target.binary_search(&cell) {
                    if counts[j] == ncmax + 1 {
                        *cells_lost -= 1;
                    }
                    counts[j] -= 1;
                }
            }
        }
    }

    let mut counts = vec![0u64; n];
    for target in &flats {
        let mut cells_lost = 0usize;
        recurse(
            scenario.d,
            &flats,
            target,
            &mut counts,
            &mut cells_lost,
            ncmax,
            &mut failures,
        );
        debug_assert!(counts.iter().all(|&c| c == 0));
    }
    Ok(failures as f64 / size)
}

/// Derived master seed for one search candidate, keyed by the candidate's
/// `n_ru` so re-evaluations reuse the same stream regardless of the path the
/// bracketing took.
fn candidate_seed(master_seed: u64, n_ru: u64) -> u64 {
    SplitMix64::substream(master_seed, n_ru).next_u64_raw()
}

/// Empirical minimum-resource search: smallest `n_ru` whose estimated
/// failure probability is at or below `pf_target`.
///
/// Exponential bracket expansion followed by bisection on the empirical
/// predicate `p_hat <= pf_target`, one fresh substream per candidate. In
/// latin mode, candidates with no feasible factorization are skipped upward
/// and recorded in the result. Requires `samples >= 100 / pf_target`;
/// estimates at the boundary would otherwise rest on a handful of expected
/// failures.
#[allow(clippy::too_many_arguments)]
pub fn search_min_ru(
    n: u64,
    d: u64,
    pf_target: f64,
    ncmax: u64,
    mode: SampleMode,
    samples: u64,
    master_seed: u64,
) -> Result<DimensioningResult> {
    let scenario = ScenarioConfig::new(d, n, pf_target, ncmax)?;
    if (samples as f64) < 100.0 / pf_target {
        return Err(Error::StatisticalPrecondition(format!(
            "samples = {samples} < 100 / pf_target = {:.0}; the boundary estimate would be meaningless",
            100.0 / pf_target
        )));
    }

    let mut skipped: Vec<u64> = Vec::new();
    // smallest feasible candidate at or above `start`; in latin mode every
    // multiple of n at or above n^2 is feasible, so the scan is short
    let first_feasible = |start: u64, limit: u64, skips: &mut Vec<u64>| -> Option<u64> {
        let mut x = start;
        while x < limit {
            match mode {
                SampleMode::Uniform => {
                    if x >= n {
                        return Some(x);
                    }
                }
                SampleMode::Latin => {
                    if balanced_factorization(x, n).is_ok() {
                        return Some(x);
                    }
                    skips.push(x);
                }
            }
            x += 1;
        }
        None
    };

    // trivially reliable scenarios: the smallest feasible grid wins
    if d == 0 || ncmax >= d {
        let n_ru = first_feasible(n, u64::MAX, &mut skipped)
            .ok_or_else(|| Error::Internal("no feasible grid".into()))?;
        let mut result = DimensioningResult::new(n, n_ru, Method::MonteCarlo, Some(0.0));
        result.skipped_n_ru = skipped;
        return Ok(result);
    }

    let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
    let estimate_at = |n_ru: u64, cache: &mut BTreeMap<u64, f64>| -> Result<f64> {
        if let Some(&p) = cache.get(&n_ru) {
            return Ok(p);
        }
        let job = SimJob::new(
            scenario,
            GridSpec::Auto { n_ru },
            mode,
            samples,
            candidate_seed(master_seed, n_ru),
        );
        let p = estimate_failure(&job)?.p_hat;
        cache.insert(n_ru, p);
        Ok(p)
    };

    // expansion: double until the target is met
    let cap = numerics::MAX_RESOURCE_UNITS;
    let start = first_feasible(n, cap, &mut skipped)
        .ok_or_else(|| Error::Range("no feasible candidate below 2^53".into()))?;
    let mut lo;
    let (mut best, mut p_best);
    let p0 = estimate_at(start, &mut cache)?;
    if p0 <= pf_target {
        let mut result = DimensioningResult::new(n, start, Method::MonteCarlo, Some(p0));
        result.skipped_n_ru = skipped;
        return Ok(result);
    }
    lo = start;
    loop {
        let next = lo.saturating_mul(2).min(cap);
        if next == lo {
            return Err(Error::Range(format!(
                "empirical search found no n_ru <= 2^53 meeting pf_target = {pf_target}"
            )));
        }
        let cand = first_feasible(next, cap, &mut skipped)
            .ok_or_else(|| Error::Range("no feasible candidate below 2^53".into()))?;
        let p = estimate_at(cand, &mut cache)?;
        if p <= pf_target {
            best = cand;
            p_best = p;
            break;
        }
        lo = cand;
    }

    // bisection over the feasible candidates in (lo, best)
    let mut ub = best;
    while ub - lo > 1 {
        let mid = lo + (ub - lo) / 2;
        match first_feasible(mid, ub, &mut skipped) {
            Some(cand) if cand < ub => {
                let p = estimate_at(cand, &mut cache)?;
                if p <= pf_target {
                    best = cand;
                    p_best = p;
                    ub = cand;
                } else {
                    lo = cand;
                }
            }
            _ => ub = mid, // no feasible candidate in [mid, ub)
        }
    }

    skipped.retain(|&s| s < best);
    skipped.sort_unstable();
    skipped.dedup();
    let mut result = DimensioningResult::new(n, best, Method::MonteCarlo, Some(p_best));
    result.skipped_n_ru = skipped;
    Ok(result)
}
