//! Hopping patterns and the pattern sampler.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::ResourceGrid;
use crate::types::SampleMode;

/// The set of resource units one device uses in one frame.
///
/// Cells are `(channel, slot)` pairs, stored sorted by flat index
/// `channel * q + slot`; the flat encoding is the canonical form used for
/// hashing and collision counting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HopPattern {
    cells: Vec<(u64, u64)>,
}

impl HopPattern {
    /// Build a pattern from cells, validating distinctness and grid bounds.
    pub fn new(grid: &ResourceGrid, mut cells: Vec<(u64, u64)>) -> Result<Self> {
        for &(ch, sl) in &cells {
            if ch >= grid.p || sl >= grid.q {
                return Err(Error::Precondition(format!(
                    "cell ({ch}, {sl}) outside {} x {} grid",
                    grid.p, grid.q
                )));
            }
        }
        cells.sort_unstable();
        let len = cells.len();
        cells.dedup();
        if cells.len() != len {
            return Err(Error::Precondition("pattern cells must be distinct".into()));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[(u64, u64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Canonical flat indices `channel * q + slot`, ascending.
    pub fn flat_indices(&self, grid: &ResourceGrid) -> Vec<u64> {
        self.cells.iter().map(|&(ch, sl)| ch * grid.q + sl).collect()
    }

    /// True when all channels are pairwise distinct and all slots are
    /// pairwise distinct.
    pub fn is_latin(&self) -> bool {
        let chans: Vec<u64> = self.cells.iter().map(|c| c.0).sorted().dedup().collect();
        let slots: Vec<u64> = self.cells.iter().map(|c| c.1).sorted().dedup().collect();
        chans.len() == self.cells.len() && slots.len() == self.cells.len()
    }
}

fn check_sampling_pre(grid: &ResourceGrid, n: u64, mode: SampleMode) -> Result<()> {
    if n < 1 {
        return Err(Error::Precondition("n must be >= 1".into()));
    }
    match mode {
        SampleMode::Uniform => {
            if n > grid.n_ru() {
                return Err(Error::Precondition(format!(
                    "n = {n} exceeds n_ru = {} for uniform sampling",
                    grid.n_ru()
                )));
            }
        }
        SampleMode::Latin => {
            if !grid.latin_feasible(n) {
                return Err(Error::Precondition(format!(
                    "n = {n} exceeds min(p, q) = {} for latin sampling on a {} x {} grid",
                    grid.p.min(grid.q),
                    grid.p,
                    grid.q
                )));
            }
        }
    }
    Ok(())
}

/// Floyd's subset-sampling algorithm: `n` distinct values from `0..m`,
/// uniform over all n-subsets. Output order is not uniform; callers that
/// need a uniform permutation shuffle afterwards.
fn floyd_subset<R: Rng + ?Sized>(m: u64, n: usize, rng: &mut R, out: &mut Vec<u64>) {
    out.clear();
    for j in (m - n as u64)..m {
        let t = rng.random_range(0..=j);
        if out.contains(&t) {
            out.push(j);
        } else {
            out.push(t);
        }
    }
}

/// Allocation-free sampler used by the Monte-Carlo hot loop.
///
/// Writes the pattern into `out` as unsorted flat indices; `scratch` is
/// caller-provided working space. Preconditions are the caller's business
/// (checked in debug builds only) — use [`sample_pattern`] for the checked,
/// allocating variant.
pub fn sample_flat_into<R: Rng + ?Sized>(
    grid: &ResourceGrid,
    n: u64,
    mode: SampleMode,
    rng: &mut R,
    out: &mut Vec<u64>,
    scratch: &mut Vec<u64>,
) {
    debug_assert!(check_sampling_pre(grid, n, mode).is_ok());
    let k = n as usize;
    match mode {
        SampleMode::Uniform => {
            floyd_subset(grid.n_ru(), k, rng, out);
        }
        SampleMode::Latin => {
            // n distinct channels, n distinct slots, and a uniform random
            // bijection between them: uniform over all latin patterns.
            floyd_subset(grid.p, k, rng, out);
            floyd_subset(grid.q, k, rng, scratch);
            scratch.shuffle(rng);
            for i in 0..k {
                out[i] = out[i] * grid.q + scratch[i];
            }
        }
    }
}

/// Draw one hopping pattern.
///
/// Uniform mode draws uniformly over all `C(n_ru, n)` cell subsets; latin
/// mode draws uniformly over all patterns with pairwise-distinct channels
/// and slots.
pub fn sample_pattern<R: Rng + ?Sized>(
    grid: &ResourceGrid,
    n: u64,
    mode: SampleMode,
    rng: &mut R,
) -> Result<HopPattern> {
    check_sampling_pre(grid, n, mode)?;
    let mut out = Vec::with_capacity(n as usize);
    let mut scratch = Vec::with_capacity(n as usize);
    sample_flat_into(grid, n, mode, rng, &mut out, &mut scratch);
    let cells = out.iter().map(|&f| (f / grid.q, f % grid.q)).collect();
    HopPattern::new(grid, cells)
}

/// Enumerate the entire pattern space for a mode. Intended for tiny grids
/// (oracles, goodness-of-fit tests); the space grows combinatorially.
pub fn enumerate_patterns(grid: &ResourceGrid, n: u64, mode: SampleMode) -> Result<Vec<HopPattern>> {
    check_sampling_pre(grid, n, mode)?;
    let k = n as usize;
    let mut patterns = Vec::new();
    match mode {
        SampleMode::Uniform => {
            for combo in (0..grid.n_ru()).combinations(k) {
                let cells = combo.iter().map(|&f| (f / grid.q, f % grid.q)).collect();
                patterns.push(HopPattern::new(grid, cells)?);
            }
        }
        SampleMode::Latin => {
            for chans in (0..grid.p).combinations(k) {
                for slots in (0..grid.q).combinations(k) {
                    for perm in slots.iter().permutations(k) {
                        let cells = chans.iter().zip(perm).map(|(&c, &s)| (c, s)).collect();
                        patterns.push(HopPattern::new(grid, cells)?);
                    }
                }
            }
        }
    }
    Ok(patterns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn single_cell_grid_has_single_pattern() {
        let grid = ResourceGrid::new(1, 1).unwrap();
        let mut rng = SplitMix64::new(3);
        for mode in [SampleMode::Latin, SampleMode::Uniform] {
            let p = sample_pattern(&grid, 1, mode, &mut rng).unwrap();
            assert_eq!(p.cells(), &[(0, 0)]);
        }
    }

    #[test]
    fn latin_2x2_space_is_the_two_diagonals() {
        let grid = ResourceGrid::new(2, 2).unwrap();
        let pats = enumerate_patterns(&grid, 2, SampleMode::Latin).unwrap();
        assert_eq!(pats.len(), 2);
        let diag = HopPattern::new(&grid, vec![(0, 0), (1, 1)]).unwrap();
        let anti = HopPattern::new(&grid, vec![(0, 1), (1, 0)]).unwrap();
        assert!(pats.contains(&diag) && pats.contains(&anti));
    }

    #[test]
    fn uniform_2x2_space_has_six_subsets() {
        let grid = ResourceGrid::new(2, 2).unwrap();
        let pats = enumerate_patterns(&grid, 2, SampleMode::Uniform).unwrap();
        assert_eq!(pats.len(), 6);
    }

    #[test]
    fn enumeration_counts_match_combinatorics() {
        let grid = ResourceGrid::new(3, 4).unwrap();
        // C(12, 2) = 66
        assert_eq!(enumerate_patterns(&grid, 2, SampleMode::Uniform).unwrap().len(), 66);
        // C(3,2) * C(4,2) * 2! = 3 * 6 * 2 = 36
        assert_eq!(enumerate_patterns(&grid, 2, SampleMode::Latin).unwrap().len(), 36);
    }

    #[test]
    fn preconditions_name_the_bound() {
        let grid = ResourceGrid::new(2, 3).unwrap();
        let mut rng = SplitMix64::new(0);
        let err = sample_pattern(&grid, 3, SampleMode::Latin, &mut rng).unwrap_err();
        assert!(err.to_string().contains("min(p, q)"), "{err}");
        let err = sample_pattern(&grid, 7, SampleMode::Uniform, &mut rng).unwrap_err();
        assert!(err.to_string().contains("n_ru"), "{err}");
    }

    #[test]
    fn sampled_patterns_satisfy_mode_invariants() {
        let mut rng = SplitMix64::new(99);
        for (p, q) in [(2, 2), (3, 5), (8, 4), (10, 10)] {
            let grid = ResourceGrid::new(p, q).unwrap();
            for n in 1..=p.min(q) {
                for mode in [SampleMode::Latin, SampleMode::Uniform] {
                    let pat = sample_pattern(&grid, n, mode, &mut rng).unwrap();
                    assert_eq!(pat.len(), n as usize);
                    if mode == SampleMode::Latin {
                        assert!(pat.is_latin(), "{pat:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn same_seed_reproduces_pattern_sequence() {
        let grid = ResourceGrid::new(7, 9).unwrap();
        let mut a = SplitMix64::substream(5, 0);
        let mut b = SplitMix64::substream(5, 0);
        for _ in 0..50 {
            let pa = sample_pattern(&grid, 5, SampleMode::Latin, &mut a).unwrap();
            let pb = sample_pattern(&grid, 5, SampleMode::Latin, &mut b).unwrap();
            assert_eq!(pa, pb);
        }
    }
}
