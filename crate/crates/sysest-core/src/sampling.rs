//! Systematic sample frames and the non-response sub-sampling protocol.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::num::FloatExt;

/// A linear systematic design over `N = n * k` units: pick a start in
/// `1..=k`, then take every `k`-th unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystematicDesign {
    n_units: usize,
    sample_size: usize,
}

impl SystematicDesign {
    /// Build a design; `sample_size` must divide `n_units` exactly.
    pub fn new(n_units: usize, sample_size: usize) -> Result<Self> {
        if n_units == 0 {
            return Err(Error::EmptyPopulation);
        }
        if sample_size == 0 {
            return Err(Error::InvalidParameter("sample size must be positive"));
        }
        if n_units % sample_size != 0 {
            return Err(Error::IndivisibleDesign {
                n_units,
                sample_size,
            });
        }
        Ok(Self {
            n_units,
            sample_size,
        })
    }

    /// Population size `N`.
    pub fn n_units(&self) -> usize {
        self.n_units
    }

    /// Sample size `n`.
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// Number of candidate starts `k`.
    pub fn strata(&self) -> usize {
        self.n_units / self.sample_size
    }

    /// Zero-based unit indices of the sample with 1-based start `start`
    /// (`1 <= start <= k`), in frame order.
    pub fn indices(&self, start: usize) -> Result<Vec<usize>> {
        let k = self.strata();
        if start == 0 || start > k {
            return Err(Error::InvalidParameter("start must lie in 1..=k"));
        }
        Ok((0..self.sample_size).map(|j| start - 1 + j * k).collect())
    }

    /// Draw a uniform start in `1..=k`.
    pub fn draw_start<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.gen_range(1..=self.strata())
    }
}

/// Size of the revisit sub-sample for a non-respondent group of size `n2`
/// with inverse sampling rate `l_factor`: `max(1, round(n2 / L))` with ties
/// rounded away from zero, or `0` when the group is empty.
pub fn subsample_size(n2: usize, l_factor: f64) -> usize {
    if n2 == 0 {
        return 0;
    }
    let h = (n2 as f64 / l_factor).round_ties_away();
    (h as usize).clamp(1, n2)
}

/// Draw `h2` distinct positions out of `0..n2` uniformly without
/// replacement; returned sorted so that downstream float accumulation has a
/// deterministic order.
pub fn draw_subsample<R: Rng + ?Sized>(rng: &mut R, n2: usize, h2: usize) -> Vec<usize> {
    debug_assert!(h2 <= n2);
    // Partial Fisher-Yates over the index vector.
    let mut pool: Vec<usize> = (0..n2).collect();
    for slot in 0..h2 {
        let pick = rng.gen_range(slot..n2);
        pool.swap(slot, pick);
    }
    let mut chosen = pool[..h2].to_vec();
    chosen.sort_unstable();
    chosen
}
