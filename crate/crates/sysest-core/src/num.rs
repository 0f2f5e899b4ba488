//! Small numeric kit: compensated summation, descriptive moments, root
//! bracketing, and a deterministic 64-bit mixer.

/// Float operations the crate needs that `core` does not provide.
///
/// In a `no_std` build the inherent `f64` math methods live in `std`, so the
/// crate routes them through `libm`. `sqrt` is correctly rounded and therefore
/// identical to the hardware instruction; the remaining operations are used in
/// contexts where a few ulp of platform variation is irrelevant.
pub trait FloatExt {
    /// Square root.
    fn sqrt(self) -> f64;
    /// Absolute value.
    fn abs(self) -> f64;
    /// `self` raised to a real power.
    fn powf(self, exp: f64) -> f64;
    /// Round to the nearest integer, ties away from zero.
    fn round_ties_away(self) -> f64;
}

impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }

    #[inline]
    fn abs(self) -> f64 {
        libm::fabs(self)
    }

    #[inline]
    fn powf(self, exp: f64) -> f64 {
        libm::pow(self, exp)
    }

    #[inline]
    fn round_ties_away(self) -> f64 {
        libm::round(self)
    }
}

/// Neumaier-compensated accumulator.
///
/// Keeps a running compensation term so that long sums of mixed-magnitude
/// addends (Monte Carlo accumulations, population second moments) do not lose
/// low-order bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    /// A fresh accumulator at zero.
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one addend.
    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// The compensated total.
    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of a slice.
pub fn sum(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.total()
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(sum(values) / values.len() as f64)
    }
}

/// Sample variance with divisor `len - 1`; `None` when fewer than two values.
///
/// Two-pass with compensated sums: deviations are taken about the compensated
/// mean before squaring.
pub fn variance(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let mut acc = CompensatedSum::new();
    for &v in values {
        let d = v - m;
        acc.add(d * d);
    }
    Some(acc.total() / (values.len() - 1) as f64)
}

/// Bisection root of a monotone continuous function on `[lo, hi]`.
///
/// Requires a sign change across the bracket; returns the midpoint after the
/// bracket shrinks below `tol` (or after 200 halvings). `None` when the
/// bracket does not straddle a root.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol {
            return Some(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// SplitMix64 output function: maps a 64-bit state to a well-mixed 64-bit
/// value. Used to derive independent per-replication RNG seeds from a master
/// seed.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `index` of a run with master seed `seed`.
#[inline]
pub fn derived_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_term() {
        let xs = [1.0e16, 1.0, -1.0e16, 1.0];
        assert_eq!(sum(&xs), 2.0);
    }

    #[test]
    fn mean_and_variance_basics() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), Some(5.0));
        let v = variance(&xs).unwrap();
        assert!((v - 32.0 / 7.0).abs() < 1e-15);
        assert_eq!(mean(&[]), None);
        assert_eq!(variance(&[1.0]), None);
    }

    #[test]
    fn bisect_finds_sqrt_two() {
        let r = bisect(|t| t * t - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert_eq!(bisect(|t| t + 10.0, 0.0, 1.0, 1e-12), None);
    }

    #[test]
    fn round_ties_away_from_zero() {
        assert_eq!(1.5f64.round_ties_away(), 2.0);
        assert_eq!(2.5f64.round_ties_away(), 3.0);
        assert_eq!((-1.5f64).round_ties_away(), -2.0);
        assert_eq!(0.4f64.round_ties_away(), 0.0);
    }

    #[test]
    fn splitmix_reference_vectors() {
        // Published SplitMix64 outputs for seed 0: the stream visits states
        // 0, gamma, 2*gamma, ... and mixes each state plus gamma.
        const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(GAMMA), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(splitmix64(GAMMA.wrapping_mul(2)), 0x06C4_5D18_8009_454F);
        assert_ne!(derived_seed(1, 0), derived_seed(1, 1));
        assert_ne!(derived_seed(1, 0), derived_seed(2, 0));
    }
}
