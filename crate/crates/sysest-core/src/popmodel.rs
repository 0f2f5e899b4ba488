//! Finite-population containers and summary statistics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
// In test builds the harness links std, whose inherent float methods then
// shadow this trait; the import is only exercised in normal no_std builds.
#[cfg_attr(test, allow(unused_imports))]
use crate::num::{self, CompensatedSum, FloatExt};

/// A finite population carrying a study variable `y` and an auxiliary
/// variable `x`, both known for every unit (in frame order).
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    y: Vec<f64>,
    x: Vec<f64>,
}

impl Population {
    /// Build a population, validating that both variables are non-empty,
    /// equally long and finite.
    pub fn new(y: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        if y.len() != x.len() {
            return Err(Error::LengthMismatch {
                y_len: y.len(),
                x_len: x.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("study variable y"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("auxiliary variable x"));
        }
        Ok(Self { y, x })
    }

    /// Number of units `N`.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    /// Whether the population is empty (never true for a constructed value).
    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Study variable in frame order.
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Auxiliary variable in frame order.
    pub fn x(&self) -> &[f64] {
        &self.x
    }
}

/// Summary statistics of a population under a systematic design with samples
/// of size `n` (so `N = n * k` with `k` candidate starts).
///
/// `s2_y`/`s2_x` are mean squares with divisor `N - 1`. `rho` is the unit
/// level product-moment correlation between `y` and `x`. `rho_y`/`rho_x` are
/// intraclass correlations between pairs of units within the same systematic
/// sample:
///
/// ```text
/// rho = sum_i sum_{j != j'} (v_ij - V)(v_ij' - V) / ((n - 1) * SS)
/// ```
///
/// with `SS` the total sum of squared deviations. The implementation uses the
/// algebraically identical form `(n^2 T - SS) / ((n - 1) SS)` where `T` is
/// the between-sample sum `sum_i (vbar_i - V)^2`, which costs `O(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    /// Population size `N`.
    pub n_units: usize,
    /// Systematic sample size `n`.
    pub sample_size: usize,
    /// Number of candidate starts `k = N / n`.
    pub strata: usize,
    /// Population mean of `y`.
    pub mean_y: f64,
    /// Population mean of `x`.
    pub mean_x: f64,
    /// Mean square of `y` (divisor `N - 1`).
    pub s2_y: f64,
    /// Mean square of `x` (divisor `N - 1`).
    pub s2_x: f64,
    /// Product-moment correlation between `y` and `x`.
    pub rho: f64,
    /// Intraclass correlation of `y` within systematic samples.
    pub rho_y: f64,
    /// Intraclass correlation of `x` within systematic samples.
    pub rho_x: f64,
}

impl Summary {
    /// Compute the summary for `pop` under samples of size `sample_size`.
    ///
    /// Requires `2 <= sample_size`, `sample_size | N`, and non-degenerate
    /// means for the coefficients of variation to exist downstream.
    pub fn compute(pop: &Population, sample_size: usize) -> Result<Self> {
        let n_units = pop.len();
        if sample_size < 2 {
            return Err(Error::InvalidParameter("sample size must be at least 2"));
        }
        if n_units % sample_size != 0 {
            return Err(Error::IndivisibleDesign {
                n_units,
                sample_size,
            });
        }
        let strata = n_units / sample_size;
        let mean_y = num::mean(pop.y()).ok_or(Error::EmptyPopulation)?;
        let mean_x = num::mean(pop.x()).ok_or(Error::EmptyPopulation)?;

        let (ss_y, ss_x, ss_xy) = cross_moments(pop.y(), pop.x(), mean_y, mean_x);
        let nm1 = (n_units - 1) as f64;
        let s2_y = ss_y / nm1;
        let s2_x = ss_x / nm1;
        let rho = if ss_y > 0.0 && ss_x > 0.0 {
            ss_xy / (ss_y.sqrt() * ss_x.sqrt())
        } else {
            0.0
        };

        if ss_x <= 0.0 {
            return Err(Error::Degenerate("auxiliary variable has zero variance"));
        }

        let nf = sample_size as f64;
        let rho_y = check_intraclass(intraclass(pop.y(), mean_y, ss_y, sample_size, strata), nf)?;
        let rho_x = check_intraclass(intraclass(pop.x(), mean_x, ss_x, sample_size, strata), nf)?;

        let s = Self {
            n_units,
            sample_size,
            strata,
            mean_y,
            mean_x,
            s2_y,
            s2_x,
            rho,
            rho_y,
            rho_x,
        };
        s.validate()?;
        Ok(s)
    }

    /// Assemble a summary from externally known constants (for populations
    /// available only in summary form). `rho_y`/`rho_x` follow the same
    /// pair-level definition as [`Summary::compute`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n_units: usize,
        sample_size: usize,
        mean_y: f64,
        mean_x: f64,
        s2_y: f64,
        s2_x: f64,
        rho: f64,
        rho_y: f64,
        rho_x: f64,
    ) -> Result<Self> {
        if sample_size < 2 {
            return Err(Error::InvalidParameter("sample size must be at least 2"));
        }
        if n_units % sample_size != 0 {
            return Err(Error::IndivisibleDesign {
                n_units,
                sample_size,
            });
        }
        let s = Self {
            n_units,
            sample_size,
            strata: n_units / sample_size,
            mean_y,
            mean_x,
            s2_y,
            s2_x,
            rho,
            rho_y,
            rho_x,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let finite = [
            self.mean_y,
            self.mean_x,
            self.s2_y,
            self.s2_x,
            self.rho,
            self.rho_y,
            self.rho_x,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("population summary"));
        }
        if self.mean_y == 0.0 {
            return Err(Error::Degenerate("mean of y is zero"));
        }
        if self.mean_x == 0.0 {
            return Err(Error::Degenerate("mean of x is zero"));
        }
        if self.s2_y < 0.0 || self.s2_x < 0.0 {
            return Err(Error::InvalidParameter("mean squares must be non-negative"));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidParameter("rho must lie in [-1, 1]"));
        }
        let lo = -1.0 / (self.sample_size as f64 - 1.0);
        for r in [self.rho_y, self.rho_x] {
            if r < lo - 1e-9 || r > 1.0 + 1e-9 {
                return Err(Error::InvalidParameter(
                    "intraclass correlation outside [-1/(n-1), 1]",
                ));
            }
        }
        Ok(())
    }

    /// `theta = 1/n - 1/N`, the variance factor of the design.
    pub fn theta(&self) -> f64 {
        1.0 / self.sample_size as f64 - 1.0 / self.n_units as f64
    }

    /// Coefficient of variation of `y`; error when `mean_y == 0`.
    pub fn cv_y(&self) -> Result<f64> {
        if self.mean_y == 0.0 {
            return Err(Error::Degenerate("mean of y is zero"));
        }
        Ok(self.s2_y.sqrt() / self.mean_y)
    }

    /// Coefficient of variation of `x`; error when `mean_x == 0`.
    pub fn cv_x(&self) -> Result<f64> {
        if self.mean_x == 0.0 {
            return Err(Error::Degenerate("mean of x is zero"));
        }
        Ok(self.s2_x.sqrt() / self.mean_x)
    }
}

/// Centered second moments: returns `(SS_y, SS_x, SS_xy)`.
fn cross_moments(y: &[f64], x: &[f64], mean_y: f64, mean_x: f64) -> (f64, f64, f64) {
    let mut syy = CompensatedSum::new();
    let mut sxx = CompensatedSum::new();
    let mut sxy = CompensatedSum::new();
    for (&yv, &xv) in y.iter().zip(x) {
        let dy = yv - mean_y;
        let dx = xv - mean_x;
        syy.add(dy * dy);
        sxx.add(dx * dx);
        sxy.add(dy * dx);
    }
    (syy.total(), sxx.total(), sxy.total())
}

/// The intraclass correlation is mathematically confined to
/// `[-1/(n-1), 1]`; floating-point round-off may nudge it a hair outside, so
/// excursions within tolerance are clamped and anything larger is an error.
fn check_intraclass(r: f64, n: f64) -> Result<f64> {
    let lo = -1.0 / (n - 1.0);
    if r < lo - 1e-9 || r > 1.0 + 1e-9 {
        return Err(Error::Degenerate(
            "intraclass correlation escaped its bounds",
        ));
    }
    Ok(r.clamp(lo, 1.0))
}

/// Intraclass correlation over within-sample pairs via the between-sample
/// identity; zero for a constant variable.
fn intraclass(v: &[f64], mean: f64, ss: f64, sample_size: usize, strata: usize) -> f64 {
    if ss <= 0.0 {
        return 0.0;
    }
    let mut t = CompensatedSum::new();
    for start in 0..strata {
        let mut dev = CompensatedSum::new();
        let mut unit = start;
        while unit < v.len() {
            dev.add(v[unit] - mean);
            unit += strata;
        }
        let d = dev.total() / sample_size as f64;
        t.add(d * d);
    }
    let n = sample_size as f64;
    (n * n * t.total() - ss) / ((n - 1.0) * ss)
}
