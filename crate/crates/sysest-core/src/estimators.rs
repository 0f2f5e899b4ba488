//! Point estimators of the population mean.
//!
//! All estimators act on one realized systematic sample after the
//! non-response protocol has run. The auxiliary variable is observed for the
//! whole sample; the study variable is observed for the respondents and for
//! the revisited sub-sample of non-respondents.

use alloc::vec::Vec;

use crate::error::{Error, Result};
// In test builds the harness links std, whose inherent float methods then
// shadow this trait; the import is only exercised in normal no_std builds.
#[cfg_attr(test, allow(unused_imports))]
use crate::num::{CompensatedSum, FloatExt};

/// Observed data from one sample: respondent `y` values, sub-sampled
/// non-respondent `y` values (each tagged with its position inside the
/// sample), and the full auxiliary vector.
#[derive(Debug, Clone)]
pub struct HansenHurwitzSample {
    sample_size: usize,
    n2: usize,
    /// `(position, y)` for immediate respondents, ascending by position.
    respondents: Vec<(usize, f64)>,
    /// `(position, y)` for the revisited sub-sample, ascending by position.
    subsampled: Vec<(usize, f64)>,
    /// Auxiliary values for all sample positions, in position order.
    x: Vec<f64>,
}

impl HansenHurwitzSample {
    /// Assemble a sample.
    ///
    /// `respondents` and `subsampled` carry zero-based positions within the
    /// sample (`0..sample_size`) and must each be position-sorted and
    /// disjoint; `n2` is the full non-respondent group size, so
    /// `subsampled.len() <= n2` and `respondents.len() + n2 == sample_size`.
    pub fn new(
        sample_size: usize,
        n2: usize,
        respondents: Vec<(usize, f64)>,
        subsampled: Vec<(usize, f64)>,
        x: Vec<f64>,
    ) -> Result<Self> {
        if sample_size == 0 {
            return Err(Error::InvalidParameter("sample size must be positive"));
        }
        if respondents.len() + n2 != sample_size {
            return Err(Error::InvalidParameter(
                "respondents plus non-respondents must fill the sample",
            ));
        }
        if subsampled.len() > n2 || (n2 > 0 && subsampled.is_empty()) {
            return Err(Error::InvalidParameter(
                "sub-sample size must lie in 1..=n2 when n2 > 0",
            ));
        }
        if x.len() != sample_size {
            return Err(Error::InvalidParameter(
                "auxiliary values must cover the whole sample",
            ));
        }
        let ordered = |v: &[(usize, f64)]| v.windows(2).all(|w| w[0].0 < w[1].0);
        if !ordered(&respondents) || !ordered(&subsampled) {
            return Err(Error::InvalidParameter(
                "sample positions must be strictly increasing",
            ));
        }
        if respondents
            .iter()
            .chain(&subsampled)
            .any(|&(p, v)| p >= sample_size || !v.is_finite())
        {
            return Err(Error::InvalidParameter(
                "sample positions out of range or values not finite",
            ));
        }
        let mut seen = alloc::vec![false; sample_size];
        for &(p, _) in respondents.iter().chain(&subsampled) {
            if seen[p] {
                return Err(Error::InvalidParameter(
                    "respondent and sub-sample positions must be disjoint",
                ));
            }
            seen[p] = true;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("auxiliary sample values"));
        }
        Ok(Self {
            sample_size,
            n2,
            respondents,
            subsampled,
            x,
        })
    }

    /// Sample size `n`.
    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    /// Size of the non-respondent group.
    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Size of the revisit sub-sample.
    pub fn h2(&self) -> usize {
        self.subsampled.len()
    }

    /// Realized inverse sampling rate `n2 / h2`; `None` when nobody failed
    /// to respond.
    pub fn realized_l(&self) -> Option<f64> {
        if self.n2 == 0 {
            None
        } else {
            Some(self.n2 as f64 / self.subsampled.len() as f64)
        }
    }

    /// The sub-sampling estimator `y**` of the population mean:
    /// `(n1 * ybar_1 + n2 * ybar_sub) / n`.
    ///
    /// When the sub-sample covers the whole non-respondent group (`h2 == n2`,
    /// which includes `n2 == 0`), every sampled unit contributes directly and
    /// the value is computed as one compensated pass over the sample in
    /// position order — bit-identical to the plain systematic sample mean.
    pub fn mean_y_hh(&self) -> f64 {
        let n = self.sample_size as f64;
        if self.subsampled.len() == self.n2 {
            let mut total = CompensatedSum::new();
            let mut r = self.respondents.iter().peekable();
            let mut s = self.subsampled.iter().peekable();
            while r.peek().is_some() || s.peek().is_some() {
                let take_r = match (r.peek(), s.peek()) {
                    (Some(a), Some(b)) => a.0 < b.0,
                    (Some(_), None) => true,
                    _ => false,
                };
                let &(_, v) = if take_r {
                    r.next().unwrap()
                } else {
                    s.next().unwrap()
                };
                total.add(v);
            }
            return total.total() / n;
        }
        let mut resp = CompensatedSum::new();
        for &(_, v) in &self.respondents {
            resp.add(v);
        }
        let mut sub = CompensatedSum::new();
        for &(_, v) in &self.subsampled {
            sub.add(v);
        }
        let mean_sub = sub.total() / self.subsampled.len() as f64;
        (resp.total() + self.n2 as f64 * mean_sub) / n
    }

    /// Sample mean `x*` of the auxiliary variable (observed for everyone).
    pub fn mean_x(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for &v in &self.x {
            acc.add(v);
        }
        acc.total() / self.sample_size as f64
    }

    /// Least-squares slope `s_xy / s_x^2` over the units whose `y` was
    /// actually observed (respondents plus the revisit sub-sample).
    ///
    /// The closed-form theory treats the slope as a population constant; this
    /// sample-estimated alternative is offered for sensitivity runs.
    pub fn sample_slope(&self) -> Result<f64> {
        let pairs: Vec<(f64, f64)> = self
            .respondents
            .iter()
            .chain(&self.subsampled)
            .map(|&(p, y)| (self.x[p], y))
            .collect();
        if pairs.len() < 2 {
            return Err(Error::Degenerate(
                "slope estimation needs at least two observed units",
            ));
        }
        let m = pairs.len() as f64;
        let mut sx = CompensatedSum::new();
        let mut sy = CompensatedSum::new();
        for &(x, y) in &pairs {
            sx.add(x);
            sy.add(y);
        }
        let (mx, my) = (sx.total() / m, sy.total() / m);
        let mut sxx = CompensatedSum::new();
        let mut sxy = CompensatedSum::new();
        for &(x, y) in &pairs {
            sxx.add((x - mx) * (x - mx));
            sxy.add((x - mx) * (y - my));
        }
        if sxx.total() <= 0.0 {
            return Err(Error::Degenerate(
                "observed auxiliary values carry no variance",
            ));
        }
        Ok(sxy.total() / sxx.total())
    }
}

/// A point estimator of the population mean, with its constants.
///
/// The regression-type families `t1`, `t2`, `t3` generalize the plain
/// sub-sampling mean `y**` and the difference estimator by weighting and/or
/// a multiplicative adjustment driven by the auxiliary mean:
///
/// * `t1 = w1 * y** + w2 * (X - x*)`
/// * `t2 = [w1 * y** + w2 * (X - x*)] * [X / (alpha X + (1 - alpha) x*)]^delta`
/// * `t3 = gamma * [y** + b * (X - x*)]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    /// The sub-sampling mean `y**` alone.
    Hh,
    /// Difference/regression estimator `y** + slope * (X - x*)`.
    Lr {
        /// Regression slope `b`.
        slope: f64,
    },
    /// Weighted difference estimator `t1`.
    T1 {
        /// Weight on `y**`.
        w1: f64,
        /// Weight on `X - x*`.
        w2: f64,
    },
    /// Weighted difference estimator with exponential mean-ratio adjustment
    /// `t2`.
    T2 {
        /// Weight on `y**`.
        w1: f64,
        /// Weight on `X - x*`.
        w2: f64,
        /// Mixing constant in the adjusted denominator, in `[0, 1]`.
        alpha: f64,
        /// Exponent of the mean-ratio adjustment.
        delta: f64,
    },
    /// Shrunken regression estimator `t3`.
    T3 {
        /// Shrinkage weight `gamma`.
        gamma: f64,
        /// Regression slope `b`.
        slope: f64,
    },
}

impl EstimatorSpec {
    /// Stable identifier used in reports and tables.
    pub fn id(&self) -> &'static str {
        match self {
            EstimatorSpec::Hh => "hh",
            EstimatorSpec::Lr { .. } => "lr",
            EstimatorSpec::T1 { .. } => "t1",
            EstimatorSpec::T2 { .. } => "t2",
            EstimatorSpec::T3 { .. } => "t3",
        }
    }

    /// Validate constants: everything finite, `alpha` in `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let all_finite = match *self {
            EstimatorSpec::Hh => true,
            EstimatorSpec::Lr { slope } => slope.is_finite(),
            EstimatorSpec::T1 { w1, w2 } => w1.is_finite() && w2.is_finite(),
            EstimatorSpec::T2 {
                w1,
                w2,
                alpha,
                delta,
            } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::InvalidParameter("alpha must lie in [0, 1]"));
                }
                w1.is_finite() && w2.is_finite() && alpha.is_finite() && delta.is_finite()
            }
            EstimatorSpec::T3 { gamma, slope } => gamma.is_finite() && slope.is_finite(),
        };
        if all_finite {
            Ok(())
        } else {
            Err(Error::NonFinite("estimator constants"))
        }
    }

    /// Evaluate the estimator on one sample, given the known population mean
    /// of the auxiliary variable.
    pub fn evaluate(&self, sample: &HansenHurwitzSample, mean_x_pop: f64) -> Result<f64> {
        self.validate()?;
        if !mean_x_pop.is_finite() {
            return Err(Error::NonFinite("population mean of x"));
        }
        let y_hh = sample.mean_y_hh();
        let value = match *self {
            EstimatorSpec::Hh => y_hh,
            EstimatorSpec::Lr { slope } => regression_value(y_hh, slope, mean_x_pop, sample),
            EstimatorSpec::T1 { w1, w2 } => w1 * y_hh + w2 * (mean_x_pop - sample.mean_x()),
            EstimatorSpec::T2 {
                w1,
                w2,
                alpha,
                delta,
            } => {
                let x_star = sample.mean_x();
                let denom = alpha * mean_x_pop + (1.0 - alpha) * x_star;
                if denom <= 0.0 || mean_x_pop / denom <= 0.0 {
                    return Err(Error::Degenerate(
                        "adjusted auxiliary mean must stay positive",
                    ));
                }
                let adjust = (mean_x_pop / denom).powf(delta);
                (w1 * y_hh + w2 * (mean_x_pop - x_star)) * adjust
            }
            EstimatorSpec::T3 { gamma, slope } => {
                gamma * regression_value(y_hh, slope, mean_x_pop, sample)
            }
        };
        Ok(value)
    }
}

/// Shared regression form `y** + slope * (X - x*)`; `t3` multiplies this very
/// value by `gamma`, so at `gamma == 1` the two estimators agree bit for bit.
#[inline]
fn regression_value(y_hh: f64, slope: f64, mean_x_pop: f64, sample: &HansenHurwitzSample) -> f64 {
    y_hh + slope * (mean_x_pop - sample.mean_x())
}
