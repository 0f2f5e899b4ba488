//! First-order (Taylor) bias and mean-squared-error expressions, optimum
//! constants, and relative-efficiency tables.
//!
//! Notation used throughout: with population mean `Y`, auxiliary mean `X`,
//! design factor `theta = 1/n - 1/N`, coefficients of variation `C_y`, `C_x`
//! and intraclass correlations `rho_y`, `rho_x`, write
//!
//! ```text
//! C0 = C_y sqrt(1 + (n-1) rho_y)      C1 = C_x sqrt(1 + (n-1) rho_x)
//! nr = (L - 1)/n * K * S2_y2
//! ```
//!
//! where `K` is the non-response fraction, `L` the inverse sub-sampling rate
//! and `S2_y2` the mean square of `y` over the non-response stratum. Then to
//! first order
//!
//! ```text
//! Var(y**)  = Y^2 theta C0^2 + nr
//! Var(x*)   = X^2 theta C1^2
//! Cov       = X Y theta rho C0 C1
//! ```
//!
//! and every estimator MSE below is a quadratic in its constants with these
//! three moments (plus `nr`) as coefficients.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
// In test builds the harness links std, whose inherent float methods then
// shadow this trait; the import is only exercised in normal no_std builds.
#[cfg_attr(test, allow(unused_imports))]
use crate::num::FloatExt;
use crate::popmodel::Summary;

/// Non-response layer of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonResponse {
    /// Fraction of the population that fails to respond, in `[0, 1)`.
    pub k_frac: f64,
    /// Inverse sub-sampling rate `L >= 1`.
    pub l_factor: f64,
    /// Mean square of `y` over the non-response stratum.
    pub s2_y2: f64,
}

impl NonResponse {
    /// A layer with no non-response at all.
    pub fn none() -> Self {
        Self {
            k_frac: 0.0,
            l_factor: 1.0,
            s2_y2: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.k_frac.is_finite() || !(0.0..1.0).contains(&self.k_frac) {
            return Err(Error::InvalidParameter(
                "non-response fraction K must lie in [0, 1)",
            ));
        }
        if !self.l_factor.is_finite() || self.l_factor < 1.0 {
            return Err(Error::InvalidParameter("inverse rate L must be at least 1"));
        }
        if !self.s2_y2.is_finite() || self.s2_y2 < 0.0 {
            return Err(Error::InvalidParameter(
                "stratum mean square must be non-negative",
            ));
        }
        Ok(())
    }
}

/// First-order moment bundle for one population/non-response configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    theta: f64,
    c0: f64,
    c1: f64,
    rho: f64,
    mean_y: f64,
    mean_x: f64,
    nr: f64,
    sample_size: usize,
}

/// Optimum (or supplied) weights for `t1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Weights {
    /// Weight on `y**`.
    pub w1: f64,
    /// Weight on `X - x*`.
    pub w2: f64,
}

/// Shape constants of the `t2` family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T2Shape {
    /// Mixing constant `alpha` in `[0, 1]`.
    pub alpha: f64,
    /// Adjustment exponent `delta`.
    pub delta: f64,
}

impl T2Shape {
    /// The canonical ratio-type member: `alpha = 0`, `delta = 1`.
    pub fn ratio() -> Self {
        Self {
            alpha: 0.0,
            delta: 1.0,
        }
    }

    /// Effective exponent `delta (1 - alpha)` that drives the first-order
    /// expansion.
    pub fn effective_delta(&self) -> f64 {
        self.delta * (1.0 - self.alpha)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter("alpha must lie in [0, 1]"));
        }
        if !self.delta.is_finite() {
            return Err(Error::NonFinite("delta"));
        }
        Ok(())
    }
}

/// Optimum (or supplied) weights for `t2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T2Weights {
    /// Weight on the adjusted `y**` term.
    pub w1: f64,
    /// Weight on the adjusted `X - x*` term.
    pub w2: f64,
}

/// Expansion coefficients of the `t2` MSE quadratic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T2Coefficients {
    /// Coefficient of `w1^2 Y^2`.
    pub a1: f64,
    /// Coefficient of `w2^2 X^2`.
    pub a2: f64,
    /// Coefficient of `2 w1 w2 X Y`.
    pub a3: f64,
    /// Coefficient of `-2 w1 Y^2`.
    pub a4: f64,
    /// Coefficient of `-2 w2 X Y`.
    pub a5: f64,
    /// Additive non-response term attached to `w1^2`.
    pub a6: f64,
}

impl Moments {
    /// Derive the moment bundle from a population summary and a non-response
    /// layer.
    pub fn new(summary: &Summary, nonresp: NonResponse) -> Result<Self> {
        nonresp.validate()?;
        let n = summary.sample_size as f64;
        let cv_y = summary.cv_y()?;
        let cv_x = summary.cv_x()?;
        let fy = 1.0 + (n - 1.0) * summary.rho_y;
        let fx = 1.0 + (n - 1.0) * summary.rho_x;
        if fy < 0.0 || fx < 0.0 {
            return Err(Error::Degenerate(
                "intraclass factor 1 + (n-1) rho is negative",
            ));
        }
        let nr = (nonresp.l_factor - 1.0) / n * nonresp.k_frac * nonresp.s2_y2;
        Ok(Self {
            theta: summary.theta(),
            c0: cv_y * fy.sqrt(),
            c1: cv_x * fx.sqrt(),
            rho: summary.rho,
            mean_y: summary.mean_y,
            mean_x: summary.mean_x,
            nr,
            sample_size: summary.sample_size,
        })
    }

    /// Population mean of `y`.
    pub fn mean_y(&self) -> f64 {
        self.mean_y
    }

    /// Population mean of `x`.
    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }

    /// The systematic coefficient `C0 = C_y sqrt(1 + (n-1) rho_y)`.
    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// The systematic coefficient `C1 = C_x sqrt(1 + (n-1) rho_x)`.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Additive non-response variance term `nr`.
    pub fn nr(&self) -> f64 {
        self.nr
    }

    /// First-order variance of the sub-sampling mean `y**`.
    pub fn var_hh(&self) -> f64 {
        let y = self.mean_y;
        y * y * self.theta * self.c0 * self.c0 + self.nr
    }

    /// First-order variance of the auxiliary sample mean `x*`.
    pub fn var_mean_x(&self) -> f64 {
        let x = self.mean_x;
        x * x * self.theta * self.c1 * self.c1
    }

    /// First-order covariance of `y**` and `x*`.
    pub fn cov_hh_x(&self) -> f64 {
        self.mean_x * self.mean_y * self.theta * self.rho * self.c0 * self.c1
    }

    /// Large-sample regression slope `beta = rho Y C0 / (X C1)`.
    pub fn beta(&self) -> Result<f64> {
        if self.c1 == 0.0 || self.mean_x == 0.0 {
            return Err(Error::Degenerate("auxiliary variable carries no signal"));
        }
        Ok(self.rho * self.mean_y * self.c0 / (self.mean_x * self.c1))
    }

    /// First-order MSE of the difference estimator with slope `b`.
    pub fn mse_lr(&self, slope: f64) -> f64 {
        self.var_hh() - 2.0 * slope * self.cov_hh_x() + slope * slope * self.var_mean_x()
    }

    /// `q = MSE_lr(beta) / Y^2`, the relative minimum regression MSE.
    pub fn q(&self) -> Result<f64> {
        let b = self.beta()?;
        Ok(self.mse_lr(b) / (self.mean_y * self.mean_y))
    }

    // ----- t1 ------------------------------------------------------------

    /// MSE of `t1` at arbitrary weights.
    pub fn t1_mse(&self, w: T1Weights) -> f64 {
        let y2 = self.mean_y * self.mean_y;
        let th = self.theta;
        y2 + w.w1 * w.w1 * y2 * (1.0 + th * self.c0 * self.c0)
            + w.w2 * w.w2 * self.mean_x * self.mean_x * th * self.c1 * self.c1
            - 2.0 * w.w1 * w.w2 * self.mean_x * self.mean_y * th * self.rho * self.c0 * self.c1
            - 2.0 * w.w1 * y2
            + self.nr * w.w1 * w.w1
    }

    /// Exact first-order bias of `t1`: `(w1 - 1) Y`.
    pub fn t1_bias(&self, w: T1Weights) -> f64 {
        (w.w1 - 1.0) * self.mean_y
    }

    /// Optimum `t1` weights from the normal equations of the MSE quadratic.
    pub fn t1_optimum(&self) -> Result<T1Weights> {
        let y2 = self.mean_y * self.mean_y;
        let a11 = y2 * (1.0 + self.theta * self.c0 * self.c0 + self.nr / y2);
        let a12 = -self.mean_x * self.mean_y * self.theta * self.rho * self.c0 * self.c1;
        let a22 = self.mean_x * self.mean_x * self.theta * self.c1 * self.c1;
        let (w1, w2) = solve_symmetric_2x2(a11, a12, a22, y2, 0.0)?;
        Ok(T1Weights { w1, w2 })
    }

    /// Minimum attainable `t1` MSE: `Y^2 q / (1 + q)`.
    pub fn t1_min_mse(&self) -> Result<f64> {
        let q = self.q()?;
        Ok(self.mean_y * self.mean_y * q / (1.0 + q))
    }

    // ----- t2 ------------------------------------------------------------

    /// Expansion coefficients of the `t2` MSE at a given shape, evaluated at
    /// the effective exponent `delta (1 - alpha)`.
    pub fn t2_coefficients(&self, shape: T2Shape) -> Result<T2Coefficients> {
        shape.validate()?;
        let d = shape.effective_delta();
        let th = self.theta;
        let c0 = self.c0;
        let c1 = self.c1;
        let rc = self.rho * c0 * c1;
        Ok(T2Coefficients {
            a1: 1.0 + th * (c0 * c0 + (2.0 * d * d + d) * c1 * c1 - 4.0 * d * rc),
            a2: th * c1 * c1,
            a3: th * (2.0 * d * c1 * c1 - rc),
            a4: 1.0 - th * (d * rc - d * (d + 1.0) / 2.0 * c1 * c1),
            a5: d * th * c1 * c1,
            a6: self.nr,
        })
    }

    /// MSE of `t2` at arbitrary weights.
    pub fn t2_mse(&self, shape: T2Shape, w: T2Weights) -> Result<f64> {
        let a = self.t2_coefficients(shape)?;
        let y = self.mean_y;
        let x = self.mean_x;
        Ok(y * y + w.w1 * w.w1 * y * y * a.a1
            + w.w2 * w.w2 * x * x * a.a2
            + 2.0 * w.w1 * w.w2 * x * y * a.a3
            - 2.0 * w.w1 * y * y * a.a4
            - 2.0 * w.w2 * x * y * a.a5
            + w.w1 * w.w1 * a.a6)
    }

    /// First-order bias of `t2`: `Y (w1 A4 - 1) + w2 X A5`.
    pub fn t2_bias(&self, shape: T2Shape, w: T2Weights) -> Result<f64> {
        let a = self.t2_coefficients(shape)?;
        Ok(self.mean_y * (w.w1 * a.a4 - 1.0) + w.w2 * self.mean_x * a.a5)
    }

    /// Optimum `t2` weights.
    pub fn t2_optimum(&self, shape: T2Shape) -> Result<T2Weights> {
        let a = self.t2_coefficients(shape)?;
        let y = self.mean_y;
        let x = self.mean_x;
        let y2 = y * y;
        let (w1, w2) = solve_symmetric_2x2(
            y2 * a.a1 + a.a6,
            x * y * a.a3,
            x * x * a.a2,
            y2 * a.a4,
            x * y * a.a5,
        )?;
        Ok(T2Weights { w1, w2 })
    }

    /// Minimum `t2` MSE, via `Y^2 - (w1 Y^2 A4 + w2 X Y A5)` at the optimum.
    pub fn t2_min_mse(&self, shape: T2Shape) -> Result<f64> {
        let a = self.t2_coefficients(shape)?;
        let w = self.t2_optimum(shape)?;
        let y = self.mean_y;
        Ok(y * y - (w.w1 * y * y * a.a4 + w.w2 * self.mean_x * y * a.a5))
    }

    // ----- t3 ------------------------------------------------------------

    /// The `gamma`-free core of the `t3` MSE at slope `b`:
    /// `Y^2 (1 + theta C0^2) + b^2 Var(x*) - 2 b Cov`.
    fn t3_core(&self, slope: f64) -> f64 {
        let y2 = self.mean_y * self.mean_y;
        y2 * (1.0 + self.theta * self.c0 * self.c0) + slope * slope * self.var_mean_x()
            - 2.0 * slope * self.cov_hh_x()
    }

    /// MSE of `t3` at arbitrary `gamma` and slope.
    pub fn t3_mse(&self, gamma: f64, slope: f64) -> f64 {
        let y2 = self.mean_y * self.mean_y;
        gamma * gamma * self.t3_core(slope) + y2 * (1.0 - 2.0 * gamma)
            + self.nr * gamma * gamma
    }

    /// First-order bias of `t3`: `(gamma - 1) Y`.
    pub fn t3_bias(&self, gamma: f64) -> f64 {
        (gamma - 1.0) * self.mean_y
    }

    /// Optimum shrinkage `gamma* = Y^2 / (core + nr)` for a given slope.
    pub fn t3_optimum_gamma(&self, slope: f64) -> Result<f64> {
        let denom = self.t3_core(slope) + self.nr;
        if denom <= 0.0 {
            return Err(Error::Degenerate("t3 shrinkage denominator not positive"));
        }
        Ok(self.mean_y * self.mean_y / denom)
    }

    /// Minimum `t3` MSE at a given slope: `Y^2 (1 - gamma*)`.
    pub fn t3_min_mse(&self, slope: f64) -> Result<f64> {
        let g = self.t3_optimum_gamma(slope)?;
        Ok(self.mean_y * self.mean_y * (1.0 - g))
    }
}

/// Solve `[[a11, a12], [a12, a22]] w = (b1, b2)` where the matrix is half the
/// Hessian of a quadratic being minimized. The stationary point is a minimum
/// only when that matrix is positive definite; indefinite systems (possible
/// for extreme exponent shapes) have no finite minimum, so they are rejected
/// rather than solved.
fn solve_symmetric_2x2(a11: f64, a12: f64, a22: f64, b1: f64, b2: f64) -> Result<(f64, f64)> {
    let det = a11 * a22 - a12 * a12;
    let scale = a11.abs().max(a22.abs()).max(a12.abs());
    if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
        return Err(Error::Degenerate("weight system is singular"));
    }
    if a11 <= 0.0 || det < 0.0 {
        return Err(Error::Degenerate("weight quadratic has no minimum"));
    }
    Ok(((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det))
}

/// Percentage relative efficiency of a candidate against the sub-sampling
/// mean: `100 Var(y**) / MSE(candidate)`.
pub fn pre(var_hh: f64, mse_candidate: f64) -> Result<f64> {
    if mse_candidate <= 0.0 {
        return Err(Error::Degenerate("candidate MSE must be positive"));
    }
    Ok(100.0 * var_hh / mse_candidate)
}

// ---------------------------------------------------------------------------
// Efficiency tables over a (K, L) grid
// ---------------------------------------------------------------------------

/// How estimator constants are chosen when tabulating a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMode {
    /// Recompute the optimum constants at every grid cell.
    PerCell,
    /// Fix the constants at the optimum of one reference cell and reuse them
    /// across the whole grid.
    Reference {
        /// Reference non-response fraction.
        k_frac: f64,
        /// Reference inverse rate.
        l_factor: f64,
    },
}

/// One grid cell of an efficiency table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    /// Non-response fraction of the cell.
    pub k_frac: f64,
    /// Inverse sub-sampling rate of the cell.
    pub l_factor: f64,
    /// Variance of `y**` at the cell.
    pub var_hh: f64,
    /// MSE and PRE of the difference estimator.
    pub lr: (f64, f64),
    /// MSE and PRE of `t1`.
    pub t1: (f64, f64),
    /// MSE and PRE of `t2`.
    pub t2: (f64, f64),
    /// MSE and PRE of `t3`.
    pub t3: (f64, f64),
}

/// Constants actually applied to a table (one set per estimator family).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableConstants {
    /// Slope of the difference estimator (also used inside `t3`).
    pub slope: f64,
    /// `t1` weights.
    pub t1: T1Weights,
    /// `t2` weights.
    pub t2: T2Weights,
    /// `t3` shrinkage.
    pub gamma: f64,
}

/// Compute an efficiency table over the Cartesian grid `ks x ls`.
///
/// `ratio_s2` maps the population mean square to the non-response stratum
/// mean square: `S2_y2 = ratio_s2 * S2_y`.
pub fn pre_table(
    summary: &Summary,
    ratio_s2: f64,
    ks: &[f64],
    ls: &[f64],
    shape: T2Shape,
    mode: WeightMode,
) -> Result<Vec<TableCell>> {
    if !(ratio_s2.is_finite() && ratio_s2 >= 0.0) {
        return Err(Error::InvalidParameter(
            "stratum mean-square ratio must be non-negative",
        ));
    }
    let nonresp_at = |k: f64, l: f64| NonResponse {
        k_frac: k,
        l_factor: l,
        s2_y2: ratio_s2 * summary.s2_y,
    };
    let fixed = match mode {
        WeightMode::PerCell => None,
        WeightMode::Reference { k_frac, l_factor } => {
            let m = Moments::new(summary, nonresp_at(k_frac, l_factor))?;
            Some(constants_at(&m, shape)?)
        }
    };
    let mut cells = Vec::with_capacity(ks.len() * ls.len());
    for &k in ks {
        for &l in ls {
            let m = Moments::new(summary, nonresp_at(k, l))?;
            let c = match fixed {
                Some(c) => c,
                None => constants_at(&m, shape)?,
            };
            let var_hh = m.var_hh();
            let mse_lr = m.mse_lr(c.slope);
            let mse_t1 = m.t1_mse(c.t1);
            let mse_t2 = m.t2_mse(shape, c.t2)?;
            let mse_t3 = m.t3_mse(c.gamma, c.slope);
            cells.push(TableCell {
                k_frac: k,
                l_factor: l,
                var_hh,
                lr: (mse_lr, pre(var_hh, mse_lr)?),
                t1: (mse_t1, pre(var_hh, mse_t1)?),
                t2: (mse_t2, pre(var_hh, mse_t2)?),
                t3: (mse_t3, pre(var_hh, mse_t3)?),
            });
        }
    }
    Ok(cells)
}

/// Solved optimum constants next to the values of the closed-form
/// expressions given alongside the estimators, for auditing.
///
/// The solved values always come from the exact stationarity systems. The
/// closed forms as tabulated in the reference material mostly agree, but two
/// of them are defective: the `t1` auxiliary-weight denominator is bracketed
/// ambiguously (its literal reading drifts from the optimum once the
/// non-response term is present), and the shrinkage denominator carries a
/// sign defect on its variance term. Both literal values are reported here so
/// the discrepancy stays visible instead of being silently corrected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConstants {
    /// Constants from solving the exact stationarity systems.
    pub solved: TableConstants,
    /// `t1` weights from the literal closed forms.
    pub t1_tabulated: T1Weights,
    /// `t2` weights from the literal closed forms (these agree with the
    /// solver up to round-off).
    pub t2_tabulated: T2Weights,
    /// Shrinkage from the literal closed form (sign-defective denominator).
    pub gamma_tabulated: f64,
}

/// Evaluate both the solved optimum constants and the literal closed forms.
pub fn audit_constants(m: &Moments, shape: T2Shape) -> Result<AuditConstants> {
    let solved = constants_at(m, shape)?;
    let y2 = m.mean_y * m.mean_y;
    let th = m.theta;
    let c0 = m.c0;
    let c1 = m.c1;
    let nr_rel = m.nr / y2;
    let base = (1.0 - m.rho * m.rho) * th * c0 * c0;

    // t1: w1 = 1 / (1 + (1 - rho^2) theta C0^2 + nr / Y^2); the w2 closed
    // form, read literally, adds nr / Y^2 outside the X C1 [...] product.
    let t1_w1 = 1.0 / (1.0 + base + nr_rel);
    let t1_w2 = m.rho * c0 * m.mean_y / (m.mean_x * c1 * (1.0 + base) + nr_rel);

    // t2: ratio-of-determinant forms, algebraically identical to the solver.
    let a = m.t2_coefficients(shape)?;
    let den = a.a1 * a.a2 - a.a3 * a.a3 + a.a2 * a.a6 / y2;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Degenerate("weight system is singular"));
    }
    let t2_w1 = (a.a2 * a.a4 - a.a3 * a.a5) / den;
    let t2_w2 =
        (m.mean_y / m.mean_x) * (a.a1 * a.a5 - a.a3 * a.a4 + a.a5 * a.a6 / y2) / den;

    // gamma: the literal denominator has Y^2 (1 - theta C0^2) where the
    // stationarity condition requires Y^2 (1 + theta C0^2).
    let b = solved.slope;
    let gamma_den = y2 * (1.0 - th * c0 * c0) + b * b * m.var_mean_x()
        - 2.0 * b * m.cov_hh_x()
        + m.nr;
    if gamma_den == 0.0 || !gamma_den.is_finite() {
        return Err(Error::Degenerate("t3 shrinkage denominator not positive"));
    }

    Ok(AuditConstants {
        solved,
        t1_tabulated: T1Weights {
            w1: t1_w1,
            w2: t1_w2,
        },
        t2_tabulated: T2Weights {
            w1: t2_w1,
            w2: t2_w2,
        },
        gamma_tabulated: y2 / gamma_den,
    })
}

/// Optimum constants of every estimator family at one moment bundle.
pub fn constants_at(m: &Moments, shape: T2Shape) -> Result<TableConstants> {
    let slope = m.beta()?;
    Ok(TableConstants {
        slope,
        t1: m.t1_optimum()?,
        t2: m.t2_optimum(shape)?,
        gamma: m.t3_optimum_gamma(slope)?,
    })
}

/// Build the estimator specs that realize a set of table constants.
pub fn specs_from_constants(c: &TableConstants, shape: T2Shape) -> Vec<EstimatorSpec> {
    alloc::vec![
        EstimatorSpec::Hh,
        EstimatorSpec::Lr { slope: c.slope },
        EstimatorSpec::T1 {
            w1: c.t1.w1,
            w2: c.t1.w2,
        },
        EstimatorSpec::T2 {
            w1: c.t2.w1,
            w2: c.t2.w2,
            alpha: shape.alpha,
            delta: shape.delta,
        },
        EstimatorSpec::T3 {
            gamma: c.gamma,
            slope: c.slope,
        },
    ]
}

/// First-order `(bias, mse)` of an estimator spec under a moment bundle.
///
/// This evaluates the spec's own constants (optimum or not), which is what a
/// simulator must compare against.
pub fn spec_theory(m: &Moments, spec: &EstimatorSpec) -> Result<(f64, f64)> {
    spec.validate()?;
    match *spec {
        EstimatorSpec::Hh => Ok((0.0, m.var_hh())),
        EstimatorSpec::Lr { slope } => Ok((0.0, m.mse_lr(slope))),
        EstimatorSpec::T1 { w1, w2 } => {
            let w = T1Weights { w1, w2 };
            Ok((m.t1_bias(w), m.t1_mse(w)))
        }
        EstimatorSpec::T2 {
            w1,
            w2,
            alpha,
            delta,
        } => {
            let shape = T2Shape { alpha, delta };
            let w = T2Weights { w1, w2 };
            Ok((m.t2_bias(shape, w)?, m.t2_mse(shape, w)?))
        }
        EstimatorSpec::T3 { gamma, slope } => Ok((m.t3_bias(gamma), m.t3_mse(gamma, slope))),
    }
}
