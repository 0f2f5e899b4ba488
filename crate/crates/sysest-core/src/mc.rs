//! Design-based Monte Carlo verification of the first-order theory.
//!
//! Each replication draws a fresh systematic start, applies the non-response
//! labeling, revisits a uniform sub-sample of the non-respondents, evaluates
//! every requested estimator on the same realized sample, and accumulates
//! deviations from the true population mean. The report pairs the empirical
//! bias and MSE of every estimator with its first-order theory values, where
//! the theory's non-response parameters (`K` and the stratum mean square) are
//! derived from the labeling actually applied — the comparison is
//! self-consistent by construction.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorSpec, HansenHurwitzSample};
// In test builds the harness links std, whose inherent float methods then
// shadow this trait; the import is only exercised in normal no_std builds.
#[cfg_attr(test, allow(unused_imports))]
use crate::num::{self, CompensatedSum, FloatExt};
use crate::popmodel::{Population, Summary};
use crate::sampling::{self, SystematicDesign};
use crate::theory::{self, Moments, NonResponse};

/// How units are labeled as non-respondents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Labeling {
    /// The last `floor(K * N)` units of the frame never respond — a fixed
    /// stratum, the hardest case for the theory because the stratum mean
    /// square can differ from the population's.
    StratumTail {
        /// Target non-response fraction.
        k_frac: f64,
    },
    /// Every unit is independently a non-respondent with probability `K`;
    /// the labels are frozen once per run from the master seed.
    Bernoulli {
        /// Non-response probability per unit.
        k_frac: f64,
    },
}

impl Labeling {
    fn k_frac(&self) -> f64 {
        match *self {
            Labeling::StratumTail { k_frac } | Labeling::Bernoulli { k_frac } => k_frac,
        }
    }

    /// Materialize per-unit labels (`true` = non-respondent).
    ///
    /// The stratum-tail rule is deterministic; the Bernoulli rule derives its
    /// label stream from `master_seed` alone, so a run and any pre-computation
    /// of theory constants see identical labels.
    pub fn materialize(&self, n_units: usize, master_seed: u64) -> Result<Vec<bool>> {
        let k = self.k_frac();
        if !k.is_finite() || !(0.0..1.0).contains(&k) {
            return Err(Error::InvalidParameter(
                "non-response fraction K must lie in [0, 1)",
            ));
        }
        let mut labels = alloc::vec![false; n_units];
        match *self {
            Labeling::StratumTail { .. } => {
                let tail = (k * n_units as f64) as usize;
                for l in labels.iter_mut().skip(n_units - tail) {
                    *l = true;
                }
            }
            Labeling::Bernoulli { .. } => {
                let mut rng = ChaCha12Rng::seed_from_u64(num::derived_seed(master_seed, u64::MAX));
                for l in labels.iter_mut() {
                    *l = rng.gen_range(0.0..1.0) < k;
                }
            }
        }
        Ok(labels)
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    /// Number of replications (at least 1).
    pub replications: u32,
    /// Master seed; every replication derives an independent stream from it.
    pub seed: u64,
    /// Inverse sub-sampling rate `L >= 1`.
    pub l_factor: f64,
    /// Non-respondent labeling rule.
    pub labeling: Labeling,
    /// Estimators to run (evaluated on the same samples).
    pub estimators: Vec<EstimatorSpec>,
}

/// Empirical versus first-order results for one estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorReport {
    /// The estimator and its constants.
    pub spec: EstimatorSpec,
    /// Mean deviation from the population mean.
    pub empirical_bias: f64,
    /// Mean squared deviation from the population mean.
    pub empirical_mse: f64,
    /// Monte Carlo standard error of the empirical MSE.
    pub mse_standard_error: f64,
    /// First-order bias at the spec's constants.
    pub theory_bias: f64,
    /// First-order MSE at the spec's constants.
    pub theory_mse: f64,
    /// `(empirical_mse - theory_mse) / mse_standard_error`.
    pub z_score: f64,
    /// Agreement band half-width (absolute, in MSE units).
    pub band: f64,
    /// Whether `|empirical_mse - theory_mse| <= band`.
    pub within_band: bool,
}

/// Full report of a Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    /// Summary of the population the run sampled from.
    pub summary: Summary,
    /// Non-response layer fed to the theory (realized `K`, declared `L`,
    /// stratum mean square from the labeled units).
    pub nonresp: NonResponse,
    /// Replications performed.
    pub replications: u32,
    /// Master seed.
    pub seed: u64,
    /// Average realized inverse rate `n2 / h2` over replications that had
    /// non-respondents; `None` if none did.
    pub realized_l: Option<f64>,
    /// True when the realized rate drifts more than 10% from the declared
    /// `L` — the integer sub-sample size cannot honour `L` exactly.
    pub l_mismatch: bool,
    /// Per-estimator results, in the order requested.
    pub estimators: Vec<EstimatorReport>,
}

/// Band rule: the sub-sampling mean is held to `3 SE`; the regression-type
/// estimators carry a first-order remainder, so they get
/// `max(3 SE, 5% of theory MSE)`.
fn band_for(spec: &EstimatorSpec, se: f64, theory_mse: f64) -> f64 {
    let three_se = 3.0 * se;
    match spec {
        EstimatorSpec::Hh => three_se,
        _ => three_se.max(0.05 * theory_mse.abs()),
    }
}

/// Run the simulation.
///
/// The population summary, the realized non-response fraction, and the
/// labeled-stratum mean square are computed here so that the theory side of
/// the report always refers to the sampling process actually simulated.
pub fn run(pop: &Population, sample_size: usize, cfg: &McConfig) -> Result<McReport> {
    if cfg.replications == 0 {
        return Err(Error::InvalidParameter("need at least one replication"));
    }
    if !cfg.l_factor.is_finite() || cfg.l_factor < 1.0 {
        return Err(Error::InvalidParameter("inverse rate L must be at least 1"));
    }
    if cfg.estimators.is_empty() {
        return Err(Error::InvalidParameter("no estimators requested"));
    }
    for spec in &cfg.estimators {
        spec.validate()?;
    }

    let summary = Summary::compute(pop, sample_size)?;
    let design = SystematicDesign::new(pop.len(), sample_size)?;
    let labels = cfg.labeling.materialize(pop.len(), cfg.seed)?;

    let labeled: Vec<f64> = pop
        .y()
        .iter()
        .zip(&labels)
        .filter_map(|(&y, &l)| l.then_some(y))
        .collect();
    let k_real = labeled.len() as f64 / pop.len() as f64;
    let s2_y2 = num::variance(&labeled).unwrap_or(0.0);
    let nonresp = NonResponse {
        k_frac: k_real,
        l_factor: cfg.l_factor,
        s2_y2,
    };
    let moments = Moments::new(&summary, nonresp)?;

    struct Acc {
        dev: CompensatedSum,
        sq: CompensatedSum,
        quart: CompensatedSum,
    }
    let mut accs: Vec<Acc> = cfg
        .estimators
        .iter()
        .map(|_| Acc {
            dev: CompensatedSum::new(),
            sq: CompensatedSum::new(),
            quart: CompensatedSum::new(),
        })
        .collect();
    let mut l_sum = CompensatedSum::new();
    let mut l_count = 0u64;

    let mean_y = summary.mean_y;
    let mean_x = summary.mean_x;
    let n = sample_size;

    for rep in 0..cfg.replications {
        let mut rng = ChaCha12Rng::seed_from_u64(num::derived_seed(cfg.seed, rep as u64));
        let start = design.draw_start(&mut rng);
        let idx = design.indices(start)?;

        let mut respondents = Vec::with_capacity(n);
        let mut nonresp_pos = Vec::new();
        let mut x = Vec::with_capacity(n);
        for (pos, &unit) in idx.iter().enumerate() {
            x.push(pop.x()[unit]);
            if labels[unit] {
                nonresp_pos.push((pos, pop.y()[unit]));
            } else {
                respondents.push((pos, pop.y()[unit]));
            }
        }
        let n2 = nonresp_pos.len();
        let h2 = sampling::subsample_size(n2, cfg.l_factor);
        let subsampled: Vec<(usize, f64)> = if n2 > 0 {
            sampling::draw_subsample(&mut rng, n2, h2)
                .into_iter()
                .map(|i| nonresp_pos[i])
                .collect()
        } else {
            Vec::new()
        };
        let sample = HansenHurwitzSample::new(n, n2, respondents, subsampled, x)?;
        if let Some(l) = sample.realized_l() {
            l_sum.add(l);
            l_count += 1;
        }

        for (spec, acc) in cfg.estimators.iter().zip(&mut accs) {
            let value = spec.evaluate(&sample, mean_x)?;
            let d = value - mean_y;
            let d2 = d * d;
            acc.dev.add(d);
            acc.sq.add(d2);
            acc.quart.add(d2 * d2);
        }
    }

    let reps = cfg.replications as f64;
    let realized_l = (l_count > 0).then(|| l_sum.total() / l_count as f64);
    let l_mismatch = realized_l
        .map(|l| ((l - cfg.l_factor) / cfg.l_factor).abs() > 0.10)
        .unwrap_or(false);

    let mut reports = Vec::with_capacity(cfg.estimators.len());
    for (spec, acc) in cfg.estimators.iter().zip(&accs) {
        let empirical_bias = acc.dev.total() / reps;
        let empirical_mse = acc.sq.total() / reps;
        // SE of the MSE estimate: sample standard deviation of the squared
        // deviations over sqrt(R).
        let var_of_sq = if cfg.replications > 1 {
            ((acc.quart.total() - acc.sq.total() * acc.sq.total() / reps) / (reps - 1.0)).max(0.0)
        } else {
            0.0
        };
        let se = (var_of_sq / reps).sqrt();
        let (theory_bias, theory_mse) = theory::spec_theory(&moments, spec)?;
        let z_score = if se > 0.0 {
            (empirical_mse - theory_mse) / se
        } else {
            0.0
        };
        let band = band_for(spec, se, theory_mse);
        reports.push(EstimatorReport {
            spec: *spec,
            empirical_bias,
            empirical_mse,
            mse_standard_error: se,
            theory_bias,
            theory_mse,
            z_score,
            band,
            within_band: (empirical_mse - theory_mse).abs() <= band,
        });
    }

    Ok(McReport {
        summary,
        nonresp,
        replications: cfg.replications,
        seed: cfg.seed,
        realized_l,
        l_mismatch,
        estimators: reports,
    })
}
