//! Text and CSV rendering.
//!
//! Text output prints efficiencies at 4 decimals (the table convention) and
//! summary statistics at 6; CSV output carries full precision (shortest
//! round-trip formatting) with a fixed column order so repeated runs are
//! byte-identical.

use sysest_core::mc::McReport;
use sysest_core::popmodel::Summary;
use sysest_core::theory::TableCell;

use crate::builtin::AuditRow;

/// Flag string for a consistent audit cell.
pub const FLAG_OK: &str = "ok";
/// Flag string for a cell on the suspect list.
pub const FLAG_SUSPECT: &str = "suspect-transcription";

/// Render a population summary with 6-decimal fields.
pub fn summary_text(s: &Summary) -> String {
    let theta = s.theta();
    let cv_y = s.s2_y.sqrt() / s.mean_y;
    let cv_x = s.s2_x.sqrt() / s.mean_x;
    format!(
        "N={} n={} theta={:.6} k={}\n\
         mean_y={:.6} mean_x={:.6}\n\
         s2_y={:.6} s2_x={:.6}\n\
         rho={:.6} rho_y={:.6} rho_x={:.6}\n\
         cv_y={:.6} cv_x={:.6}\n",
        s.n_units,
        s.sample_size,
        theta,
        s.strata,
        s.mean_y,
        s.mean_x,
        s.s2_y,
        s.s2_x,
        s.rho,
        s.rho_y,
        s.rho_x,
        cv_y,
        cv_x,
    )
}

/// Render an efficiency table as aligned text (PRE columns, 4 decimals).
pub fn theory_text(cells: &[TableCell]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}\n",
        "K", "L", "lr", "t1", "t2", "t3"
    ));
    for c in cells {
        out.push_str(&format!(
            "{:>6.2} {:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10.4}\n",
            c.k_frac, c.l_factor, c.lr.1, c.t1.1, c.t2.1, c.t3.1
        ));
    }
    out
}

/// Render an efficiency table as CSV with full precision.
pub fn theory_csv(cells: &[TableCell]) -> String {
    let mut out =
        String::from("k,l,var_hh,mse_lr,pre_lr,mse_t1,pre_t1,mse_t2,pre_t2,mse_t3,pre_t3\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            c.k_frac,
            c.l_factor,
            c.var_hh,
            c.lr.0,
            c.lr.1,
            c.t1.0,
            c.t1.1,
            c.t2.0,
            c.t2.1,
            c.t3.0,
            c.t3.1
        ));
    }
    out
}

/// Render a simulation report as aligned text.
pub fn simulate_text(r: &McReport) -> String {
    let s = &r.summary;
    let mut out = format!(
        "population: N={} n={} k={}\n\
         nonresponse: K={:.6} L={:.6} s2_y2={:.6}\n\
         replications={} seed={}",
        s.n_units,
        s.sample_size,
        s.strata,
        r.nonresp.k_frac,
        r.nonresp.l_factor,
        r.nonresp.s2_y2,
        r.replications,
        r.seed
    );
    match r.realized_l {
        Some(l) => out.push_str(&format!(" realized_L={l:.6}\n")),
        None => out.push('\n'),
    }
    out.push_str(&format!(
        "{:<9} {:>14} {:>14} {:>12} {:>12} {:>14} {:>8} {:>12} {:>6}\n",
        "estimator",
        "empirical_bias",
        "empirical_mse",
        "se_mse",
        "theory_bias",
        "theory_mse",
        "z",
        "band",
        "within"
    ));
    for e in &r.estimators {
        out.push_str(&format!(
            "{:<9} {:>14.6} {:>14.6} {:>12.6} {:>12.6} {:>14.6} {:>8.3} {:>12.6} {:>6}\n",
            e.spec.id(),
            e.empirical_bias,
            e.empirical_mse,
            e.mse_standard_error,
            e.theory_bias,
            e.theory_mse,
            e.z_score,
            e.band,
            if e.within_band { "yes" } else { "no" }
        ));
    }
    out
}

/// Render a simulation report as CSV with full precision.
pub fn simulate_csv(r: &McReport) -> String {
    let mut out = String::from(
        "estimator,empirical_bias,empirical_mse,mse_standard_error,\
         theory_bias,theory_mse,z_score,band,within_band\n",
    );
    for e in &r.estimators {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            e.spec.id(),
            e.empirical_bias,
            e.empirical_mse,
            e.mse_standard_error,
            e.theory_bias,
            e.theory_mse,
            e.z_score,
            e.band,
            e.within_band
        ));
    }
    out
}

/// Render audit rows as aligned text (values at 4 decimals, deviations in
/// scientific notation).
pub fn audit_text(rows: &[AuditRow]) -> String {
    let mut out = format!(
        "{:>6} {:>6} {:<9} {:>10} {:>10} {:>12}  {}\n",
        "K", "L", "estimator", "reference", "computed", "rel-dev", "flag"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>6.2} {:>6.2} {:<9} {:>10.4} {:>10.4} {:>12.3e}  {}\n",
            r.k,
            r.l,
            r.estimator,
            r.reference,
            r.computed,
            r.rel_deviation,
            if r.suspect { FLAG_SUSPECT } else { FLAG_OK }
        ));
    }
    out
}

/// Render audit rows as CSV with full precision.
pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from("k,l,estimator,reference,computed,rel_deviation,flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.k,
            r.l,
            r.estimator,
            r.reference,
            r.computed,
            r.rel_deviation,
            if r.suspect { FLAG_SUSPECT } else { FLAG_OK }
        ));
    }
    out
}
