//! Log–log regression of probability series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::EstimateRecord;

/// Points with fewer successes are dropped before fitting.
pub const MIN_SUCCESSES: u64 = 20;

/// Ordinary least squares of `log p̂` on `log n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    /// The points used, as `(n, p̂)`.
    pub series: Vec<(f64, f64)>,
    /// Radii dropped for having too few successes or `p̂ = 0`.
    pub dropped: Vec<f64>,
    /// Estimate of minus the exponent.
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the regression residuals.
    pub stderr: f64,
    /// Standard error of the slope propagated from binomial noise in `p̂`
    /// (zero when fitting bare numbers).
    pub stat_stderr: f64,
    pub r2: f64,
}

impl ExponentFit {
    /// The larger of the two slope errors.
    pub fn total_stderr(&self) -> f64 {
        self.stderr.max(self.stat_stderr)
    }
}

fn ols(series: &[(f64, f64)], var_log_p: Option<&[f64]>) -> Result<ExponentFit> {
    let mut used = Vec::new();
    let mut vars = Vec::new();
    let mut dropped = Vec::new();
    for (i, &(n, p)) in series.iter().enumerate() {
        if n > 0.0 && p > 0.0 && p.is_finite() {
            used.push((n, p));
            vars.push(var_log_p.map_or(0.0, |v| v[i]));
        } else {
            dropped.push(n);
        }
    }
    if used.len() < 3 {
        return Err(Error::TooFewPoints { usable: used.len() });
    }
    let k = used.len() as f64;
    let xs: Vec<f64> = used.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&(_, p)| p.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::TooFewPoints { usable: 1 });
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    let stat_var: f64 = xs.iter().zip(&vars).map(|(x, v)| (x - mx).powi(2) * v).sum::<f64>() / (sxx * sxx);
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ssr / syy };
    Ok(ExponentFit {
        series: used,
        dropped,
        slope,
        intercept,
        stderr,
        stat_stderr: stat_var.sqrt(),
        r2,
    })
}

/// Fit `(n, p̂)` pairs; needs at least three points with `p̂ > 0`.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<ExponentFit> {
    ols(series, None)
}

/// Fit estimate records, dropping points with fewer than [`MIN_SUCCESSES`] successes.
pub fn fit_records(records: &[EstimateRecord]) -> Result<ExponentFit> {
    let mut series = Vec::new();
    let mut vars = Vec::new();
    let mut dropped = Vec::new();
    for r in records {
        if r.successes < MIN_SUCCESSES {
            dropped.push(r.n as f64);
            continue;
        }
        series.push((r.n as f64, r.p_hat));
        // Delta method: Var(log p̂) ≈ (1 − p)/(T p).
        vars.push((1.0 - r.p_hat) / (r.trials as f64 * r.p_hat));
    }
    let mut fit = ols(&series, Some(&vars))?;
    fit.dropped.extend(dropped);
    fit.dropped.sort_by(f64::total_cmp);
    Ok(fit)
}
