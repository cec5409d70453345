//! Monte Carlo estimation with deterministic parallel aggregation.
//!
//! Trial `t` always draws from the stream `(seed, tag, t)`, and trials are cut
//! into fixed-size chunks before being handed to workers. Success counts are
//! sums over chunks, so they do not depend on the worker count.

pub mod experiments;
pub mod fit;
pub mod persist;
mod probe;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arms::EventSpec;
use crate::criticality::ModelSpec;
use crate::error::{Error, Result};
use crate::rng::{tag, SeedSpec};

pub use experiments::{
    box_crossing_scan, comparability_check, quasi_mult_report, universality_compare, BoxCrossingReport,
    ComparabilityReport, QuasiMultReport, UniversalityReport,
};
pub use fit::{fit_exponent, fit_records, ExponentFit};
pub use probe::{EventProbe, ProbeScratch};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Version tag written into every persisted record.
pub const SCHEMA_VERSION: u32 = 1;

/// Trials per work unit.
const CHUNK: u64 = 512;

/// Wilson score interval at 95%.
pub fn wilson(successes: u64, trials: u64) -> [f64; 2] {
    if trials == 0 {
        return [0.0, 1.0];
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    [lo, hi]
}

/// Binomial standard error of `p̂`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// A random experiment with one or more boolean outcomes per trial.
pub trait TrialEvent: Sync {
    type Scratch: Send;

    fn outcomes(&self) -> usize;

    fn scratch(&self) -> Self::Scratch;

    /// Fill `out` (length [`outcomes`](Self::outcomes)) for trial `trial`.
    fn evaluate(&self, seed: u64, trial: u64, scratch: &mut Self::Scratch, out: &mut [bool]);
}

/// Success counts per outcome over `trials` trials on `workers` threads.
pub fn count_successes<E: TrialEvent>(event: &E, trials: u64, seed: u64, workers: usize) -> Result<Vec<u64>> {
    let k = event.outcomes();
    let chunks = trials.div_ceil(CHUNK);
    let run_chunk = |c: u64| -> Vec<u64> {
        let mut scratch = event.scratch();
        let mut out = vec![false; k];
        let mut counts = vec![0u64; k];
        for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
            out.fill(false);
            event.evaluate(seed, t, &mut scratch, &mut out);
            for (n, &o) in counts.iter_mut().zip(&out) {
                *n += o as u64;
            }
        }
        counts
    };
    let add = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    if workers <= 1 {
        return Ok((0..chunks).map(run_chunk).fold(vec![0; k], add));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidExperiment(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(run_chunk)
            .reduce(|| vec![0; k], add)
    }))
}

/// One estimated probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub schema: u32,
    pub model: ModelSpec,
    pub event: EventSpec,
    pub n: u32,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci: [f64; 2],
    pub seed: SeedSpec,
}

impl EstimateRecord {
    pub fn new(model: ModelSpec, event: EventSpec, trials: u64, successes: u64, seed: SeedSpec) -> Self {
        EstimateRecord {
            schema: SCHEMA_VERSION,
            model,
            n: event.radius(),
            event,
            trials,
            successes,
            p_hat: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci: wilson(successes, trials),
            seed,
        }
    }

    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.p_hat, self.trials)
    }

    /// Check the record's internal invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidExperiment(m.to_string()));
        if self.schema != SCHEMA_VERSION {
            return bad("unsupported schema version");
        }
        if self.trials == 0 || self.successes > self.trials {
            return bad("successes must not exceed trials (≥ 1)");
        }
        if self.n != self.event.radius() {
            return bad("n does not match the event radius");
        }
        let p = self.successes as f64 / self.trials as f64;
        if (p - self.p_hat).abs() > 1e-12 {
            return bad("p_hat is not successes/trials");
        }
        let [lo, hi] = self.ci;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return bad("confidence interval outside [0,1]");
        }
        self.event.validate()?;
        self.model.params.validate()
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidExperiment("trials must be at least 1".into()));
    }
    Ok(())
}

/// Estimate `P[event]` under `model`.
pub fn estimate(model: &ModelSpec, event: &EventSpec, trials: u64, seed: u64, workers: usize) -> Result<EstimateRecord> {
    let mut v = estimate_series(model, event, &[event.radius()], trials, seed, workers)?;
    Ok(v.remove(0))
}

/// Estimate the event at several outer radii on shared samples.
pub fn estimate_series(
    model: &ModelSpec,
    event: &EventSpec,
    radii: &[u32],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<EstimateRecord>> {
    check_trials(trials)?;
    let probe = EventProbe::new(model, event, radii)?;
    let counts = count_successes(&probe, trials, seed, workers)?;
    Ok(radii
        .iter()
        .zip(counts)
        .map(|(&n, s)| EstimateRecord::new(*model, event.with_radius(n), trials, s, SeedSpec::sample(seed, 0)))
        .collect())
}

/// Synthetic events for testing the statistics.
#[derive(Clone, Copy, Debug)]
pub enum Synthetic {
    Always,
    Bernoulli(f64),
}

impl TrialEvent for Synthetic {
    type Scratch = ();

    fn outcomes(&self) -> usize {
        1
    }

    fn scratch(&self) {}

    fn evaluate(&self, seed: u64, trial: u64, _: &mut (), out: &mut [bool]) {
        out[0] = match *self {
            Synthetic::Always => true,
            Synthetic::Bernoulli(p) => SeedSpec::new(seed, tag::SYNTHETIC, trial).key().uniform(0) < p,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_basics() {
        let [lo, hi] = wilson(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let [lo, hi] = wilson(100, 100);
        assert!(lo > 0.95 && hi == 1.0);
        let [lo, hi] = wilson(50, 100);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        // Reference value: 95% Wilson interval for 50/100 is (0.4038, 0.5962).
        assert!((lo - 0.40383).abs() < 1e-4);
    }

    #[test]
    fn always_true_event() {
        let c = count_successes(&Synthetic::Always, 1000, 1, 1).unwrap();
        assert_eq!(c, vec![1000]);
        let [lo, hi] = wilson(c[0], 1000);
        assert!(lo > 0.99 && hi == 1.0);
    }

    #[test]
    fn bernoulli_rate_within_four_sigma() {
        let trials = 100_000;
        let s = count_successes(&Synthetic::Bernoulli(0.3), trials, 7, 1).unwrap()[0];
        let p = s as f64 / trials as f64;
        assert!((p - 0.3).abs() < 4.0 * binomial_sigma(0.3, trials));
    }

    #[test]
    fn wilson_coverage() {
        let mut covered = 0;
        for rep in 0..200 {
            let s = count_successes(&Synthetic::Bernoulli(0.3), 2000, 1000 + rep, 1).unwrap()[0];
            let [lo, hi] = wilson(s, 2000);
            covered += (lo <= 0.3 && 0.3 <= hi) as u32;
        }
        assert!(covered >= 186, "coverage {covered}/200");
    }

    #[test]
    fn worker_count_does_not_matter() {
        let a = count_successes(&Synthetic::Bernoulli(0.4), 20_001, 3, 1).unwrap();
        let b = count_successes(&Synthetic::Bernoulli(0.4), 20_001, 3, 8).unwrap();
        let c = count_successes(&Synthetic::Bernoulli(0.4), 20_001, 3, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn zero_trials_rejected() {
        let model = ModelSpec::square(0.5, 0.5).unwrap();
        let event = EventSpec::axis(1, 8).unwrap();
        assert!(estimate(&model, &event, 0, 1, 1).is_err());
    }

    #[test]
    fn record_invariants() {
        let model = ModelSpec::square(0.5, 0.5).unwrap();
        let event = EventSpec::axis(1, 8).unwrap();
        let r = estimate(&model, &event, 500, 1, 2).unwrap();
        r.validate().unwrap();
        assert!(r.successes <= r.trials);
        assert_eq!(r.p_hat, r.successes as f64 / 500.0);
        let mut bad = r.clone();
        bad.successes = 501;
        assert!(bad.validate().is_err());
    }
}
