//! Experiments built on [`estimate_series`]: cross-model comparisons,
//! quasi-multiplicativity ratios, box crossings and the annulus/axis sandwich.

use serde::{Deserialize, Serialize};

use crate::arms::{
    detect_arm_event_unchecked, detect_axis_event, inner_radius_minimum, Annulus, AnnulusGeometry,
    AxisEventSpec, ColourSequence, EventSpec,
};
use crate::config::{Colour, CrossDir, CrossingQuery, Sampler};
use crate::criticality::ModelSpec;
use crate::error::{Error, Result};
use crate::lattice::{Family, PlanarLattice, Radius, Rect, SQRT3};
use crate::rng::SeedSpec;
use crate::union_find::UnionFind;

use super::fit::{fit_records, ExponentFit};
use super::probe::{EventProbe, ProbeScratch};
use super::{binomial_sigma, check_trials, count_successes, estimate_series, wilson, EstimateRecord, TrialEvent};

/// Tolerance for matching parameters across models.
const PARAM_TOL: f64 = 1e-9;

/// Success count with its rate and Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci: [f64; 2],
}

impl Tally {
    pub fn new(successes: u64, trials: u64) -> Self {
        Tally {
            trials,
            successes,
            p_hat: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            ci: wilson(successes, trials),
        }
    }

    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.p_hat, self.trials)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalityReport {
    pub model_a: ModelSpec,
    pub model_b: ModelSpec,
    pub k: u32,
    pub records_a: Vec<EstimateRecord>,
    pub records_b: Vec<EstimateRecord>,
    /// `(n, p̂_A(n)/p̂_B(n))` where both estimates are positive.
    pub ratios: Vec<(u32, f64)>,
    /// `[min r(n), max r(n)]`.
    pub band: Option<[f64; 2]>,
    pub fit_a: Option<ExponentFit>,
    pub fit_b: Option<ExponentFit>,
    pub slope_difference: Option<f64>,
    pub joint_stderr: Option<f64>,
}

impl UniversalityReport {
    /// Slope difference within `z` joint standard errors.
    pub fn slopes_agree(&self, z: f64) -> Option<bool> {
        Some(self.slope_difference?.abs() <= z * self.joint_stderr?)
    }
}

fn check_radii(radii: &[u32]) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::InvalidExperiment("the n list is empty".into()));
    }
    Ok(())
}

/// Compare `A_k(n)` under the square model `(p0, 1−p0)` and a self-dual
/// triangular model with the same `p0`, on shared samples.
#[allow(clippy::too_many_arguments)]
pub fn universality_compare(
    model_square: &ModelSpec,
    model_tri: &ModelSpec,
    k: u32,
    radii: &[u32],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<UniversalityReport> {
    check_trials(trials)?;
    check_radii(radii)?;
    if model_square.family != Family::Square {
        return Err(Error::ModelMismatch("first model must be square".into()));
    }
    if model_tri.family != Family::Triangular {
        return Err(Error::ModelMismatch("second model must be triangular".into()));
    }
    let (p0, p1) = (model_square.params.get(0), model_square.params.get(1));
    if (p0 + p1 - 1.0).abs() > PARAM_TOL {
        return Err(Error::ModelMismatch(format!("square model must be (p0, 1−p0), got ({p0}, {p1})")));
    }
    model_tri.require_self_dual()?;
    if (model_tri.params.get(0) - p0).abs() > PARAM_TOL {
        return Err(Error::ModelMismatch(format!(
            "p0 differs: square {p0}, triangular {}",
            model_tri.params.get(0)
        )));
    }
    if p0 <= 0.0 {
        return Err(Error::ModelMismatch("p0 must be positive".into()));
    }
    let event = EventSpec::axis(k, radii[0])?;
    let records_a = estimate_series(model_square, &event, radii, trials, seed, workers)?;
    let records_b = estimate_series(model_tri, &event, radii, trials, seed, workers)?;
    let ratios: Vec<(u32, f64)> = records_a
        .iter()
        .zip(&records_b)
        .filter(|(a, b)| a.successes > 0 && b.successes > 0)
        .map(|(a, b)| (a.n, a.p_hat / b.p_hat))
        .collect();
    let band = (!ratios.is_empty()).then(|| {
        let lo = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
        [lo, hi]
    });
    let fit_a = fit_records(&records_a).ok();
    let fit_b = fit_records(&records_b).ok();
    let (slope_difference, joint_stderr) = match (&fit_a, &fit_b) {
        (Some(a), Some(b)) => (
            Some(a.slope - b.slope),
            Some(a.total_stderr().hypot(b.total_stderr())),
        ),
        _ => (None, None),
    };
    Ok(UniversalityReport {
        model_a: *model_square,
        model_b: *model_tri,
        k,
        records_a,
        records_b,
        ratios,
        band,
        fit_a,
        fit_b,
        slope_difference,
        joint_stderr,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiMultRow {
    pub n: u32,
    pub p_n: f64,
    pub p_2n: f64,
    /// `p̂(N, 2n) / p̂(N, n)`, i.e. the conditional rate (events are nested).
    pub ratio: Option<f64>,
    /// Wilson interval of the conditional rate.
    pub ci: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiMultReport {
    pub model: ModelSpec,
    pub sigma: ColourSequence,
    #[serde(rename = "N")]
    pub inner: u32,
    pub trials: u64,
    pub rows: Vec<QuasiMultRow>,
    /// Samples in `A(N, 2n)` but not in `A(N, n)`; zero by nesting.
    pub nesting_violations: u64,
}

impl QuasiMultReport {
    pub fn min_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::min)
    }
}

/// Appends per-sample nesting checks to a probe's outcomes.
struct Nested {
    probe: EventProbe,
    pairs: Vec<(usize, usize)>,
}

impl TrialEvent for Nested {
    type Scratch = (ProbeScratch, Vec<bool>);

    fn outcomes(&self) -> usize {
        self.probe.outcomes() + 1
    }

    fn scratch(&self) -> Self::Scratch {
        (self.probe.scratch(), vec![false; self.probe.outcomes()])
    }

    fn evaluate(&self, seed: u64, trial: u64, s: &mut Self::Scratch, out: &mut [bool]) {
        let k = self.probe.outcomes();
        self.probe.evaluate(seed, trial, &mut s.0, &mut out[..k]);
        out[k] = self.pairs.iter().any(|&(small, large)| out[large] && !out[small]);
    }
}

/// Ratios `P[A_σ(N, 2n)] / P[A_σ(N, n)]` on shared samples.
#[allow(clippy::too_many_arguments)]
pub fn quasi_mult_report(
    model: &ModelSpec,
    sigma: &ColourSequence,
    inner: u32,
    radii: &[u32],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<QuasiMultReport> {
    check_trials(trials)?;
    check_radii(radii)?;
    model.require_self_dual()?;
    let mut all: Vec<u32> = radii.iter().flat_map(|&n| [n, 2 * n]).collect();
    all.sort_unstable();
    all.dedup();
    let event = EventSpec::annulus(sigma.clone(), inner, all[0])?;
    let probe = EventProbe::new(model, &event, &all)?;
    let idx = |n: u32| all.binary_search(&n).unwrap();
    let pairs = radii.iter().map(|&n| (idx(n), idx(2 * n))).collect();
    let nested = Nested { probe, pairs };
    let counts = count_successes(&nested, trials, seed, workers)?;
    let rows = radii
        .iter()
        .map(|&n| {
            let (s1, s2) = (counts[idx(n)], counts[idx(2 * n)]);
            QuasiMultRow {
                n,
                p_n: s1 as f64 / trials as f64,
                p_2n: s2 as f64 / trials as f64,
                ratio: (s1 > 0).then(|| s2 as f64 / s1 as f64),
                ci: (s1 > 0).then(|| wilson(s2.min(s1), s1)),
            }
        })
        .collect();
    Ok(QuasiMultReport {
        model: *model,
        sigma: sigma.clone(),
        inner,
        trials,
        rows,
        nesting_violations: counts[all.len()],
    })
}

/// A crossing query evaluated on fresh samples.
struct CrossingProbe {
    sampler: Sampler,
    queries: Vec<CrossingQuery>,
}

impl CrossingProbe {
    fn new(model: &ModelSpec, window: u32, rects: &[(Rect, CrossDir, Colour)]) -> Result<Self> {
        let lat = PlanarLattice::build(model.family, window.max(3))?;
        let sampler = Sampler::for_model(model, &lat.graph)?;
        let queries = rects
            .iter()
            .map(|(r, d, c)| CrossingQuery::new(&lat, r, Some(*d), *c))
            .collect::<Result<_>>()?;
        Ok(CrossingProbe { sampler, queries })
    }
}

impl TrialEvent for CrossingProbe {
    type Scratch = Vec<UnionFind>;

    fn outcomes(&self) -> usize {
        self.queries.len()
    }

    fn scratch(&self) -> Vec<UnionFind> {
        self.queries.iter().map(|q| q.scratch()).collect()
    }

    fn evaluate(&self, seed: u64, trial: u64, s: &mut Vec<UnionFind>, out: &mut [bool]) {
        let omega = self.sampler.lazy(SeedSpec::sample(seed, trial));
        for ((q, uf), o) in self.queries.iter().zip(s.iter_mut()).zip(out.iter_mut()) {
            *o = q.eval(&omega, uf);
        }
    }
}

fn window_for(rect: &Rect) -> u32 {
    rect.linf_extent().to_f64().ceil() as u32
}

/// Probability of an open (or open*) crossing of one rectangle.
#[allow(clippy::too_many_arguments)]
pub fn crossing_probability(
    model: &ModelSpec,
    rect: &Rect,
    dir: CrossDir,
    colour: Colour,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Tally> {
    check_trials(trials)?;
    let probe = CrossingProbe::new(model, window_for(rect), &[(*rect, dir, colour)])?;
    let c = count_successes(&probe, trials, seed, workers)?;
    Ok(Tally::new(c[0], trials))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCrossingRow {
    pub n: u32,
    /// `"horizontal"` for `H_n` (long side horizontal), `"vertical"` for `V_n`.
    pub orientation: String,
    /// Lower-left corner of the translated rectangle, in lattice units.
    pub translate: [i64; 2],
    /// `"open"` or `"open*"`.
    pub colour: String,
    pub tally: Tally,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCrossingReport {
    pub model: ModelSpec,
    pub aspect: f64,
    /// Rectangles are measured in square cells on the square lattice and in
    /// real units otherwise.
    pub units: String,
    pub rows: Vec<BoxCrossingRow>,
    /// `(n, b, b*)`: running minima of open and open* crossing rates.
    pub running_min: Vec<(u32, f64, f64)>,
}

/// Open and open* crossing rates of `H_n = [0, ⌈a n⌉] × [0, n]` and its
/// transpose `V_n`, at three translates each.
pub fn box_crossing_scan(
    model: &ModelSpec,
    aspect: f64,
    radii: &[u32],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<BoxCrossingReport> {
    check_trials(trials)?;
    check_radii(radii)?;
    if !(aspect > 1.0 && aspect <= 16.0) {
        return Err(Error::InvalidExperiment(format!("aspect must lie in (1, 16], got {aspect}")));
    }
    let cells = model.family == Family::Square;
    let rect = |x0: i64, y0: i64, x1: i64, y1: i64| {
        if cells {
            Rect::square_cells(x0, y0, x1, y1)
        } else {
            Rect::real(x0, y0, x1, y1)
        }
    };
    let mut rows = Vec::new();
    let mut running = Vec::new();
    let (mut b, mut b_star) = (1.0f64, 1.0f64);
    for &n in radii {
        if n == 0 {
            return Err(Error::InvalidExperiment("n must be positive".into()));
        }
        let long = (aspect * n as f64).ceil() as i64;
        let short = n as i64;
        let mut specs = Vec::new();
        let mut labels = Vec::new();
        for (orientation, w, h, dir) in [
            ("horizontal", long, short, CrossDir::Horizontal),
            ("vertical", short, long, CrossDir::Vertical),
        ] {
            for t in [[0, 0], [-w / 2, -h / 2], [-w, -h]] {
                for (colour, c) in [("open", Colour::Open), ("open*", Colour::Closed)] {
                    // Crossings of either colour run in the long direction.
                    specs.push((rect(t[0], t[1], t[0] + w, t[1] + h), dir, c));
                    labels.push((orientation, t, colour));
                }
            }
        }
        let window = specs.iter().map(|s| window_for(&s.0)).max().unwrap_or(3);
        let probe = CrossingProbe::new(model, window, &specs)?;
        let counts = count_successes(&probe, trials, seed, workers)?;
        for ((orientation, t, colour), s) in labels.into_iter().zip(counts) {
            let tally = Tally::new(s, trials);
            if colour == "open" {
                b = b.min(tally.p_hat);
            } else {
                b_star = b_star.min(tally.p_hat);
            }
            rows.push(BoxCrossingRow {
                n,
                orientation: orientation.into(),
                translate: t,
                colour: colour.into(),
                tally,
            });
        }
        running.push((n, b, b_star));
    }
    Ok(BoxCrossingReport {
        model: *model,
        aspect,
        units: if cells { "cells" } else { "real" }.into(),
        rows,
        running_min: running,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityReport {
    pub model: ModelSpec,
    pub k: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub inner: u32,
    /// `A_k(n√3)`.
    pub axis_large: Tally,
    /// `A_σ(N, n)`.
    pub annulus: Tally,
    /// `A_k(n)`.
    pub axis: Tally,
    /// `P[A_k(n√3)] / P[A_σ(N, n)]`.
    pub ratio_lower: Option<f64>,
    /// `P[A_σ(N, n)] / P[A_k(n)]`.
    pub ratio_upper: Option<f64>,
    /// Samples in `A_k(n√3)` but not in `A_σ(N, n)`.
    pub inclusion_violations: u64,
}

impl ComparabilityReport {
    /// `P[A_k(n√3)] ≤ P[A_σ(N, n)]` up to `z` standard errors.
    pub fn first_inequality_holds(&self, z: f64) -> bool {
        let slack = z * self.axis_large.sigma().hypot(self.annulus.sigma());
        self.axis_large.p_hat <= self.annulus.p_hat + slack
    }
}

struct Sandwich {
    lat: PlanarLattice,
    geom: AnnulusGeometry,
    sampler: Sampler,
    large: AxisEventSpec,
    small: AxisEventSpec,
    sigma: ColourSequence,
    ann: Annulus,
}

impl TrialEvent for Sandwich {
    type Scratch = ();

    fn outcomes(&self) -> usize {
        4
    }

    fn scratch(&self) {}

    fn evaluate(&self, seed: u64, trial: u64, _: &mut (), out: &mut [bool]) {
        let omega = self.sampler.sample(SeedSpec::sample(seed, trial));
        let large = detect_axis_event(&self.lat, &omega, &self.large).expect("validated");
        let annulus =
            detect_arm_event_unchecked(&self.lat, &self.geom, &omega, &self.sigma, self.ann).expect("validated");
        out[0] = large;
        out[1] = annulus;
        out[2] = detect_axis_event(&self.lat, &omega, &self.small).expect("validated");
        out[3] = large && !annulus;
    }
}

/// Estimate `P[A_k(n√3)]`, `P[A_σ(N_0, n)]` and `P[A_k(n)]` on shared samples.
pub fn comparability_check(
    model: &ModelSpec,
    k: u32,
    n: u32,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<ComparabilityReport> {
    check_trials(trials)?;
    model.require_self_dual()?;
    let large = AxisEventSpec::new(k, Radius::sqrt3_times(n as i64))?;
    let small = AxisEventSpec::new(k, Radius::int(n as i64))?;
    let sigma = ColourSequence::for_axis(k)?;
    let inner = inner_radius_minimum(model.family, &sigma)?;
    let ann = Annulus::new(inner, n)?;
    let lat = PlanarLattice::build(model.family, (n as f64 * SQRT3).ceil() as u32)?;
    if k == 2 {
        crate::arms::dual_origin(&lat)?;
    }
    let sandwich = Sandwich {
        geom: AnnulusGeometry::new(&lat),
        sampler: Sampler::for_model(model, &lat.graph)?,
        lat,
        large,
        small,
        sigma,
        ann,
    };
    let c = count_successes(&sandwich, trials, seed, workers)?;
    let [axis_large, annulus, axis] = [0, 1, 2].map(|i| Tally::new(c[i], trials));
    Ok(ComparabilityReport {
        model: *model,
        k,
        n,
        inner,
        ratio_lower: (c[1] > 0).then(|| axis_large.p_hat / annulus.p_hat),
        ratio_upper: (c[2] > 0).then(|| annulus.p_hat / axis.p_hat),
        axis_large,
        annulus,
        axis,
        inclusion_violations: c[3],
    })
}
