//! Sweep experiments shared by the sweep tests and the acceptance suite.

use bondperc::arms::{detect_axis_event, AxisEventSpec};
use bondperc::config::{connected, reaches_with, DualStates, Marks, Sampler};
use bondperc::criticality::ModelSpec;
use bondperc::lattice::{build_mixed, MixedLatticeSpec, PlanarLattice, Radius, Rect};
use bondperc::rng::{tag, SeedSpec};
use bondperc::star_triangle::sweep::SweepScratch;
use bondperc::star_triangle::{Direction, SweepPlan};

pub fn mixed(m: u32, r: u32) -> PlanarLattice {
    PlanarLattice::new(build_mixed(MixedLatticeSpec { m, window_radius: r }).unwrap()).unwrap()
}

/// `{x0 ↔ x1 in B_4, x0 ↔ ∂B_4, y0 ↔* ∂B_4, A_2(4)}`.
pub fn four_events(lat: &PlanarLattice, omega: &[bool]) -> [bool; 4] {
    let g = &lat.graph;
    let n = Radius::int(4);
    let (x0, x1) = (g.axis_vertex(0).unwrap(), g.axis_vertex(1).unwrap());
    let y0 = lat.dual_axis_vertex(0).unwrap();
    let mut stack = Vec::new();
    let link = connected(g, omega, x0, x1, &Rect::centered(n)).unwrap();
    let reach = reaches_with(g, omega, x0, n, &mut Marks::new(g.vertex_count()), &mut stack);
    let dual = DualStates::new(omega, &lat.pairing);
    let dual_reach = reaches_with(lat.dual(), &dual, y0, n, &mut Marks::new(lat.dual().vertex_count()), &mut stack);
    let a2 = detect_axis_event(lat, omega, &AxisEventSpec::unchecked(2, n).unwrap()).unwrap();
    [link, reach, dual_reach, a2]
}

/// Event counts after sweeping up from `𝕃^m` (window `r`) and by direct
/// sampling on `𝕃^{m+1}` (window `r − 2`), on independent samples.
pub fn transport_counts(m: u32, r: u32, p: [f64; 3], trials: u64, seed: u64) -> ([u64; 4], [u64; 4]) {
    let input = mixed(m, r);
    let plan = SweepPlan::new(&input.graph, Direction::Up).unwrap();
    let swept = PlanarLattice::new(plan.output().clone()).unwrap();
    let direct = mixed(m + 1, r - 2);
    let in_sampler = Sampler::for_model(&ModelSpec::mixed(m, p).unwrap(), &input.graph).unwrap();
    let direct_sampler = Sampler::for_model(&ModelSpec::mixed(m + 1, p).unwrap(), &direct.graph).unwrap();
    let (mut a, mut b) = ([0u64; 4], [0u64; 4]);
    let (mut omega, mut out, mut scratch) = (Vec::new(), Vec::new(), SweepScratch::default());
    for t in 0..trials {
        in_sampler.sample_into(SeedSpec::sample(seed, t), &mut omega);
        plan.apply_into(&omega, &p, SeedSpec::new(seed, tag::SWEEP, t), &mut scratch, &mut out);
        for (c, hit) in a.iter_mut().zip(four_events(&swept, &out)) {
            *c += hit as u64;
        }
        direct_sampler.sample_into(SeedSpec::sample(seed ^ 0x5eed, t), &mut omega);
        for (c, hit) in b.iter_mut().zip(four_events(&direct, &omega)) {
            *c += hit as u64;
        }
    }
    (a, b)
}

/// Two-sample z statistic for proportions.
pub fn z_score(a: u64, b: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let (pa, pb) = (a as f64 / n, b as f64 / n);
    let pool = (pa + pb) / 2.0;
    let se = (2.0 * pool * (1.0 - pool) / n).sqrt();
    if se == 0.0 {
        0.0
    } else {
        (pa - pb) / se
    }
}

/// Outcome of a containment run.
#[derive(Clone, Copy, Debug, Default)]
pub struct Containment {
    pub conditioned: u64,
    pub violations: u64,
    pub trials: u64,
}

/// Sample `𝕃^m` until `want` configurations lie in `A_k(n)` (or `max_trials`
/// run out), sweep each one and check that the result lies in `A_k(n − 1)`.
#[allow(clippy::too_many_arguments)]
pub fn containment(m: u32, direction: Direction, k: u32, n: u32, p: [f64; 3], want: u64, max_trials: u64, seed: u64) -> Containment {
    let input = mixed(m, n + 2);
    let plan = SweepPlan::new(&input.graph, direction).unwrap();
    let swept = PlanarLattice::new(plan.output().clone()).unwrap();
    let sampler = Sampler::for_model(&ModelSpec::mixed(m, p).unwrap(), &input.graph).unwrap();
    let before = AxisEventSpec::int(k, n).unwrap();
    let after = AxisEventSpec::unchecked(k, Radius::int(n as i64 - 1)).unwrap();
    let mut r = Containment::default();
    let (mut omega, mut out, mut scratch) = (Vec::new(), Vec::new(), SweepScratch::default());
    while r.conditioned < want && r.trials < max_trials {
        let t = r.trials;
        r.trials += 1;
        sampler.sample_into(SeedSpec::sample(seed, t), &mut omega);
        if !detect_axis_event(&input, &omega, &before).unwrap() {
            continue;
        }
        r.conditioned += 1;
        plan.apply_into(&omega, &p, SeedSpec::new(seed, tag::SWEEP, t), &mut scratch, &mut out);
        if !detect_axis_event(&swept, &out, &after).unwrap() {
            r.violations += 1;
        }
    }
    r
}

/// Randomised checks of path transport: `(pairs checked, violations)`.
///
/// Each trial draws `m ∈ {0, …, 3}`, a direction, a self-dual triple, a
/// configuration, a rectangle around part of the axis and the axis pairs in it.
pub fn path_transport(trials: u64, seed: u64) -> (u64, u64) {
    use bondperc::criticality::solve_self_dual_third;
    use bondperc::rng::Stream;
    use bondperc::star_triangle::transport_check;

    let r = 8;
    let plans: Vec<(u32, PlanarLattice, Vec<SweepPlan>)> = (0..4)
        .map(|m| {
            let lat = mixed(m, r);
            let mut plans = vec![SweepPlan::new(&lat.graph, Direction::Up).unwrap()];
            if m > 0 {
                plans.push(SweepPlan::new(&lat.graph, Direction::Down).unwrap());
            }
            (m, lat, plans)
        })
        .collect();
    let mut rng = Stream::new(SeedSpec::new(seed, tag::REGION, 0));
    let (mut checked, mut violations) = (0, 0);
    let (mut omega, mut out, mut scratch) = (Vec::new(), Vec::new(), SweepScratch::default());
    for t in 0..trials {
        let (m, lat, ps) = &plans[rng.below(4) as usize];
        let plan = &ps[rng.below(ps.len() as u64) as usize];
        let p0 = 0.05 + 0.9 * rng.next_f64();
        let p1 = (1.0 - p0) * (0.05 + 0.9 * rng.next_f64());
        let Ok(p2) = solve_self_dual_third(p0, p1) else { continue };
        let p = [p0, p1, p2];
        let sampler = Sampler::for_model(&ModelSpec::mixed(*m, p).unwrap(), &lat.graph).unwrap();
        sampler.sample_into(SeedSpec::sample(seed, t), &mut omega);
        plan.apply_into(&omega, &p, SeedSpec::new(seed, tag::SWEEP, t), &mut scratch, &mut out);
        let x0 = -(1 + rng.below(4) as i64);
        let x1 = 1 + rng.below(4) as i64;
        let y0 = -(rng.below(4) as i64);
        let y1 = rng.below(4) as i64;
        let region = Rect::real(x0, y0, x1, y1);
        // Axis points x_i = (i√3, 0) inside [x0, x1].
        let axis: Vec<i32> = (-3..=3).filter(|&i| (i as f64 * 3f64.sqrt()) >= x0 as f64 && (i as f64 * 3f64.sqrt()) <= x1 as f64).collect();
        let mut pairs = Vec::new();
        for (a, &i) in axis.iter().enumerate() {
            for &j in &axis[a + 1..] {
                pairs.push((i, j));
            }
        }
        let report = transport_check(&lat.graph, &omega, plan.output(), &out, &region, &pairs).unwrap();
        checked += report.pairs_checked as u64;
        violations += report.violations.len() as u64;
    }
    (checked, violations)
}
