//! Execution of validated plans. Every command returns a printable summary
//! and, when an output path was given, the bytes of its data file.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use bondperc::config::dump::{graph_hash, write_config};
use bondperc::config::Sampler;
use bondperc::criticality::{
    kappa_triangle, kappa_triangle_exact, parse_decimal, rat_to_f64, solve_self_dual_third, solve_self_dual_third_exact,
    ModelSpec,
};
use bondperc::estimator::persist::{write_csv, write_csv_matrix, write_header, write_jsonl};
use bondperc::estimator::{box_crossing_scan, estimate_series, quasi_mult_report, universality_compare};
use bondperc::lattice::{build_lattice, build_mixed, EmbeddedGraph, Family, MixedLatticeSpec, Rect};
use bondperc::rng::{tag, SeedSpec};
use bondperc::star_triangle::{transport_check, verify_coupling, verify_coupling_exact, Direction, SweepPlan};
use serde::Serialize;

use crate::config::{Entry, Format, Output, Plan};
use crate::error::{CliError, Result};

/// What a command produced.
pub struct Outcome {
    pub summary: String,
    pub data: Option<Vec<u8>>,
}

/// JSON data files carry the tool version and, unless suppressed, a timestamp.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: String,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<u64>,
    report: &'a T,
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn json_file<T: Serialize>(command: &str, report: &T, out: &Output) -> Result<Vec<u8>> {
    let env = Envelope {
        tool: format!("bondperc {}", env!("CARGO_PKG_VERSION")),
        command,
        generated_at: out.timestamp.then(unix_time),
        report,
    };
    let mut v = serde_json::to_vec_pretty(&env).map_err(|e| bondperc::Error::InvalidExperiment(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

fn header(description: &str, out: &Output) -> Result<Vec<u8>> {
    let mut v = Vec::new();
    write_header(&mut v, description, out.timestamp)?;
    Ok(v)
}

fn csv_err(e: csv::Error) -> CliError {
    bondperc::Error::InvalidExperiment(format!("csv: {e}")).into()
}

fn graph(family: Family, window: u32) -> Result<EmbeddedGraph> {
    Ok(match family {
        Family::Mixed(m) => build_mixed(MixedLatticeSpec { m, window_radius: window })?,
        f => build_lattice(f, window)?,
    })
}

pub fn execute(command: &str, plan: &Plan, out: &Output) -> Result<Outcome> {
    let want_data = out.path.is_some();
    match plan {
        Plan::SolveSelfDual { p0, p1, exact } => solve(command, p0, p1, *exact, out),
        Plan::VerifyCoupling { p, exact } => {
            let report = if *exact {
                let mut known: Vec<_> = p
                    .iter()
                    .filter_map(|e| match e {
                        Entry::Value(t) => parse_decimal(t),
                        Entry::Auto => None,
                    })
                    .collect();
                if let Some(i) = p.iter().position(|e| *e == Entry::Auto) {
                    let third = solve_self_dual_third_exact(&known[0], &known[1])?;
                    known.insert(i, third);
                }
                let triple: [_; 3] = known.try_into().expect("three entries");
                verify_coupling_exact(&triple)
            } else {
                let mut known: Vec<f64> = p
                    .iter()
                    .filter_map(|e| match e {
                        Entry::Value(t) => t.parse().ok(),
                        Entry::Auto => None,
                    })
                    .collect();
                if let Some(i) = p.iter().position(|e| *e == Entry::Auto) {
                    let third = solve_self_dual_third(known[0], known[1])?;
                    known.insert(i, third);
                }
                verify_coupling([known[0], known[1], known[2]], false)
            };
            let summary = serde_json::to_string_pretty(&report).expect("reports serialise");
            let data = want_data.then(|| json_file(command, &report, out)).transpose()?;
            Ok(Outcome { summary, data })
        }
        Plan::Sample { model, window, seed } => {
            let g = graph(model.family, *window)?;
            let sampler = Sampler::for_model(model, &g)?;
            let omega = sampler.sample(SeedSpec::sample(*seed, 0));
            let summary = format!(
                "{model}, window {window}: {} of {} edges open\ngraph {}",
                omega.open_count(),
                omega.len(),
                graph_hash(&g)
            );
            Ok(Outcome { summary, data: want_data.then(|| write_config(&g, &omega).into_bytes()) })
        }
        Plan::Estimate { model, event, radii, run } => {
            let records = estimate_series(model, event, radii, run.trials, run.seed, run.workers)?;
            let mut summary = format!("{model} {}\n{:>6} {:>10} {:>23} {:>12}", event.label(), "n", "p_hat", "95% interval", "successes");
            for r in &records {
                write!(summary, "\n{:>6} {:>10.6} [{:>10.6}, {:>10.6}] {:>12}", r.n, r.p_hat, r.ci[0], r.ci[1], r.successes).unwrap();
            }
            let data = if want_data {
                let mut v = header(&format!("estimate {model} {}", event.label()), out)?;
                match out.format {
                    Format::Json => write_jsonl(&mut v, &records)?,
                    Format::Csv => write_csv(&mut v, &records)?,
                }
                Some(v)
            } else {
                None
            };
            Ok(Outcome { summary, data })
        }
        Plan::Universality { square, triangular, k, radii, run } => {
            let r = universality_compare(square, triangular, *k, radii, run.trials, run.seed, run.workers)?;
            let mut summary = format!("{square} vs {triangular}, A_{k}(n)\n{:>6} {:>10} {:>10} {:>8}", "n", "square", "triang.", "ratio");
            for (a, b) in r.records_a.iter().zip(&r.records_b) {
                let ratio = if b.p_hat > 0.0 { a.p_hat / b.p_hat } else { f64::NAN };
                write!(summary, "\n{:>6} {:>10.6} {:>10.6} {:>8.4}", a.n, a.p_hat, b.p_hat, ratio).unwrap();
            }
            match (&r.fit_a, &r.fit_b, r.slopes_agree(2.0)) {
                (Some(a), Some(b), Some(agree)) => write!(
                    summary,
                    "\nslopes {:.4} ± {:.4} and {:.4} ± {:.4}; agree within 2 joint standard errors: {agree}",
                    a.slope,
                    a.total_stderr(),
                    b.slope,
                    b.total_stderr()
                )
                .unwrap(),
                _ => summary.push_str("\ntoo few usable points for slope fits"),
            }
            let data = if want_data {
                match out.format {
                    Format::Json => Some(json_file(command, &r, out)?),
                    Format::Csv => {
                        let mut v = header(&format!("universality A_{k}(n)"), out)?;
                        write_csv_matrix(&mut v, &[("square".into(), r.records_a.clone()), ("triangular".into(), r.records_b.clone())])?;
                        Some(v)
                    }
                }
            } else {
                None
            };
            Ok(Outcome { summary, data })
        }
        Plan::QuasiMult { model, sigma, inner, radii, run } => {
            let r = quasi_mult_report(model, sigma, *inner, radii, run.trials, run.seed, run.workers)?;
            let mut summary = format!("{model} sigma = {sigma}, N = {inner}\n{:>6} {:>10} {:>10} {:>8}", "n", "P[A(N,n)]", "P[A(N,2n)]", "ratio");
            for row in &r.rows {
                let ratio = row.ratio.map_or("-".to_string(), |q| format!("{q:.4}"));
                write!(summary, "\n{:>6} {:>10.6} {:>10.6} {ratio:>8}", row.n, row.p_n, row.p_2n).unwrap();
            }
            write!(summary, "\nnesting violations: {}", r.nesting_violations).unwrap();
            let data = if want_data {
                match out.format {
                    Format::Json => Some(json_file(command, &r, out)?),
                    Format::Csv => {
                        let mut v = header(&format!("quasi-mult {model} sigma={sigma} N={inner}"), out)?;
                        let mut c = csv::Writer::from_writer(&mut v);
                        c.write_record(["n", "p_n", "p_2n", "ratio", "ci_lo", "ci_hi"]).map_err(csv_err)?;
                        for row in &r.rows {
                            let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
                            c.write_record([
                                row.n.to_string(),
                                row.p_n.to_string(),
                                row.p_2n.to_string(),
                                opt(row.ratio),
                                opt(row.ci.map(|c| c[0])),
                                opt(row.ci.map(|c| c[1])),
                            ])
                            .map_err(csv_err)?;
                        }
                        c.flush().map_err(|e| csv_err(e.into()))?;
                        drop(c);
                        Some(v)
                    }
                }
            } else {
                None
            };
            Ok(Outcome { summary, data })
        }
        Plan::BoxCrossing { model, aspect, radii, run } => {
            let r = box_crossing_scan(model, *aspect, radii, run.trials, run.seed, run.workers)?;
            let mut summary = format!("{model}, aspect {aspect} ({} units)\n{:>6} {:>10} {:>10}", r.units, "n", "min open", "min open*");
            for (n, b, bs) in &r.running_min {
                write!(summary, "\n{n:>6} {b:>10.6} {bs:>10.6}").unwrap();
            }
            let data = if want_data {
                match out.format {
                    Format::Json => Some(json_file(command, &r, out)?),
                    Format::Csv => {
                        let mut v = header(&format!("box-crossing {model} aspect={aspect}"), out)?;
                        let mut c = csv::Writer::from_writer(&mut v);
                        c.write_record(["n", "orientation", "dx", "dy", "colour", "trials", "successes", "p_hat", "ci_lo", "ci_hi"])
                            .map_err(csv_err)?;
                        for row in &r.rows {
                            c.write_record([
                                row.n.to_string(),
                                row.orientation.clone(),
                                row.translate[0].to_string(),
                                row.translate[1].to_string(),
                                row.colour.clone(),
                                row.tally.trials.to_string(),
                                row.tally.successes.to_string(),
                                row.tally.p_hat.to_string(),
                                row.tally.ci[0].to_string(),
                                row.tally.ci[1].to_string(),
                            ])
                            .map_err(csv_err)?;
                        }
                        c.flush().map_err(|e| csv_err(e.into()))?;
                        drop(c);
                        Some(v)
                    }
                }
            } else {
                None
            };
            Ok(Outcome { summary, data })
        }
        Plan::SweepDemo { model, direction, window, seed } => sweep_demo(command, model, *direction, *window, *seed, out),
    }
}

#[derive(Serialize)]
struct Solution {
    p0: f64,
    p1: f64,
    p2: f64,
    kappa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p2_exact: Option<String>,
}

fn solve(command: &str, p0: &str, p1: &str, exact: bool, out: &Output) -> Result<Outcome> {
    let (a, b): (f64, f64) = (p0.parse().expect("validated"), p1.parse().expect("validated"));
    let sol = if exact {
        let (ra, rb) = (parse_decimal(p0).expect("validated"), parse_decimal(p1).expect("validated"));
        let rc = solve_self_dual_third_exact(&ra, &rb)?;
        let k = kappa_triangle_exact(&[ra, rb, rc.clone()]);
        Solution { p0: a, p1: b, p2: rat_to_f64(&rc), kappa: rat_to_f64(&k), p2_exact: Some(rc.to_string()) }
    } else {
        let c = solve_self_dual_third(a, b)?;
        Solution { p0: a, p1: b, p2: c, kappa: kappa_triangle([a, b, c]), p2_exact: None }
    };
    let mut summary = format!("p2 = {:.10}", sol.p2);
    if let Some(r) = &sol.p2_exact {
        write!(summary, "\np2 (exact) = {r}").unwrap();
    }
    write!(summary, "\nkappa residual = {:e}", sol.kappa).unwrap();
    let data = out.path.is_some().then(|| json_file(command, &sol, out)).transpose()?;
    Ok(Outcome { summary, data })
}

#[derive(Serialize)]
struct SweepSummary {
    model: ModelSpec,
    direction: &'static str,
    seed: u64,
    m_in: u32,
    m_out: u32,
    window_in: u32,
    window_out: u32,
    edges_in: usize,
    edges_out: usize,
    open_in: usize,
    open_out: usize,
    triangle_cells: usize,
    star_cells: usize,
    region_half_width: i64,
    pairs_checked: usize,
    violations: usize,
}

fn sweep_demo(command: &str, model: &ModelSpec, direction: Direction, window: u32, seed: u64, out: &Output) -> Result<Outcome> {
    let g = graph(model.family, window)?;
    let sampler = Sampler::for_model(model, &g)?;
    let omega = sampler.sample(SeedSpec::sample(seed, 0));
    let plan = SweepPlan::new(&g, direction)?;
    let swept = plan.apply(&omega, &model.params, SeedSpec::new(seed, tag::SWEEP, 0))?;
    let h = plan.output();
    let half = h.window() as i64 - 2;
    let region = Rect::real(-half, -half, half, half);
    let axis: Vec<i32> = g
        .axis_vertices()
        .iter()
        .filter(|&&(_, v)| region.contains(g.point(v)))
        .map(|&(i, _)| i)
        .collect();
    let pairs: Vec<(i32, i32)> = axis.iter().enumerate().flat_map(|(a, &i)| axis[a + 1..].iter().map(move |&j| (i, j))).collect();
    let report = transport_check(&g, &omega, h, &swept, &region, &pairs)?;
    let s = SweepSummary {
        model: *model,
        direction: match direction {
            Direction::Up => "up",
            Direction::Down => "down",
        },
        seed,
        m_in: plan.m_in,
        m_out: plan.m_out,
        window_in: g.window(),
        window_out: h.window(),
        edges_in: g.edge_count(),
        edges_out: h.edge_count(),
        open_in: omega.open_count(),
        open_out: swept.open_count(),
        triangle_cells: plan.triangle_cells(),
        star_cells: plan.star_cells(),
        region_half_width: half,
        pairs_checked: report.pairs_checked,
        violations: report.violations.len(),
    };
    let summary = format!(
        "sweep {} from m = {} to m = {} (window {} -> {})\n{} triangle and {} star cells\nopen edges {} of {} -> {} of {}\ntransport: {} axis pairs in [-{half}, {half}]², {} violations",
        s.direction, s.m_in, s.m_out, s.window_in, s.window_out, s.triangle_cells, s.star_cells, s.open_in, s.edges_in, s.open_out,
        s.edges_out, s.pairs_checked, s.violations
    );
    let data = out.path.is_some().then(|| json_file(command, &s, out)).transpose()?;
    Ok(Outcome { summary, data })
}
