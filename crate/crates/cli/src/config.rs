//! Experiment configuration: the JSON file format, merging with flags, and
//! validation into a [`Plan`]. Nothing here samples or writes files.

use std::path::{Path, PathBuf};

use bondperc::arms::{inner_radius_minimum, AxisEventSpec, ColourSequence, EventSpec};
use bondperc::criticality::{critical_root, kappa, parse_decimal, solve_self_dual_third, ModelSpec, ParamTriple};
use bondperc::lattice::{Family, Radius};
use bondperc::star_triangle::Direction;
use bondperc::Error;
use serde::Deserialize;

use crate::args::Flags;
use crate::error::{CliError, Result};

/// Self-duality tolerance for explicit parameter triples.
pub const SELF_DUAL_INPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Number(serde_json::Number),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Number(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

/// A list given either as `"0.2,0.3,auto"` or as `[0.2, 0.3, "auto"]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum List {
    Items(Vec<Scalar>),
    One(Scalar),
}

impl List {
    fn text(&self) -> String {
        match self {
            List::Items(v) => v.iter().map(Scalar::text).collect::<Vec<_>>().join(","),
            List::One(s) => s.text(),
        }
    }
}

/// The `--config` file: a JSON object whose keys mirror the flags.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    command: Option<String>,
    model: Option<String>,
    p: Option<List>,
    p0: Option<Scalar>,
    p1: Option<Scalar>,
    m: Option<u32>,
    event: Option<serde_json::Value>,
    k: Option<u32>,
    sigma: Option<Scalar>,
    #[serde(rename = "N")]
    inner: Option<u32>,
    n: Option<List>,
    trials: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
    aspect: Option<f64>,
    direction: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
    no_timestamp: Option<bool>,
    exact: Option<bool>,
}

pub fn parse_file_config(text: &str) -> Result<FileConfig> {
    serde_json::from_str(text).map_err(|e| CliError::config("config", e.to_string()))
}

/// Flags after merging a config file underneath the command line.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    pub model: Option<String>,
    pub p: Option<String>,
    pub p0: Option<String>,
    pub p1: Option<String>,
    pub m: Option<u32>,
    pub event: Option<String>,
    pub k: Option<u32>,
    pub sigma: Option<String>,
    pub inner: Option<u32>,
    pub n: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub aspect: Option<f64>,
    pub direction: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub no_timestamp: bool,
    pub exact: bool,
}

impl Settings {
    pub fn merge(command: &str, flags: &Flags, file: Option<FileConfig>) -> Result<Settings> {
        let f = file.unwrap_or_default();
        if let Some(c) = &f.command {
            if c != command {
                return Err(CliError::config("config", format!("file is for `{c}`, not `{command}`")));
            }
        }
        let event = match f.event {
            None => None,
            Some(serde_json::Value::String(s)) => Some(s),
            Some(v @ serde_json::Value::Object(_)) => Some(v.to_string()),
            Some(other) => return Err(CliError::config("event", format!("expected a string or object, got {other}"))),
        };
        Ok(Settings {
            model: flags.model.clone().or(f.model),
            p: flags.p.clone().or(f.p.map(|l| l.text())),
            p0: flags.p0.clone().or(f.p0.map(|s| s.text())),
            p1: flags.p1.clone().or(f.p1.map(|s| s.text())),
            m: flags.m.or(f.m),
            event: flags.event.clone().or(event),
            k: flags.k.or(f.k),
            sigma: flags.sigma.clone().or(f.sigma.map(|s| s.text())),
            inner: flags.inner.or(f.inner),
            n: flags.n.clone().or(f.n.map(|l| l.text())),
            trials: flags.trials.or(f.trials),
            seed: flags.seed.or(f.seed),
            workers: flags.workers.or(f.workers),
            aspect: flags.aspect.or(f.aspect),
            direction: flags.direction.clone().or(f.direction),
            out: flags.out.clone().or(f.out),
            format: flags.format.clone().or(f.format),
            no_timestamp: flags.no_timestamp || f.no_timestamp.unwrap_or(false),
            exact: flags.exact || f.exact.unwrap_or(false),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Where and how results are written.
#[derive(Clone, Debug)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub format: Format,
    pub timestamp: bool,
}

/// Monte Carlo controls.
#[derive(Clone, Copy, Debug)]
pub struct Run {
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
}

/// A parameter entry exactly as given, for the exact-arithmetic commands.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Value(String),
    Auto,
}

/// A fully validated command.
#[derive(Clone, Debug)]
pub enum Plan {
    SolveSelfDual { p0: String, p1: String, exact: bool },
    VerifyCoupling { p: Vec<Entry>, exact: bool },
    Sample { model: ModelSpec, window: u32, seed: u64 },
    Estimate { model: ModelSpec, event: EventSpec, radii: Vec<u32>, run: Run },
    Universality { square: ModelSpec, triangular: ModelSpec, k: u32, radii: Vec<u32>, run: Run },
    QuasiMult { model: ModelSpec, sigma: ColourSequence, inner: u32, radii: Vec<u32>, run: Run },
    BoxCrossing { model: ModelSpec, aspect: f64, radii: Vec<u32>, run: Run },
    SweepDemo { model: ModelSpec, direction: Direction, window: u32, seed: u64 },
}

fn cfg(field: &str, msg: impl Into<String>) -> CliError {
    CliError::config(field, msg)
}

fn family(s: &Settings) -> Result<Family> {
    let name = s.model.as_deref().unwrap_or("square");
    let f = match name {
        "square" => Family::Square,
        "triangular" => Family::Triangular,
        "hexagonal" => Family::Hexagonal,
        "mixed" => Family::Mixed(s.m.ok_or_else(|| cfg("m", "required with --model mixed"))?),
        other => return Err(cfg("model", format!("unknown model `{other}` (square, triangular, hexagonal, mixed)"))),
    };
    if s.m.is_some() && !matches!(f, Family::Mixed(_)) {
        return Err(cfg("m", "only applies to --model mixed"));
    }
    Ok(f)
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let v: Vec<Entry> = text
        .split(',')
        .map(|t| match t.trim() {
            "auto" => Entry::Auto,
            x => Entry::Value(x.to_string()),
        })
        .collect();
    if v.iter().filter(|e| **e == Entry::Auto).count() > 1 {
        return Err(cfg("p", "at most one entry may be `auto`"));
    }
    Ok(v)
}

fn probability(field: &str, text: &str) -> Result<f64> {
    match text.parse::<f64>() {
        Ok(x) if (0.0..1.0).contains(&x) => Ok(x),
        _ => Err(cfg(field, format!("`{text}` is not a probability in [0, 1)"))),
    }
}

/// The value completing the other parameters to a self-dual model.
fn complete(family: Family, known: &[f64]) -> Result<f64> {
    let err = |e: Error| cfg("p", format!("no self-dual completion: {e}"));
    match family {
        Family::Square => Ok(1.0 - known[0]),
        Family::Hexagonal => Ok(1.0 - solve_self_dual_third(1.0 - known[0], 1.0 - known[1]).map_err(err)?),
        _ => solve_self_dual_third(known[0], known[1]).map_err(err),
    }
}

/// Resolve `--p` for `family`. Self-dual models are required unless
/// `self_dual` is false; explicit triples within [`SELF_DUAL_INPUT_TOL`] of the
/// surface have their last entry replaced by the exact completion.
fn model(s: &Settings, family: Family, self_dual: bool) -> Result<ModelSpec> {
    let arity = if family == Family::Square { 2 } else { 3 };
    let values: Vec<f64> = match &s.p {
        None => match critical_root(family) {
            Ok(pc) => vec![pc; arity],
            Err(_) => return Err(cfg("p", "required for mixed models")),
        },
        Some(text) => {
            let es = entries(text)?;
            if es.len() != arity {
                return Err(cfg("p", format!("{family} takes {arity} parameters, got {}", es.len())));
            }
            let known: Vec<f64> = es
                .iter()
                .filter_map(|e| match e {
                    Entry::Value(v) => Some(probability("p", v)),
                    Entry::Auto => None,
                })
                .collect::<Result<_>>()?;
            match es.iter().position(|e| *e == Entry::Auto) {
                Some(i) => {
                    let mut v = known.clone();
                    v.insert(i, complete(family, &known)?);
                    v
                }
                None => {
                    let mut v = known;
                    let mut padded = [0.0; 3];
                    padded[..arity].copy_from_slice(&v);
                    let params = ParamTriple::new(padded[0], padded[1], padded[2]).map_err(|e| cfg("p", e.to_string()))?;
                    let k = kappa(family, &params);
                    if self_dual && k.abs() > SELF_DUAL_INPUT_TOL {
                        return Err(cfg("p", format!("parameters are not self-dual (kappa = {k:e}); use `auto` for one entry")));
                    }
                    if self_dual && k != 0.0 {
                        let last = complete(family, &v[..arity - 1])?;
                        v[arity - 1] = last;
                    }
                    v
                }
            }
        }
    };
    let m = ModelSpec::new(family, &values).map_err(|e| cfg("p", e.to_string()))?;
    if self_dual {
        m.require_self_dual().map_err(|e| cfg("p", e.to_string()))?;
    }
    Ok(m)
}

fn radii(s: &Settings) -> Result<Vec<u32>> {
    let text = s.n.as_deref().ok_or_else(|| cfg("n", "required"))?;
    let mut v = Vec::new();
    for t in text.split(',') {
        match t.trim().parse::<u32>() {
            Ok(n) if n > 0 => v.push(n),
            _ => return Err(cfg("n", format!("`{}` is not a positive integer", t.trim()))),
        }
    }
    let mut sorted = v.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != v.len() {
        return Err(cfg("n", "radii must be distinct"));
    }
    Ok(v)
}

fn single_radius(s: &Settings, default: u32) -> Result<u32> {
    if s.n.is_none() {
        return Ok(default);
    }
    let v = radii(s)?;
    match v[..] {
        [n] if n >= 3 => Ok(n),
        [_] => Err(cfg("n", "the window radius must be at least 3")),
        _ => Err(cfg("n", "takes a single window radius here")),
    }
}

fn run(s: &Settings) -> Result<Run> {
    let trials = s.trials.unwrap_or(10_000);
    if trials == 0 {
        return Err(cfg("trials", "must be at least 1"));
    }
    let workers = s.workers.unwrap_or(1);
    if workers == 0 {
        return Err(cfg("workers", "must be at least 1"));
    }
    Ok(Run { trials, seed: s.seed.unwrap_or(1), workers })
}

fn sigma(s: &Settings) -> Result<ColourSequence> {
    ColourSequence::parse(s.sigma.as_deref().unwrap_or("1")).map_err(|e| cfg("sigma", e.to_string()))
}

fn inner(s: &Settings, family: Family, sigma: &ColourSequence) -> Result<u32> {
    let min = inner_radius_minimum(family, sigma).map_err(|e| cfg("sigma", e.to_string()))?;
    match s.inner {
        None => Ok(min),
        Some(n) if n < min => Err(cfg("N", format!("{n} is below the minimum {min} for sigma = {sigma}"))),
        Some(n) => Ok(n),
    }
}

/// `k` alone, checked at a radius large enough for any `k`.
fn axis_k(s: &Settings, family: Family) -> Result<u32> {
    let k = s.k.unwrap_or(1);
    if k == 2 && family == Family::Hexagonal {
        return Err(cfg("k", "A_2 needs the dual point y_0, which is not a vertex of the hexagonal lattice's dual"));
    }
    if k > 64 {
        return Err(cfg("k", format!("{k} arms is more than this tool supports (64)")));
    }
    AxisEventSpec::unchecked(k, Radius::int(1 << 20)).map_err(|e| cfg("k", e.to_string()))?;
    Ok(k)
}

fn event_error(e: Error) -> CliError {
    match e {
        Error::InvalidColourSequence(_) => cfg("sigma", e.to_string()),
        Error::InnerRadiusTooSmall { .. } => cfg("N", e.to_string()),
        _ => cfg("n", e.to_string()),
    }
}

/// The event and radius grid for `estimate`.
fn event(s: &Settings, family: Family) -> Result<(EventSpec, Vec<u32>)> {
    let kind = s.event.as_deref().unwrap_or("axis");
    if kind.trim_start().starts_with('{') {
        let e = EventSpec::parse(kind).map_err(|e| cfg("event", e.to_string()))?;
        if matches!(e, EventSpec::Axis { k: 2, .. }) && family == Family::Hexagonal {
            return Err(cfg("event", "A_2 is not available on the hexagonal lattice"));
        }
        let grid = if s.n.is_some() { radii(s)? } else { vec![e.radius()] };
        if let EventSpec::Annulus { sigma, inner: n0, .. } = &e {
            let min = inner_radius_minimum(family, sigma).map_err(|e| cfg("event", e.to_string()))?;
            if *n0 < min {
                return Err(cfg("event", format!("N = {n0} is below the minimum {min} for sigma = {sigma}")));
            }
        }
        for &n in &grid {
            e.with_radius(n).validate().map_err(event_error)?;
        }
        return Ok((e, grid));
    }
    let grid = radii(s)?;
    let e = match kind {
        "axis" => {
            let k = axis_k(s, family)?;
            EventSpec::Axis { k, n: grid[0], unchecked: false }
        }
        "annulus" => {
            let sg = sigma(s)?;
            let n0 = inner(s, family, &sg)?;
            EventSpec::Annulus { sigma: sg, inner: n0, n: grid[0] }
        }
        other => return Err(cfg("event", format!("unknown event `{other}` (axis, annulus, or a JSON object)"))),
    };
    for &n in &grid {
        e.with_radius(n).validate().map_err(event_error)?;
    }
    Ok((e, grid))
}

fn output(s: &Settings, command: &str, csv: bool) -> Result<Output> {
    let format = match s.format.as_deref().unwrap_or("json") {
        "json" => Format::Json,
        "csv" if csv => Format::Csv,
        "csv" => return Err(cfg("format", format!("`{command}` only writes json"))),
        other => return Err(cfg("format", format!("unknown format `{other}` (json, csv)"))),
    };
    if let Some(p) = &s.out {
        check_out(p)?;
    }
    Ok(Output { path: s.out.clone(), format, timestamp: !s.no_timestamp })
}

fn check_out(p: &Path) -> Result<()> {
    if p.is_dir() {
        return Err(cfg("out", format!("{} is a directory", p.display())));
    }
    let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(d) = parent {
        if !d.is_dir() {
            return Err(cfg("out", format!("directory {} does not exist", d.display())));
        }
    }
    Ok(())
}

/// Validate the settings for `command`.
pub fn plan(command: &str, s: &Settings) -> Result<(Plan, Output)> {
    let plan = match command {
        "solve-self-dual" => {
            let get = |field: &str, v: &Option<String>| -> Result<String> {
                let t = v.clone().ok_or_else(|| cfg(field, "required"))?;
                probability(field, &t)?;
                if s.exact && parse_decimal(&t).is_none() {
                    return Err(cfg(field, format!("`{t}` is not a decimal literal")));
                }
                Ok(t)
            };
            Plan::SolveSelfDual { p0: get("p0", &s.p0)?, p1: get("p1", &s.p1)?, exact: s.exact }
        }
        "verify-coupling" => {
            if s.model.as_deref().is_some_and(|m| m != "triangular") {
                return Err(cfg("model", "verify-coupling checks triangular triples"));
            }
            let p = entries(s.p.as_deref().ok_or_else(|| cfg("p", "required"))?)?;
            if p.len() != 3 {
                return Err(cfg("p", format!("expected 3 entries, got {}", p.len())));
            }
            for e in &p {
                if let Entry::Value(t) = e {
                    probability("p", t)?;
                    if s.exact && parse_decimal(t).is_none() {
                        return Err(cfg("p", format!("`{t}` is not a decimal literal")));
                    }
                }
            }
            Plan::VerifyCoupling { p, exact: s.exact }
        }
        "sample" => {
            let f = family(s)?;
            Plan::Sample { model: model(s, f, false)?, window: single_radius(s, 8)?, seed: s.seed.unwrap_or(1) }
        }
        "estimate" => {
            let f = family(s)?;
            let m = model(s, f, true)?;
            let (event, radii) = event(s, f)?;
            Plan::Estimate { model: m, event, radii, run: run(s)? }
        }
        "universality" => {
            if s.model.is_some() {
                return Err(cfg("model", "universality always compares square and triangular models"));
            }
            let tri_settings = Settings {
                p: Some(s.p.clone().unwrap_or_else(|| match &s.p0 {
                    Some(p0) => format!("{p0},{p0},auto"),
                    None => format!("{0},{0},auto", critical_root(Family::Triangular).unwrap_or(0.0)),
                })),
                ..s.clone()
            };
            let triangular = model(&tri_settings, Family::Triangular, true)?;
            let p0 = triangular.params.get(0);
            if let Some(t) = &s.p0 {
                if (probability("p0", t)? - p0).abs() > SELF_DUAL_INPUT_TOL {
                    return Err(cfg("p0", format!("differs from the first entry of --p ({p0})")));
                }
            }
            if p0 <= 0.0 {
                return Err(cfg("p", "p0 must be positive"));
            }
            let square = ModelSpec::square(p0, 1.0 - p0).map_err(|e| cfg("p0", e.to_string()))?;
            let k = axis_k(s, Family::Square)?;
            let grid = radii(s)?;
            for &n in &grid {
                EventSpec::axis(k, n).map_err(|e| cfg("n", e.to_string()))?;
            }
            Plan::Universality { square, triangular, k, radii: grid, run: run(s)? }
        }
        "quasi-mult" => {
            let f = family(s)?;
            let m = model(s, f, true)?;
            let sg = sigma(s)?;
            let n0 = inner(s, f, &sg)?;
            let grid = radii(s)?;
            if let Some(&n) = grid.iter().find(|&&n| n <= n0) {
                return Err(cfg("n", format!("{n} must exceed N = {n0}")));
            }
            Plan::QuasiMult { model: m, sigma: sg, inner: n0, radii: grid, run: run(s)? }
        }
        "box-crossing" => {
            let f = family(s)?;
            let aspect = s.aspect.unwrap_or(2.0);
            if !(aspect > 1.0 && aspect <= 16.0) {
                return Err(cfg("aspect", format!("must lie in (1, 16], got {aspect}")));
            }
            Plan::BoxCrossing { model: model(s, f, true)?, aspect, radii: radii(s)?, run: run(s)? }
        }
        "sweep-demo" => {
            let f = match family(s)? {
                Family::Triangular => Family::Mixed(0),
                f @ Family::Mixed(_) => f,
                other => return Err(cfg("model", format!("sweeps act on triangular and mixed lattices, not {other}"))),
            };
            let direction = match s.direction.as_deref().unwrap_or("up") {
                "up" => Direction::Up,
                "down" if f == Family::Mixed(0) => return Err(cfg("direction", "cannot sweep down from the triangular lattice")),
                "down" => Direction::Down,
                other => return Err(cfg("direction", format!("unknown direction `{other}` (up, down)"))),
            };
            let window = single_radius(s, 10)?;
            if window < 6 {
                return Err(cfg("n", "the sweep demo needs a window radius of at least 6"));
            }
            Plan::SweepDemo { model: model(s, f, true)?, direction, window, seed: s.seed.unwrap_or(1) }
        }
        other => return Err(cfg("command", format!("unknown command `{other}`"))),
    };
    let csv = matches!(plan, Plan::Estimate { .. } | Plan::Universality { .. } | Plan::QuasiMult { .. } | Plan::BoxCrossing { .. });
    Ok((plan, output(s, command, csv)?))
}

/// Read the optional config file and validate everything.
pub fn load(command: &str, flags: &Flags) -> Result<(Plan, Output)> {
    let file = match &flags.config {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| cfg("config", format!("cannot read {}: {e}", path.display())))?;
            Some(parse_file_config(&text)?)
        }
    };
    let settings = Settings::merge(command, flags, file)?;
    plan(command, &settings)
}
