//! Arm events: the axis events `A_k(n)` and annulus events `A_σ(N, n)`.
//!
//! Annulus crossings use edges meeting the closed annulus `B_n \ (−N, N)²`. An
//! edge is an inner contact if it meets `B_N` and an outer contact if one of
//! its endpoints lies outside `(−n, n)²`. For an alternating sequence of
//! length `2j ≥ 4` the event holds iff at least `j` distinct open clusters of
//! the annulus cross it: by planarity consecutive crossing clusters are
//! separated by dual crossings, which supplies the interleaved open* arms, and
//! distinct clusters give vertex-disjoint primal arms. For `σ = (1,0)` a
//! primal and a dual crossing are required.

pub mod event;
mod levels;
mod witness;

use serde::{Deserialize, Serialize};

use crate::config::{reaches_with, DualStates, EdgeStates, Marks};
use crate::error::{Error, Result};
use crate::lattice::{EmbeddedGraph, PlanarLattice, Radius, Rect, VertexId};
use crate::union_find::UnionFind;

pub use event::EventSpec;
pub use levels::{max_reach_level, Levels};
pub use witness::{inner_radius_minimum, witness_configuration};

/// A colour sequence: `1` is an open primal arm, `0` an open* dual arm.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColourSequence(Vec<bool>);

impl ColourSequence {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidColourSequence("empty sequence".into()));
        }
        Ok(ColourSequence(bits))
    }

    /// `σ = (1)`.
    pub fn one_arm() -> Self {
        ColourSequence(vec![true])
    }

    /// `(1,0,1,0,…)` of length `k`.
    pub fn alternating(k: usize) -> Result<Self> {
        ColourSequence::new((0..k).map(|i| i % 2 == 0).collect())
    }

    /// The sequence used for the axis event `A_k`: `(1)` for `k = 1`, else alternating.
    pub fn for_axis(k: u32) -> Result<Self> {
        if k == 1 {
            Ok(ColourSequence::one_arm())
        } else {
            ColourSequence::alternating(k as usize)
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::InvalidColourSequence(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ColourSequence::new(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_monochromatic(&self) -> bool {
        self.0.iter().all(|&b| b == self.0[0])
    }

    pub fn is_bichromatic(&self) -> bool {
        !self.is_monochromatic()
    }

    /// Alternates cyclically, so the length is even.
    pub fn is_alternating(&self) -> bool {
        self.0.len().is_multiple_of(2) && self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn flipped(&self) -> Self {
        ColourSequence(self.0.iter().map(|&b| !b).collect())
    }

    /// Number of primal arms the detector looks for; errors on unsupported sequences.
    pub fn primal_arms(&self) -> Result<usize> {
        if self.0 == [true] {
            Ok(1)
        } else if self.is_alternating() {
            Ok(self.0.len() / 2)
        } else {
            Err(Error::InvalidColourSequence(format!(
                "{self} is neither (1) nor alternating"
            )))
        }
    }
}

impl std::fmt::Display for ColourSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for ColourSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ColourSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ColourSequence::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The annulus `B_n \ (−N, N)²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annulus {
    #[serde(rename = "N")]
    pub inner: u32,
    #[serde(rename = "n")]
    pub outer: u32,
}

impl Annulus {
    pub fn new(inner: u32, outer: u32) -> Result<Self> {
        if inner == 0 || inner >= outer {
            return Err(Error::InvalidEvent(format!(
                "annulus needs 0 < N < n, got N = {inner}, n = {outer}"
            )));
        }
        Ok(Annulus { inner, outer })
    }

    fn check_window(&self, g: &EmbeddedGraph) -> Result<()> {
        if self.outer > g.window() {
            return Err(Error::RegionOutsideWindow { window: g.window() });
        }
        Ok(())
    }
}

/// The axis event `A_k(n)` for `k ∈ {1, 2, 4, 6, …}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisEventSpec {
    pub k: u32,
    pub n: Radius,
}

fn check_k(k: u32) -> Result<()> {
    if k == 1 || (k >= 2 && k.is_multiple_of(2)) {
        Ok(())
    } else {
        Err(Error::InvalidEvent(format!("k must be 1 or even, got {k}")))
    }
}

impl AxisEventSpec {
    /// Validated spec: requires `n/√3 > k + 2`, so the event survives sweeps.
    pub fn new(k: u32, n: Radius) -> Result<Self> {
        check_k(k)?;
        if n <= Radius::sqrt3_times(k as i64 + 2) {
            return Err(Error::InvalidEvent(format!(
                "A_{k}({n}) needs n/√3 > {}",
                k + 2
            )));
        }
        Ok(AxisEventSpec { k, n })
    }

    pub fn int(k: u32, n: u32) -> Result<Self> {
        AxisEventSpec::new(k, Radius::int(n as i64))
    }

    /// Skips the sweep-compatibility bound (for small boxes in tests and
    /// diagnostics); `k` is still checked.
    pub fn unchecked(k: u32, n: Radius) -> Result<Self> {
        check_k(k)?;
        Ok(AxisEventSpec { k, n })
    }

    /// Number of axis vertices `x_0 … x_{j−1}` involved.
    pub fn axis_points(&self) -> u32 {
        if self.k == 1 {
            1
        } else {
            self.k / 2
        }
    }
}

fn axis_vertices(g: &EmbeddedGraph, count: u32) -> Result<Vec<VertexId>> {
    (0..count as i32)
        .map(|i| {
            g.axis_vertex(i)
                .ok_or_else(|| Error::InvalidEvent(format!("x_{i} is outside the window")))
        })
        .collect()
}

/// The dual vertex `y_0`; absent on the hexagonal lattice, whose faces above
/// the axis are not centred there.
pub fn dual_origin(lat: &PlanarLattice) -> Result<VertexId> {
    lat.dual_axis_vertex(0).ok_or_else(|| {
        Error::UnsupportedFamily(format!("{}: y_0 is not a dual vertex", lat.graph.family()))
    })
}

/// `x_i` is joined to one of `earlier` by open edges that all meet `B_n`.
fn connected_within<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    from: VertexId,
    earlier: &[VertexId],
    meets: &dyn Fn(usize) -> bool,
    marks: &mut Marks,
    stack: &mut Vec<VertexId>,
) -> bool {
    marks.clear();
    stack.clear();
    marks.set(from);
    stack.push(from);
    while let Some(w) = stack.pop() {
        if earlier.contains(&w) {
            return true;
        }
        for &(x, e) in g.neighbors(w) {
            if !marks.is_set(x) && omega.is_open(e) && meets(e) {
                marks.set(x);
                stack.push(x);
            }
        }
    }
    false
}

/// Decide `A_k(n)` for the configuration `omega` on `lat`.
pub fn detect_axis_event<S: EdgeStates + ?Sized>(
    lat: &PlanarLattice,
    omega: &S,
    spec: &AxisEventSpec,
) -> Result<bool> {
    let g = &lat.graph;
    if spec.n > g.window_radius() {
        return Err(Error::RegionOutsideWindow { window: g.window() });
    }
    let xs = axis_vertices(g, spec.axis_points())?;
    let y0 = if spec.k == 2 { Some(dual_origin(lat)?) } else { None };
    let mut marks = Marks::new(g.vertex_count());
    let mut stack = Vec::new();
    let n = spec.n;
    let mut reach = |v: VertexId| reaches_with(g, omega, v, n, &mut marks, &mut stack);
    if spec.k <= 2 {
        if !reach(xs[0]) {
            return Ok(false);
        }
        if let Some(y0) = y0 {
            let dual = lat.dual();
            let states = DualStates::new(omega, &lat.pairing);
            let mut dm = Marks::new(dual.vertex_count());
            return Ok(reaches_with(dual, &states, y0, n, &mut dm, &mut stack));
        }
        return Ok(true);
    }
    for &x in &xs {
        if !reach(x) {
            return Ok(false);
        }
    }
    let b = Rect::centered(n);
    let meets = |e: usize| {
        let (p, q) = g.segment(e);
        b.meets_segment(p, q)
    };
    for i in 1..xs.len() {
        if connected_within(g, omega, xs[i], &xs[..i], &meets, &mut marks, &mut stack) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reusable per-lattice data for repeated annulus queries.
#[derive(Clone, Debug)]
pub struct AnnulusGeometry {
    primal: Levels,
    dual: Levels,
}

impl AnnulusGeometry {
    pub fn new(lat: &PlanarLattice) -> Self {
        AnnulusGeometry {
            primal: Levels::new(&lat.graph),
            dual: Levels::new(lat.dual()),
        }
    }

    pub fn primal(&self) -> &Levels {
        &self.primal
    }

    pub fn dual(&self) -> &Levels {
        &self.dual
    }
}

/// Number of open clusters crossing the annulus in `g` (at most `cap`).
pub fn crossing_clusters<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    levels: &Levels,
    omega: &S,
    ann: Annulus,
    uf: &mut UnionFind,
    flags: &mut Vec<u8>,
) -> usize {
    const INNER: u8 = 1;
    const OUTER: u8 = 2;
    if uf.len() == g.vertex_count() {
        uf.reset();
    } else {
        *uf = UnionFind::new(g.vertex_count());
    }
    flags.clear();
    flags.resize(g.vertex_count(), 0);
    let mut touched = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if !levels.in_annulus(g, e, ann) || !omega.is_open(e) {
            continue;
        }
        uf.union(edge.u, edge.v);
        let mut f = 0;
        if levels.edge(e) <= ann.inner {
            f |= INNER;
        }
        if levels.vertex(edge.u).max(levels.vertex(edge.v)) >= ann.outer {
            f |= OUTER;
        }
        if f != 0 {
            flags[edge.u] |= f;
            touched.push(edge.u);
        }
    }
    for &v in &touched {
        let r = uf.find(v);
        if r != v {
            flags[r] |= flags[v];
        }
    }
    let mut count = 0;
    for &v in &touched {
        let r = uf.find(v);
        if flags[r] == INNER | OUTER {
            count += 1;
            flags[r] = 0;
        }
    }
    count
}

/// Decide `A_σ(N, n)` with precomputed geometry and no validation of `N`.
pub fn detect_arm_event_unchecked<S: EdgeStates + ?Sized>(
    lat: &PlanarLattice,
    geom: &AnnulusGeometry,
    omega: &S,
    sigma: &ColourSequence,
    ann: Annulus,
) -> Result<bool> {
    let j = sigma.primal_arms()?;
    ann.check_window(&lat.graph)?;
    let mut uf = UnionFind::new(lat.graph.vertex_count());
    let mut flags = Vec::new();
    let primal = crossing_clusters(&lat.graph, &geom.primal, omega, ann, &mut uf, &mut flags);
    if sigma.len() == 1 {
        return Ok(primal >= 1);
    }
    if j >= 2 {
        return Ok(primal >= j);
    }
    if primal == 0 {
        return Ok(false);
    }
    let states = DualStates::new(omega, &lat.pairing);
    let dual = crossing_clusters(lat.dual(), &geom.dual, &states, ann, &mut uf, &mut flags);
    Ok(dual >= 1)
}

/// Decide `A_σ(N, n)`: `σ` must be `(1)` or alternating and `N ≥ N_0(σ)`.
pub fn detect_arm_event<S: EdgeStates + ?Sized>(
    lat: &PlanarLattice,
    omega: &S,
    sigma: &ColourSequence,
    ann: Annulus,
) -> Result<bool> {
    sigma.primal_arms()?;
    let min = inner_radius_minimum(lat.graph.family(), sigma)?;
    if ann.inner < min {
        return Err(Error::InnerRadiusTooSmall { inner: ann.inner, min });
    }
    detect_arm_event_unchecked(lat, &AnnulusGeometry::new(lat), omega, sigma, ann)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Sampler;
    use crate::criticality::ModelSpec;
    use crate::lattice::Family;
    use crate::rng::SeedSpec;

    fn square(r: u32) -> PlanarLattice {
        PlanarLattice::build(Family::Square, r).unwrap()
    }

    #[test]
    fn colour_sequences() {
        let s = ColourSequence::parse("1,0,1,0").unwrap();
        assert!(s.is_alternating() && s.is_bichromatic());
        assert_eq!(s.primal_arms().unwrap(), 2);
        assert_eq!(s.flipped().to_string(), "0101");
        assert!(ColourSequence::parse("11").unwrap().is_monochromatic());
        assert!(ColourSequence::parse("101").unwrap().primal_arms().is_err());
        assert!(ColourSequence::parse("").is_err());
        assert!(ColourSequence::parse("12").is_err());
        assert_eq!(ColourSequence::for_axis(1).unwrap(), ColourSequence::one_arm());
    }

    #[test]
    fn axis_spec_bound() {
        assert!(AxisEventSpec::int(1, 5).is_err());
        assert!(AxisEventSpec::int(1, 6).is_ok());
        assert!(AxisEventSpec::int(4, 10).is_err());
        assert!(AxisEventSpec::int(4, 11).is_ok());
        assert!(AxisEventSpec::int(3, 20).is_err());
        assert!(AxisEventSpec::unchecked(2, Radius::int(4)).is_ok());
    }

    #[test]
    fn all_open_and_all_closed() {
        let lat = square(7);
        let e = lat.graph.edge_count();
        let open = vec![true; e];
        let closed = vec![false; e];
        for (k, want_open) in [(1, true), (2, false), (4, false)] {
            let spec = AxisEventSpec::unchecked(k, Radius::int(6)).unwrap();
            assert_eq!(detect_axis_event(&lat, &open, &spec).unwrap(), want_open, "k={k}");
            assert!(!detect_axis_event(&lat, &closed, &spec).unwrap());
        }
        let ann = Annulus::new(2, 6).unwrap();
        assert!(detect_arm_event(&lat, &open, &ColourSequence::one_arm(), ann).unwrap());
        assert!(!detect_arm_event(&lat, &open, &ColourSequence::parse("10").unwrap(), ann).unwrap());
        assert!(!detect_arm_event(&lat, &closed, &ColourSequence::one_arm(), ann).unwrap());
    }

    #[test]
    fn hexagonal_has_no_dual_origin() {
        let lat = PlanarLattice::build(Family::Hexagonal, 6).unwrap();
        let spec = AxisEventSpec::unchecked(2, Radius::int(5)).unwrap();
        let omega = vec![true; lat.graph.edge_count()];
        assert!(matches!(detect_axis_event(&lat, &omega, &spec), Err(Error::UnsupportedFamily(_))));
        let spec = AxisEventSpec::unchecked(4, Radius::int(5)).unwrap();
        assert!(!detect_axis_event(&lat, &omega, &spec).unwrap());
    }

    #[test]
    fn window_and_radius_errors() {
        let lat = square(6);
        let omega = vec![true; lat.graph.edge_count()];
        let spec = AxisEventSpec::unchecked(1, Radius::int(7)).unwrap();
        assert!(detect_axis_event(&lat, &omega, &spec).is_err());
        let sigma = ColourSequence::alternating(4).unwrap();
        let min = inner_radius_minimum(Family::Square, &sigma).unwrap();
        assert!(min >= 1);
        if min > 1 {
            assert!(matches!(
                detect_arm_event(&lat, &omega, &sigma, Annulus::new(min - 1, 6).unwrap()),
                Err(Error::InnerRadiusTooSmall { .. })
            ));
        }
        assert!(Annulus::new(3, 3).is_err());
        assert!(detect_arm_event(&lat, &omega, &ColourSequence::one_arm(), Annulus::new(1, 7).unwrap()).is_err());
    }

    #[test]
    fn monotone_in_n() {
        let model = ModelSpec::square(0.5, 0.5).unwrap();
        let lat = square(12);
        let s = Sampler::for_model(&model, &lat.graph).unwrap();
        for t in 0..100 {
            let omega = s.sample(SeedSpec::sample(5, t));
            for k in [1, 2, 4] {
                let mut prev = true;
                for n in 2..=12 {
                    let spec = AxisEventSpec::unchecked(k, Radius::int(n)).unwrap();
                    let now = if k == 4 {
                        // Only the reach part is monotone for k ≥ 4.
                        let g = &lat.graph;
                        (0..2).all(|i| {
                            crate::config::reaches_box_boundary(g, &omega, g.axis_vertex(i).unwrap(), Radius::int(n)).unwrap()
                        })
                    } else {
                        detect_axis_event(&lat, &omega, &spec).unwrap()
                    };
                    assert!(prev || !now, "t={t} k={k} n={n}");
                    prev = now;
                }
            }
        }
    }

    #[test]
    fn alternating_events_need_distinct_clusters() {
        let lat = square(8);
        let sigma = ColourSequence::alternating(4).unwrap();
        let min = inner_radius_minimum(Family::Square, &sigma).unwrap();
        let ann = Annulus::new(min, 8).unwrap();
        let w = witness_configuration(&lat, &sigma, ann).unwrap();
        assert!(detect_arm_event(&lat, &w, &sigma, ann).unwrap());
        // Joining everything inside the annulus destroys the event.
        let mut joined = w.clone();
        let geom = AnnulusGeometry::new(&lat);
        for e in 0..lat.graph.edge_count() {
            if geom.primal().in_annulus(&lat.graph, e, ann) && geom.primal().edge(e) <= ann.inner {
                joined[e] = true;
            }
        }
        assert!(!detect_arm_event(&lat, &joined, &sigma, ann).unwrap());
    }
}
