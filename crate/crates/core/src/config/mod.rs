//! Edge configurations, product-measure sampling and restricted connectivity.

pub mod dump;
pub mod query;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::criticality::{edge_probabilities, ModelSpec};
use crate::error::{Error, Result};
use crate::lattice::dual::DualPairing;
use crate::lattice::{EdgeId, EmbeddedGraph, Radius, Region, VertexId};
use crate::rng::{threshold, SeedSpec, StreamKey};
use crate::union_find::UnionFind;

pub use query::{crossing, Colour, CrossDir, CrossingQuery};

/// Read access to open/closed edge states.
pub trait EdgeStates {
    fn is_open(&self, e: EdgeId) -> bool;
}

impl EdgeStates for [bool] {
    fn is_open(&self, e: EdgeId) -> bool {
        self[e]
    }
}

impl EdgeStates for Vec<bool> {
    fn is_open(&self, e: EdgeId) -> bool {
        self[e]
    }
}

impl<S: EdgeStates + ?Sized> EdgeStates for &S {
    fn is_open(&self, e: EdgeId) -> bool {
        (**self).is_open(e)
    }
}

/// Where a sampled configuration came from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: Option<ModelSpec>,
    pub seed: SeedSpec,
}

/// One bit per edge of a specific graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub bits: Vec<bool>,
    pub provenance: Option<Provenance>,
}

impl Configuration {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Configuration { bits, provenance: None }
    }

    pub fn all(len: usize, open: bool) -> Self {
        Configuration::from_bits(vec![open; len])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl EdgeStates for Configuration {
    fn is_open(&self, e: EdgeId) -> bool {
        self.bits[e]
    }
}

/// Precomputed per-edge thresholds for repeated sampling from one measure.
///
/// Edge `e` of trial `t` is open iff draw `e` of the stream `(seed, t)` falls
/// below `floor(p_e · 2^64)`. One draw per edge regardless of `p_e`, so samplers
/// at different intensities sharing a seed are monotonically coupled.
#[derive(Clone, Debug)]
pub struct Sampler {
    thresholds: Vec<u64>,
    model: Option<ModelSpec>,
}

impl Sampler {
    pub fn new(probabilities: &[f64]) -> Self {
        Sampler {
            thresholds: probabilities.iter().map(|&p| threshold(p)).collect(),
            model: None,
        }
    }

    pub fn for_model(model: &ModelSpec, g: &EmbeddedGraph) -> Result<Self> {
        let mut s = Sampler::new(&edge_probabilities(model, g)?);
        s.model = Some(*model);
        Ok(s)
    }

    pub fn edge_count(&self) -> usize {
        self.thresholds.len()
    }

    pub fn sample(&self, seed: SeedSpec) -> Configuration {
        let mut bits = Vec::new();
        self.sample_into(seed, &mut bits);
        Configuration {
            bits,
            provenance: Some(Provenance { model: self.model, seed }),
        }
    }

    pub fn sample_into(&self, seed: SeedSpec, bits: &mut Vec<bool>) {
        let key = seed.key();
        bits.clear();
        bits.extend(
            self.thresholds
                .iter()
                .enumerate()
                .map(|(e, &t)| key.bits(e as u64) < t),
        );
    }

    /// A view that evaluates edges on demand; identical to `sample(seed)`.
    pub fn lazy(&self, seed: SeedSpec) -> LazyConfig<'_> {
        LazyConfig {
            thresholds: &self.thresholds,
            key: seed.key(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LazyConfig<'a> {
    thresholds: &'a [u64],
    key: StreamKey,
}

impl EdgeStates for LazyConfig<'_> {
    #[inline]
    fn is_open(&self, e: EdgeId) -> bool {
        self.key.bits(e as u64) < self.thresholds[e]
    }
}

/// Sample a configuration with one independent draw per edge.
pub fn sample(g: &EmbeddedGraph, probabilities: &[f64], seed: SeedSpec) -> Result<Configuration> {
    if probabilities.len() != g.edge_count() {
        return Err(Error::MissingProbability {
            expected: g.edge_count(),
            got: probabilities.len(),
        });
    }
    Ok(Sampler::new(probabilities).sample(seed))
}

/// Open* states of dual edges: `e*` is open iff `e` is closed.
#[derive(Clone, Copy)]
pub struct DualStates<'a, S: ?Sized> {
    pub primal: &'a S,
    pub pairing: &'a DualPairing,
}

impl<'a, S: EdgeStates + ?Sized> DualStates<'a, S> {
    pub fn new(primal: &'a S, pairing: &'a DualPairing) -> Self {
        DualStates { primal, pairing }
    }
}

impl<S: EdgeStates + ?Sized> EdgeStates for DualStates<'_, S> {
    #[inline]
    fn is_open(&self, e: EdgeId) -> bool {
        !self.primal.is_open(self.pairing.dual_to_primal[e])
    }
}

/// Materialise the dual configuration `ω*(e*) = 1 − ω(e)`.
pub fn dual_config<S: EdgeStates + ?Sized>(omega: &S, pairing: &DualPairing) -> Configuration {
    let view = DualStates::new(omega, pairing);
    Configuration::from_bits((0..pairing.dual_to_primal.len()).map(|e| view.is_open(e)).collect())
}

/// Map a dual configuration back to the primal edges it covers; edges without
/// a dual partner keep the state given in `fallback`.
pub fn primal_from_dual<S: EdgeStates + ?Sized>(
    dual: &S,
    pairing: &DualPairing,
    fallback: &[bool],
) -> Configuration {
    let mut bits = fallback.to_vec();
    for (de, &pe) in pairing.dual_to_primal.iter().enumerate() {
        bits[pe] = !dual.is_open(de);
    }
    Configuration::from_bits(bits)
}

/// Cluster labelling by open edges among `restriction`.
pub fn clusters<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    restriction: &[EdgeId],
) -> UnionFind {
    let mut uf = UnionFind::new(g.vertex_count());
    for &e in restriction {
        if omega.is_open(e) {
            let edge = g.edge(e);
            uf.union(edge.u, edge.v);
        }
    }
    uf
}

/// Cluster labelling over every edge of the graph.
pub fn clusters_all<S: EdgeStates + ?Sized>(g: &EmbeddedGraph, omega: &S) -> UnionFind {
    let all: Vec<EdgeId> = (0..g.edge_count()).collect();
    clusters(g, omega, &all)
}

fn check_vertex(g: &EmbeddedGraph, v: VertexId) -> Result<()> {
    if v < g.vertex_count() {
        Ok(())
    } else {
        Err(Error::UnknownVertex(v))
    }
}

/// Whether an open path joins `u` and `v` using only edges meeting `region`.
pub fn connected<S: EdgeStates + ?Sized, R: Region + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    u: VertexId,
    v: VertexId,
    region: &R,
) -> Result<bool> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v {
        return Ok(true);
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([u]);
    seen[u] = true;
    while let Some(w) = queue.pop_front() {
        for &(x, e) in g.neighbors(w) {
            if seen[x] || !omega.is_open(e) {
                continue;
            }
            let (p, q) = g.segment(e);
            if !region.meets(p, q) {
                continue;
            }
            if x == v {
                return Ok(true);
            }
            seen[x] = true;
            queue.push_back(x);
        }
    }
    Ok(false)
}

/// Reusable visit marks: clearing is O(1) by bumping an epoch.
#[derive(Clone, Debug, Default)]
pub struct Marks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl Marks {
    pub fn new(n: usize) -> Self {
        Marks { stamp: vec![0; n], epoch: 1 }
    }

    pub fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    #[inline]
    pub fn is_set(&self, i: usize) -> bool {
        self.stamp[i] == self.epoch
    }

    /// Set the mark; returns false if it was already set.
    #[inline]
    pub fn set(&mut self, i: usize) -> bool {
        if self.stamp[i] == self.epoch {
            false
        } else {
            self.stamp[i] = self.epoch;
            true
        }
    }
}

/// The event `C_v ∩ ∂B_n ≠ ∅`: the cluster of `v` has vertices both in the
/// closed box `B_n` and outside the open box `(−n, n)²`.
pub fn reaches_box_boundary<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    v: VertexId,
    n: Radius,
) -> Result<bool> {
    check_vertex(g, v)?;
    if n > g.window_radius() {
        return Err(Error::RegionOutsideWindow { window: g.window() });
    }
    let mut marks = Marks::new(g.vertex_count());
    Ok(reaches_with(g, omega, v, n, &mut marks, &mut Vec::new()))
}

/// Scratch-reusing form of [`reaches_box_boundary`] without validation.
pub fn reaches_with<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    v: VertexId,
    n: Radius,
    marks: &mut Marks,
    stack: &mut Vec<VertexId>,
) -> bool {
    let p = g.point(v);
    let (mut inside, mut outside) = (p.in_box(n), p.linf_at_least(n));
    if inside && outside {
        return true;
    }
    marks.clear();
    stack.clear();
    marks.set(v);
    stack.push(v);
    while let Some(w) = stack.pop() {
        for &(x, e) in g.neighbors(w) {
            if marks.is_set(x) || !omega.is_open(e) {
                continue;
            }
            marks.set(x);
            let q = g.point(x);
            inside |= q.in_box(n);
            outside |= q.linf_at_least(n);
            if inside && outside {
                return true;
            }
            stack.push(x);
        }
    }
    false
}

/// `rad(C_v)` truncated at the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRadius {
    pub radius: u32,
    /// The cluster leaves `B_r`, so the true radius may be larger.
    pub truncated: bool,
}

/// Largest `n` such that the cluster of `v` has a vertex at L∞ distance at
/// least `n` from `v`.
pub fn cluster_radius<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    v: VertexId,
) -> Result<ClusterRadius> {
    check_vertex(g, v)?;
    let window = g.window_radius();
    let origin = g.point(v);
    let mut seen = vec![false; g.vertex_count()];
    let mut stack = vec![v];
    seen[v] = true;
    let mut out = ClusterRadius {
        radius: 0,
        truncated: !origin.in_box(window),
    };
    while let Some(w) = stack.pop() {
        let p = g.point(w);
        out.radius = out.radius.max(origin.linf_floor_distance(p));
        out.truncated |= !p.in_box(window);
        for &(x, e) in g.neighbors(w) {
            if !seen[x] && omega.is_open(e) {
                seen[x] = true;
                stack.push(x);
            }
        }
    }
    Ok(out)
}
