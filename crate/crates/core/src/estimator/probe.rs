//! Shared-sample evaluation of one event at several outer radii.

use crate::arms::{
    crossing_clusters, dual_origin, inner_radius_minimum, max_reach_level, Annulus, ColourSequence, EventSpec,
    Levels,
};
use crate::config::{DualStates, EdgeStates, Marks, Sampler};
use crate::criticality::ModelSpec;
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, PlanarLattice, VertexId};
use crate::rng::SeedSpec;
use crate::union_find::UnionFind;

use super::TrialEvent;

#[derive(Clone, Debug)]
enum Kind {
    /// `A_1` and `A_2`: one exploration each from `x_0` (and `y_0`) gives every radius.
    AxisReach { x0: VertexId, y0: Option<VertexId> },
    /// `A_2j`, `j ≥ 2`: reach plus restricted disconnection, radius by radius.
    AxisSeparated { xs: Vec<VertexId> },
    /// `A_(1)(N, ·)`: one exploration from the open inner contacts.
    AnnulusOne { inner: u32, contacts: Vec<EdgeId> },
    /// General `A_σ(N, ·)` by counting crossing clusters.
    Annulus { sigma: ColourSequence, inner: u32 },
}

/// A model, an event and a list of radii, ready for repeated trials.
#[derive(Clone, Debug)]
pub struct EventProbe {
    radii: Vec<u32>,
    lat: PlanarLattice,
    sampler: Sampler,
    levels: Levels,
    dual_levels: Option<Levels>,
    kind: Kind,
}

pub struct ProbeScratch {
    marks: Marks,
    dual_marks: Marks,
    stack: Vec<VertexId>,
    seeds: Vec<VertexId>,
    uf: UnionFind,
    flags: Vec<u8>,
}

impl EventProbe {
    pub fn new(model: &ModelSpec, event: &EventSpec, radii: &[u32]) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidExperiment("no radii given".into()));
        }
        for &n in radii {
            event.with_radius(n).validate()?;
        }
        let window = radii.iter().copied().max().unwrap_or(0).max(3);
        let lat = PlanarLattice::build(model.family, window)?;
        let sampler = Sampler::for_model(model, &lat.graph)?;
        let levels = Levels::new(&lat.graph);
        let g = &lat.graph;
        let axis = |i: i32| {
            g.axis_vertex(i)
                .ok_or_else(|| Error::InvalidEvent(format!("x_{i} is outside the window")))
        };
        let mut needs_dual = false;
        let kind = match event {
            EventSpec::Axis { k, .. } if *k <= 2 => {
                let y0 = if *k == 2 {
                    needs_dual = true;
                    Some(dual_origin(&lat)?)
                } else {
                    None
                };
                Kind::AxisReach { x0: axis(0)?, y0 }
            }
            EventSpec::Axis { k, .. } => Kind::AxisSeparated {
                xs: (0..(*k / 2) as i32).map(axis).collect::<Result<_>>()?,
            },
            EventSpec::Annulus { sigma, inner, .. } => {
                let min = inner_radius_minimum(model.family, sigma)?;
                if *inner < min {
                    return Err(Error::InnerRadiusTooSmall { inner: *inner, min });
                }
                if sigma.len() == 1 {
                    let contacts = (0..g.edge_count())
                        .filter(|&e| {
                            let edge = g.edge(e);
                            levels.edge(e) <= *inner && levels.vertex(edge.u).max(levels.vertex(edge.v)) >= *inner
                        })
                        .collect();
                    Kind::AnnulusOne { inner: *inner, contacts }
                } else {
                    needs_dual = sigma.len() == 2;
                    Kind::Annulus { sigma: sigma.clone(), inner: *inner }
                }
            }
        };
        let dual_levels = needs_dual.then(|| Levels::new(lat.dual()));
        Ok(EventProbe {
            radii: radii.to_vec(),
            lat,
            sampler,
            levels,
            dual_levels,
            kind,
        })
    }

    pub fn lattice(&self) -> &PlanarLattice {
        &self.lat
    }

    pub fn radii(&self) -> &[u32] {
        &self.radii
    }

    /// Evaluate a given configuration (one flag per radius).
    pub fn evaluate_config<S: EdgeStates + ?Sized>(&self, omega: &S, s: &mut ProbeScratch, out: &mut [bool]) {
        let g = &self.lat.graph;
        let cap = self.radii.iter().copied().max().unwrap_or(0);
        match &self.kind {
            Kind::AxisReach { x0, y0 } => {
                let mut level = max_reach_level(g, &self.levels, omega, &[*x0], None, cap, &mut s.marks, &mut s.stack);
                if let (Some(y0), Some(dl)) = (y0, &self.dual_levels) {
                    if level > 0 {
                        let dual = DualStates::new(omega, &self.lat.pairing);
                        let dual_level = max_reach_level(
                            self.lat.dual(),
                            dl,
                            &dual,
                            &[*y0],
                            None,
                            level,
                            &mut s.dual_marks,
                            &mut s.stack,
                        );
                        level = level.min(dual_level);
                    }
                }
                for (o, &n) in out.iter_mut().zip(&self.radii) {
                    *o = level >= n;
                }
            }
            Kind::AxisSeparated { xs } => {
                for (o, &n) in out.iter_mut().zip(&self.radii) {
                    *o = self.separated(omega, xs, n, s);
                }
            }
            Kind::AnnulusOne { inner, contacts } => {
                s.seeds.clear();
                for &e in contacts {
                    if omega.is_open(e) {
                        let edge = g.edge(e);
                        s.seeds.push(edge.u);
                        s.seeds.push(edge.v);
                    }
                }
                let level = if s.seeds.is_empty() {
                    0
                } else {
                    max_reach_level(g, &self.levels, omega, &s.seeds, Some(*inner), cap, &mut s.marks, &mut s.stack)
                };
                for (o, &n) in out.iter_mut().zip(&self.radii) {
                    *o = !s.seeds.is_empty() && level >= n;
                }
            }
            Kind::Annulus { sigma, inner } => {
                let j = sigma.len() / 2;
                for (o, &n) in out.iter_mut().zip(&self.radii) {
                    let ann = Annulus { inner: *inner, outer: n };
                    let primal = crossing_clusters(g, &self.levels, omega, ann, &mut s.uf, &mut s.flags);
                    *o = if j >= 2 {
                        primal >= j
                    } else if primal == 0 {
                        false
                    } else {
                        let dual = DualStates::new(omega, &self.lat.pairing);
                        let dl = self.dual_levels.as_ref().expect("dual levels for (1,0)");
                        crossing_clusters(self.lat.dual(), dl, &dual, ann, &mut s.uf, &mut s.flags) >= 1
                    };
                }
            }
        }
    }

    fn separated<S: EdgeStates + ?Sized>(&self, omega: &S, xs: &[VertexId], n: u32, s: &mut ProbeScratch) -> bool {
        let g = &self.lat.graph;
        for &x in xs {
            if max_reach_level(g, &self.levels, omega, &[x], None, n, &mut s.marks, &mut s.stack) < n {
                return false;
            }
        }
        for i in 1..xs.len() {
            s.marks.clear();
            s.stack.clear();
            s.marks.set(xs[i]);
            s.stack.push(xs[i]);
            while let Some(w) = s.stack.pop() {
                if xs[..i].contains(&w) {
                    return false;
                }
                for &(x, e) in g.neighbors(w) {
                    if !s.marks.is_set(x) && self.levels.edge(e) <= n && omega.is_open(e) {
                        s.marks.set(x);
                        s.stack.push(x);
                    }
                }
            }
        }
        true
    }
}

impl TrialEvent for EventProbe {
    type Scratch = ProbeScratch;

    fn outcomes(&self) -> usize {
        self.radii.len()
    }

    fn scratch(&self) -> ProbeScratch {
        ProbeScratch {
            marks: Marks::new(self.lat.graph.vertex_count()),
            dual_marks: Marks::new(self.lat.dual().vertex_count()),
            stack: Vec::new(),
            seeds: Vec::new(),
            uf: UnionFind::new(self.lat.graph.vertex_count()),
            flags: Vec::new(),
        }
    }

    fn evaluate(&self, seed: u64, trial: u64, scratch: &mut ProbeScratch, out: &mut [bool]) {
        let omega = self.sampler.lazy(SeedSpec::sample(seed, trial));
        self.evaluate_config(&omega, scratch, out);
    }
}
