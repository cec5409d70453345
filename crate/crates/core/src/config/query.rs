//! Precompiled connectivity queries on a fixed subgraph.
//!
//! A query fixes the relevant edges once (edges meeting a rectangle, an
//! annulus, ...) with compact vertex ids, so that evaluating it on many
//! configurations only touches those edges.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::EdgeStates;
use crate::error::{Error, Result};
use crate::lattice::{EdgeId, EmbeddedGraph, PlanarLattice, Rect, Region, VertexId};
use crate::union_find::UnionFind;

/// Colour of a path: open primal edges, or open* dual edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    /// Colour 0: dual edges crossing closed primal edges.
    Closed,
    /// Colour 1: open primal edges.
    Open,
}

impl Colour {
    pub fn from_bit(b: u8) -> Option<Colour> {
        match b {
            0 => Some(Colour::Closed),
            1 => Some(Colour::Open),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Colour::Closed => 0,
            Colour::Open => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossDir {
    /// Left side to right side.
    Horizontal,
    /// Bottom side to top side.
    Vertical,
}

/// A subgraph of the primal or dual lattice, with states read from the
/// primal configuration (negated for the dual).
#[derive(Clone, Debug)]
pub struct Subgraph {
    /// Local endpoints and the primal edge whose state decides the edge.
    pub edges: Vec<(u32, u32, u32)>,
    pub global: Vec<VertexId>,
    pub dual: bool,
}

impl Subgraph {
    /// Edges of `graph` selected by `ids`. For a dual graph, `primal_of` maps
    /// dual edge ids to the primal edges they cross.
    pub fn new(graph: &EmbeddedGraph, ids: &[EdgeId], primal_of: Option<&[EdgeId]>) -> Self {
        let mut local: HashMap<VertexId, u32> = HashMap::new();
        let mut global = Vec::new();
        let mut id = |v: VertexId| {
            *local.entry(v).or_insert_with(|| {
                global.push(v);
                (global.len() - 1) as u32
            })
        };
        let edges = ids
            .iter()
            .map(|&e| {
                let edge = graph.edge(e);
                let state = primal_of.map_or(e, |m| m[e]);
                (id(edge.u), id(edge.v), state as u32)
            })
            .collect();
        Subgraph {
            edges,
            global,
            dual: primal_of.is_some(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.global.len()
    }

    #[inline]
    pub fn is_open<S: EdgeStates + ?Sized>(&self, omega: &S, i: usize) -> bool {
        omega.is_open(self.edges[i].2 as usize) != self.dual
    }

    /// Union the endpoints of every open edge.
    pub fn union_open<S: EdgeStates + ?Sized>(&self, omega: &S, uf: &mut UnionFind) {
        for (i, &(u, v, _)) in self.edges.iter().enumerate() {
            if self.is_open(omega, i) {
                uf.union(u as usize, v as usize);
            }
        }
    }

    pub fn local_of(&self, v: VertexId) -> Option<u32> {
        self.global.iter().position(|&w| w == v).map(|i| i as u32)
    }
}

/// Open (or open*) crossing of a rectangle between two opposite sides.
#[derive(Clone, Debug)]
pub struct CrossingQuery {
    sub: Subgraph,
    start: Vec<u32>,
    end: Vec<u32>,
}

impl CrossingQuery {
    pub fn new(
        lat: &PlanarLattice,
        rect: &Rect,
        orientation: Option<CrossDir>,
        colour: Colour,
    ) -> Result<Self> {
        lat.graph.check_region(rect)?;
        let dir = match orientation {
            Some(d) => d,
            None => match rect.width().cmp(&rect.height()) {
                std::cmp::Ordering::Greater => CrossDir::Horizontal,
                std::cmp::Ordering::Less => CrossDir::Vertical,
                std::cmp::Ordering::Equal => return Err(Error::AmbiguousOrientation),
            },
        };
        let (graph, primal_of) = match colour {
            Colour::Open => (&lat.graph, None),
            Colour::Closed => (&lat.pairing.dual, Some(lat.pairing.dual_to_primal.as_slice())),
        };
        let ids = graph.edges_meeting(rect);
        let sub = Subgraph::new(graph, &ids, primal_of);
        let sides = rect.sides();
        let (s, t) = match dir {
            CrossDir::Horizontal => (sides[0], sides[1]),
            CrossDir::Vertical => (sides[2], sides[3]),
        };
        let touching = |side: &Rect| -> Vec<u32> {
            ids.iter()
                .enumerate()
                .filter(|&(_, &e)| {
                    let (p, q) = graph.segment(e);
                    side.meets(p, q)
                })
                .map(|(i, _)| i as u32)
                .collect()
        };
        Ok(CrossingQuery {
            start: touching(&s),
            end: touching(&t),
            sub,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.sub.edges.len()
    }

    pub fn scratch(&self) -> UnionFind {
        UnionFind::new(self.sub.node_count())
    }

    pub fn eval<S: EdgeStates + ?Sized>(&self, omega: &S, uf: &mut UnionFind) -> bool {
        uf.reset();
        self.sub.union_open(omega, uf);
        let mut roots: Vec<usize> = self
            .start
            .iter()
            .filter(|&&i| self.sub.is_open(omega, i as usize))
            .map(|&i| uf.find(self.sub.edges[i as usize].0 as usize))
            .collect();
        if roots.is_empty() {
            return false;
        }
        roots.sort_unstable();
        roots.dedup();
        self.end.iter().any(|&i| {
            self.sub.is_open(omega, i as usize)
                && roots
                    .binary_search(&uf.find(self.sub.edges[i as usize].0 as usize))
                    .is_ok()
        })
    }
}

/// One-shot crossing test. A square rectangle needs an explicit orientation.
pub fn crossing<S: EdgeStates + ?Sized>(
    lat: &PlanarLattice,
    omega: &S,
    rect: &Rect,
    orientation: Option<CrossDir>,
    colour: Colour,
) -> Result<bool> {
    let q = CrossingQuery::new(lat, rect, orientation, colour)?;
    let mut uf = q.scratch();
    Ok(q.eval(omega, &mut uf))
}
