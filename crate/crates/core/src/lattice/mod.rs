//! Embedded square, triangular, hexagonal and mixed lattices.
//!
//! Conventions: square cells are `√3 × 1`, triangles are equilateral with
//! side `√3` in rows `3/2` apart, and the origin and `(√3, 0)` are always
//! vertices. A graph built for window radius `r` contains every lattice vertex
//! in `[-(r+3), r+3]²`; queries are only accepted on regions inside `B_r`, so
//! the three-unit margin absorbs boundary effects (including the dual faces
//! needed by open* queries).

pub mod dual;
pub mod dump;
pub mod geometry;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use geometry::{Inflated, LatticePoint, Orientation, Radius, Rect, Region, Surd, SQRT3};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Width of the vertex margin around the usable window.
pub const MARGIN: u32 = 3;

/// Maximum edge length of every lattice built here.
pub const MAX_EDGE_LENGTH: f64 = SQRT3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Square,
    Triangular,
    Hexagonal,
    Mixed,
}

impl FamilyTag {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::Square => "square",
            FamilyTag::Triangular => "triangular",
            FamilyTag::Hexagonal => "hexagonal",
            FamilyTag::Mixed => "mixed",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyTag> {
        Some(match s {
            "square" => FamilyTag::Square,
            "triangular" => FamilyTag::Triangular,
            "hexagonal" => FamilyTag::Hexagonal,
            "mixed" => FamilyTag::Mixed,
            _ => return None,
        })
    }
}

/// A lattice family. `Mixed(m)` is the triangular lattice with a square strip
/// of half-height `m` around the x-axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Square,
    Triangular,
    Hexagonal,
    Mixed(u32),
}

impl Family {
    pub fn tag(self) -> FamilyTag {
        match self {
            Family::Square => FamilyTag::Square,
            Family::Triangular => FamilyTag::Triangular,
            Family::Hexagonal => FamilyTag::Hexagonal,
            Family::Mixed(_) => FamilyTag::Mixed,
        }
    }

    fn is_vertex(self, p: LatticePoint) -> bool {
        let (a, b) = (p.a, p.b);
        match self {
            Family::Square => a.rem_euclid(2) == 0 && b.rem_euclid(2) == 0,
            Family::Triangular => tri_row_vertex(a, b),
            Family::Hexagonal => {
                tri_row_vertex(a, b) || ((b - 1).rem_euclid(3) == 0 && tri_row_vertex(a - 1, b - 1))
            }
            Family::Mixed(m) => {
                let h = 2 * m as i32;
                if b.abs() <= h {
                    a.rem_euclid(2) == 0 && b.rem_euclid(2) == 0
                } else {
                    tri_row_vertex(a, b.abs() - h)
                }
            }
        }
    }

    /// Lattice neighbours that follow `p` in scan order.
    fn forward_neighbors(self, p: LatticePoint, out: &mut Vec<LatticePoint>) {
        out.clear();
        let (a, b) = (p.a, p.b);
        match self {
            Family::Square => {
                out.push(p.offset(2, 0));
                out.push(p.offset(0, 2));
            }
            Family::Triangular => {
                out.push(p.offset(2, 0));
                out.push(p.offset(1, 3));
                out.push(p.offset(-1, 3));
            }
            Family::Hexagonal => {
                if tri_row_vertex(a, b) {
                    out.push(p.offset(1, 1));
                    out.push(p.offset(-1, 1));
                } else {
                    out.push(p.offset(0, 2));
                }
            }
            Family::Mixed(m) => {
                let h = 2 * m as i32;
                out.push(p.offset(2, 0));
                if b < -h || b >= h {
                    out.push(p.offset(1, 3));
                    out.push(p.offset(-1, 3));
                } else {
                    out.push(p.offset(0, 2));
                }
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Mixed(m) => write!(f, "mixed(m={m})"),
            other => f.write_str(other.tag().as_str()),
        }
    }
}

/// Row `b` is a triangular row (`b = 3t`) and `a ≡ t (mod 2)`.
fn tri_row_vertex(a: i32, b: i32) -> bool {
    b.rem_euclid(3) == 0 && (a - b.div_euclid(3)).rem_euclid(2) == 0
}

/// Probability class of an edge: the family it belongs to, its direction, and
/// the parameter index `0..3` it draws its intensity from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeClass {
    pub family: FamilyTag,
    pub orientation: Orientation,
    pub index: Option<u8>,
}

impl EdgeClass {
    pub fn new(family: FamilyTag, orientation: Orientation) -> Self {
        use Orientation::*;
        let index = match (family, orientation) {
            (FamilyTag::Square, Horizontal) => Some(0),
            (FamilyTag::Square, Vertical) => Some(1),
            (FamilyTag::Triangular, Horizontal) => Some(0),
            (FamilyTag::Triangular, TriRight) => Some(1),
            (FamilyTag::Triangular, TriLeft) => Some(2),
            (FamilyTag::Hexagonal, Vertical) => Some(0),
            (FamilyTag::Hexagonal, HexRight) => Some(1),
            (FamilyTag::Hexagonal, HexLeft) => Some(2),
            (FamilyTag::Mixed, Horizontal | Vertical) => Some(0),
            (FamilyTag::Mixed, TriRight) => Some(1),
            (FamilyTag::Mixed, TriLeft) => Some(2),
            _ => None,
        };
        EdgeClass { family, orientation, index }
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.family.as_str(), self.orientation.as_str())
    }

    pub fn parse_label(s: &str) -> Option<EdgeClass> {
        let (fam, orient) = s.split_once(':')?;
        Some(EdgeClass::new(FamilyTag::parse(fam)?, Orientation::parse(orient)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub class: EdgeClass,
}

impl Edge {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphRole {
    Primal,
    Dual,
}

/// A straight-line planar graph on grid points.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    family: Family,
    role: GraphRole,
    window: u32,
    points: Vec<LatticePoint>,
    edges: Vec<Edge>,
    lookup: HashMap<LatticePoint, VertexId>,
    adj_start: Vec<usize>,
    adj: Vec<(VertexId, EdgeId)>,
    axis: Vec<(i32, VertexId)>,
}

impl EmbeddedGraph {
    /// Assemble a graph from raw parts. Vertices must be distinct points.
    pub fn from_parts(
        family: Family,
        role: GraphRole,
        window: u32,
        points: Vec<LatticePoint>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if lookup.insert(*p, i).is_some() {
                return Err(Error::NonPlanar(format!("duplicate vertex at {p:?}")));
            }
        }
        let mut degree = vec![0usize; points.len() + 1];
        for e in &edges {
            if e.u >= points.len() || e.v >= points.len() || e.u == e.v {
                return Err(Error::NonPlanar(format!("bad edge {}-{}", e.u, e.v)));
            }
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut adj_start = Vec::with_capacity(points.len() + 1);
        let mut acc = 0;
        for d in degree.iter().take(points.len()) {
            adj_start.push(acc);
            acc += d;
        }
        adj_start.push(acc);
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, 0); acc];
        for (id, e) in edges.iter().enumerate() {
            adj[fill[e.u]] = (e.v, id);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, id);
            fill[e.v] += 1;
        }
        let mut axis = Vec::new();
        if role == GraphRole::Primal {
            // x_i = (i√3, 0) with |i|√3 ≤ r, i.e. 3a² ≤ 4r² for a = 2i.
            let r = window as i64;
            for (v, p) in points.iter().enumerate() {
                let a = p.a as i64;
                if p.b == 0 && a % 2 == 0 && 3 * a * a <= 4 * r * r {
                    axis.push((p.a / 2, v));
                }
            }
            axis.sort_unstable();
        }
        Ok(EmbeddedGraph {
            family,
            role,
            window,
            points,
            edges,
            lookup,
            adj_start,
            adj,
            axis,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn role(&self) -> GraphRole {
        self.role
    }

    /// Usable window radius `r`; queries must stay inside `B_r`.
    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn window_radius(&self) -> Radius {
        Radius::int(self.window as i64)
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn point(&self, v: VertexId) -> LatticePoint {
        self.points[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn segment(&self, e: EdgeId) -> (LatticePoint, LatticePoint) {
        let edge = &self.edges[e];
        (self.points[edge.u], self.points[edge.v])
    }

    pub fn vertex_at(&self, p: LatticePoint) -> Option<VertexId> {
        self.lookup.get(&p).copied()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.neighbors(u).iter().find(|(w, _)| *w == v).map(|&(_, e)| e)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    /// The axis vertices `x_i = (i√3, 0)` present in the window, ordered by `i`.
    pub fn axis_vertices(&self) -> &[(i32, VertexId)] {
        &self.axis
    }

    /// The vertex `x_i`, if it lies inside the window.
    pub fn axis_vertex(&self, i: i32) -> Option<VertexId> {
        self.axis.iter().find(|(j, _)| *j == i).map(|&(_, v)| v)
    }

    /// Vertices on the x-axis (`V_0`).
    pub fn axis_line_vertices(&self) -> Vec<VertexId> {
        let mut v: Vec<_> = (0..self.points.len()).filter(|&v| self.points[v].b == 0).collect();
        v.sort_by_key(|&v| self.points[v].a);
        v
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| {
                let (p, q) = (self.points[e.u], self.points[e.v]);
                (p.x() - q.x()).hypot(p.y() - q.y())
            })
            .fold(0.0, f64::max)
    }

    /// Whether the rectangle lies inside the usable window `B_r`.
    pub fn admits(&self, rect: &Rect) -> bool {
        rect.linf_extent() <= self.window_radius()
    }

    pub fn check_region(&self, rect: &Rect) -> Result<()> {
        if self.admits(rect) {
            Ok(())
        } else {
            Err(Error::RegionOutsideWindow { window: self.window })
        }
    }

    /// Edges whose closed segment meets the closed rectangle.
    pub fn edges_intersecting(&self, rect: &Rect) -> Result<Vec<EdgeId>> {
        self.check_region(rect)?;
        Ok(self.edges_meeting(rect))
    }

    /// Edges meeting an arbitrary region, without a window check.
    pub fn edges_meeting<R: Region + ?Sized>(&self, region: &R) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&e| {
                let (p, q) = self.segment(e);
                region.meets(p, q)
            })
            .collect()
    }

    /// Indicator vector of `edges_meeting`.
    pub fn edge_mask<R: Region + ?Sized>(&self, region: &R) -> Vec<bool> {
        (0..self.edges.len())
            .map(|e| {
                let (p, q) = self.segment(e);
                region.meets(p, q)
            })
            .collect()
    }
}

/// A primal lattice together with its dual, as needed by open* queries.
#[derive(Clone, Debug)]
pub struct PlanarLattice {
    pub graph: EmbeddedGraph,
    pub pairing: dual::DualPairing,
}

impl PlanarLattice {
    pub fn new(graph: EmbeddedGraph) -> Result<Self> {
        let pairing = dual::build_dual(&graph)?;
        Ok(PlanarLattice { graph, pairing })
    }

    pub fn build(family: Family, window_radius: u32) -> Result<Self> {
        let g = match family {
            Family::Mixed(m) => build_mixed(MixedLatticeSpec { m, window_radius })?,
            f => build_lattice(f, window_radius)?,
        };
        PlanarLattice::new(g)
    }

    pub fn dual(&self) -> &EmbeddedGraph {
        &self.pairing.dual
    }

    /// The dual point `y_i = ((i+½)√3, ½)`, when it is a dual vertex.
    pub fn dual_axis_vertex(&self, i: i32) -> Option<VertexId> {
        self.pairing.dual.vertex_at(dual_axis_point(i))
    }
}

/// Position of `y_i`.
pub fn dual_axis_point(i: i32) -> LatticePoint {
    LatticePoint::new(2 * i + 1, 1)
}

/// Build the square, triangular or hexagonal lattice for window radius `r`.
pub fn build_lattice(family: Family, window_radius: u32) -> Result<EmbeddedGraph> {
    if window_radius < 3 {
        return Err(Error::WindowTooSmall(window_radius));
    }
    if let Family::Mixed(_) = family {
        return Err(Error::UnsupportedFamily(
            "mixed lattices are built with build_mixed".into(),
        ));
    }
    Ok(generate(family, window_radius))
}

/// Specification of a mixed lattice `𝕃^m` inside a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedLatticeSpec {
    pub m: u32,
    pub window_radius: u32,
}

/// Build `𝕃^m`: square rows at integer heights `|y| ≤ m`, triangular beyond.
pub fn build_mixed(spec: MixedLatticeSpec) -> Result<EmbeddedGraph> {
    if spec.window_radius < 3 {
        return Err(Error::WindowTooSmall(spec.window_radius));
    }
    Ok(generate(Family::Mixed(spec.m), spec.window_radius))
}

fn generate(family: Family, window: u32) -> EmbeddedGraph {
    let extent = (window + MARGIN) as i64;
    let bound = Surd::int(2 * extent);
    let b_max = 2 * extent as i32;
    // |a|√3 ≤ 2·extent
    let a_max = (0..).take_while(|a: &i64| 3 * a * a <= 4 * extent * extent).last().unwrap() as i32;
    let inside = |p: LatticePoint| p.dx().abs() <= bound && p.dy().abs() <= bound;

    let mut points = Vec::new();
    for b in -b_max..=b_max {
        for a in -a_max..=a_max {
            let p = LatticePoint::new(a, b);
            if family.is_vertex(p) && inside(p) {
                points.push(p);
            }
        }
    }
    let lookup: HashMap<LatticePoint, VertexId> =
        points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let tag = family.tag();
    let mut edges = Vec::new();
    let mut fwd = Vec::with_capacity(3);
    for (u, &p) in points.iter().enumerate() {
        family.forward_neighbors(p, &mut fwd);
        for &q in &fwd {
            if let Some(&v) = lookup.get(&q) {
                edges.push(Edge {
                    u,
                    v,
                    class: EdgeClass::new(tag, Orientation::of(p, q)),
                });
            }
        }
    }
    EmbeddedGraph::from_parts(family, GraphRole::Primal, window, points, edges)
        .expect("generated lattices are well formed")
}
