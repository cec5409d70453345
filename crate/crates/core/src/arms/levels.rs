//! Integer L∞ levels of vertices and edges, for fast multi-radius queries.

use crate::config::{EdgeStates, Marks};
use crate::lattice::{EdgeId, EmbeddedGraph, LatticePoint, Radius, Rect, VertexId};

use super::Annulus;

/// `vertex(v) = ⌊‖v‖∞⌋`, so `‖v‖∞ ≥ n ⇔ vertex(v) ≥ n` for integer `n`;
/// `edge(e)` is the least integer `n` such that `e` meets `B_n`.
#[derive(Clone, Debug)]
pub struct Levels {
    vertex: Vec<u32>,
    edge: Vec<u32>,
}

impl Levels {
    pub fn new(g: &EmbeddedGraph) -> Self {
        let vertex: Vec<u32> = g
            .points()
            .iter()
            .map(|p| p.linf_floor_distance(LatticePoint::ORIGIN))
            .collect();
        let edge = g
            .edges()
            .iter()
            .map(|e| {
                let (p, q) = (g.point(e.u), g.point(e.v));
                // Edges are shorter than 2, so the segment's minimum lies
                // within two levels of its nearer endpoint.
                let mut n = vertex[e.u].min(vertex[e.v]).saturating_sub(2);
                while !Rect::centered(Radius::int(n as i64)).meets_segment(p, q) {
                    n += 1;
                }
                n
            })
            .collect();
        Levels { vertex, edge }
    }

    #[inline]
    pub fn vertex(&self, v: VertexId) -> u32 {
        self.vertex[v]
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> u32 {
        self.edge[e]
    }

    /// The edge meets the closed annulus `B_n \ (−N, N)²`.
    #[inline]
    pub fn in_annulus(&self, g: &EmbeddedGraph, e: EdgeId, ann: Annulus) -> bool {
        let edge = g.edge(e);
        self.edge[e] <= ann.outer && self.vertex[edge.u].max(self.vertex[edge.v]) >= ann.inner
    }
}

/// Explore the open clusters of `seeds` and return the largest vertex level
/// reached, stopping early once `cap` is reached.
///
/// With `inner = Some(N)` only edges with an endpoint outside `(−N, N)²` are
/// used, which makes the result the outer reach of annulus crossings from
/// `B_N`: `A_(1)(N, n)` holds iff the result is at least `n` (for seeds that
/// are the endpoints of open inner-contact edges).
#[allow(clippy::too_many_arguments)]
pub fn max_reach_level<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    levels: &Levels,
    omega: &S,
    seeds: &[VertexId],
    inner: Option<u32>,
    cap: u32,
    marks: &mut Marks,
    stack: &mut Vec<VertexId>,
) -> u32 {
    marks.clear();
    stack.clear();
    let mut best = 0;
    for &s in seeds {
        if marks.set(s) {
            best = best.max(levels.vertex(s));
            stack.push(s);
        }
    }
    if best >= cap {
        return best;
    }
    let floor = inner.unwrap_or(0);
    while let Some(w) = stack.pop() {
        let lw = levels.vertex(w);
        for &(x, e) in g.neighbors(w) {
            if marks.is_set(x) {
                continue;
            }
            let lx = levels.vertex(x);
            if lw.max(lx) < floor || !omega.is_open(e) {
                continue;
            }
            marks.set(x);
            if lx > best {
                best = lx;
                if best >= cap {
                    return best;
                }
            }
            stack.push(x);
        }
    }
    best
}
