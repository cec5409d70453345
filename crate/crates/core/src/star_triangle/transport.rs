//! Path transport across a sweep: connections inside a region `R` survive in
//! `R + D` (`D` the closed unit disk), and disconnections in `R + D` survive
//! in `R`.

use serde::{Deserialize, Serialize};

use crate::config::EdgeStates;
use crate::error::{Error, Result};
use crate::lattice::{EmbeddedGraph, Inflated, Radius, Rect, Region};
use crate::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportViolation {
    /// Axis indices of the two vertices.
    pub pair: (i32, i32),
    /// `'a'`: a connection in `R` was lost in `R + D`; `'b'`: a disconnection
    /// in `R + D` was lost in `R`.
    pub kind: char,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportReport {
    pub pairs_checked: usize,
    pub violations: Vec<TransportViolation>,
}

impl TransportReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn restricted<S: EdgeStates + ?Sized, R: Region + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    region: &R,
) -> UnionFind {
    let mut uf = UnionFind::new(g.vertex_count());
    for (e, edge) in g.edges().iter().enumerate() {
        if omega.is_open(e) && region.meets(g.point(edge.u), g.point(edge.v)) {
            uf.union(edge.u, edge.v);
        }
    }
    uf
}

/// Check both transport properties for the given axis-vertex pairs.
///
/// `before` lives on `g` and `after` on `h` (the swept lattice). `R + D` must
/// fit in `h`'s window and every pair must consist of axis vertices in `R`.
pub fn transport_check<A: EdgeStates + ?Sized, B: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    before: &A,
    h: &EmbeddedGraph,
    after: &B,
    region: &Rect,
    pairs: &[(i32, i32)],
) -> Result<TransportReport> {
    if region.linf_extent().plus_int(1) > Radius::int(h.window() as i64) {
        return Err(Error::RegionOutsideWindow { window: h.window() });
    }
    let lookup = |i: i32| -> Result<(usize, usize)> {
        let u = g.axis_vertex(i).ok_or_else(|| Error::InvalidEvent(format!("x_{i} is outside the window")))?;
        if !region.contains(g.point(u)) {
            return Err(Error::InvalidEvent(format!("x_{i} is outside the region")));
        }
        let v = h
            .vertex_at(g.point(u))
            .ok_or_else(|| Error::InvalidSweep(format!("x_{i} moved during the sweep")))?;
        Ok((u, v))
    };
    let mut ids = Vec::with_capacity(pairs.len());
    for &(i, j) in pairs {
        ids.push((lookup(i)?, lookup(j)?));
    }
    let grown = Inflated::unit(*region);
    let mut g_r = restricted(g, before, region);
    let mut g_rd = restricted(g, before, &grown);
    let mut h_r = restricted(h, after, region);
    let mut h_rd = restricted(h, after, &grown);
    let mut report = TransportReport::default();
    for (&(i, j), &((gu, hu), (gv, hv))) in pairs.iter().zip(&ids) {
        report.pairs_checked += 1;
        if g_r.same(gu, gv) && !h_rd.same(hu, hv) {
            report.violations.push(TransportViolation { pair: (i, j), kind: 'a' });
        }
        if !g_rd.same(gu, gv) && h_r.same(hu, hv) {
            report.violations.push(TransportViolation { pair: (i, j), kind: 'b' });
        }
    }
    Ok(report)
}
