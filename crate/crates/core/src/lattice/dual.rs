//! Planar duals via face traversal of the straight-line embedding.

use std::collections::HashMap;

use super::{
    Edge, EdgeClass, EdgeId, EmbeddedGraph, Family, FamilyTag, GraphRole, LatticePoint, Orientation,
};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A primal graph's dual together with the edge correspondence.
///
/// Only bounded faces become dual vertices, so primal edges on the outer
/// boundary (or dangling) have no dual partner.
#[derive(Clone, Debug)]
pub struct DualPairing {
    pub dual: EmbeddedGraph,
    pub primal_to_dual: Vec<Option<EdgeId>>,
    pub dual_to_primal: Vec<EdgeId>,
}

impl DualPairing {
    pub fn dual_edge(&self, primal: EdgeId) -> Option<EdgeId> {
        self.primal_to_dual[primal]
    }

    pub fn primal_edge(&self, dual: EdgeId) -> EdgeId {
        self.dual_to_primal[dual]
    }
}

fn dual_family(f: Family) -> Family {
    match f {
        Family::Triangular => Family::Hexagonal,
        Family::Hexagonal => Family::Triangular,
        other => other,
    }
}

fn dual_tag(t: FamilyTag) -> FamilyTag {
    match t {
        FamilyTag::Triangular => FamilyTag::Hexagonal,
        FamilyTag::Hexagonal => FamilyTag::Triangular,
        other => other,
    }
}

/// Traced faces of a plane graph: `face_of[h]` is the face left of half-edge
/// `h` (`2e` runs `u→v`, `2e+1` runs `v→u`).
struct Faces {
    face_of: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

fn trace_faces(g: &EmbeddedGraph) -> Faces {
    let n = g.vertex_count();
    let angle = |from: LatticePoint, to: LatticePoint| (to.y() - from.y()).atan2(to.x() - from.x());
    // Outgoing half-edges of each vertex in counter-clockwise order.
    let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(n);
    for v in 0..n {
        let p = g.point(v);
        let mut out: Vec<(f64, usize)> = g
            .neighbors(v)
            .iter()
            .map(|&(w, e)| {
                let h = if g.edge(e).u == v { 2 * e } else { 2 * e + 1 };
                (angle(p, g.point(w)), h)
            })
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        rotation.push(out.into_iter().map(|(_, h)| h).collect());
    }
    let mut slot = vec![0usize; 2 * g.edge_count()];
    for rot in &rotation {
        for (i, &h) in rot.iter().enumerate() {
            slot[h] = i;
        }
    }
    let head = |h: usize| {
        let e = g.edge(h / 2);
        if h.is_multiple_of(2) {
            e.v
        } else {
            e.u
        }
    };
    let mut face_of = vec![usize::MAX; 2 * g.edge_count()];
    let mut cycles = Vec::new();
    for start in 0..2 * g.edge_count() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = id;
            cycle.push(h);
            // At the head, turn to the clockwise neighbour of the reversed edge.
            let v = head(h);
            let rot = &rotation[v];
            let i = slot[h ^ 1];
            h = rot[(i + rot.len() - 1) % rot.len()];
            if h == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    Faces { face_of, cycles }
}

fn tail(g: &EmbeddedGraph, h: usize) -> usize {
    let e = g.edge(h / 2);
    if h.is_multiple_of(2) {
        e.u
    } else {
        e.v
    }
}

/// Check the rotation system against Euler's formula, component by component.
fn check_euler(g: &EmbeddedGraph, faces: &Faces) -> Result<()> {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in g.edges() {
        uf.union(e.u, e.v);
    }
    let mut verts: HashMap<usize, i64> = HashMap::new();
    let mut edges: HashMap<usize, i64> = HashMap::new();
    let mut cycles: HashMap<usize, i64> = HashMap::new();
    for v in 0..g.vertex_count() {
        if !g.neighbors(v).is_empty() {
            *verts.entry(uf.find(v)).or_default() += 1;
        }
    }
    for e in g.edges() {
        *edges.entry(uf.find(e.u)).or_default() += 1;
    }
    for c in &faces.cycles {
        *cycles.entry(uf.find(tail(g, c[0]))).or_default() += 1;
    }
    for (root, v) in verts {
        let e = edges.get(&root).copied().unwrap_or(0);
        let f = cycles.get(&root).copied().unwrap_or(0);
        if v - e + f != 2 {
            return Err(Error::NonPlanar(format!(
                "component with {v} vertices, {e} edges and {f} faces violates Euler's formula"
            )));
        }
    }
    Ok(())
}

/// Build the planar dual of `g`: one vertex per bounded face, placed at the
/// face's vertex centroid, and one dual edge per primal edge between two
/// distinct bounded faces.
pub fn build_dual(g: &EmbeddedGraph) -> Result<DualPairing> {
    let faces = trace_faces(g);
    check_euler(g, &faces)?;

    let mut centre: Vec<Option<LatticePoint>> = Vec::with_capacity(faces.cycles.len());
    for (id, cycle) in faces.cycles.iter().enumerate() {
        let mut area2 = 0.0;
        let (mut sa, mut sb) = (0i64, 0i64);
        for &h in cycle {
            let (p, q) = (g.point(tail(g, h)), g.point(tail(g, h ^ 1)));
            area2 += p.x() * q.y() - q.x() * p.y();
            sa += p.a as i64;
            sb += p.b as i64;
        }
        if area2 <= 1e-9 {
            centre.push(None);
            continue;
        }
        let k = cycle.len() as i64;
        if sa % k != 0 || sb % k != 0 {
            return Err(Error::UnsupportedFace(id));
        }
        centre.push(Some(LatticePoint::new((sa / k) as i32, (sb / k) as i32)));
    }

    // Dual vertex ids in row-major order, matching the primal convention.
    let mut bounded: Vec<(LatticePoint, usize)> = centre
        .iter()
        .enumerate()
        .filter_map(|(f, c)| c.map(|p| (p, f)))
        .collect();
    bounded.sort_by_key(|(p, _)| (p.b, p.a));
    let mut vertex_of_face = vec![usize::MAX; faces.cycles.len()];
    let mut points = Vec::with_capacity(bounded.len());
    for (i, (p, f)) in bounded.iter().enumerate() {
        vertex_of_face[*f] = i;
        points.push(*p);
    }

    let tag = dual_tag(g.family().tag());
    let mut edges = Vec::new();
    let mut primal_to_dual = vec![None; g.edge_count()];
    let mut dual_to_primal = Vec::new();
    for (e, pe) in g.edges().iter().enumerate() {
        let (fl, fr) = (faces.face_of[2 * e], faces.face_of[2 * e + 1]);
        if fl == fr || centre[fl].is_none() || centre[fr].is_none() {
            continue;
        }
        let (u, v) = (vertex_of_face[fl], vertex_of_face[fr]);
        let orientation = Orientation::of(points[u], points[v]);
        primal_to_dual[e] = Some(edges.len());
        dual_to_primal.push(e);
        edges.push(Edge {
            u,
            v,
            class: EdgeClass {
                family: tag,
                orientation,
                index: pe.class.index,
            },
        });
    }
    let dual = EmbeddedGraph::from_parts(
        dual_family(g.family()),
        GraphRole::Dual,
        g.window(),
        points,
        edges,
    )?;
    Ok(DualPairing {
        dual,
        primal_to_dual,
        dual_to_primal,
    })
}
