//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is written from the definitions, with its own adjacency
//! lists and floating-point geometry, so that it shares no search code with
//! the library.
#![allow(dead_code)]

pub mod checks;
pub mod sweeps;

use bondperc::lattice::{EdgeId, EmbeddedGraph, LatticePoint, PlanarLattice, VertexId};

pub type Adjacency = Vec<Vec<(VertexId, EdgeId)>>;

pub fn adjacency(g: &EmbeddedGraph) -> Adjacency {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        adj[edge.u].push((edge.v, e));
        adj[edge.v].push((edge.u, e));
    }
    adj
}

pub fn xy(p: LatticePoint) -> (f64, f64) {
    (p.a as f64 * 3f64.sqrt() / 2.0, p.b as f64 / 2.0)
}

pub fn linf(p: LatticePoint) -> f64 {
    let (x, y) = xy(p);
    x.abs().max(y.abs())
}

/// Closed segment against closed rectangle `[x0, x1] × [y0, y1]` (Liang–Barsky).
pub fn segment_meets_rect(p: LatticePoint, q: LatticePoint, r: [f64; 4]) -> bool {
    const EPS: f64 = 1e-9;
    let (px, py) = xy(p);
    let (qx, qy) = xy(q);
    let (dx, dy) = (qx - px, qy - py);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (d, lo, hi, s) in [(dx, r[0], r[1], px), (dy, r[2], r[3], py)] {
        if d.abs() < 1e-15 {
            if s < lo - EPS || s > hi + EPS {
                return false;
            }
            continue;
        }
        let (a, b) = ((lo - EPS - s) / d, (hi + EPS - s) / d);
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        t0 = t0.max(a);
        t1 = t1.min(b);
        if t0 > t1 {
            return false;
        }
    }
    true
}

pub fn segment_meets_box(p: LatticePoint, q: LatticePoint, n: f64) -> bool {
    segment_meets_rect(p, q, [-n, n, -n, n])
}

/// Vertices reachable from `start` along edges accepted by `usable`.
pub fn component(adj: &Adjacency, start: &[VertexId], usable: &dyn Fn(EdgeId) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = Vec::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &(w, e) in &adj[v] {
            if !seen[w] && usable(e) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// Warshall closure of the open-edge relation.
pub fn transitive_closure(vertices: usize, edges: &[(usize, usize)], open: &[bool]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; vertices]; vertices];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (&(u, v), &o) in edges.iter().zip(open) {
        if o {
            r[u][v] = true;
            r[v][u] = true;
        }
    }
    for k in 0..vertices {
        for i in 0..vertices {
            if r[i][k] {
                for j in 0..vertices {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// States of the dual edges: open* exactly when the crossed primal edge is closed.
pub fn dual_states(lat: &PlanarLattice, open: &[bool]) -> Vec<bool> {
    lat.pairing.dual_to_primal.iter().map(|&e| !open[e]).collect()
}

/// `C_v` has a vertex in `B_n` and a vertex at L∞ distance at least `n`.
pub fn reaches(g: &EmbeddedGraph, adj: &Adjacency, open: &[bool], v: VertexId, n: f64) -> bool {
    let c = component(adj, &[v], &|e| open[e]);
    let pts = || (0..g.vertex_count()).filter(|&w| c[w]).map(|w| linf(g.point(w)));
    pts().any(|d| d <= n) && pts().any(|d| d >= n)
}

/// Largest integer `r` such that `C_v` has a vertex at L∞ distance ≥ `r` from `v`.
pub fn cluster_extent(g: &EmbeddedGraph, adj: &Adjacency, open: &[bool], v: VertexId) -> u32 {
    let c = component(adj, &[v], &|e| open[e]);
    let (vx, vy) = xy(g.point(v));
    (0..g.vertex_count())
        .filter(|&w| c[w])
        .map(|w| {
            let (x, y) = xy(g.point(w));
            ((x - vx).abs().max((y - vy).abs()) + 1e-9).floor() as u32
        })
        .max()
        .unwrap_or(0)
}

fn axis_point(i: i32) -> LatticePoint {
    LatticePoint::new(2 * i, 0)
}

/// The axis event `A_k(n)` evaluated from its definition.
pub fn axis_event(lat: &PlanarLattice, open: &[bool], k: u32, n: f64) -> bool {
    let g = &lat.graph;
    let adj = adjacency(g);
    let x = |i: i32| g.vertex_at(axis_point(i)).expect("axis vertex");
    if k <= 2 {
        if !reaches(g, &adj, open, x(0), n) {
            return false;
        }
        if k == 1 {
            return true;
        }
        let dual = lat.dual();
        let y0 = dual.vertex_at(LatticePoint::new(1, 1)).expect("dual origin");
        return reaches(dual, &adjacency(dual), &dual_states(lat, open), y0, n);
    }
    let j = (k / 2) as i32;
    if !(0..j).all(|i| reaches(g, &adj, open, x(i), n)) {
        return false;
    }
    for i in 1..j {
        let c = component(&adj, &[x(i)], &|e| {
            let (p, q) = g.segment(e);
            open[e] && segment_meets_box(p, q, n)
        });
        if (0..i).any(|l| c[x(l)]) {
            return false;
        }
    }
    true
}

/// Open (or open*) crossing of `rect` between its left and right sides
/// (`horizontal`) or bottom and top sides, using edges that meet the rectangle.
pub fn crossing(lat: &PlanarLattice, open: &[bool], rect: [f64; 4], horizontal: bool, dual: bool) -> bool {
    let (g, states) = if dual {
        (lat.dual(), dual_states(lat, open))
    } else {
        (&lat.graph, open.to_vec())
    };
    let adj = adjacency(g);
    let [x0, x1, y0, y1] = rect;
    let (s, t) = if horizontal {
        ([x0, x0, y0, y1], [x1, x1, y0, y1])
    } else {
        ([x0, x1, y0, y0], [x0, x1, y1, y1])
    };
    let usable = |e: EdgeId| {
        let (p, q) = g.segment(e);
        states[e] && segment_meets_rect(p, q, rect)
    };
    let touching = |side: [f64; 4]| -> Vec<EdgeId> {
        (0..g.edge_count())
            .filter(|&e| {
                let (p, q) = g.segment(e);
                usable(e) && segment_meets_rect(p, q, side)
            })
            .collect()
    };
    let starts: Vec<VertexId> = touching(s).iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect();
    let c = component(&adj, &starts, &usable);
    touching(t).iter().any(|&e| c[g.edge(e).u])
}

/// One crossing of an annulus: its vertices, inner end first.
#[derive(Clone, Debug)]
pub struct Arm {
    pub vertices: Vec<VertexId>,
}

/// Edges of `g` in the annulus `B_n \ (−N, N)²`: they meet `B_n` and have an
/// endpoint at L∞ distance at least `N`.
pub fn annulus_edges(g: &EmbeddedGraph, inner: f64, outer: f64) -> Vec<bool> {
    (0..g.edge_count())
        .map(|e| {
            let (p, q) = g.segment(e);
            segment_meets_box(p, q, outer) && linf(p).max(linf(q)) >= inner
        })
        .collect()
}

/// Open crossings of the annulus in `g`, one per crossing cluster.
///
/// An arm is a path of open annulus edges whose first edge meets `B_N` and
/// whose last vertex is at L∞ distance at least `n`.
pub fn annulus_arms(g: &EmbeddedGraph, states: &[bool], inner: f64, outer: f64) -> Vec<Arm> {
    let adj = adjacency(g);
    let member = annulus_edges(g, inner, outer);
    let in_annulus = |e: EdgeId| states[e] && member[e];
    let inner_contact = |e: EdgeId| {
        let (p, q) = g.segment(e);
        in_annulus(e) && segment_meets_box(p, q, inner)
    };
    let mut done = vec![false; g.vertex_count()];
    let mut arms = Vec::new();
    for e in 0..g.edge_count() {
        if !inner_contact(e) || done[g.edge(e).u] {
            continue;
        }
        let cluster = component(&adj, &[g.edge(e).u], &in_annulus);
        for (v, &c) in cluster.iter().enumerate() {
            done[v] |= c;
        }
        // Breadth-first search from every inner contact of this cluster.
        let mut prev = vec![usize::MAX; g.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        for f in (0..g.edge_count()).filter(|&f| inner_contact(f) && cluster[g.edge(f).u]) {
            for v in [g.edge(f).u, g.edge(f).v] {
                if prev[v] == usize::MAX {
                    prev[v] = v;
                    queue.push_back(v);
                }
            }
        }
        let mut end = None;
        while let Some(v) = queue.pop_front() {
            if linf(g.point(v)) >= outer {
                end = Some(v);
                break;
            }
            for &(w, f) in &adj[v] {
                if prev[w] == usize::MAX && in_annulus(f) {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if let Some(mut v) = end {
            let mut vertices = vec![v];
            while prev[v] != v {
                v = prev[v];
                vertices.push(v);
            }
            vertices.reverse();
            arms.push(Arm { vertices });
        }
    }
    arms
}

/// Witness arms for an alternating (or one-arm) event.
#[derive(Clone, Debug)]
pub struct ArmWitness {
    pub primal: Vec<Arm>,
    pub dual: Vec<Arm>,
}

/// Open and open* crossings of the annulus `B_n \ (−N, N)²`.
pub fn all_arms(lat: &PlanarLattice, open: &[bool], inner: u32, outer: u32) -> (Vec<Arm>, Vec<Arm>) {
    let (inner, outer) = (inner as f64, outer as f64);
    (
        annulus_arms(&lat.graph, open, inner, outer),
        annulus_arms(lat.dual(), &dual_states(lat, open), inner, outer),
    )
}

/// Search for the arms of an alternating event of length `2j`.
///
/// For `j = 1` this is an open and an open* crossing. For `j ≥ 2` it is `j`
/// pairwise vertex-disjoint open crossings that no open path in the annulus
/// joins: by planar duality each pair of cyclically adjacent ones is then
/// separated by an open* crossing of the annulus graph's dual, which is not
/// searched for separately. Dual arms may share dual vertices, following the
/// convention that arms are vertex-disjoint except at the dual points between
/// them; only the primal arms are required to be disjoint.
pub fn alternating_witness(lat: &PlanarLattice, open: &[bool], primal: &[Arm], dual: &[Arm], j: usize, ann: (u32, u32)) -> Option<ArmWitness> {
    if j == 1 {
        return match (primal.first(), dual.first()) {
            (Some(a), Some(d)) => Some(ArmWitness { primal: vec![a.clone()], dual: vec![d.clone()] }),
            _ => None,
        };
    }
    let g = &lat.graph;
    let adj = adjacency(g);
    let member = annulus_edges(g, ann.0 as f64, ann.1 as f64);
    let mut chosen: Vec<Arm> = Vec::new();
    for arm in primal {
        let reach = component(&adj, &arm.vertices[..1], &|e| open[e] && member[e]);
        if chosen.iter().all(|c| !c.vertices.iter().any(|&v| reach[v])) {
            chosen.push(arm.clone());
        }
        if chosen.len() == j {
            return Some(ArmWitness { primal: chosen, dual: Vec::new() });
        }
    }
    None
}

/// Witness for `A_σ(N, n)` with `σ = (1)` (`one_arm`) or alternating of length `2j`.
pub fn arm_event(lat: &PlanarLattice, open: &[bool], j: usize, one_arm: bool, inner: u32, outer: u32) -> Option<ArmWitness> {
    let (primal, dual) = all_arms(lat, open, inner, outer);
    if one_arm {
        return primal.first().map(|a| ArmWitness { primal: vec![a.clone()], dual: vec![] });
    }
    alternating_witness(lat, open, &primal, &dual, j, (inner, outer))
}

/// Every pair of primal arms in the witness is vertex-disjoint.
pub fn primal_arms_disjoint(w: &ArmWitness) -> bool {
    for (i, a) in w.primal.iter().enumerate() {
        for b in &w.primal[i + 1..] {
            if a.vertices.iter().any(|v| b.vertices.contains(v)) {
                return false;
            }
        }
    }
    true
}

/// Iterate over all `2^k` assignments of the `free` edges on top of `base`.
pub fn for_all_assignments(base: &[bool], free: &[EdgeId], mut f: impl FnMut(&[bool])) {
    let mut bits = base.to_vec();
    for mask in 0u32..(1 << free.len()) {
        for (i, &e) in free.iter().enumerate() {
            bits[e] = mask >> i & 1 == 1;
        }
        f(&bits);
    }
}
