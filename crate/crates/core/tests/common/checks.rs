//! Library queries checked against the references, shared by the oracle
//! tests and the acceptance suite. Each random check returns the number of
//! configurations it looked at.

use bondperc::arms::{detect_arm_event_unchecked, detect_axis_event, Annulus, AnnulusGeometry, AxisEventSpec, ColourSequence};
use bondperc::config::{clusters_all, cluster_radius, connected, crossing, reaches_box_boundary, Colour, CrossDir};
use bondperc::lattice::{
    build_mixed, Edge, EdgeClass, EdgeId, EmbeddedGraph, Family, FamilyTag, GraphRole, LatticePoint,
    MixedLatticeSpec, Orientation, PlanarLattice, Radius, Rect,
};
use bondperc::rng::{SeedSpec, Stream};

use super::*;

pub fn rng(seed: u64) -> Stream {
    Stream::new(SeedSpec::new(seed, 0, 0))
}

pub fn random_bits(rng: &mut Stream, len: usize, p: f64) -> Vec<bool> {
    (0..len).map(|_| rng.next_f64() < p).collect()
}

pub fn lattice(family: Family, r: u32) -> PlanarLattice {
    match family {
        Family::Mixed(m) => PlanarLattice::new(build_mixed(MixedLatticeSpec { m, window_radius: r }).unwrap()).unwrap(),
        f => PlanarLattice::build(f, r).unwrap(),
    }
}

/// A random graph on `v` distinct points with `e` edges (no planarity needed).
pub fn random_graph(rng: &mut Stream, v: usize, e: usize) -> EmbeddedGraph {
    let mut points = Vec::new();
    while points.len() < v {
        let p = LatticePoint::new(rng.below(9) as i32 - 4, rng.below(9) as i32 - 4);
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    while edges.len() < e {
        let (a, b) = (rng.below(v as u64) as usize, rng.below(v as u64) as usize);
        if a == b || edges.iter().any(|x| (x.u, x.v) == (a, b) || (x.u, x.v) == (b, a)) {
            continue;
        }
        let class = EdgeClass::new(FamilyTag::Square, Orientation::of(points[a], points[b]));
        edges.push(Edge { u: a, v: b, class });
    }
    EmbeddedGraph::from_parts(Family::Square, GraphRole::Primal, 4, points, edges).unwrap()
}

/// The `k` kept edges whose midpoints are nearest the origin (L∞).
pub fn nearest_edges(g: &EmbeddedGraph, k: usize, keep: impl Fn(EdgeId) -> bool) -> Vec<EdgeId> {
    let mut ids: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| keep(e)).collect();
    let mid = |e: EdgeId| {
        let (p, q) = g.segment(e);
        let ((a, b), (c, d)) = (xy(p), xy(q));
        ((a + c) / 2.0).abs().max(((b + d) / 2.0).abs())
    };
    ids.sort_by(|&a, &b| mid(a).total_cmp(&mid(b)).then(a.cmp(&b)));
    ids.truncate(k);
    ids
}

pub fn exhaustive_clusters() {
    let mut rng = rng(1);
    let big = Rect::centered(Radius::int(50));
    for trial in 0..12 {
        let e = 10 + trial % 5;
        let g = random_graph(&mut rng, 8, e);
        let pairs: Vec<(usize, usize)> = g.edges().iter().map(|x| (x.u, x.v)).collect();
        let window = Rect::real(-1, -1, 1, 1);
        let adj = adjacency(&g);
        for mask in 0u32..(1 << e) {
            let open: Vec<bool> = (0..e).map(|i| mask >> i & 1 == 1).collect();
            let closure = transitive_closure(g.vertex_count(), &pairs, &open);
            let mut uf = clusters_all(&g, &open);
            for u in 0..g.vertex_count() {
                let within = component(&adj, &[u], &|f| {
                    let (p, q) = g.segment(f);
                    open[f] && segment_meets_rect(p, q, [-1.0, 1.0, -1.0, 1.0])
                });
                for v in 0..g.vertex_count() {
                    assert_eq!(uf.same(u, v), closure[u][v]);
                    if (u + v + mask as usize).is_multiple_of(7) {
                        assert_eq!(connected(&g, &open, u, v, &big).unwrap(), closure[u][v]);
                        assert_eq!(connected(&g, &open, u, v, &window).unwrap(), within[v] || u == v);
                    }
                }
            }
        }
    }
}

pub fn random_connectivity(per_family: u64, seed: u64) -> u64 {
    let mut rng = rng(seed);
    let mut checked = 0;
    for family in [Family::Square, Family::Triangular, Family::Hexagonal, Family::Mixed(1)] {
        let lat = lattice(family, 5);
        let g = &lat.graph;
        let adj = adjacency(g);
        let rect = Rect::real(-2, -1, 3, 2);
        for _ in 0..per_family {
            let open = random_bits(&mut rng, g.edge_count(), 0.5);
            let u = g.vertex_at(LatticePoint::new(0, 0)).unwrap();
            let reach = component(&adj, &[u], &|e| {
                let (p, q) = g.segment(e);
                open[e] && segment_meets_rect(p, q, [-2.0, 3.0, -1.0, 2.0])
            });
            for _ in 0..4 {
                let v = rng.below(g.vertex_count() as u64) as usize;
                assert_eq!(connected(g, &open, u, v, &rect).unwrap(), reach[v] || u == v);
            }
            checked += 1;
        }
    }
    checked
}

pub fn random_reach(per_family: u64, seed: u64) -> u64 {
    let mut rng = rng(seed);
    let mut checked = 0;
    for family in [Family::Square, Family::Triangular, Family::Hexagonal] {
        let lat = lattice(family, 5);
        let g = &lat.graph;
        let adj = adjacency(g);
        for _ in 0..per_family {
            let open = random_bits(&mut rng, g.edge_count(), 0.55);
            let v = rng.below(g.vertex_count() as u64) as usize;
            if linf(g.point(v)) > 3.0 {
                continue;
            }
            for n in 1..=4 {
                assert_eq!(
                    reaches_box_boundary(g, &open, v, Radius::int(n)).unwrap(),
                    reaches(g, &adj, &open, v, n as f64)
                );
            }
            assert_eq!(cluster_radius(g, &open, v).unwrap().radius, cluster_extent(g, &adj, &open, v));
            checked += 1;
        }
    }
    checked
}

fn check_crossings(lat: &PlanarLattice, rect: Rect, bounds: [f64; 4], open: &[bool]) {
    for (dir, horizontal) in [(CrossDir::Horizontal, true), (CrossDir::Vertical, false)] {
        for (colour, dual) in [(Colour::Open, false), (Colour::Closed, true)] {
            assert_eq!(
                crossing(lat, open, &rect, Some(dir), colour).unwrap(),
                super::crossing(lat, open, bounds, horizontal, dual),
                "{dir:?} {colour:?}"
            );
        }
    }
}

pub fn exhaustive_crossings() {
    let mut rng = rng(4);
    let s3 = 3f64.sqrt();
    let cases = [
        (Family::Square, Rect::square_cells(0, 0, 2, 2), [0.0, 2.0 * s3, 0.0, 2.0]),
        (Family::Triangular, Rect::real(0, 0, 2, 1), [0.0, 2.0, 0.0, 1.0]),
        (Family::Hexagonal, Rect::real(-1, -1, 1, 1), [-1.0, 1.0, -1.0, 1.0]),
    ];
    for (family, rect, bounds) in cases {
        let lat = lattice(family, 4);
        let g = &lat.graph;
        let free = nearest_edges(g, 12, |e| {
            let (p, q) = g.segment(e);
            segment_meets_rect(p, q, bounds)
        });
        assert!(free.len() >= 8, "{family:?}: {}", free.len());
        for background in 0..3 {
            let base = random_bits(&mut rng, g.edge_count(), [0.0, 1.0, 0.5][background]);
            for_all_assignments(&base, &free, |open| check_crossings(&lat, rect, bounds, open));
        }
    }
}

pub fn random_crossings(per_case: u64, seed: u64) -> u64 {
    let mut rng = rng(seed);
    let s3 = 3f64.sqrt();
    let mut checked = 0;
    for (family, rect, bounds) in [
        (Family::Square, Rect::square_cells(-2, -1, 2, 3), [-2.0 * s3, 2.0 * s3, -1.0, 3.0]),
        (Family::Triangular, Rect::real(-3, -2, 4, 1), [-3.0, 4.0, -2.0, 1.0]),
        (Family::Mixed(2), Rect::real(-3, -3, 3, 2), [-3.0, 3.0, -3.0, 2.0]),
    ] {
        let lat = lattice(family, 6);
        for _ in 0..per_case {
            let open = random_bits(&mut rng, lat.graph.edge_count(), 0.5);
            check_crossings(&lat, rect, bounds, &open);
            checked += 1;
        }
    }
    checked
}

fn axis_families() -> [Family; 4] {
    [Family::Square, Family::Triangular, Family::Hexagonal, Family::Mixed(1)]
}

fn check_axis(lat: &PlanarLattice, open: &[bool]) {
    for k in [1, 2, 4] {
        if k == 2 && lat.graph.family() == Family::Hexagonal {
            continue;
        }
        for n in [2, 3, 5] {
            let spec = AxisEventSpec::unchecked(k, Radius::int(n)).unwrap();
            assert_eq!(
                detect_axis_event(lat, open, &spec).unwrap(),
                axis_event(lat, open, k, n as f64),
                "k={k} n={n}"
            );
        }
    }
}

pub fn exhaustive_axis() {
    let mut rng = rng(6);
    for family in axis_families() {
        let lat = lattice(family, 6);
        let free = nearest_edges(&lat.graph, 14, |_| true);
        for p in [0.3, 0.7] {
            let base = random_bits(&mut rng, lat.graph.edge_count(), p);
            let mut count = 0;
            for_all_assignments(&base, &free, |open| {
                // Every configuration is checked at k = 1; the full set on a sample.
                let spec = AxisEventSpec::unchecked(1, Radius::int(2)).unwrap();
                assert_eq!(detect_axis_event(&lat, open, &spec).unwrap(), axis_event(&lat, open, 1, 2.0));
                if count % 16 == 0 {
                    check_axis(&lat, open);
                }
                count += 1;
            });
        }
    }
}

pub fn random_axis(per_case: u64, seed: u64) -> u64 {
    let mut rng = rng(seed);
    let mut checked = 0;
    for family in axis_families() {
        let lat = lattice(family, 6);
        for p in [0.35, 0.5, 0.65] {
            for _ in 0..per_case {
                let open = random_bits(&mut rng, lat.graph.edge_count(), p);
                check_axis(&lat, &open);
                checked += 1;
            }
        }
    }
    checked
}

fn sigmas() -> Vec<ColourSequence> {
    vec![
        ColourSequence::one_arm(),
        ColourSequence::alternating(2).unwrap(),
        ColourSequence::alternating(4).unwrap(),
        ColourSequence::alternating(6).unwrap(),
    ]
}

fn check_arms(lat: &PlanarLattice, geom: &AnnulusGeometry, open: &[bool], ann: Annulus) {
    let (primal, dual) = all_arms(lat, open, ann.inner, ann.outer);
    for sigma in sigmas() {
        let lib = detect_arm_event_unchecked(lat, geom, open, &sigma, ann).unwrap();
        let witness = if sigma.len() == 1 {
            primal.first().map(|a| ArmWitness { primal: vec![a.clone()], dual: vec![] })
        } else {
            alternating_witness(lat, open, &primal, &dual, sigma.len() / 2, (ann.inner, ann.outer))
        };
        assert_eq!(lib, witness.is_some(), "{:?} {sigma} {ann:?}", lat.graph.family());
        if let Some(w) = witness {
            assert_eq!(w.primal.len(), sigma.len().div_ceil(2));
            assert!(primal_arms_disjoint(&w));
        }
    }
}

pub fn exhaustive_arms() {
    let mut rng = rng(8);
    for family in [Family::Square, Family::Triangular, Family::Hexagonal] {
        let lat = lattice(family, 5);
        let geom = AnnulusGeometry::new(&lat);
        let g = &lat.graph;
        for ann in [Annulus::new(1, 3).unwrap(), Annulus::new(2, 4).unwrap()] {
            // Free edges: the annulus edges nearest the inner boundary.
            let free = nearest_edges(g, 14, |e| {
                let (p, q) = g.segment(e);
                segment_meets_box(p, q, ann.outer as f64) && linf(p).max(linf(q)) >= ann.inner as f64
            });
            let base = random_bits(&mut rng, g.edge_count(), 0.5);
            for_all_assignments(&base, &free, |open| check_arms(&lat, &geom, open, ann));
        }
    }
}

pub fn random_arms(per_case: u64, seed: u64) -> u64 {
    let mut rng = rng(seed);
    let mut checked = 0;
    for family in [Family::Square, Family::Triangular, Family::Hexagonal, Family::Mixed(1)] {
        let lat = lattice(family, 6);
        let geom = AnnulusGeometry::new(&lat);
        for ann in [Annulus::new(1, 4).unwrap(), Annulus::new(2, 6).unwrap()] {
            for _ in 0..per_case {
                let open = random_bits(&mut rng, lat.graph.edge_count(), 0.5);
                check_arms(&lat, &geom, &open, ann);
                checked += 1;
            }
        }
    }
    checked
}
