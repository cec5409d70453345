//! Constructive `N_0(σ)`: the least inner radius admitting a witness
//! configuration with the required disjoint crossings.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lattice::{Family, PlanarLattice, Radius, VertexId};

use super::{detect_arm_event_unchecked, Annulus, AnnulusGeometry, ColourSequence};

/// Search bound for `N_0`; every supported sequence succeeds far below it.
const MAX_INNER: u32 = 24;

/// A configuration in which exactly `j` straight-ish open paths cross the
/// annulus inside disjoint angular wedges, all other edges closed.
///
/// With everything else closed the dual is open around the paths, so the
/// alternating dual arms come for free.
pub fn witness_configuration(lat: &PlanarLattice, sigma: &ColourSequence, ann: Annulus) -> Result<Vec<bool>> {
    let j = sigma.primal_arms()?;
    let g = &lat.graph;
    if ann.outer > g.window() {
        return Err(Error::RegionOutsideWindow { window: g.window() });
    }
    let inner = Radius::int(ann.inner as i64);
    let outer = Radius::int(ann.outer as i64);
    let half_width = 0.9 * PI / j as f64;
    let wedge_of = |v: VertexId| -> Option<usize> {
        if j == 1 {
            return Some(0);
        }
        let p = g.point(v);
        let angle = p.y().atan2(p.x());
        (0..j).find(|&i| {
            let theta = 2.0 * PI * i as f64 / j as f64;
            let mut d = (angle - theta).rem_euclid(2.0 * PI);
            if d > PI {
                d = 2.0 * PI - d;
            }
            d < half_width
        })
    };
    let wedge: Vec<Option<usize>> = (0..g.vertex_count()).map(wedge_of).collect();
    let mut open = vec![false; g.edge_count()];
    for i in 0..j {
        let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        let mut queue = VecDeque::new();
        for v in 0..g.vertex_count() {
            if wedge[v] == Some(i) && !g.point(v).linf_at_least(inner) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        let mut end = None;
        while let Some(w) = queue.pop_front() {
            if g.point(w).linf_at_least(outer) {
                end = Some(w);
                break;
            }
            for &(x, e) in g.neighbors(w) {
                if !seen[x] && wedge[x] == Some(i) {
                    seen[x] = true;
                    parent[x] = Some((w, e));
                    queue.push_back(x);
                }
            }
        }
        let Some(mut w) = end else {
            return Err(Error::InnerRadiusTooSmall { inner: ann.inner, min: ann.inner + 1 });
        };
        while let Some((prev, e)) = parent[w] {
            open[e] = true;
            w = prev;
        }
    }
    Ok(open)
}

fn compute(family: Family, sigma: &ColourSequence) -> Result<u32> {
    for inner in 1..=MAX_INNER {
        let ann = Annulus::new(inner, 2 * inner + 2)?;
        let lat = PlanarLattice::build(family, ann.outer)?;
        let Ok(w) = witness_configuration(&lat, sigma, ann) else {
            continue;
        };
        if detect_arm_event_unchecked(&lat, &AnnulusGeometry::new(&lat), &w, sigma, ann)? {
            return Ok(inner);
        }
    }
    Err(Error::InvalidColourSequence(format!(
        "no witness for {sigma} with N ≤ {MAX_INNER}"
    )))
}

type WitnessCache = Mutex<HashMap<(Family, Vec<bool>), u32>>;

/// `N_0(σ)` for a lattice family, computed once and cached.
pub fn inner_radius_minimum(family: Family, sigma: &ColourSequence) -> Result<u32> {
    static CACHE: OnceLock<WitnessCache> = OnceLock::new();
    let key = (family, sigma.bits().to_vec());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&n) = cache.lock().unwrap().get(&key) {
        return Ok(n);
    }
    let n = compute(family, sigma)?;
    cache.lock().unwrap().insert(key, n);
    Ok(n)
}
