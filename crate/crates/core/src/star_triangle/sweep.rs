//! Sweeps `𝕃^m → 𝕃^{m±1}`: one layer of `T` followed by one layer of `S`.
//!
//! Upward (`m → m+1`, interface row `y = m`), upper half:
//! * `T` turns every down-pointing triangle whose bottom apex lies on or above
//!   the interface into a star centred `1` above the apex;
//! * `S` turns every star centred at an old triangular vertex `3/2` or more
//!   above the interface into an up-pointing triangle.
//!
//! The triangular half-plane moves up by one; stars whose apex sits on the
//! interface leave their vertical arm behind as a new square edge. Downward
//! sweeps are the reverse construction (`T` on up-pointing triangles based on
//! or above the interface, `S` on the triangular vertices, using the existing
//! square verticals as arms on the interface). The lower half is the mirror
//! image. The usable window shrinks by 2: the `S` cell producing an edge can
//! reach `3/2` above it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::kernel::{apply_s, apply_t, Bits3};
use crate::config::{Configuration, EdgeStates, Provenance};
use crate::criticality::{kappa_triangle, ModelSpec, ParamTriple, SELF_DUAL_TOL};
use crate::error::{Error, Result};
use crate::lattice::{
    build_mixed, EdgeId, EmbeddedGraph, Family, GraphRole, LatticePoint, MixedLatticeSpec,
    Orientation,
};
use crate::rng::SeedSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `m → m + 1`.
    Up,
    /// `m → m − 1`.
    Down,
}

/// How much the usable window shrinks per sweep.
pub const WINDOW_SHRINK: u32 = 2;

#[derive(Clone, Debug)]
struct TCell {
    outer: [LatticePoint; 3],
    centre: LatticePoint,
    /// Input edge opposite each outer vertex.
    tri: [EdgeId; 3],
    idx: [u8; 3],
    counter: u64,
}

#[derive(Clone, Copy, Debug)]
enum Arm {
    T(u32, u8),
    Input(EdgeId),
}

#[derive(Clone, Debug)]
struct SCell {
    arms: [Arm; 3],
    idx: [u8; 3],
    counter: u64,
}

#[derive(Clone, Copy, Debug)]
enum Source {
    Input(EdgeId),
    TArm(u32, u8),
    STri(u32, u8),
}

/// The cell decomposition of one sweep, built once per lattice and direction.
#[derive(Clone, Debug)]
pub struct SweepPlan {
    pub direction: Direction,
    pub m_in: u32,
    pub m_out: u32,
    output: EmbeddedGraph,
    t_cells: Vec<TCell>,
    s_cells: Vec<SCell>,
    sources: Vec<Source>,
}

/// Parameter index of a star arm with the given direction.
fn arm_index(o: Orientation) -> Option<u8> {
    match o {
        Orientation::Vertical => Some(0),
        Orientation::HexRight => Some(1),
        Orientation::HexLeft => Some(2),
        _ => None,
    }
}

fn pack(kind: u64, p: LatticePoint) -> u64 {
    let a = (p.a as i64 + (1 << 30)) as u64 & 0x7FFF_FFFF;
    let b = (p.b as i64 + (1 << 30)) as u64 & 0x7FFF_FFFF;
    kind << 62 | a << 31 | b
}

fn key(p: LatticePoint, q: LatticePoint) -> (LatticePoint, LatticePoint) {
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSweep(msg.into())
}

impl SweepPlan {
    pub fn new(input: &EmbeddedGraph, direction: Direction) -> Result<Self> {
        let m = match input.family() {
            Family::Mixed(m) => m,
            Family::Triangular => 0,
            f => return Err(Error::UnsupportedFamily(format!("sweeps act on mixed lattices, not {f}"))),
        };
        if input.role() != GraphRole::Primal {
            return Err(bad("sweeps act on primal graphs"));
        }
        if direction == Direction::Down && m == 0 {
            return Err(bad("cannot sweep down from m = 0"));
        }
        let r = input.window();
        if r < 3 + WINDOW_SHRINK {
            return Err(Error::WindowTooSmall(r.saturating_sub(WINDOW_SHRINK)));
        }
        let m_out = match direction {
            Direction::Up => m + 1,
            Direction::Down => m - 1,
        };
        let output = build_mixed(MixedLatticeSpec {
            m: m_out,
            window_radius: r - WINDOW_SHRINK,
        })?;
        let iface = 2 * m as i32;
        let edge_at = |p: LatticePoint, q: LatticePoint| -> Option<EdgeId> {
            let u = input.vertex_at(p)?;
            let v = input.vertex_at(q)?;
            input.edge_between(u, v)
        };
        // Each input vertex seeds cells in the upper half (b ≥ I) and, mirrored,
        // in the lower half (b ≤ −I); on a shared row 0 it seeds both.
        let halves = |p: LatticePoint, min_row: i32| {
            let mut out = Vec::with_capacity(2);
            if p.b >= min_row {
                out.push((p, false));
            }
            if -p.b >= min_row {
                out.push((p.mirrored(), true));
            }
            out
        };
        let place = |pts: &mut [LatticePoint], flip: bool| {
            if flip {
                for q in pts.iter_mut() {
                    *q = q.mirrored();
                }
            }
        };

        let mut t_cells = Vec::new();
        let mut t_at: HashMap<LatticePoint, u32> = HashMap::new();
        for &p in input.points() {
            for (u, flip) in halves(p, iface) {
                let mut pts = match direction {
                    Direction::Up => [u, u.offset(-1, 3), u.offset(1, 3), u.offset(0, 2)],
                    Direction::Down => [u.offset(1, 3), u, u.offset(2, 0), u.offset(1, 1)],
                };
                place(&mut pts, flip);
                let outer = [pts[0], pts[1], pts[2]];
                let centre = pts[3];
                let tri = [
                    edge_at(outer[1], outer[2]),
                    edge_at(outer[0], outer[2]),
                    edge_at(outer[0], outer[1]),
                ];
                let [Some(e0), Some(e1), Some(e2)] = tri else {
                    continue;
                };
                let tri = [e0, e1, e2];
                let mut idx = [0u8; 3];
                for i in 0..3 {
                    let class = input.edge(tri[i]).class;
                    idx[i] = class.index.ok_or(Error::UnclassifiedEdge(tri[i]))?;
                    if arm_index(Orientation::of(centre, outer[i])) != Some(idx[i]) {
                        return Err(bad(format!("triangle at {centre:?}: arm {i} class mismatch")));
                    }
                }
                t_at.insert(centre, t_cells.len() as u32);
                t_cells.push(TCell {
                    outer,
                    centre,
                    tri,
                    idx,
                    counter: pack(0, centre),
                });
            }
        }

        let s_min = match direction {
            Direction::Up => iface + 3,
            Direction::Down => iface,
        };
        let mut s_cells = Vec::new();
        let mut s_outer = Vec::new();
        'cells: for &p in input.points() {
            for (u, flip) in halves(p, s_min) {
                let mut outer = match direction {
                    Direction::Up => [u.offset(0, 2), u.offset(-1, -1), u.offset(1, -1)],
                    Direction::Down => [u.offset(0, -2), u.offset(-1, 1), u.offset(1, 1)],
                };
                place(&mut outer, flip);
                let v = p;
                let mut arms = [Arm::Input(0); 3];
                let mut idx = [0u8; 3];
                for i in 0..3 {
                    idx[i] = arm_index(Orientation::of(v, outer[i]))
                        .ok_or_else(|| bad(format!("star at {v:?} has a non-star arm")))?;
                    if let Some(&c) = t_at.get(&outer[i]) {
                        let cell = &t_cells[c as usize];
                        let Some(pos) = cell.outer.iter().position(|&w| w == v) else {
                            return Err(bad(format!("star at {v:?}: arm {i} not incident")));
                        };
                        if cell.idx[pos] != idx[i] {
                            return Err(bad(format!("star at {v:?}: arm {i} class mismatch")));
                        }
                        arms[i] = Arm::T(c, pos as u8);
                    } else if direction == Direction::Down && i == 0 && u.b == iface {
                        // On the interface the downward arm is an existing square edge.
                        match edge_at(v, outer[0]) {
                            Some(e) => arms[i] = Arm::Input(e),
                            None => continue 'cells,
                        }
                    } else {
                        continue 'cells;
                    }
                }
                s_cells.push(SCell {
                    arms,
                    idx,
                    counter: pack(1, v),
                });
                s_outer.push(outer);
            }
        }

        let mut source_at: HashMap<(LatticePoint, LatticePoint), Source> = HashMap::new();
        let keep_row = match direction {
            Direction::Up => iface,
            Direction::Down => iface - 2,
        };
        for (e, edge) in input.edges().iter().enumerate() {
            let (p, q) = (input.point(edge.u), input.point(edge.v));
            if p.b.abs().max(q.b.abs()) <= keep_row {
                source_at.insert(key(p, q), Source::Input(e));
            }
        }
        if direction == Direction::Up {
            for (c, cell) in t_cells.iter().enumerate() {
                if cell.outer[0].b.abs() == iface {
                    source_at.insert(key(cell.outer[0], cell.centre), Source::TArm(c as u32, 0));
                }
            }
        }
        for (c, outer) in s_outer.iter().enumerate() {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                source_at.insert(key(outer[j], outer[k]), Source::STri(c as u32, i as u8));
            }
        }

        let mut sources = Vec::with_capacity(output.edge_count());
        for (e, edge) in output.edges().iter().enumerate() {
            let (p, q) = (output.point(edge.u), output.point(edge.v));
            let src = *source_at
                .get(&key(p, q))
                .ok_or_else(|| bad(format!("output edge {p:?}–{q:?} has no source")))?;
            let want = edge.class.index;
            let got = match src {
                Source::Input(i) => input.edge(i).class.index,
                Source::TArm(c, a) => Some(t_cells[c as usize].idx[a as usize]),
                Source::STri(c, i) => Some(s_cells[c as usize].idx[i as usize]),
            };
            if want != got {
                return Err(bad(format!("output edge {e} class mismatch")));
            }
            sources.push(src);
        }

        Ok(SweepPlan {
            direction,
            m_in: m,
            m_out,
            output,
            t_cells,
            s_cells,
            sources,
        })
    }

    pub fn output(&self) -> &EmbeddedGraph {
        &self.output
    }

    pub fn triangle_cells(&self) -> usize {
        self.t_cells.len()
    }

    pub fn star_cells(&self) -> usize {
        self.s_cells.len()
    }

    /// Run the sweep on `omega` with one independent uniform per cell, keyed by
    /// the cell's centre within the stream `seed`.
    pub fn apply<S: EdgeStates + ?Sized>(
        &self,
        omega: &S,
        params: &ParamTriple,
        seed: SeedSpec,
    ) -> Result<Configuration> {
        params.validate()?;
        let k = kappa_triangle(params.0);
        if k.abs() > SELF_DUAL_TOL {
            return Err(Error::NotSelfDual(k));
        }
        let mut bits = Vec::with_capacity(self.sources.len());
        self.apply_into(omega, &params.0, seed, &mut SweepScratch::default(), &mut bits);
        Ok(Configuration {
            bits,
            provenance: Some(Provenance { model: None, seed }),
        })
    }

    /// Unchecked, allocation-reusing form of [`apply`](Self::apply).
    pub fn apply_into<S: EdgeStates + ?Sized>(
        &self,
        omega: &S,
        p: &[f64; 3],
        seed: SeedSpec,
        scratch: &mut SweepScratch,
        out: &mut Vec<bool>,
    ) {
        let key = seed.key();
        let q = |idx: &[u8; 3]| [p[idx[0] as usize], p[idx[1] as usize], p[idx[2] as usize]];
        scratch.stars.clear();
        for cell in &self.t_cells {
            let tri: Bits3 = [
                omega.is_open(cell.tri[0]),
                omega.is_open(cell.tri[1]),
                omega.is_open(cell.tri[2]),
            ];
            scratch.stars.push(apply_t(tri, &q(&cell.idx), key.uniform(cell.counter)));
        }
        scratch.tris.clear();
        for cell in &self.s_cells {
            let arm = |a: Arm| match a {
                Arm::T(c, i) => scratch.stars[c as usize][i as usize],
                Arm::Input(e) => omega.is_open(e),
            };
            let star: Bits3 = [arm(cell.arms[0]), arm(cell.arms[1]), arm(cell.arms[2])];
            scratch.tris.push(apply_s(star, &q(&cell.idx), key.uniform(cell.counter)));
        }
        out.clear();
        out.extend(self.sources.iter().map(|&s| match s {
            Source::Input(e) => omega.is_open(e),
            Source::TArm(c, a) => scratch.stars[c as usize][a as usize],
            Source::STri(c, i) => scratch.tris[c as usize][i as usize],
        }));
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepScratch {
    stars: Vec<Bits3>,
    tris: Vec<Bits3>,
}

/// One sweep of a mixed lattice configuration. Returns the new lattice (window
/// shrunk by [`WINDOW_SHRINK`]) and the transported configuration.
pub fn sweep<S: EdgeStates + ?Sized>(
    g: &EmbeddedGraph,
    omega: &S,
    direction: Direction,
    model: &ModelSpec,
    seed: SeedSpec,
) -> Result<(EmbeddedGraph, Configuration)> {
    match (model.family, g.family()) {
        (Family::Mixed(a), Family::Mixed(b)) if a == b => {}
        (Family::Triangular, Family::Triangular) | (Family::Mixed(0), Family::Triangular) => {}
        (mf, gf) => {
            return Err(Error::ModelMismatch(format!("model is {mf} but graph is {gf}")));
        }
    }
    let plan = SweepPlan::new(g, direction)?;
    let out = plan.apply(omega, &model.params, seed)?;
    Ok((plan.output, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Sampler;
    use crate::criticality::solve_self_dual_third;
    use crate::lattice::build_lattice;
    use crate::rng::tag;

    fn mixed(m: u32, r: u32) -> EmbeddedGraph {
        build_mixed(MixedLatticeSpec { m, window_radius: r }).unwrap()
    }

    #[test]
    fn plans_cover_every_output_edge() {
        for m in 0..4 {
            for r in [5, 6, 9] {
                let up = SweepPlan::new(&mixed(m, r), Direction::Up).unwrap();
                assert_eq!(up.output().family(), Family::Mixed(m + 1));
                assert_eq!(up.output().window(), r - 2);
                if m > 0 {
                    let down = SweepPlan::new(&mixed(m, r), Direction::Down).unwrap();
                    assert_eq!(down.output().family(), Family::Mixed(m - 1));
                }
            }
        }
        assert!(SweepPlan::new(&build_lattice(Family::Triangular, 6).unwrap(), Direction::Up).is_ok());
    }

    #[test]
    fn invalid_sweeps() {
        assert!(matches!(SweepPlan::new(&mixed(0, 6), Direction::Down), Err(Error::InvalidSweep(_))));
        assert!(matches!(SweepPlan::new(&mixed(1, 4), Direction::Up), Err(Error::WindowTooSmall(_))));
        let sq = build_lattice(Family::Square, 6).unwrap();
        assert!(SweepPlan::new(&sq, Direction::Up).is_err());
    }

    #[test]
    fn round_trip_is_structurally_the_input() {
        let g = mixed(1, 9);
        let up = SweepPlan::new(&g, Direction::Up).unwrap();
        let back = SweepPlan::new(up.output(), Direction::Down).unwrap();
        let want = mixed(1, 5);
        assert_eq!(back.output().points(), want.points());
        assert_eq!(back.output().edges(), want.edges());
    }

    #[test]
    fn axis_vertices_are_fixed() {
        let g = mixed(1, 8);
        for dir in [Direction::Up, Direction::Down] {
            let plan = SweepPlan::new(&g, dir).unwrap();
            for &(i, v) in plan.output().axis_vertices() {
                assert_eq!(g.point(g.axis_vertex(i).unwrap()), plan.output().point(v));
            }
        }
    }

    #[test]
    fn extreme_configurations_keep_axis_connectivity() {
        let p2 = solve_self_dual_third(0.3, 0.4).unwrap();
        let model = ModelSpec::mixed(1, [0.3, 0.4, p2]).unwrap();
        let g = mixed(1, 7);
        let seed = SeedSpec::new(1, tag::SWEEP, 0);
        // An open star may become a partially open triangle, but the axis
        // stays connected through the untouched interior rows.
        let (h, open) = sweep(&g, &vec![true; g.edge_count()], Direction::Up, &model, seed).unwrap();
        let mut uf = crate::config::clusters_all(&h, &open);
        let (_, first) = h.axis_vertices()[0];
        assert!(h.axis_vertices().iter().all(|&(_, v)| uf.same(first, v)));
        // A closed triangle may become a star with one open arm, but no new
        // connection can appear: every open arm of a star is dangling.
        let (h, closed) = sweep(&g, &vec![false; g.edge_count()], Direction::Up, &model, seed).unwrap();
        let uf = crate::config::clusters_all(&h, &closed);
        let mut uf = uf;
        for &(_, a) in h.axis_vertices() {
            for &(_, b) in h.axis_vertices() {
                assert_eq!(uf.same(a, b), a == b);
            }
        }
    }

    #[test]
    fn sweeps_are_reproducible() {
        let model = ModelSpec::mixed(0, [0.5, 0.5, 0.0]).unwrap();
        let g = mixed(0, 6);
        let s = Sampler::for_model(&model, &g).unwrap();
        let omega = s.sample(SeedSpec::sample(3, 1));
        let a = sweep(&g, &omega, Direction::Up, &model, SeedSpec::new(3, tag::SWEEP, 1)).unwrap().1;
        let b = sweep(&g, &omega, Direction::Up, &model, SeedSpec::new(3, tag::SWEEP, 1)).unwrap().1;
        assert_eq!(a, b);
    }
}
