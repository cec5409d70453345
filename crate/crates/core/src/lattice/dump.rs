//! Plain-text graph dumps.
//!
//! ```text
//! family square
//! window 3
//! role primal
//! V 0 -5.196152422707 -3
//! E 0 0 1 square:horizontal
//! ```
//!
//! Coordinates are written in real units; the parser snaps them back to the
//! embedding grid and rejects anything that is not within `1e-6` of it.

use std::fmt::Write as _;

use super::{Edge, EdgeClass, EmbeddedGraph, Family, FamilyTag, GraphRole, LatticePoint, Orientation, SQRT3};
use crate::error::{Error, Result};

/// Largest grid coordinate accepted by the parser.
const MAX_COORD: f64 = 1.0e6;

pub fn write_graph(g: &EmbeddedGraph) -> String {
    let mut s = String::new();
    match g.family() {
        Family::Mixed(m) => writeln!(s, "family mixed {m}").unwrap(),
        f => writeln!(s, "family {}", f.tag().as_str()).unwrap(),
    }
    writeln!(s, "window {}", g.window()).unwrap();
    let role = match g.role() {
        GraphRole::Primal => "primal",
        GraphRole::Dual => "dual",
    };
    writeln!(s, "role {role}").unwrap();
    for (i, p) in g.points().iter().enumerate() {
        writeln!(s, "V {i} {} {}", fmt_coord(p.x()), fmt_coord(p.y())).unwrap();
    }
    for (i, e) in g.edges().iter().enumerate() {
        writeln!(s, "E {i} {} {} {}", e.u, e.v, e.class.label()).unwrap();
    }
    s
}

fn fmt_coord(v: f64) -> String {
    let r = format!("{v:.12}");
    let r = r.trim_end_matches('0').trim_end_matches('.');
    if r == "-0" {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn snap(v: f64, scale: f64, line: usize) -> Result<i32> {
    if !v.is_finite() || v.abs() > MAX_COORD {
        return Err(perr(line, "coordinate out of range"));
    }
    let k = (v / scale).round();
    if (k * scale - v).abs() > 1e-6 {
        return Err(perr(line, format!("{v} is not on the embedding grid")));
    }
    Ok(k as i32)
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("invalid {what}")))
}

pub fn parse_graph(text: &str) -> Result<EmbeddedGraph> {
    let mut family = None;
    let mut window = None;
    let mut role = GraphRole::Primal;
    let mut points = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut toks = raw.split_whitespace();
        match toks.next() {
            Some("family") => {
                let tag = toks.next().and_then(FamilyTag::parse).ok_or_else(|| perr(line, "unknown family"))?;
                family = Some(match tag {
                    FamilyTag::Square => Family::Square,
                    FamilyTag::Triangular => Family::Triangular,
                    FamilyTag::Hexagonal => Family::Hexagonal,
                    FamilyTag::Mixed => Family::Mixed(parse_num(toks.next(), line, "m")?),
                });
            }
            Some("window") => window = Some(parse_num::<u32>(toks.next(), line, "window")?),
            Some("role") => {
                role = match toks.next() {
                    Some("primal") => GraphRole::Primal,
                    Some("dual") => GraphRole::Dual,
                    _ => return Err(perr(line, "unknown role")),
                }
            }
            Some("V") => {
                let id: usize = parse_num(toks.next(), line, "vertex id")?;
                if id != points.len() {
                    return Err(perr(line, format!("vertex id {id} out of sequence")));
                }
                let x: f64 = parse_num(toks.next(), line, "x")?;
                let y: f64 = parse_num(toks.next(), line, "y")?;
                points.push(LatticePoint::new(snap(x, SQRT3 / 2.0, line)?, snap(y, 0.5, line)?));
            }
            Some("E") => {
                let id: usize = parse_num(toks.next(), line, "edge id")?;
                if id != edges.len() {
                    return Err(perr(line, format!("edge id {id} out of sequence")));
                }
                let u: usize = parse_num(toks.next(), line, "endpoint")?;
                let v: usize = parse_num(toks.next(), line, "endpoint")?;
                if u >= points.len() || v >= points.len() || u == v {
                    return Err(perr(line, "bad endpoints"));
                }
                let label = toks.next().ok_or_else(|| perr(line, "missing class"))?;
                let mut class = EdgeClass::parse_label(label).ok_or_else(|| perr(line, "unknown class"))?;
                if class.orientation != Orientation::of(points[u], points[v]) {
                    return Err(perr(line, "class does not match edge direction"));
                }
                if role == GraphRole::Dual {
                    // Dual edges inherit the index of the primal edge they cross.
                    class.index = dual_index(class);
                }
                edges.push(Edge { u, v, class });
            }
            Some(other) => return Err(perr(line, format!("unknown record {other}"))),
            None => {}
        }
        if toks.next().is_some() {
            return Err(perr(line, "trailing tokens"));
        }
    }
    let family = family.ok_or_else(|| perr(0, "missing family"))?;
    let window = window.ok_or_else(|| perr(0, "missing window"))?;
    EmbeddedGraph::from_parts(family, role, window, points, edges)
        .map_err(|e| perr(0, e.to_string()))
}

/// Index of the primal edge crossed by a dual edge of the given class.
fn dual_index(class: EdgeClass) -> Option<u8> {
    use Orientation::*;
    let crossed = match class.orientation {
        Horizontal => Vertical,
        Vertical => Horizontal,
        HexRight => TriRight,
        HexLeft => TriLeft,
        TriRight => HexRight,
        TriLeft => HexLeft,
        Other => Other,
    };
    let primal_family = match class.family {
        FamilyTag::Hexagonal => FamilyTag::Triangular,
        FamilyTag::Triangular => FamilyTag::Hexagonal,
        f => f,
    };
    EdgeClass::new(primal_family, crossed).index
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::dual::build_dual;
    use crate::lattice::{build_lattice, build_mixed, MixedLatticeSpec};

    fn assert_same(a: &EmbeddedGraph, b: &EmbeddedGraph) {
        assert_eq!(a.family(), b.family());
        assert_eq!(a.window(), b.window());
        assert_eq!(a.points(), b.points());
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn round_trips() {
        for g in [
            build_lattice(Family::Square, 3).unwrap(),
            build_lattice(Family::Triangular, 4).unwrap(),
            build_lattice(Family::Hexagonal, 3).unwrap(),
            build_mixed(MixedLatticeSpec { m: 2, window_radius: 5 }).unwrap(),
        ] {
            let text = write_graph(&g);
            assert_same(&g, &parse_graph(&text).unwrap());
        }
    }

    #[test]
    fn dual_round_trip_keeps_indices() {
        let g = build_lattice(Family::Triangular, 3).unwrap();
        let d = build_dual(&g).unwrap().dual;
        assert_same(&d, &parse_graph(&write_graph(&d)).unwrap());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_graph("family square\nwindow 3\nV 0 0.1 0\n").is_err());
        assert!(parse_graph("family square\nwindow 3\nV 1 0 0\n").is_err());
        assert!(parse_graph("family cubic\n").is_err());
        assert!(parse_graph("window 3\n").is_err());
        let bad_class = "family square\nwindow 3\nV 0 0 0\nV 1 1.732050807569 0\nE 0 0 1 square:vertical\n";
        assert!(matches!(parse_graph(bad_class), Err(Error::Parse { line: 5, .. })));
    }
}
