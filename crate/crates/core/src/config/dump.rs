//! Run-length-encoded configuration dumps.
//!
//! ```text
//! graph 3f5a…            sha256 of the graph dump
//! model {"family":"square","p":[0.5,0.5]}
//! seed 42 1 7            master, purpose tag, trial
//! edges 264
//! rle 0:12 1:3 0:249
//! ```

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{Configuration, Provenance};
use crate::criticality::ModelSpec;
use crate::error::{Error, Result};
use crate::lattice::dump::write_graph;
use crate::lattice::EmbeddedGraph;
use crate::rng::SeedSpec;

/// Longest configuration a dump may describe.
const MAX_EDGES: usize = 1 << 26;

pub fn graph_hash(g: &EmbeddedGraph) -> String {
    let digest = Sha256::digest(write_graph(g).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigDump {
    pub graph_hash: Option<String>,
    pub config: Configuration,
}

pub fn write_config(g: &EmbeddedGraph, omega: &Configuration) -> String {
    let mut s = String::new();
    writeln!(s, "graph {}", graph_hash(g)).unwrap();
    if let Some(prov) = &omega.provenance {
        if let Some(m) = &prov.model {
            writeln!(s, "model {}", serde_json::to_string(m).unwrap()).unwrap();
        }
        let seed = prov.seed;
        writeln!(s, "seed {} {} {}", seed.master, seed.tag, seed.trial).unwrap();
    }
    writeln!(s, "edges {}", omega.len()).unwrap();
    s.push_str("rle");
    let mut iter = omega.bits.iter().peekable();
    while let Some(&b) = iter.next() {
        let mut run = 1;
        while iter.peek() == Some(&&b) {
            iter.next();
            run += 1;
        }
        write!(s, " {}:{run}", b as u8).unwrap();
    }
    s.push('\n');
    s
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_config(text: &str) -> Result<ConfigDump> {
    let mut hash = None;
    let mut model: Option<ModelSpec> = None;
    let mut seed = None;
    let mut edges: Option<usize> = None;
    let mut bits: Option<Vec<bool>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let (key, rest) = raw.split_once(' ').unwrap_or((raw, ""));
        match key {
            "graph" => {
                if rest.len() != 64 || !rest.bytes().all(|c| c.is_ascii_hexdigit()) {
                    return Err(perr(line, "graph hash must be 64 hex digits"));
                }
                hash = Some(rest.to_ascii_lowercase());
            }
            "model" => {
                model = Some(serde_json::from_str(rest).map_err(|e| perr(line, e.to_string()))?);
            }
            "seed" => {
                let parts: Vec<u64> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| perr(line, "invalid seed")))
                    .collect::<Result<_>>()?;
                if parts.len() != 3 {
                    return Err(perr(line, "seed needs master, tag and trial"));
                }
                seed = Some(SeedSpec::new(parts[0], parts[1], parts[2]));
            }
            "edges" => {
                let n: usize = rest.trim().parse().map_err(|_| perr(line, "invalid edge count"))?;
                if n > MAX_EDGES {
                    return Err(perr(line, "edge count too large"));
                }
                edges = Some(n);
            }
            "rle" => {
                let total = edges.ok_or_else(|| perr(line, "rle before edges"))?;
                let mut out = Vec::with_capacity(total);
                for tok in rest.split_whitespace() {
                    let (bit, run) = tok.split_once(':').ok_or_else(|| perr(line, "bad run"))?;
                    let bit = match bit {
                        "0" => false,
                        "1" => true,
                        _ => return Err(perr(line, "bad bit")),
                    };
                    let run: usize = run.parse().map_err(|_| perr(line, "bad run length"))?;
                    if run == 0 || out.len() + run > total {
                        return Err(perr(line, "run lengths do not match edge count"));
                    }
                    out.resize(out.len() + run, bit);
                }
                if out.len() != total {
                    return Err(perr(line, "run lengths do not match edge count"));
                }
                bits = Some(out);
            }
            other => return Err(perr(line, format!("unknown record {other}"))),
        }
    }
    let bits = bits.ok_or_else(|| perr(0, "missing rle record"))?;
    let provenance = match (seed, model) {
        (Some(seed), model) => Some(Provenance { model, seed }),
        (None, Some(_)) => return Err(perr(0, "model without seed")),
        (None, None) => None,
    };
    Ok(ConfigDump {
        graph_hash: hash,
        config: Configuration { bits, provenance },
    })
}
