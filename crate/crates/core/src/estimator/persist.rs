//! JSON-lines and CSV persistence of estimate records.
//!
//! Files may start with `#` comment lines; the only line that varies between
//! identical runs is the optional timestamp line.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};

use super::EstimateRecord;

/// Upper bound on accepted input size, in lines.
const MAX_LINES: usize = 1 << 20;

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidExperiment(format!("write failed: {e}"))
}

/// `# generated at unix time <secs>`.
pub fn timestamp_line() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("# generated at unix time {secs}")
}

/// Comment lines: a fixed description line and, optionally, the timestamp.
pub fn write_header<W: Write>(w: &mut W, description: &str, timestamp: bool) -> Result<()> {
    writeln!(w, "# bondperc {} {description}", env!("CARGO_PKG_VERSION")).map_err(io_err)?;
    if timestamp {
        writeln!(w, "{}", timestamp_line()).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(w: &mut W, records: &[EstimateRecord]) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(io_err)?;
        writeln!(w, "{line}").map_err(io_err)?;
    }
    Ok(())
}

/// Parse and validate a JSON-lines file, skipping blank and `#` lines.
pub fn parse_jsonl(text: &str) -> Result<Vec<EstimateRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i >= MAX_LINES {
            return Err(Error::Parse { line: i + 1, msg: "too many lines".into() });
        }
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let r: EstimateRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        r.validate().map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        out.push(r);
    }
    Ok(out)
}

/// Long-format CSV: one row per record.
pub fn write_csv<W: Write>(w: W, records: &[EstimateRecord]) -> Result<()> {
    let mut c = csv::Writer::from_writer(w);
    c.write_record(["model", "event", "n", "trials", "successes", "p_hat", "ci_lo", "ci_hi"])
        .map_err(io_err)?;
    for r in records {
        c.write_record([
            r.model.to_string(),
            r.event.label(),
            r.n.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            r.p_hat.to_string(),
            r.ci[0].to_string(),
            r.ci[1].to_string(),
        ])
        .map_err(io_err)?;
    }
    c.flush().map_err(io_err)
}

/// Plot matrix: one row per `n`, three columns (`p̂`, CI bounds) per series.
pub fn write_csv_matrix<W: Write>(w: W, series: &[(String, Vec<EstimateRecord>)]) -> Result<()> {
    let mut radii: Vec<u32> = series.iter().flat_map(|(_, rs)| rs.iter().map(|r| r.n)).collect();
    radii.sort_unstable();
    radii.dedup();
    let mut c = csv::Writer::from_writer(w);
    let mut header = vec!["n".to_string()];
    for (label, _) in series {
        header.extend(["p_hat", "ci_lo", "ci_hi"].map(|s| format!("{label}:{s}")));
    }
    c.write_record(&header).map_err(io_err)?;
    for n in radii {
        let mut row = vec![n.to_string()];
        for (_, rs) in series {
            match rs.iter().find(|r| r.n == n) {
                Some(r) => row.extend([r.p_hat, r.ci[0], r.ci[1]].map(|x| x.to_string())),
                None => row.extend(std::iter::repeat_n(String::new(), 3)),
            }
        }
        c.write_record(&row).map_err(io_err)?;
    }
    c.flush().map_err(io_err)
}
