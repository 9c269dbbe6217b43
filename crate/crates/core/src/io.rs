//! Edge list ingestion and the clustering / canonical graph file formats.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{compact_labels, normalize, EdgeRecord, SignedGraph};

/// Dialect of a whitespace (or comma) separated edge list.
///
/// All dialects skip blank lines and lines starting with `#` or `%`, and
/// accept a leading `p <n> <m>` header.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// `u v w [extra columns...]`; the weight is required.
    #[default]
    Snap,
    /// `u v [w [extra columns...]]`; a missing weight means `+1`.
    Konect,
    /// Exactly `u v w` per line.
    MetisLike,
}

impl FromStr for EdgeListFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "snap" => Ok(Self::Snap),
            "konect" => Ok(Self::Konect),
            "metis" | "metis-like" => Ok(Self::MetisLike),
            other => Err(Error::InvalidParameter(format!("unknown edge list format '{other}'"))),
        }
    }
}

impl fmt::Display for EdgeListFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Snap => "snap",
            Self::Konect => "konect",
            Self::MetisLike => "metis-like",
        })
    }
}

/// Raw records with node ids remapped to `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeList {
    pub records: Vec<EdgeRecord>,
    pub n: usize,
    /// `original_ids[v]` is the id node `v` had in the input.
    pub original_ids: Vec<u64>,
    /// Node and edge counts from a `p` header line, if present.
    pub header: Option<(usize, usize)>,
}

impl EdgeList {
    pub fn normalize(&self, raw_weights: bool) -> SignedGraph {
        normalize(&self.records, self.n, raw_weights)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads an edge list. Node ids are arbitrary non-negative integers and are
/// remapped to `0..n` in increasing order of original id. Records are kept
/// exactly as read, including duplicates and self edges.
pub fn load_edge_list<R: BufRead>(reader: R, format: EdgeListFormat) -> Result<EdgeList> {
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut header = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') || text.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        if fields[0] == "p" {
            if !raw.is_empty() || header.is_some() {
                return Err(parse_err(line_no, "header line must precede all edges"));
            }
            let nums: Option<Vec<usize>> = fields[1..].iter().map(|f| f.parse().ok()).collect();
            match nums.as_deref() {
                Some([n, m]) => header = Some((*n, *m)),
                _ => return Err(parse_err(line_no, "expected header 'p <n> <m>'")),
            }
            raw.reserve(header.unwrap().1);
            continue;
        }
        if format == EdgeListFormat::MetisLike && fields.len() != 3 {
            return Err(parse_err(line_no, format!("expected 3 fields, found {}", fields.len())));
        }
        if fields.len() < 2 {
            return Err(parse_err(line_no, "expected at least two node ids"));
        }
        let id = |f: &str| {
            f.parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("invalid node id '{f}'")))
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            Some(f) => f
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite())
                .ok_or_else(|| parse_err(line_no, format!("non-numeric weight '{f}'")))?,
            None if format == EdgeListFormat::Konect => 1.0,
            None => return Err(parse_err(line_no, "missing weight")),
        };
        raw.push((u, v, w));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut original_ids: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    original_ids.sort_unstable();
    original_ids.dedup();
    let index: HashMap<u64, usize> = original_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let records = raw
        .into_iter()
        .map(|(u, v, w)| EdgeRecord::new(index[&u], index[&v], w))
        .collect();
    Ok(EdgeList {
        records,
        n: original_ids.len(),
        original_ids,
        header,
    })
}

pub fn load_edge_list_file(path: &Path, format: EdgeListFormat) -> Result<EdgeList> {
    load_edge_list(BufReader::new(File::open(path)?), format)
}

/// Writes `g` as a canonical edge list: a summary comment, a `p` header and
/// one `u v w` line per edge with `u < v`, sorted.
pub fn write_canonical<W: Write>(mut out: W, g: &SignedGraph) -> std::io::Result<()> {
    writeln!(
        out,
        "# n={} m_plus={} m_minus={} sum_neg={}",
        g.n(),
        g.m_plus(),
        g.m_minus(),
        g.sum_neg()
    )?;
    writeln!(out, "p {} {}", g.n(), g.m())?;
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}")?;
    }
    Ok(())
}

/// Values recorded in the comment line of a clustering file.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringHeader {
    pub edge_cut: f64,
    pub z_value: Option<f64>,
    pub k: usize,
    pub time_seconds: f64,
    pub seed: u64,
}

/// Writes one `original_id cluster_id` line per node, with cluster ids
/// renumbered `0..k` by first appearance, after a header comment.
pub fn write_clustering<W: Write>(
    mut out: W,
    c: &Clustering,
    original_ids: &[u64],
    header: &ClusteringHeader,
) -> std::io::Result<()> {
    let z = header
        .z_value
        .map_or_else(|| "undefined".to_string(), |z| z.to_string());
    writeln!(
        out,
        "# edge_cut={} z_value={} k={} time_seconds={} seed={}",
        header.edge_cut, z, header.k, header.time_seconds, header.seed
    )?;
    write_assignment(out, c.assignment(), original_ids)
}

/// The body of a clustering file, without the header comment.
pub fn write_assignment<W: Write>(mut out: W, assignment: &[usize], original_ids: &[u64]) -> std::io::Result<()> {
    let (labels, _) = compact_labels(assignment);
    for (v, label) in labels.into_iter().enumerate() {
        writeln!(out, "{} {}", original_ids[v], label)?;
    }
    Ok(())
}

/// Reads `node cluster` lines, skipping comments.
pub fn read_assignment<R: BufRead>(reader: R) -> Result<Vec<(u64, usize)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') || text.starts_with('%') {
            continue;
        }
        let mut it = text.split_whitespace();
        let parsed = (|| Some((it.next()?.parse().ok()?, it.next()?.parse().ok()?)))();
        out.push(parsed.ok_or_else(|| parse_err(idx + 1, "expected 'node cluster'"))?);
    }
    Ok(out)
}
