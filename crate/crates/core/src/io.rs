//! Edge-list text format.
//!
//! ```text
//! n m k
//! u v w        (m lines, 0-based ids, positive decimal weight)
//! t_1 ... t_k  (one line)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Weights are written
//! with Rust's shortest round-trip float formatting, so write-then-read
//! reproduces the graph exactly.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::minor::PartialPartition;

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}

fn expect_end<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::Parse {
            line,
            msg: format!("unexpected trailing token {t:?}"),
        }),
    }
}

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hl, "vertex count n")?;
    let m: usize = field(toks.next(), hl, "edge count m")?;
    let k: usize = field(toks.next(), hl, "terminal count k")?;
    expect_end(toks, hl)?;

    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, l) = lines.next().ok_or(Error::Parse {
            line: hl,
            msg: format!("expected {m} edges, found {i}"),
        })?;
        let mut toks = l.split_whitespace();
        let u: usize = field(toks.next(), ln, "edge endpoint u")?;
        let v: usize = field(toks.next(), ln, "edge endpoint v")?;
        let w: f64 = field(toks.next(), ln, "edge weight")?;
        expect_end(toks, ln)?;
        edges.push((u, v, w));
    }

    let (tl, tline) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing terminal line".into(),
    })?;
    let terminals = tline
        .split_whitespace()
        .map(|t| field(Some(t), tl, "terminal id"))
        .collect::<Result<Vec<usize>>>()?;
    if terminals.len() != k {
        return Err(Error::Parse {
            line: tl,
            msg: format!("header declares {k} terminals, found {}", terminals.len()),
        });
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            msg: "trailing content after terminal line".into(),
        });
    }
    WeightedGraph::new(n, &edges, terminals)
}

pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", g.n(), g.edge_count(), g.k());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    let terms: Vec<String> = g.terminals().iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "{}", terms.join(" "));
    out
}

pub fn read_edge_list(path: &Path) -> Result<WeightedGraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Partition text format: a line with the cell count `k`, then one line per
/// terminal cell listing its vertex ids (an empty line for an empty cell).
pub fn write_partition(p: &PartialPartition) -> String {
    let mut out = format!("{}\n", p.k());
    for cell in p.cells() {
        let ids: Vec<String> = cell.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

pub fn parse_partition(text: &str) -> Result<PartialPartition> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'));
    let (hl, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or(Error::Parse {
            line: 0,
            msg: "empty partition file".into(),
        })?;
    let k: usize = field(Some(header), hl, "cell count k")?;
    let mut cells = Vec::with_capacity(k);
    for (ln, l) in lines.by_ref().take(k) {
        cells.push(
            l.split_whitespace()
                .map(|t| field(Some(t), ln, "vertex id"))
                .collect::<Result<Vec<usize>>>()?,
        );
    }
    if cells.len() != k {
        return Err(Error::Parse {
            line: hl,
            msg: format!("expected {k} cell lines, found {}", cells.len()),
        });
    }
    if let Some((ln, _)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(Error::Parse {
            line: ln,
            msg: "trailing content after the last cell".into(),
        });
    }
    Ok(PartialPartition::new(cells))
}
