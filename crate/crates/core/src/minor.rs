//! Terminal-centered minors.
//!
//! A [`PartialPartition`] holds one cell per terminal (aligned with the
//! terminal order). Contracting every cell of a complete partition yields a
//! [`TerminalMinor`] on the terminals; each minor edge gets the standard
//! restriction weight `d_G(t_i, t_j)`, always measured in the original graph.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{search, terminal_metric, DistanceMatrix, Vertex, WeightedGraph, UNREACHABLE};

/// Cells `V_1..V_k`, one per terminal. Vertices in no cell form `V_⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialPartition {
    cells: Vec<Vec<Vertex>>,
}

impl PartialPartition {
    /// Cells are stored sorted; duplicates are kept so validation can see them.
    pub fn new(mut cells: Vec<Vec<Vertex>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        PartialPartition { cells }
    }

    /// `V_j = {t_j}` for every terminal.
    pub fn singletons(g: &WeightedGraph) -> Self {
        PartialPartition {
            cells: g.terminals().iter().map(|&t| vec![t]).collect(),
        }
    }

    /// Builds cells from a per-vertex owner map.
    pub fn from_owners(k: usize, owners: &[Option<usize>]) -> Self {
        let mut cells = vec![Vec::new(); k];
        for (v, o) in owners.iter().enumerate() {
            if let Some(j) = *o {
                cells[j].push(v);
            }
        }
        PartialPartition { cells }
    }

    pub fn k(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Vec<Vertex>] {
        &self.cells
    }

    pub fn cell(&self, j: usize) -> &[Vertex] {
        &self.cells[j]
    }

    /// Owner of each vertex in `0..n`. Only meaningful for disjoint cells.
    pub fn owners(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (j, c) in self.cells.iter().enumerate() {
            for &v in c {
                if v < n {
                    owner[v] = Some(j);
                }
            }
        }
        owner
    }

    pub fn assigned_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Nonempty cells, in terminal order.
    pub fn nonempty_cells(&self) -> impl Iterator<Item = &[Vertex]> {
        self.cells
            .iter()
            .filter(|c| !c.is_empty())
            .map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionViolation {
    CellCount {
        expected: usize,
        found: usize,
    },
    VertexOutOfRange {
        cell: usize,
        vertex: Vertex,
    },
    Overlap {
        vertex: Vertex,
        first: usize,
        second: usize,
    },
    MissingTerminal {
        cell: usize,
        terminal: Vertex,
    },
    Disconnected {
        cell: usize,
        vertex: Vertex,
    },
    Uncovered {
        vertex: Vertex,
    },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CellCount { expected, found } => {
                write!(f, "expected {expected} cells, found {found}")
            }
            Self::VertexOutOfRange { cell, vertex } => {
                write!(f, "cell {cell} holds out-of-range vertex {vertex}")
            }
            Self::Overlap {
                vertex,
                first,
                second,
            } => {
                write!(f, "vertex {vertex} appears in cells {first} and {second}")
            }
            Self::MissingTerminal { cell, terminal } => {
                write!(f, "cell {cell} does not contain its terminal {terminal}")
            }
            Self::Disconnected { cell, vertex } => {
                write!(
                    f,
                    "vertex {vertex} is not connected to the terminal inside cell {cell}"
                )
            }
            Self::Uncovered { vertex } => write!(f, "vertex {vertex} is not assigned to any cell"),
        }
    }
}

/// Checks, in order: cell count, vertex ranges, disjointness, terminal
/// membership, connectivity of each `G[V_j]` and, if requested, coverage.
/// Returns the first violation found.
pub fn validate_partition(
    g: &WeightedGraph,
    p: &PartialPartition,
    require_complete: bool,
) -> std::result::Result<(), PartitionViolation> {
    if p.k() != g.k() {
        return Err(PartitionViolation::CellCount {
            expected: g.k(),
            found: p.k(),
        });
    }
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (j, cell) in p.cells().iter().enumerate() {
        for &v in cell {
            if v >= n {
                return Err(PartitionViolation::VertexOutOfRange { cell: j, vertex: v });
            }
            if let Some(first) = owner[v] {
                return Err(PartitionViolation::Overlap {
                    vertex: v,
                    first,
                    second: j,
                });
            }
            owner[v] = Some(j);
        }
    }
    for (j, &t) in g.terminals().iter().enumerate() {
        if owner[t] != Some(j) {
            return Err(PartitionViolation::MissingTerminal {
                cell: j,
                terminal: t,
            });
        }
    }
    for (j, &t) in g.terminals().iter().enumerate() {
        let tree = search(g, t, |v| owner[v] == Some(j), UNREACHABLE);
        if let Some(&v) = p.cell(j).iter().find(|&&v| tree.dist[v] == UNREACHABLE) {
            return Err(PartitionViolation::Disconnected { cell: j, vertex: v });
        }
    }
    if require_complete {
        if let Some(v) = owner.iter().position(Option::is_none) {
            return Err(PartitionViolation::Uncovered { vertex: v });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorEdge {
    /// Terminal indices, `a < b`.
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    /// Original edges `(u, v)` joining cell `a` to cell `b`.
    pub cross_edges: Vec<(Vertex, Vertex)>,
}

/// Contracted graph on the terminals. Parallel edges are collapsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalMinor {
    terminals: Vec<Vertex>,
    edges: Vec<MinorEdge>,
}

impl TerminalMinor {
    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    /// Original vertex ids of the minor's vertices.
    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn edges(&self) -> &[MinorEdge] {
        &self.edges
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k(), self.edges.len(), self.k());
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.a, e.b, e.weight));
        }
        let ids: Vec<String> = (0..self.k()).map(|i| i.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
        out
    }

    /// JSON document describing the minor; cross-edge provenance is only
    /// emitted when asked for.
    pub fn to_json(&self, provenance: bool) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                let mut obj = serde_json::json!({ "a": e.a, "b": e.b, "weight": e.weight });
                if provenance {
                    obj["cross_edges"] = serde_json::json!(e.cross_edges);
                }
                obj
            })
            .collect();
        serde_json::json!({
            "schema_version": 1,
            "k": self.k(),
            "terminals": self.terminals,
            "edges": edges,
        })
    }
}

/// Contracts every `G[V_j]` of a complete partition to `t_j`.
pub fn contract(g: &WeightedGraph, p: &PartialPartition) -> Result<TerminalMinor> {
    validate_partition(g, p, true).map_err(Error::InvalidPartition)?;
    let owner = p.owners(g.n());
    let mut cross: BTreeMap<(usize, usize), Vec<(Vertex, Vertex)>> = BTreeMap::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (owner[u].expect("complete"), owner[v].expect("complete"));
        if a != b {
            let key = if a < b { (a, b) } else { (b, a) };
            cross.entry(key).or_default().push((u, v));
        }
    }
    let metric = if cross.is_empty() {
        DistanceMatrix::filled(g.k(), UNREACHABLE)
    } else {
        terminal_metric(g)
    };
    let edges = cross
        .into_iter()
        .map(|((a, b), cross_edges)| MinorEdge {
            a,
            b,
            weight: metric.get(a, b),
            cross_edges,
        })
        .collect();
    Ok(TerminalMinor {
        terminals: g.terminals().to_vec(),
        edges,
    })
}

/// All-pairs distances in the minor (Floyd-Warshall on `k` vertices).
pub fn minor_distances(m: &TerminalMinor) -> DistanceMatrix {
    let k = m.k();
    let mut d = DistanceMatrix::filled(k, UNREACHABLE);
    for e in m.edges() {
        if e.weight < d.get(e.a, e.b) {
            d.set(e.a, e.b, e.weight);
            d.set(e.b, e.a, e.weight);
        }
    }
    for via in 0..k {
        for i in 0..k {
            let di = d.get(i, via);
            if di == UNREACHABLE {
                continue;
            }
            for j in 0..k {
                let cand = di + d.get(via, j);
                if cand < d.get(i, j) {
                    d.set(i, j, cand);
                }
            }
        }
    }
    d
}

#[derive(Copy, Clone, PartialEq)]
struct ForestKey {
    dist: f64,
    label: usize,
    vertex: Vertex,
}

impl Eq for ForestKey {}

impl Ord for ForestKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.label.cmp(&other.label))
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for ForestKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Labels every allowed vertex with the seed whose `(distance, label)` is
/// lexicographically smallest, growing a shortest-path forest from
/// `(vertex, initial distance, label)` seeds. Every label class is connected
/// through forest edges. Seed vertices keep their own labels.
pub(crate) fn labelled_forest<F>(
    g: &WeightedGraph,
    seeds: &[(Vertex, f64, usize)],
    allowed: F,
) -> Vec<Option<usize>>
where
    F: Fn(Vertex) -> bool,
{
    let n = g.n();
    let mut best: Vec<(f64, usize)> = vec![(UNREACHABLE, usize::MAX); n];
    let mut fixed = vec![false; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &(v, d, label) in seeds {
        best[v] = (d, label);
        fixed[v] = true;
        heap.push(Reverse(ForestKey {
            dist: d,
            label,
            vertex: v,
        }));
    }
    while let Some(Reverse(ForestKey {
        dist,
        label,
        vertex: u,
    })) = heap.pop()
    {
        if done[u] || (dist, label) != best[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            if done[v] || fixed[v] || !allowed(v) {
                continue;
            }
            let cand = (dist + w, label);
            if cand.0 < best[v].0 || (cand.0 == best[v].0 && cand.1 < best[v].1) {
                best[v] = cand;
                heap.push(Reverse(ForestKey {
                    dist: cand.0,
                    label,
                    vertex: v,
                }));
            }
        }
    }
    best.into_iter()
        .zip(done)
        .map(|((_, label), d)| d.then_some(label))
        .collect()
}

/// Sends every vertex to its nearest terminal; equidistant vertices go to
/// the lowest terminal index. Cells are connected because each vertex
/// inherits the label of a tight predecessor.
pub fn nearest_terminal_partition(g: &WeightedGraph) -> PartialPartition {
    let seeds: Vec<_> = g
        .terminals()
        .iter()
        .enumerate()
        .map(|(j, &t)| (t, 0.0, j))
        .collect();
    let owners = labelled_forest(g, &seeds, |_| true);
    PartialPartition::from_owners(g.k(), &owners)
}
