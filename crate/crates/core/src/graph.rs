//! Undirected weighted graphs with a designated terminal list, plus the
//! shortest-path primitives every other module is built on.
//!
//! All searches accept a vertex predicate so that callers can work inside an
//! induced subgraph `G[U]` without materializing it. Distances are `f64`;
//! unreachable vertices carry [`UNREACHABLE`] (positive infinity), never a
//! large finite stand-in.
//!
//! Ball membership uses exact floating comparison (`d <= r`). Radii handed to
//! [`ball`] by the randomized algorithms come from continuous distributions,
//! so a vertex landing exactly on a boundary is a probability-zero event.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Distance sentinel for vertices a search cannot reach.
pub const UNREACHABLE: f64 = f64::INFINITY;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    /// Adjacency lists sorted by neighbor id.
    adj: Vec<Vec<(Vertex, f64)>>,
    terminals: Vec<Vertex>,
    edge_count: usize,
}

impl WeightedGraph {
    /// Builds and validates a graph. Rejects self-loops, duplicate edges,
    /// non-positive or non-finite weights, bad terminal lists and vertices
    /// that no terminal can reach.
    pub fn new(n: usize, edges: &[(Vertex, Vertex, f64)], terminals: Vec<Vertex>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph must have at least one vertex".into(),
            ));
        }
        if terminals.is_empty() {
            return Err(Error::InvalidGraph(
                "at least one terminal is required".into(),
            ));
        }
        let mut adj: Vec<Vec<(Vertex, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-positive or non-finite weight {w}"
                )));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({u}, {})",
                    pair[0].0
                )));
            }
        }
        let mut seen = vec![false; n];
        for &t in &terminals {
            if t >= n {
                return Err(Error::InvalidGraph(format!(
                    "terminal {t} out of range for n = {n}"
                )));
            }
            if seen[t] {
                return Err(Error::InvalidGraph(format!("terminal {t} listed twice")));
            }
            seen[t] = true;
        }
        let g = WeightedGraph {
            adj,
            terminals,
            edge_count: edges.len(),
        };
        if let Some(v) = g.first_unreachable() {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} is not reachable from any terminal"
            )));
        }
        Ok(g)
    }

    fn first_unreachable(&self) -> Option<Vertex> {
        let mut seen = vec![false; self.n()];
        let mut queue: VecDeque<Vertex> = self.terminals.iter().copied().collect();
        for &t in &self.terminals {
            seen[t] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn terminals(&self) -> &[Vertex] {
        &self.terminals
    }

    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, f64)] {
        &self.adj[v]
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<f64> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| list[i].1)
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    pub fn min_edge_weight(&self) -> Option<f64> {
        self.edges().map(|(_, _, w)| w).min_by(f64::total_cmp)
    }

    /// Copy of the graph with every edge weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<WeightedGraph> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor {factor} must be positive"
            )));
        }
        let adj = self
            .adj
            .iter()
            .map(|list| list.iter().map(|&(v, w)| (v, w * factor)).collect())
            .collect();
        Ok(WeightedGraph {
            adj,
            terminals: self.terminals.clone(),
            edge_count: self.edge_count,
        })
    }

    /// Induced subgraph `G[vertices]` with the given terminals, relabelled
    /// to `0..vertices.len()` in the order given. Returns the subgraph and
    /// the local-to-global vertex map.
    pub fn induced(
        &self,
        vertices: &[Vertex],
        terminals: &[Vertex],
    ) -> Result<(WeightedGraph, Vec<Vertex>)> {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n() || local[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "bad or repeated vertex {v} in induced set"
                )));
            }
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for &(v, w) in &self.adj[u] {
                let j = local[v];
                if j != usize::MAX && i < j {
                    edges.push((i, j, w));
                }
            }
        }
        let mut local_terminals = Vec::with_capacity(terminals.len());
        for &t in terminals {
            match local.get(t) {
                Some(&i) if i != usize::MAX => local_terminals.push(i),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "terminal {t} is outside the induced set"
                    )))
                }
            }
        }
        Ok((
            WeightedGraph::new(vertices.len(), &edges, local_terminals)?,
            vertices.to_vec(),
        ))
    }
}

/// Ordered shortest path with its total weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathWitness {
    pub vertices: Vec<Vertex>,
    pub length: f64,
}

/// Dense symmetric `k x k` matrix of distances between terminals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn filled(k: usize, value: f64) -> Self {
        let mut entries = vec![value; k * k];
        for i in 0..k {
            entries[i * k + i] = 0.0;
        }
        DistanceMatrix { k, entries }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArgument(
                "distance matrix must be square".into(),
            ));
        }
        Ok(DistanceMatrix {
            k,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, d: f64) {
        self.entries[i * self.k + j] = d;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.k.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Off-diagonal entries `(i, j, d)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.k).flat_map(move |i| (i + 1..self.k).map(move |j| (i, j, self.get(i, j))))
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    dist: f64,
    vertex: Vertex,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path tree produced by [`search`].
#[derive(Debug, Clone)]
pub(crate) struct SearchTree {
    pub dist: Vec<f64>,
    /// Tight predecessor with the smallest id; `None` for roots and
    /// unreached vertices.
    pub pred: Vec<Option<Vertex>>,
}

/// Dijkstra over the subgraph induced by `allowed`, stopping once the
/// frontier exceeds `cutoff`. Vertices beyond the cutoff stay unreachable.
pub(crate) fn search<F>(g: &WeightedGraph, source: Vertex, allowed: F, cutoff: f64) -> SearchTree
where
    F: Fn(Vertex) -> bool,
{
    let n = g.n();
    let mut dist = vec![UNREACHABLE; n];
    let mut pred: Vec<Option<Vertex>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        vertex: source,
    });
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            if done[v] || !allowed(v) {
                continue;
            }
            let nd = d + w;
            if nd > cutoff {
                continue;
            }
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some(u);
                heap.push(HeapEntry {
                    dist: nd,
                    vertex: v,
                });
            } else if nd == dist[v] && pred[v].is_some_and(|p| u < p) {
                pred[v] = Some(u);
            }
        }
    }
    SearchTree { dist, pred }
}

fn check_source<F: Fn(Vertex) -> bool>(
    g: &WeightedGraph,
    source: Vertex,
    allowed: &F,
) -> Result<()> {
    if source >= g.n() {
        return Err(Error::InvalidArgument(format!(
            "vertex {source} out of range"
        )));
    }
    if !allowed(source) {
        return Err(Error::InvalidArgument(format!(
            "source {source} is not in the allowed vertex set"
        )));
    }
    Ok(())
}

/// Distances from `source` in `G[allowed]`; [`UNREACHABLE`] elsewhere.
pub fn shortest_distances<F>(g: &WeightedGraph, source: Vertex, allowed: F) -> Result<Vec<f64>>
where
    F: Fn(Vertex) -> bool,
{
    check_source(g, source, &allowed)?;
    Ok(search(g, source, allowed, UNREACHABLE).dist)
}

/// `B_H(center, r)` for `H = G[allowed]`, as a sorted vertex list.
pub fn ball<F>(g: &WeightedGraph, center: Vertex, radius: f64, allowed: F) -> Result<Vec<Vertex>>
where
    F: Fn(Vertex) -> bool,
{
    check_source(g, center, &allowed)?;
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "radius {radius} must be nonnegative"
        )));
    }
    let tree = search(g, center, allowed, radius);
    Ok((0..g.n()).filter(|&v| tree.dist[v] <= radius).collect())
}

/// A shortest `u`-`v` path in `G`. Ties resolve to the smallest predecessor
/// id at every step, so the witness is deterministic.
pub fn shortest_path_witness(g: &WeightedGraph, u: Vertex, v: Vertex) -> Result<PathWitness> {
    check_source(g, u, &|_| true)?;
    if v >= g.n() {
        return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
    }
    let tree = search(g, u, |_| true, UNREACHABLE);
    if tree.dist[v] == UNREACHABLE {
        return Err(Error::NoPath(u, v));
    }
    let mut vertices = vec![v];
    let mut cur = v;
    while let Some(p) = tree.pred[cur] {
        vertices.push(p);
        cur = p;
    }
    vertices.reverse();
    Ok(PathWitness {
        vertices,
        length: tree.dist[v],
    })
}

/// Distances from every vertex to every vertex, one Dijkstra per row.
pub fn all_pairs(g: &WeightedGraph) -> Vec<Vec<f64>> {
    (0..g.n())
        .map(|s| search(g, s, |_| true, UNREACHABLE).dist)
        .collect()
}

/// `d_G(t_i, t_j)` for all terminal pairs. Entry `(i, j)` and `(j, i)` both
/// come from the search rooted at the lower index, so the matrix is exactly
/// symmetric.
pub fn terminal_metric(g: &WeightedGraph) -> DistanceMatrix {
    let k = g.k();
    let t = g.terminals();
    let mut m = DistanceMatrix::filled(k, UNREACHABLE);
    for i in 0..k.saturating_sub(1) {
        let dist = search(g, t[i], |_| true, UNREACHABLE).dist;
        for j in i + 1..k {
            m.set(i, j, dist[t[j]]);
            m.set(j, i, dist[t[j]]);
        }
    }
    m
}

/// Largest over smallest terminal distance of an already computed metric.
pub fn metric_aspect_ratio(metric: &DistanceMatrix) -> Result<f64> {
    if metric.k() < 2 {
        return Err(Error::InvalidArgument(
            "aspect ratio needs at least two terminals".into(),
        ));
    }
    let (lo, hi) = metric
        .pairs()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), (_, _, d)| {
            (lo.min(d), hi.max(d))
        });
    Ok(hi / lo)
}

/// Max terminal distance divided by min terminal distance.
pub fn aspect_ratio(g: &WeightedGraph) -> Result<f64> {
    if g.k() < 2 {
        return Err(Error::InvalidArgument(
            "aspect ratio needs at least two terminals".into(),
        ));
    }
    metric_aspect_ratio(&terminal_metric(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, terminals: Vec<usize>) -> WeightedGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        WeightedGraph::new(n, &edges, terminals).unwrap()
    }

    fn path_abc() -> WeightedGraph {
        WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 2.0)], vec![0]).unwrap()
    }

    #[test]
    fn path_distances() {
        let g = path_abc();
        assert_eq!(
            shortest_distances(&g, 0, |_| true).unwrap(),
            vec![0.0, 1.0, 3.0]
        );
        let d = shortest_distances(&g, 0, |v| v != 1).unwrap();
        assert_eq!(d[2], UNREACHABLE);
    }

    #[test]
    fn source_outside_predicate_is_rejected() {
        let g = path_abc();
        assert!(matches!(
            shortest_distances(&g, 1, |v| v != 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            ball(&g, 1, 1.0, |v| v != 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn nine_cycle_distances() {
        let g = cycle(9, vec![0]);
        let d = shortest_distances(&g, 0, |_| true).unwrap();
        assert_eq!(d, vec![0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn balls() {
        let g = cycle(9, vec![0]);
        assert_eq!(ball(&g, 4, 0.0, |_| true).unwrap(), vec![4]);
        assert_eq!(ball(&g, 0, 1.0, |_| true).unwrap(), vec![0, 1, 8]);
        assert_eq!(
            ball(&g, 0, 100.0, |_| true).unwrap(),
            (0..9).collect::<Vec<_>>()
        );
        assert!(ball(&g, 0, -1.0, |_| true).is_err());
    }

    #[test]
    fn witnesses() {
        let g = path_abc();
        let w = shortest_path_witness(&g, 1, 1).unwrap();
        assert_eq!(w.vertices, vec![1]);
        assert_eq!(w.length, 0.0);
        let w = shortest_path_witness(&g, 0, 2).unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2]);
        assert_eq!(w.length, 3.0);

        // 0 -> 4 on a 9-cycle: arcs of length 4 (via 1,2,3) and 5 (via 8..5).
        let c = cycle(9, vec![0]);
        let w = shortest_path_witness(&c, 0, 4).unwrap();
        assert_eq!(w.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(w.length, 4.0);
    }

    #[test]
    fn witness_tie_breaks_to_smallest_predecessor() {
        // 0 -> 3 through either 1 or 2, both length 2.
        let g = WeightedGraph::new(
            4,
            &[(0, 2, 1.0), (2, 3, 1.0), (0, 1, 1.0), (1, 3, 1.0)],
            vec![0],
        )
        .unwrap();
        assert_eq!(
            shortest_path_witness(&g, 0, 3).unwrap().vertices,
            vec![0, 1, 3]
        );
    }

    #[test]
    fn terminal_metrics() {
        let single = cycle(9, vec![2]);
        assert_eq!(terminal_metric(&single).rows(), vec![vec![0.0]]);

        let g = cycle(9, vec![0, 3, 6]);
        let m = terminal_metric(&g);
        for (_, _, d) in m.pairs() {
            assert_eq!(d, 3.0);
        }
        assert_eq!(aspect_ratio(&g).unwrap(), 1.0);

        let star =
            WeightedGraph::new(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], vec![1, 2, 3]).unwrap();
        for (_, _, d) in terminal_metric(&star).pairs() {
            assert_eq!(d, 2.0);
        }
    }

    #[test]
    fn aspect_ratios() {
        // terminals at both ends and the middle of a 1-then-9 path
        let g = WeightedGraph::new(3, &[(0, 1, 1.0), (1, 2, 9.0)], vec![0, 1, 2]).unwrap();
        assert_eq!(aspect_ratio(&g).unwrap(), 10.0);
        let two = WeightedGraph::new(3, &[(0, 1, 1.5), (1, 2, 7.0)], vec![0, 2]).unwrap();
        assert_eq!(aspect_ratio(&two).unwrap(), 1.0);
        assert!(aspect_ratio(&cycle(4, vec![0])).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(WeightedGraph::new(2, &[(0, 0, 1.0)], vec![0]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, 1.0), (1, 0, 2.0)], vec![0]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, 0.0)], vec![0]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, -1.0)], vec![0]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, 1.0)], vec![0, 0]).is_err());
        assert!(WeightedGraph::new(2, &[(0, 1, 1.0)], vec![2]).is_err());
        assert!(WeightedGraph::new(3, &[(0, 1, 1.0)], vec![0]).is_err());
        assert!(WeightedGraph::new(3, &[(0, 1, 1.0)], vec![0, 2]).is_ok());
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = cycle(6, vec![0, 3]);
        let (h, map) = g.induced(&[3, 4, 5], &[3]).unwrap();
        assert_eq!(map, vec![3, 4, 5]);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.terminals(), &[0]);
        assert!(g.induced(&[0, 3], &[0]).is_err());
    }
}
