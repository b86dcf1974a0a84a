//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use terminal_minors::{PartialPartition, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph: a random spanning tree plus extra edges. With
/// `integer` set, weights are drawn from 1..=4 so ties are common.
pub fn random_connected(rng: &mut impl Rng, n: usize, k: usize, integer: bool) -> WeightedGraph {
    fn w(rng: &mut impl Rng, integer: bool) -> f64 {
        if integer {
            rng.gen_range(1..=4) as f64
        } else {
            rng.gen_range(0.1..10.0)
        }
    }
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, w(rng, integer)));
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v
            && !edges
                .iter()
                .any(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u))
        {
            edges.push((u, v, w(rng, integer)));
        }
    }
    let mut all: Vec<usize> = (0..n).collect();
    let mut terminals = Vec::new();
    for _ in 0..k {
        let i = rng.gen_range(0..all.len());
        terminals.push(all.swap_remove(i));
    }
    terminals.sort_unstable();
    WeightedGraph::new(n, &edges, terminals).unwrap()
}

/// Visits every simple path starting at `source` inside `allowed`, calling
/// `f(end, length, path)`. Lengths are summed from the source outwards.
pub fn for_each_simple_path(
    g: &WeightedGraph,
    source: usize,
    allowed: &dyn Fn(usize) -> bool,
    f: &mut dyn FnMut(usize, f64, &[usize]),
) {
    fn go(
        g: &WeightedGraph,
        path: &mut Vec<usize>,
        len: f64,
        on: &mut [bool],
        allowed: &dyn Fn(usize) -> bool,
        f: &mut dyn FnMut(usize, f64, &[usize]),
    ) {
        let u = *path.last().unwrap();
        f(u, len, path);
        for &(v, w) in g.neighbors(u) {
            if !on[v] && allowed(v) {
                on[v] = true;
                path.push(v);
                go(g, path, len + w, on, allowed, f);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[source] = true;
    go(g, &mut vec![source], 0.0, &mut on, allowed, f);
}

/// Exact distances from `source` in `G[allowed]` by exhaustive path
/// enumeration.
pub fn brute_distances(
    g: &WeightedGraph,
    source: usize,
    allowed: &dyn Fn(usize) -> bool,
) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; g.n()];
    for_each_simple_path(g, source, allowed, &mut |v, len, _| {
        if len < d[v] {
            d[v] = len;
        }
    });
    d
}

/// Floyd–Warshall distances on an explicit weighted edge list.
pub fn floyd(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (u, v, w) in edges {
        if w < d[u][v] {
            d[u][v] = w;
            d[v][u] = w;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Terminal distances in the minor induced by `p`, computed from scratch:
/// cells are adjacent when an edge crosses them, the edge between cells
/// `a` and `b` weighs `d_G(t_a, t_b)`, and minor distances come from
/// Floyd–Warshall.
pub fn brute_minor_distances(g: &WeightedGraph, p: &PartialPartition) -> Vec<Vec<f64>> {
    let d = floyd(g.n(), g.edges());
    let t = g.terminals();
    let k = g.k();
    let mut owner = vec![usize::MAX; g.n()];
    for (j, cell) in p.cells().iter().enumerate() {
        for &v in cell {
            owner[v] = j;
        }
    }
    let mut minor_edges = Vec::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != b && a != usize::MAX && b != usize::MAX {
            minor_edges.push((a, b, d[t[a]][t[b]]));
        }
    }
    floyd(k, minor_edges)
}

/// Maximum and minimum stretch of the minor induced by `p`.
pub fn brute_stretch(g: &WeightedGraph, p: &PartialPartition) -> (f64, f64) {
    let d = floyd(g.n(), g.edges());
    let m = brute_minor_distances(g, p);
    let t = g.terminals();
    let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..g.k() {
        for j in 0..g.k() {
            if i != j {
                let s = m[i][j] / d[t[i]][t[j]];
                hi = hi.max(s);
                lo = lo.min(s);
            }
        }
    }
    (hi, lo)
}
