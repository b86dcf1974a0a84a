//! Seeded instance families.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Vertex, WeightedGraph};
use crate::rng::seeded;

/// Resampling budget for families that can come out disconnected.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// `k` distinct vertices drawn uniformly.
    Uniform,
    /// Vertices `⌊i n / k⌋` for `i = 0..k`.
    #[default]
    Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Unit-weight cycle.
    Cycle {
        n: usize,
        k: usize,
        placement: Placement,
    },
    /// Unit-weight `rows x cols` grid.
    Grid {
        rows: usize,
        cols: usize,
        k: usize,
        placement: Placement,
    },
    /// Random recursive tree with uniform weights in `[min_weight, max_weight]`.
    RandomTree {
        n: usize,
        k: usize,
        placement: Placement,
        min_weight: f64,
        max_weight: f64,
    },
    /// `G(n, p)` with uniform weights, resampled until connected.
    GnpWeighted {
        n: usize,
        p: f64,
        k: usize,
        placement: Placement,
        min_weight: f64,
        max_weight: f64,
    },
    /// Two unit-weight cliques whose vertices are all terminals, joined by a
    /// bridge of total weight `bridge_weight` subdivided by `bridge_steiner`
    /// Steiner vertices.
    Barbell {
        clique: usize,
        bridge_weight: f64,
        bridge_steiner: usize,
    },
    /// `count` random connected clusters of `size` vertices (weights in
    /// `[1, 4]`) chained by edges of weight `separation`, each with
    /// `terminals_per_cluster` uniformly placed terminals.
    Clusters {
        count: usize,
        size: usize,
        terminals_per_cluster: usize,
        separation: f64,
    },
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.to_string()))
    }
}

fn check_weights(lo: f64, hi: f64) -> Result<()> {
    check(
        lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi,
        "weight range must satisfy 0 < min <= max",
    )
}

fn place(n: usize, k: usize, placement: Placement, rng: &mut impl Rng) -> Result<Vec<Vertex>> {
    check(k >= 1 && k <= n, "terminal count must be between 1 and n")?;
    let mut t: Vec<Vertex> = match placement {
        Placement::Spread => (0..k).map(|i| i * n / k).collect(),
        Placement::Uniform => {
            let mut all: Vec<Vertex> = (0..n).collect();
            all.partial_shuffle(rng, k).0.to_vec()
        }
    };
    t.sort_unstable();
    Ok(t)
}

fn weight(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

fn is_connected(n: usize, edges: &[(Vertex, Vertex, f64)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn random_tree_edges(
    n: usize,
    lo: f64,
    hi: f64,
    offset: usize,
    rng: &mut impl Rng,
) -> Vec<(Vertex, Vertex, f64)> {
    (1..n)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            (offset + parent, offset + v, weight(rng, lo, hi))
        })
        .collect()
}

pub fn generate(family: &Family, seed: u64) -> Result<WeightedGraph> {
    let mut rng = seeded(seed);
    match *family {
        Family::Cycle { n, k, placement } => {
            check(n >= 3, "cycle needs n >= 3")?;
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
            WeightedGraph::new(n, &edges, place(n, k, placement, &mut rng)?)
        }
        Family::Grid {
            rows,
            cols,
            k,
            placement,
        } => {
            check(rows >= 1 && cols >= 1, "grid sides must be positive")?;
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1), 1.0));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c), 1.0));
                    }
                }
            }
            let n = rows * cols;
            WeightedGraph::new(n, &edges, place(n, k, placement, &mut rng)?)
        }
        Family::RandomTree {
            n,
            k,
            placement,
            min_weight,
            max_weight,
        } => {
            check(n >= 1, "tree needs n >= 1")?;
            check_weights(min_weight, max_weight)?;
            let edges = random_tree_edges(n, min_weight, max_weight, 0, &mut rng);
            WeightedGraph::new(n, &edges, place(n, k, placement, &mut rng)?)
        }
        Family::GnpWeighted {
            n,
            p,
            k,
            placement,
            min_weight,
            max_weight,
        } => {
            check(n >= 1, "G(n, p) needs n >= 1")?;
            check(p > 0.0 && p <= 1.0, "edge probability must lie in (0, 1]")?;
            check_weights(min_weight, max_weight)?;
            for _ in 0..MAX_ATTEMPTS {
                let mut edges = Vec::new();
                for u in 0..n {
                    for v in u + 1..n {
                        if rng.gen::<f64>() < p {
                            edges.push((u, v, weight(&mut rng, min_weight, max_weight)));
                        }
                    }
                }
                if is_connected(n, &edges) {
                    return WeightedGraph::new(n, &edges, place(n, k, placement, &mut rng)?);
                }
            }
            Err(Error::InvalidArgument(format!(
                "G({n}, {p}) stayed disconnected after {MAX_ATTEMPTS} samples"
            )))
        }
        Family::Barbell {
            clique,
            bridge_weight,
            bridge_steiner,
        } => {
            check(clique >= 1, "clique size must be positive")?;
            check(
                bridge_weight.is_finite() && bridge_weight > 0.0,
                "bridge weight must be positive",
            )?;
            let mut edges = Vec::new();
            for side in 0..2 {
                let base = side * clique;
                for u in 0..clique {
                    for v in u + 1..clique {
                        edges.push((base + u, base + v, 1.0));
                    }
                }
            }
            let segment = bridge_weight / (bridge_steiner + 1) as f64;
            let mut prev = clique - 1;
            for s in 0..bridge_steiner {
                let v = 2 * clique + s;
                edges.push((prev, v, segment));
                prev = v;
            }
            edges.push((prev, clique, segment));
            WeightedGraph::new(
                2 * clique + bridge_steiner,
                &edges,
                (0..2 * clique).collect(),
            )
        }
        Family::Clusters {
            count,
            size,
            terminals_per_cluster,
            separation,
        } => {
            check(
                count >= 1 && size >= 1,
                "cluster count and size must be positive",
            )?;
            check(
                terminals_per_cluster >= 1 && terminals_per_cluster <= size,
                "terminals per cluster must be between 1 and the cluster size",
            )?;
            check(
                separation.is_finite() && separation > 0.0,
                "separation must be positive",
            )?;
            let mut edges = Vec::new();
            let mut terminals = Vec::new();
            for c in 0..count {
                let base = c * size;
                let mut cluster = random_tree_edges(size, 1.0, 4.0, base, &mut rng);
                for u in 0..size {
                    for v in u + 1..size {
                        let (a, b) = (base + u, base + v);
                        if rng.gen::<f64>() < 0.3
                            && !cluster.iter().any(|&(x, y, _)| (x, y) == (a, b))
                        {
                            cluster.push((a, b, weight(&mut rng, 1.0, 4.0)));
                        }
                    }
                }
                edges.extend(cluster);
                terminals.extend(
                    place(size, terminals_per_cluster, Placement::Uniform, &mut rng)?
                        .into_iter()
                        .map(|t| base + t),
                );
                if c + 1 < count {
                    edges.push((base + size - 1, base + size, separation));
                }
            }
            WeightedGraph::new(count * size, &edges, terminals)
        }
    }
}
