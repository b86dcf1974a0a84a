//! Iterative exponential-radius ball growing.
//!
//! Every terminal `t_j` owns a cell `V_j`, initially `{t_j}`, and a radius
//! `r_j = 0`. Outer iteration `i` visits the terminals in order; terminal
//! `j` draws `R ~ Exp(mean b^i)`, sets `r_j += R`, and replaces `V_j` with
//! the ball of radius `r_j` around `t_j` inside `G[V_⊥ ∪ V_j]`. The loop
//! stops once every vertex is assigned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{aspect_ratio, search, terminal_metric, Vertex, WeightedGraph};
use crate::minor::PartialPartition;
use crate::rng::{exponential, seeded, UnitSource};

/// How `exp(b^i)` is read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusLaw {
    /// Mean `b^i`: radii grow from one outer iteration to the next.
    #[default]
    Mean,
    /// Rate `b^i`, i.e. mean `b^{-i}`. Radii shrink; mostly useful to
    /// observe the iteration cap.
    Rate,
}

#[derive(Debug, Clone, Default)]
pub struct SprOptions {
    pub b_override: Option<f64>,
    pub radius_law: RadiusLaw,
    /// Record one [`TraceStep`] per inner-loop step.
    pub trace: bool,
    /// Check the cell invariants after every inner-loop step.
    pub check_steps: bool,
    /// Replaces the default outer-iteration cap.
    pub max_outer: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: u64,
    pub terminal: usize,
    /// `R_j^i`
    pub drawn: f64,
    /// `r_j` after the increment.
    pub radius: f64,
    pub assigned: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SprOutcome {
    pub partition: PartialPartition,
    pub outer_iterations: u64,
    pub b: f64,
    pub trace: Vec<TraceStep>,
}

/// `b = 1 + 1/(35 log₂ k)`. With one terminal the value is irrelevant to
/// correctness; 2 is used so the lone ball grows quickly.
pub fn growth_base(k: usize) -> f64 {
    if k <= 1 {
        2.0
    } else {
        1.0 + 1.0 / (35.0 * (k as f64).log2())
    }
}

/// `2^{k³}`, or infinity once it leaves `f64` range.
pub fn cubic_threshold(k: usize) -> f64 {
    let e = (k as u64).saturating_pow(3);
    if e <= 1023 {
        2f64.powi(e as i32)
    } else {
        f64::INFINITY
    }
}

/// `𝒟 ≤ threshold`.
pub fn assumption_holds(g: &WeightedGraph, threshold: f64) -> Result<bool> {
    Ok(aspect_ratio(g)? <= threshold)
}

/// Scales weights so the closest terminal pair is at distance 1. Returns
/// the scaled graph and the original minimum distance (multiply by it to
/// get back to input units).
pub fn rescale_to_unit_min(g: &WeightedGraph) -> Result<(WeightedGraph, f64)> {
    if g.k() < 2 {
        return Err(Error::InvalidArgument(
            "rescaling needs at least two terminals".into(),
        ));
    }
    let min = terminal_metric(g)
        .pairs()
        .map(|(_, _, d)| d)
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::InvalidArgument(
            "terminals are pairwise disconnected".into(),
        ));
    }
    if min == 1.0 {
        return Ok((g.clone(), 1.0));
    }
    Ok((g.scaled(1.0 / min)?, min))
}

/// Default outer-iteration budget `200 ⌈log_b(n L k + 2)⌉`, where `L` is
/// the larger of the aspect ratio and the total edge weight (the latter
/// bounds every restricted distance when weights are not normalized).
pub fn iteration_cap(g: &WeightedGraph, b: f64) -> u64 {
    let aspect = if g.k() >= 2 {
        aspect_ratio(g)
            .ok()
            .filter(|a| a.is_finite())
            .unwrap_or(1.0)
    } else {
        1.0
    };
    let scale = aspect.max(g.total_weight()).max(1.0);
    let arg = g.n() as f64 * scale * g.k() as f64 + 2.0;
    (200.0 * (arg.ln() / b.ln()).ceil()).min(u64::MAX as f64 / 2.0) as u64
}

pub fn run_partition(g: &WeightedGraph, seed: u64, opts: &SprOptions) -> Result<SprOutcome> {
    run_partition_with(g, &mut seeded(seed), opts)
}

/// Ball growing driven by an explicit uniform source. Uniforms are consumed
/// one per inner-loop step, in `(i, j)` order.
pub fn run_partition_with(
    g: &WeightedGraph,
    src: &mut impl UnitSource,
    opts: &SprOptions,
) -> Result<SprOutcome> {
    let k = g.k();
    let n = g.n();
    let b = opts.b_override.unwrap_or_else(|| growth_base(k));
    if !(b.is_finite() && b > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "growth base b = {b} must exceed 1"
        )));
    }
    let cap = opts.max_outer.unwrap_or_else(|| iteration_cap(g, b));

    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (j, &t) in g.terminals().iter().enumerate() {
        owner[t] = Some(j);
    }
    let mut radii = vec![0.0f64; k];
    let mut unassigned = n - k;
    let mut trace = Vec::new();
    let mut i: u64 = 0;

    while unassigned > 0 {
        if i >= cap {
            return Err(Error::IterationCap {
                cap,
                unassigned,
                partial: Box::new(PartialPartition::from_owners(k, &owner)),
            });
        }
        i += 1;
        let mean = match opts.radius_law {
            RadiusLaw::Mean => b.powf(i as f64),
            RadiusLaw::Rate => b.powf(-(i as f64)),
        };
        for (j, &t) in g.terminals().iter().enumerate() {
            let drawn = exponential(src, mean);
            radii[j] += drawn;
            let r = radii[j];
            let tree = search(g, t, |v| owner[v].is_none_or(|o| o == j), r);
            if opts.check_steps {
                if let Some(v) = (0..n).find(|&v| owner[v] == Some(j) && tree.dist[v] > r) {
                    return Err(Error::Invariant(format!(
                        "cell {j} lost vertex {v} at iteration {i}"
                    )));
                }
            }
            let mut assigned = Vec::new();
            for v in 0..n {
                if owner[v].is_none() && tree.dist[v] <= r {
                    owner[v] = Some(j);
                    assigned.push(v);
                }
            }
            unassigned -= assigned.len();
            if opts.check_steps {
                check_cell(g, &owner, j)
                    .map_err(|e| Error::Invariant(format!("iteration {i}, terminal {j}: {e}")))?;
            }
            if opts.trace {
                trace.push(TraceStep {
                    iteration: i,
                    terminal: j,
                    drawn,
                    radius: r,
                    assigned,
                });
            }
            if unassigned == 0 {
                break;
            }
        }
    }
    Ok(SprOutcome {
        partition: PartialPartition::from_owners(k, &owner),
        outer_iterations: i,
        b,
        trace,
    })
}

/// Cell `j` contains its terminal and is connected. Disjointness holds by
/// construction of the owner map.
fn check_cell(
    g: &WeightedGraph,
    owner: &[Option<usize>],
    j: usize,
) -> std::result::Result<(), String> {
    let t = g.terminals()[j];
    if owner[t] != Some(j) {
        return Err(format!("terminal {t} left its cell"));
    }
    let tree = search(g, t, |v| owner[v] == Some(j), f64::INFINITY);
    match (0..g.n()).find(|&v| owner[v] == Some(j) && !tree.dist[v].is_finite()) {
        Some(v) => Err(format!("vertex {v} is disconnected from terminal {t}")),
        None => Ok(()),
    }
}
