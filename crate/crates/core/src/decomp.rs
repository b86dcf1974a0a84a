//! Terminal decomposition by truncated-exponential ball carving, and a
//! Monte-Carlo verifier for its diameter, separation and
//! degree-of-separation properties.
//!
//! `log` is base 2 everywhere in this module: `λ = Δ / log₂ k` and the
//! padding parameter is `β = 4 log₂ k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    all_pairs, search, shortest_path_witness, PathWitness, Vertex, WeightedGraph, UNREACHABLE,
};
use crate::minor::PartialPartition;
use crate::rng::{derive_seed, seeded, UnitSource, SAMPLE_STREAM};

/// Largest `t` tracked in the `Pr[Z_P > t]` tail.
pub const TAIL_MAX: usize = 8;

/// Random vertex pairs sampled per instance, on top of all terminal pairs.
pub const RANDOM_PAIRS: usize = 50;

/// Exponential law with scale `λ` conditioned on `[0, Δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncExpParams {
    lambda: f64,
    delta: f64,
}

impl TruncExpParams {
    pub fn new(lambda: f64, delta: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0 && delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "truncated exponential needs lambda > 0 and delta > 0, got ({lambda}, {delta})"
            )));
        }
        Ok(TruncExpParams { lambda, delta })
    }

    /// Parameters used when carving with `k` terminals: `λ = Δ / log₂ k`,
    /// or `λ = Δ` when `k = 1`.
    pub fn for_terminals(k: usize, delta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "carving needs at least one terminal".into(),
            ));
        }
        let lambda = if k == 1 {
            delta
        } else {
            delta / (k as f64).log2()
        };
        Self::new(lambda, delta)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `1 - e^{-Δ/λ}`, the normalizing mass.
    fn mass(&self) -> f64 {
        -(-self.delta / self.lambda).exp_m1()
    }

    pub fn density(&self, x: f64) -> f64 {
        if (0.0..self.delta).contains(&x) {
            (-x / self.lambda).exp() / (self.lambda * self.mass())
        } else {
            0.0
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= self.delta {
            1.0
        } else {
            -(-x / self.lambda).exp_m1() / self.mass()
        }
    }

    pub fn mean(&self) -> f64 {
        let r = self.delta / self.lambda;
        self.lambda - self.delta * (-r).exp() / self.mass()
    }

    /// Inverse-CDF sample `-λ ln(1 - U (1 - e^{-Δ/λ}))`, kept strictly below `Δ`.
    pub fn sample(&self, src: &mut impl UnitSource) -> f64 {
        let u = src.next_unit();
        let x = -self.lambda * (-u * self.mass()).ln_1p();
        if x >= self.delta {
            self.delta.next_down()
        } else {
            x.max(0.0)
        }
    }
}

/// Closed form of `Pr[R ≥ Δ - 2λ]` for `R ~ texp(λ, Δ)` with
/// `λ = Δ / log₂ k`. The lower limit is clamped at zero, which makes the
/// value exactly 1 for `k ≤ 4`. The result does not depend on `Δ`.
pub fn far_ball_probability(k: usize, delta: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "far-ball probability needs k >= 2".into(),
        ));
    }
    let p = TruncExpParams::for_terminals(k, delta)?;
    let lower = (p.delta - 2.0 * p.lambda).max(0.0);
    Ok(1.0 - p.cdf(lower))
}

/// Carving result: cells aligned with terminal order (possibly empty, and a
/// terminal may sit in an earlier terminal's cell) plus the sampled radii.
#[derive(Debug, Clone, PartialEq)]
pub struct Carving {
    pub partition: PartialPartition,
    pub radii: Vec<f64>,
}

/// Reusable carving state for one graph: distances from each terminal.
#[derive(Debug, Clone)]
pub struct Carver {
    n: usize,
    terminal_dist: Vec<Vec<f64>>,
}

impl Carver {
    pub fn new(g: &WeightedGraph) -> Self {
        let terminal_dist = g
            .terminals()
            .iter()
            .map(|&t| search(g, t, |_| true, UNREACHABLE).dist)
            .collect();
        Carver {
            n: g.n(),
            terminal_dist,
        }
    }

    pub fn carve(&self, delta: f64, src: &mut impl UnitSource) -> Result<Carving> {
        let params = TruncExpParams::for_terminals(self.terminal_dist.len(), delta)?;
        let mut owner: Vec<Option<usize>> = vec![None; self.n];
        let mut radii = Vec::with_capacity(self.terminal_dist.len());
        for (j, dist) in self.terminal_dist.iter().enumerate() {
            let r = params.sample(src);
            radii.push(r);
            for (v, o) in owner.iter_mut().enumerate() {
                if o.is_none() && dist[v] <= r {
                    *o = Some(j);
                }
            }
        }
        Ok(Carving {
            partition: PartialPartition::from_owners(radii.len(), &owner),
            radii,
        })
    }
}

/// One carving pass `S_j = B(t_j, R_j) \ (B_1 ∪ … ∪ B_{j-1})` in terminal
/// order, with balls in the unrestricted graph metric.
pub fn carve(g: &WeightedGraph, delta: f64, src: &mut impl UnitSource) -> Result<Carving> {
    Carver::new(g).carve(delta, src)
}

/// `Z_P`: number of cells meeting the path.
pub fn degree_of_separation(p: &PartialPartition, path: &PathWitness) -> usize {
    p.cells()
        .iter()
        .filter(|cell| path.vertices.iter().any(|v| cell.binary_search(v).is_ok()))
        .count()
}

fn zp_from_owners(owner: &[Option<usize>], path: &[Vertex], seen: &mut Vec<usize>) -> usize {
    seen.clear();
    seen.extend(path.iter().filter_map(|&v| owner[v]));
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn separated(owner: &[Option<usize>], x: Vertex, y: Vertex) -> bool {
    x != y && owner[x] != owner[y]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStat {
    pub x: Vertex,
    pub y: Vertex,
    pub distance: f64,
    pub separations: u64,
    pub frequency: f64,
    pub std_error: f64,
    /// `β d(x, y) / Δ`
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStat {
    /// Terminal indices of the endpoints.
    pub from: usize,
    pub to: usize,
    pub length: f64,
    pub vertex_count: usize,
    pub mean_zp: f64,
    pub zp_std_error: f64,
    /// `1 + β d(P) / Δ`
    pub mean_bound: f64,
    pub mean_pass: bool,
    /// `tail[t - 1] = Pr[Z_P > t]` for `t = 1..=TAIL_MAX`.
    pub tail: Vec<f64>,
    /// Least-squares slope of `ln Pr[Z_P > t]` over the `t` whose frequency
    /// lies strictly between `10 / trials` and 1; `None` with fewer than two
    /// such points.
    pub decay_slope: Option<f64>,
    pub decay_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub trials: u64,
    pub delta: f64,
    pub lambda: f64,
    pub beta: f64,
    pub diameter_violations: u64,
    pub max_cell_diameter: f64,
    pub cover_violations: u64,
    pub pairs: Vec<PairStat>,
    pub paths: Vec<PathStat>,
    /// `t -> Pr[Z_P > t]` averaged over all tested paths.
    pub zp_histogram: Vec<(usize, f64)>,
}

impl DecompositionStats {
    pub fn diameter_pass(&self) -> bool {
        self.diameter_violations == 0
    }

    pub fn cover_pass(&self) -> bool {
        self.cover_violations == 0
    }

    pub fn separation_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn mean_zp_pass(&self) -> bool {
        self.paths.iter().all(|p| p.mean_pass)
    }

    pub fn decay_pass(&self) -> bool {
        self.paths.iter().all(|p| p.decay_pass)
    }

    pub fn all_pass(&self) -> bool {
        self.diameter_pass()
            && self.cover_pass()
            && self.separation_pass()
            && self.mean_zp_pass()
            && self.decay_pass()
    }
}

#[derive(Clone)]
struct Tally {
    diameter_violations: u64,
    max_diameter: f64,
    cover_violations: u64,
    separations: Vec<u64>,
    zp_sum: Vec<u64>,
    zp_sq_sum: Vec<u64>,
    /// `zp_exceed[p][t-1]` counts trials with `Z_P > t`.
    zp_exceed: Vec<[u64; TAIL_MAX]>,
}

impl Tally {
    fn new(pairs: usize, paths: usize) -> Self {
        Tally {
            diameter_violations: 0,
            max_diameter: 0.0,
            cover_violations: 0,
            separations: vec![0; pairs],
            zp_sum: vec![0; paths],
            zp_sq_sum: vec![0; paths],
            zp_exceed: vec![[0; TAIL_MAX]; paths],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.diameter_violations += other.diameter_violations;
        self.max_diameter = self.max_diameter.max(other.max_diameter);
        self.cover_violations += other.cover_violations;
        for (a, b) in self.separations.iter_mut().zip(other.separations) {
            *a += b;
        }
        for (a, b) in self.zp_sum.iter_mut().zip(other.zp_sum) {
            *a += b;
        }
        for (a, b) in self.zp_sq_sum.iter_mut().zip(other.zp_sq_sum) {
            *a += b;
        }
        for (a, b) in self.zp_exceed.iter_mut().zip(other.zp_exceed) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self
    }
}

fn cell_diameter(cell: &[Vertex], apsp: &[Vec<f64>]) -> f64 {
    let mut diam = 0.0f64;
    for (i, &u) in cell.iter().enumerate() {
        for &v in &cell[i + 1..] {
            diam = diam.max(apsp[u][v]);
        }
    }
    diam
}

/// Least-squares slope of `ln f` against `t`.
fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let m = points.len() as f64;
    let (st, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(t, f)| (a + t, b + f.ln()));
    let (mt, my) = (st / m, sy / m);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(t, f)| {
        (a + (t - mt) * (f.ln() - my), b + (t - mt) * (t - mt))
    });
    Some(num / den)
}

/// Tail check for `tail[t - 1] = Pr[Z_P > t]`. The tail must be
/// nonincreasing. Frequencies of exactly 1 are excluded from the fit: there
/// the path is long enough that every carving meets more than `t` cells, so
/// they carry no information about the decay rate. Frequencies at or below
/// `floor` are excluded as noise. With two or more remaining points the
/// fitted log-slope must be negative; otherwise the tail must fall to the
/// floor within the tested range.
fn tail_decay(tail: &[f64], floor: f64) -> (Option<f64>, bool) {
    let monotone = tail.windows(2).all(|x| x[1] <= x[0]);
    let fit: Vec<(f64, f64)> = tail
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f > floor && f < 1.0)
        .map(|(i, &f)| ((i + 1) as f64, f))
        .collect();
    let slope = log_slope(&fit);
    let decays = match slope {
        Some(s) => s < 0.0,
        None => tail.iter().any(|&f| f <= floor),
    };
    (slope, monotone && decays)
}

/// Carves `trials` times and measures every decomposition requirement:
/// cluster diameter `≤ 2Δ`, terminal cover, per-pair separation frequency
/// against `β d / Δ`, per-path mean `Z_P` against `1 + β d(P) / Δ`, and the
/// decay of `Pr[Z_P > t]`. Tested pairs are all terminal pairs followed by
/// [`RANDOM_PAIRS`] uniform vertex pairs; tested paths are the witnessed
/// shortest paths between terminal pairs. Trial `i` draws from the stream
/// `derive_seed(seed, i, 0)`.
pub fn verify_decomposition(
    g: &WeightedGraph,
    delta: f64,
    trials: u64,
    seed: u64,
) -> Result<DecompositionStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let k = g.k();
    let params = TruncExpParams::for_terminals(k, delta)?;
    let beta = if k >= 2 { 4.0 * (k as f64).log2() } else { 0.0 };
    let apsp = all_pairs(g);
    let carver = Carver::new(g);

    let terms = g.terminals();
    let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
    let mut paths: Vec<(usize, usize, PathWitness)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            pairs.push((terms[i], terms[j]));
            if apsp[terms[i]][terms[j]] != UNREACHABLE {
                paths.push((i, j, shortest_path_witness(g, terms[i], terms[j])?));
            }
        }
    }
    let mut pick = seeded(derive_seed(seed, SAMPLE_STREAM, 0));
    for _ in 0..RANDOM_PAIRS {
        let x = (pick.next_unit() * g.n() as f64) as usize;
        let y = (pick.next_unit() * g.n() as f64) as usize;
        pairs.push((x.min(g.n() - 1), y.min(g.n() - 1)));
    }

    let tally = (0..trials)
        .into_par_iter()
        .fold(
            || (Tally::new(pairs.len(), paths.len()), Vec::new()),
            |(mut tally, mut scratch), trial| {
                let mut rng = seeded(derive_seed(seed, trial, 0));
                let carving = carver.carve(delta, &mut rng).expect("parameters validated");
                let owner = carving.partition.owners(g.n());
                for cell in carving.partition.nonempty_cells() {
                    let d = cell_diameter(cell, &apsp);
                    tally.max_diameter = tally.max_diameter.max(d);
                    if d > 2.0 * delta {
                        tally.diameter_violations += 1;
                    }
                }
                if terms.iter().any(|&t| owner[t].is_none()) {
                    tally.cover_violations += 1;
                }
                for (c, &(x, y)) in tally.separations.iter_mut().zip(&pairs) {
                    *c += u64::from(separated(&owner, x, y));
                }
                for (p, (_, _, w)) in paths.iter().enumerate() {
                    let z = zp_from_owners(&owner, &w.vertices, &mut scratch) as u64;
                    tally.zp_sum[p] += z;
                    tally.zp_sq_sum[p] += z * z;
                    for t in 1..=TAIL_MAX {
                        if z > t as u64 {
                            tally.zp_exceed[p][t - 1] += 1;
                        }
                    }
                }
                (tally, scratch)
            },
        )
        .map(|(t, _)| t)
        .reduce(|| Tally::new(pairs.len(), paths.len()), Tally::merge);

    let n_trials = trials as f64;
    let pair_stats = pairs
        .iter()
        .zip(&tally.separations)
        .map(|(&(x, y), &count)| {
            let distance = apsp[x][y];
            let frequency = count as f64 / n_trials;
            let std_error = (frequency * (1.0 - frequency) / n_trials).sqrt();
            let bound = beta * distance / delta;
            PairStat {
                x,
                y,
                distance,
                separations: count,
                frequency,
                std_error,
                bound,
                pass: frequency <= bound + 3.0 * std_error,
            }
        })
        .collect();

    let floor = 10.0 / n_trials;
    let path_stats: Vec<PathStat> = paths
        .iter()
        .enumerate()
        .map(|(p, (from, to, w))| {
            let mean = tally.zp_sum[p] as f64 / n_trials;
            let var = (tally.zp_sq_sum[p] as f64 / n_trials - mean * mean).max(0.0);
            let var = if trials > 1 {
                var * n_trials / (n_trials - 1.0)
            } else {
                0.0
            };
            let std_error = (var / n_trials).sqrt();
            let mean_bound = 1.0 + beta * w.length / delta;
            let tail: Vec<f64> = tally.zp_exceed[p]
                .iter()
                .map(|&c| c as f64 / n_trials)
                .collect();
            let (decay_slope, decay_pass) = tail_decay(&tail, floor);
            PathStat {
                from: *from,
                to: *to,
                length: w.length,
                vertex_count: w.vertices.len(),
                mean_zp: mean,
                zp_std_error: std_error,
                mean_bound,
                mean_pass: mean <= mean_bound + 3.0 * std_error,
                tail,
                decay_slope,
                decay_pass,
            }
        })
        .collect();

    let zp_histogram = (1..=TAIL_MAX)
        .map(|t| {
            let f = if path_stats.is_empty() {
                0.0
            } else {
                path_stats.iter().map(|p| p.tail[t - 1]).sum::<f64>() / path_stats.len() as f64
            };
            (t, f)
        })
        .collect();

    Ok(DecompositionStats {
        trials,
        delta,
        lambda: params.lambda(),
        beta,
        diameter_violations: tally.diameter_violations,
        max_cell_diameter: tally.max_diameter,
        cover_violations: tally.cover_violations,
        pairs: pair_stats,
        paths: path_stats,
        zp_histogram,
    })
}
