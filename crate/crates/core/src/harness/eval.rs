//! Distortion measurement, trial amplification and the nearest-terminal
//! baseline comparison.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::general::{spr_general, GeneralOptions, LevelReport};
use crate::graph::{terminal_metric, WeightedGraph, UNREACHABLE};
use crate::minor::{
    contract, minor_distances, nearest_terminal_partition, validate_partition, PartialPartition,
    TerminalMinor,
};
use crate::rng::derive_seed;
use crate::spr::{rescale_to_unit_min, run_partition, SprOptions, TraceStep};

/// Slack for floating summation order when checking `stretch >= 1`.
pub const STRETCH_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stretch {
    /// `d_{G'}(t_i, t_j) / d_G(t_i, t_j)`; `None` on the diagonal and for
    /// pairs that are disconnected in `G`.
    pub matrix: Vec<Vec<Option<f64>>>,
    pub max: f64,
}

impl Stretch {
    pub fn min(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn dominates(&self) -> bool {
        self.matrix
            .iter()
            .flatten()
            .flatten()
            .all(|&s| s >= 1.0 - STRETCH_EPS)
    }
}

/// Entrywise ratio of minor distances to graph distances.
pub fn distortion(g: &WeightedGraph, m: &TerminalMinor) -> Result<Stretch> {
    if m.k() != g.k() {
        return Err(Error::InvalidArgument(
            "minor and graph have different terminal counts".into(),
        ));
    }
    let base = terminal_metric(g);
    let minor = minor_distances(m);
    let k = g.k();
    let mut matrix = vec![vec![None; k]; k];
    let mut max = 1.0f64;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let d = base.get(i, j);
            if d == UNREACHABLE {
                continue;
            }
            if d <= 0.0 {
                return Err(Error::Invariant(format!(
                    "terminals {i} and {j} are at distance {d}"
                )));
            }
            let s = minor.get(i, j) / d;
            max = max.max(s);
            matrix[i][j] = Some(s);
        }
    }
    Ok(Stretch { matrix, max })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Ball growing on the graph rescaled to unit minimum terminal distance.
    Alg1,
    /// The recursive algorithm for arbitrary aspect ratio.
    General,
    /// Nearest-terminal partition.
    Baseline,
}

impl Algorithm {
    pub fn is_randomized(&self) -> bool {
        !matches!(self, Algorithm::Baseline)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub general: GeneralOptions,
    /// Record wall-clock time. Off by default so reports are reproducible
    /// byte for byte.
    pub timing: bool,
}

impl RunConfig {
    pub fn spr(&self) -> &SprOptions {
        &self.general.spr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    /// Seed of this trial; `None` for the deterministic baseline.
    pub seed: Option<u64>,
    pub algorithm: Algorithm,
    pub valid_partition: bool,
    pub stretch: Vec<Vec<Option<f64>>>,
    pub max_stretch: f64,
    pub min_stretch: f64,
    pub outer_iterations: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<LevelReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

/// Runs one trial and evaluates the minor it induces, in original units.
pub fn run_trial(
    g: &WeightedGraph,
    algorithm: Algorithm,
    seed: u64,
    cfg: &RunConfig,
) -> Result<(TrialReport, PartialPartition)> {
    let start = Instant::now();
    let mut levels = Vec::new();
    let mut trace = Vec::new();
    let (partition, outer) = match algorithm {
        Algorithm::Baseline => (nearest_terminal_partition(g), 0),
        Algorithm::Alg1 => {
            let out = if g.k() >= 2 {
                run_partition(&rescale_to_unit_min(g)?.0, seed, cfg.spr())?
            } else {
                run_partition(g, seed, cfg.spr())?
            };
            trace = out.trace;
            (out.partition, out.outer_iterations)
        }
        Algorithm::General => {
            let out = spr_general(g, seed, &cfg.general)?;
            levels = out.levels;
            (out.partition, out.outer_iterations)
        }
    };
    let valid = validate_partition(g, &partition, true).is_ok();
    let minor = contract(g, &partition)?;
    let stretch = distortion(g, &minor)?;
    let report = TrialReport {
        seed: algorithm.is_randomized().then_some(seed),
        algorithm,
        valid_partition: valid,
        min_stretch: stretch.min(),
        max_stretch: stretch.max,
        stretch: stretch.matrix,
        outer_iterations: outer,
        levels,
        trace,
        wall_time_ms: cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok((report, partition))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub index: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplifiedResult {
    pub trials: Vec<TrialReport>,
    pub failures: Vec<TrialFailure>,
    /// Index into `trials`.
    pub best_index: usize,
    pub best_max_stretch: f64,
    #[serde(skip)]
    pub best_partition: Option<PartialPartition>,
}

impl AmplifiedResult {
    pub fn best(&self) -> &TrialReport {
        &self.trials[self.best_index]
    }

    pub fn median_max_stretch(&self) -> f64 {
        median(self.trials.iter().map(|t| t.max_stretch).collect())
    }
}

pub fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty(), "median of an empty sample");
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Runs `trials` independent trials (trial `i` uses
/// `derive_seed(seed, i, 0)`) and keeps the one with the smallest maximum
/// stretch; ties go to the earliest trial. Failed trials are recorded and
/// skipped.
pub fn amplify(
    g: &WeightedGraph,
    algorithm: Algorithm,
    trials: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<AmplifiedResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    type Outcome = (usize, u64, Result<(TrialReport, PartialPartition)>);
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i as u64, 0);
            (i, s, run_trial(g, algorithm, s, cfg))
        })
        .collect();
    let mut reports = Vec::new();
    let mut partitions = Vec::new();
    let mut failures = Vec::new();
    for (index, s, r) in outcomes {
        match r {
            Ok((rep, p)) => {
                reports.push(rep);
                partitions.push(p);
            }
            Err(e) => failures.push(TrialFailure {
                index,
                seed: s,
                error: e.to_string(),
            }),
        }
    }
    if reports.is_empty() {
        return Err(Error::AllTrialsFailed(trials));
    }
    let best_index = reports.iter().enumerate().fold(0, |best, (i, r)| {
        if r.max_stretch < reports[best].max_stretch {
            i
        } else {
            best
        }
    });
    Ok(AmplifiedResult {
        best_max_stretch: reports[best_index].max_stretch,
        best_partition: partitions.into_iter().nth(best_index),
        trials: reports,
        failures,
        best_index,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub baseline: TrialReport,
    pub amplified: AmplifiedResult,
    /// Best amplified maximum stretch over the baseline's maximum stretch.
    pub ratio: f64,
}

/// Nearest-terminal baseline next to the amplified general algorithm.
pub fn compare_baseline(
    g: &WeightedGraph,
    trials: usize,
    seed: u64,
    cfg: &RunConfig,
) -> Result<Comparison> {
    let (baseline, _) = run_trial(g, Algorithm::Baseline, seed, cfg)?;
    let amplified = amplify(g, Algorithm::General, trials, seed, cfg)?;
    Ok(Comparison {
        ratio: amplified.best_max_stretch / baseline.max_stretch,
        baseline,
        amplified,
    })
}
