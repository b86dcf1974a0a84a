//! Arbitrary aspect ratio: recursive reduction to the bounded case.
//!
//! After rescaling so the closest terminals are at distance 1, a graph whose
//! aspect ratio exceeds the threshold is reduced as follows. Terminal
//! distances are rounded down to powers of two and a window of `k + 1`
//! unused exponents `m₀..=m₀+k` is located. Terminals closer than `2^{m₀}`
//! form equivalence classes; each class gets the ball `Û` of radius `2^{m₀}`
//! around its lowest-index terminal. Ball growing partitions every `G[Û]`,
//! each ball is contracted into a super-terminal, the contracted graph is
//! solved recursively, and the two results are stitched together.
//!
//! Stitching assigns a vertex outside every ball to a terminal of the class
//! whose super-terminal received it. The label is taken from a
//! shortest-path forest grown inside that super-terminal's cell, seeded at
//! the ball's vertices with their distance to their own terminal, so every
//! final cell stays connected.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    ball, metric_aspect_ratio, search, terminal_metric, DistanceMatrix, Vertex, WeightedGraph,
    UNREACHABLE,
};
use crate::minor::{labelled_forest, PartialPartition};
use crate::rng::{derive_seed, CLASS_STREAM, RECURSION_STREAM};
use crate::spr::{cubic_threshold, rescale_to_unit_min, run_partition, SprOptions};

/// Window of empty power-of-two exponents separating the terminal distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub m0: i32,
    pub occupied: Vec<i32>,
}

impl GapCertificate {
    pub fn window(&self, k: usize) -> std::ops::RangeInclusive<i32> {
        self.m0..=self.m0 + k as i32
    }
}

/// `⌊log₂ x⌋` for positive normal `x`, read off the exponent bits.
fn floor_log2(x: f64) -> i32 {
    debug_assert!(x.is_normal() && x > 0.0);
    ((x.to_bits() >> 52) & 0x7ff) as i32 - 1023
}

fn normalized_pairs(metric: &DistanceMatrix) -> Vec<(usize, usize, f64)> {
    let min = metric
        .pairs()
        .map(|(_, _, d)| d)
        .fold(f64::INFINITY, f64::min);
    metric.pairs().map(|(i, j, d)| (i, j, d / min)).collect()
}

/// Exponents `⌊log₂ d⌋` of the off-diagonal terminal distances, sorted and
/// deduplicated. Distances are first divided by the smallest one, so the
/// lowest exponent is always 0.
pub fn rounded_distance_powers(metric: &DistanceMatrix) -> Vec<i32> {
    let mut powers: Vec<i32> = normalized_pairs(metric)
        .into_iter()
        .filter(|(_, _, d)| d.is_finite())
        .map(|(_, _, d)| floor_log2(d))
        .collect();
    powers.sort_unstable();
    powers.dedup();
    powers
}

/// Smallest `m₀ ≥ 0` such that `m₀..=m₀+k` holds no occupied exponent while
/// some exponent lies below `m₀` and some above `m₀+k`.
pub fn find_gap(powers: &[i32], k: usize) -> Result<GapCertificate> {
    let mut occupied = powers.to_vec();
    occupied.sort_unstable();
    occupied.dedup();
    let need = k as i64 + 2;
    for pair in occupied.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let m0 = (lo + 1).max(0);
        if m0 > lo && i64::from(hi) - i64::from(m0) >= need - 1 {
            return Ok(GapCertificate { m0, occupied });
        }
    }
    Err(Error::NoGap { window: k + 1 })
}

/// Classes of the relation `d(x, y) < 2^{m₀}`, as sorted lists of terminal
/// indices ordered by their smallest member. Verifies that the relation is
/// transitive: intra-class distances stay below `2^{m₀}` and inter-class
/// distances reach `2^{m₀+k+1}`.
pub fn equivalence_classes(metric: &DistanceMatrix, m0: i32) -> Result<Vec<Vec<usize>>> {
    let k = metric.k();
    let near = 2f64.powi(m0);
    let far = 2f64.powi(m0 + k as i32 + 1);
    let pairs = normalized_pairs(metric);

    // union-find over the threshold graph
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j, d) in &pairs {
        if d < near {
            let (a, b) = (root(&mut parent, i), root(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let class_of: Vec<usize> = (0..k).map(|x| root(&mut parent, x)).collect();
    for &(i, j, d) in &pairs {
        if class_of[i] == class_of[j] && d >= near {
            return Err(Error::Invariant(format!(
                "terminals {i} and {j} share a class but are {d} apart (limit {near})"
            )));
        }
        if class_of[i] != class_of[j] && d < far {
            return Err(Error::Invariant(format!(
                "terminals {i} and {j} are in different classes but only {d} apart (need {far})"
            )));
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; k];
    for x in 0..k {
        let r = class_of[x];
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(x);
    }
    Ok(classes)
}

/// Threshold on the aspect ratio above which the reduction is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Fixed(f64),
    /// `2^{k³}` for the current terminal count (infinite once out of range).
    Cubic,
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::Fixed(2f64.powi(48))
    }
}

impl Threshold {
    pub fn value(&self, k: usize) -> f64 {
        match *self {
            Threshold::Fixed(t) => t,
            Threshold::Cubic => cubic_threshold(k),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GeneralOptions {
    pub threshold: Threshold,
    /// Options forwarded to every ball-growing call.
    pub spr: SprOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelAction {
    /// Aspect ratio within threshold; ball growing on the whole level.
    Direct,
    /// Above threshold but no separating gap; ball growing on the whole level.
    Fallback,
    /// Balls contracted and the level recursed.
    Reduced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallReport {
    /// Original terminal indices in the class.
    pub terminals: Vec<usize>,
    pub size: usize,
    pub diameter: f64,
}

/// One recursion level. Distances are in this level's rescaled units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub depth: usize,
    pub n: usize,
    pub k: usize,
    pub aspect_ratio: Option<f64>,
    pub threshold: f64,
    /// Product of the rescaling factors down to this level.
    pub cumulative_scale: f64,
    pub action: LevelAction,
    pub m0: Option<i32>,
    pub balls: Vec<BallReport>,
    /// `2^{m₀+1}`
    pub diameter_bound: Option<f64>,
    /// Balls disjoint, connected, covering their class and within the
    /// diameter bound.
    pub balls_valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralOutcome {
    pub partition: PartialPartition,
    pub levels: Vec<LevelReport>,
    pub algorithm1_calls: usize,
    pub outer_iterations: u64,
}

impl GeneralOutcome {
    pub fn recursion_depth(&self) -> usize {
        self.levels
            .iter()
            .filter(|l| l.action == LevelAction::Reduced)
            .count()
    }
}

pub fn spr_general(g: &WeightedGraph, seed: u64, opts: &GeneralOptions) -> Result<GeneralOutcome> {
    let origin: Vec<Vec<usize>> = (0..g.k()).map(|j| vec![j]).collect();
    let mut ctx = Context {
        opts,
        k_root: g.k(),
        levels: Vec::new(),
        calls: 0,
        outer: 0,
    };
    let partition = ctx.solve(g, &origin, 0, 1.0, seed)?;
    Ok(GeneralOutcome {
        partition,
        levels: ctx.levels,
        algorithm1_calls: ctx.calls,
        outer_iterations: ctx.outer,
    })
}

struct Context<'a> {
    opts: &'a GeneralOptions,
    k_root: usize,
    levels: Vec<LevelReport>,
    calls: usize,
    outer: u64,
}

/// A class ball `Û` and its ball-growing partition, in level vertex ids.
struct ClassBall {
    vertices: Vec<Vertex>,
    /// Level terminal index owning each vertex of `vertices`.
    labels: Vec<usize>,
}

impl Context<'_> {
    fn algorithm1(&mut self, g: &WeightedGraph, seed: u64) -> Result<PartialPartition> {
        let out = run_partition(g, seed, &self.opts.spr)?;
        self.calls += 1;
        self.outer += out.outer_iterations;
        Ok(out.partition)
    }

    fn solve(
        &mut self,
        g: &WeightedGraph,
        origin: &[Vec<usize>],
        depth: usize,
        scale: f64,
        seed: u64,
    ) -> Result<PartialPartition> {
        if depth > self.k_root {
            return Err(Error::RecursionDepth {
                depth,
                k: self.k_root,
            });
        }
        let k = g.k();
        let threshold = self.opts.threshold.value(k);
        let mut level = LevelReport {
            depth,
            n: g.n(),
            k,
            aspect_ratio: None,
            threshold,
            cumulative_scale: scale,
            action: LevelAction::Direct,
            m0: None,
            balls: Vec::new(),
            diameter_bound: None,
            balls_valid: true,
        };
        if k < 2 {
            self.levels.push(level);
            return self.algorithm1(g, seed);
        }
        let (h, factor) = rescale_to_unit_min(g)?;
        let scale = scale / factor;
        level.cumulative_scale = scale;
        let metric = terminal_metric(&h);
        let aspect = metric_aspect_ratio(&metric)?;
        level.aspect_ratio = Some(aspect);
        if aspect <= threshold {
            self.levels.push(level);
            return self.algorithm1(&h, seed);
        }
        let gap = match find_gap(&rounded_distance_powers(&metric), k) {
            Ok(gap) => gap,
            Err(Error::NoGap { .. }) => {
                level.action = LevelAction::Fallback;
                self.levels.push(level);
                return self.algorithm1(&h, seed);
            }
            Err(e) => return Err(e),
        };
        let classes = equivalence_classes(&metric, gap.m0)?;
        let radius = 2f64.powi(gap.m0);
        let bound = 2.0 * radius;
        level.action = LevelAction::Reduced;
        level.m0 = Some(gap.m0);
        level.diameter_bound = Some(bound);

        let terms = h.terminals();
        let mut ball_owner: Vec<Option<usize>> = vec![None; h.n()];
        let mut balls_vertices = Vec::with_capacity(classes.len());
        for (c, class) in classes.iter().enumerate() {
            let vertices = ball(&h, terms[class[0]], radius, |_| true)?;
            for &v in &vertices {
                if ball_owner[v].is_some() {
                    level.balls_valid = false;
                }
                ball_owner[v] = Some(c);
            }
            if class
                .iter()
                .any(|&x| vertices.binary_search(&terms[x]).is_err())
            {
                level.balls_valid = false;
            }
            let diameter = vertices
                .iter()
                .map(|&v| {
                    let d = search(&h, v, |_| true, UNREACHABLE).dist;
                    vertices.iter().map(|&u| d[u]).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diameter > bound {
                level.balls_valid = false;
            }
            level.balls.push(BallReport {
                terminals: class
                    .iter()
                    .flat_map(|&x| origin[x].iter().copied())
                    .collect(),
                size: vertices.len(),
                diameter,
            });
            balls_vertices.push(vertices);
        }
        if !level.balls_valid {
            let report = format!("ball checks failed at depth {depth}: {:?}", level.balls);
            self.levels.push(level);
            return Err(Error::Invariant(report));
        }
        self.levels.push(level);

        // Ball growing inside each ball, independently.
        let spr_opts = &self.opts.spr;
        let inner: Vec<Result<(ClassBall, u64, usize)>> = classes
            .par_iter()
            .zip(balls_vertices.par_iter())
            .enumerate()
            .map(|(c, (class, vertices))| {
                let class_terms: Vec<Vertex> = class.iter().map(|&x| terms[x]).collect();
                let (sub, map) = h.induced(vertices, &class_terms)?;
                let (sub, calls, outer, local) = if class.len() == 1 {
                    // one terminal absorbs the whole ball
                    (sub, 0, 0, vec![0; map.len()])
                } else {
                    let (sub, _) = rescale_to_unit_min(&sub)?;
                    let out =
                        run_partition(&sub, derive_seed(seed, CLASS_STREAM, c as u64), spr_opts)?;
                    let owners = out.partition.owners(sub.n());
                    let local = owners
                        .into_iter()
                        .map(|o| o.expect("complete partition"))
                        .collect();
                    (sub, 1, out.outer_iterations, local)
                };
                debug_assert_eq!(sub.n(), map.len());
                let labels = local.into_iter().map(|l| class[l]).collect();
                Ok((
                    ClassBall {
                        vertices: map,
                        labels,
                    },
                    outer,
                    calls,
                ))
            })
            .collect();
        let mut balls = Vec::with_capacity(inner.len());
        for r in inner {
            let (b, outer, calls) = r?;
            self.outer += outer;
            self.calls += calls;
            balls.push(b);
        }

        // Contract every ball into a super-terminal.
        let (contracted, to_contracted) = contract_balls(&h, &ball_owner, classes.len())?;
        let next_origin: Vec<Vec<usize>> = classes
            .iter()
            .map(|class| {
                class
                    .iter()
                    .flat_map(|&x| origin[x].iter().copied())
                    .collect()
            })
            .collect();
        let coarse = self.solve(
            &contracted,
            &next_origin,
            depth + 1,
            scale,
            derive_seed(seed, RECURSION_STREAM, depth as u64),
        )?;
        let coarse_owner = coarse.owners(contracted.n());

        // Stitch.
        let mut owner: Vec<Option<usize>> = vec![None; h.n()];
        for b in &balls {
            for (&v, &l) in b.vertices.iter().zip(&b.labels) {
                owner[v] = Some(l);
            }
        }
        let super_of = |v: Vertex| coarse_owner[to_contracted[v]];
        for (c, b) in balls.iter().enumerate() {
            let mut seeds = Vec::with_capacity(b.vertices.len());
            let dists: Vec<(usize, Vec<f64>)> = classes[c]
                .iter()
                .map(|&x| (x, search(&h, terms[x], |_| true, UNREACHABLE).dist))
                .collect();
            for (&v, &l) in b.vertices.iter().zip(&b.labels) {
                let d = dists
                    .iter()
                    .find(|(x, _)| *x == l)
                    .map(|(_, d)| d[v])
                    .unwrap_or(UNREACHABLE);
                seeds.push((v, d, l));
            }
            let labels = labelled_forest(&h, &seeds, |v| {
                ball_owner[v].is_none() && super_of(v) == Some(c)
            });
            for (v, l) in labels.into_iter().enumerate() {
                if ball_owner[v].is_none() && super_of(v) == Some(c) {
                    owner[v] = l;
                }
            }
        }
        if let Some(v) = owner.iter().position(Option::is_none) {
            return Err(Error::Invariant(format!(
                "stitching left vertex {v} unassigned at depth {depth}"
            )));
        }
        Ok(PartialPartition::from_owners(k, &owner))
    }
}

/// Contracts each ball (given by `ball_owner`) into one vertex. Super-terminal
/// `c` becomes vertex `c`; the remaining vertices follow in increasing id
/// order. Edges keep their weights and parallel edges keep the minimum.
/// Returns the contracted graph, with the super-terminals as terminals, and
/// the map from original to contracted ids.
pub fn contract_balls(
    g: &WeightedGraph,
    ball_owner: &[Option<usize>],
    classes: usize,
) -> Result<(WeightedGraph, Vec<Vertex>)> {
    let mut map = vec![0; g.n()];
    let mut next = classes;
    for v in 0..g.n() {
        map[v] = match ball_owner[v] {
            Some(c) => c,
            None => {
                next += 1;
                next - 1
            }
        };
    }
    let mut best: std::collections::BTreeMap<(Vertex, Vertex), f64> =
        std::collections::BTreeMap::new();
    for (u, v, w) in g.edges() {
        let (a, b) = (map[u], map[v]);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        best.entry(key).and_modify(|x| *x = x.min(w)).or_insert(w);
    }
    let edges: Vec<_> = best.into_iter().map(|((a, b), w)| (a, b, w)).collect();
    Ok((
        WeightedGraph::new(next, &edges, (0..classes).collect())?,
        map,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minor::validate_partition;

    fn metric(rows: Vec<Vec<f64>>) -> DistanceMatrix {
        DistanceMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn exponent_sets() {
        let m = metric(vec![
            vec![0.0, 3.0, 3.0],
            vec![3.0, 0.0, 3.0],
            vec![3.0, 3.0, 0.0],
        ]);
        // normalized by the minimum, 3/3 = 1, so the only exponent is 0
        assert_eq!(rounded_distance_powers(&m), vec![0]);
        let m = metric(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1024.0],
            vec![2.0, 1024.0, 0.0],
        ]);
        assert_eq!(rounded_distance_powers(&m), vec![0, 1, 10]);
        assert_eq!(
            rounded_distance_powers(&metric(vec![vec![0.0, 1.0], vec![1.0, 0.0]])),
            vec![0]
        );
        assert_eq!(floor_log2(3.0), 1);
        assert_eq!(floor_log2(2f64.powi(60)), 60);
        assert_eq!(floor_log2(1.0f64.next_down() * 4.0), 1);
    }

    /// Exhaustive scan: smallest m0 whose k+1 window is empty and separating.
    fn gap_oracle(powers: &[i32], k: usize) -> Option<i32> {
        let max = *powers.iter().max()?;
        (0..=max).find(|&m0| {
            let window_empty = (m0..=m0 + k as i32).all(|e| !powers.contains(&e));
            let below = powers.iter().any(|&p| p < m0);
            let above = powers.iter().any(|&p| p > m0 + k as i32);
            window_empty && below && above
        })
    }

    #[test]
    fn gaps() {
        assert_eq!(gap_oracle(&[0, 50], 3), Some(1));
        assert_eq!(find_gap(&[0, 50], 3).unwrap().m0, 1);
        assert_eq!(gap_oracle(&[0, 6], 4), Some(1));
        assert_eq!(find_gap(&[0, 6], 4).unwrap().m0, 1);
        let contiguous: Vec<i32> = (0..=10).collect();
        assert!(matches!(
            find_gap(&contiguous, 3),
            Err(Error::NoGap { window: 4 })
        ));
        assert!(find_gap(&[0, 5], 4).is_err());
        assert!(find_gap(&[0], 2).is_err());
    }

    proptest::proptest! {
        #[test]
        fn gap_scan_matches_exhaustive_oracle(
            powers in proptest::collection::btree_set(0i32..64, 1..8),
            k in 1usize..8,
        ) {
            let powers: Vec<i32> = powers.into_iter().collect();
            let found = find_gap(&powers, k).ok().map(|g| g.m0);
            proptest::prop_assert_eq!(found, gap_oracle(&powers, k));
        }
    }

    #[test]
    fn classes_from_thresholds() {
        // two clusters of two, internal distance 1, cross 2^50, k = 4
        let big = 2f64.powi(50);
        let m = metric(vec![
            vec![0.0, 1.0, big, big],
            vec![1.0, 0.0, big, big],
            vec![big, big, 0.0, 1.0],
            vec![big, big, 1.0, 0.0],
        ]);
        let gap = find_gap(&rounded_distance_powers(&m), 4).unwrap();
        assert_eq!(
            equivalence_classes(&m, gap.m0).unwrap(),
            vec![vec![0, 1], vec![2, 3]]
        );

        let spread = metric(vec![
            vec![0.0, 1.0, 64.0],
            vec![1.0, 0.0, 64.0],
            vec![64.0, 64.0, 0.0],
        ]);
        let gap = find_gap(&rounded_distance_powers(&spread), 3).unwrap();
        assert_eq!(gap.m0, 1);
        assert_eq!(
            equivalence_classes(&spread, 1).unwrap(),
            vec![vec![0, 1], vec![2]]
        );
        assert!(equivalence_classes(&spread, 0).is_err());
        let tight = metric(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(equivalence_classes(&tight, 3).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn classes_reject_a_bad_window() {
        // 1 < 2 but 1.5 + ... : x-y 1, y-z 1, x-z 3 with m0 = 1 breaks the far bound
        let m = metric(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 3.0],
            vec![3.0, 3.0, 0.0],
        ]);
        assert!(matches!(
            equivalence_classes(&m, 1),
            Err(Error::Invariant(_))
        ));
    }

    fn barbell(bridge: f64) -> WeightedGraph {
        let mut edges = vec![
            (0, 1, 1.0),
            (1, 2, 1.0),
            (0, 2, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (3, 5, 1.0),
        ];
        edges.push((2, 6, bridge / 2.0));
        edges.push((6, 3, bridge / 2.0));
        WeightedGraph::new(7, &edges, vec![0, 1, 2, 3, 4, 5]).unwrap()
    }

    #[test]
    fn barbell_recurses_once() {
        let g = barbell(2f64.powi(60));
        let opts = GeneralOptions {
            threshold: Threshold::Fixed(2f64.powi(20)),
            ..GeneralOptions::default()
        };
        let out = spr_general(&g, 9, &opts).unwrap();
        assert_eq!(out.recursion_depth(), 1);
        assert_eq!(out.levels[0].balls.len(), 2);
        assert_eq!(out.levels[0].balls[0].terminals, vec![0, 1, 2]);
        assert_eq!(out.levels[1].k, 2);
        assert_eq!(out.levels[1].n, 3);
        assert_eq!(validate_partition(&g, &out.partition, true), Ok(()));
    }

    #[test]
    fn below_threshold_delegates_to_algorithm_one() {
        let g = barbell(4.0);
        let out = spr_general(&g, 3, &GeneralOptions::default()).unwrap();
        assert_eq!(out.levels.len(), 1);
        assert_eq!(out.levels[0].action, LevelAction::Direct);
        let (h, _) = rescale_to_unit_min(&g).unwrap();
        let direct = run_partition(&h, 3, &SprOptions::default()).unwrap();
        assert_eq!(out.partition, direct.partition);
    }

    #[test]
    fn no_gap_falls_back() {
        // distances 1, 2, 4, ..., 2^9 along a path: every exponent is occupied
        let mut edges = Vec::new();
        let mut w = 1.0;
        for i in 0..10 {
            edges.push((i, i + 1, w));
            w *= 2.0;
        }
        let g = WeightedGraph::new(11, &edges, (0..11).collect()).unwrap();
        let opts = GeneralOptions {
            threshold: Threshold::Fixed(4.0),
            ..GeneralOptions::default()
        };
        let out = spr_general(&g, 1, &opts).unwrap();
        assert_eq!(out.levels[0].action, LevelAction::Fallback);
        assert_eq!(validate_partition(&g, &out.partition, true), Ok(()));
    }

    #[test]
    fn contraction_keeps_min_parallel_weight() {
        let g = WeightedGraph::new(
            4,
            &[(0, 1, 1.0), (0, 2, 5.0), (1, 2, 3.0), (2, 3, 1.0)],
            vec![0, 3],
        )
        .unwrap();
        let owner = vec![Some(0), Some(0), None, Some(1)];
        let (c, map) = contract_balls(&g, &owner, 2).unwrap();
        assert_eq!(map, vec![0, 0, 2, 1]);
        assert_eq!(c.weight(0, 2), Some(3.0));
        assert_eq!(c.weight(2, 1), Some(1.0));
        assert_eq!(c.terminals(), &[0, 1]);
    }
}
