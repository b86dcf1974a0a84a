mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{
    brute_distances, brute_minor_distances, brute_stretch, floyd, for_each_simple_path,
    random_connected, rng,
};
use terminal_minors::decomp::{carve, degree_of_separation};
use terminal_minors::general::{
    contract_balls, equivalence_classes, find_gap, rounded_distance_powers, spr_general,
    GeneralOptions,
};
use terminal_minors::graph::{ball, shortest_distances, shortest_path_witness, terminal_metric};
use terminal_minors::harness::{
    amplify, distortion, generate, run_trial, Algorithm, Family, RunConfig, TrialReport,
    STRETCH_EPS,
};
use terminal_minors::minor::{
    contract, minor_distances, nearest_terminal_partition, validate_partition,
};
use terminal_minors::rng::seeded;
use terminal_minors::spr::{rescale_to_unit_min, run_partition, SprOptions};
use terminal_minors::WeightedGraph;

#[test]
fn restricted_distances_and_balls_match_enumeration() {
    let mut r = rng(11);
    for _ in 0..150 {
        let n = r.gen_range(2..=9);
        let g = {
            let integer = r.gen_bool(0.5);
            random_connected(&mut r, n, 2, integer)
        };
        let mask: Vec<bool> = (0..n).map(|_| r.gen_bool(0.7)).collect();
        let source = r.gen_range(0..n);
        let allowed = |v: usize| v == source || mask[v];
        let expect = brute_distances(&g, source, &allowed);
        let got = shortest_distances(&g, source, allowed).unwrap();
        assert_eq!(got, expect);
        for radius in expect
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .chain([0.0, 2.5, 7.0])
        {
            let b = ball(&g, source, radius, allowed).unwrap();
            let want: Vec<usize> = (0..n).filter(|&v| expect[v] <= radius).collect();
            assert_eq!(b, want, "radius {radius}");
        }
    }
}

#[test]
fn witnesses_are_shortest_paths() {
    let mut r = rng(12);
    for _ in 0..150 {
        let n = r.gen_range(2..=9);
        let g = {
            let integer = r.gen_bool(0.5);
            random_connected(&mut r, n, 2, integer)
        };
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        let w = shortest_path_witness(&g, u, v).unwrap();
        assert_eq!(w.vertices.first(), Some(&u));
        assert_eq!(w.vertices.last(), Some(&v));
        let walked: f64 = w
            .vertices
            .windows(2)
            .map(|e| g.weight(e[0], e[1]).expect("path edge"))
            .sum();
        assert_eq!(walked, w.length);
        assert_eq!(w.length, brute_distances(&g, u, &|_| true)[v]);
    }
}

#[test]
fn degree_of_separation_counts_met_cells() {
    let mut r = rng(13);
    for seed in 0..100 {
        let n = r.gen_range(3..=9);
        let k = r.gen_range(1..=3.min(n));
        let g = random_connected(&mut r, n, k, false);
        let carving = carve(&g, r.gen_range(0.5..20.0), &mut seeded(seed)).unwrap();
        let (x, y) = (r.gen_range(0..n), r.gen_range(0..n));
        let path = shortest_path_witness(&g, x, y).unwrap();
        let mut cells: Vec<usize> = path
            .vertices
            .iter()
            .filter_map(|v| carving.partition.cells().iter().position(|c| c.contains(v)))
            .collect();
        cells.sort_unstable();
        cells.dedup();
        assert_eq!(degree_of_separation(&carving.partition, &path), cells.len());
    }
}

/// Replays a ball-growing trace: every vertex assigned at step (i, j) lies
/// within the current radius of `t_j` in `G[unassigned ∪ V_j]`.
#[test]
fn algorithm1_steps_are_restricted_balls() {
    let mut r = rng(14);
    for seed in 0..60 {
        let n = r.gen_range(3..=9);
        let k = r.gen_range(2..=3.min(n));
        let g = rescale_to_unit_min(&{
            let integer = r.gen_bool(0.5);
            random_connected(&mut r, n, k, integer)
        })
        .unwrap()
        .0;
        let opts = SprOptions {
            trace: true,
            check_steps: true,
            ..SprOptions::default()
        };
        let out = run_partition(&g, seed, &opts).unwrap();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (j, &t) in g.terminals().iter().enumerate() {
            owner[t] = Some(j);
        }
        let mut last_radius = vec![0.0; k];
        for step in &out.trace {
            let j = step.terminal;
            assert!(step.radius >= last_radius[j]);
            last_radius[j] = step.radius;
            let allowed = |v: usize| owner[v].is_none() || owner[v] == Some(j);
            let d = brute_distances(&g, g.terminals()[j], &allowed);
            let before: Vec<usize> = (0..n).filter(|&v| owner[v] == Some(j)).collect();
            for &v in &step.assigned {
                assert!(owner[v].is_none(), "vertex {v} reassigned");
                assert!(
                    d[v] <= step.radius,
                    "vertex {v} at {} beyond radius {}",
                    d[v],
                    step.radius
                );
                owner[v] = Some(j);
            }
            // the ball is exactly what was there plus what was assigned
            let mut after: Vec<usize> = before
                .into_iter()
                .chain(step.assigned.iter().copied())
                .collect();
            after.sort_unstable();
            let want: Vec<usize> = (0..n).filter(|&v| d[v] <= step.radius).collect();
            assert!(want.iter().all(|v| after.contains(v)));
        }
        assert!(owner.iter().all(Option::is_some));
        assert_eq!(out.partition.owners(n), owner);
    }
}

#[test]
fn distortion_matches_brute_force_and_dominates() {
    let mut r = rng(15);
    let cfg = RunConfig::default();
    for seed in 0..80 {
        let n = r.gen_range(3..=12);
        let k = r.gen_range(2..=4.min(n));
        let g = {
            let integer = r.gen_bool(0.5);
            random_connected(&mut r, n, k, integer)
        };
        for alg in [Algorithm::Alg1, Algorithm::General, Algorithm::Baseline] {
            let (report, p) = run_trial(&g, alg, seed, &cfg).unwrap();
            assert!(report.valid_partition);
            let (hi, lo) = brute_stretch(&g, &p);
            assert!(lo >= 1.0 - STRETCH_EPS, "{alg:?}: stretch {lo}");
            assert!((report.max_stretch - hi).abs() <= 1e-9 * hi);
            let minor = contract(&g, &p).unwrap();
            let md = minor_distances(&minor);
            let bm = brute_minor_distances(&g, &p);
            for i in 0..k {
                for j in 0..k {
                    assert!((md.get(i, j) - bm[i][j]).abs() <= 1e-9 * bm[i][j].max(1.0));
                }
            }
        }
    }
}

#[test]
fn baseline_stretch_at_most_k() {
    let mut r = rng(16);
    for _ in 0..200 {
        let n = r.gen_range(2..=12);
        let k = r.gen_range(2..=5.min(n));
        let g = {
            let integer = r.gen_bool(0.5);
            random_connected(&mut r, n, k, integer)
        };
        let p = nearest_terminal_partition(&g);
        validate_partition(&g, &p, true).unwrap();
        let (hi, lo) = brute_stretch(&g, &p);
        assert!(lo >= 1.0 - STRETCH_EPS);
        assert!(
            hi <= k as f64 + STRETCH_EPS,
            "k = {k}: baseline stretch {hi}"
        );
        if k == 2 {
            assert!(hi <= 2.0 + STRETCH_EPS);
        }
    }
}

#[test]
fn nine_cycle_baseline_is_exact() {
    let g = generate(
        &Family::Cycle {
            n: 9,
            k: 3,
            placement: Default::default(),
        },
        0,
    )
    .unwrap();
    let (report, _) = run_trial(&g, Algorithm::Baseline, 0, &RunConfig::default()).unwrap();
    assert_eq!(report.max_stretch, 1.0);
}

/// Contracting the two balls of a two-class instance shortens a cross-class
/// terminal distance by at most the two ball diameters.
#[test]
fn super_terminal_contraction_bound() {
    let mut checked = 0;
    for seed in 0..60 {
        let fam = Family::Clusters {
            count: 2,
            size: 5,
            terminals_per_cluster: 1 + (seed as usize % 3),
            separation: 2f64.powi(20 + (seed % 20) as i32),
        };
        let g = rescale_to_unit_min(&generate(&fam, seed).unwrap())
            .unwrap()
            .0;
        let metric = terminal_metric(&g);
        let k = g.k();
        let Ok(gap) = find_gap(&rounded_distance_powers(&metric), k) else {
            continue;
        };
        let classes = equivalence_classes(&metric, gap.m0).unwrap();
        assert_eq!(classes.len(), 2);
        let radius = 2f64.powi(gap.m0);
        let mut owner = vec![None; g.n()];
        for (c, class) in classes.iter().enumerate() {
            for v in ball(&g, g.terminals()[class[0]], radius, |_| true).unwrap() {
                assert!(owner[v].is_none(), "balls overlap at {v}");
                owner[v] = Some(c);
            }
        }
        let (h, map) = contract_balls(&g, &owner, classes.len()).unwrap();
        let dh = floyd(h.n(), h.edges());
        let dg = floyd(g.n(), g.edges());
        let slack = 2.0 * 2f64.powi(gap.m0 + 1);
        for &x in &classes[0] {
            for &y in &classes[1] {
                let (tx, ty) = (g.terminals()[x], g.terminals()[y]);
                let contracted = dh[map[tx]][map[ty]];
                assert!(contracted <= dg[tx][ty] * (1.0 + 1e-12));
                assert!(dg[tx][ty] - contracted <= slack * (1.0 + 1e-12));
            }
        }
        checked += 1;
    }
    assert!(checked >= 40, "only {checked} instances had a gap");
}

#[test]
fn general_recursion_on_small_clusters_is_valid() {
    for seed in 0..40 {
        let g = generate(
            &Family::Clusters {
                count: 3,
                size: 4,
                terminals_per_cluster: 2,
                separation: 2f64.powi(40),
            },
            seed,
        )
        .unwrap();
        let opts = GeneralOptions {
            threshold: terminal_minors::general::Threshold::Fixed(2f64.powi(10)),
            ..GeneralOptions::default()
        };
        let out = spr_general(&g, seed, &opts).unwrap();
        validate_partition(&g, &out.partition, true).unwrap();
        assert!(out.recursion_depth() >= 1);
        assert!(out.levels.iter().all(|l| l.balls_valid));
        let (hi, lo) = brute_stretch(&g, &out.partition);
        assert!(lo >= 1.0 - STRETCH_EPS && hi.is_finite());
    }
}

#[test]
fn enumeration_visits_every_simple_path_once() {
    // K4 has 1 + 3 + 6 + 6 = 16 simple paths from a fixed start
    let edges: Vec<_> = (0..4)
        .flat_map(|u| (u + 1..4).map(move |v| (u, v, 1.0)))
        .collect();
    let g = WeightedGraph::new(4, &edges, vec![0]).unwrap();
    let mut count = 0;
    for_each_simple_path(&g, 0, &|_| true, &mut |_, _, _| count += 1);
    assert_eq!(count, 16);
}

#[test]
fn trial_report_json_round_trip() {
    let g = generate(
        &Family::GnpWeighted {
            n: 20,
            p: 0.3,
            k: 4,
            placement: Default::default(),
            min_weight: 1.0,
            max_weight: 5.0,
        },
        3,
    )
    .unwrap();
    let cfg = RunConfig {
        general: GeneralOptions {
            spr: SprOptions {
                trace: true,
                ..SprOptions::default()
            },
            ..GeneralOptions::default()
        },
        timing: false,
    };
    for alg in [Algorithm::Alg1, Algorithm::General, Algorithm::Baseline] {
        let (report, _) = run_trial(&g, alg, 9, &cfg).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: TrialReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
    let amp = amplify(&g, Algorithm::General, 4, 1, &cfg).unwrap();
    let back: terminal_minors::harness::AmplifiedResult =
        serde_json::from_str(&serde_json::to_string(&amp).unwrap()).unwrap();
    assert_eq!(back.trials, amp.trials);
    assert_eq!(back.best_index, amp.best_index);
}

fn small_graph() -> impl Strategy<Value = WeightedGraph> {
    (2usize..10, any::<u64>(), any::<bool>()).prop_map(|(n, seed, integer)| {
        let mut r = rng(seed);
        let k = 2 + (seed as usize % 3).min(n - 2);
        random_connected(&mut r, n, k, integer)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn terminal_metric_is_a_metric(g in small_graph()) {
        let m = terminal_metric(&g);
        let k = g.k();
        for i in 0..k {
            prop_assert_eq!(m.get(i, i), 0.0);
            for j in 0..k {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
                for l in 0..k {
                    prop_assert!(m.get(i, l) <= (m.get(i, j) + m.get(j, l)) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn distortion_is_scale_invariant(g in small_graph(), factor in 0.01f64..100.0, seed in any::<u64>()) {
        let cfg = RunConfig::default();
        let (_, p) = run_trial(&g, Algorithm::Alg1, seed, &cfg).unwrap();
        let s1 = distortion(&g, &contract(&g, &p).unwrap()).unwrap();
        let h = g.scaled(factor).unwrap();
        let s2 = distortion(&h, &contract(&h, &p).unwrap()).unwrap();
        for (a, b) in s1.matrix.iter().flatten().zip(s2.matrix.iter().flatten()) {
            match (a, b) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-9 * a),
                (None, None) => {}
                _ => prop_assert!(false, "diagonal mismatch"),
            }
        }
    }

    #[test]
    fn every_algorithm_dominates(g in small_graph(), seed in any::<u64>()) {
        let cfg = RunConfig::default();
        for alg in [Algorithm::Alg1, Algorithm::General, Algorithm::Baseline] {
            let (report, _) = run_trial(&g, alg, seed, &cfg).unwrap();
            prop_assert!(report.valid_partition);
            prop_assert!(report.min_stretch >= 1.0 - STRETCH_EPS);
            prop_assert!(report.max_stretch >= report.min_stretch);
        }
    }

    #[test]
    fn amplification_is_deterministic(g in small_graph(), seed in any::<u64>()) {
        let cfg = RunConfig::default();
        let a = amplify(&g, Algorithm::General, 4, seed, &cfg).unwrap();
        let b = amplify(&g, Algorithm::General, 4, seed, &cfg).unwrap();
        prop_assert_eq!(&a.trials, &b.trials);
        prop_assert!(a.best_max_stretch <= a.median_max_stretch());
        prop_assert!(a.trials.iter().all(|t| t.max_stretch >= a.best_max_stretch));
    }
}
