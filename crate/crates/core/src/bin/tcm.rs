//! `tcm`: build terminal-centered minors and check their guarantees.
//!
//! Exit status: 0 when every invariant check passed, 1 when a check failed
//! (or an algorithm gave up), 2 on usage or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use terminal_minors::decomp::{verify_decomposition, DecompositionStats};
use terminal_minors::general::{GeneralOptions, Threshold};
use terminal_minors::harness::report::{to_csv, Check, Document};
use terminal_minors::harness::{
    amplify, compare_baseline, distortion, generate, Algorithm, AmplifiedResult, Comparison,
    Family, Placement, RunConfig, Stretch, STRETCH_EPS,
};
use terminal_minors::io::{parse_partition, read_edge_list, write_edge_list, write_partition};
use terminal_minors::minor::{contract, validate_partition};
use terminal_minors::spr::{RadiusLaw, SprOptions};
use terminal_minors::{Error, WeightedGraph};

#[derive(Parser)]
#[command(
    name = "tcm",
    version,
    about = "Steiner point removal via terminal-centered minors"
)]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    report: Format,
    /// Write the report (or generated graph) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (reports are then no longer reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Cycle,
    Grid,
    RandomTree,
    Gnp,
    Barbell,
    Clusters,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlacementName {
    Uniform,
    Spread,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph in edge-list format.
    Gen(GenArgs),
    /// Ball growing on the graph rescaled to unit minimum terminal distance.
    Spr(SprArgs),
    /// The recursive general-case algorithm.
    SprGeneral(GeneralArgs),
    /// Monte-Carlo check of the truncated-exponential carving.
    Decompose(DecomposeArgs),
    /// Distortion of the minor induced by a given partition.
    Eval(EvalArgs),
    /// Nearest-terminal baseline against the amplified general algorithm.
    Compare(CompareArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[arg(long, value_enum, default_value_t = PlacementName::Spread)]
    placement: PlacementName,
    #[arg(long, default_value_t = 1.0)]
    min_weight: f64,
    #[arg(long, default_value_t = 10.0)]
    max_weight: f64,
    #[arg(long, default_value_t = 4)]
    clique: usize,
    #[arg(long, default_value_t = 2f64.powi(60))]
    bridge_weight: f64,
    #[arg(long, default_value_t = 0)]
    bridge_steiner: usize,
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    size: usize,
    #[arg(long, default_value_t = 2)]
    terminals_per_cluster: usize,
    #[arg(long, default_value_t = 2f64.powi(60))]
    separation: f64,
}

#[derive(Args)]
struct SprArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Record per-step traces and check cell invariants after every step.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    b_override: Option<f64>,
    /// Read exp(b^i) as rate b^i instead of mean b^i.
    #[arg(long)]
    rate_interpretation: bool,
    /// Write the best trial's partition here.
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Args)]
struct GeneralArgs {
    #[arg(long)]
    input: PathBuf,
    /// Aspect-ratio threshold: a number, or `cubic` for 2^(k^3).
    #[arg(long, default_value = "281474976710656")]
    threshold: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long)]
    partition_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    /// Embed the minor as JSON.
    #[arg(long)]
    minor_json: bool,
    /// Include cross-edge provenance in the minor JSON.
    #[arg(long)]
    provenance: bool,
    /// Write the minor in edge-list format here.
    #[arg(long)]
    minor_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 32)]
    trials: usize,
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IterationCap { .. }
            | Error::AllTrialsFailed(_)
            | Error::Invariant(_)
            | Error::RecursionDepth { .. } => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text).map_err(|e| e.to_string()),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more invariant checks failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<WeightedGraph, Failure> {
    read_edge_list(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(
    cli: &Cli,
    command: &str,
    input: &Path,
    checks: Vec<Check>,
    result: T,
    csv: impl FnOnce(&T) -> (Vec<&'static str>, Vec<Vec<String>>),
) -> Result<Output, Failure> {
    let doc = Document::new(
        command,
        cli.seed,
        Some(input.display().to_string()),
        checks,
        result,
    );
    let text = match cli.report {
        Format::Json => doc.to_json()?,
        Format::Csv => {
            let (header, rows) = csv(&doc.result);
            to_csv(&header, &rows)?
        }
    };
    Ok(Output {
        text,
        passed: doc.passed,
    })
}

fn trial_checks(result: &AmplifiedResult) -> Vec<Check> {
    let invalid = result.trials.iter().filter(|t| !t.valid_partition).count();
    let min = result
        .trials
        .iter()
        .map(|t| t.min_stretch)
        .fold(f64::INFINITY, f64::min);
    vec![
        Check::new(
            "partition_valid",
            invalid == 0,
            format!(
                "{invalid} of {} trials produced an invalid partition",
                result.trials.len()
            ),
        ),
        Check::new(
            "domination",
            min >= 1.0 - STRETCH_EPS,
            format!("minimum stretch {min}"),
        ),
        Check::new(
            "trials_completed",
            result.failures.is_empty(),
            format!("{} trials failed", result.failures.len()),
        ),
    ]
}

fn trial_rows(result: &AmplifiedResult) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = vec![
        "trial",
        "seed",
        "algorithm",
        "valid_partition",
        "max_stretch",
        "min_stretch",
        "outer_iterations",
        "best",
    ];
    let rows = result
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            vec![
                i.to_string(),
                t.seed.map(|s| s.to_string()).unwrap_or_default(),
                format!("{:?}", t.algorithm).to_lowercase(),
                t.valid_partition.to_string(),
                t.max_stretch.to_string(),
                t.min_stretch.to_string(),
                t.outer_iterations.to_string(),
                (i == result.best_index).to_string(),
            ]
        })
        .collect();
    (header, rows)
}

fn write_best_partition(result: &AmplifiedResult, path: &Option<PathBuf>) -> Result<(), Failure> {
    if let (Some(path), Some(p)) = (path, &result.best_partition) {
        std::fs::write(path, write_partition(p))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Gen(a) => {
            let placement = match a.placement {
                PlacementName::Uniform => Placement::Uniform,
                PlacementName::Spread => Placement::Spread,
            };
            let family = match a.family {
                FamilyName::Cycle => Family::Cycle {
                    n: a.n,
                    k: a.k,
                    placement,
                },
                FamilyName::Grid => Family::Grid {
                    rows: a.rows,
                    cols: a.cols,
                    k: a.k,
                    placement,
                },
                FamilyName::RandomTree => Family::RandomTree {
                    n: a.n,
                    k: a.k,
                    placement,
                    min_weight: a.min_weight,
                    max_weight: a.max_weight,
                },
                FamilyName::Gnp => Family::GnpWeighted {
                    n: a.n,
                    p: a.p,
                    k: a.k,
                    placement,
                    min_weight: a.min_weight,
                    max_weight: a.max_weight,
                },
                FamilyName::Barbell => Family::Barbell {
                    clique: a.clique,
                    bridge_weight: a.bridge_weight,
                    bridge_steiner: a.bridge_steiner,
                },
                FamilyName::Clusters => Family::Clusters {
                    count: a.count,
                    size: a.size,
                    terminals_per_cluster: a.terminals_per_cluster,
                    separation: a.separation,
                },
            };
            let g = generate(&family, cli.seed)?;
            Ok(Output {
                text: write_edge_list(&g),
                passed: true,
            })
        }
        Command::Spr(a) => {
            let g = load(&a.input)?;
            let cfg = RunConfig {
                general: GeneralOptions {
                    spr: SprOptions {
                        b_override: a.b_override,
                        radius_law: if a.rate_interpretation {
                            RadiusLaw::Rate
                        } else {
                            RadiusLaw::Mean
                        },
                        trace: a.trace,
                        check_steps: a.trace,
                        max_outer: None,
                    },
                    ..GeneralOptions::default()
                },
                timing: cli.timing,
            };
            let result = amplify(&g, Algorithm::Alg1, a.trials, cli.seed, &cfg)?;
            write_best_partition(&result, &a.partition_out)?;
            emit(
                cli,
                "spr",
                &a.input,
                trial_checks(&result),
                result,
                trial_rows,
            )
        }
        Command::SprGeneral(a) => {
            let g = load(&a.input)?;
            let threshold = if a.threshold.eq_ignore_ascii_case("cubic") {
                Threshold::Cubic
            } else {
                let t: f64 = a
                    .threshold
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad threshold {:?}", a.threshold)))?;
                if t.is_nan() || t < 1.0 {
                    return Err(Failure::Usage("threshold must be at least 1".into()));
                }
                Threshold::Fixed(t)
            };
            let cfg = RunConfig {
                general: GeneralOptions {
                    threshold,
                    ..GeneralOptions::default()
                },
                timing: cli.timing,
            };
            let result = amplify(&g, Algorithm::General, a.trials, cli.seed, &cfg)?;
            write_best_partition(&result, &a.partition_out)?;
            let mut checks = trial_checks(&result);
            let balls_ok = result
                .trials
                .iter()
                .flat_map(|t| &t.levels)
                .all(|l| l.balls_valid);
            checks.push(Check::new(
                "ball_claims",
                balls_ok,
                "disjoint connected balls within 2^(m0+1)",
            ));
            emit(cli, "spr-general", &a.input, checks, result, trial_rows)
        }
        Command::Decompose(a) => {
            let g = load(&a.input)?;
            if !(a.delta.is_finite() && a.delta > 0.0) {
                return Err(Failure::Usage("delta must be positive".into()));
            }
            let stats = verify_decomposition(&g, a.delta, a.trials, cli.seed)?;
            let checks = vec![
                Check::new(
                    "diameter_bound",
                    stats.diameter_pass(),
                    format!("{} clusters exceeded 2*delta", stats.diameter_violations),
                ),
                Check::new(
                    "terminal_cover",
                    stats.cover_pass(),
                    format!("{} carvings missed a terminal", stats.cover_violations),
                ),
                Check::new(
                    "separation_probability",
                    stats.separation_pass(),
                    "frequency <= beta d / delta + 3 sigma",
                ),
                Check::new(
                    "mean_degree_of_separation",
                    stats.mean_zp_pass(),
                    "E[Z_P] <= 1 + beta d(P) / delta + 3 sigma",
                ),
                Check::new(
                    "tail_decay",
                    stats.decay_pass(),
                    "Pr[Z_P > t] nonincreasing with negative log slope",
                ),
            ];
            emit(cli, "decompose", &a.input, checks, stats, decompose_rows)
        }
        Command::Eval(a) => {
            let g = load(&a.input)?;
            let text = std::fs::read_to_string(&a.partition)
                .map_err(|e| Failure::Usage(format!("{}: {e}", a.partition.display())))?;
            let p = parse_partition(&text)?;
            if let Err(v) = validate_partition(&g, &p, true) {
                return Err(Failure::Violation(format!("invalid partition: {v}")));
            }
            let minor = contract(&g, &p)?;
            if let Some(path) = &a.minor_out {
                std::fs::write(path, minor.to_edge_list())
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            let stretch = distortion(&g, &minor)?;
            #[derive(Serialize)]
            struct EvalResult {
                stretch: Stretch,
                #[serde(skip_serializing_if = "Option::is_none")]
                minor: Option<serde_json::Value>,
            }
            let checks = vec![Check::new(
                "domination",
                stretch.dominates(),
                format!("minimum stretch {}", stretch.min()),
            )];
            let result = EvalResult {
                minor: a.minor_json.then(|| minor.to_json(a.provenance)),
                stretch,
            };
            emit(cli, "eval", &a.input, checks, result, |r| {
                let mut rows = Vec::new();
                for (i, row) in r.stretch.matrix.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        if let Some(s) = s {
                            rows.push(vec![i.to_string(), j.to_string(), s.to_string()]);
                        }
                    }
                }
                (vec!["i", "j", "stretch"], rows)
            })
        }
        Command::Compare(a) => {
            let g = load(&a.input)?;
            let cfg = RunConfig {
                timing: cli.timing,
                ..RunConfig::default()
            };
            let cmp = compare_baseline(&g, a.trials, cli.seed, &cfg)?;
            let mut checks = trial_checks(&cmp.amplified);
            checks.push(Check::new(
                "baseline_valid",
                cmp.baseline.valid_partition && cmp.baseline.min_stretch >= 1.0 - STRETCH_EPS,
                format!("baseline max stretch {}", cmp.baseline.max_stretch),
            ));
            emit(cli, "compare", &a.input, checks, cmp, compare_rows)
        }
    }
}

fn decompose_rows(s: &DecompositionStats) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let mut rows = Vec::new();
    for p in &s.pairs {
        rows.push(vec![
            "separation".into(),
            p.x.to_string(),
            p.y.to_string(),
            p.distance.to_string(),
            p.frequency.to_string(),
            p.bound.to_string(),
            p.pass.to_string(),
        ]);
    }
    for p in &s.paths {
        rows.push(vec![
            "mean_zp".into(),
            p.from.to_string(),
            p.to.to_string(),
            p.length.to_string(),
            p.mean_zp.to_string(),
            p.mean_bound.to_string(),
            (p.mean_pass && p.decay_pass).to_string(),
        ]);
    }
    (
        vec!["kind", "a", "b", "distance", "value", "bound", "pass"],
        rows,
    )
}

fn compare_rows(c: &Comparison) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let rows = vec![
        vec![
            "baseline".into(),
            c.baseline.max_stretch.to_string(),
            "1".into(),
        ],
        vec![
            "general".into(),
            c.amplified.best_max_stretch.to_string(),
            c.amplified.trials.len().to_string(),
        ],
    ];
    (vec!["algorithm", "max_stretch", "trials"], rows)
}
