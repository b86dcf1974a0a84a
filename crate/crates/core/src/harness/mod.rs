//! Instance generation, distortion evaluation, amplification and reports.

pub mod eval;
pub mod generate;
pub mod report;

pub use eval::{
    amplify, compare_baseline, distortion, median, run_trial, Algorithm, AmplifiedResult,
    Comparison, RunConfig, Stretch, TrialReport, STRETCH_EPS,
};
pub use generate::{generate, Family, Placement};
