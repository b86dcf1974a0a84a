//! Steiner point removal on weighted graphs.
//!
//! Given a graph with designated terminals, the algorithms here partition
//! the vertices into connected cells, one per terminal, and contract each
//! cell into its terminal. The resulting terminal-centered minor keeps the
//! original terminal distances as edge weights, so it never shortens a
//! distance; the interesting quantity is how much it stretches them.
//!
//! - [`graph`]: weighted graphs, restricted shortest paths, balls.
//! - [`minor`]: partitions, contraction, the nearest-terminal baseline.
//! - [`decomp`]: truncated-exponential ball carving and its Monte-Carlo checks.
//! - [`spr`]: the exponential-radius ball-growing partition.
//! - [`general`]: the recursive reduction for arbitrary aspect ratio.
//! - [`harness`]: generators, distortion, amplification, reports.

pub mod decomp;
pub mod error;
pub mod general;
pub mod graph;
pub mod harness;
pub mod io;
pub mod minor;
pub mod rng;
pub mod spr;

pub use error::{Error, Result};
pub use graph::{PathWitness, Vertex, WeightedGraph};
pub use minor::{PartialPartition, TerminalMinor};
