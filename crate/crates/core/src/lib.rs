//! Signed graph clustering by edge-cut minimization.
//!
//! A signed graph carries positive (attracting) and negative (repelling)
//! edge weights. A clustering is scored by its edge-cut, the total weight of
//! edges between different clusters; lower is better and the sum of all
//! negative weights is an absolute lower bound.
//!
//! The crate provides:
//! - [`scml`]: a multilevel solver built on label propagation coarsening,
//!   label propagation and FM refinement, and a second constrained cycle.
//! - [`evolve`] and [`run_islands`]: a steady-state memetic algorithm whose
//!   recombination and mutation operators block cut edges from contraction,
//!   optionally run as asynchronously communicating islands.
//! - [`gaec`], [`brute_force_optimal`], [`generate_planted`]: a greedy
//!   agglomerative baseline, an exact solver for tiny graphs, and a
//!   synthetic instance generator.
//!
//! ```
//! use sgclust::{scml, MultilevelConfig, SignedGraph};
//!
//! let g = SignedGraph::from_edges(4, [(0, 1, 2.0), (2, 3, 2.0), (0, 2, -1.0), (1, 3, -1.0)]);
//! let c = scml(&g, &MultilevelConfig::default(), 1);
//! assert_eq!(c.cut(), -2.0);
//! ```

pub mod baselines;
pub mod clustering;
pub mod coarsening;
pub mod error;
pub mod graph;
pub mod io;
pub mod islands;
pub mod memetic;
pub mod metrics;
pub mod multilevel;
pub mod oracle;
pub mod planted;
pub mod refinement;
pub mod seed;
mod state;

pub use baselines::gaec;
pub use clustering::{cut_edges, edge_cut, project_to_finer, symmetric_difference, z_value, Clustering, CutEdgeSet};
pub use coarsening::{build_hierarchy, label_propagation_cluster, Constraint, ConstraintMode, Hierarchy};
pub use error::{Error, Result};
pub use graph::{contract, normalize, EdgeRecord, SignedGraph};
pub use islands::{run_islands, IslandConfig, IslandsOutcome};
pub use memetic::{evolve, EvoConfig, EvoOutcome, Individual, Population};
pub use multilevel::{global_search, scml, MultilevelConfig};
pub use oracle::brute_force_optimal;
pub use planted::{generate_planted, PlantedConfig, PlantedInstance};
pub use refinement::{fm_refine, gain, lp_refine, MoveTarget};
