//! Planted-partition instances with a known ground truth.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::seed::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlantedConfig {
    /// Number of planted clusters.
    pub k: usize,
    /// Nodes per planted cluster.
    pub size: usize,
    /// Probability of a (positive) edge inside a cluster.
    pub p_in: f64,
    /// Probability of a (negative) edge between clusters.
    pub p_out: f64,
    /// Probability of flipping an edge's sign.
    pub noise: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub graph: SignedGraph,
    /// Planted cluster of each node; node `v` belongs to cluster `v / size`.
    pub truth: Vec<usize>,
}

pub fn generate_planted(cfg: &PlantedConfig) -> Result<PlantedInstance> {
    for (name, p) in [("p_in", cfg.p_in), ("p_out", cfg.p_out), ("noise", cfg.noise)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")));
        }
    }
    if cfg.k == 0 || cfg.size == 0 {
        return Err(Error::InvalidParameter("k and size must be positive".into()));
    }
    let n = cfg.k * cfg.size;
    let truth: Vec<usize> = (0..n).map(|v| v / cfg.size).collect();
    let mut rng = rng_from_seed(cfg.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let inside = truth[u] == truth[v];
            let p = if inside { cfg.p_in } else { cfg.p_out };
            if rng.gen::<f64>() < p {
                let mut w = if inside { 1.0 } else { -1.0 };
                if rng.gen::<f64>() < cfg.noise {
                    w = -w;
                }
                edges.push((u, v, w));
            }
        }
    }
    if edges.is_empty() {
        return Err(Error::InvalidParameter("parameters produced an empty edge set".into()));
    }
    Ok(PlantedInstance {
        graph: SignedGraph::from_edges(n, edges),
        truth,
    })
}
