//! The multilevel driver: coarsen, start from singletons at the coarsest
//! level, uncoarsen with refinement, then a second constrained cycle.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::{project_to_finer, Clustering};
use crate::coarsening::{build_hierarchy, Constraint, DEFAULT_LP_ROUNDS};
use crate::graph::SignedGraph;
use crate::refinement::{fm_refine, lp_refine, DEFAULT_STALL_LIMIT};
use crate::seed::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultilevelConfig {
    /// Label propagation rounds per level, for coarsening and refinement.
    pub lp_rounds: usize,
    /// Consecutive non-improving FM moves tolerated before stopping.
    pub fm_stall_limit: usize,
}

impl Default for MultilevelConfig {
    fn default() -> Self {
        Self {
            lp_rounds: DEFAULT_LP_ROUNDS,
            fm_stall_limit: DEFAULT_STALL_LIMIT,
        }
    }
}

/// Initial clustering of the coarsest graph.
#[derive(Clone, Copy, Debug)]
pub enum CoarsestStart<'a> {
    /// Every coarsest node in its own cluster.
    Singletons,
    /// The image of an input clustering that constrained the coarsening.
    Image(&'a Clustering),
    /// The lowest-cut option among the images of both clusterings and the
    /// singletons; earlier options win ties.
    BestOf(&'a Clustering, &'a Clustering),
}

/// One coarsen/uncoarsen cycle.
pub fn v_cycle<R: Rng>(
    g: &SignedGraph,
    cfg: &MultilevelConfig,
    constraint: &Constraint,
    first_level_only: bool,
    start: CoarsestStart<'_>,
    rng: &mut R,
) -> Clustering {
    let h = build_hierarchy(g, constraint, first_level_only, cfg.lp_rounds, rng);
    let mut c = match start {
        CoarsestStart::Singletons => Clustering::singletons(h.coarsest()),
        CoarsestStart::Image(s) => h.coarsest_image(s),
        CoarsestStart::BestOf(a, b) => {
            let options = [
                h.coarsest_image(a),
                h.coarsest_image(b),
                Clustering::singletons(h.coarsest()),
            ];
            options
                .into_iter()
                .reduce(|best, o| if o.cut() < best.cut() { o } else { best })
                .unwrap()
        }
    };
    for level in (0..h.depth()).rev() {
        let graph = h.graph(level);
        if level + 1 < h.depth() {
            c = project_to_finer(graph, &c, h.map(level)).expect("hierarchy maps are consistent");
        }
        c = lp_refine(graph, &c, cfg.lp_rounds, rng);
        c = fm_refine(graph, &c, cfg.fm_stall_limit);
    }
    c
}

/// Second cycle that keeps every cut edge of `start` through coarsening and
/// begins uncoarsening from `start` itself. Never increases the cut.
pub fn global_search<R: Rng>(g: &SignedGraph, start: &Clustering, cfg: &MultilevelConfig, rng: &mut R) -> Clustering {
    let out = v_cycle(
        g,
        cfg,
        &Constraint::subset_of_one(start),
        false,
        CoarsestStart::Image(start),
        rng,
    );
    debug_assert!(out.cut() <= start.cut());
    out
}

/// First cycle under `constraint`, followed by [`global_search`].
pub fn scml_with<R: Rng>(
    g: &SignedGraph,
    cfg: &MultilevelConfig,
    constraint: &Constraint,
    first_level_only: bool,
    start: CoarsestStart<'_>,
    rng: &mut R,
) -> Clustering {
    let first = v_cycle(g, cfg, constraint, first_level_only, start, rng);
    global_search(g, &first, cfg, rng)
}

/// The full multilevel algorithm from scratch with a given seed.
pub fn scml(g: &SignedGraph, cfg: &MultilevelConfig, seed: u64) -> Clustering {
    let mut rng = rng_from_seed(seed);
    scml_with(g, cfg, &Constraint::none(), false, CoarsestStart::Singletons, &mut rng)
}
