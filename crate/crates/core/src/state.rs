//! Mutable partition state shared by label propagation and FM search.

use crate::clustering::{edge_cut, Clustering};
use crate::graph::{compact_labels, SignedGraph};
use crate::refinement::MoveTarget as Target;


#[derive(Clone, Copy, Debug)]
pub(crate) struct AppliedMove {
    pub node: usize,
    pub from: usize,
    pub to: usize,
    pub gain: f64,
    emptied_from: bool,
    took_free_id: bool,
}

/// Cluster ids live in `0..n`; ids of empty clusters sit on a free stack so
/// a node can always be split off into a fresh singleton.
pub(crate) struct WorkPartition<'g> {
    g: &'g SignedGraph,
    assign: Vec<usize>,
    size: Vec<usize>,
    free: Vec<usize>,
    cut: f64,
    conn: Vec<f64>,
    seen: Vec<bool>,
    touched: Vec<usize>,
}

impl<'g> WorkPartition<'g> {
    pub fn singletons(g: &'g SignedGraph) -> Self {
        Self::build(g, (0..g.n()).collect(), g.n(), g.total_weight())
    }

    pub fn from_clustering(g: &'g SignedGraph, c: &Clustering) -> Self {
        let (assign, k) = compact_labels(c.assignment());
        Self::build(g, assign, k, c.cut())
    }

    fn build(g: &'g SignedGraph, assign: Vec<usize>, k: usize, cut: f64) -> Self {
        let n = g.n();
        let mut size = vec![0usize; n];
        for &c in &assign {
            size[c] += 1;
        }
        Self {
            g,
            assign,
            size,
            free: (k..n).rev().collect(),
            cut,
            conn: vec![0.0; n],
            seen: vec![false; n],
            touched: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g SignedGraph {
        self.g
    }

    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assign[v]
    }

    pub fn cluster_size(&self, c: usize) -> usize {
        self.size[c]
    }

    /// Sums the weights from `u` to each neighboring cluster. When `blocks`
    /// is given, only neighbors in `u`'s block are considered. Returns the
    /// connection weight to `u`'s own cluster; the other touched clusters are
    /// available through [`Self::candidates`] until [`Self::clear`].
    pub fn accumulate(&mut self, u: usize, blocks: Option<&[usize]>) -> f64 {
        let own = self.assign[u];
        for (v, w) in self.g.neighbors(u) {
            if let Some(b) = blocks {
                if b[v] != b[u] {
                    continue;
                }
            }
            let c = self.assign[v];
            if !self.seen[c] {
                self.seen[c] = true;
                self.touched.push(c);
            }
            self.conn[c] += w;
        }
        if self.seen[own] {
            self.conn[own]
        } else {
            0.0
        }
    }

    /// Touched clusters other than `u`'s own, with their connection weight.
    pub fn candidates(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let own = self.assign[u];
        self.touched
            .iter()
            .copied()
            .filter(move |&c| c != own)
            .map(move |c| (c, self.conn[c]))
    }

    pub fn clear(&mut self) {
        for &c in &self.touched {
            self.seen[c] = false;
            self.conn[c] = 0.0;
        }
        self.touched.clear();
    }

    /// Moves `u` to `target`, lowering the cut by `gain`.
    pub fn apply(&mut self, u: usize, target: Target, gain: f64) -> AppliedMove {
        let from = self.assign[u];
        let (to, took_free_id) = match target {
            Target::Cluster(c) => (c, false),
            Target::NewSingleton => (
                self.free.pop().expect("a non-singleton cluster implies a free id"),
                true,
            ),
        };
        debug_assert_ne!(from, to);
        self.size[from] -= 1;
        let emptied_from = self.size[from] == 0;
        if emptied_from {
            self.free.push(from);
        }
        self.size[to] += 1;
        self.assign[u] = to;
        self.cut -= gain;
        AppliedMove {
            node: u,
            from,
            to,
            gain,
            emptied_from,
            took_free_id,
        }
    }

    /// Reverts `m`. Moves must be undone in reverse order of application.
    pub fn undo(&mut self, m: &AppliedMove) {
        if m.emptied_from {
            let id = self.free.pop();
            debug_assert_eq!(id, Some(m.from));
        }
        self.size[m.to] -= 1;
        if m.took_free_id {
            debug_assert_eq!(self.size[m.to], 0);
            self.free.push(m.to);
        }
        self.size[m.from] += 1;
        self.assign[m.node] = m.from;
        self.cut += m.gain;
    }

    pub fn is_boundary(&self, u: usize) -> bool {
        let own = self.assign[u];
        self.g.neighbor_ids(u).iter().any(|&v| self.assign[v] != own)
    }

    /// Recomputes the cut from scratch, replacing the incrementally tracked
    /// value, and returns the clustering.
    pub fn into_clustering(self) -> Clustering {
        let exact = edge_cut(self.g, &self.assign);
        debug_assert!(
            (exact - self.cut).abs() <= 1e-6 * (1.0 + exact.abs()),
            "tracked cut {} drifted from {}",
            self.cut,
            exact
        );
        Clustering::from_parts(self.assign, exact)
    }
}
