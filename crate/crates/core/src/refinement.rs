//! Local search on one level: label propagation and FM refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clustering::Clustering;
use crate::graph::SignedGraph;
use crate::state::{AppliedMove, WorkPartition};

/// Where a node is moved to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveTarget {
    /// An existing cluster id.
    Cluster(usize),
    /// A new cluster containing only the moved node.
    NewSingleton,
}

/// Default number of consecutive non-improving FM moves before the search stops.
pub const DEFAULT_STALL_LIMIT: usize = 15;

/// Decrease in edge-cut obtained by moving `v` to `target`.
///
/// Moving a node to its own cluster has gain 0.
pub fn gain(g: &SignedGraph, c: &Clustering, v: usize, target: MoveTarget) -> f64 {
    let own = c.cluster_of(v);
    let target_cluster = match target {
        MoveTarget::Cluster(t) if t == own => return 0.0,
        MoveTarget::Cluster(t) => Some(t),
        MoveTarget::NewSingleton => None,
    };
    let (mut to_own, mut to_target) = (0.0, 0.0);
    for (u, w) in g.neighbors(v) {
        let cu = c.cluster_of(u);
        if cu == own {
            to_own += w;
        } else if Some(cu) == target_cluster {
            to_target += w;
        }
    }
    to_target - to_own
}

/// Runs up to `rounds` label propagation rounds on `state`, visiting nodes
/// in a fresh random order each round. Each node moves to the cluster of
/// maximum connection weight (its own cluster included, ties uniform); if
/// every connection is negative it is split off as a singleton. With
/// `blocks`, only clusters inside the node's block are candidates.
///
/// Returns the total number of moves.
pub(crate) fn propagate<R: Rng>(
    state: &mut WorkPartition<'_>,
    rounds: usize,
    blocks: Option<&[usize]>,
    rng: &mut R,
) -> usize {
    let n = state.graph().n();
    let mut order: Vec<usize> = (0..n).collect();
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    let mut total = 0;
    for _ in 0..rounds {
        order.shuffle(rng);
        let mut moves = 0;
        for &u in &order {
            let own_conn = state.accumulate(u, blocks);
            candidates.clear();
            candidates.extend(state.candidates(u));
            state.clear();

            // `None` stands for staying in the own cluster.
            let mut best = own_conn;
            let mut choice = None;
            let mut ties = 1u32;
            for &(c, w) in &candidates {
                match w.partial_cmp(&best) {
                    Some(Ordering::Greater) => {
                        best = w;
                        choice = Some(c);
                        ties = 1;
                    }
                    Some(Ordering::Equal) => {
                        ties += 1;
                        if rng.gen_range(0..ties) == 0 {
                            choice = Some(c);
                        }
                    }
                    _ => {}
                }
            }

            let before = state.cut();
            if best < 0.0 {
                if state.cluster_size(state.cluster_of(u)) > 1 {
                    state.apply(u, MoveTarget::NewSingleton, -own_conn);
                    moves += 1;
                }
            } else if let Some(c) = choice {
                state.apply(u, MoveTarget::Cluster(c), best - own_conn);
                moves += 1;
            }
            debug_assert!(state.cut() <= before);
        }
        total += moves;
        if moves == 0 {
            break;
        }
    }
    total
}

/// Label propagation refinement starting from `c`. Never increases the cut.
pub fn lp_refine<R: Rng>(g: &SignedGraph, c: &Clustering, rounds: usize, rng: &mut R) -> Clustering {
    let mut state = WorkPartition::from_clustering(g, c);
    propagate(&mut state, rounds, None, rng);
    state.into_clustering()
}

#[derive(Clone, Copy, Debug)]
struct QueueEntry {
    gain: f64,
    node: usize,
    stamp: u32,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueEntry {}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueEntry {
    // Max-heap on gain; equal gains pop the smaller node id first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.node.cmp(&self.node))
            .then_with(|| self.stamp.cmp(&other.stamp))
    }
}

/// Max-priority queue of candidate moves keyed by gain, with lazy updates.
///
/// Re-prioritizing a node bumps its stamp; entries with an old stamp are
/// skipped on extraction. Marked nodes are never returned.
struct GainQueue {
    heap: BinaryHeap<QueueEntry>,
    stamp: Vec<u32>,
    queued: Vec<bool>,
    marked: Vec<bool>,
}

impl GainQueue {
    fn new(n: usize) -> Self {
        Self {
            heap: BinaryHeap::new(),
            stamp: vec![0; n],
            queued: vec![false; n],
            marked: vec![false; n],
        }
    }

    fn push(&mut self, node: usize, gain: f64) {
        debug_assert!(!self.marked[node]);
        self.stamp[node] += 1;
        self.queued[node] = true;
        self.heap.push(QueueEntry {
            gain,
            node,
            stamp: self.stamp[node],
        });
    }

    fn pop(&mut self) -> Option<(usize, f64)> {
        while let Some(e) = self.heap.pop() {
            if !self.marked[e.node] && e.stamp == self.stamp[e.node] {
                self.queued[e.node] = false;
                return Some((e.node, e.gain));
            }
        }
        None
    }

    fn mark(&mut self, node: usize) {
        self.marked[node] = true;
        self.queued[node] = false;
    }
}

/// Best move for `u`: the neighboring cluster of maximum gain (smaller id on
/// ties), or a fresh singleton when that is strictly better.
fn best_move(state: &mut WorkPartition<'_>, u: usize) -> Option<(MoveTarget, f64)> {
    let own_conn = state.accumulate(u, None);
    let mut best: Option<(usize, f64)> = None;
    for (c, w) in state.candidates(u) {
        let g = w - own_conn;
        best = match best {
            Some((bc, bg)) if bg > g || (bg == g && bc < c) => Some((bc, bg)),
            _ => Some((c, g)),
        };
    }
    state.clear();
    let split = (state.cluster_size(state.cluster_of(u)) > 1).then_some(-own_conn);
    match (best, split) {
        (Some((_, g)), Some(s)) if s > g => Some((MoveTarget::NewSingleton, s)),
        (Some((c, g)), _) => Some((MoveTarget::Cluster(c), g)),
        (None, Some(s)) => Some((MoveTarget::NewSingleton, s)),
        (None, None) => None,
    }
}

/// One logged FM move. Cluster ids refer to the compacted input clustering
/// (see [`Clustering::compacted`]) with fresh singletons taking unused ids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoggedMove {
    pub node: usize,
    pub from: usize,
    pub to: usize,
    pub cut_after: f64,
}

/// Sequence of FM moves and the length of the prefix that was kept.
#[derive(Clone, Debug, Default)]
pub struct MoveLog {
    pub moves: Vec<LoggedMove>,
    pub kept: usize,
}

/// FM refinement with rollback. Never increases the cut.
pub fn fm_refine(g: &SignedGraph, c: &Clustering, stall_limit: usize) -> Clustering {
    fm_refine_logged(g, c, stall_limit).0
}

/// [`fm_refine`], also returning the full move log.
pub fn fm_refine_logged(g: &SignedGraph, c: &Clustering, stall_limit: usize) -> (Clustering, MoveLog) {
    let n = g.n();
    let mut state = WorkPartition::from_clustering(g, c);
    let mut queue = GainQueue::new(n);
    for u in 0..n {
        if state.is_boundary(u) {
            if let Some((_, gain)) = best_move(&mut state, u) {
                queue.push(u, gain);
            }
        }
    }

    let mut applied: Vec<AppliedMove> = Vec::new();
    let mut log = MoveLog::default();
    let mut best_cut = state.cut();
    let mut stall = 0;
    while let Some((u, queued_gain)) = queue.pop() {
        let Some((target, gain)) = best_move(&mut state, u) else {
            continue;
        };
        if gain < queued_gain {
            // Priority went stale through a non-neighbor change; requeue.
            queue.push(u, gain);
            continue;
        }
        let m = state.apply(u, target, gain);
        queue.mark(u);
        applied.push(m);
        log.moves.push(LoggedMove {
            node: u,
            from: m.from,
            to: m.to,
            cut_after: state.cut(),
        });
        if state.cut() < best_cut {
            best_cut = state.cut();
            log.kept = applied.len();
        }
        if gain > 0.0 {
            stall = 0;
        } else {
            stall += 1;
            if stall >= stall_limit {
                break;
            }
        }
        for &v in g.neighbor_ids(u) {
            if queue.marked[v] {
                continue;
            }
            if queue.queued[v] || state.is_boundary(v) {
                if let Some((_, gv)) = best_move(&mut state, v) {
                    queue.push(v, gv);
                }
            }
        }
    }

    while applied.len() > log.kept {
        let m = applied.pop().unwrap();
        state.undo(&m);
    }
    debug_assert_eq!(state.cut(), best_cut);
    (state.into_clustering(), log)
}
