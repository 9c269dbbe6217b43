//! Label propagation clustering for contraction and the contraction hierarchy.

use rand::Rng;

use crate::clustering::Clustering;
use crate::graph::{compact_labels, contract, SignedGraph};
use crate::refinement::propagate;
use crate::state::WorkPartition;

/// Default number of label propagation rounds.
pub const DEFAULT_LP_ROUNDS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintMode {
    None,
    /// Clusters must stay inside one cluster of a reference clustering.
    SubsetOfOne,
    /// Clusters must stay inside one connected component of the graph
    /// without the cut edges of two reference clusterings.
    SubsetOfTwo,
}

/// Restriction on which nodes may share a cluster during coarsening.
///
/// Nodes with different block ids never end up in the same cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    mode: ConstraintMode,
    blocks: Option<Vec<usize>>,
}

impl Constraint {
    pub fn none() -> Self {
        Self {
            mode: ConstraintMode::None,
            blocks: None,
        }
    }

    pub fn subset_of_one(reference: &Clustering) -> Self {
        Self {
            mode: ConstraintMode::SubsetOfOne,
            blocks: Some(compact_labels(reference.assignment()).0),
        }
    }

    /// Blocks are the connected components of `g` after removing every edge
    /// cut by `a` or by `b`.
    pub fn subset_of_two(g: &SignedGraph, a: &Clustering, b: &Clustering) -> Self {
        let mut dsu = DisjointSets::new(g.n());
        for (u, v, _) in g.edges() {
            if a.cluster_of(u) == a.cluster_of(v) && b.cluster_of(u) == b.cluster_of(v) {
                dsu.union(u, v);
            }
        }
        let roots: Vec<usize> = (0..g.n()).map(|v| dsu.find(v)).collect();
        Self {
            mode: ConstraintMode::SubsetOfTwo,
            blocks: Some(compact_labels(&roots).0),
        }
    }

    pub fn mode(&self) -> ConstraintMode {
        self.mode
    }

    pub fn blocks(&self) -> Option<&[usize]> {
        self.blocks.as_deref()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Label propagation from singletons, honoring `constraint`.
pub fn label_propagation_cluster<R: Rng>(
    g: &SignedGraph,
    rounds: usize,
    constraint: &Constraint,
    rng: &mut R,
) -> Clustering {
    lp_from_singletons(g, rounds, constraint.blocks(), rng)
}

fn lp_from_singletons<R: Rng>(g: &SignedGraph, rounds: usize, blocks: Option<&[usize]>, rng: &mut R) -> Clustering {
    let mut state = WorkPartition::singletons(g);
    propagate(&mut state, rounds, blocks, rng);
    state.into_clustering()
}

/// Stack of successively contracted graphs.
///
/// Level 0 is the input graph; `map(i)` sends nodes of level `i` to nodes of
/// level `i + 1`.
#[derive(Debug)]
pub struct Hierarchy<'g> {
    input: &'g SignedGraph,
    coarse: Vec<SignedGraph>,
    maps: Vec<Vec<usize>>,
}

impl<'g> Hierarchy<'g> {
    /// Number of levels, including the input graph.
    pub fn depth(&self) -> usize {
        self.coarse.len() + 1
    }

    pub fn graph(&self, level: usize) -> &SignedGraph {
        if level == 0 {
            self.input
        } else {
            &self.coarse[level - 1]
        }
    }

    pub fn map(&self, level: usize) -> &[usize] {
        &self.maps[level]
    }

    pub fn coarsest(&self) -> &SignedGraph {
        self.graph(self.depth() - 1)
    }

    /// Map from input nodes to coarsest nodes.
    pub fn input_to_coarsest(&self) -> Vec<usize> {
        let mut m: Vec<usize> = (0..self.input.n()).collect();
        for map in &self.maps {
            for x in m.iter_mut() {
                *x = map[*x];
            }
        }
        m
    }

    /// The clustering of the coarsest graph induced by an input clustering
    /// `c`. Only meaningful when every coarsest node lies inside one cluster
    /// of `c`, which holds when coarsening was constrained by `c`.
    pub fn coarsest_image(&self, c: &Clustering) -> Clustering {
        let to_coarse = self.input_to_coarsest();
        let mut image = vec![usize::MAX; self.coarsest().n()];
        for (v, &x) in to_coarse.iter().enumerate() {
            debug_assert!(image[x] == usize::MAX || image[x] == c.cluster_of(v));
            image[x] = c.cluster_of(v);
        }
        Clustering::new(self.coarsest(), image).expect("image covers every coarsest node")
    }
}

/// Repeatedly clusters and contracts until label propagation finds no merge.
///
/// With `first_level_only`, the constraint applies to the input level only.
pub fn build_hierarchy<'g, R: Rng>(
    g: &'g SignedGraph,
    constraint: &Constraint,
    first_level_only: bool,
    rounds: usize,
    rng: &mut R,
) -> Hierarchy<'g> {
    let mut h = Hierarchy {
        input: g,
        coarse: Vec::new(),
        maps: Vec::new(),
    };
    let mut blocks: Option<Vec<usize>> = constraint.blocks().map(<[usize]>::to_vec);
    loop {
        let current = h.coarsest();
        let c = lp_from_singletons(current, rounds, blocks.as_deref(), rng);
        if c.num_clusters() == current.n() {
            break;
        }
        let (coarse, map) = contract(current, c.assignment());
        debug_assert!(coarse.n() < current.n());
        blocks = match blocks {
            Some(b) if !first_level_only => {
                let mut next = vec![0; coarse.n()];
                for (v, &x) in map.iter().enumerate() {
                    next[x] = b[v];
                }
                Some(next)
            }
            _ => None,
        };
        h.coarse.push(coarse);
        h.maps.push(map);
    }
    h
}
