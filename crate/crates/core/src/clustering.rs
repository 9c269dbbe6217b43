//! Clusterings, their edge-cut, cut-edge sets, and projection between levels.

use crate::error::{Error, Result};
use crate::graph::{compact_labels, SignedGraph};

/// An assignment of every node to a cluster id, together with its edge-cut.
///
/// Cluster ids are arbitrary `usize` values; only equality matters.
#[derive(Clone, Debug, PartialEq)]
pub struct Clustering {
    assignment: Vec<usize>,
    cut: f64,
}

impl Clustering {
    /// Wraps `assignment` and computes its edge-cut on `g`.
    pub fn new(g: &SignedGraph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != g.n() {
            return Err(Error::Inconsistent(format!(
                "assignment covers {} nodes, graph has {}",
                assignment.len(),
                g.n()
            )));
        }
        let cut = edge_cut(g, &assignment);
        Ok(Self { assignment, cut })
    }

    /// Caller guarantees `cut == edge_cut(g, &assignment)`.
    pub(crate) fn from_parts(assignment: Vec<usize>, cut: f64) -> Self {
        Self { assignment, cut }
    }

    pub fn singletons(g: &SignedGraph) -> Self {
        Self {
            assignment: (0..g.n()).collect(),
            cut: g.total_weight(),
        }
    }

    pub fn all_in_one(g: &SignedGraph) -> Self {
        Self {
            assignment: vec![0; g.n()],
            cut: 0.0,
        }
    }

    pub fn cut(&self) -> f64 {
        self.cut
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Number of non-empty clusters.
    pub fn num_clusters(&self) -> usize {
        compact_labels(&self.assignment).1
    }

    /// Same clustering with ids renumbered `0..k` by first appearance.
    pub fn compacted(&self) -> Self {
        Self {
            assignment: compact_labels(&self.assignment).0,
            cut: self.cut,
        }
    }

    /// True when both clusterings induce the same partition of the nodes.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        self.len() == other.len() && self.compacted().assignment == other.compacted().assignment
    }
}

/// Total weight of edges whose endpoints lie in different clusters.
pub fn edge_cut(g: &SignedGraph, assignment: &[usize]) -> f64 {
    g.edges()
        .filter(|&(u, v, _)| assignment[u] != assignment[v])
        .map(|(_, _, w)| w)
        .fold(0.0, |acc, w| acc + w)
}

/// `1 - cut / sum_neg`: zero at the negative-mass lower bound, lower is better.
pub fn z_value(g: &SignedGraph, cut: f64) -> Result<f64> {
    if g.m_minus() == 0 {
        return Err(Error::NoNegativeEdges);
    }
    Ok(1.0 - cut / g.sum_neg())
}

/// Sorted set of cut edges, each stored as `(min, max)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutEdgeSet(Vec<(usize, usize)>);

impl CutEdgeSet {
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>) -> Self {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Self(pairs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.0.iter()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.0.binary_search(&key).is_ok()
    }
}

/// The edges of `g` crossing clusters of `c`.
pub fn cut_edges(g: &SignedGraph, c: &Clustering) -> CutEdgeSet {
    // g.edges() yields (u, v) with u < v in lexicographic order already.
    CutEdgeSet(
        g.edges()
            .filter(|&(u, v, _)| c.cluster_of(u) != c.cluster_of(v))
            .map(|(u, v, _)| (u, v))
            .collect(),
    )
}

/// `|a △ b|` by a linear merge of the two sorted sets.
pub fn symmetric_difference(a: &CutEdgeSet, b: &CutEdgeSet) -> usize {
    let (mut i, mut j, mut diff) = (0, 0, 0);
    while i < a.0.len() && j < b.0.len() {
        match a.0[i].cmp(&b.0[j]) {
            std::cmp::Ordering::Less => {
                diff += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                diff += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    diff + (a.0.len() - i) + (b.0.len() - j)
}

/// Lifts a clustering of a coarse graph to the finer graph it was contracted
/// from. The edge-cut carries over unchanged.
pub fn project_to_finer(fine: &SignedGraph, coarse: &Clustering, map: &[usize]) -> Result<Clustering> {
    if map.len() != fine.n() {
        return Err(Error::Inconsistent(format!(
            "projection map covers {} nodes, fine graph has {}",
            map.len(),
            fine.n()
        )));
    }
    let mut assignment = Vec::with_capacity(map.len());
    for &x in map {
        if x >= coarse.len() {
            return Err(Error::Inconsistent(format!(
                "projection map refers to coarse node {x} of {}",
                coarse.len()
            )));
        }
        assignment.push(coarse.cluster_of(x));
    }
    debug_assert!((edge_cut(fine, &assignment) - coarse.cut()).abs() <= 1e-9 * (1.0 + coarse.cut().abs()));
    Ok(Clustering::from_parts(assignment, coarse.cut()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::contract;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn edge_cut_on_twin() {
        let g = twin();
        assert_eq!(Clustering::all_in_one(&g).cut(), 0.0);
        assert_eq!(edge_cut(&g, &[0, 0, 0, 0]), 0.0);
        assert_eq!(Clustering::singletons(&g).cut(), 2.0);
        assert_eq!(edge_cut(&g, &[0, 1, 2, 3]), 2.0);
        assert_eq!(Clustering::new(&g, vec![0, 0, 1, 1]).unwrap().cut(), -2.0);
    }

    #[test]
    fn z_value_cases() {
        let g = twin();
        assert_eq!(z_value(&g, -2.0).unwrap(), 0.0);
        assert_eq!(z_value(&g, 0.0).unwrap(), 1.0);
        assert_eq!(z_value(&pathneg(), -1.0).unwrap(), 0.0);
        let positive = SignedGraph::from_edges(2, [(0, 1, 1.0)]);
        assert!(matches!(z_value(&positive, 0.0), Err(Error::NoNegativeEdges)));
    }

    #[test]
    fn cut_edge_sets() {
        let g = twin();
        let c = Clustering::new(&g, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(cut_edges(&g, &c), CutEdgeSet::from_pairs(vec![(2, 0), (1, 3)]));
        assert!(cut_edges(&g, &Clustering::all_in_one(&g)).is_empty());
        let t = tri();
        assert_eq!(cut_edges(&t, &Clustering::singletons(&t)).len(), 3);
    }

    #[test]
    fn symmetric_difference_cases() {
        let a = CutEdgeSet::from_pairs(vec![(0, 2), (1, 3)]);
        assert_eq!(symmetric_difference(&a, &a.clone()), 0);
        assert_eq!(symmetric_difference(&a, &CutEdgeSet::default()), 2);
        let b = CutEdgeSet::from_pairs(vec![(0, 1)]);
        assert_eq!(symmetric_difference(&b, &a), 3);
    }

    #[test]
    fn project_twin_contraction() {
        let g = twin();
        let (coarse, map) = contract(&g, &[0, 0, 1, 1]);
        let fine = project_to_finer(&g, &Clustering::singletons(&coarse), &map).unwrap();
        assert!(fine.same_partition(&Clustering::new(&g, vec![0, 0, 1, 1]).unwrap()));
        assert_eq!(fine.cut(), -2.0);

        let all = project_to_finer(&g, &Clustering::all_in_one(&coarse), &map).unwrap();
        assert_eq!(all.cut(), 0.0);
        assert_eq!(all.num_clusters(), 1);
    }

    #[test]
    fn project_rejects_short_map() {
        let g = twin();
        let (coarse, _) = contract(&g, &[0, 0, 1, 1]);
        let err = project_to_finer(&g, &Clustering::singletons(&coarse), &[0, 0, 1]);
        assert!(matches!(err, Err(Error::Inconsistent(_))));
    }

    fn arb_graph_and_labels() -> impl Strategy<Value = (SignedGraph, Vec<usize>, Vec<usize>)> {
        (2usize..=32)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    prop::collection::vec((0..n, 0..n, prop_oneof![Just(-1.0), Just(1.0), Just(2.0), Just(-3.0)]), 0..96),
                    prop::collection::vec(0..n, n),
                    prop::collection::vec(0..n, n),
                )
            })
            .prop_map(|(n, edges, fine_labels, coarse_labels)| {
                (SignedGraph::from_edges(n, edges), fine_labels, coarse_labels)
            })
    }

    proptest! {
        #[test]
        fn cut_is_bounded_below_by_negative_mass((g, labels, _) in arb_graph_and_labels()) {
            let c = Clustering::new(&g, labels).unwrap();
            prop_assert!(c.cut() >= g.sum_neg());
            let weighted: f64 = cut_edges(&g, &c).iter().map(|&(u, v)| g.edge_weight(u, v).unwrap()).sum();
            prop_assert_eq!(weighted, c.cut());
        }

        #[test]
        fn lifting_preserves_cut((g, labels, coarse_labels) in arb_graph_and_labels()) {
            let (coarse, map) = contract(&g, &labels);
            let cc = Clustering::new(&coarse, coarse_labels[..coarse.n()].to_vec()).unwrap();
            let lifted = project_to_finer(&g, &cc, &map).unwrap();
            prop_assert_eq!(edge_cut(&g, lifted.assignment()), cc.cut());
            prop_assert_eq!(lifted.cut(), cc.cut());
        }
    }
}
