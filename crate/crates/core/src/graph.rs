//! Signed graph storage, normalization of raw edge records, and contraction.

/// One raw edge as read from an input file, before normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl EdgeRecord {
    pub fn new(u: usize, v: usize, w: f64) -> Self {
        Self { u, v, w }
    }
}

/// An undirected signed graph in compressed adjacency form.
///
/// Each undirected edge `{u, v}` is stored twice, once in the row of `u` and
/// once in the row of `v`, with the same nonzero weight. Rows are sorted by
/// neighbor id. There are no self edges and no parallel edges.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedGraph {
    xadj: Vec<usize>,
    adjncy: Vec<usize>,
    adjwgt: Vec<f64>,
    node_weight: Vec<f64>,
    m_plus: usize,
    m_minus: usize,
    sum_neg: f64,
}

impl SignedGraph {
    /// Builds a graph on `n` unit-weight nodes. Records on the same unordered
    /// pair are summed, self edges are dropped and pairs summing to exactly
    /// zero produce no edge.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        Self::with_node_weights(vec![1.0; n], edges)
    }

    pub fn with_node_weights<I>(node_weight: Vec<f64>, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let n = node_weight.len();
        let mut list: Vec<(usize, usize, f64)> = edges
            .into_iter()
            .filter(|&(u, v, _)| u != v)
            .map(|(u, v, w)| {
                assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
                if u < v {
                    (u, v, w)
                } else {
                    (v, u, w)
                }
            })
            .collect();
        list.sort_by_key(|a| (a.0, a.1));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(list.len());
        for (u, v, w) in list {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += w,
                _ => merged.push((u, v, w)),
            }
        }
        merged.retain(|e| e.2 != 0.0);

        let mut degree = vec![0usize; n];
        for &(u, v, _) in &merged {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut xadj = Vec::with_capacity(n + 1);
        xadj.push(0);
        for d in &degree {
            xadj.push(xadj.last().unwrap() + d);
        }
        let total = *xadj.last().unwrap();
        let mut adjncy = vec![0usize; total];
        let mut adjwgt = vec![0.0f64; total];
        let mut fill = xadj[..n].to_vec();

        let (mut m_plus, mut m_minus, mut sum_neg) = (0, 0, 0.0);
        // Edges are sorted by (u, v) with u < v, so every row is filled in
        // increasing neighbor order.
        for &(u, v, w) in &merged {
            adjncy[fill[u]] = v;
            adjwgt[fill[u]] = w;
            fill[u] += 1;
            adjncy[fill[v]] = u;
            adjwgt[fill[v]] = w;
            fill[v] += 1;
            if w > 0.0 {
                m_plus += 1;
            } else {
                m_minus += 1;
                sum_neg += w;
            }
        }

        Self {
            xadj,
            adjncy,
            adjwgt,
            node_weight,
            m_plus,
            m_minus,
            sum_neg,
        }
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.node_weight.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.m_plus + self.m_minus
    }

    pub fn m_plus(&self) -> usize {
        self.m_plus
    }

    pub fn m_minus(&self) -> usize {
        self.m_minus
    }

    /// Sum of all negative edge weights; no clustering can cut less.
    pub fn sum_neg(&self) -> f64 {
        self.sum_neg
    }

    pub fn node_weight(&self, v: usize) -> f64 {
        self.node_weight[v]
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weight
    }

    pub fn degree(&self, u: usize) -> usize {
        self.xadj[u + 1] - self.xadj[u]
    }

    /// Neighbor ids of `u`, ascending.
    pub fn neighbor_ids(&self, u: usize) -> &[usize] {
        &self.adjncy[self.xadj[u]..self.xadj[u + 1]]
    }

    /// `(neighbor, weight)` pairs of `u`, ascending by neighbor.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.xadj[u]..self.xadj[u + 1];
        self.adjncy[range.clone()]
            .iter()
            .copied()
            .zip(self.adjwgt[range].iter().copied())
    }

    /// Every undirected edge once, as `(u, v, w)` with `u < v`, in
    /// lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// Weight of edge `{u, v}`, if present.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        let row = self.neighbor_ids(u);
        row.binary_search(&v)
            .ok()
            .map(|i| self.adjwgt[self.xadj[u] + i])
    }

    /// Sum of all edge weights (the cut of the all-singletons clustering).
    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).fold(0.0, |acc, w| acc + w)
    }
}

/// Turns raw records into a canonical signed graph.
///
/// Self edges are removed and all records on one unordered pair are summed.
/// With `raw_weights == false` the summed weight is replaced by its sign
/// (`+1` or `-1`); a zero sum yields no edge in either mode.
pub fn normalize(records: &[EdgeRecord], n: usize, raw_weights: bool) -> SignedGraph {
    let summed = SignedGraph::from_edges(n, records.iter().map(|r| (r.u, r.v, r.w)));
    if raw_weights {
        return summed;
    }
    let edges: Vec<_> = summed
        .edges()
        .map(|(u, v, w)| (u, v, if w > 0.0 { 1.0 } else { -1.0 }))
        .collect();
    SignedGraph::from_edges(n, edges)
}

/// Relabels arbitrary cluster ids to `0..k` in order of first appearance.
pub fn compact_labels(assignment: &[usize]) -> (Vec<usize>, usize) {
    let mut relabel = std::collections::HashMap::new();
    let out = assignment
        .iter()
        .map(|&c| {
            let next = relabel.len();
            *relabel.entry(c).or_insert(next)
        })
        .collect();
    (out, relabel.len())
}

/// Contracts every cluster of `assignment` into one node.
///
/// Returns the coarse graph and the map from fine node to coarse node. Coarse
/// node weights are member sums, parallel inter-cluster edges are summed, and
/// intra-cluster edges vanish. Cluster ids need not be contiguous; coarse ids
/// follow first appearance in node order.
pub fn contract(g: &SignedGraph, assignment: &[usize]) -> (SignedGraph, Vec<usize>) {
    assert_eq!(assignment.len(), g.n(), "assignment length must equal node count");
    let (map, k) = compact_labels(assignment);
    let mut weights = vec![0.0; k];
    for (v, &c) in map.iter().enumerate() {
        weights[c] += g.node_weight(v);
    }
    let coarse_edges = g
        .edges()
        .filter(|&(u, v, _)| map[u] != map[v])
        .map(|(u, v, w)| (map[u], map[v], w));
    (SignedGraph::with_node_weights(weights, coarse_edges), map)
}
