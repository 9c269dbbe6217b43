//! Greedy additive edge contraction (GAEC).

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use crate::clustering::Clustering;
use crate::graph::SignedGraph;

#[derive(Clone, Copy, Debug)]
struct Candidate {
    weight: f64,
    pair: Reverse<(usize, usize)>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then_with(|| self.pair.cmp(&other.pair))
    }
}

/// Starts from singletons and repeatedly merges the two clusters with the
/// largest summed interaction while it is strictly positive.
///
/// Ties go to the lexicographically smallest cluster-id pair; a merged
/// cluster keeps the smaller id. Heap entries are validated lazily against
/// the current interaction table.
pub fn gaec(g: &SignedGraph) -> Clustering {
    let n = g.n();
    let mut interaction: Vec<HashMap<usize, f64>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|u| vec![u]).collect();
    let mut alive = vec![true; n];
    let mut heap = BinaryHeap::new();
    for (u, v, w) in g.edges() {
        if w > 0.0 {
            heap.push(Candidate {
                weight: w,
                pair: Reverse((u, v)),
            });
        }
    }

    while let Some(Candidate {
        weight,
        pair: Reverse((a, b)),
    }) = heap.pop()
    {
        if !alive[a] || !alive[b] || interaction[a].get(&b) != Some(&weight) {
            continue;
        }
        // a < b: the merged cluster keeps id a.
        alive[b] = false;
        let absorbed = std::mem::take(&mut interaction[b]);
        interaction[a].remove(&b);
        for (c, w) in absorbed {
            if c == a {
                continue;
            }
            interaction[c].remove(&b);
            let merged = *interaction[a].entry(c).and_modify(|x| *x += w).or_insert(w);
            if merged == 0.0 {
                interaction[a].remove(&c);
                interaction[c].remove(&a);
                continue;
            }
            interaction[c].insert(a, merged);
            if merged > 0.0 {
                heap.push(Candidate {
                    weight: merged,
                    pair: Reverse((a.min(c), a.max(c))),
                });
            }
        }
        let moved = std::mem::take(&mut members[b]);
        members[a].extend(moved);
    }

    let mut assignment = vec![0; n];
    for (c, list) in members.iter().enumerate() {
        for &v in list {
            assignment[v] = c;
        }
    }
    Clustering::new(g, assignment).expect("assignment covers every node")
}
