//! Exact solver for tiny graphs by enumerating every set partition.

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::SignedGraph;

/// Largest node count accepted by [`brute_force_optimal`] (Bell(12) ≈ 4.2M
/// partitions).
pub const MAX_BRUTE_FORCE_NODES: usize = 12;

struct Enumerator<'a, F: FnMut(&[usize], f64)> {
    /// For node i, its neighbors j < i with weights.
    earlier: Vec<Vec<(usize, f64)>>,
    assign: Vec<usize>,
    visit: &'a mut F,
}

impl<F: FnMut(&[usize], f64)> Enumerator<'_, F> {
    fn extend(&mut self, i: usize, blocks: usize, cut: f64) {
        if i == self.assign.len() {
            (self.visit)(&self.assign, cut);
            return;
        }
        for c in 0..=blocks {
            let delta: f64 = self.earlier[i]
                .iter()
                .filter(|&&(j, _)| self.assign[j] != c)
                .map(|&(_, w)| w)
                .fold(0.0, |acc, w| acc + w);
            self.assign[i] = c;
            self.extend(i + 1, blocks.max(c + 1), cut + delta);
        }
    }
}

/// Visits every set partition of the nodes of `g` as a restricted growth
/// string, together with its edge-cut, updated incrementally per node.
pub fn for_each_partition<F: FnMut(&[usize], f64)>(g: &SignedGraph, mut visit: F) {
    let n = g.n();
    let earlier = (0..n)
        .map(|i| g.neighbors(i).filter(|&(j, _)| j < i).collect())
        .collect();
    let mut e = Enumerator {
        earlier,
        assign: vec![0; n],
        visit: &mut visit,
    };
    e.extend(0, 0, 0.0);
}

/// A minimum edge-cut clustering of `g` and its cut. Among equal cuts the
/// lexicographically first restricted growth string wins.
pub fn brute_force_optimal(g: &SignedGraph) -> Result<(Clustering, f64)> {
    if g.n() > MAX_BRUTE_FORCE_NODES {
        return Err(Error::TooLarge {
            n: g.n(),
            max: MAX_BRUTE_FORCE_NODES,
        });
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for_each_partition(g, |assign, cut| {
        if best.as_ref().is_none_or(|b| cut < b.1) {
            best = Some((assign.to_vec(), cut));
        }
    });
    let (assign, cut) = best.expect("at least one partition exists");
    let c = Clustering::new(g, assign)?;
    debug_assert_eq!(c.cut(), cut);
    Ok((c, cut))
}
