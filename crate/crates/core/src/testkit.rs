//! Ground truth for small instances and synthetic graph generators.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BlockId, Graph, NodeId, Partition, Weight};
use crate::multilevel::compute_lmax;

pub const BRUTE_FORCE_MAX_NODES: usize = 12;
pub const BRUTE_FORCE_MAX_BLOCKS: usize = 4;

/// Minimum-cut partition among all assignments meeting the balance limit of
/// `(k, epsilon)`. Ties resolve to the lexicographically smallest label
/// vector.
pub fn brute_force_min_cut(g: &Graph, k: usize, epsilon: f64) -> Result<(Partition, Weight)> {
    brute_force_with_lmax(g, k, compute_lmax(g, k, epsilon))
}

pub fn brute_force_with_lmax(g: &Graph, k: usize, l_max: Weight) -> Result<(Partition, Weight)> {
    let n = g.num_nodes();
    if n > BRUTE_FORCE_MAX_NODES || k > BRUTE_FORCE_MAX_BLOCKS || k == 0 {
        return Err(Error::InstanceTooLarge { n, k });
    }
    let mut search = Search {
        g,
        k,
        l_max,
        labels: vec![0; n],
        weights: vec![0; k],
        best: None,
    };
    search.assign(0, 0, 0);
    let (labels, cut) = search.best.ok_or(Error::NoFeasibleAssignment)?;
    Ok((Partition::new(g, labels, k, l_max)?, cut))
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    l_max: Weight,
    labels: Vec<BlockId>,
    weights: Vec<Weight>,
    best: Option<(Vec<BlockId>, Weight)>,
}

impl Search<'_> {
    /// Assigns node `v` given blocks `0..used` are in use. Labels are
    /// canonical: a node may open at most the next unused block.
    fn assign(&mut self, v: usize, used: usize, cut: Weight) {
        if self.best.as_ref().is_some_and(|(_, b)| cut >= *b) {
            return;
        }
        if v == self.g.num_nodes() {
            self.best = Some((self.labels.clone(), cut));
            return;
        }
        let w = self.g.node_weight(v as NodeId);
        let open = (used + 1).min(self.k);
        for b in 0..open {
            if self.weights[b] + w > self.l_max {
                continue;
            }
            let added: Weight = self
                .g
                .neighbors(v as NodeId)
                .filter(|&(u, _)| (u as usize) < v && self.labels[u as usize] as usize != b)
                .map(|(_, ew)| ew)
                .sum();
            self.labels[v] = b as BlockId;
            self.weights[b] += w;
            self.assign(v + 1, used.max(b + 1), cut + added);
            self.weights[b] -= w;
        }
    }
}

/// Synthetic graph families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenSpec {
    /// `0 - 1 - ... - (n-1)`.
    Path { n: usize },
    Cycle { n: usize },
    /// `count` disjoint cliques of `size` nodes each; clique `i` holds nodes
    /// `i*size .. (i+1)*size`.
    DisjointCliques { count: usize, size: usize },
    /// Preferential attachment: a `degree`-clique seed, then every new node
    /// links to `degree` distinct existing nodes picked with probability
    /// proportional to their degree. `m = degree*(degree-1)/2 +
    /// degree*(n-degree)`.
    PreferentialAttachment { n: usize, degree: usize, seed: u64 },
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    let invalid = |msg: String| Err(Error::InvalidParameter(msg));
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let n = match *spec {
        GenSpec::Path { n } => {
            if n == 0 {
                return invalid("path needs n >= 1".into());
            }
            edges.extend((1..n).map(|v| ((v - 1) as NodeId, v as NodeId)));
            n
        }
        GenSpec::Cycle { n } => {
            if n < 3 {
                return invalid("cycle needs n >= 3".into());
            }
            edges.extend((1..n).map(|v| ((v - 1) as NodeId, v as NodeId)));
            edges.push(((n - 1) as NodeId, 0));
            n
        }
        GenSpec::DisjointCliques { count, size } => {
            if count == 0 || size == 0 {
                return invalid("cliques need count >= 1 and size >= 1".into());
            }
            for c in 0..count {
                let base = c * size;
                for a in 0..size {
                    for b in a + 1..size {
                        edges.push(((base + a) as NodeId, (base + b) as NodeId));
                    }
                }
            }
            count * size
        }
        GenSpec::PreferentialAttachment { n, degree, seed } => {
            if degree == 0 || n <= degree {
                return invalid(format!(
                    "preferential attachment needs degree >= 1 and n > degree (n={n}, degree={degree})"
                ));
            }
            preferential_attachment(n, degree, seed, &mut edges);
            n
        }
    };
    Graph::from_unit_edges(n, &edges)
}

fn preferential_attachment(n: usize, degree: usize, seed: u64, edges: &mut Vec<(NodeId, NodeId)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Every edge endpoint once; sampling uniformly from it is degree-proportional.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * degree * n);
    for a in 0..degree {
        for b in a + 1..degree {
            edges.push((a as NodeId, b as NodeId));
            endpoints.push(a as NodeId);
            endpoints.push(b as NodeId);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(degree);
    let mut chosen: HashSet<NodeId> = HashSet::with_capacity(degree);
    for v in degree..n {
        targets.clear();
        chosen.clear();
        while targets.len() < degree {
            let t = if endpoints.is_empty() {
                // Only possible for degree 1: the seed is a single isolated node.
                0
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if chosen.insert(t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v as NodeId));
            endpoints.push(t);
            endpoints.push(v as NodeId);
        }
    }
}
