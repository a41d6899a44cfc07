//! Initial partitioning of the coarsest graph by recursive bisection.
//!
//! Every bisection is itself multilevel: it coarsens the subgraph with
//! size-constrained label propagation, splits the coarsest subgraph by greedy
//! region growing, and refines the split with label propagation on the way
//! back up.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::PartitionConfig;
use crate::error::{Error, Result};
use crate::graph::{self, BlockId, Graph, NodeId, Partition, Weight};
use crate::lpa::{self, LabelState, LpaParams};
use crate::multilevel::{build_hierarchy, coarsening_threshold, compute_cluster_bound, lmax_for};
use crate::seed::derive_seed;

/// A subgraph to split into `k_sub` blocks, numbered from `first_block`.
#[derive(Clone, Debug)]
pub struct BisectionTask {
    pub graph: Graph,
    /// Original node ID of each subgraph node.
    pub back_map: Vec<NodeId>,
    pub k_sub: usize,
    pub first_block: BlockId,
}

impl BisectionTask {
    /// Blocks for the two sides: the first side gets the larger half.
    pub fn split_counts(&self) -> (usize, usize) {
        (self.k_sub.div_ceil(2), self.k_sub / 2)
    }

    /// Ideal weight of the first side, proportional to its block count.
    pub fn weight_target(&self) -> Weight {
        let (k0, _) = self.split_counts();
        let total = self.graph.total_node_weight() as u128;
        (total * k0 as u128).div_ceil(self.k_sub as u128) as Weight
    }

    /// Weight limit per side: the proportional share with the usual
    /// `epsilon` slack, capped by what its blocks can hold under `l_max`.
    pub fn side_bounds(&self, epsilon: f64, l_max: Weight) -> [Weight; 2] {
        let (k0, k1) = self.split_counts();
        let total = self.graph.total_node_weight();
        let max_w = self.graph.max_node_weight();
        let side = |ki: usize| {
            let share = lmax_for(total * ki as Weight, max_w, self.k_sub, epsilon);
            share.min(l_max * ki as Weight)
        };
        [side(k0), side(k1)]
    }
}

/// Partitions `g` into `k` blocks of weight at most `l_max`.
pub fn initial_partition(
    g: &Graph,
    k: usize,
    l_max: Weight,
    cfg: &PartitionConfig,
    seed: u64,
) -> Result<Partition> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    let mut labels = vec![0; g.num_nodes()];
    let root = BisectionTask {
        graph: g.clone(),
        back_map: (0..g.num_nodes() as NodeId).collect(),
        k_sub: k,
        first_block: 0,
    };
    split_recursive(root, l_max, cfg, seed, &mut labels);
    let p = Partition::new(g, labels, k, l_max)?;
    if p.is_feasible() {
        Ok(p)
    } else {
        lpa::rebalance(g, &p)
    }
}

fn split_recursive(task: BisectionTask, l_max: Weight, cfg: &PartitionConfig, seed: u64, out: &mut [BlockId]) {
    if task.k_sub <= 1 || task.graph.num_nodes() == 0 {
        for &v in &task.back_map {
            out[v as usize] = task.first_block;
        }
        return;
    }
    let (k0, k1) = task.split_counts();
    let bounds = task.side_bounds(cfg.epsilon, l_max);
    let sides = bisect(&task.graph, task.weight_target(), bounds, cfg, seed);

    let mut members: [Vec<NodeId>; 2] = [Vec::new(), Vec::new()];
    for (v, &s) in sides.iter().enumerate() {
        members[s as usize].push(v as NodeId);
    }
    let firsts = [task.first_block, task.first_block + k0 as BlockId];
    for (side, k_side) in [(0usize, k0), (1, k1)] {
        let nodes = &members[side];
        let child = BisectionTask {
            graph: task.graph.induced_subgraph(nodes),
            back_map: nodes.iter().map(|&v| task.back_map[v as usize]).collect(),
            k_sub: k_side,
            first_block: firsts[side],
        };
        split_recursive(child, l_max, cfg, derive_seed(seed, &[side as u64]), out);
    }
}

/// Multilevel bisection into sides 0 and 1 with side 0 aiming at `target`.
fn bisect(g: &Graph, target: Weight, bounds: [Weight; 2], cfg: &PartitionConfig, seed: u64) -> Vec<BlockId> {
    let tight = bounds[0].min(bounds[1]);
    let hierarchy = build_hierarchy(g, coarsening_threshold(g.num_nodes(), 2), None, |graph, level, _| {
        let params = LpaParams {
            max_rounds: cfg.coarsen_rounds,
            size_bound: compute_cluster_bound(tight, cfg.cluster_factor, graph.max_node_weight()),
            ordering: cfg.ordering,
            active_nodes: cfg.active_coarsening,
            tie_breaking: cfg.tie_breaking,
            convergence_fraction: cfg.convergence_fraction,
            seed: derive_seed(seed, &[level as u64]),
        };
        lpa::cluster(graph, &params, None)
    });

    let q = hierarchy.num_levels();
    let coarsest = hierarchy.coarsest();
    let labels = greedy_labels(coarsest, target, bounds, derive_seed(seed, &[0x6772]), cfg.initial_restarts);
    let mut state = LabelState {
        block_weights: graph::block_weights(coarsest, &labels, 2),
        labels,
    };
    for level in (1..=q).rev() {
        let graph = hierarchy.level(level);
        if level < q {
            let mapping = hierarchy.mapping(level);
            state.labels = mapping.iter().map(|&c| state.labels[c as usize]).collect();
        }
        let params = LpaParams {
            max_rounds: cfg.lpa_rounds,
            size_bound: 0,
            ordering: cfg.ordering,
            active_nodes: cfg.active_refinement,
            tie_breaking: cfg.tie_breaking,
            convergence_fraction: cfg.convergence_fraction,
            seed: derive_seed(seed, &[0x7266, level as u64]),
        };
        lpa::refine_state(graph, &mut state, bounds.to_vec(), &params, &mut ());
    }
    // Best effort: the caller rebalances the final k-way partition, which
    // reports genuine infeasibility.
    let _ = lpa::rebalance_state(g, &mut state, &bounds);
    state.labels
}

/// Greedy region growing from a few pseudo-random start nodes, keeping the
/// best split. The returned partition uses `l_max_sub` for both sides.
pub fn greedy_bipartition(g: &Graph, weight_target: Weight, l_max_sub: Weight, seed: u64) -> Partition {
    let labels = greedy_labels(g, weight_target, [l_max_sub, l_max_sub], seed, 4);
    Partition::new(g, labels, 2, l_max_sub).expect("labels are 0 or 1")
}

fn greedy_labels(g: &Graph, target: Weight, bounds: [Weight; 2], seed: u64, restarts: usize) -> Vec<BlockId> {
    let n = g.num_nodes();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.shuffle(&mut rng);
    let total = g.total_node_weight();

    let mut best: Option<((bool, Weight), Vec<BlockId>)> = None;
    for start in 0..restarts.clamp(1, n) {
        let (labels, grown) = grow_region(g, target, bounds[0], &order, start);
        let feasible = grown <= bounds[0] && total - grown <= bounds[1];
        let key = (!feasible, graph::edge_cut(g, &labels));
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, labels));
        }
    }
    best.unwrap().1
}

/// Grows side 0 from `order[start]`, always absorbing the frontier node most
/// strongly connected to the grown region. When the frontier runs dry the
/// next unabsorbed node of `order` seeds a new region. Nodes that would push
/// the region past `bound` are skipped.
fn grow_region(g: &Graph, target: Weight, bound: Weight, order: &[NodeId], start: usize) -> (Vec<BlockId>, Weight) {
    let n = g.num_nodes();
    let mut labels = vec![1 as BlockId; n];
    let mut conn = vec![0 as Weight; n];
    let mut skipped = vec![false; n];
    let mut frontier: BinaryHeap<(Weight, Reverse<NodeId>)> = BinaryHeap::new();
    let mut seeds = order[start..].iter().chain(&order[..start]).copied();
    let mut grown = 0;

    while grown < target {
        let next = loop {
            match frontier.pop() {
                Some((c, Reverse(v))) => {
                    let i = v as usize;
                    if labels[i] == 0 || skipped[i] || c != conn[i] {
                        continue;
                    }
                    break Some(v);
                }
                None => break seeds.find(|&s| labels[s as usize] == 1 && !skipped[s as usize]),
            }
        };
        let Some(v) = next else { break };
        let w = g.node_weight(v);
        if grown + w > bound {
            skipped[v as usize] = true;
            continue;
        }
        labels[v as usize] = 0;
        grown += w;
        for (u, ew) in g.neighbors(v) {
            let i = u as usize;
            if labels[i] == 1 && !skipped[i] {
                conn[i] += ew;
                frontier.push((conn[i], Reverse(u)));
            }
        }
    }
    (labels, grown)
}
