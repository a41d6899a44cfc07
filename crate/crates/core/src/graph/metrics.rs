use super::{BlockId, Graph, Weight};

/// Total weight of edges whose endpoints carry different labels. Each
/// undirected edge is counted once.
pub fn edge_cut(g: &Graph, labels: &[BlockId]) -> Weight {
    debug_assert_eq!(labels.len(), g.num_nodes());
    let mut doubled = 0;
    for u in 0..g.num_nodes() {
        let lu = labels[u];
        for (v, w) in g.neighbors(u as crate::NodeId) {
            if labels[v as usize] != lu {
                doubled += w;
            }
        }
    }
    doubled / 2
}

/// Node weight per block for labels in `[0, num_blocks)`.
pub fn block_weights(g: &Graph, labels: &[BlockId], num_blocks: usize) -> Vec<Weight> {
    let mut weights = vec![0; num_blocks];
    for (v, &l) in labels.iter().enumerate() {
        weights[l as usize] += g.node_weights()[v];
    }
    weights
}

/// `max_i c(V_i) * k / c(V) - 1`. Zero for an empty graph.
pub fn imbalance(block_weights: &[Weight], total_weight: Weight, k: usize) -> f64 {
    if total_weight == 0 {
        return 0.0;
    }
    let max = block_weights.iter().copied().max().unwrap_or(0);
    max as f64 * k as f64 / total_weight as f64 - 1.0
}

pub fn max_imbalance(g: &Graph, labels: &[BlockId], k: usize) -> f64 {
    imbalance(&block_weights(g, labels, k), g.total_node_weight(), k)
}
