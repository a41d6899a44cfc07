#![allow(dead_code)]

use clusterpart::{BlockId, Graph, NodeId, Weight};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected(seed: u64, n: usize, extra: usize, max_node_w: Weight, max_edge_w: Weight) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        seen.insert((u, v));
        edges.push((u as NodeId, v as NodeId, rng.gen_range(1..=max_edge_w)));
    }
    for _ in 0..extra {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (u, v) = (a.min(b), a.max(b));
        if u != v && seen.insert((u, v)) {
            edges.push((u as NodeId, v as NodeId, rng.gen_range(1..=max_edge_w)));
        }
    }
    let weights: Vec<Weight> = (0..n).map(|_| rng.gen_range(1..=max_node_w)).collect();
    Graph::from_edges(n, &edges, Some(weights)).unwrap()
}

pub fn random_labels(seed: u64, n: usize, count: usize) -> Vec<BlockId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..count) as BlockId).collect()
}

/// Strategy for small weighted graphs, not necessarily connected.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let pairs = prop::collection::vec((0..n, 0..n, 1u64..=5), 0..=3 * n);
            let weights = prop::collection::vec(1u64..=4, n);
            (Just(n), pairs, weights)
        })
        .prop_map(|(n, pairs, weights)| {
            let mut seen = std::collections::HashSet::new();
            let edges: Vec<(NodeId, NodeId, Weight)> = pairs
                .into_iter()
                .filter_map(|(a, b, w)| {
                    let (u, v) = (a.min(b), a.max(b));
                    (u != v && seen.insert((u, v))).then_some((u as NodeId, v as NodeId, w))
                })
                .collect();
            Graph::from_edges(n, &edges, Some(weights)).unwrap()
        })
}

/// A graph together with a labelling using at most `max_labels` labels.
pub fn arb_graph_with_labels(max_n: usize, max_labels: usize) -> impl Strategy<Value = (Graph, Vec<BlockId>)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let n = g.num_nodes();
        (Just(g), prop::collection::vec(0..max_labels as BlockId, n))
    })
}

/// Cut recomputed from the edge list, independent of the library's metric.
pub fn reference_cut(g: &Graph, labels: &[BlockId]) -> Weight {
    g.edges().filter(|&(u, v, _)| labels[u as usize] != labels[v as usize]).map(|(_, _, w)| w).sum()
}
