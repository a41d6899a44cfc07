use super::{BlockId, Clustering, Graph, NodeId, Partition, Weight};
use crate::error::{Error, Result};

/// Contracts every cluster into a single node.
///
/// Coarse node weights are the summed weights of their members, coarse edge
/// weights the summed weights of all fine edges running between the two
/// clusters; intra-cluster edges disappear. Coarse IDs are assigned in order
/// of first appearance when scanning fine nodes by ID. Returns the coarse
/// graph and the fine-to-coarse mapping.
pub fn contract(g: &Graph, clustering: &Clustering) -> (Graph, Vec<NodeId>) {
    contract_labels(g, clustering.labels())
}

pub fn contract_labels(g: &Graph, labels: &[BlockId]) -> (Graph, Vec<NodeId>) {
    let n = g.num_nodes();
    assert_eq!(labels.len(), n, "clustering must label every node");

    let label_space = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut remap = vec![NodeId::MAX; label_space];
    let mut mapping = Vec::with_capacity(n);
    let mut num_coarse = 0usize;
    for &l in labels {
        let slot = &mut remap[l as usize];
        if *slot == NodeId::MAX {
            *slot = num_coarse as NodeId;
            num_coarse += 1;
        }
        mapping.push(*slot);
    }
    drop(remap);

    // Bucket fine nodes by coarse ID (counting sort).
    let mut bucket_start = vec![0usize; num_coarse + 1];
    for &c in &mapping {
        bucket_start[c as usize + 1] += 1;
    }
    for i in 0..num_coarse {
        bucket_start[i + 1] += bucket_start[i];
    }
    let mut members = vec![0 as NodeId; n];
    let mut fill = bucket_start.clone();
    for (v, &c) in mapping.iter().enumerate() {
        members[fill[c as usize]] = v as NodeId;
        fill[c as usize] += 1;
    }

    let mut offsets = Vec::with_capacity(num_coarse + 1);
    offsets.push(0);
    let mut adjacency = Vec::new();
    let mut edge_weights = Vec::new();
    let mut node_weights = Vec::with_capacity(num_coarse);

    let mut scratch: Vec<Weight> = vec![0; num_coarse];
    let mut touched: Vec<NodeId> = Vec::new();
    for c in 0..num_coarse {
        let mut weight = 0;
        for &v in &members[bucket_start[c]..bucket_start[c + 1]] {
            weight += g.node_weight(v);
            for (u, w) in g.neighbors(v) {
                let cu = mapping[u as usize];
                if cu as usize == c {
                    continue;
                }
                if scratch[cu as usize] == 0 {
                    touched.push(cu);
                }
                scratch[cu as usize] += w;
            }
        }
        node_weights.push(weight);
        for &t in &touched {
            adjacency.push(t);
            edge_weights.push(scratch[t as usize]);
            scratch[t as usize] = 0;
        }
        touched.clear();
        offsets.push(adjacency.len());
    }

    let coarse = Graph::from_csr_unchecked(offsets, adjacency, edge_weights, node_weights);
    (coarse, mapping)
}

/// Transfers a coarse partition to the finer level: each fine node takes the
/// block of its coarse representative. Block weights carry over unchanged,
/// since contraction conserves node weight.
pub fn project(coarse: &Partition, mapping: &[NodeId]) -> Result<Partition> {
    let coarse_labels = coarse.labels();
    let mut labels = Vec::with_capacity(mapping.len());
    for (index, &c) in mapping.iter().enumerate() {
        match coarse_labels.get(c as usize) {
            Some(&l) => labels.push(l),
            None => {
                return Err(Error::MappingOutOfRange {
                    index,
                    target: c as u64,
                    len: coarse_labels.len(),
                })
            }
        }
    }
    Ok(Partition::from_parts(
        labels,
        coarse.block_weights().to_vec(),
        coarse.k(),
        coarse.l_max(),
    ))
}
