//! Immutable weighted undirected graphs in compressed adjacency form, along
//! with clusterings, partitions, contraction and METIS I/O.

mod contract;
pub mod metis;
mod metrics;
mod partition;

pub use contract::{contract, contract_labels, project};
pub use metrics::{block_weights, edge_cut, imbalance, max_imbalance};
pub use partition::{Clustering, Partition};
pub(crate) use partition::normalize as partition_normalize;

use crate::error::{Error, Result};

/// Node identifier. 32 bits unless the `wide-ids` feature is enabled.
#[cfg(not(feature = "wide-ids"))]
pub type NodeId = u32;
#[cfg(feature = "wide-ids")]
pub type NodeId = u64;

/// Block or cluster identifier. Clusterings start out labelled by node ID, so
/// this shares the node ID width.
pub type BlockId = NodeId;

/// Node and edge weights. Contraction only ever sums weights, so unit inputs
/// stay integral on every level.
pub type Weight = u64;

/// An undirected graph stored as a symmetric adjacency array.
///
/// Every undirected edge `{u, v}` appears twice: once in the list of `u` and
/// once in the list of `v`, both entries carrying the same weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adjacency: Vec<NodeId>,
    edge_weights: Vec<Weight>,
    node_weights: Vec<Weight>,
}

impl Graph {
    /// Builds a graph from raw adjacency arrays after checking every structural
    /// invariant (symmetry, no self-loops, no parallel edges, positive edge
    /// weights).
    pub fn from_csr(
        offsets: Vec<usize>,
        adjacency: Vec<NodeId>,
        edge_weights: Vec<Weight>,
        node_weights: Vec<Weight>,
    ) -> Result<Self> {
        validate(&offsets, &adjacency, &edge_weights, &node_weights)?;
        Ok(Self::from_csr_unchecked(
            offsets,
            adjacency,
            edge_weights,
            node_weights,
        ))
    }

    pub(crate) fn from_csr_unchecked(
        offsets: Vec<usize>,
        adjacency: Vec<NodeId>,
        edge_weights: Vec<Weight>,
        node_weights: Vec<Weight>,
    ) -> Self {
        debug_assert_eq!(offsets.len(), node_weights.len() + 1);
        debug_assert_eq!(adjacency.len(), edge_weights.len());
        Self {
            offsets,
            adjacency,
            edge_weights,
            node_weights,
        }
    }

    /// Builds a graph from a list of undirected edges, each given once.
    /// Missing node weights default to 1.
    pub fn from_edges(
        num_nodes: usize,
        edges: &[(NodeId, NodeId, Weight)],
        node_weights: Option<Vec<Weight>>,
    ) -> Result<Self> {
        let node_weights = node_weights.unwrap_or_else(|| vec![1; num_nodes]);
        if node_weights.len() != num_nodes {
            return Err(Error::LengthMismatch {
                expected: num_nodes,
                found: node_weights.len(),
            });
        }
        let mut degree = vec![0usize; num_nodes];
        for &(u, v, _) in edges {
            for x in [u, v] {
                if x as usize >= num_nodes {
                    return Err(Error::InvalidGraph(format!(
                        "edge endpoint {x} out of range for {num_nodes} nodes"
                    )));
                }
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(num_nodes + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..num_nodes].to_vec();
        let mut adjacency = vec![0 as NodeId; 2 * edges.len()];
        let mut edge_weights = vec![0 as Weight; 2 * edges.len()];
        for &(u, v, w) in edges {
            for (a, b) in [(u, v), (v, u)] {
                let slot = &mut cursor[a as usize];
                adjacency[*slot] = b;
                edge_weights[*slot] = w;
                *slot += 1;
            }
        }
        Self::from_csr(offsets, adjacency, edge_weights, node_weights)
    }

    /// Unit-weighted graph from an undirected edge list.
    pub fn from_unit_edges(num_nodes: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1)).collect();
        Self::from_edges(num_nodes, &weighted, None)
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.node_weights.len()
    }

    /// Number of undirected edges.
    #[inline]
    pub fn num_edges(&self) -> usize {
        self.adjacency.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbor_ids(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn incident_weights(&self, v: NodeId) -> &[Weight] {
        let v = v as usize;
        &self.edge_weights[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors of `v` paired with the weight of the connecting edge.
    #[inline]
    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
        self.neighbor_ids(v)
            .iter()
            .copied()
            .zip(self.incident_weights(v).iter().copied())
    }

    /// Each undirected edge once, as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Weight)> + '_ {
        (0..self.num_nodes() as NodeId).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    #[inline]
    pub fn node_weight(&self, v: NodeId) -> Weight {
        self.node_weights[v as usize]
    }

    pub fn node_weights(&self) -> &[Weight] {
        &self.node_weights
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[NodeId] {
        &self.adjacency
    }

    pub fn edge_weights(&self) -> &[Weight] {
        &self.edge_weights
    }

    pub fn total_node_weight(&self) -> Weight {
        self.node_weights.iter().sum()
    }

    pub fn max_node_weight(&self) -> Weight {
        self.node_weights.iter().copied().max().unwrap_or(0)
    }

    /// Sum of edge weights, each undirected edge counted once.
    pub fn total_edge_weight(&self) -> Weight {
        self.edge_weights.iter().sum::<Weight>() / 2
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes())
            .map(|v| self.offsets[v + 1] - self.offsets[v])
            .max()
            .unwrap_or(0)
    }

    /// Subgraph induced by `nodes`; local node `i` is `nodes[i]`.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Graph {
        let mut local = vec![NodeId::MAX; self.num_nodes()];
        for (i, &v) in nodes.iter().enumerate() {
            local[v as usize] = i as NodeId;
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        offsets.push(0);
        let mut adjacency = Vec::new();
        let mut edge_weights = Vec::new();
        let mut node_weights = Vec::with_capacity(nodes.len());
        for &v in nodes {
            node_weights.push(self.node_weight(v));
            for (u, w) in self.neighbors(v) {
                let lu = local[u as usize];
                if lu != NodeId::MAX {
                    adjacency.push(lu);
                    edge_weights.push(w);
                }
            }
            offsets.push(adjacency.len());
        }
        Graph::from_csr_unchecked(offsets, adjacency, edge_weights, node_weights)
    }
}

fn validate(
    offsets: &[usize],
    adjacency: &[NodeId],
    edge_weights: &[Weight],
    node_weights: &[Weight],
) -> Result<()> {
    let n = node_weights.len();
    if offsets.len() != n + 1 {
        return Err(Error::InvalidGraph(format!(
            "offset array has length {}, expected {}",
            offsets.len(),
            n + 1
        )));
    }
    if offsets[0] != 0 || offsets[n] != adjacency.len() {
        return Err(Error::InvalidGraph(
            "offsets must start at 0 and end at the adjacency length".into(),
        ));
    }
    if offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidGraph("offsets must be nondecreasing".into()));
    }
    if edge_weights.len() != adjacency.len() {
        return Err(Error::InvalidGraph(
            "edge weight array does not match adjacency length".into(),
        ));
    }

    // Forward entries (u < v) and reversed backward entries must coincide.
    let mut forward = Vec::with_capacity(adjacency.len() / 2);
    let mut backward = Vec::with_capacity(adjacency.len() / 2);
    for u in 0..n {
        for i in offsets[u]..offsets[u + 1] {
            let v = adjacency[i] as usize;
            let w = edge_weights[i];
            if v >= n {
                return Err(Error::InvalidGraph(format!(
                    "node {u} lists neighbor {v}, but graph has {n} nodes"
                )));
            }
            if v == u {
                return Err(Error::SelfLoop(u));
            }
            if w == 0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has zero weight"
                )));
            }
            if u < v {
                forward.push((u, v, w));
            } else {
                backward.push((v, u, w));
            }
        }
    }
    forward.sort_unstable();
    backward.sort_unstable();
    for list in [&forward, &backward] {
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
            return Err(Error::ParallelEdge { u: w[0].0, v: w[0].1 });
        }
    }
    if forward != backward {
        let (u, v) = forward
            .iter()
            .zip(backward.iter())
            .find(|(a, b)| a != b)
            .map(|(a, b)| if (a.0, a.1) <= (b.0, b.1) { (a.0, a.1) } else { (b.0, b.1) })
            .or_else(|| {
                let longer = if forward.len() > backward.len() { &forward } else { &backward };
                longer.get(forward.len().min(backward.len())).map(|e| (e.0, e.1))
            })
            .expect("unequal lists differ somewhere");
        return Err(Error::Asymmetric { u, v });
    }
    Ok(())
}
