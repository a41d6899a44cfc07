use super::{BlockId, Graph, Weight};
use crate::error::{Error, Result};

/// One label per node plus the accumulated node weight of every label.
///
/// Labels need not be consecutive: a clustering produced by label
/// propagation starts out with each node labelled by its own ID.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<BlockId>,
    block_weights: Vec<Weight>,
}

impl Clustering {
    /// Every node in its own cluster, labelled by its node ID.
    pub fn singletons(g: &Graph) -> Self {
        Self {
            labels: (0..g.num_nodes() as BlockId).collect(),
            block_weights: g.node_weights().to_vec(),
        }
    }

    pub fn from_labels(g: &Graph, labels: Vec<BlockId>) -> Result<Self> {
        if labels.len() != g.num_nodes() {
            return Err(Error::LengthMismatch {
                expected: g.num_nodes(),
                found: labels.len(),
            });
        }
        let len = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let block_weights = super::block_weights(g, &labels, len);
        Ok(Self {
            labels,
            block_weights,
        })
    }

    pub(crate) fn from_parts(labels: Vec<BlockId>, block_weights: Vec<Weight>) -> Self {
        Self {
            labels,
            block_weights,
        }
    }

    pub fn labels(&self) -> &[BlockId] {
        &self.labels
    }

    /// Indexed by label; entries of unused labels are zero.
    pub fn block_weights(&self) -> &[Weight] {
        &self.block_weights
    }

    pub fn into_labels(self) -> Vec<BlockId> {
        self.labels
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct labels in use.
    pub fn num_clusters(&self) -> usize {
        let mut seen = vec![false; self.block_weights.len()];
        let mut count = 0;
        for &l in &self.labels {
            if !seen[l as usize] {
                seen[l as usize] = true;
                count += 1;
            }
        }
        count
    }

    pub fn max_cluster_weight(&self) -> Weight {
        self.block_weights.iter().copied().max().unwrap_or(0)
    }

    /// Labels renumbered 0, 1, 2, ... in order of first appearance. Two
    /// clusterings group nodes identically iff their normalized labels match.
    pub fn normalized_labels(&self) -> Vec<BlockId> {
        normalize(&self.labels)
    }
}

pub(crate) fn normalize(labels: &[BlockId]) -> Vec<BlockId> {
    let len = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut remap = vec![BlockId::MAX; len];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            let slot = &mut remap[l as usize];
            if *slot == BlockId::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect()
}

/// A k-way partition with its balance limit.
///
/// Feasibility is a property to query, not an invariant: intermediate
/// partitions may overload blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<BlockId>,
    block_weights: Vec<Weight>,
    k: usize,
    l_max: Weight,
}

impl Partition {
    pub fn new(g: &Graph, labels: Vec<BlockId>, k: usize, l_max: Weight) -> Result<Self> {
        if labels.len() != g.num_nodes() {
            return Err(Error::LengthMismatch {
                expected: g.num_nodes(),
                found: labels.len(),
            });
        }
        if let Some((node, &label)) = labels.iter().enumerate().find(|(_, &l)| l as usize >= k) {
            return Err(Error::LabelOutOfRange {
                node,
                label: label as u64,
                k,
            });
        }
        let block_weights = super::block_weights(g, &labels, k);
        Ok(Self {
            labels,
            block_weights,
            k,
            l_max,
        })
    }

    pub(crate) fn from_parts(
        labels: Vec<BlockId>,
        block_weights: Vec<Weight>,
        k: usize,
        l_max: Weight,
    ) -> Self {
        debug_assert_eq!(block_weights.len(), k);
        Self {
            labels,
            block_weights,
            k,
            l_max,
        }
    }

    pub fn labels(&self) -> &[BlockId] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<BlockId> {
        self.labels
    }

    pub fn block_weights(&self) -> &[Weight] {
        &self.block_weights
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l_max(&self) -> Weight {
        self.l_max
    }

    pub fn with_l_max(mut self, l_max: Weight) -> Self {
        self.l_max = l_max;
        self
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn max_block_weight(&self) -> Weight {
        self.block_weights.iter().copied().max().unwrap_or(0)
    }

    pub fn is_feasible(&self) -> bool {
        self.max_block_weight() <= self.l_max
    }

    pub fn nonempty_blocks(&self) -> usize {
        self.block_weights.iter().filter(|&&w| w > 0).count()
    }

    /// Same grouping viewed as a clustering.
    pub fn to_clustering(&self) -> Clustering {
        Clustering::from_parts(self.labels.clone(), self.block_weights.clone())
    }
}
