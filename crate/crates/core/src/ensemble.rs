//! Overlay of several clusterings: two nodes share an overlay cluster iff
//! they share a cluster in every input.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{BlockId, Clustering, Graph};

/// Incrementally built overlay. Each absorbed clustering refines the current
/// labels by hashing `(overlay label, incoming label)` pairs to fresh
/// consecutive IDs.
#[derive(Clone, Debug)]
pub struct OverlayState {
    labels: Vec<BlockId>,
    pair_map: HashMap<(BlockId, BlockId), BlockId>,
    counter: BlockId,
}

impl OverlayState {
    /// Starts from `first`, renumbered consecutively by first appearance.
    pub fn new(first: &[BlockId]) -> Self {
        let labels = crate::graph::partition_normalize(first);
        let counter = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        Self {
            labels,
            pair_map: HashMap::new(),
            counter,
        }
    }

    pub fn absorb(&mut self, clustering: &[BlockId]) -> Result<()> {
        if clustering.len() != self.labels.len() {
            return Err(Error::NodeSetMismatch {
                expected: self.labels.len(),
                found: clustering.len(),
            });
        }
        self.pair_map.clear();
        self.counter = 0;
        for (label, &incoming) in self.labels.iter_mut().zip(clustering) {
            let fresh = &mut self.counter;
            let id = *self.pair_map.entry((*label, incoming)).or_insert_with(|| {
                let id = *fresh;
                *fresh += 1;
                id
            });
            *label = id;
        }
        Ok(())
    }

    pub fn labels(&self) -> &[BlockId] {
        &self.labels
    }

    /// Number of overlay clusters.
    pub fn counter(&self) -> usize {
        self.counter as usize
    }

    pub fn into_labels(self) -> Vec<BlockId> {
        self.labels
    }
}

/// Overlay labels of a nonempty list of labelings over the same node set.
pub fn overlay_labels(clusterings: &[&[BlockId]]) -> Result<Vec<BlockId>> {
    let (first, rest) = clusterings
        .split_first()
        .ok_or_else(|| Error::InvalidConfig("overlay needs at least one clustering".into()))?;
    let mut state = OverlayState::new(first);
    for c in rest {
        state.absorb(c)?;
    }
    Ok(state.into_labels())
}

pub fn overlay(g: &Graph, clusterings: &[Clustering]) -> Result<Clustering> {
    for c in clusterings {
        if c.num_nodes() != g.num_nodes() {
            return Err(Error::NodeSetMismatch {
                expected: g.num_nodes(),
                found: c.num_nodes(),
            });
        }
    }
    let views: Vec<&[BlockId]> = clusterings.iter().map(|c| c.labels()).collect();
    Clustering::from_labels(g, overlay_labels(&views)?)
}

/// Number of base clusterings combined per level for `k` blocks.
pub fn ensemble_size(k: usize) -> usize {
    match k {
        _ if k < 16 => 18,
        16 | 32 => 7,
        _ if k > 32 => 3,
        // 17..=31 is not covered by the reference schedule; use the
        // neighbouring value.
        _ => 7,
    }
}
