use std::collections::VecDeque;

use crate::graph::{Graph, NodeId};

/// Two FIFO queues with membership bit vectors: nodes to visit in the current
/// round and nodes activated for the next one.
#[derive(Clone, Debug)]
pub struct ActiveQueue {
    current: VecDeque<NodeId>,
    next: VecDeque<NodeId>,
    in_current: Vec<bool>,
    in_next: Vec<bool>,
}

impl ActiveQueue {
    pub fn new(num_nodes: usize) -> Self {
        Self {
            current: VecDeque::new(),
            next: VecDeque::new(),
            in_current: vec![false; num_nodes],
            in_next: vec![false; num_nodes],
        }
    }

    /// Puts every node of `order` into the current queue (first round).
    pub fn seed(&mut self, order: &[NodeId]) {
        for &v in order {
            if !self.in_current[v as usize] {
                self.in_current[v as usize] = true;
                self.current.push_back(v);
            }
        }
    }

    pub fn pop_current(&mut self) -> Option<NodeId> {
        let v = self.current.pop_front()?;
        self.in_current[v as usize] = false;
        Some(v)
    }

    /// Returns false if `v` was already queued for the next round.
    pub fn push_next(&mut self, v: NodeId) -> bool {
        if self.in_next[v as usize] {
            return false;
        }
        self.in_next[v as usize] = true;
        self.next.push_back(v);
        true
    }

    /// Activates every neighbor of a node that just moved.
    pub fn activate_neighbors(&mut self, g: &Graph, v: NodeId) {
        for &u in g.neighbor_ids(v) {
            self.push_next(u);
        }
    }

    /// Ends a round: the next queue becomes the current one.
    pub fn swap(&mut self) {
        debug_assert!(self.current.is_empty());
        std::mem::swap(&mut self.current, &mut self.next);
        std::mem::swap(&mut self.in_current, &mut self.in_next);
    }

    pub fn current_len(&self) -> usize {
        self.current.len()
    }

    pub fn next_len(&self) -> usize {
        self.next.len()
    }

    pub fn is_current_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn in_current(&self) -> &[bool] {
        &self.in_current
    }

    pub fn in_next(&self) -> &[bool] {
        &self.in_next
    }

    pub fn current(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.current.iter().copied()
    }
}
