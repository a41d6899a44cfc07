use std::fmt::Write as _;

use serde::Serialize;

use crate::config::PartitionConfig;
use crate::graph::{self, Graph, Partition, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub cycle: usize,
    pub cut: Weight,
    pub imbalance: f64,
    pub feasible: bool,
    pub levels: Vec<LevelStats>,
    pub coarsen_seconds: f64,
    pub initial_seconds: f64,
    pub uncoarsen_seconds: f64,
}

/// Outcome of one partitioner run.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub k: usize,
    pub epsilon: f64,
    pub l_max: Weight,
    pub cut: Weight,
    pub block_weights: Vec<Weight>,
    pub imbalance: f64,
    pub feasible: bool,
    pub seed: u64,
    /// Cycle whose result was returned.
    pub best_cycle: usize,
    pub cycles: Vec<CycleReport>,
    pub total_seconds: f64,
    pub config: PartitionConfig,
}

impl PartitionReport {
    pub(crate) fn new(
        g: &Graph,
        p: &Partition,
        cfg: &PartitionConfig,
        best_cycle: usize,
        cycles: Vec<CycleReport>,
        total_seconds: f64,
    ) -> Self {
        Self {
            num_nodes: g.num_nodes(),
            num_edges: g.num_edges(),
            k: cfg.k,
            epsilon: cfg.epsilon,
            l_max: p.l_max(),
            cut: graph::edge_cut(g, p.labels()),
            block_weights: p.block_weights().to_vec(),
            imbalance: graph::imbalance(p.block_weights(), g.total_node_weight(), cfg.k),
            feasible: p.is_feasible(),
            seed: cfg.seed,
            best_cycle,
            cycles,
            total_seconds,
            config: cfg.clone(),
        }
    }

    pub fn coarsen_seconds(&self) -> f64 {
        self.cycles.iter().map(|c| c.coarsen_seconds).sum()
    }

    pub fn initial_seconds(&self) -> f64 {
        self.cycles.iter().map(|c| c.initial_seconds).sum()
    }

    pub fn uncoarsen_seconds(&self) -> f64 {
        self.cycles.iter().map(|c| c.uncoarsen_seconds).sum()
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph            {} nodes, {} edges", self.num_nodes, self.num_edges);
        let _ = writeln!(
            s,
            "setup            k={} epsilon={} preset={} seed={}",
            self.k, self.epsilon, self.config.preset, self.seed
        );
        let _ = writeln!(s, "cut              {}", self.cut);
        let _ = writeln!(s, "imbalance        {:.6}", self.imbalance);
        let _ = writeln!(s, "max block weight {} (limit {})", self.block_weights.iter().max().unwrap_or(&0), self.l_max);
        let _ = writeln!(s, "feasible         {}", self.feasible);
        for c in &self.cycles {
            let levels: Vec<String> = c.levels.iter().map(|l| format!("{}/{}", l.nodes, l.edges)).collect();
            let _ = writeln!(
                s,
                "cycle {:<3}        cut={} imbalance={:.6} levels(n/m)=[{}] coarsen={:.3}s initial={:.3}s uncoarsen={:.3}s",
                c.cycle,
                c.cut,
                c.imbalance,
                levels.join(" "),
                c.coarsen_seconds,
                c.initial_seconds,
                c.uncoarsen_seconds
            );
        }
        let _ = writeln!(s, "time             {:.3}s", self.total_seconds);
        s
    }
}
