//! Multilevel driver: coarsening by repeated cluster contraction, initial
//! partitioning of the coarsest graph, uncoarsening with label propagation
//! refinement, and iterated V-cycles.

use std::time::Instant;

use crate::config::PartitionConfig;
use crate::ensemble;
use crate::error::Result;
use crate::graph::{self, BlockId, Clustering, Graph, NodeId, Partition, Weight};
use crate::initpart;
use crate::lpa::{self, LpaParams};
use crate::report::{CycleReport, LevelStats, PartitionReport};
use crate::seed::derive_seed;

/// Balance limit `ceil((1 + epsilon) * c(V) / k) + max_v c(v)`.
pub fn compute_lmax(g: &Graph, k: usize, epsilon: f64) -> Weight {
    lmax_for(g.total_node_weight(), g.max_node_weight(), k, epsilon)
}

/// `epsilon` is taken with six decimal digits so that values like 0.03 do not
/// pick up binary rounding error before the ceiling.
pub fn lmax_for(total_weight: Weight, max_node_weight: Weight, k: usize, epsilon: f64) -> Weight {
    assert!(k >= 1, "k must be positive");
    let ppm = (epsilon.max(0.0) * 1e6).round() as u128;
    let numerator = (1_000_000 + ppm) * total_weight as u128;
    let denominator = 1_000_000 * k as u128;
    numerator.div_ceil(denominator) as Weight + max_node_weight
}

/// Cluster size bound `U = max(max_v c(v), floor(l_max / f))`.
pub fn compute_cluster_bound(l_max: Weight, cluster_factor: u64, max_node_weight: Weight) -> Weight {
    max_node_weight.max(l_max / cluster_factor.max(1))
}

/// Coarsening stops below `max(60k, n / (60k))` nodes, `n` being the input size.
pub fn coarsening_threshold(num_input_nodes: usize, k: usize) -> usize {
    let base = 60 * k;
    base.max(num_input_nodes / base)
}

/// Additional imbalance allowed on `level` (1 = finest) of a `q`-level hierarchy.
pub fn level_imbalance(delta: f64, q: usize, level: usize) -> f64 {
    if level <= 1 || level > q {
        0.0
    } else {
        delta / (q - level + 1) as f64
    }
}

/// Graphs `G_1 .. G_q` with `G_1` the input, plus the node maps between
/// consecutive levels.
#[derive(Clone, Debug)]
pub struct Hierarchy<'g> {
    input: &'g Graph,
    coarse: Vec<Graph>,
    mappings: Vec<Vec<NodeId>>,
}

impl<'g> Hierarchy<'g> {
    pub fn new(input: &'g Graph) -> Self {
        Self {
            input,
            coarse: Vec::new(),
            mappings: Vec::new(),
        }
    }

    /// `q`, counting the input.
    pub fn num_levels(&self) -> usize {
        1 + self.coarse.len()
    }

    /// Level numbering starts at 1 for the input graph.
    pub fn level(&self, level: usize) -> &Graph {
        assert!(level >= 1 && level <= self.num_levels());
        if level == 1 {
            self.input
        } else {
            &self.coarse[level - 2]
        }
    }

    pub fn coarsest(&self) -> &Graph {
        self.level(self.num_levels())
    }

    /// Maps nodes of `level` to nodes of `level + 1`.
    pub fn mapping(&self, level: usize) -> &[NodeId] {
        &self.mappings[level - 1]
    }

    fn push(&mut self, graph: Graph, mapping: Vec<NodeId>) {
        self.coarse.push(graph);
        self.mappings.push(mapping);
    }

    /// Carries labels of the input graph down to the coarsest level. Only
    /// meaningful when every coarse node's members share a label.
    pub fn restrict_to_coarsest(&self, labels: &[BlockId]) -> Vec<BlockId> {
        let mut current = labels.to_vec();
        for level in 1..self.num_levels() {
            let mapping = self.mapping(level);
            let mut next = vec![0; self.level(level + 1).num_nodes()];
            for (v, &c) in mapping.iter().enumerate() {
                next[c as usize] = current[v];
            }
            current = next;
        }
        current
    }

    /// Labels of `level` expressed on the input graph.
    pub fn project_to_input(&self, level: usize, labels: &[BlockId]) -> Vec<BlockId> {
        let mut current = labels.to_vec();
        for l in (1..level).rev() {
            current = self.mapping(l).iter().map(|&c| current[c as usize]).collect();
        }
        current
    }

    pub fn stats(&self) -> Vec<LevelStats> {
        (1..=self.num_levels())
            .map(|l| LevelStats {
                nodes: self.level(l).num_nodes(),
                edges: self.level(l).num_edges(),
            })
            .collect()
    }
}

/// Repeats clustering and contraction until the graph has fewer than
/// `threshold` nodes or a pass shrinks it by less than 5%. A pass that does
/// not shrink the graph at all adds no level.
pub(crate) fn build_hierarchy<'g>(
    g: &'g Graph,
    threshold: usize,
    constraint: Option<&[BlockId]>,
    mut clusterer: impl FnMut(&Graph, usize, Option<&[BlockId]>) -> Clustering,
) -> Hierarchy<'g> {
    let mut hierarchy = Hierarchy::new(g);
    let mut level_constraint = constraint.map(<[BlockId]>::to_vec);
    loop {
        let current = hierarchy.coarsest();
        let n = current.num_nodes();
        if n < threshold || n == 0 {
            break;
        }
        let clustering = clusterer(current, hierarchy.num_levels(), level_constraint.as_deref());
        let (coarse, mapping) = graph::contract(current, &clustering);
        let coarse_n = coarse.num_nodes();
        if coarse_n >= n {
            break;
        }
        if let Some(labels) = &level_constraint {
            let mut next = vec![0; coarse_n];
            for (v, &c) in mapping.iter().enumerate() {
                next[c as usize] = labels[v];
            }
            level_constraint = Some(next);
        }
        hierarchy.push(coarse, mapping);
        if coarse_n * 100 > n * 95 {
            break;
        }
    }
    hierarchy
}

/// Coarsens `g`. With `constraint`, clusters never cross its blocks, so
/// none of its cut edges is contracted.
pub fn coarsen<'g>(
    g: &'g Graph,
    cfg: &PartitionConfig,
    constraint: Option<&[BlockId]>,
) -> Hierarchy<'g> {
    coarsen_seeded(g, cfg, constraint, cfg.seed)
}

fn coarsen_seeded<'g>(
    g: &'g Graph,
    cfg: &PartitionConfig,
    constraint: Option<&[BlockId]>,
    seed: u64,
) -> Hierarchy<'g> {
    let l_max = compute_lmax(g, cfg.k, cfg.epsilon);
    let threshold = coarsening_threshold(g.num_nodes(), cfg.k);
    build_hierarchy(g, threshold, constraint, |graph, level, constraint| {
        let params = LpaParams {
            max_rounds: cfg.coarsen_rounds,
            size_bound: compute_cluster_bound(l_max, cfg.cluster_factor, graph.max_node_weight()),
            ordering: cfg.ordering,
            active_nodes: cfg.active_coarsening,
            tie_breaking: cfg.tie_breaking,
            convergence_fraction: cfg.convergence_fraction,
            seed: derive_seed(seed, &[level as u64, 0]),
        };
        if !cfg.ensemble {
            return lpa::cluster(graph, &params, constraint);
        }
        let runs: Vec<Clustering> = (0..ensemble::ensemble_size(cfg.k))
            .map(|i| {
                let params = LpaParams {
                    seed: derive_seed(seed, &[level as u64, i as u64 + 1]),
                    ..params.clone()
                };
                lpa::cluster(graph, &params, constraint)
            })
            .collect();
        ensemble::overlay(graph, &runs).expect("base clusterings label the same graph")
    })
}

fn refinement_params(cfg: &PartitionConfig, seed: u64) -> LpaParams {
    LpaParams {
        max_rounds: cfg.lpa_rounds,
        size_bound: 0,
        ordering: cfg.ordering,
        active_nodes: cfg.active_refinement,
        tie_breaking: cfg.tie_breaking,
        convergence_fraction: cfg.convergence_fraction,
        seed,
    }
}

/// Balance limit used while refining `level` of a `q`-level hierarchy.
fn level_lmax(g: &Graph, cfg: &PartitionConfig, q: usize, level: usize, extra: bool) -> Weight {
    let slack = if extra {
        level_imbalance(cfg.delta, q, level)
    } else {
        0.0
    };
    compute_lmax(g, cfg.k, cfg.epsilon + slack)
}

/// Refines `coarse_p` on the coarsest level, then projects and refines level
/// by level up to the input. With `extra_imbalance`, coarse levels get the
/// additional slack from [`level_imbalance`]. A partition still overloaded on
/// the input level is rebalanced.
pub fn uncoarsen(
    h: &Hierarchy<'_>,
    coarse_p: Partition,
    cfg: &PartitionConfig,
    extra_imbalance: bool,
) -> Result<Partition> {
    uncoarsen_seeded(h, coarse_p, cfg, extra_imbalance, cfg.seed)
}

fn uncoarsen_seeded(
    h: &Hierarchy<'_>,
    coarse_p: Partition,
    cfg: &PartitionConfig,
    extra_imbalance: bool,
    seed: u64,
) -> Result<Partition> {
    let input = h.level(1);
    let q = h.num_levels();
    let mut p = coarse_p;
    for level in (1..=q).rev() {
        if level < q {
            p = graph::project(&p, h.mapping(level))?;
        }
        p = p.with_l_max(level_lmax(input, cfg, q, level, extra_imbalance));
        let params = refinement_params(cfg, derive_seed(seed, &[0x7265_6669, level as u64]));
        p = lpa::refine(h.level(level), &p, &params);
    }
    if !p.is_feasible() {
        p = lpa::rebalance(input, &p)?;
    }
    Ok(p)
}

/// Full partitioner: one multilevel cycle plus `cfg.vcycles - 1` V-cycles
/// that keep the current partition's cut edges uncontracted and start from
/// it on the coarsest level. Returns the feasible partition of minimum cut
/// (ties toward lower imbalance) and a report.
pub fn partition(g: &Graph, cfg: &PartitionConfig) -> Result<(Partition, PartitionReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let k = cfg.k;
    let l_max = compute_lmax(g, k, cfg.epsilon);
    let mut cycles = Vec::new();

    if g.num_nodes() == 0 {
        let p = Partition::new(g, Vec::new(), k, l_max)?;
        let report = PartitionReport::new(g, &p, cfg, 0, cycles, start.elapsed().as_secs_f64());
        return Ok((p, report));
    }

    let mut current: Option<Partition> = None;
    let mut best: Option<(usize, Partition, Weight, f64)> = None;
    for cycle in 1..=cfg.vcycles {
        let seed = derive_seed(cfg.seed, &[cycle as u64]);
        let extra = cycle == 1 && cfg.delta > 0.0;

        let t = Instant::now();
        let h = coarsen_seeded(g, cfg, current.as_ref().map(|p| p.labels()), seed);
        let coarsen_seconds = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let q = h.num_levels();
        let coarse_lmax = level_lmax(g, cfg, q, q, extra);
        let initial = match &current {
            None => initpart::initial_partition(
                h.coarsest(),
                k,
                coarse_lmax,
                cfg,
                derive_seed(seed, &[0x696e_6974]),
            )?,
            Some(p) => Partition::new(
                h.coarsest(),
                h.restrict_to_coarsest(p.labels()),
                k,
                coarse_lmax,
            )?,
        };
        let initial_seconds = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let p = uncoarsen_seeded(&h, initial, cfg, extra, seed)?;
        let uncoarsen_seconds = t.elapsed().as_secs_f64();

        let cut = graph::edge_cut(g, p.labels());
        let imbalance = graph::imbalance(p.block_weights(), g.total_node_weight(), k);
        cycles.push(CycleReport {
            cycle,
            cut,
            imbalance,
            feasible: p.is_feasible(),
            levels: h.stats(),
            coarsen_seconds,
            initial_seconds,
            uncoarsen_seconds,
        });
        let better = match &best {
            None => true,
            Some((_, bp, bcut, bimb)) => {
                p.is_feasible() && (!bp.is_feasible() || cut < *bcut || (cut == *bcut && imbalance < *bimb))
            }
        };
        if better {
            best = Some((cycle, p.clone(), cut, imbalance));
        }
        current = Some(p);
    }

    let (best_cycle, p, _, _) = best.expect("at least one cycle ran");
    let report = PartitionReport::new(g, &p, cfg, best_cycle, cycles, start.elapsed().as_secs_f64());
    Ok((p, report))
}
