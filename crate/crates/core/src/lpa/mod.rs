//! Size-constrained label propagation.
//!
//! The same engine serves two purposes. In clustering mode every node starts
//! in its own cluster and clusters may not grow beyond a size bound; the
//! result drives coarsening. In refinement mode the labels are the `k` blocks
//! of a partition, the bound is the balance limit, and nodes of overloaded
//! blocks are pushed out even when that costs cut.

mod queue;
mod rebalance;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{BlockId, Clustering, Graph, NodeId, Partition, Weight};

pub use queue::ActiveQueue;
pub use rebalance::rebalance;
pub(crate) use rebalance::rebalance_state;

/// Order in which a round visits the nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeOrdering {
    /// Fresh uniform shuffle every round.
    Random,
    /// Increasing degree, ties by node ID. Static across rounds.
    DegreeIncreasing,
}

impl FromStr for NodeOrdering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Self::Random),
            "degree" | "degree-increasing" => Ok(Self::DegreeIncreasing),
            other => Err(format!("unknown ordering '{other}' (expected degree or random)")),
        }
    }
}

impl fmt::Display for NodeOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Random => "random",
            Self::DegreeIncreasing => "degree",
        })
    }
}

/// How to choose among equally connected target blocks. In both modes a node
/// stays put when its current block ties for the strongest connection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreaking {
    Random,
    LowestBlockId,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpaParams {
    pub max_rounds: usize,
    /// Cluster size bound in clustering mode. Refinement uses the partition's
    /// own limit instead.
    pub size_bound: Weight,
    pub ordering: NodeOrdering,
    pub active_nodes: bool,
    pub tie_breaking: TieBreaking,
    /// Stop once fewer than this fraction of the nodes moved in a round.
    pub convergence_fraction: f64,
    pub seed: u64,
}

impl LpaParams {
    pub fn new(size_bound: Weight) -> Self {
        Self {
            max_rounds: 10,
            size_bound,
            ordering: NodeOrdering::DegreeIncreasing,
            active_nodes: false,
            tie_breaking: TieBreaking::Random,
            convergence_fraction: 0.05,
            seed: 0,
        }
    }
}

/// Permutation of the node IDs in the requested visiting order.
pub fn order_nodes(g: &Graph, ordering: NodeOrdering, seed: u64) -> Vec<NodeId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order_with(g, ordering, &mut rng)
}

pub(crate) fn order_with(g: &Graph, ordering: NodeOrdering, rng: &mut impl Rng) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..g.num_nodes() as NodeId).collect();
    match ordering {
        NodeOrdering::Random => order.shuffle(rng),
        NodeOrdering::DegreeIncreasing => order.sort_by_key(|&v| g.degree(v)),
    }
    order
}

/// Labels and per-label weights being mutated by a propagation run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelState {
    pub labels: Vec<BlockId>,
    pub block_weights: Vec<Weight>,
}

impl LabelState {
    pub fn singletons(g: &Graph) -> Self {
        Self {
            labels: (0..g.num_nodes() as BlockId).collect(),
            block_weights: g.node_weights().to_vec(),
        }
    }

    pub fn from_partition(p: &Partition) -> Self {
        Self {
            labels: p.labels().to_vec(),
            block_weights: p.block_weights().to_vec(),
        }
    }
}

/// One executed move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub node: NodeId,
    pub from: BlockId,
    pub to: BlockId,
    /// Connection to the target minus connection to the source block, i.e.
    /// the decrease of the cut caused by the move.
    pub gain: i64,
    pub from_overloaded: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub visited: usize,
    pub moved: usize,
    /// Adjacency entries read while evaluating visited nodes.
    pub examined_entries: u64,
    pub visited_degree_sum: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub rounds: Vec<RoundStats>,
}

impl RunSummary {
    pub fn total_moves(&self) -> usize {
        self.rounds.iter().map(|r| r.moved).sum()
    }
}

/// Hooks for instrumentation. All methods default to no-ops.
pub trait LpaObserver {
    /// `queued` holds the current-queue membership flags in active-node mode.
    fn round_started(&mut self, _round: usize, _state: &LabelState, _queued: Option<&[bool]>) {}
    /// Called right after `state` was updated by the move.
    fn node_moved(&mut self, _record: &MoveRecord, _state: &LabelState) {}
    fn round_finished(&mut self, _stats: &RoundStats, _state: &LabelState) {}
}

impl LpaObserver for () {}

struct Decision {
    target: Option<BlockId>,
    own_conn: Weight,
    target_conn: Weight,
    overloaded: bool,
    examined: u64,
}

/// The propagation engine. Holds the scratch space for connection strengths
/// so a round stays linear in the visited adjacency.
pub struct LabelPropagation<'a> {
    graph: &'a Graph,
    params: LpaParams,
    refinement: bool,
    bounds: Vec<Weight>,
    constraint: Option<&'a [BlockId]>,
    conn: Vec<Weight>,
    touched: Vec<BlockId>,
    ties: Vec<BlockId>,
    rng: ChaCha8Rng,
}

impl<'a> LabelPropagation<'a> {
    pub fn clustering(graph: &'a Graph, params: &LpaParams) -> Self {
        Self::build(graph, params, false, Vec::new())
    }

    /// Refinement over `bounds.len()` blocks, block `b` limited to `bounds[b]`.
    pub fn refinement(graph: &'a Graph, params: &LpaParams, bounds: Vec<Weight>) -> Self {
        Self::build(graph, params, true, bounds)
    }

    fn build(graph: &'a Graph, params: &LpaParams, refinement: bool, bounds: Vec<Weight>) -> Self {
        Self {
            graph,
            params: params.clone(),
            refinement,
            bounds,
            constraint: None,
            conn: Vec::new(),
            touched: Vec::new(),
            ties: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        }
    }

    /// Only lets a node join clusters inside its own block of `partition`.
    /// Every cluster then stays a subset of one block, provided the run starts
    /// from a labelling with that property (e.g. singletons).
    pub fn respecting(mut self, partition: &'a [BlockId]) -> Self {
        assert_eq!(partition.len(), self.graph.num_nodes());
        self.constraint = Some(partition);
        self
    }

    #[inline]
    fn bound(&self, b: BlockId) -> Weight {
        if self.bounds.is_empty() {
            self.params.size_bound
        } else {
            self.bounds[b as usize]
        }
    }

    fn prepare(&mut self, state: &LabelState) {
        if self.conn.len() < state.block_weights.len() {
            self.conn.resize(state.block_weights.len(), 0);
        }
    }

    fn evaluate(&mut self, v: NodeId, state: &LabelState) -> Decision {
        let g = self.graph;
        let own = state.labels[v as usize];
        let weight = g.node_weight(v);
        let group = self.constraint.map(|c| c[v as usize]);
        let mut examined = 0;
        for (u, w) in g.neighbors(v) {
            examined += 1;
            if let Some(c) = self.constraint {
                if Some(c[u as usize]) != group {
                    continue;
                }
            }
            let b = state.labels[u as usize];
            if self.conn[b as usize] == 0 {
                self.touched.push(b);
            }
            self.conn[b as usize] += w;
        }

        let own_conn = self.conn[own as usize];
        let overloaded = self.refinement && state.block_weights[own as usize] > self.bound(own);
        let mut best_conn = 0;
        self.ties.clear();
        for i in 0..self.touched.len() {
            let t = self.touched[i];
            if t == own || state.block_weights[t as usize] + weight > self.bound(t) {
                continue;
            }
            let c = self.conn[t as usize];
            if c > best_conn {
                best_conn = c;
                self.ties.clear();
                self.ties.push(t);
            } else if c == best_conn {
                self.ties.push(t);
            }
        }
        for &t in &self.touched {
            self.conn[t as usize] = 0;
        }
        self.touched.clear();

        let target = if self.ties.is_empty() || (!overloaded && best_conn < own_conn) {
            None
        } else if !overloaded && best_conn == own_conn {
            // The current block is one more tied candidate.
            match self.params.tie_breaking {
                TieBreaking::LowestBlockId => None,
                TieBreaking::Random => {
                    let pick = self.rng.gen_range(0..=self.ties.len());
                    self.ties.get(pick).copied()
                }
            }
        } else {
            Some(match self.params.tie_breaking {
                TieBreaking::LowestBlockId => *self.ties.iter().min().unwrap(),
                TieBreaking::Random if self.ties.len() == 1 => self.ties[0],
                TieBreaking::Random => self.ties[self.rng.gen_range(0..self.ties.len())],
            })
        };
        Decision {
            target,
            own_conn,
            target_conn: best_conn,
            overloaded,
            examined,
        }
    }

    /// The block `v` would move to under the current state, if any.
    pub fn best_move(&mut self, v: NodeId, state: &LabelState) -> Option<BlockId> {
        self.prepare(state);
        self.evaluate(v, state).target
    }

    fn visit<O: LpaObserver>(
        &mut self,
        v: NodeId,
        state: &mut LabelState,
        stats: &mut RoundStats,
        observer: &mut O,
    ) -> bool {
        stats.visited += 1;
        stats.visited_degree_sum += self.graph.degree(v) as u64;
        let decision = self.evaluate(v, state);
        stats.examined_entries += decision.examined;
        let Some(to) = decision.target else {
            return false;
        };
        let from = state.labels[v as usize];
        let w = self.graph.node_weight(v);
        state.block_weights[from as usize] -= w;
        state.block_weights[to as usize] += w;
        state.labels[v as usize] = to;
        stats.moved += 1;
        let record = MoveRecord {
            node: v,
            from,
            to,
            gain: decision.target_conn as i64 - decision.own_conn as i64,
            from_overloaded: decision.overloaded,
        };
        observer.node_moved(&record, state);
        true
    }

    /// Visits every node of `order` once.
    pub fn run_round_full<O: LpaObserver>(
        &mut self,
        state: &mut LabelState,
        order: &[NodeId],
        round: usize,
        observer: &mut O,
    ) -> RoundStats {
        self.prepare(state);
        observer.round_started(round, state, None);
        let mut stats = RoundStats {
            round,
            ..Default::default()
        };
        for &v in order {
            self.visit(v, state, &mut stats, observer);
        }
        observer.round_finished(&stats, state);
        stats
    }

    /// Visits the nodes of the current queue in FIFO order. Neighbors of
    /// every moved node are queued for the next round; the queues swap roles
    /// at the end.
    pub fn run_round_active<O: LpaObserver>(
        &mut self,
        state: &mut LabelState,
        queue: &mut ActiveQueue,
        round: usize,
        observer: &mut O,
    ) -> RoundStats {
        self.prepare(state);
        observer.round_started(round, state, Some(queue.in_current()));
        let mut stats = RoundStats {
            round,
            ..Default::default()
        };
        while let Some(v) = queue.pop_current() {
            if self.visit(v, state, &mut stats, observer) {
                queue.activate_neighbors(self.graph, v);
            }
        }
        queue.swap();
        observer.round_finished(&stats, state);
        stats
    }

    /// Runs rounds until `max_rounds` is reached, too few nodes moved, or (in
    /// active-node mode) no node is active.
    pub fn run<O: LpaObserver>(&mut self, state: &mut LabelState, observer: &mut O) -> RunSummary {
        let mut summary = RunSummary::default();
        let n = self.graph.num_nodes();
        if self.params.max_rounds == 0 || n == 0 {
            return summary;
        }
        let threshold = self.params.convergence_fraction * n as f64;
        let converged = |s: &RoundStats| s.moved == 0 || (s.moved as f64) < threshold;
        let static_order = match self.params.ordering {
            NodeOrdering::DegreeIncreasing => {
                Some(order_with(self.graph, NodeOrdering::DegreeIncreasing, &mut self.rng))
            }
            NodeOrdering::Random => None,
        };

        if self.params.active_nodes {
            let mut queue = ActiveQueue::new(n);
            let first = match &static_order {
                Some(order) => order.clone(),
                None => order_with(self.graph, NodeOrdering::Random, &mut self.rng),
            };
            queue.seed(&first);
            for round in 1..=self.params.max_rounds {
                if queue.is_current_empty() {
                    break;
                }
                let stats = self.run_round_active(state, &mut queue, round, observer);
                summary.rounds.push(stats);
                if converged(&stats) {
                    break;
                }
            }
        } else {
            let mut fresh;
            for round in 1..=self.params.max_rounds {
                let order = match &static_order {
                    Some(order) => order,
                    None => {
                        fresh = order_with(self.graph, NodeOrdering::Random, &mut self.rng);
                        &fresh
                    }
                };
                let stats = self.run_round_full(state, order, round, observer);
                summary.rounds.push(stats);
                if converged(&stats) {
                    break;
                }
            }
        }
        summary
    }
}

/// Size-constrained clustering from singletons. With `constraint`, every
/// resulting cluster lies inside one block of that partition.
pub fn cluster(g: &Graph, params: &LpaParams, constraint: Option<&[BlockId]>) -> Clustering {
    cluster_observed(g, params, constraint, &mut ()).0
}

pub fn cluster_observed<O: LpaObserver>(
    g: &Graph,
    params: &LpaParams,
    constraint: Option<&[BlockId]>,
    observer: &mut O,
) -> (Clustering, RunSummary) {
    let mut state = LabelState::singletons(g);
    let mut engine = LabelPropagation::clustering(g, params);
    if let Some(c) = constraint {
        engine = engine.respecting(c);
    }
    let summary = engine.run(&mut state, observer);
    (
        Clustering::from_parts(state.labels, state.block_weights),
        summary,
    )
}

/// Label propagation as local search on a k-way partition, bounded by the
/// partition's `l_max` (`params.size_bound` is ignored).
pub fn refine(g: &Graph, p: &Partition, params: &LpaParams) -> Partition {
    refine_observed(g, p, params, &mut ()).0
}

pub fn refine_observed<O: LpaObserver>(
    g: &Graph,
    p: &Partition,
    params: &LpaParams,
    observer: &mut O,
) -> (Partition, RunSummary) {
    let mut state = LabelState::from_partition(p);
    let summary = refine_state(g, &mut state, vec![p.l_max(); p.k()], params, observer);
    (
        Partition::from_parts(state.labels, state.block_weights, p.k(), p.l_max()),
        summary,
    )
}

pub(crate) fn refine_state<O: LpaObserver>(
    g: &Graph,
    state: &mut LabelState,
    bounds: Vec<Weight>,
    params: &LpaParams,
    observer: &mut O,
) -> RunSummary {
    LabelPropagation::refinement(g, params, bounds).run(state, observer)
}
