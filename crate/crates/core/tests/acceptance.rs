//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use clusterpart::ensemble::overlay_labels;
use clusterpart::graph::{self, contract, Clustering};
use clusterpart::lpa::{
    self, LabelState, LpaObserver, LpaParams, MoveRecord, NodeOrdering, RoundStats, TieBreaking,
};
use clusterpart::multilevel::{coarsen, compute_cluster_bound, compute_lmax};
use clusterpart::testkit::{brute_force_min_cut, generate, GenSpec};
use clusterpart::{partition, BlockId, Graph, NodeId, Partition, PartitionConfig, Weight};
use common::{random_connected, random_labels, reference_cut};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pa(n: usize, degree: usize, seed: u64) -> Graph {
    generate(&GenSpec::PreferentialAttachment { n, degree, seed }).unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, || format!("took {:.1}s, limit {}s", spent.as_secs_f64(), limit.as_secs()))
}

/// Contraction then projection preserves cut and block weights exactly.
fn contraction_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for t in 0..200u64 {
        let n = rng.gen_range(1..=500);
        let g = random_connected(t, n, rng.gen_range(0..=2 * n), 5, 7);
        let clustering = Clustering::from_labels(&g, random_labels(t + 1000, n, rng.gen_range(1..=n))).unwrap();
        let (coarse, mapping) = contract(&g, &clustering);
        let k = rng.gen_range(2..=8);
        let coarse_labels = random_labels(t + 2000, coarse.num_nodes(), k);
        let fine: Vec<BlockId> = mapping.iter().map(|&c| coarse_labels[c as usize]).collect();
        ensure(reference_cut(&coarse, &coarse_labels) == reference_cut(&g, &fine), || format!("cut mismatch in triple {t}"))?;
        ensure(
            graph::block_weights(&coarse, &coarse_labels, k) == graph::block_weights(&g, &fine, k),
            || format!("block weight mismatch in triple {t}"),
        )?;
        let projected = graph::project(&Partition::new(&coarse, coarse_labels, k, Weight::MAX).unwrap(), &mapping).unwrap();
        ensure(projected.labels() == fine.as_slice(), || format!("projection mismatch in triple {t}"))?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!("200 triples exact in {:.2}s", start.elapsed().as_secs_f64()))
}

const PRESET_CYCLE: &[&str] = &[
    "fast", "fastv", "fast-b", "fast-e", "fast-a", "fast-r", "fastv-b-e-a", "eco-equivalent-off",
];

/// Every returned partition respects L_max.
fn balance_guarantee() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for run in 0..100u64 {
        let n = rng.gen_range(1000..=10000);
        let g = pa(n, rng.gen_range(2..=5), run);
        let k = [2, 4, 8, 16][run as usize % 4];
        let preset = PRESET_CYCLE[run as usize % PRESET_CYCLE.len()];
        let mut cfg = PartitionConfig::from_preset(preset, k).unwrap();
        cfg.seed = run;
        let (p, report) = partition(&g, &cfg).map_err(|e| format!("run {run}: {e}"))?;
        let l_max = compute_lmax(&g, k, 0.03);
        let heaviest = *graph::block_weights(&g, p.labels(), k).iter().max().unwrap();
        ensure(heaviest <= l_max, || format!("run {run} ({preset}, n={n}, k={k}): block {heaviest} > {l_max}"))?;
        ensure(report.feasible, || format!("run {run}: report says infeasible"))?;
    }
    Ok("100 runs, 0 violations".into())
}

/// Near-optimal on tiny graphs, never below the exact optimum.
fn small_graph_quality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut close = 0;
    for t in 0..50u64 {
        let n = rng.gen_range(2..=10);
        let g = random_connected(100 + t, n, rng.gen_range(0..=n), 1, 1);
        let (_, opt) = brute_force_min_cut(&g, 2, 0.0).map_err(|e| e.to_string())?;
        let mut best = Weight::MAX;
        for seed in 0..10 {
            let mut cfg = PartitionConfig::new(2);
            cfg.epsilon = 0.0;
            cfg.seed = seed;
            let (p, report) = partition(&g, &cfg).map_err(|e| e.to_string())?;
            if p.is_feasible() {
                best = best.min(report.cut);
            }
        }
        ensure(best >= opt, || format!("instance {t}: cut {best} below optimum {opt}"))?;
        if best <= opt + 1 {
            close += 1;
        }
    }
    within(Duration::from_secs(30), start)?;
    ensure(close >= 45, || format!("{close}/50 within optimum + 1"))?;
    Ok(format!("{close}/50 within optimum + 1 in {:.2}s", start.elapsed().as_secs_f64()))
}

struct BoundAudit {
    bound: Weight,
    worst: Weight,
}

impl LpaObserver for BoundAudit {
    fn round_started(&mut self, _: usize, state: &LabelState, _: Option<&[bool]>) {
        self.worst = self.worst.max(state.block_weights.iter().copied().max().unwrap_or(0));
    }
    fn node_moved(&mut self, rec: &MoveRecord, state: &LabelState) {
        self.worst = self.worst.max(state.block_weights[rec.to as usize]);
    }
}

/// Cluster weights never exceed U during size-constrained label propagation.
fn size_constraint_safety() -> Outcome {
    let mut moves = 0;
    for t in 0..20u64 {
        let g = if t % 2 == 0 { pa(2000 + 300 * t as usize, 3, t) } else { random_connected(t, 1500, 4000, 6, 3) };
        let k = [2, 8, 32][t as usize % 3];
        let bound = compute_cluster_bound(compute_lmax(&g, k, 0.03), 18, g.max_node_weight());
        let mut params = LpaParams::new(bound);
        params.seed = t;
        params.active_nodes = t % 4 == 1;
        params.ordering = if t % 3 == 0 { NodeOrdering::Random } else { NodeOrdering::DegreeIncreasing };
        let mut audit = BoundAudit { bound, worst: 0 };
        let (c, summary) = lpa::cluster_observed(&g, &params, None, &mut audit);
        moves += summary.total_moves();
        ensure(audit.worst <= audit.bound, || format!("instance {t}: cluster weight {} > U={}", audit.worst, audit.bound))?;
        ensure(c.max_cluster_weight() <= bound, || format!("instance {t}: final cluster too heavy"))?;
    }
    Ok(format!("20 instances, {moves} moves, bound never exceeded"))
}

struct CutTrace {
    cut: i64,
    trace: Vec<i64>,
    bad_gain: Option<MoveRecord>,
}

impl LpaObserver for CutTrace {
    fn node_moved(&mut self, rec: &MoveRecord, _: &LabelState) {
        if !rec.from_overloaded && rec.gain < 0 && self.bad_gain.is_none() {
            self.bad_gain = Some(*rec);
        }
        self.cut -= rec.gain;
        self.trace.push(self.cut);
    }
}

/// Refinement moves of non-overloaded nodes never increase the cut.
fn monotone_refinement() -> Outcome {
    let mut total_moves = 0;
    for t in 0..30u64 {
        let g = if t % 2 == 0 { pa(3000, 3, 50 + t) } else { random_connected(t, 800, 1600, 3, 5) };
        let k = [2, 4, 8][t as usize % 3];
        let labels = random_labels(t, g.num_nodes(), k);
        let l_max = *graph::block_weights(&g, &labels, k).iter().max().unwrap();
        let p = Partition::new(&g, labels, k, l_max).unwrap();
        let mut params = LpaParams::new(0);
        params.tie_breaking = TieBreaking::LowestBlockId;
        params.active_nodes = t % 3 == 0;
        params.seed = t;
        let start_cut = reference_cut(&g, p.labels()) as i64;
        let mut obs = CutTrace { cut: start_cut, trace: vec![start_cut], bad_gain: None };
        let (out, _) = lpa::refine_observed(&g, &p, &params, &mut obs);
        if let Some(rec) = obs.bad_gain {
            return Err(format!("instance {t}: move {rec:?} has negative gain"));
        }
        ensure(obs.trace.windows(2).all(|w| w[1] <= w[0]), || format!("instance {t}: cut trace increased"))?;
        ensure(obs.cut == reference_cut(&g, out.labels()) as i64, || format!("instance {t}: gains disagree with final cut"))?;
        ensure(out.is_feasible(), || format!("instance {t}: refinement broke feasibility"))?;
        total_moves += obs.trace.len() - 1;
    }
    Ok(format!("30 runs, {total_moves} moves, all gains >= 0, traces non-increasing"))
}

/// Overlay clusters are exactly the label-tuple classes.
fn overlay_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for t in 0..100u64 {
        let n = rng.gen_range(1..=200);
        let g = random_connected(t, n, n, 4, 1);
        let bound = rng.gen_range(g.max_node_weight()..=g.max_node_weight() * 6);
        let count = rng.gen_range(1..=5);
        let runs: Vec<Clustering> = (0..count)
            .map(|i| {
                let mut params = LpaParams::new(bound);
                params.seed = t * 10 + i;
                params.ordering = NodeOrdering::Random;
                lpa::cluster(&g, &params, None)
            })
            .collect();
        let refs: Vec<&[BlockId]> = runs.iter().map(|c| c.labels()).collect();
        let out = overlay_labels(&refs).map_err(|e| e.to_string())?;
        for u in 0..n {
            for v in u + 1..n {
                let together = refs.iter().all(|r| r[u] == r[v]);
                ensure((out[u] == out[v]) == together, || format!("tuple {t}: nodes {u},{v} grouped wrongly"))?;
            }
        }
        let overlay = Clustering::from_labels(&g, out).unwrap();
        let most = runs.iter().map(Clustering::num_clusters).max().unwrap();
        ensure(overlay.num_clusters() >= most, || format!("tuple {t}: fewer clusters than an input"))?;
        ensure(overlay.max_cluster_weight() <= bound, || format!("tuple {t}: overlay cluster exceeds U"))?;
    }
    Ok("100 tuples match pairwise brute force".into())
}

struct ActiveAudit<'g> {
    graph: &'g Graph,
    rng: ChaCha8Rng,
    sampled: usize,
    violations: usize,
    accounting: Vec<RoundStats>,
}

/// Independent rule: with no size limit and ties to the current block, `v`
/// moves only if some other block is strictly better connected.
fn would_move(g: &Graph, v: NodeId, labels: &[BlockId]) -> bool {
    let own = labels[v as usize];
    let mut conn: HashMap<BlockId, Weight> = HashMap::new();
    for (u, w) in g.neighbors(v) {
        *conn.entry(labels[u as usize]).or_default() += w;
    }
    let own_conn = conn.get(&own).copied().unwrap_or(0);
    conn.iter().any(|(&b, &c)| b != own && c > own_conn)
}

impl LpaObserver for ActiveAudit<'_> {
    fn round_started(&mut self, round: usize, state: &LabelState, queued: Option<&[bool]>) {
        let Some(queued) = queued else { return };
        if round == 1 {
            return;
        }
        for _ in 0..200 {
            let v = self.rng.gen_range(0..self.graph.num_nodes());
            if queued[v] {
                continue;
            }
            self.sampled += 1;
            if would_move(self.graph, v as NodeId, &state.labels) {
                self.violations += 1;
            }
        }
    }
    fn round_finished(&mut self, stats: &RoundStats, _: &LabelState) {
        self.accounting.push(*stats);
    }
}

/// Active-node rounds do work linear in the popped adjacency, and skipped
/// nodes would not have moved.
fn active_nodes_accounting() -> Outcome {
    let mut sampled = 0;
    let mut rounds = 0;
    for t in 0..20u64 {
        let g = if t % 2 == 0 { pa(4000, 3, 70 + t) } else { random_connected(t, 3000, 6000, 1, 4) };
        let mut params = LpaParams::new(Weight::MAX);
        params.active_nodes = true;
        params.tie_breaking = TieBreaking::LowestBlockId;
        params.convergence_fraction = 0.0;
        params.max_rounds = 20;
        params.seed = t;
        let mut audit = ActiveAudit { graph: &g, rng: ChaCha8Rng::seed_from_u64(t), sampled: 0, violations: 0, accounting: Vec::new() };
        lpa::cluster_observed(&g, &params, None, &mut audit);
        for s in &audit.accounting {
            ensure(s.examined_entries == s.visited_degree_sum, || {
                format!("instance {t} round {}: examined {} != degree sum {}", s.round, s.examined_entries, s.visited_degree_sum)
            })?;
        }
        ensure(audit.violations == 0, || format!("instance {t}: {} inactive nodes would move", audit.violations))?;
        sampled += audit.sampled;
        rounds += audit.accounting.len();
    }
    ensure(sampled > 0, || "audit sampled no inactive nodes".into())?;
    Ok(format!("20 runs, {rounds} rounds balanced, {sampled} inactive samples, 0 violations"))
}

/// Later V-cycles never return a worse cut.
fn vcycle_monotonicity() -> Outcome {
    let mut improved = 0;
    for t in 0..30u64 {
        let g = pa(3000 + 200 * t as usize, 3, 200 + t);
        let k = [2, 4, 8][t as usize % 3];
        let mut cfg = PartitionConfig::from_preset(if t % 2 == 0 { "fastv" } else { "fastv-b" }, k).unwrap();
        cfg.seed = t;
        let (_, report) = partition(&g, &cfg).map_err(|e| e.to_string())?;
        let cuts: Vec<Weight> = report.cycles.iter().map(|c| c.cut).collect();
        ensure(cuts.len() == 3, || format!("run {t}: {} cycles", cuts.len()))?;
        ensure(cuts.windows(2).all(|w| w[1] <= w[0]), || format!("run {t}: cycle cuts {cuts:?}"))?;
        ensure(report.cut <= cuts[0], || format!("run {t}: returned cut above first cycle"))?;
        if cuts[2] < cuts[0] {
            improved += 1;
        }
    }
    Ok(format!("30 runs non-increasing, {improved} strictly improved"))
}

/// Degree ordering beats random ordering on most scale-free graphs.
fn ordering_direction() -> Outcome {
    let mut wins = 0;
    let mut ratio_sum = 0.0;
    let mut coarse_weight = [0u64; 2];
    for t in 0..20u64 {
        let g = pa(20000, 3 + (t % 3) as usize, 300 + t);
        // The claimed mechanism: fewer edges between clusters on the first level.
        for (i, ordering) in [NodeOrdering::DegreeIncreasing, NodeOrdering::Random].into_iter().enumerate() {
            let cfg = PartitionConfig { ordering, seed: t, ..PartitionConfig::new(8) };
            let h = coarsen(&g, &cfg, None);
            coarse_weight[i] += h.level(h.num_levels().min(2)).total_edge_weight();
        }
        let mean = |ordering: NodeOrdering| -> Result<f64, String> {
            let mut sum = 0;
            for seed in 0..10 {
                let mut cfg = PartitionConfig::new(8);
                cfg.ordering = ordering;
                cfg.seed = seed;
                sum += partition(&g, &cfg).map_err(|e| e.to_string())?.1.cut;
            }
            Ok(sum as f64 / 10.0)
        };
        let degree = mean(NodeOrdering::DegreeIncreasing)?;
        let random = mean(NodeOrdering::Random)?;
        ratio_sum += degree / random;
        if degree <= random {
            wins += 1;
        }
    }
    let msg = format!(
        "degree ordering wins on {wins}/20 graphs (need 14), mean cut ratio {:.3}, first-level coarse edge weight ratio {:.3}",
        ratio_sum / 20.0,
        coarse_weight[0] as f64 / coarse_weight[1] as f64
    );
    ensure(wins >= 14, || msg.clone())?;
    Ok(msg)
}

/// One coarsening level collapses triangles and shrinks scale-free graphs.
fn coarsening_effectiveness() -> Outcome {
    let triangles = generate(&GenSpec::DisjointCliques { count: 200, size: 3 }).unwrap();
    let mut cfg = PartitionConfig::new(2);
    cfg.tie_breaking = TieBreaking::LowestBlockId;
    let h = coarsen(&triangles, &cfg, None);
    ensure(h.num_levels() >= 2, || "triangles were not coarsened".into())?;
    let (n2, m2) = (h.level(2).num_nodes(), h.level(2).num_edges());
    ensure((n2, m2) == (200, 0), || format!("triangles coarsened to {n2} nodes / {m2} edges"))?;
    let random_ties = coarsen(&triangles, &PartitionConfig::new(2), None).level(2).num_nodes();

    let g = pa(50000, 3, 7);
    let h = coarsen(&g, &PartitionConfig::new(8), None);
    ensure(h.num_levels() >= 2, || "scale-free graph was not coarsened".into())?;
    let factor = g.num_nodes() as f64 / h.level(2).num_nodes() as f64;
    ensure(factor >= 5.0, || format!("first level reduction {factor:.2}x"))?;
    Ok(format!(
        "triangles 600/600 -> {n2}/{m2} ({random_ties} nodes with random ties); PA 50000 -> {} nodes ({factor:.1}x)",
        h.level(2).num_nodes()
    ))
}

/// A graph with about a million edges partitions within a minute.
fn scalability() -> Outcome {
    let g = pa(200_000, 5, 11);
    let start = Instant::now();
    let (p, report) = partition(&g, &PartitionConfig::new(16)).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(p.is_feasible(), || "infeasible result".into())?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("n={} m={} k=16 cut={} in {secs:.2}s", g.num_nodes(), g.num_edges(), report.cut))
}

/// The CLI is reproducible for a fixed seed.
fn cli_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let graph = dir.path().join("g.graph");
    let bin = env!("CARGO_BIN_EXE_clusterpart");
    let run = |args: &[&std::ffi::OsStr]| -> Result<(), String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())
    };
    run(&["generate".as_ref(), "--model".as_ref(), "pa".as_ref(), "--n".as_ref(), "20000".as_ref(), "--seed".as_ref(), "5".as_ref(), "--output".as_ref(), graph.as_os_str()])?;
    let mut files = Vec::new();
    for preset in ["fast", "fastv-b-e-a"] {
        let mut outputs = Vec::new();
        for i in 0..2 {
            let part = dir.path().join(format!("{preset}.{i}.part"));
            run(&["partition".as_ref(), graph.as_os_str(), "--k".as_ref(), "8".as_ref(), "--preset".as_ref(), preset.as_ref(), "--seed".as_ref(), "17".as_ref(), "--output".as_ref(), part.as_os_str()])?;
            outputs.push(std::fs::read(&part).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || format!("preset {preset}: partition files differ"))?;
        files.push(outputs.swap_remove(0));
    }
    Ok(format!("2 presets x 2 runs byte-identical ({} bytes each)", files[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("contraction-equivalence", contraction_equivalence),
        ("balance-guarantee", balance_guarantee),
        ("small-graph-quality", small_graph_quality),
        ("size-constraint-safety", size_constraint_safety),
        ("monotone-refinement", monotone_refinement),
        ("overlay-correctness", overlay_correctness),
        ("active-nodes-accounting", active_nodes_accounting),
        ("vcycle-monotonicity", vcycle_monotonicity),
        ("ordering-direction", ordering_direction),
        ("coarsening-effectiveness", coarsening_effectiveness),
        ("scalability", scalability),
        ("cli-determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
