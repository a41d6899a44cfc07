use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clusterpart::config::DEFAULT_EPSILON;
use clusterpart::graph::metis;
use clusterpart::lpa::NodeOrdering;
use clusterpart::multilevel::compute_lmax;
use clusterpart::testkit::{generate, GenSpec};
use clusterpart::{partition, Error, Graph, Partition, PartitionConfig, PartitionReport, Weight};

#[derive(Parser)]
#[command(name = "clusterpart", version, about = "Multilevel graph partitioning by cluster contraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a METIS graph into k blocks.
    Partition(PartitionArgs),
    /// Recompute cut and balance of an existing partition file.
    Evaluate(EvaluateArgs),
    /// Write a synthetic graph in METIS format.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct PartitionArgs {
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    imbalance: f64,
    #[arg(long, default_value = "fast")]
    preset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run this many repetitions with seeds seed, seed+1, ... and keep the best.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long)]
    vcycles: Option<usize>,
    /// Combine several clusterings per coarsening level.
    #[arg(long)]
    ensemble: bool,
    /// Only revisit active nodes during coarsening.
    #[arg(long)]
    active: bool,
    #[arg(long, value_enum)]
    ordering: Option<OrderingArg>,
    /// Additional imbalance budget on coarse levels of the first cycle.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    cluster_factor: Option<u64>,
    /// Label propagation rounds during uncoarsening.
    #[arg(long)]
    lpa_iters: Option<usize>,
    /// Label propagation rounds per clustering during coarsening.
    #[arg(long)]
    coarsen_iters: Option<usize>,
    /// Write the report as JSON to this file.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Partition file; defaults to `<graph>.part.<k>`.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Degree,
    Random,
}

#[derive(Args)]
struct EvaluateArgs {
    graph: PathBuf,
    partition: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    imbalance: f64,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Path,
    Cycle,
    DisjointCliques,
    Pa,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cliques: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, default_value_t = 3)]
    deg: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct RepeatSummary {
    runs: usize,
    avg_cut: f64,
    best_cut: Weight,
    best_seed: u64,
    cuts: Vec<Weight>,
}

#[derive(Serialize)]
struct PartitionOutput<'a> {
    #[serde(flatten)]
    report: &'a PartitionReport,
    partition_file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    repeat: Option<RepeatSummary>,
}

#[derive(Serialize)]
struct Evaluation {
    num_nodes: usize,
    num_edges: usize,
    k: usize,
    epsilon: f64,
    l_max: Weight,
    cut: Weight,
    block_weights: Vec<Weight>,
    imbalance: f64,
    feasible: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Partition(args) => cmd_partition(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Generate(args) => cmd_generate(args).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn build_config(args: &PartitionArgs) -> Result<PartitionConfig, Error> {
    let mut cfg = PartitionConfig::from_preset(&args.preset, args.k)?;
    cfg.epsilon = args.imbalance;
    cfg.seed = args.seed;
    if let Some(v) = args.vcycles {
        cfg.vcycles = v;
    }
    if args.ensemble {
        cfg.ensemble = true;
    }
    if args.active {
        cfg.active_coarsening = true;
    }
    if let Some(o) = args.ordering {
        cfg.ordering = match o {
            OrderingArg::Degree => NodeOrdering::DegreeIncreasing,
            OrderingArg::Random => NodeOrdering::Random,
        };
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    if let Some(f) = args.cluster_factor {
        cfg.cluster_factor = f;
    }
    if let Some(r) = args.lpa_iters {
        cfg.lpa_rounds = r;
    }
    if let Some(r) = args.coarsen_iters {
        cfg.coarsen_rounds = r;
    }
    cfg.validate()?;
    if args.repeat == 0 {
        return Err(Error::InvalidConfig("--repeat must be at least 1".into()));
    }
    Ok(cfg)
}

fn cmd_partition(args: PartitionArgs) -> Result<ExitCode, Error> {
    let cfg = build_config(&args)?;
    let g = metis::load_metis(&args.graph)?;

    let mut best: Option<(Partition, PartitionReport)> = None;
    let mut cuts = Vec::with_capacity(args.repeat);
    for r in 0..args.repeat {
        let run_cfg = PartitionConfig {
            seed: args.seed.wrapping_add(r as u64),
            ..cfg.clone()
        };
        let (p, report) = partition(&g, &run_cfg)?;
        cuts.push(report.cut);
        let better = best.as_ref().is_none_or(|(_, b)| {
            (report.feasible, std::cmp::Reverse(report.cut)) > (b.feasible, std::cmp::Reverse(b.cut))
        });
        if better {
            best = Some((p, report));
        }
    }
    let (p, report) = best.expect("at least one repetition");

    let output = args.output.clone().unwrap_or_else(|| default_output(&args.graph, args.k));
    metis::save_partition(p.labels(), &output)?;

    let repeat = (args.repeat > 1).then(|| RepeatSummary {
        runs: cuts.len(),
        avg_cut: cuts.iter().sum::<Weight>() as f64 / cuts.len() as f64,
        best_cut: report.cut,
        best_seed: report.seed,
        cuts: cuts.clone(),
    });

    let mut stdout = io::stdout().lock();
    write!(stdout, "{}", report.render_text())?;
    if let Some(rep) = &repeat {
        writeln!(stdout, "repetitions      {} (avg cut {:.2}, best cut {})", rep.runs, rep.avg_cut, rep.best_cut)?;
    }
    writeln!(stdout, "partition file   {}", output.display())?;

    if let Some(path) = &args.json_out {
        let out = PartitionOutput {
            report: &report,
            partition_file: output.display().to_string(),
            repeat,
        };
        write_json(path, &out)?;
    }
    Ok(if report.feasible {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: no feasible partition found");
        ExitCode::from(2)
    })
}

fn default_output(graph: &Path, k: usize) -> PathBuf {
    let mut name = graph.as_os_str().to_owned();
    name.push(format!(".part.{k}"));
    PathBuf::from(name)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut file = File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value).map_err(io::Error::from)?;
    writeln!(file)?;
    Ok(())
}

/// Recomputes everything from the files, walking the edge list directly
/// rather than reusing the partitioner's metric code.
fn evaluate(g: &Graph, labels: &[clusterpart::BlockId], k: usize, epsilon: f64) -> Result<Evaluation, Error> {
    if let Some((node, &label)) = labels.iter().enumerate().find(|(_, &l)| l as usize >= k) {
        return Err(Error::LabelOutOfRange { node, label: label as u64, k });
    }
    let mut cut = 0;
    for (u, v, w) in g.edges() {
        if labels[u as usize] != labels[v as usize] {
            cut += w;
        }
    }
    let mut block_weights = vec![0; k];
    for (v, &l) in labels.iter().enumerate() {
        block_weights[l as usize] += g.node_weights()[v];
    }
    let total = g.total_node_weight();
    let max_block = block_weights.iter().copied().max().unwrap_or(0);
    let l_max = compute_lmax(g, k, epsilon);
    Ok(Evaluation {
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        k,
        epsilon,
        l_max,
        cut,
        imbalance: if total == 0 { 0.0 } else { max_block as f64 * k as f64 / total as f64 - 1.0 },
        feasible: max_block <= l_max,
        block_weights,
    })
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<ExitCode, Error> {
    if args.k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    let g = metis::load_metis(&args.graph)?;
    let labels = metis::load_partition(&args.partition, g.num_nodes())?;
    let eval = evaluate(&g, &labels, args.k, args.imbalance)?;
    println!("cut              {}", eval.cut);
    println!("imbalance        {:.6}", eval.imbalance);
    println!("block weights    {:?}", eval.block_weights);
    println!("max block weight {} (limit {})", eval.block_weights.iter().max().unwrap_or(&0), eval.l_max);
    println!("feasible         {}", eval.feasible);
    if let Some(path) = &args.json_out {
        write_json(path, &eval)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Error> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this model")))
    };
    let spec = match args.model {
        Model::Path => GenSpec::Path { n: need(args.n, "n")? },
        Model::Cycle => GenSpec::Cycle { n: need(args.n, "n")? },
        Model::DisjointCliques => GenSpec::DisjointCliques {
            count: need(args.cliques, "cliques")?,
            size: need(args.size, "size")?,
        },
        Model::Pa => GenSpec::PreferentialAttachment {
            n: need(args.n, "n")?,
            degree: args.deg,
            seed: args.seed,
        },
    };
    let g = generate(&spec)?;
    match &args.output {
        Some(path) => metis::save_metis(&g, path),
        None => metis::write_metis(&g, io::stdout().lock()),
    }
}
