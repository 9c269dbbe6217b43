use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sgclust::io::{
    load_edge_list_file, write_assignment, write_canonical, write_clustering, ClusteringHeader, EdgeListFormat,
};
use sgclust::islands::run_islands_with_progress;
use sgclust::memetic::ProgressEvent;
use sgclust::metrics::{summarize, RepeatReport, RunMetrics};
use sgclust::multilevel::scml;
use sgclust::{
    brute_force_optimal, gaec, generate_planted, z_value, Clustering, EvoConfig,
    IslandConfig, MultilevelConfig, PlantedConfig, SignedGraph,
};

#[derive(Parser)]
#[command(name = "sgclust", version, about = "Signed graph clustering by edge-cut minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a signed graph and report edge-cut metrics as JSON.
    Cluster(ClusterArgs),
    /// Generate a planted-partition signed graph.
    GenPlanted(PlantedArgs),
    /// Rewrite an edge list in canonical form (normalized, 0-based ids).
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Scml,
    Evo,
    Gaec,
    Brute,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Scml => "scml",
            Algo::Evo => "evo",
            Algo::Gaec => "gaec",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Edge list to read.
    #[arg(long)]
    input: PathBuf,
    /// Edge list dialect: snap, konect or metis-like.
    #[arg(long, default_value = "snap")]
    format: EdgeListFormat,
    /// Keep summed weights instead of quantizing them to +1/-1.
    #[arg(long)]
    raw_weights: bool,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "scml")]
    algo: Algo,
    /// Clustering output file (best run when repeating).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Metrics JSON destination; stdout when omitted.
    #[arg(long)]
    metrics: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of runs, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    repeat: u64,
    /// Run repetitions concurrently instead of one after another.
    #[arg(long)]
    repeat_parallel: bool,
    /// Wall-clock budget of the evolutionary algorithm, in seconds.
    #[arg(long, default_value_t = 10.0)]
    time_limit: f64,
    /// Number of islands (defaults to the number of logical cores).
    #[arg(long)]
    islands: Option<usize>,
    /// Fraction of the budget that sizes the population.
    #[arg(long, default_value_t = 0.1)]
    beta: f64,
    /// Fixed population size, overriding the time-based choice.
    #[arg(long)]
    population: Option<usize>,
    /// Stop each island after this many evolutionary rounds.
    #[arg(long)]
    max_rounds: Option<u64>,
    #[arg(long, default_value_t = 10)]
    lp_rounds: usize,
    #[arg(long, default_value_t = 15)]
    fm_stall_limit: usize,
}

#[derive(Args)]
struct PlantedArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    size: usize,
    #[arg(long)]
    p_in: f64,
    #[arg(long)]
    p_out: f64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list path; the ground truth goes to `<output>.truth`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    output: PathBuf,
}

struct Loaded {
    graph: SignedGraph,
    original_ids: Vec<u64>,
}

fn load(args: &InputArgs) -> anyhow::Result<Loaded> {
    let list = load_edge_list_file(&args.input, args.format)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let graph = list.normalize(args.raw_weights);
    log::info!(
        "{}: n={} m+={} m-={}",
        args.input.display(),
        graph.n(),
        graph.m_plus(),
        graph.m_minus()
    );
    Ok(Loaded {
        graph,
        original_ids: list.original_ids,
    })
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn print_progress(ev: ProgressEvent) {
    match ev.island {
        Some(i) => eprintln!("island={i} t={:.3} best_cut={}", ev.seconds, ev.best_cut),
        None => eprintln!("t={:.3} best_cut={}", ev.seconds, ev.best_cut),
    }
}

fn solve(g: &SignedGraph, args: &ClusterArgs, seed: u64) -> anyhow::Result<Clustering> {
    let ml = MultilevelConfig {
        lp_rounds: args.lp_rounds,
        fm_stall_limit: args.fm_stall_limit,
    };
    Ok(match args.algo {
        Algo::Scml => scml(g, &ml, seed),
        Algo::Gaec => gaec(g),
        Algo::Brute => brute_force_optimal(g)?.0,
        Algo::Evo => {
            if !(args.time_limit.is_finite() && args.time_limit >= 0.0) {
                bail!("--time-limit must be a non-negative number of seconds");
            }
            let islands = args
                .islands
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
            let cfg = IslandConfig {
                islands,
                evo: EvoConfig {
                    time_limit: Duration::from_secs_f64(args.time_limit),
                    beta: args.beta,
                    population: args.population,
                    max_rounds: args.max_rounds,
                    target_cut: None,
                    seed,
                    multilevel: ml,
                },
            };
            let out = run_islands_with_progress(g, &cfg, Some(&print_progress))?;
            for (island, message) in &out.failures {
                log::warn!("island {island} failed: {message}");
            }
            out.best
        }
    })
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cluster(args: &ClusterArgs) -> anyhow::Result<()> {
    if args.repeat == 0 {
        bail!("--repeat must be at least 1");
    }
    let loaded = load(&args.input)?;
    let g = &loaded.graph;
    let run = |i: u64| -> anyhow::Result<(Clustering, f64, u64)> {
        let seed = args.seed.wrapping_add(i);
        let t = Instant::now();
        let c = solve(g, args, seed)?;
        Ok((c, t.elapsed().as_secs_f64(), seed))
    };
    let results: Vec<(Clustering, f64, u64)> = if args.repeat_parallel {
        (0..args.repeat).into_par_iter().map(run).collect::<anyhow::Result<_>>()?
    } else {
        (0..args.repeat).map(run).collect::<anyhow::Result<_>>()?
    };

    let z = |c: &Clustering| z_value(g, c.cut()).ok();
    if let Some(path) = &args.output {
        let (best, secs, seed) = results
            .iter()
            .min_by(|a, b| a.0.cut().total_cmp(&b.0.cut()))
            .expect("at least one run");
        let header = ClusteringHeader {
            edge_cut: best.cut(),
            z_value: z(best),
            k: best.num_clusters(),
            time_seconds: *secs,
            seed: *seed,
        };
        let mut out = create(path)?;
        write_clustering(&mut out, best, &loaded.original_ids, &header)?;
        out.flush()?;
    }

    if g.sum_neg() == 0.0 {
        bail!("z_value is undefined: the graph has no negative edges");
    }
    let instance = instance_name(&args.input.input);
    let records: Vec<RunMetrics> = results
        .iter()
        .map(|(c, secs, seed)| RunMetrics {
            instance: instance.clone(),
            algorithm: args.algo.name().to_string(),
            seed: *seed,
            edge_cut: c.cut(),
            z_value: z(c).expect("graph has negative edges"),
            k: c.num_clusters(),
            time_seconds: *secs,
        })
        .collect();
    let json = if records.len() == 1 {
        serde_json::to_string_pretty(&records[0])?
    } else {
        let summary = summarize(&records);
        serde_json::to_string_pretty(&RepeatReport { runs: records, summary })?
    };
    match &args.metrics {
        Some(path) => {
            let mut out = create(path)?;
            writeln!(out, "{json}")?;
            out.flush()?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn gen_planted(args: &PlantedArgs) -> anyhow::Result<()> {
    let inst = generate_planted(&PlantedConfig {
        k: args.k,
        size: args.size,
        p_in: args.p_in,
        p_out: args.p_out,
        noise: args.noise,
        seed: args.seed,
    })?;
    let mut out = create(&args.output)?;
    write_canonical(&mut out, &inst.graph)?;
    out.flush()?;

    let mut truth_path = args.output.clone().into_os_string();
    truth_path.push(".truth");
    let ids: Vec<u64> = (0..inst.truth.len() as u64).collect();
    let mut out = create(Path::new(&truth_path))?;
    write_assignment(&mut out, &inst.truth, &ids)?;
    out.flush()?;
    Ok(())
}

fn convert(args: &ConvertArgs) -> anyhow::Result<()> {
    let loaded = load(&args.input)?;
    let mut out = create(&args.output)?;
    write_canonical(&mut out, &loaded.graph)?;
    out.flush()?;
    Ok(())
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Cluster(args) => cluster(&args),
        Command::GenPlanted(args) => gen_planted(&args),
        Command::Convert(args) => convert(&args),
    }
}
