use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hgpart::coarsening::CoarseningConfig;
use hgpart::evaluation::write_eval_log;
use hgpart::harness::stats::{simpson_auc, wilcoxon, WilcoxonMode};
use hgpart::harness::sweep::{parse_threshold_grid, sweep, write_sweep_rows, write_sweep_summary, Algorithm, SweepSpec};
use hgpart::harness::synth::{gen_synthetic, SyntheticSpec};
use hgpart::hypergraph::io::{read_hmetis, write_hmetis_file, write_partition_file};
use hgpart::landscape::{export_landscape, fdc_fit, sample_local_optima};
use hgpart::memetic::EaConfig;
use hgpart::pool::PoolConfig;
use hgpart::rng::seeded;
use hgpart::{fm::FmConfig, partition, DriverConfig, InitialPartitioner};

#[derive(Parser)]
#[command(name = "hgpart", version, about = "n-level hypergraph bipartitioning toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bipartition an hMetis hypergraph.
    Partition(PartitionArgs),
    /// Run the pipeline over a grid of coarsening thresholds.
    Sweep(SweepArgs),
    /// Sample FM local optima of the coarsened hypergraph.
    Landscape(LandscapeArgs),
    /// Summary statistics over a comma-separated table.
    Stats {
        #[command(subcommand)]
        command: StatsCommand,
    },
    /// Generate a hypergraph with a planted bipartition.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Ip {
    Pool,
    Ea,
}

#[derive(Args)]
struct EaArgs {
    /// Initial partitioner.
    #[arg(long, value_enum, default_value = "ea")]
    ip: Ip,
    /// Initial-partitioning evaluations.
    #[arg(long, default_value_t = 1000)]
    evals: usize,
    #[arg(long, default_value_t = 100)]
    mu: usize,
    #[arg(long, default_value_t = 1000)]
    lambda: usize,
    /// Seeding multiplier: the EA starts from mu*s pool evaluations (0: random).
    #[arg(long = "s", default_value_t = 0)]
    seed_multiplier: usize,
    /// Pool repetitions per member.
    #[arg(long, default_value_t = 20)]
    pool_reps: usize,
}

impl EaArgs {
    fn ea(&self, epsilon: f64) -> EaConfig {
        EaConfig {
            mu: self.mu,
            lambda: self.lambda,
            seed_multiplier: self.seed_multiplier,
            epsilon,
            ..EaConfig::default()
        }
    }

    fn pool(&self, epsilon: f64) -> PoolConfig {
        PoolConfig {
            repetitions: self.pool_reps,
            epsilon,
            ..PoolConfig::default()
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    /// hMetis hypergraph file.
    input: PathBuf,
    #[arg(short, long, default_value_t = 2)]
    k: u32,
    #[arg(short, long, default_value_t = 0.1)]
    epsilon: f64,
    /// Coarsening stops at threshold*k vertices.
    #[arg(short, long, default_value_t = 150)]
    threshold: usize,
    /// Enable the adaptive coarsening stop.
    #[arg(long)]
    adaptive: bool,
    #[command(flatten)]
    ea: EaArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Uncontractions between refinement rounds.
    #[arg(long, default_value_t = 32)]
    refine_batch: usize,
    /// Project the coarse partition without refinement.
    #[arg(long)]
    no_refine: bool,
    /// Partition file (one block id per line).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Per-evaluation log of the initial partitioner.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Print the report as a table row instead of key=value lines.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SweepArgs {
    input: PathBuf,
    /// Threshold grid, e.g. `250:5000:250,10000:50000:5000`.
    #[arg(long, default_value = "150")]
    grid: String,
    #[arg(long, default_value_t = 20)]
    reps: usize,
    /// Comma-separated subset of `pool,ea`.
    #[arg(long, default_value = "pool,ea", value_delimiter = ',')]
    algorithms: Vec<String>,
    #[arg(short, long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    adaptive: bool,
    #[command(flatten)]
    ea: EaArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Concurrent runs (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Per-run table (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// AUC and Wilcoxon summary table.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct LandscapeArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 10000)]
    samples: usize,
    #[arg(short, long, default_value_t = 150)]
    threshold: usize,
    #[arg(short, long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Landscape table (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Area under the curve of `y` over `x`, averaging rows that share an x.
    Auc {
        table: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Keep only rows with `column=value`; repeatable.
        #[arg(long = "where", value_name = "COLUMN=VALUE")]
        filters: Vec<String>,
    },
    /// Wilcoxon test between two groups of a value column.
    Wilcoxon {
        table: PathBuf,
        /// Column holding the compared values.
        #[arg(long)]
        value: String,
        /// Column identifying the group.
        #[arg(long)]
        group: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Signed-rank test on rows paired in table order.
        #[arg(long)]
        paired: bool,
        #[arg(long = "where", value_name = "COLUMN=VALUE")]
        filters: Vec<String>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Planted block sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [500, 500])]
    blocks: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    intra: usize,
    #[arg(long, default_value_t = 10)]
    cross: usize,
    /// Pin-count range `min:max`.
    #[arg(long, default_value = "2:4")]
    cardinality: String,
    /// Omit the per-block path edges.
    #[arg(long)]
    no_backbone: bool,
    #[arg(short, long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// hMetis output file.
    #[arg(short, long)]
    output: PathBuf,
    /// Planted partition file.
    #[arg(long)]
    planted: Option<PathBuf>,
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Landscape(a) => cmd_landscape(a),
        Command::Stats { command } => cmd_stats(command),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path) -> Result<hgpart::Hypergraph> {
    read_hmetis(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_partition(a: PartitionArgs) -> Result<()> {
    ensure!(a.k == 2, "only k = 2 is supported");
    let hg = load(&a.input)?;
    let initial = match a.ea.ip {
        Ip::Pool => InitialPartitioner::Pool(a.ea.pool(a.epsilon)),
        Ip::Ea => InitialPartitioner::Ea(a.ea.ea(a.epsilon), a.ea.pool(a.epsilon)),
    };
    let cfg = DriverConfig {
        epsilon: a.epsilon,
        coarsening: CoarseningConfig {
            threshold: a.threshold,
            monitor_start: CoarseningConfig::default().monitor_start.max(a.threshold),
            k: a.k,
            adaptive: a.adaptive,
            ..CoarseningConfig::default()
        },
        initial,
        budget: a.ea.evals,
        seed: a.seed,
        refine: !a.no_refine,
        refine_batch: a.refine_batch,
        ..DriverConfig::default()
    };
    let (part, report) = partition(&hg, &cfg)?;
    if let Some(p) = &a.output {
        write_partition_file(&part, p)?;
    }
    if let Some(p) = &a.log {
        let mut w = writer(Some(p))?;
        write_eval_log(&report.log, &mut w)?;
        w.flush()?;
    }
    let mut out = writer(None)?;
    if a.csv {
        writeln!(out, "{}", hgpart::RunReport::CSV_HEADER)?;
        writeln!(out, "{}", report.csv_row())?;
    } else {
        write!(out, "{}", report.to_key_value())?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let hg = load(&a.input)?;
    let algorithms = a
        .algorithms
        .iter()
        .map(|s| s.trim().parse::<Algorithm>())
        .collect::<hgpart::Result<Vec<_>>>()?;
    let spec = SweepSpec {
        thresholds: parse_threshold_grid(&a.grid)?,
        repetitions: a.reps,
        budget: a.ea.evals,
        algorithms,
        adaptive: a.adaptive,
        epsilon: a.epsilon,
        ea: a.ea.ea(a.epsilon),
        pool: a.ea.pool(a.epsilon),
        seed: a.seed,
        workers: a.workers,
    };
    let result = sweep(&hg, &spec)?;
    let mut out = writer(a.output.as_deref())?;
    write_sweep_rows(&result.rows, &mut out)?;
    out.flush()?;
    if let Some(p) = &a.summary {
        let mut w = writer(Some(p))?;
        write_sweep_summary(&result, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_landscape(a: LandscapeArgs) -> Result<()> {
    let hg = load(&a.input)?;
    let coarsening = CoarseningConfig {
        threshold: a.threshold,
        monitor_start: CoarseningConfig::default().monitor_start.max(a.threshold),
        ..CoarseningConfig::default()
    };
    let fm = FmConfig {
        epsilon: a.epsilon,
        ..FmConfig::default()
    };
    let sample = sample_local_optima(&hg, &coarsening, fm, a.samples, &mut seeded(a.seed))?;
    let distances = sample.distances();
    let mut out = writer(a.output.as_deref())?;
    export_landscape(&sample.records, &distances, &mut out)?;
    out.flush()?;
    eprintln!(
        "coarse_vertices={} best_cut={} quasi_global={}",
        sample.coarse.num_vertices(),
        sample.best_cut(),
        sample.quasi_global.len()
    );
    match fdc_fit(&sample.records, &distances) {
        Ok(m) => {
            eprintln!("fdc_slope={} fdc_r_squared={} samples={}", m.slope, m.r_squared, m.samples);
            if let Some(i) = m.with_intercept {
                eprintln!("ols_slope={} ols_intercept={} ols_r_squared={}", i.slope, i.intercept, i.r_squared);
            }
        }
        Err(e) => eprintln!("fdc fit unavailable: {e}"),
    }
    Ok(())
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn read(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
        let header = rdr.headers()?.iter().map(str::to_owned).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_owned).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { header, rows })
    }

    fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("no column `{name}`"))
    }

    fn filtered(&self, filters: &[String]) -> Result<Vec<&Vec<String>>> {
        let mut conds = Vec::new();
        for f in filters {
            let (c, v) = f.split_once('=').with_context(|| format!("filter `{f}` is not COLUMN=VALUE"))?;
            conds.push((self.column(c)?, v));
        }
        Ok(self
            .rows
            .iter()
            .filter(|r| conds.iter().all(|&(c, v)| r[c] == v))
            .collect())
    }
}

fn number(s: &str, column: &str) -> Result<f64> {
    s.trim()
        .parse()
        .with_context(|| format!("`{s}` in column `{column}` is not a number"))
}

fn cmd_stats(cmd: StatsCommand) -> Result<()> {
    let mut out = writer(None)?;
    match cmd {
        StatsCommand::Auc { table, x, y, filters } => {
            let t = Table::read(&table)?;
            let (xi, yi) = (t.column(&x)?, t.column(&y)?);
            let mut groups: BTreeMap<u64, (f64, f64, usize)> = BTreeMap::new();
            for r in t.filtered(&filters)? {
                let xv = number(&r[xi], &x)?;
                let yv = number(&r[yi], &y)?;
                let g = groups.entry(xv.to_bits()).or_insert((xv, 0.0, 0));
                g.1 += yv;
                g.2 += 1;
            }
            let mut points: Vec<(f64, f64)> = groups.into_values().map(|(x, s, n)| (x, s / n as f64)).collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
            writeln!(out, "points,auc")?;
            writeln!(out, "{},{}", xs.len(), simpson_auc(&xs, &ys)?)?;
        }
        StatsCommand::Wilcoxon {
            table,
            value,
            group,
            a,
            b,
            paired,
            filters,
        } => {
            let t = Table::read(&table)?;
            let (vi, gi) = (t.column(&value)?, t.column(&group)?);
            let rows = t.filtered(&filters)?;
            let pick = |label: &str| -> Result<Vec<f64>> {
                rows.iter()
                    .filter(|r| r[gi] == label)
                    .map(|r| number(&r[vi], &value))
                    .collect()
            };
            let (sa, sb) = (pick(&a)?, pick(&b)?);
            if sa.is_empty() || sb.is_empty() {
                bail!("group `{}` has no rows", if sa.is_empty() { &a } else { &b });
            }
            let mode = if paired { WilcoxonMode::SignedRank } else { WilcoxonMode::RankSum };
            let r = wilcoxon(&sa, &sb, mode)?;
            writeln!(out, "test,n_a,n_b,statistic,p_value,exact")?;
            let name = if paired { "signed_rank" } else { "rank_sum" };
            writeln!(out, "{name},{},{},{},{},{}", sa.len(), sb.len(), r.statistic, r.p_value, r.exact)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    ensure!(a.blocks.len() == 2, "--blocks takes exactly two sizes");
    let (lo, hi) = a
        .cardinality
        .split_once(':')
        .context("cardinality must be `min:max`")?;
    let spec = SyntheticSpec {
        block_sizes: [a.blocks[0], a.blocks[1]],
        intra_edges: a.intra,
        cross_edges: a.cross,
        cardinality: (lo.trim().parse()?, hi.trim().parse()?),
        backbone: !a.no_backbone,
        epsilon: a.epsilon,
        seed: a.seed,
    };
    let inst = gen_synthetic(&spec)?;
    write_hmetis_file(&inst.hypergraph, &a.output)?;
    if let Some(p) = &a.planted {
        write_partition_file(&inst.planted, p)?;
    }
    let mut out = writer(None)?;
    writeln!(out, "vertices,edges,pins,planted_cut")?;
    writeln!(
        out,
        "{},{},{},{}",
        inst.hypergraph.num_vertices(),
        inst.hypergraph.num_edges(),
        inst.hypergraph.num_pins(),
        inst.planted_cut
    )?;
    out.flush()?;
    Ok(())
}
