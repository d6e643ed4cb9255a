//! `gmt`: plan, benchmark, scale and simulate from the command line.
//!
//! Exit codes: 0 success, 1 planning or simulation failure, 2 input error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmt::bench::{median_time, scaling, suboptimality, ScalingRow, SuboptimalityRow};
use gmt::planner::{dijkstra_oracle, fmt_plan, gmt_plan, with_workers, GmtParams, Label, PlanResult};
use gmt::problem::{scene, ProblemFile, SCENES};
use gmt::sampling::SampleSource;
use gmt::simulator::{bundled_campaign, write_csv, CampaignFile};
use gmt::Error;

#[derive(Parser)]
#[command(name = "gmt", version, about = "Group Marching Tree motion planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem file (or bundled scene name).
    Plan(PlanArgs),
    /// GMT suboptimality against FMT* over a range of lambda.
    Bench(BenchArgs),
    /// Planning time and cost over sample and obstacle counts.
    Scaling(ScalingArgs),
    /// Run a replanning campaign and write success rates as CSV.
    Simulate(SimulateArgs),
    /// Print a bundled scene as a problem file, or list them.
    Scene {
        /// Scene name; omit to list.
        name: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Gmt,
    Fmt,
    Dijkstra,
}

#[derive(Args)]
struct PlanArgs {
    /// Problem file path or bundled scene name.
    problem: String,
    #[arg(long, value_enum, default_value = "gmt")]
    algo: Algo,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Switch to uniform sampling with this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Connection radius override.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long)]
    emit_path: Option<PathBuf>,
    #[arg(long)]
    emit_tree: Option<PathBuf>,
    /// Neighbor-graph cache file, reused when its key matches.
    #[arg(long)]
    graph_cache: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "rectangles-2d,rectangles-3d,maze-3d")]
    scenes: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,1.0")]
    lambdas: Vec<f64>,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Number of sampling seeds per cell.
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    /// First sampling seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// CSV output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// gnuplot data output.
    #[arg(long)]
    dat: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, default_value = "maze-3d")]
    scene: String,
    #[arg(long, value_delimiter = ',', default_value = "1000,2000,5000,10000")]
    ns: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "12,120,1200")]
    obstacles: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dat: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Campaign file; the bundled cave campaign if omitted.
    campaign: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Input(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Field { .. }
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::Io(_)
            | Error::Cache(_) => Failure::Input(e.to_string()),
            Error::InfeasibleSampling { .. } | Error::GoalBlocked { .. } => Failure::Run(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Plan(a) => cmd_plan(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Scaling(a) => cmd_scaling(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Scene { name } => cmd_scene(name),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Run(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn load_problem(arg: &str) -> Result<ProblemFile, Error> {
    let path = Path::new(arg);
    if !path.exists() && SCENES.contains(&arg) {
        return scene(arg);
    }
    ProblemFile::read(path)
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn workers(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Input("--workers must be at least 1".into()));
    }
    Ok(n)
}

fn cmd_plan(a: PlanArgs) -> Outcome {
    let mut p = load_problem(&a.problem)?;
    if let Some(l) = a.lambda {
        p.lambda = l;
    }
    if let Some(e) = a.eta {
        p.eta = e;
    }
    if let Some(n) = a.n {
        p.n = n;
    }
    if let Some(seed) = a.seed {
        p.sampling = SampleSource::Uniform { seed };
    }
    if a.radius.is_some() {
        p.radius_override = a.radius;
    }
    p.validate()?;
    let threads = workers(a.workers)?;

    let (inst, res, time_s) = with_workers(threads, || -> Result<_, Error> {
        let inst = p.instantiate_cached(a.graph_cache.as_deref())?;
        let params: GmtParams = inst.params;
        let (t, res) = median_time(a.reps, || match a.algo {
            Algo::Gmt => gmt_plan(&inst.input(), &params),
            Algo::Fmt => fmt_plan(&inst.input()),
            Algo::Dijkstra => dijkstra_oracle(&inst.input()),
        });
        Ok((inst, res?, t))
    })??;

    println!(
        "status={} cost={:.9} iters={} time_ms={:.3} n={} radius={:.6} checks={}",
        res.status,
        res.cost,
        res.iterations,
        time_s * 1e3,
        inst.samples.len(),
        inst.params.radius(),
        res.stats.collision_checks
    );
    if let Some(path) = &a.emit_path {
        write_path(path, &p, &inst.input().trajectory(&res.path_indices), &res)?;
    }
    if let Some(path) = &a.emit_tree {
        write_tree(path, &inst.samples.states, &res)?;
    }
    if res.is_success() {
        Ok(())
    } else {
        Err(Failure::Run(res.status.to_string()))
    }
}

fn state_fields(s: &gmt::State) -> String {
    let mut f: Vec<String> = s.coords.iter().map(|c| c.to_string()).collect();
    if let Some(h) = s.heading {
        f.push(h.to_string());
    }
    f.join(" ")
}

fn write_path(path: &Path, p: &ProblemFile, states: &[gmt::State], res: &PlanResult) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# status={} cost={} dimension={}", res.status, res.cost, p.dimension)?;
    let heading = if p.steering.is_dubins() { " heading" } else { "" };
    let axes: Vec<String> = (0..p.dimension).map(|k| format!("x{k}")).collect();
    writeln!(w, "# {}{heading}", axes.join(" "))?;
    for s in states {
        writeln!(w, "{}", state_fields(s))?;
    }
    w.flush()
}

fn write_tree(path: &Path, states: &[gmt::State], res: &PlanResult) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# index parent cost label state (parent -1: none, cost inf: not in tree)")?;
    let t = &res.tree;
    for (i, s) in states.iter().enumerate() {
        let parent = t.parent[i].map_or(-1, i64::from);
        let label = match t.label[i] {
            Label::Unexplored => "unexplored",
            Label::Open => "open",
            Label::Closed => "closed",
        };
        writeln!(w, "{i} {parent} {} {label} {}", t.cost_to_arrive[i], state_fields(s))?;
    }
    w.flush()
}

fn seed_list(first: u64, count: u64) -> Result<Vec<u64>, Failure> {
    if count == 0 {
        return Err(Failure::Input("--seeds must be at least 1".into()));
    }
    Ok((first..first + count).collect())
}

fn cmd_bench(a: BenchArgs) -> Outcome {
    let seeds = seed_list(a.seed, a.seeds)?;
    let threads = workers(a.workers)?;
    let mut rows: Vec<SuboptimalityRow> = Vec::new();
    for name in &a.scenes {
        let p = scene(name)?;
        let r = with_workers(threads, || suboptimality(name, &p, &a.lambdas, a.n, &seeds))??;
        for row in &r {
            if row.unreliable() {
                eprintln!("warning: {name} lambda={}: {} of {} runs failed", row.lambda, row.failures, seeds.len());
            }
        }
        rows.extend(r);
    }
    write_rows(&rows, a.out.as_deref())?;
    if let Some(dat) = &a.dat {
        let mut w = BufWriter::new(File::create(dat)?);
        writeln!(w, "# lambda mean_error runs failures (one block per scene, n = {})", a.n)?;
        for name in &a.scenes {
            writeln!(w, "\n\n# {name}")?;
            for r in rows.iter().filter(|r| &r.scene == name) {
                writeln!(w, "{} {} {} {}", r.lambda, r.mean_error, r.runs, r.failures)?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_scaling(a: ScalingArgs) -> Outcome {
    let p = scene(&a.scene)?;
    let seeds = seed_list(a.seed, a.seeds)?;
    let threads = workers(a.workers)?;
    let rows: Vec<ScalingRow> = with_workers(threads, || scaling(&p, &a.ns, &a.obstacles, &seeds, a.reps))??;
    write_rows(&rows, a.out.as_deref())?;
    if let Some(dat) = &a.dat {
        let mut w = BufWriter::new(File::create(dat)?);
        writeln!(w, "# n cost time_s successes (one block per obstacle count)")?;
        for &m in &a.obstacles {
            writeln!(w, "\n\n# obstacles {m}")?;
            for r in rows.iter().filter(|r| r.obstacles == m) {
                writeln!(w, "{} {} {} {}", r.n, r.cost, r.time_s, r.successes)?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

fn write_rows<T: serde::Serialize>(rows: &[T], out: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs) -> Outcome {
    let mut c = match &a.campaign {
        Some(p) => CampaignFile::read(p)?,
        None => bundled_campaign(),
    };
    if let Some(t) = a.trials {
        c.scenario.trials = t;
    }
    if let Some(s) = a.seed {
        c.scenario.seed = s;
    }
    c.validate()?;
    let threads = workers(a.workers)?;
    let rows = with_workers(threads, || c.run())?.map_err(|e| Failure::Run(e.to_string()))?;
    write_csv(&rows, sink(a.out.as_deref())?)?;
    Ok(())
}

fn cmd_scene(name: Option<String>) -> Outcome {
    match name {
        None => {
            for s in SCENES {
                println!("{s}");
            }
        }
        Some(n) => println!("{}", scene(&n)?.to_json()),
    }
    Ok(())
}
