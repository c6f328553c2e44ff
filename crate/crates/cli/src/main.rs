use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use minsum::generate::{
    gen_grid_tiling, gen_random_euclidean, gen_three_coloring_msd, named_graph, random_graph, GridTilingSpec,
};
use minsum::instance::{parse_instance, Instance, InstanceFile, Mode, SolutionDocument, Variant};
use minsum::solve::{solve, SolveRequest};
use minsum::verify::check;
use minsum::SolveError;

#[derive(Parser)]
#[command(name = "minsum", version, about = "Min-sum-radii and min-sum-diameters clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value = "approx")]
        mode: SolveMode,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record the wall time in the document.
        #[arg(long)]
        timing: bool,
    },
    /// Brute-force reference solution (small instances only).
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate an instance.
    Gen(GenArgs),
    /// Validate a solution against its instance.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Solve every .json instance in a directory and print a table.
    Bench {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum, default_value = "approx")]
        mode: SolveMode,
        #[arg(long)]
        dir: PathBuf,
        /// Write each solution here as <instance>.solution.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Worker threads; 0 picks the number of cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Args, Clone)]
struct ProblemArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    g: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Enforce the per-color center caps of the instance.
    #[arg(long)]
    fair: bool,
    /// Enforce the balance section of the instance.
    #[arg(long)]
    balance: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Msr,
    Msd,
    AlphaMsr,
    KCenter,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Euclid,
    GridTiling,
    ThreeColoring,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Points (euclid) or the value range of a random tiling spec.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Grid size (grid-tiling) or cluster count (three-coloring).
    #[arg(long)]
    k: Option<usize>,
    /// Probability that a pair enters a cell (grid-tiling) or that an edge
    /// exists (three-coloring with --vertices).
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    /// Grid-tiling spec as JSON instead of a random one.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Named graph for three-coloring: k3, k4, c4, c5, w4, w5, k33, prism, moser, petersen.
    #[arg(long)]
    graph: Option<String>,
    /// Random graph size for three-coloring.
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidParameter(m) => Failure::Usage(m),
            SolveError::Infeasible(m) => Failure::Infeasible(m),
            other => Failure::Other(other.into()),
        }
    }
}

fn request(p: &ProblemArgs, mode: Mode) -> SolveRequest {
    let variant = match p.variant {
        VariantArg::Msr => Variant::Msr,
        VariantArg::Msd => Variant::Msd,
        VariantArg::AlphaMsr => Variant::AlphaMsr,
        VariantArg::KCenter => Variant::KCenter,
    };
    SolveRequest {
        variant,
        mode,
        k: p.k,
        g: p.g,
        alpha: p.alpha,
        epsilon: Some(p.epsilon),
        fair: p.fair,
        balance: p.balance,
    }
}

fn solve_mode(m: SolveMode) -> Mode {
    match m {
        SolveMode::Exact => Mode::Exact,
        SolveMode::Approx => Mode::Approx,
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).map_err(|e| Failure::Other(anyhow!("{}: {e}", path.display())))
}

/// Writes through a sibling temporary file so readers never see a partial
/// document.
fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text).with_context(|| format!("writing {}", path.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_solve(inst: &Instance, req: &SolveRequest, timing: bool) -> Result<SolutionDocument, Failure> {
    let start = Instant::now();
    let mut doc = solve(inst, req)?;
    if timing {
        doc.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(doc)
}

fn generate(a: &GenArgs) -> Result<InstanceFile, Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")));
    let usage = |e: minsum::generate::GenerateError| Failure::Usage(e.to_string());
    match a.kind {
        Kind::Euclid => gen_random_euclidean(need(a.n, "n")?, a.dim, a.seed).map_err(usage),
        Kind::GridTiling => {
            let spec = match &a.spec {
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    serde_json::from_str::<GridTilingSpec>(&text).map_err(|e| Failure::Usage(e.to_string()))?
                }
                None => GridTilingSpec::random(need(a.k, "k")?, need(a.n, "n")?, a.density, a.seed),
            };
            Ok(gen_grid_tiling(&spec).map_err(usage)?.0)
        }
        Kind::ThreeColoring => {
            let (n, edges) = match (&a.graph, a.vertices) {
                (Some(name), None) => named_graph(name).ok_or_else(|| Failure::Usage(format!("unknown graph {name}")))?,
                (None, Some(v)) => (v, random_graph(v, a.density, a.seed)),
                _ => return Err(Failure::Usage("give exactly one of --graph or --vertices".into())),
            };
            gen_three_coloring_msd(&edges, n, a.k.unwrap_or(3)).map_err(usage)
        }
    }
}

fn bench(problem: &ProblemArgs, mode: Mode, dir: &Path, out_dir: Option<&Path>, jobs: usize) -> Result<(), Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && !p.file_name().is_some_and(|n| n.to_string_lossy().ends_with(".solution.json"))
        })
        .collect();
    files.sort();
    if let Some(o) = out_dir {
        fs::create_dir_all(o).with_context(|| format!("creating {}", o.display()))?;
    }
    let req = request(problem, mode);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| Failure::Other(e.into()))?;
    let rows: Vec<String> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                let inst = match load(path) {
                    Ok(i) => i,
                    Err(_) => return format!("{name}\t-\t-\t-\tunreadable"),
                };
                let n = inst.space.len();
                match run_solve(&inst, &req, true) {
                    Ok(doc) => {
                        let ms = doc.wall_time_ms.unwrap_or(0.0);
                        if let Some(o) = out_dir {
                            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                            if let Err(e) = write_atomic(&o.join(format!("{stem}.solution.json")), &doc.to_json()) {
                                return format!("{name}\t{n}\t{}\t{ms:.1}\twrite failed: {e}", doc.cost);
                            }
                        }
                        format!("{name}\t{n}\t{}\t{ms:.1}\tok", doc.cost)
                    }
                    Err(Failure::Infeasible(_)) => format!("{name}\t{n}\t-\t-\tinfeasible"),
                    Err(Failure::Usage(m)) => format!("{name}\t{n}\t-\t-\trejected: {m}"),
                    Err(Failure::Other(e)) => format!("{name}\t{n}\t-\t-\terror: {e}"),
                }
            })
            .collect()
    });
    println!("instance\tn\tcost\tms\tstatus");
    for r in rows {
        println!("{r}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { problem, mode, input, output, timing } => {
            let inst = load(&input)?;
            let doc = run_solve(&inst, &request(&problem, solve_mode(mode)), timing)?;
            emit(output.as_deref(), &doc.to_json())?;
        }
        Command::Oracle { problem, input, output } => {
            let inst = load(&input)?;
            let doc = run_solve(&inst, &request(&problem, Mode::Oracle), false)?;
            emit(output.as_deref(), &doc.to_json())?;
        }
        Command::Gen(args) => {
            let file = generate(&args)?;
            emit(args.output.as_deref(), &file.to_json())?;
        }
        Command::Check { instance, solution } => {
            let inst = load(&instance)?;
            let text = fs::read_to_string(&solution).with_context(|| format!("reading {}", solution.display()))?;
            let doc = SolutionDocument::from_json(&text).map_err(|e| Failure::Other(e.into()))?;
            let problems = check(&inst, &doc);
            if !problems.is_empty() {
                return Err(Failure::Other(anyhow!("invalid solution:\n  {}", problems.join("\n  "))));
            }
            println!("ok: cost {}", doc.cost);
        }
        Command::Bench { problem, mode, dir, out_dir, jobs } => {
            bench(&problem, solve_mode(mode), &dir, out_dir.as_deref(), jobs)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(m)) => {
            eprintln!("infeasible: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
