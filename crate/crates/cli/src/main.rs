//! `submod`: solve, distribute, benchmark, and verify constrained
//! submodular maximization problems from the command line.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use greedi_core::experiment::{
    build_objective, data_spec_for_file, generate_dataset, load_dataset, parse_params, run_experiment,
    to_csv, BuiltObjective, Dataset, ExperimentConfig, ObjectiveKind,
};
use greedi_core::data::{write_graph, write_sets, write_vectors_csv};
use greedi_core::suite::{bounds_suite, lipschitz_suite, structure_suite, worstcase_suite, CheckLine};
use greedi_core::{
    baseline, greedi_decomposable, greedi_general, partition_uniform, BaselineKind, Cardinality,
    Constraint, EngineKind, GreediConfig, Knapsack, Solution,
};

#[derive(Parser)]
#[command(
    name = "submod",
    about = "Constrained submodular maximization: greedy engines, a two-round distributed protocol, and a verification suite",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single-machine engine on one objective.
    Solve(SolveArgs),
    /// Run the two-round distributed protocol.
    Greedi(GreediArgs),
    /// Run one of the naive reference protocols.
    Baseline(BaselineArgs),
    /// Run an experiment sweep from a config file and write a CSV.
    Sweep(SweepArgs),
    /// Run verification suites; one PASS/FAIL line per check.
    Verify(VerifyArgs),
    /// Generate a synthetic dataset file.
    Gen(GenArgs),
}

#[derive(Args)]
struct ObjectiveArgs {
    /// Objective kind: exemplar | infogain | cut | coverage | dpp
    #[arg(long)]
    objective: String,
    /// Dataset path.
    #[arg(long)]
    data: PathBuf,
    /// Data format: csv | binary-f32 | edges | edges-undirected | sets
    #[arg(long, default_value = "auto")]
    format: String,
    /// Objective parameters, e.g. "alpha=2" or "h=0.75,sigma=1".
    #[arg(long, default_value = "")]
    params: String,
    /// Center the vectors and scale rows to unit norm before use.
    #[arg(long)]
    normalize: bool,
}

impl ObjectiveArgs {
    fn build(&self) -> anyhow::Result<BuiltObjective> {
        let params = parse_params(&self.params)?;
        let kind = ObjectiveKind::parse(&self.objective, &params)?;
        let format = if self.format == "auto" {
            match kind {
                ObjectiveKind::Cut => "edges",
                ObjectiveKind::Coverage => "sets",
                _ => "csv",
            }
        } else {
            self.format.as_str()
        };
        let spec = data_spec_for_file(self.data.clone(), format)?;
        let dataset = load_dataset(&spec, 0)?;
        Ok(build_objective(&kind, &dataset, self.normalize)?)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    /// Selection budget.
    #[arg(long)]
    k: usize,
    /// Engine: greedy | lazy | costbenefit | randomgreedy | constrained
    #[arg(long, default_value = "lazy")]
    engine: String,
    /// Constraint spec: "card:<k>" or "knapsack:<budget>[:<costs file>]".
    /// Defaults to the cardinality budget --k.
    #[arg(long)]
    constraint: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GreediArgs {
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    machines: usize,
    /// Per-machine budget as a multiple of k (kappa = ceil(factor * k)).
    #[arg(long, default_value_t = 1.0)]
    kappa_factor: f64,
    /// Evaluate machine stages on machine-local component means.
    #[arg(long)]
    decomposable: bool,
    /// Merge-stage evaluation scope size in decomposable mode.
    #[arg(long)]
    eval_subset_size: Option<usize>,
    #[arg(long, default_value = "lazy")]
    engine: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker pool size (defaults to the available parallelism).
    #[arg(long)]
    workers: Option<usize>,
    /// Print the full per-machine trace.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct BaselineArgs {
    /// Baseline kind: random_random | random_greedy | greedy_merge | greedy_max
    #[arg(long)]
    kind: String,
    #[command(flatten)]
    objective: ObjectiveArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    machines: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Override the worker pool size from the config.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: bounds | structure | lipschitz | worstcase (default: all).
    #[arg(long)]
    suite: Option<String>,
    /// Seeded repetitions (instances for bounds/structure, trials for
    /// lipschitz).
    #[arg(long, default_value_t = 50)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenArgs {
    /// Generator kind: gaussian_mixture | random_graph | random_sets
    #[arg(long)]
    kind: String,
    /// Generator parameters, e.g. "clusters=10,n=10000,d=16,spread=0.2".
    #[arg(long)]
    params: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Greedi(args) => run_greedi(args),
        Command::Baseline(args) => run_baseline(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(args),
        Command::Gen(args) => gen(args),
    }
}

fn parse_constraint(
    spec: &str,
    n: usize,
) -> anyhow::Result<Box<dyn Constraint>> {
    let mut parts = spec.splitn(3, ':');
    let head = parts.next().unwrap_or_default();
    match head {
        "card" => {
            let k: usize = parts
                .next()
                .context("card:<k> needs a bound")?
                .parse()
                .context("bad cardinality bound")?;
            Ok(Box::new(Cardinality::new(k)?))
        }
        "knapsack" => {
            let budget: f64 = parts
                .next()
                .context("knapsack:<budget>[:<costs file>] needs a budget")?
                .parse()
                .context("bad knapsack budget")?;
            let costs = match parts.next() {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading costs file {path}"))?;
                    let costs: Vec<f64> = text
                        .split_whitespace()
                        .map(|tok| tok.parse::<f64>().context("bad cost value"))
                        .collect::<anyhow::Result<_>>()?;
                    if costs.len() != n {
                        bail!("costs file has {} entries for {} elements", costs.len(), n);
                    }
                    costs
                }
                None => vec![1.0; n],
            };
            Ok(Box::new(Knapsack::scalar(costs, budget)?))
        }
        other => bail!("unknown constraint spec {other:?} (expected card: or knapsack:)"),
    }
}

fn print_solution(sol: &Solution, n: usize) {
    println!("provenance={}", sol.provenance);
    println!("n={} selected={}", n, sol.len());
    let ids: Vec<String> = sol.elements.iter().map(|e| e.to_string()).collect();
    println!("elements={}", ids.join(","));
    println!("value={}", sol.value);
    println!("oracle_calls={}", sol.oracle_calls);
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let built = args.objective.build()?;
    let f = built.as_objective();
    let engine = EngineKind::parse(&args.engine)?;
    let constraint: Box<dyn Constraint> = match &args.constraint {
        Some(spec) => parse_constraint(spec, f.n())?,
        None => Box::new(Cardinality::new(args.k)?),
    };
    let candidates: Vec<u32> = (0..f.n() as u32).collect();
    let mut rng = greedi_core::rng::root(args.seed);
    let sol = engine.solve(f, constraint.as_ref(), &candidates, &mut rng)?;
    let sol = if sol.len() > args.k {
        sol.truncated(args.k, f)
    } else {
        sol
    };
    print_solution(&sol, f.n());
    Ok(())
}

fn run_greedi(args: GreediArgs) -> anyhow::Result<()> {
    let built = args.objective.build()?;
    let f = built.as_objective();
    let engine = EngineKind::parse(&args.engine)?;
    let mut config = GreediConfig::new(args.machines, args.k, args.seed);
    config = config.kappa_factor(args.kappa_factor);
    config.engine = engine;
    config.workers = args.workers;
    config.eval_subset_size = args.eval_subset_size;
    config.decomposable = args.decomposable;

    let trace = if args.decomposable {
        let decomposable = built
            .as_decomposable()
            .context("this objective has no decomposable form (use exemplar)")?;
        let (_, trace) = greedi_decomposable(decomposable, &config)?;
        trace
    } else if engine.randomized() {
        let constraint = Cardinality::new(args.k)?;
        let (_, trace) = greedi_general(
            f,
            &constraint,
            engine,
            args.machines,
            args.seed,
            args.workers,
            true,
        )?;
        trace
    } else {
        let (_, trace) = greedi_core::greedi(f, &config)?;
        trace
    };

    if args.trace {
        print!("{}", trace.render());
    }
    let final_sol = &trace.final_k;
    let global_value = f.value(&final_sol.element_set());
    print_solution(final_sol, f.n());
    println!("global_value={global_value}");
    println!("shipped_elements={}", trace.shipped_elements);
    println!("total_oracle_calls={}", trace.oracle_calls);
    Ok(())
}

fn run_baseline(args: BaselineArgs) -> anyhow::Result<()> {
    let built = args.objective.build()?;
    let f = built.as_objective();
    let kind = BaselineKind::parse(&args.kind)?;
    let partition = partition_uniform(f.n(), args.machines, args.seed)?;
    let sol = baseline(kind, f, &partition, args.k, args.seed, args.workers)?;
    print_solution(&sol, f.n());
    Ok(())
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let mut config = ExperimentConfig::from_file(&args.config)?;
    if args.workers.is_some() {
        config.workers = args.workers;
    }
    let result = run_experiment(&config)?;
    let csv = to_csv(&result);
    std::fs::write(&args.out, &csv)?;
    println!("wrote {} ({} measured rows)", args.out.display(), result.rows.len());
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<()> {
    let mut lines: Vec<CheckLine> = Vec::new();
    let which = args.suite.as_deref();
    let want = |name: &str| which.is_none() || which == Some(name);
    if want("structure") {
        lines.extend(structure_suite(args.seeds, args.seed));
    }
    if want("bounds") {
        lines.extend(bounds_suite(args.seeds * 2, args.seed)?);
    }
    if want("lipschitz") {
        lines.extend(lipschitz_suite(args.seeds.max(100), args.seed)?);
    }
    if want("worstcase") {
        lines.extend(worstcase_suite()?);
    }
    if lines.is_empty() {
        bail!("unknown suite {:?} (expected bounds | structure | lipschitz | worstcase)", which.unwrap_or(""));
    }
    let mut failures = 0usize;
    for line in &lines {
        println!("{}", line.line());
        if !line.passed {
            failures += 1;
        }
    }
    println!("{} checks, {} failed", lines.len(), failures);
    if failures > 0 {
        bail!("{failures} verification checks failed");
    }
    Ok(())
}

fn gen(args: GenArgs) -> anyhow::Result<()> {
    let params: BTreeMap<String, String> = parse_params(&args.params)?;
    let dataset = generate_dataset(&args.kind, &params, args.seed)?;
    let (text, summary) = match &dataset {
        Dataset::Vectors(v) => (
            write_vectors_csv(v),
            format!("{} points x {} dims", v.len(), v.dim()),
        ),
        Dataset::Graph(g) => (
            write_graph(g),
            format!("{} nodes, {} arcs", g.len(), g.arcs().len()),
        ),
        Dataset::Sets(ss) => (
            write_sets(ss),
            format!("{} sets over {} items", ss.len(), ss.universe()),
        ),
    };
    std::fs::write(&args.out, text)?;
    println!("wrote {} ({summary})", args.out.display());
    Ok(())
}
