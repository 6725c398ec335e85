//! `cliquestream`: run online clique-clustering experiments from the shell.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cliquestream::adversary::{greedy_nemesis, mincc_instance, occ_nemesis, play_skeleton, Variant};
use cliquestream::analysis::{asymptotic_ratio, occ_lower_bound, recurrence_table, tail_bound};
use cliquestream::format::{parse_graph, write_instance};
use cliquestream::harness::{
    run_experiment, ExitKind, ExperimentConfig, HarnessError, InstanceSource, OptChoice, StrategySpec,
};
use cliquestream::strategy::GAMMA_DEFAULT;
use cliquestream::verify::{run_suite, VerifyOptions, SUITES};
use cliquestream::{solver, Objective, SolveBudget};

#[derive(Parser)]
#[command(name = "cliquestream", version, about = "Online clique clustering workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a strategy on an instance and record the per-step ratio.
    Simulate(SimulateArgs),
    /// Write a nemesis instance in the text instance format.
    Nemesis(NemesisArgs),
    /// Solve an instance offline.
    Opt(OptArgs),
    /// Play the adaptive skeleton-tree game.
    Skeleton(SkeletonArgs),
    /// Print the phase recurrence table.
    Table(TableArgs),
    /// Evaluate the asymptotic ratio and the OCC lower bound.
    Formula(FormulaArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NemesisKind {
    Greedy,
    Occ,
    Mincc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptKind {
    Exact,
    Analytic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Max => Objective::Max,
            ObjectiveArg::Min => Objective::Min,
        }
    }
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Largest connected component the exact solver accepts.
    #[arg(long, default_value_t = 20)]
    max_component: usize,
    /// Search nodes before the exact solver gives up.
    #[arg(long, default_value_t = 10_000_000)]
    node_limit: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SolveBudget, HarnessError> {
        SolveBudget::new(self.max_component, self.node_limit).map_err(|e| HarnessError::Usage(e.to_string()))
    }
}

#[derive(Args, Clone)]
struct NemesisParams {
    /// Number of vertices (greedy, mincc).
    #[arg(long)]
    n: Option<usize>,
    /// Number of phases after phase 0 (occ).
    #[arg(long)]
    phases: Option<u32>,
    #[arg(long, default_value = "plain")]
    variant: String,
    /// Number of extra disjoint edges (mincc).
    #[arg(long, default_value_t = 0)]
    beta: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "greedy")]
    strategy: String,
    /// OCC growth factor.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, conflicts_with_all = ["instance", "random"])]
    nemesis: Option<NemesisKind>,
    /// Instance file.
    #[arg(long, conflicts_with = "random")]
    instance: Option<PathBuf>,
    /// Random G(n, p) instance with this many vertices; needs --seed.
    #[arg(long)]
    random: Option<usize>,
    /// Edge probability for --random.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[command(flatten)]
    params: NemesisParams,
    /// Defaults to analytic for nemesis instances, exact otherwise.
    #[arg(long, value_enum)]
    opt: Option<OptKind>,
    /// Defaults to min for the mincc nemesis, max otherwise.
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Trace JSON output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace CSV output path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct NemesisArgs {
    #[arg(value_enum)]
    kind: NemesisKind,
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    params: NemesisParams,
    /// Pair the mincc clique grows around (1-based).
    #[arg(long, default_value_t = 1)]
    pair: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OptArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "max")]
    objective: ObjectiveArg,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SkeletonArgs {
    #[arg(long, default_value = "greedy")]
    strategy: String,
    /// Core depth D.
    #[arg(long, default_value_t = 2)]
    depth: u32,
    /// Rounds beyond 2^(D+1); defaults to 8 * 2^D.
    #[arg(long)]
    extra: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    /// Last phase to print.
    #[arg(long, default_value_t = 8)]
    max_j: u32,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// Largest graph for the solver oracle.
    #[arg(long, default_value_t = 9)]
    nmax: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn variant(s: &str) -> Result<Variant, HarnessError> {
    s.parse().map_err(HarnessError::Usage)
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, HarnessError> {
    value.ok_or_else(|| HarnessError::Usage(format!("missing --{flag}")))
}

fn nemesis_source(kind: NemesisKind, gamma: Option<f64>, p: &NemesisParams) -> Result<InstanceSource, HarnessError> {
    Ok(match kind {
        NemesisKind::Greedy => InstanceSource::GreedyNemesis { n: required(p.n, "n")? },
        NemesisKind::Occ => InstanceSource::OccNemesis {
            gamma: gamma.unwrap_or(GAMMA_DEFAULT),
            phases: required(p.phases, "phases")?,
            variant: variant(&p.variant)?,
        },
        NemesisKind::Mincc => InstanceSource::MinccNemesis {
            beta: p.beta,
            n: required(p.n, "n")?,
        },
    })
}

fn simulate(args: SimulateArgs) -> Result<ExitKind> {
    let strategy = StrategySpec::parse(&args.strategy, args.gamma)?;
    let instance = match (&args.nemesis, &args.instance, args.random) {
        (Some(kind), _, _) => nemesis_source(*kind, args.gamma, &args.params)?,
        (None, Some(path), _) => InstanceSource::File(path.clone()),
        (None, None, Some(n)) => InstanceSource::Random { n, p: args.p },
        (None, None, None) => return Err(HarnessError::Usage("choose --nemesis, --instance or --random".into()).into()),
    };
    let is_nemesis = args.nemesis.is_some();
    let opt = match args
        .opt
        .unwrap_or(if is_nemesis { OptKind::Analytic } else { OptKind::Exact })
    {
        OptKind::Exact => OptChoice::Exact(args.budget.budget()?),
        OptKind::Analytic => OptChoice::Analytic,
    };
    let default_objective = if matches!(instance, InstanceSource::MinccNemesis { .. }) {
        Objective::Min
    } else {
        Objective::Max
    };
    let config = ExperimentConfig {
        strategy,
        instance,
        opt,
        objective: args.objective.map_or(default_objective, Objective::from),
        seed: args.seed,
    };
    let trace = run_experiment(&config)?;
    if let Some(path) = &args.out {
        write_output(Some(path), &trace.to_json())?;
    }
    if let Some(path) = &args.csv {
        write_output(Some(path), &trace.to_csv())?;
    }
    match &trace.worst {
        Some(w) => println!("worst ratio {} at t={} ({} steps)", w.ratio, w.t, trace.steps.len()),
        None => println!("empty instance"),
    }
    Ok(ExitKind::Ok)
}

fn nemesis(args: NemesisArgs) -> Result<ExitKind> {
    let p = &args.params;
    let inst = match args.kind {
        NemesisKind::Greedy => greedy_nemesis(required(p.n, "n")?).map_err(HarnessError::from)?,
        NemesisKind::Occ => occ_nemesis(
            args.gamma.unwrap_or(GAMMA_DEFAULT),
            required(p.phases, "phases")?,
            variant(&p.variant)?,
        )
        .map_err(HarnessError::from)?,
        NemesisKind::Mincc => {
            if args.pair == 0 {
                return Err(HarnessError::Usage("--pair is 1-based".into()).into());
            }
            mincc_instance(p.beta, required(p.n, "n")?, args.pair - 1).map_err(HarnessError::from)?
        }
    };
    write_output(args.out.as_deref(), &write_instance(&inst.events))?;
    Ok(ExitKind::Ok)
}

fn opt(args: OptArgs) -> Result<ExitKind> {
    let text = std::fs::read_to_string(&args.instance).map_err(|source| HarnessError::Io {
        path: args.instance.clone(),
        source,
    })?;
    let graph = parse_graph(&text).map_err(HarnessError::from)?;
    let budget = args.budget.budget()?;
    let result = match args.objective {
        ObjectiveArg::Max => solver::max_clique_partition(&graph, budget),
        ObjectiveArg::Min => solver::min_cost_partition(&graph, budget),
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitKind::Budget);
        }
    };
    let clusters: Vec<Vec<u64>> = result
        .clustering
        .groups()
        .iter()
        .map(|g| g.iter().map(|v| v.label()).collect())
        .collect();
    let out = json!({
        "objective": Objective::from(args.objective),
        "value": result.value,
        "proven_optimal": result.proven_optimal,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "clusters": clusters,
    });
    write_output(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&out)?),
    )?;
    if !result.proven_optimal {
        eprintln!("error: node limit reached before optimality was proven");
        return Ok(ExitKind::Budget);
    }
    Ok(ExitKind::Ok)
}

fn skeleton(args: SkeletonArgs) -> Result<ExitKind> {
    let spec = StrategySpec::parse(&args.strategy, None)?;
    let mut strategy = spec.build()?;
    let outcome = match play_skeleton(&mut strategy, args.depth, args.extra) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitKind::Verification);
        }
    };
    let report = json!({
        "strategy": spec.name(),
        "rounds": outcome.rounds,
        "stop": outcome.stop,
        "strategy_profit": outcome.strategy_profit,
        "report": outcome.report,
    });
    write_output(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    let r = &outcome.report;
    eprintln!(
        "O_r = {}, S_r = {}, ratio {}, epsilon {}",
        r.o_root,
        r.s_root,
        r.ratio.map_or("n/a".to_string(), |x| format!("{x:.3}")),
        r.epsilon.map_or("n/a".to_string(), |x| format!("{x:.3}")),
    );
    Ok(ExitKind::Ok)
}

fn params(gamma: Option<f64>, x: Option<f64>) -> (f64, f64) {
    let d = cliquestream::analysis::OccParams::optimal();
    (gamma.unwrap_or(d.gamma), x.unwrap_or(d.x))
}

fn table(args: TableArgs) -> Result<ExitKind> {
    let (gamma, x) = params(args.gamma, args.x);
    let rows = recurrence_table(gamma, x, args.max_j).map_err(|e| HarnessError::Usage(e.to_string()))?;
    if args.csv {
        println!("j,s_min,s_max,delta_min,delta_max,rprime");
        for r in &rows {
            println!(
                "{},{},{},{},{},{:.6}",
                r.j, r.s_min, r.s_max, r.delta_min, r.delta_max, r.rprime
            );
        }
    } else {
        println!("{:>3} {:>12} {:>12} {:>10}", "j", "S_min", "S_max", "R'_j");
        for r in &rows {
            println!("{:>3} {:>12} {:>12} {:>10.3}", r.j, r.s_min, r.s_max, r.rprime);
        }
    }
    Ok(ExitKind::Ok)
}

fn formula(args: FormulaArgs) -> Result<ExitKind> {
    let (gamma, x) = params(args.gamma, args.x);
    let r = asymptotic_ratio(gamma, x).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let (case, lb) = occ_lower_bound(gamma).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let tail = tail_bound(gamma, x, 8, 30).ok();
    let out = json!({
        "gamma": gamma,
        "x": x,
        "asymptotic_ratio": r,
        "occ_lower_bound": {"case": case, "value": lb},
        "tail": tail,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(ExitKind::Ok)
}

fn verify(args: VerifyArgs) -> Result<ExitKind> {
    let opts = VerifyOptions {
        samples: args.samples,
        seed: args.seed,
        nmax: args.nmax,
    };
    let Some(report) = run_suite(&args.suite, opts) else {
        bail!(HarnessError::Usage(format!("unknown suite `{}`", args.suite)));
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.passed {
        ExitKind::Ok
    } else {
        ExitKind::Verification
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Nemesis(a) => nemesis(a),
        Command::Opt(a) => opt(a),
        Command::Skeleton(a) => skeleton(a),
        Command::Table(a) => table(a),
        Command::Formula(a) => formula(a),
        Command::Verify(a) => verify(a),
    };
    let kind = match result {
        Ok(kind) => kind,
        Err(err) => {
            eprintln!("error: {err}");
            err.downcast_ref::<HarnessError>()
                .map_or(ExitKind::Usage, HarnessError::exit_kind)
        }
    };
    ExitCode::from(kind.code() as u8)
}
