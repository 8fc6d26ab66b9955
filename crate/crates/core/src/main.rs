use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cito::analysis::{CouplingVariant, IfMode};
use cito::breaking::Strategy;
use cito::io::report::{self, Metadata};
use cito::io::{parse_coupling, parse_cycles, parse_weights};
use cito::model::Cdg;
use cito::ordering::{bracket_text, plan_order, stub_report, Direction};
use cito::pipeline::{analyze, break_plan, load_cdg, Analysis, InputFormat, Options};
use cito::repro::{repro_atm, repro_briand};
use cito::search::{compare_algorithms, run_search, Algorithm, ComparisonRow, FitnessModel, SearchConfig, RNG_NAME};
use cito::Error;

#[derive(Parser)]
#[command(name = "cito", version, about = "Class integration test ordering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class dependency graph of a model as an edge list
    Map {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SCCs, cycle count and per-edge metrics
    Analyze {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Break every cycle and print the removal plan
    Break {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        breaking: BreakArgs,
    },
    /// Break cycles, then print the integration order and stub counts
    Order {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        breaking: BreakArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::ServersFirst)]
        direction: DirectionArg,
    },
    /// Search for a cheap integration order with one metaheuristic
    Search {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = AlgoArg::Ga)]
        algo: AlgoArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run several metaheuristics and print per-generation statistics
    Compare {
        #[command(flatten)]
        input: InputArgs,
        /// Algorithms to run
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [AlgoArg::Ga, AlgoArg::MicroGa, AlgoArg::Cuckoo])]
        algos: Vec<AlgoArg>,
        /// Seeds; each algorithm runs once per seed
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run an embedded case study and print a pass/fail checklist
    Repro {
        #[arg(value_enum)]
        case: CaseArg,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Model file (with a [classes] section) or dependency matrix
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum, default_value_t = IfModeArg::Additive)]
    if_mode: IfModeArg,
    /// cs_eq1, broken_dependencies, attribute_coupling, method_coupling,
    /// attr_and_method_4, attr_and_method_5, five_param_cs, or 1-6
    #[arg(long, default_value = "cs_eq1", value_parser = parse_variant)]
    variant: CouplingVariant,
    /// Coupling measures file for the table-driven variants
    #[arg(long)]
    coupling: Option<PathBuf>,
    /// Use this cycle list instead of enumerating cycles
    #[arg(long)]
    cycles: Option<PathBuf>,
    /// Use these edge weights instead of computed ones
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Column of the weights file to read (default: first)
    #[arg(long, requires = "weights")]
    weights_column: Option<String>,
    #[arg(long, default_value_t = cito::analysis::DEFAULT_CYCLE_CAP)]
    max_cycles: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BreakArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
    strategy: StrategyArg,
    /// Round CWR coupling weights to this many decimals
    #[arg(long)]
    cwr_precision: Option<u32>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, env = "CITO_SEED", default_value_t = 0)]
    seed: u64,
    /// Population size (default depends on the algorithm)
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long, default_value_t = 75.0)]
    pc_bad: f64,
    #[arg(long, default_value_t = 25.0)]
    pc_good: f64,
    #[arg(long, default_value_t = 25.0)]
    pm_bad: f64,
    #[arg(long, default_value_t = 15.0)]
    pm_good: f64,
    #[arg(long, default_value_t = 2)]
    tournament: usize,
    /// Micro-GA generations without improvement before a restart
    #[arg(long, default_value_t = 5)]
    stall: usize,
    /// Cuckoo nests abandoned per generation
    #[arg(long, default_value_t = 20)]
    discard: usize,
    /// Mean swaps per cuckoo move
    #[arg(long, default_value_t = 2.0)]
    strength: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Model,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum IfModeArg {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Greedy,
    Cwr,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    ServersFirst,
    ClientsFirst,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Ga,
    MicroGa,
    Cuckoo,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Atm,
    Briand,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ga => Algorithm::Ga,
            AlgoArg::MicroGa => Algorithm::MicroGa,
            AlgoArg::Cuckoo => Algorithm::Cuckoo,
        }
    }
}

fn parse_variant(s: &str) -> Result<CouplingVariant, String> {
    s.parse()
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Everything loaded from the input flags.
struct Loaded {
    text: String,
    cdg: Cdg,
    analysis: Analysis,
    weights: Option<Vec<cito::analysis::EdgeWeight>>,
    opts: Options,
}

impl Loaded {
    fn weights(&self) -> Vec<cito::analysis::EdgeWeight> {
        self.weights.clone().unwrap_or_else(|| self.analysis.weights())
    }

    fn metadata(&self) -> Metadata {
        Metadata::for_input(self.text.as_bytes())
            .with("variant", self.opts.variant)
            .with("if_mode", format!("{:?}", self.opts.if_mode).to_lowercase())
            .with("cycles", self.analysis.cycles.len())
            .with(
                "weights",
                if self.weights.is_some() { "file" } else { "computed" },
            )
    }
}

fn load(args: &InputArgs, breaking: Option<&BreakArgs>) -> Result<Loaded, Error> {
    let text = read(&args.input)?;
    let format = args.format.map(|f| match f {
        FormatArg::Model => InputFormat::Model,
        FormatArg::Matrix => InputFormat::Matrix,
    });
    let cdg = load_cdg(&text, format)?;
    let table = args
        .coupling
        .as_deref()
        .map(|p| read(p).and_then(|t| Ok(parse_coupling(&t, &cdg)?)))
        .transpose()?;
    let catalogue = args
        .cycles
        .as_deref()
        .map(|p| read(p).and_then(|t| Ok(parse_cycles(&t, &cdg)?)))
        .transpose()?;
    let weights = args
        .weights
        .as_deref()
        .map(|p| read(p).and_then(|t| Ok(parse_weights(&t, &cdg, args.weights_column.as_deref())?)))
        .transpose()?;
    let opts = Options {
        if_mode: match args.if_mode {
            IfModeArg::Additive => IfMode::Additive,
            IfModeArg::Multiplicative => IfMode::Multiplicative,
        },
        variant: args.variant,
        max_cycles: args.max_cycles,
        strategy: match breaking.map(|b| b.strategy) {
            Some(StrategyArg::Cwr) => Strategy::Cwr,
            _ => Strategy::Greedy,
        },
        cwr_precision: breaking.and_then(|b| b.cwr_precision),
    };
    let analysis = analyze(&cdg, table.as_ref(), catalogue, &opts)?;
    Ok(Loaded {
        text,
        cdg,
        analysis,
        weights,
        opts,
    })
}

fn search_config(algorithm: Algorithm, args: &SearchArgs) -> SearchConfig {
    let base = SearchConfig::new(algorithm);
    SearchConfig {
        population: args.pop.unwrap_or(base.population),
        generations: args.gens.unwrap_or(base.generations),
        seed: args.seed,
        pc_bad: args.pc_bad,
        pc_good: args.pc_good,
        pm_bad: args.pm_bad,
        pm_good: args.pm_good,
        tournament_size: args.tournament,
        stall_limit: args.stall,
        discard_count: args.discard,
        perturbation_strength: args.strength,
        threads: args.threads,
        ..base
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Map { model, out } => {
            let text = read(&model)?;
            let cdg = load_cdg(&text, Some(InputFormat::Model))?;
            let meta = Metadata::for_input(text.as_bytes()).with("classes", cdg.node_count());
            emit(out.as_deref(), &(meta.render() + &report::edges_csv(&cdg)))?;
        }
        Command::Analyze { input } => {
            let l = load(&input, None)?;
            let mut text = l.metadata().with("sccs", l.analysis.scc.nontrivial_count()).render();
            for (i, comp) in l.analysis.scc.nontrivial().enumerate() {
                let ids: Vec<&str> = comp.iter().map(|&v| l.cdg.id(v)).collect();
                text += &format!("# scc {}: {}\n", i + 1, ids.join(" "));
            }
            text += &report::metrics_csv(&l.cdg, &l.analysis.metrics);
            emit(input.out.as_deref(), &text)?;
        }
        Command::Break { input, breaking } => {
            let l = load(&input, Some(&breaking))?;
            let plan = break_plan(&l.cdg, &l.analysis, l.weights.as_deref(), &l.opts)?;
            let meta = l
                .metadata()
                .with("strategy", plan.strategy)
                .with("removals", plan.removals.len())
                .with("total_cost", report::fixed_ratio(plan.total_cost));
            emit(input.out.as_deref(), &(meta.render() + &report::plan_csv(&l.cdg, &plan)))?;
        }
        Command::Order {
            input,
            breaking,
            direction,
        } => {
            let l = load(&input, Some(&breaking))?;
            let plan = break_plan(&l.cdg, &l.analysis, l.weights.as_deref(), &l.opts)?;
            let direction = match direction {
                DirectionArg::ServersFirst => Direction::ServersFirst,
                DirectionArg::ClientsFirst => Direction::ClientsFirst,
            };
            let order = plan_order(&plan, direction)?;
            let stubs = stub_report(&plan, &order);
            let mut meta = l
                .metadata()
                .with("strategy", plan.strategy)
                .with("direction", direction)
                .with("order", bracket_text(&l.cdg, &order));
            for line in report::stub_summary(&l.cdg, &stubs).lines() {
                let (k, v) = line.split_once(": ").unwrap_or((line, ""));
                meta = meta.with(&k.replace(' ', "_"), v);
            }
            emit(input.out.as_deref(), &(meta.render() + &report::order_csv(&l.cdg, &order)))?;
        }
        Command::Search { input, algo, search } => {
            let l = load(&input, None)?;
            let model = FitnessModel::new(&l.cdg, &l.weights());
            let cfg = search_config(algo.into(), &search);
            let result = run_search(&model, &cfg)?;
            let ids: Vec<&str> = result.best.genes.iter().map(|&v| l.cdg.id(v)).collect();
            let rows: Vec<ComparisonRow> = compare_rows(&l.cdg, &result);
            let meta = l
                .metadata()
                .with("algorithm", cfg.algorithm)
                .with("seed", cfg.seed)
                .with("rng", RNG_NAME)
                .with("best_fitness", report::fixed(result.best.fitness))
                .with("best_order", ids.join(" "));
            emit(input.out.as_deref(), &(meta.render() + &report::stats_csv(&rows)))?;
        }
        Command::Compare {
            input,
            algos,
            seeds,
            search,
        } => {
            let l = load(&input, None)?;
            let model = FitnessModel::new(&l.cdg, &l.weights());
            let configs: Vec<SearchConfig> = algos.iter().map(|&a| search_config(a.into(), &search)).collect();
            let seeds = if seeds.is_empty() { vec![search.seed] } else { seeds };
            let rows = compare_algorithms(&l.cdg, &model, &configs, &seeds)?;
            let meta = l.metadata().with("rng", RNG_NAME);
            emit(input.out.as_deref(), &(meta.render() + &report::stats_csv(&rows)))?;
        }
        Command::Repro { case } => {
            let list = match case {
                CaseArg::Atm => repro_atm()?,
                CaseArg::Briand => repro_briand()?,
            };
            print!("{list}");
            return Ok(if list.all_passed() { 0 } else { 3 });
        }
    }
    Ok(0)
}

fn compare_rows(cdg: &Cdg, result: &cito::search::SearchResult) -> Vec<ComparisonRow> {
    result
        .stats
        .iter()
        .map(|s| ComparisonRow {
            algorithm: result.algorithm.to_string(),
            seed: result.seed,
            generation: s.generation,
            avg_fitness: s.average,
            min_fitness: s.minimum,
            best_order: s.best.iter().map(|&v| cdg.id(v)).collect::<Vec<_>>().join(" "),
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
