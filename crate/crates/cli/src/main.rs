use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use randturn::boxgame::{play_box_game, BoxSide, BoxSpec};
use randturn::checkers::{connected_components, count_boosters, is_expander, is_hamiltonian, is_k_connected, ExpanderMode};
use randturn::engine::GameRecord;
use randturn::graph::SimpleGraph;
use randturn::graphgame::{play_graph_game, BreakerKind, GraphGame, MakerKind, StrategyConfig};
use randturn::harness::{
    derive_trial_seed, render_csv, run_cell, summarize_records, sweep_and_emit, CellResult, ExperimentConfig,
    ExperimentGame,
};
use randturn::oracle::{
    enumerate_monotone_families, expectimax_value, parse_probability, random_subset_win_probability, Arithmetic,
    Position, SetFamily,
};

#[derive(Parser)]
#[command(name = "randturn", version, about = "Random-turn Maker-Breaker games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play the box game with BoxBreaker moving with probability p.
    Box(BoxArgs),
    /// Play a graph game on K_n with Maker moving with probability p.
    Play(PlayArgs),
    /// Test a property of a graph given as an edge list.
    Check(CheckArgs),
    /// Compare optimal play with the random-subset probability.
    Oracle(OracleArgs),
    /// Run a sweep described by a JSON config.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Boxmaker,
    Boxbreaker,
    Both,
}

#[derive(Args)]
struct BoxArgs {
    /// Number of boxes (with --uniform-size).
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated box sizes.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["n", "uniform_size"])]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    uniform_size: Option<usize>,
    /// BoxBreaker's probability of moving.
    #[arg(long)]
    p: f64,
    /// Which side plays its strategy; the other plays uniformly at random.
    #[arg(long, value_enum, default_value = "both")]
    side: Side,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long)]
    game: GraphGame,
    #[arg(long)]
    n: usize,
    /// Maker's probability of moving.
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Breaker's clique size is max(2, round(c / p)).
    #[arg(long)]
    clique_const: Option<f64>,
    #[arg(long)]
    budget_stage1: Option<usize>,
    #[arg(long)]
    budget_stage2: Option<usize>,
    #[arg(long)]
    budget_stage3: Option<usize>,
    /// Test for a Hamilton cycle every this many Maker moves.
    #[arg(long)]
    check_every: Option<usize>,
    #[arg(long, default_value = "paper")]
    maker: MakerKind,
    #[arg(long, default_value = "random")]
    breaker: BreakerKind,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write Maker's final graph of the first trial as an edge list.
    #[arg(long)]
    dump_maker: Option<PathBuf>,
    /// Write Breaker's final graph of the first trial as an edge list.
    #[arg(long)]
    dump_breaker: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Ham,
    Kconn,
    Expander,
    Boosters,
    Components,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Args)]
struct CheckArgs {
    /// Edge-list files, one "u v" pair per line.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long, value_enum)]
    property: Property,
    /// Vertex count; defaults to one more than the largest label.
    #[arg(long)]
    vertices: Option<usize>,
    /// Largest set size tested for expansion.
    #[arg(long = "R", default_value_t = 1)]
    r: usize,
    /// Expansion factor.
    #[arg(long, default_value_t = 2)]
    c: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    board_size: usize,
    /// A family file or "random-monotone".
    #[arg(long)]
    family: String,
    /// Families drawn with random-monotone.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Probabilities such as 1/4 or 0.25.
    #[arg(long, value_delimiter = ',', default_value = "1/2")]
    p: Vec<String>,
    #[arg(long, default_value = "rational")]
    arithmetic: Arithmetic,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON output; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Box(a) => run_box(a),
        Command::Play(a) => run_play(a),
        Command::Check(a) => run_check(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Experiment(a) => run_experiment(a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_box(a: BoxArgs) -> Result<()> {
    let spec = match (&a.sizes, a.n, a.uniform_size) {
        (Some(sizes), _, _) => BoxSpec::new(sizes.clone())?,
        (None, Some(n), Some(size)) => BoxSpec::uniform(n, size)?,
        _ => bail!("give --sizes, or --n with --uniform-size"),
    };
    let side = match a.side {
        Side::Boxmaker => BoxSide::BoxMaker,
        Side::Boxbreaker => BoxSide::BoxBreaker,
        Side::Both => BoxSide::Both,
    };
    let records: Vec<GameRecord> = (0..a.trials)
        .into_par_iter()
        .map(|i| play_box_game(&spec, a.p, side, a.epsilon, derive_trial_seed(a.seed, i)))
        .collect::<randturn::Result<_>>()?;
    let cell = summarize_records("box", spec.n(), a.p, records.iter().map(|r| (r, &[][..])));
    emit(a.out.as_deref(), &render_csv(&[cell]))
}

fn run_play(a: PlayArgs) -> Result<()> {
    let mut strategy = StrategyConfig::paper(a.k);
    if let Some(d) = a.d {
        strategy.d = d;
    }
    if let Some(beta) = a.beta {
        strategy.beta = beta;
    }
    if let Some(c) = a.clique_const {
        strategy.c_clique = c;
    }
    if let Some(every) = a.check_every {
        strategy.check_every = every;
    }
    strategy.budget_stage1 = a.budget_stage1;
    strategy.budget_stage2 = a.budget_stage2;
    strategy.budget_stage3 = a.budget_stage3;
    strategy.validate()?;

    if a.dump_maker.is_some() || a.dump_breaker.is_some() {
        let first = play_graph_game(a.game, a.n, a.p, a.maker, a.breaker, &strategy, derive_trial_seed(a.seed, 0))?;
        if let Some(path) = &a.dump_maker {
            emit(Some(path), &first.maker_graph.to_edge_list())?;
        }
        if let Some(path) = &a.dump_breaker {
            emit(Some(path), &first.breaker_graph.to_edge_list())?;
        }
    }

    let game = match a.game {
        GraphGame::Ham => ExperimentGame::Ham,
        GraphGame::Kconn => ExperimentGame::Kconn,
        GraphGame::Isolate => ExperimentGame::Isolate,
        GraphGame::Mindeg => ExperimentGame::Mindeg,
    };
    let mut config = ExperimentConfig::new(game, vec![a.n], vec![a.p], a.trials);
    config.maker = a.maker;
    config.breaker = a.breaker;
    config.strategy = strategy;
    config.base_seed = a.seed;
    let cell: CellResult = run_cell(&config, a.n, a.p)?;
    if let Some(err) = &cell.error {
        bail!("{err}");
    }
    emit(a.out.as_deref(), &render_csv(&[cell]))
}

fn check_one(a: &CheckArgs, g: &SimpleGraph) -> Result<Value> {
    Ok(match a.property {
        Property::Ham => {
            let r = is_hamiltonian(g);
            json!({ "hamiltonian": r.hamiltonian, "cycle": r.cycle })
        }
        Property::Kconn => {
            let r = is_k_connected(g, a.k)?;
            json!({ "k": a.k, "k_connected": r.k_connected, "separator": r.separator })
        }
        Property::Expander => {
            let mode = match a.mode {
                Mode::Exact => ExpanderMode::Exact,
                Mode::Sampled => ExpanderMode::Sampled { samples: a.samples, seed: a.seed },
            };
            serde_json::to_value(is_expander(g, a.r, a.c, mode)?)?
        }
        Property::Boosters => {
            let r = count_boosters(g)?;
            json!({ "boosters": r.count, "non_edges": r.non_edges, "partial": r.partial })
        }
        Property::Components => {
            let comps = connected_components(g);
            json!({ "count": comps.len(), "components": comps })
        }
    })
}

fn run_check(a: CheckArgs) -> Result<()> {
    for path in &a.files {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let g = SimpleGraph::parse_edge_list(&text, a.vertices)?;
        let mut report = check_one(&a, &g)?;
        report["file"] = json!(path.display().to_string());
        report["n"] = json!(g.n());
        report["edges"] = json!(g.edge_count());
        println!("{report}");
    }
    Ok(())
}

fn run_oracle(a: OracleArgs) -> Result<()> {
    let families = if a.family == "random-monotone" {
        enumerate_monotone_families(a.board_size, a.count, &mut ChaCha8Rng::seed_from_u64(a.seed))?
    } else {
        let text = fs::read_to_string(&a.family).with_context(|| format!("reading {}", a.family))?;
        vec![SetFamily::parse(&text, Some(a.board_size))?]
    };
    let ps: Vec<Ratio<u64>> = a.p.iter().map(|s| parse_probability(s)).collect::<randturn::Result<_>>()?;
    let mut out = Vec::with_capacity(families.len());
    for family in &families {
        let mut values = Vec::with_capacity(ps.len());
        for &p in &ps {
            let game = expectimax_value(family, Position::empty(), p, a.arithmetic)?;
            let subset = random_subset_win_probability(family, p, a.arithmetic)?;
            let agree = match (game.exact(), subset.exact()) {
                (Some(x), Some(y)) => x == y,
                _ => (game.to_f64() - subset.to_f64()).abs() <= 1e-12,
            };
            values.push(json!({
                "p": p.to_string(),
                "expectimax": game.to_string(),
                "random_subset": subset.to_string(),
                "expectimax_f64": game.to_f64(),
                "random_subset_f64": subset.to_f64(),
                "agree": agree,
            }));
        }
        out.push(json!({ "family": family.to_text(), "values": values }));
    }
    let doc = json!({ "board_size": a.board_size, "families": out });
    emit(a.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&doc)?))
}

fn run_experiment(a: ExperimentArgs) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let config = ExperimentConfig::from_json(&text)?;
    let out = sweep_and_emit(&config, a.workers.max(1))?;
    println!("{}", out.csv_path.display());
    println!("{}", out.json_path.display());
    Ok(())
}
