//! Reproducible Monte Carlo experiments.
//!
//! Trial `i` of a cell runs with seed [`derive_trial_seed`]`(base, i)`, and
//! cell results are sums of per-trial indicators, so results do not depend on
//! the number of worker threads.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxgame::{
    boxbreaker_random_turn_strategy, boxmaker_random_turn_strategy, choose_interval_params, BoxLayout, BoxSpec,
    BoxWin, MinimalBoxBreaker,
};
use crate::checkers::{is_hamiltonian, is_k_connected};
use crate::engine::{play_game, ForfeitKind, GameRecord, GameSettings, Outcome, Player, Strategy};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::graphgame::{play_graph_game, BreakerKind, GraphGame, MakerKind, StrategyConfig};

/// Default directory for experiment output.
pub const OUT_DIR_ENV: &str = "RANDTURN_OUT_DIR";

pub const CSV_HEADER: &str = "game,n,p,trials,wins,freq,lo95,hi95,forfeits_maker,forfeits_breaker,mean_turns";

/// SplitMix64 finalizer of `base ^ (index * 0x9E3779B97F4A7C15)`, all
/// arithmetic wrapping mod 2^64:
///
/// ```text
/// z = base ^ (index * 0x9E3779B97F4A7C15)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// z ^ (z >> 31)
/// ```
pub fn derive_trial_seed(base_seed: u64, trial_index: u64) -> u64 {
    let mut z = base_seed ^ trial_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Wilson score interval for `wins` successes out of `trials`.
pub fn wilson_interval(wins: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = wins as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if wins == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if wins == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentGame {
    Ham,
    Kconn,
    Isolate,
    Mindeg,
    /// `Box_p` with `n` boxes; `p` is BoxBreaker's probability and "wins"
    /// counts BoxMaker wins.
    Box,
}

impl ExperimentGame {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentGame::Ham => "ham",
            ExperimentGame::Kconn => "kconn",
            ExperimentGame::Isolate => "isolate",
            ExperimentGame::Mindeg => "mindeg",
            ExperimentGame::Box => "box",
        }
    }

    fn graph_game(self) -> Option<GraphGame> {
        match self {
            ExperimentGame::Ham => Some(GraphGame::Ham),
            ExperimentGame::Kconn => Some(GraphGame::Kconn),
            ExperimentGame::Isolate => Some(GraphGame::Isolate),
            ExperimentGame::Mindeg => Some(GraphGame::Mindeg),
            ExperimentGame::Box => None,
        }
    }
}

impl std::str::FromStr for ExperimentGame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Parse(format!("unknown game '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxBreakerKind {
    /// The interval simulation strategy.
    Interval,
    /// Minimal-box rule on the real position.
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoxSettings {
    pub size: usize,
    pub breaker: BoxBreakerKind,
    pub epsilon: f64,
}

impl Default for BoxSettings {
    fn default() -> Self {
        BoxSettings {
            size: 10,
            breaker: BoxBreakerKind::Interval,
            epsilon: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: ExperimentGame,
    pub n_values: Vec<usize>,
    pub p_values: Vec<f64>,
    pub trials: usize,
    #[serde(default = "default_maker")]
    pub maker: MakerKind,
    #[serde(default = "default_breaker")]
    pub breaker: BreakerKind,
    #[serde(default)]
    pub strategy: StrategyConfig,
    #[serde(default)]
    pub box_game: BoxSettings,
    #[serde(default)]
    pub base_seed: u64,
    /// Output file stem; `.csv` and `.json` are appended.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_maker() -> MakerKind {
    MakerKind::Paper
}

fn default_breaker() -> BreakerKind {
    BreakerKind::Random
}

impl ExperimentConfig {
    pub fn new(game: ExperimentGame, n_values: Vec<usize>, p_values: Vec<f64>, trials: usize) -> Self {
        ExperimentConfig {
            game,
            n_values,
            p_values,
            trials,
            maker: default_maker(),
            breaker: default_breaker(),
            strategy: StrategyConfig::default(),
            box_game: BoxSettings::default(),
            base_seed: 0,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if let Some(p) = self.p_values.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidParameter(format!("p = {p} is outside (0, 1]")));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    /// Output stem: the configured one, else `experiment-<game>-<seed>` in
    /// `$RANDTURN_OUT_DIR` (default `randturn-out`).
    pub fn output_stem(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| {
            let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("randturn-out"), PathBuf::from);
            dir.join(format!("experiment-{}-{}", self.game.name(), self.base_seed))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub game: String,
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub wins: u64,
    pub freq: f64,
    pub lo95: f64,
    pub hi95: f64,
    pub forfeits_maker: u64,
    pub forfeits_breaker: u64,
    pub mean_turns: f64,
    /// Mean number of turns spent in each Maker stage, over the trials that
    /// reached it.
    #[serde(default)]
    pub stage_mean_turns: BTreeMap<String, f64>,
    /// Set when the cell could not be run.
    #[serde(default)]
    pub error: Option<String>,
}

impl CellResult {
    fn failed(game: &str, n: usize, p: f64, error: String) -> Self {
        CellResult {
            game: game.to_string(),
            n,
            p,
            trials: 0,
            wins: 0,
            freq: 0.0,
            lo95: 0.0,
            hi95: 1.0,
            forfeits_maker: 0,
            forfeits_breaker: 0,
            mean_turns: 0.0,
            stage_mean_turns: BTreeMap::new(),
            error: Some(error),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.game,
            self.n,
            self.p,
            self.trials,
            self.wins,
            self.freq,
            self.lo95,
            self.hi95,
            self.forfeits_maker,
            self.forfeits_breaker,
            self.mean_turns
        )
    }
}

/// What one trial contributes to its cell.
#[derive(Clone, Debug, Default)]
struct TrialSummary {
    maker_won: bool,
    strict_forfeit: Option<Player>,
    turns: usize,
    stages: Vec<(&'static str, usize)>,
}

impl TrialSummary {
    fn from_record(record: &GameRecord, stage_starts: &[(&'static str, usize)]) -> Self {
        let turns = record.turns_played();
        let stages = stage_starts
            .iter()
            .enumerate()
            .map(|(i, &(name, start))| {
                let end = stage_starts.get(i + 1).map_or(turns, |s| s.1);
                (name, end.saturating_sub(start))
            })
            .collect();
        TrialSummary {
            maker_won: record.outcome == Outcome::MakerWin,
            strict_forfeit: record
                .forfeit
                .as_ref()
                .filter(|f| f.kind == ForfeitKind::Strict)
                .map(|f| f.player),
            turns,
            stages,
        }
    }
}

fn run_trial(config: &ExperimentConfig, n: usize, p: f64, seed: u64) -> Result<TrialSummary> {
    match config.game.graph_game() {
        Some(game) => {
            let res = play_graph_game(game, n, p, config.maker, config.breaker, &config.strategy, seed)?;
            Ok(TrialSummary::from_record(&res.record, &res.maker_stages))
        }
        None => {
            let bs = &config.box_game;
            let spec = BoxSpec::uniform(n, bs.size)?;
            let win = BoxWin::new(BoxLayout::new(&spec));
            let mut maker = boxmaker_random_turn_strategy(&spec);
            let mut breaker: Box<dyn Strategy> = match bs.breaker {
                BoxBreakerKind::Interval => Box::new(boxbreaker_random_turn_strategy(&spec, p, choose_interval_params(bs.epsilon)?)),
                BoxBreakerKind::Minimal => Box::new(MinimalBoxBreaker::new(&spec)),
            };
            let record = play_game(spec.total(), &win, &mut maker, &mut breaker, &GameSettings::breaker_moves_with(p), seed);
            Ok(TrialSummary::from_record(&record, &[]))
        }
    }
}

/// Runs `config.trials` independent games at `(n, p)`. A failure to build
/// the strategies marks the cell as failed instead of returning an error.
pub fn run_cell(config: &ExperimentConfig, n: usize, p: f64) -> Result<CellResult> {
    config.validate()?;
    let game = config.game.name();
    let outcomes: Vec<Result<TrialSummary>> = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(config, n, p, derive_trial_seed(config.base_seed, i)))
        .collect();
    let mut trials = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        match o {
            Ok(t) => trials.push(t),
            Err(e) => {
                log::warn!("cell {game} n={n} p={p} failed: {e}");
                return Ok(CellResult::failed(game, n, p, e.to_string()));
            }
        }
    }
    Ok(aggregate(game, n, p, &trials))
}

/// Summarizes finished games played outside [`run_cell`], each with the
/// stage starts its Maker reported.
pub fn summarize_records<'a, I>(game: &str, n: usize, p: f64, records: I) -> CellResult
where
    I: IntoIterator<Item = (&'a GameRecord, &'a [(&'static str, usize)])>,
{
    let trials: Vec<TrialSummary> = records
        .into_iter()
        .map(|(r, stages)| TrialSummary::from_record(r, stages))
        .collect();
    aggregate(game, n, p, &trials)
}

fn aggregate(game: &str, n: usize, p: f64, trials: &[TrialSummary]) -> CellResult {
    if trials.is_empty() {
        return CellResult::failed(game, n, p, "no trials".into());
    }
    let count = trials.len() as u64;
    let wins = trials.iter().filter(|t| t.maker_won).count() as u64;
    let forfeits = |who| trials.iter().filter(|t| t.strict_forfeit == Some(who)).count() as u64;
    let mut stage_sums: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for t in trials {
        for &(name, len) in &t.stages {
            let e = stage_sums.entry(name.to_string()).or_default();
            e.0 += len;
            e.1 += 1;
        }
    }
    let (lo95, hi95) = wilson_interval(wins, count, Z95);
    CellResult {
        game: game.to_string(),
        n,
        p,
        trials: count,
        wins,
        freq: wins as f64 / count as f64,
        lo95,
        hi95,
        forfeits_maker: forfeits(Player::Maker),
        forfeits_breaker: forfeits(Player::Breaker),
        mean_turns: trials.iter().map(|t| t.turns).sum::<usize>() as f64 / count as f64,
        stage_mean_turns: stage_sums
            .into_iter()
            .map(|(k, (sum, c))| (k, sum as f64 / c as f64))
            .collect(),
        error: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GnpProperty {
    MinDegree1,
    Hamiltonian,
    KConnected(usize),
}

impl GnpProperty {
    pub fn holds(&self, g: &SimpleGraph) -> Result<bool> {
        Ok(match *self {
            GnpProperty::MinDegree1 => g.n() > 0 && g.min_degree() >= 1,
            GnpProperty::Hamiltonian => g.min_degree() >= 2 && is_hamiltonian(g).hamiltonian,
            GnpProperty::KConnected(k) => is_k_connected(g, k)?.k_connected,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub hits: u64,
    pub trials: u64,
    pub freq: f64,
    pub lo95: f64,
    pub hi95: f64,
}

impl Estimate {
    pub fn new(hits: u64, trials: u64) -> Self {
        let (lo95, hi95) = wilson_interval(hits, trials, Z95);
        Estimate {
            hits,
            trials,
            freq: if trials == 0 { 0.0 } else { hits as f64 / trials as f64 },
            lo95,
            hi95,
        }
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.lo95 <= other.hi95 && other.lo95 <= self.hi95
    }
}

pub fn sample_gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> SimpleGraph {
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Fraction of `G(n, p)` samples with the property.
pub fn gnp_property_probability<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    property: GnpProperty,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} is outside [0, 1]")));
    }
    let mut hits = 0;
    for _ in 0..trials {
        hits += property.holds(&sample_gnp(n, p, rng))? as u64;
    }
    Ok(Estimate::new(hits, trials))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
    pub summary: SweepSummary,
}

/// Runs every `(n, p)` cell on `workers` threads (0 = rayon's default).
pub fn run_sweep(config: &ExperimentConfig, workers: usize) -> Result<SweepSummary> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let cells = pool.install(|| {
        let mut cells = Vec::new();
        for &n in &config.n_values {
            for &p in &config.p_values {
                cells.push(run_cell(config, n, p)?);
            }
        }
        Ok::<_, Error>(cells)
    })?;
    Ok(SweepSummary {
        config: config.clone(),
        cells,
    })
}

pub fn render_csv(cells: &[CellResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&c.csv_row());
        out.push('\n');
    }
    out
}

/// Parses the CSV written by [`sweep_and_emit`] back into cells (without the
/// stage breakdown and error fields).
pub fn parse_csv(text: &str) -> Result<Vec<CellResult>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header '{}'", header.join(","))));
    }
    let mut cells = Vec::new();
    for row in reader.records() {
        let row = row?;
        let f = |i: usize| -> Result<f64> { row[i].parse().map_err(|_| Error::Parse(format!("bad number '{}'", &row[i]))) };
        let u = |i: usize| -> Result<u64> { row[i].parse().map_err(|_| Error::Parse(format!("bad count '{}'", &row[i]))) };
        cells.push(CellResult {
            game: row[0].to_string(),
            n: u(1)? as usize,
            p: f(2)?,
            trials: u(3)?,
            wins: u(4)?,
            freq: f(5)?,
            lo95: f(6)?,
            hi95: f(7)?,
            forfeits_maker: u(8)?,
            forfeits_breaker: u(9)?,
            mean_turns: f(10)?,
            stage_mean_turns: BTreeMap::new(),
            error: None,
        });
    }
    Ok(cells)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

/// Runs the sweep and writes `<stem>.csv` and `<stem>.json`.
pub fn sweep_and_emit(config: &ExperimentConfig, workers: usize) -> Result<SweepOutput> {
    let summary = run_sweep(config, workers)?;
    let stem = config.output_stem();
    let csv_path = stem.with_extension("csv");
    let json_path = stem.with_extension("json");
    write_file(&csv_path, &render_csv(&summary.cells))?;
    write_file(&json_path, &serde_json::to_string_pretty(&summary)?)?;
    Ok(SweepOutput {
        csv_path,
        json_path,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeds_are_stable() {
        assert_eq!(derive_trial_seed(1, 2), derive_trial_seed(1, 2));
        assert_ne!(derive_trial_seed(0, 0), derive_trial_seed(0, 1));
    }

    #[test]
    fn wilson_edges() {
        assert_eq!(wilson_interval(0, 20, 1.96).0, 0.0);
        assert_eq!(wilson_interval(20, 20, 1.96).1, 1.0);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo + hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_trials_rejected() {
        let c = ExperimentConfig::new(ExperimentGame::Isolate, vec![10], vec![0.5], 0);
        assert!(run_cell(&c, 10, 0.5).is_err());
    }

    #[test]
    fn box_cell_with_certain_breaker() {
        let mut c = ExperimentConfig::new(ExperimentGame::Box, vec![20], vec![1.0], 5);
        c.box_game.breaker = BoxBreakerKind::Minimal;
        let cell = run_cell(&c, 20, 1.0).unwrap();
        assert_eq!(cell.wins, 0);
        assert_eq!(cell.trials, 5);
    }

    #[test]
    fn failed_cell_is_marked() {
        let mut c = ExperimentConfig::new(ExperimentGame::Mindeg, vec![10], vec![0.5], 3);
        c.strategy.d = 8;
        let cell = run_cell(&c, 10, 0.5).unwrap();
        assert!(cell.error.is_some());
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(gnp_property_probability(8, 1.0, GnpProperty::Hamiltonian, 5, &mut rng).unwrap().freq, 1.0);
        assert_eq!(gnp_property_probability(8, 0.0, GnpProperty::MinDegree1, 5, &mut rng).unwrap().freq, 0.0);
    }

    #[test]
    fn game_names() {
        assert_eq!("box".parse::<ExperimentGame>().unwrap(), ExperimentGame::Box);
        assert!("chess".parse::<ExperimentGame>().is_err());
    }
}
