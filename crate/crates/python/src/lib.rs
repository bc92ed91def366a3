//! Python bindings for the `randturn` crate.

use num_rational::Ratio;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use randturn::boxgame::{play_box_game, BoxSide, BoxSpec};
use randturn::checkers::{self, ExpanderMode};
use randturn::engine::{GameRecord, Outcome, Player};
use randturn::graph::SimpleGraph;
use randturn::graphgame::{self, BreakerKind, GraphGame, MakerKind, StrategyConfig};
use randturn::harness::{self, ExperimentConfig, GnpProperty};
use randturn::oracle::{self, Arithmetic, GameValue, Position};

fn err(e: randturn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = randturn::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Maker => "maker",
        Player::Breaker => "breaker",
    }
}

/// Exact values become `fractions.Fraction`, float values stay floats.
fn value_to_py(py: Python<'_>, v: GameValue) -> PyResult<Py<PyAny>> {
    match v.exact() {
        Some(r) => {
            let fraction = py.import("fractions")?.getattr("Fraction")?;
            Ok(fraction.call1((*r.numer(), *r.denom()))?.unbind())
        }
        None => Ok(v.to_f64().into_pyobject(py)?.into_any().unbind()),
    }
}

/// An undirected simple graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "randturn_py", from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: SimpleGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
            return Err(PyValueError::new_err(format!("bad edge ({u}, {v}) for n = {n}")));
        }
        Ok(PyGraph { inner: SimpleGraph::from_edges(n, &edges) })
    }

    #[staticmethod]
    #[pyo3(signature = (text, n=None))]
    fn from_edge_list(text: &str, n: Option<usize>) -> PyResult<Self> {
        Ok(PyGraph { inner: SimpleGraph::parse_edge_list(text, n).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    fn min_degree(&self) -> usize {
        self.inner.min_degree()
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    /// A Hamilton cycle as a vertex order, or None.
    fn hamilton_cycle(&self) -> Option<Vec<usize>> {
        checkers::is_hamiltonian(&self.inner).cycle
    }

    fn is_hamiltonian(&self) -> bool {
        checkers::is_hamiltonian(&self.inner).hamiltonian
    }

    /// `(k_connected, separator)`; the separator has fewer than k vertices.
    fn k_connectivity(&self, k: usize) -> PyResult<(bool, Option<Vec<usize>>)> {
        let r = checkers::is_k_connected(&self.inner, k).map_err(err)?;
        Ok((r.k_connected, r.separator))
    }

    /// `(passes, witness, inconclusive)` for `|N(S)| >= c|S|` over all
    /// `|S| <= r`. Passing `samples` switches to sampled refutation.
    #[pyo3(signature = (r, c, samples=None, seed=0))]
    fn expander(&self, r: usize, c: usize, samples: Option<usize>, seed: u64) -> PyResult<(bool, Option<Vec<usize>>, bool)> {
        let mode = match samples {
            Some(samples) => ExpanderMode::Sampled { samples, seed },
            None => ExpanderMode::Exact,
        };
        let rep = checkers::is_expander(&self.inner, r, c, mode).map_err(err)?;
        Ok((rep.passes, rep.witness, rep.inconclusive))
    }

    fn components(&self) -> Vec<Vec<usize>> {
        checkers::connected_components(&self.inner)
    }

    /// `(boosters, non_edges, partial)`.
    fn boosters(&self) -> PyResult<(usize, usize, bool)> {
        let c = checkers::count_boosters(&self.inner).map_err(err)?;
        Ok((c.count, c.non_edges, c.partial))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// The monotone family generated by a list of winning sets.
#[pyclass(name = "SetFamily", module = "randturn_py", skip_from_py_object)]
#[derive(Clone)]
struct PySetFamily {
    inner: oracle::SetFamily,
}

#[pymethods]
impl PySetFamily {
    #[new]
    fn new(n: usize, sets: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PySetFamily { inner: oracle::SetFamily::from_sets(n, &sets).map_err(err)? })
    }

    /// One winning set per line, elements separated by spaces.
    #[staticmethod]
    #[pyo3(signature = (text, n=None))]
    fn parse(text: &str, n: Option<usize>) -> PyResult<Self> {
        Ok(PySetFamily { inner: oracle::SetFamily::parse(text, n).map_err(err)? })
    }

    /// Random monotone families on `n` elements.
    #[staticmethod]
    #[pyo3(signature = (n, count, seed=0))]
    fn random_monotone(n: usize, count: usize, seed: u64) -> PyResult<Vec<Self>> {
        let families = oracle::enumerate_monotone_families(n, count, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(err)?;
        Ok(families.into_iter().map(|inner| PySetFamily { inner }).collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn minimal_sets(&self) -> Vec<Vec<usize>> {
        self.inner
            .minimal_sets()
            .iter()
            .map(|&m| (0..self.inner.n()).filter(|&e| m >> e & 1 == 1).collect())
            .collect()
    }

    fn wins(&self, elements: Vec<usize>) -> PyResult<bool> {
        let mut mask = 0u32;
        for e in elements {
            if e >= self.inner.n() {
                return Err(PyValueError::new_err(format!("element {e} out of range")));
            }
            mask |= 1 << e;
        }
        Ok(self.inner.wins(mask))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    /// Maker's winning probability under optimal play from the empty board,
    /// Maker moving with probability `p` (e.g. "1/4" or "0.25").
    #[pyo3(signature = (p, arithmetic="rational"))]
    fn game_value(&self, py: Python<'_>, p: &str, arithmetic: &str) -> PyResult<Py<PyAny>> {
        let p = oracle::parse_probability(p).map_err(err)?;
        let a: Arithmetic = parse(arithmetic)?;
        value_to_py(py, oracle::expectimax_value(&self.inner, Position::empty(), p, a).map_err(err)?)
    }

    /// Probability that a `p`-random subset contains a winning set.
    #[pyo3(signature = (p, arithmetic="rational"))]
    fn random_subset_probability(&self, py: Python<'_>, p: &str, arithmetic: &str) -> PyResult<Py<PyAny>> {
        let p: Ratio<u64> = oracle::parse_probability(p).map_err(err)?;
        let a: Arithmetic = parse(arithmetic)?;
        value_to_py(py, oracle::random_subset_win_probability(&self.inner, p, a).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("SetFamily(n={}, sets={:?})", self.inner.n(), self.minimal_sets())
    }
}

/// A finished game.
#[pyclass(name = "GameResult", module = "randturn_py", get_all)]
struct PyGameResult {
    /// "maker" or "breaker".
    winner: &'static str,
    turns: usize,
    /// `(player, element)` in play order.
    moves: Vec<(&'static str, usize)>,
    /// The player who forfeited, if anyone did.
    forfeit: Option<&'static str>,
    seed: u64,
    maker_graph: Option<PyGraph>,
    breaker_graph: Option<PyGraph>,
    /// `(stage, first turn)` as reported by Maker's strategy.
    stages: Vec<(&'static str, usize)>,
}

impl PyGameResult {
    fn from_record(r: &GameRecord) -> Self {
        PyGameResult {
            winner: match r.outcome {
                Outcome::MakerWin => "maker",
                Outcome::BreakerWin => "breaker",
            },
            turns: r.turns_played(),
            moves: r.moves.iter().map(|&(p, e)| (player_name(p), e)).collect(),
            forfeit: r.forfeit.as_ref().map(|f| player_name(f.player)),
            seed: r.seed,
            maker_graph: None,
            breaker_graph: None,
            stages: Vec::new(),
        }
    }
}

#[pymethods]
impl PyGameResult {
    fn __repr__(&self) -> String {
        format!("GameResult(winner={:?}, turns={}, forfeit={:?})", self.winner, self.turns, self.forfeit)
    }
}

/// Plays one graph game on K_n with Maker moving with probability `p`.
/// Keyword arguments override the strategy constants.
#[pyfunction]
#[pyo3(signature = (game, n, p, maker="paper", breaker="random", seed=0, k=1, **overrides))]
#[allow(clippy::too_many_arguments)]
fn play_graph_game(
    game: &str,
    n: usize,
    p: f64,
    maker: &str,
    breaker: &str,
    seed: u64,
    k: usize,
    overrides: Option<&Bound<'_, PyDict>>,
) -> PyResult<PyGameResult> {
    let game: GraphGame = parse(game)?;
    let maker: MakerKind = parse(maker)?;
    let breaker: BreakerKind = parse(breaker)?;
    let mut config = StrategyConfig::paper(k);
    if let Some(kw) = overrides {
        for (key, value) in kw.iter() {
            let key: String = key.extract()?;
            match key.as_str() {
                "d" => config.d = value.extract()?,
                "beta" => config.beta = value.extract()?,
                "c_clique" => config.c_clique = value.extract()?,
                "clique_target" => config.clique_target = value.extract()?,
                "epsilon" => config.epsilon = value.extract()?,
                "budget_stage1" => config.budget_stage1 = value.extract()?,
                "budget_stage2" => config.budget_stage2 = value.extract()?,
                "budget_stage3" => config.budget_stage3 = value.extract()?,
                "check_every" => config.check_every = value.extract()?,
                "delta" => config.delta = value.extract()?,
                other => return Err(PyValueError::new_err(format!("unknown strategy option '{other}'"))),
            }
        }
    }
    config.validate().map_err(err)?;
    let res = graphgame::play_graph_game(game, n, p, maker, breaker, &config, seed).map_err(err)?;
    let mut out = PyGameResult::from_record(&res.record);
    out.maker_graph = Some(PyGraph { inner: res.maker_graph });
    out.breaker_graph = Some(PyGraph { inner: res.breaker_graph });
    out.stages = res.maker_stages;
    Ok(out)
}

/// Plays one box game with BoxBreaker moving with probability `p`. `side`
/// is "boxmaker", "boxbreaker" or "both".
#[pyfunction]
#[pyo3(signature = (sizes, p, side="both", epsilon=0.5, seed=0))]
fn play_box(sizes: Vec<usize>, p: f64, side: &str, epsilon: f64, seed: u64) -> PyResult<PyGameResult> {
    let spec = BoxSpec::new(sizes).map_err(err)?;
    let side: BoxSide = parse(side)?;
    let rec = play_box_game(&spec, p, side, epsilon, seed).map_err(err)?;
    Ok(PyGameResult::from_record(&rec))
}

#[pyfunction]
fn derive_trial_seed(base_seed: u64, trial_index: u64) -> u64 {
    harness::derive_trial_seed(base_seed, trial_index)
}

#[pyfunction]
#[pyo3(signature = (wins, trials, z=1.959_963_984_540_054))]
fn wilson_interval(wins: u64, trials: u64, z: f64) -> (f64, f64) {
    harness::wilson_interval(wins, trials, z)
}

/// Monte Carlo estimate `(freq, lo95, hi95)` that G(n, p) has `property`:
/// "mindeg1", "ham" or "kconn" (with `k`).
#[pyfunction]
#[pyo3(signature = (n, p, property, trials, k=1, seed=0))]
fn gnp_probability(n: usize, p: f64, property: &str, trials: u64, k: usize, seed: u64) -> PyResult<(f64, f64, f64)> {
    let property = match property {
        "mindeg1" => GnpProperty::MinDegree1,
        "ham" => GnpProperty::Hamiltonian,
        "kconn" => GnpProperty::KConnected(k),
        other => return Err(PyValueError::new_err(format!("unknown property '{other}'"))),
    };
    let est = harness::gnp_property_probability(n, p, property, trials, &mut ChaCha8Rng::seed_from_u64(seed))
        .map_err(err)?;
    Ok((est.freq, est.lo95, est.hi95))
}

/// Runs the sweep described by a JSON config and returns the CSV text.
/// Nothing is written to disk.
#[pyfunction]
#[pyo3(signature = (config_json, workers=1))]
fn run_experiment(py: Python<'_>, config_json: &str, workers: usize) -> PyResult<String> {
    let config = ExperimentConfig::from_json(config_json).map_err(err)?;
    let summary = py.detach(|| harness::run_sweep(&config, workers.max(1))).map_err(err)?;
    Ok(harness::render_csv(&summary.cells))
}

#[pymodule]
fn randturn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySetFamily>()?;
    m.add_class::<PyGameResult>()?;
    m.add_function(wrap_pyfunction!(play_graph_game, m)?)?;
    m.add_function(wrap_pyfunction!(play_box, m)?)?;
    m.add_function(wrap_pyfunction!(derive_trial_seed, m)?)?;
    m.add_function(wrap_pyfunction!(wilson_interval, m)?)?;
    m.add_function(wrap_pyfunction!(gnp_probability, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add("CSV_HEADER", harness::CSV_HEADER)?;
    Ok(())
}
