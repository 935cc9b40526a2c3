//! Replicated cascade experiments.
//!
//! Each replication prices the nodes, picks both seeds, spreads the two
//! informations and classifies every node. Replication `r` draws all of its
//! randomness from sub-stream `r + 1` of the configured seed; sub-stream 0
//! builds synthetic graphs. Results are therefore independent of the worker
//! count.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{
    assign_thresholds, classify, propagate_influence_with, CascadeOutcome, Forwarding,
    LevelMetrics, ThresholdMode, Verdict,
};
use crate::error::{Error, Result};
use crate::game::{margin_verdict, MarginVerdict, DEFAULT_MARGIN};
use crate::graph::{gen_er, gen_regular, load_edgelist, spanning_tree, Graph, NodeId};
use crate::output::{num, opt_num, save_table};
use crate::rng;
use crate::seeding::{
    compute_costs, select_pair, Method, PlayerBudget, RankDegreeParams, SeedPolicy, SeedSelector,
};
use crate::Player;

pub const DEFAULT_REPLICATIONS: usize = 20;
pub const OUT_ENV: &str = "CASCADE_DUEL_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Er,
    Regular,
    Tree,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Er => "er",
            GenKind::Regular => "regular",
            GenKind::Tree => "tree",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(GenKind::Er),
            "regular" => Ok(GenKind::Regular),
            "tree" => Ok(GenKind::Tree),
            _ => Err(Error::InvalidParameter(format!(
                "unknown generator '{s}' (er, regular, tree)"
            ))),
        }
    }
}

/// Where the experiment graph comes from. A generator combined with a file
/// builds a synthetic counterpart of that file: the same node count and
/// (rounded) average degree, or its BFS spanning tree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSource {
    pub path: Option<PathBuf>,
    pub symmetrize: bool,
    pub generator: Option<GenKind>,
    pub nodes: Option<usize>,
    pub avg_degree: Option<f64>,
}

impl GraphSource {
    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self {
            path: Some(path.into()),
            ..Default::default()
        }
    }

    pub fn generated(kind: GenKind, nodes: usize, avg_degree: f64) -> Self {
        Self {
            generator: Some(kind),
            nodes: Some(nodes),
            avg_degree: Some(avg_degree),
            ..Default::default()
        }
    }

    pub fn resolve(&self, seed: u64) -> Result<Graph> {
        let base = match &self.path {
            Some(p) => Some(load_edgelist(p, self.symmetrize)?),
            None => None,
        };
        derive_graph(base, self.generator, self.nodes, self.avg_degree, seed)
    }
}

/// Turns an optional base graph into the experiment graph.
pub fn derive_graph(
    base: Option<Graph>,
    generator: Option<GenKind>,
    nodes: Option<usize>,
    avg_degree: Option<f64>,
    seed: u64,
) -> Result<Graph> {
    let gen_seed = rng::child_seed(&mut rng::stream(seed, 0));
    let n = nodes.or(base.as_ref().map(Graph::node_count));
    let k = avg_degree.or(base.as_ref().map(Graph::average_degree));
    match (generator, base) {
        (None, Some(g)) => Ok(g),
        (None, None) => Err(Error::InvalidParameter(
            "no graph file or generator given".into(),
        )),
        (Some(GenKind::Tree), Some(g)) => spanning_tree(&g, gen_seed),
        (Some(GenKind::Tree), None) => Err(Error::InvalidParameter(
            "the tree generator needs a graph file".into(),
        )),
        (Some(kind), _) => {
            let (n, k) = match (n, k) {
                (Some(n), Some(k)) => (n, k),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "the {kind} generator needs a node count and an average degree"
                    )))
                }
            };
            if kind == GenKind::Er {
                gen_er(n, k, gen_seed)
            } else {
                let d = k.round();
                if d < 0.0 {
                    return Err(Error::InvalidParameter(format!("degree {k} must be >= 0")));
                }
                gen_regular(n, d as usize, gen_seed)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub methods: [Method; 2],
    pub theta: ThresholdMode,
    pub enforce_budget: bool,
    pub budget: f64,
    pub replications: usize,
    pub rng_seed: u64,
    pub margin: f64,
    pub out_dir: Option<PathBuf>,
    /// 0 uses every available core.
    pub workers: usize,
    /// Seed labels used in every replication instead of selecting them.
    pub fixed_seeds: Option<[u64; 2]>,
    pub seeds_per_player: usize,
    /// Sub-threshold nodes stop forwarding influence.
    pub strict_forwarding: bool,
    pub rank_degree: RankDegreeParams,
    pub write_alpha: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            graph: GraphSource::default(),
            methods: [Method::Dc, Method::Dc],
            theta: ThresholdMode::Constant(0.0),
            enforce_budget: false,
            budget: 1.0,
            replications: DEFAULT_REPLICATIONS,
            rng_seed: 0,
            margin: DEFAULT_MARGIN,
            out_dir: None,
            workers: 0,
            fixed_seeds: None,
            seeds_per_player: 1,
            strict_forwarding: false,
            rank_degree: RankDegreeParams::default(),
            write_alpha: true,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad value {value:?} for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::InvalidParameter(format!(
            "bad boolean {value:?} for '{key}'"
        ))),
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be >= 1".into()));
        }
        if self.seeds_per_player == 0 {
            return Err(Error::InvalidParameter(
                "seeds per player must be >= 1".into(),
            ));
        }
        if !(self.margin > 0.0 && self.margin < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "margin must lie in (0, 1), got {}",
                self.margin
            )));
        }
        if !(self.budget >= 0.0 && self.budget.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "budget must be >= 0, got {}",
                self.budget
            )));
        }
        if let Some([a, b]) = self.fixed_seeds {
            if a == b {
                return Err(Error::InvalidParameter(format!(
                    "both players cannot seed node {a}"
                )));
            }
        }
        self.rank_degree.validate()
    }

    /// Applies one `key = value` setting. Keys mirror the long CLI flags.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "graph" => self.graph.path = Some(PathBuf::from(v)),
            "symmetrize" => self.graph.symmetrize = parse_bool(key, v)?,
            "gen" => self.graph.generator = Some(parse(key, v)?),
            "nodes" => self.graph.nodes = Some(parse(key, v)?),
            "degree" => self.graph.avg_degree = Some(parse(key, v)?),
            "method1" => self.methods[0] = parse(key, v)?,
            "method2" => self.methods[1] = parse(key, v)?,
            "theta" => self.theta = parse(key, v)?,
            "enforce-budget" => self.enforce_budget = parse_bool(key, v)?,
            "budget" => self.budget = parse(key, v)?,
            "reps" => self.replications = parse(key, v)?,
            "seed" => self.rng_seed = parse(key, v)?,
            "margin" => self.margin = parse(key, v)?,
            "out" => self.out_dir = Some(PathBuf::from(v)),
            "workers" => self.workers = parse(key, v)?,
            "seeds" => {
                let (a, b) = v.split_once(',').ok_or_else(|| {
                    Error::InvalidParameter(format!("seeds must be '<label>,<label>', got {v:?}"))
                })?;
                self.fixed_seeds = Some([parse(key, a)?, parse(key, b)?]);
            }
            "seeds-per-player" => self.seeds_per_player = parse(key, v)?,
            "strict" => self.strict_forwarding = parse_bool(key, v)?,
            "rd-target" => self.rank_degree.target_fraction = parse(key, v)?,
            "rd-initial" => self.rank_degree.initial_seeds = parse(key, v)?,
            "write-alpha" => self.write_alpha = parse_bool(key, v)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown setting '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Reads `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key = value, got {line:?}"),
            })?;
            self.set(k, v).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationResult {
    pub replication: usize,
    /// Seed labels per information.
    pub seeds: [Vec<u64>; 2],
    pub supporters: [usize; 2],
    pub informed: [usize; 2],
    pub coin_assigned: usize,
    pub verdict: Verdict,
    pub per_level: Vec<LevelMetrics>,
    /// `(node label, α)` for every node reached by each information.
    #[serde(skip)]
    pub alpha: [Vec<(u64, f64)>; 2],
}

impl ReplicationResult {
    pub fn final_level(&self) -> &LevelMetrics {
        self.per_level
            .last()
            .expect("the seed level is always present")
    }
}

/// Mean, unbiased variance and standard deviation over replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    /// `None` with a single replication.
    pub var: Option<f64>,
    pub std: Option<f64>,
}

impl Moments {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = (values.len() > 1)
            .then(|| values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0));
        Self {
            mean,
            var,
            std: var.map(f64::sqrt),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub info: Player,
    pub level: usize,
    pub influenced: Moments,
    pub supporters: Moments,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub nodes: usize,
    pub edges: usize,
    pub methods: [Method; 2],
    pub replications: Vec<ReplicationResult>,
    /// Per level, padded so that every replication spans the deepest tree.
    pub aggregate: Vec<AggregateRow>,
    pub final_supporters: [Moments; 2],
    pub final_influenced: [Moments; 2],
    pub margin: MarginVerdict,
}

/// Cumulative per-level series for `info`, extended with its last value up to `depth`.
fn padded(r: &ReplicationResult, info: Player, depth: usize, supporters: bool) -> Vec<f64> {
    let pick = |m: &LevelMetrics| {
        if supporters {
            m.supporters[info.index()]
        } else {
            m.influenced[info.index()]
        }
    };
    let mut series: Vec<f64> = r.per_level.iter().map(pick).collect();
    let last = *series.last().expect("non-empty level series");
    series.resize(depth + 1, last);
    series
}

pub fn aggregate(reps: &[ReplicationResult]) -> Vec<AggregateRow> {
    if reps.is_empty() {
        return Vec::new();
    }
    let depth = reps
        .iter()
        .map(|r| r.per_level.len() - 1)
        .max()
        .unwrap_or(0);
    let mut rows = Vec::new();
    for info in Player::BOTH {
        let inf: Vec<Vec<f64>> = reps.iter().map(|r| padded(r, info, depth, false)).collect();
        let sup: Vec<Vec<f64>> = reps.iter().map(|r| padded(r, info, depth, true)).collect();
        for level in 0..=depth {
            let column = |s: &[Vec<f64>]| s.iter().map(|v| v[level]).collect::<Vec<f64>>();
            rows.push(AggregateRow {
                info,
                level,
                influenced: Moments::of(&column(&inf)),
                supporters: Moments::of(&column(&sup)),
            });
        }
    }
    rows
}

struct Prepared<'g> {
    graph: &'g Graph,
    selectors: Option<[SeedSelector<'g>; 2]>,
    fixed: Option<[NodeId; 2]>,
}

fn prepare<'g>(g: &'g Graph, cfg: &ExperimentConfig) -> Result<Prepared<'g>> {
    let fixed = match cfg.fixed_seeds {
        Some([a, b]) => {
            let find = |label: u64| {
                g.node_of(label).ok_or_else(|| {
                    Error::InvalidParameter(format!("seed node {label} is not in the graph"))
                })
            };
            Some([find(a)?, find(b)?])
        }
        None => None,
    };
    let selectors = if fixed.is_some() {
        None
    } else {
        let costs = compute_costs(g)?;
        let mk = |m: Method| {
            let mut policy = SeedPolicy::new(m).with_budget(cfg.enforce_budget);
            policy.rank_degree = cfg.rank_degree;
            SeedSelector::new(g, policy, costs.clone())
        };
        Some([mk(cfg.methods[0])?, mk(cfg.methods[1])?])
    };
    Ok(Prepared {
        graph: g,
        selectors,
        fixed,
    })
}

fn choose_seeds(
    p: &Prepared<'_>,
    cfg: &ExperimentConfig,
    rd_seeds: (u64, u64),
) -> Result<[Vec<NodeId>; 2]> {
    if let Some([a, b]) = p.fixed {
        return Ok([vec![a], vec![b]]);
    }
    let [s1, s2] = p
        .selectors
        .as_ref()
        .expect("selectors exist without fixed seeds");
    let mut b1 = PlayerBudget::new(Player::One, cfg.budget)?;
    let mut b2 = PlayerBudget::new(Player::Two, cfg.budget)?;
    if cfg.seeds_per_player == 1 {
        let (a, b) = select_pair(s1, s2, (&mut b1, &mut b2), rd_seeds)?;
        return Ok([vec![a], vec![b]]);
    }
    let first = s1.select_many(cfg.seeds_per_player, &mut b1, &[], rd_seeds.0)?;
    let second = s2.select_many(cfg.seeds_per_player, &mut b2, &first, rd_seeds.1)?;
    Ok([first, second])
}

/// One replication on a prepared graph.
fn replicate(
    p: &Prepared<'_>,
    cfg: &ExperimentConfig,
    replication: usize,
) -> Result<ReplicationResult> {
    let g = p.graph;
    let mut stream = rng::stream(cfg.rng_seed, replication as u64 + 1);
    let theta_seed = rng::child_seed(&mut stream);
    let rd_seeds = (rng::child_seed(&mut stream), rng::child_seed(&mut stream));
    let tie_seed = rng::child_seed(&mut stream);

    let thresholds = assign_thresholds(g, cfg.theta, theta_seed)?;
    let seeds = choose_seeds(p, cfg, rd_seeds)?;
    let forwarding = if cfg.strict_forwarding {
        Forwarding::AboveThreshold(&thresholds)
    } else {
        Forwarding::All
    };
    let field = propagate_influence_with::<f64>(g, &seeds[0], &seeds[1], forwarding)?;
    let outcome: CascadeOutcome = classify(&field, &thresholds, tie_seed);
    let alpha = Player::BOTH.map(|info| {
        if !cfg.write_alpha {
            return Vec::new();
        }
        let spread = field.spread(info);
        (0..g.node_count())
            .filter(|&v| spread.levels.is_reached(v))
            .map(|v| (g.label(v), spread.alpha[v]))
            .collect()
    });
    Ok(ReplicationResult {
        replication,
        seeds: [0, 1].map(|i| seeds[i].iter().map(|&v| g.label(v)).collect()),
        supporters: [0, 1].map(|i| outcome.supporters[i].len()),
        informed: [0, 1].map(|i| outcome.informed[i].len()),
        coin_assigned: outcome.coin_assigned.len(),
        verdict: outcome.verdict,
        per_level: outcome.per_level,
        alpha,
    })
}

fn summarize(g: &Graph, cfg: &ExperimentConfig, reps: Vec<ReplicationResult>) -> Result<RunResult> {
    let finals = |supporters: bool| {
        Player::BOTH.map(|info| {
            let values: Vec<f64> = reps
                .iter()
                .map(|r| {
                    let m = r.final_level();
                    if supporters {
                        m.supporters[info.index()]
                    } else {
                        m.influenced[info.index()]
                    }
                })
                .collect();
            Moments::of(&values)
        })
    };
    let final_supporters = finals(true);
    let final_influenced = finals(false);
    let margin = margin_verdict(
        final_supporters[0].mean,
        final_supporters[1].mean,
        cfg.margin,
    )?;
    Ok(RunResult {
        nodes: g.node_count(),
        edges: g.edge_count(),
        methods: cfg.methods,
        aggregate: aggregate(&reps),
        replications: reps,
        final_supporters,
        final_influenced,
        margin,
    })
}

/// Runs every replication on `g`. On failure, the replications that did
/// succeed are written to the output directory before the error is returned.
pub fn run_on_graph(g: &Graph, cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let prepared = prepare(g, cfg)?;
    log::info!(
        "{} replications of {} vs {} on {} nodes, {} edges",
        cfg.replications,
        cfg.methods[0],
        cfg.methods[1],
        g.node_count(),
        g.edge_count()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| {
            Error::InvalidParameter(format!("cannot start {} workers: {e}", cfg.workers))
        })?;
    let results: Vec<Result<ReplicationResult>> = pool.install(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let res = replicate(&prepared, cfg, r);
                log::debug!("replication {r} done");
                res
            })
            .collect()
    });
    let mut done = Vec::with_capacity(results.len());
    let mut failure = None;
    for (r, res) in results.into_iter().enumerate() {
        match res {
            Ok(v) => done.push(v),
            Err(e) if failure.is_none() => failure = Some((r, e)),
            Err(_) => {}
        }
    }
    if let Some((replication, source)) = failure {
        if let Some(dir) = &cfg.out_dir {
            if !done.is_empty() {
                log::warn!(
                    "writing {} completed replications before aborting",
                    done.len()
                );
                write_replications(dir, cfg, &done)?;
            }
        }
        return Err(Error::Replication {
            replication,
            source: Box::new(source),
        });
    }
    let result = summarize(g, cfg, done)?;
    if let Some(dir) = &cfg.out_dir {
        write_result(dir, cfg, &result)?;
    }
    Ok(result)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult> {
    cfg.validate()?;
    let g = cfg.graph.resolve(cfg.rng_seed)?;
    log::info!("graph ready: {} nodes", g.node_count());
    run_on_graph(&g, cfg)
}

pub const LEVELS_FILE: &str = "levels.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const ALPHA_FILE: &str = "alpha.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const VERDICT_FILE: &str = "verdict.csv";

pub const LEVELS_HEADER: [&str; 6] = [
    "run_id",
    "method",
    "info",
    "L",
    "mu_influenced",
    "mu_supporter",
];
pub const SUMMARY_HEADER: [&str; 7] = [
    "run_id",
    "seeds1",
    "seeds2",
    "supporters1",
    "supporters2",
    "coin_assigned",
    "verdict",
];
pub const ALPHA_HEADER: [&str; 4] = ["rep", "info", "node", "alpha"];
pub const AGGREGATE_HEADER: [&str; 10] = [
    "method",
    "info",
    "L",
    "reps",
    "mu_influenced_mean",
    "mu_influenced_var",
    "mu_influenced_std",
    "mu_supporter_mean",
    "mu_supporter_var",
    "mu_supporter_std",
];
pub const VERDICT_HEADER: [&str; 4] = ["rho1", "rho2", "margin", "verdict"];

fn join_labels(labels: &[u64]) -> String {
    labels
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn level_rows(cfg: &ExperimentConfig, reps: &[ReplicationResult]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in reps {
        for info in Player::BOTH {
            for m in &r.per_level {
                rows.push(vec![
                    r.replication.to_string(),
                    cfg.methods[info.index()].to_string(),
                    info.to_string(),
                    m.level.to_string(),
                    num(m.influenced[info.index()]),
                    num(m.supporters[info.index()]),
                ]);
            }
        }
    }
    rows
}

pub fn summary_rows(reps: &[ReplicationResult]) -> Vec<Vec<String>> {
    reps.iter()
        .map(|r| {
            vec![
                r.replication.to_string(),
                join_labels(&r.seeds[0]),
                join_labels(&r.seeds[1]),
                r.supporters[0].to_string(),
                r.supporters[1].to_string(),
                r.coin_assigned.to_string(),
                r.verdict.to_string(),
            ]
        })
        .collect()
}

/// Rows ordered by replication, information, then node label.
pub fn alpha_rows(reps: &[ReplicationResult]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for r in reps {
        for info in Player::BOTH {
            let mut entries = r.alpha[info.index()].clone();
            entries.sort_by_key(|&(label, _)| label);
            for (label, a) in entries {
                rows.push(vec![
                    r.replication.to_string(),
                    info.to_string(),
                    label.to_string(),
                    num(a),
                ]);
            }
        }
    }
    rows
}

pub fn aggregate_rows(
    cfg: &ExperimentConfig,
    n_reps: usize,
    agg: &[AggregateRow],
) -> Vec<Vec<String>> {
    agg.iter()
        .map(|a| {
            vec![
                cfg.methods[a.info.index()].to_string(),
                a.info.to_string(),
                a.level.to_string(),
                n_reps.to_string(),
                num(a.influenced.mean),
                opt_num(a.influenced.var),
                opt_num(a.influenced.std),
                num(a.supporters.mean),
                opt_num(a.supporters.var),
                opt_num(a.supporters.std),
            ]
        })
        .collect()
}

fn write_replications(
    dir: &Path,
    cfg: &ExperimentConfig,
    reps: &[ReplicationResult],
) -> Result<()> {
    save_table(
        &dir.join(LEVELS_FILE),
        &LEVELS_HEADER,
        level_rows(cfg, reps),
    )?;
    save_table(&dir.join(SUMMARY_FILE), &SUMMARY_HEADER, summary_rows(reps))?;
    if cfg.write_alpha {
        save_table(&dir.join(ALPHA_FILE), &ALPHA_HEADER, alpha_rows(reps))?;
    }
    Ok(())
}

pub fn write_result(dir: &Path, cfg: &ExperimentConfig, result: &RunResult) -> Result<()> {
    write_replications(dir, cfg, &result.replications)?;
    save_table(
        &dir.join(AGGREGATE_FILE),
        &AGGREGATE_HEADER,
        aggregate_rows(cfg, result.replications.len(), &result.aggregate),
    )?;
    let m = &result.margin;
    save_table(
        &dir.join(VERDICT_FILE),
        &VERDICT_HEADER,
        vec![vec![
            num(m.rho1),
            num(m.rho2),
            num(m.margin),
            m.verdict.to_string(),
        ]],
    )
}
