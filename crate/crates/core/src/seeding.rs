//! Node pricing, budgets and seed selection (degree, eigenvector and
//! Rank-Degree sampling).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample as sample_indices;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng;
use crate::Player;

/// Slack allowed when comparing a cost against a remaining budget.
const BUDGET_SLACK: f64 = 1e-12;

/// Scores closer than this are ranked as ties (broken by node id).
pub const RANK_RESOLUTION: f64 = 1e-9;

/// Node prices `c_i = d_i / d_ct`, with `d_ct` the median degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    pub central_degree: f64,
    pub cost_of: Vec<f64>,
}

impl CostTable {
    pub fn cost(&self, v: NodeId) -> f64 {
        self.cost_of[v]
    }
}

/// Median of the degree multiset; the mean of the two middle values for an
/// even node count.
pub fn median_degree(g: &Graph) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut d = g.degrees();
    d.sort_unstable();
    let n = d.len();
    Ok(if n % 2 == 1 {
        d[n / 2] as f64
    } else {
        (d[n / 2 - 1] + d[n / 2]) as f64 / 2.0
    })
}

pub fn compute_costs(g: &Graph) -> Result<CostTable> {
    let central_degree = median_degree(g)?;
    if central_degree == 0.0 {
        return Err(Error::ZeroCentralDegree);
    }
    let cost_of = g
        .degrees()
        .into_iter()
        .map(|d| d as f64 / central_degree)
        .collect();
    Ok(CostTable {
        central_degree,
        cost_of,
    })
}

/// A player's seed budget. Starts at one unit unless configured otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerBudget {
    pub player: Player,
    pub initial: f64,
    pub remaining: f64,
}

impl PlayerBudget {
    pub fn new(player: Player, amount: f64) -> Result<Self> {
        if !(amount >= 0.0 && amount.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "budget {amount} must be finite and >= 0"
            )));
        }
        Ok(Self {
            player,
            initial: amount,
            remaining: amount,
        })
    }

    pub fn unit(player: Player) -> Self {
        Self::new(player, 1.0).expect("unit budget")
    }

    pub fn can_afford(&self, cost: f64) -> bool {
        cost <= self.remaining + BUDGET_SLACK
    }

    pub fn spend(&mut self, cost: f64) -> Result<()> {
        if !self.can_afford(cost) {
            return Err(Error::NoAffordableSeed {
                player: self.player.number(),
                budget: self.remaining,
            });
        }
        self.remaining = (self.remaining - cost).max(0.0);
        Ok(())
    }

    pub fn spent(&self) -> f64 {
        self.initial - self.remaining
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dc,
    Ec,
    Rd,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Dc => "dc",
            Method::Ec => "ec",
            Method::Rd => "rd",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dc" => Ok(Method::Dc),
            "ec" => Ok(Method::Ec),
            "rd" => Ok(Method::Rd),
            other => Err(Error::InvalidParameter(format!(
                "unknown seed method {other:?} (dc|ec|rd)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub method: Method,
    pub score_of: Vec<f64>,
    /// Nodes by descending score, ties by ascending id.
    pub ranking: Vec<NodeId>,
}

impl CentralityScores {
    fn new(method: Method, score_of: Vec<f64>) -> Self {
        let ranking = rank_descending(&score_of);
        Self {
            method,
            score_of,
            ranking,
        }
    }

    pub fn top(&self) -> Option<NodeId> {
        self.ranking.first().copied()
    }
}

/// Orders nodes by score (descending, quantized to [`RANK_RESOLUTION`]) then id.
pub fn rank_descending(scores: &[f64]) -> Vec<NodeId> {
    let key = |s: f64| (s / RANK_RESOLUTION).round() as i64;
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| key(scores[b]).cmp(&key(scores[a])).then(a.cmp(&b)));
    order
}

/// Normalized degree centrality `d_i / (n - 1)`.
pub fn degree_centrality(g: &Graph) -> Result<CentralityScores> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "degree centrality needs at least two nodes".into(),
        ));
    }
    let denom = (n - 1) as f64;
    let scores = g.degrees().into_iter().map(|d| d as f64 / denom).collect();
    // degrees are integers, so exact ordering by degree is what the quantized
    // ranking produces as long as 1/(n-1) > RANK_RESOLUTION
    Ok(CentralityScores::new(Method::Dc, scores))
}

pub const EC_TOLERANCE: f64 = 1e-9;
pub const EC_MAX_ITER: usize = 10_000;

/// Power iteration for the dominant adjacency eigenvector, normalized so the
/// largest entry is 1.
///
/// Starts from all ones. Each sweep replaces `χ` by `χ + Aχ` and divides by
/// the maximum; the identity shift leaves the eigenvectors unchanged but keeps
/// bipartite graphs (whose spectrum is symmetric) from oscillating. Stops when
/// no entry moves by `tol` or more.
pub fn eigenvector_centrality(g: &Graph, tol: f64, max_iter: usize) -> Result<CentralityScores> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if tol.is_nan() || tol <= 0.0 || max_iter == 0 {
        return Err(Error::InvalidParameter(
            "tol must be > 0 and max_iter >= 1".into(),
        ));
    }
    let n = g.node_count();
    let mut x = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut change = f64::INFINITY;
    for _ in 0..max_iter {
        for (v, slot) in next.iter_mut().enumerate() {
            *slot = x[v] + g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        let peak = next.iter().copied().fold(0.0, f64::max);
        if peak > 0.0 {
            next.iter_mut().for_each(|s| *s /= peak);
        }
        change = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if change < tol {
            return Ok(CentralityScores::new(Method::Ec, x));
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        last_change: change,
        last_iterate: x,
    })
}

/// `(χᵀAχ) / (χᵀχ)`.
pub fn rayleigh_quotient(g: &Graph, x: &[f64]) -> f64 {
    let num: f64 = (0..g.node_count())
        .map(|v| x[v] * g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>())
        .sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

/// `‖Aχ − λχ‖∞`.
pub fn eigen_residual(g: &Graph, x: &[f64], lambda: f64) -> f64 {
    (0..g.node_count())
        .map(|v| (g.neighbors(v).iter().map(|&u| x[u]).sum::<f64>() - lambda * x[v]).abs())
        .fold(0.0, f64::max)
}

/// Friend-selection rule of Rank-Degree sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    /// Top-1 friend per seed.
    Max,
    /// Top `⌈ρ · #friends⌉` friends per seed, `0 < ρ ≤ 1`.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankDegreeParams {
    pub initial_seeds: usize,
    pub selection: Selection,
    /// Target sample size as a fraction of the node count.
    pub target_fraction: f64,
    pub rng_seed: u64,
}

impl Default for RankDegreeParams {
    fn default() -> Self {
        Self {
            initial_seeds: 1,
            selection: Selection::Max,
            target_fraction: 0.10,
            rng_seed: 0,
        }
    }
}

impl RankDegreeParams {
    pub fn validate(&self) -> Result<()> {
        if self.initial_seeds == 0 {
            return Err(Error::InvalidParameter(
                "Rank-Degree needs at least one initial seed".into(),
            ));
        }
        if let Selection::Fraction(rho) = self.selection {
            if !(rho > 0.0 && rho <= 1.0) {
                return Err(Error::InvalidParameter(format!("rho {rho} outside (0, 1]")));
            }
        }
        if !(self.target_fraction > 0.0 && self.target_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target fraction {} outside (0, 1]",
                self.target_fraction
            )));
        }
        Ok(())
    }

    pub fn target_size(&self, n: usize) -> usize {
        ((self.target_fraction * n as f64).ceil() as usize).clamp(1, n.max(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDegreeSample {
    /// Sampled nodes, sorted.
    pub nodes: Vec<NodeId>,
    /// Selected edges in selection order, as `(seed, friend)`.
    pub edges: Vec<(NodeId, NodeId)>,
    pub target: usize,
    pub reached_target: bool,
}

/// Rank-Degree graph sampling from uniformly random initial seeds.
pub fn rank_degree_sample(g: &Graph, p: &RankDegreeParams) -> Result<RankDegreeSample> {
    rank_degree_sample_from(g, p, None)
}

/// Rank-Degree sampling; `start` overrides the random initial seeds.
///
/// Friends are ranked by their degree in the working graph (selected edges are
/// deleted after every round), ties by id. Random jumps only land on nodes
/// that still have working edges, so the walk ends either at the target size
/// or when the working graph runs out of edges.
pub fn rank_degree_sample_from(
    g: &Graph,
    p: &RankDegreeParams,
    start: Option<&[NodeId]>,
) -> Result<RankDegreeSample> {
    p.validate()?;
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let target = p.target_size(n);
    let mut rng = rng::from_seed(p.rng_seed);
    let mut working: Vec<BTreeSet<NodeId>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut live_edges = g.edge_count();
    let mut in_sample = vec![false; n];
    let mut sample_size = 0;
    let mut edges = Vec::new();

    let jump = |working: &[BTreeSet<NodeId>], rng: &mut rng::Rng| -> Vec<NodeId> {
        let candidates: Vec<NodeId> = (0..n).filter(|&v| !working[v].is_empty()).collect();
        let k = p.initial_seeds.min(candidates.len());
        let mut picked: Vec<NodeId> = sample_indices(rng, candidates.len(), k)
            .into_iter()
            .map(|i| candidates[i])
            .collect();
        picked.sort_unstable();
        picked
    };

    let mut seeds = match start {
        Some(s) => {
            for &v in s {
                g.check_node(v)?;
            }
            s.to_vec()
        }
        None => jump(&working, &mut rng),
    };

    while sample_size < target {
        if live_edges == 0 {
            break;
        }
        let mut new_seeds: Vec<NodeId> = Vec::new();
        let mut selected: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
        'round: for &w in &seeds {
            let mut friends: Vec<NodeId> = working[w].iter().copied().collect();
            if friends.is_empty() {
                continue;
            }
            friends.sort_by(|&a, &b| working[b].len().cmp(&working[a].len()).then(a.cmp(&b)));
            let k = match p.selection {
                Selection::Max => 1,
                Selection::Fraction(rho) => {
                    ((rho * friends.len() as f64).ceil() as usize).clamp(1, friends.len())
                }
            };
            for &f in &friends[..k] {
                // nodes join one at a time so the sample stops exactly at
                // the target, even mid-round
                for v in [w, f] {
                    if !in_sample[v] {
                        if sample_size == target {
                            break 'round;
                        }
                        in_sample[v] = true;
                        sample_size += 1;
                    }
                }
                if selected.insert((w.min(f), w.max(f))) {
                    edges.push((w, f));
                }
                if !new_seeds.contains(&f) {
                    new_seeds.push(f);
                }
            }
        }
        for &(a, b) in &selected {
            working[a].remove(&b);
            working[b].remove(&a);
            live_edges -= 1;
        }
        seeds = if new_seeds.is_empty() {
            jump(&working, &mut rng)
        } else {
            new_seeds
        };
    }

    let reached_target = sample_size >= target;
    if !reached_target {
        log::warn!(
            "Rank-Degree sample stopped at {sample_size} of {target} nodes: graph exhausted"
        );
    }
    let nodes = (0..n).filter(|&v| in_sample[v]).collect();
    Ok(RankDegreeSample {
        nodes,
        edges,
        target,
        reached_target,
    })
}

/// How a player picks seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedPolicy {
    pub method: Method,
    pub enforce_budget: bool,
    pub rank_degree: RankDegreeParams,
    pub ec_tolerance: f64,
    pub ec_max_iter: usize,
}

impl SeedPolicy {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            enforce_budget: false,
            rank_degree: RankDegreeParams::default(),
            ec_tolerance: EC_TOLERANCE,
            ec_max_iter: EC_MAX_ITER,
        }
    }

    pub fn with_budget(mut self, enforce: bool) -> Self {
        self.enforce_budget = enforce;
        self
    }
}

/// Seed picker for one graph and policy. Deterministic rankings (DC, EC) are
/// computed once; Rank-Degree samples afresh on every call.
#[derive(Debug, Clone)]
pub struct SeedSelector<'g> {
    graph: &'g Graph,
    policy: SeedPolicy,
    costs: CostTable,
    ranking: Option<Vec<NodeId>>,
}

impl<'g> SeedSelector<'g> {
    pub fn new(graph: &'g Graph, policy: SeedPolicy, costs: CostTable) -> Result<Self> {
        policy.rank_degree.validate()?;
        let ranking = match policy.method {
            Method::Dc => Some(degree_centrality(graph)?.ranking),
            Method::Ec => Some(
                eigenvector_centrality(graph, policy.ec_tolerance, policy.ec_max_iter)?.ranking,
            ),
            Method::Rd => None,
        };
        Ok(Self {
            graph,
            policy,
            costs,
            ranking,
        })
    }

    pub fn policy(&self) -> &SeedPolicy {
        &self.policy
    }

    pub fn costs(&self) -> &CostTable {
        &self.costs
    }

    fn candidates(&self, rng_seed: u64) -> Result<Vec<NodeId>> {
        match &self.ranking {
            Some(r) => Ok(r.clone()),
            None => {
                let params = RankDegreeParams {
                    rng_seed,
                    ..self.policy.rank_degree
                };
                let mut nodes = rank_degree_sample(self.graph, &params)?.nodes;
                nodes.sort_by(|&a, &b| {
                    self.graph
                        .degree(b)
                        .cmp(&self.graph.degree(a))
                        .then(a.cmp(&b))
                });
                Ok(nodes)
            }
        }
    }

    /// Best eligible node; spends its cost when the budget is enforced.
    pub fn select(
        &self,
        budget: &mut PlayerBudget,
        excluded: &[NodeId],
        rng_seed: u64,
    ) -> Result<NodeId> {
        let picked = self.select_many(1, budget, excluded, rng_seed)?;
        Ok(picked[0])
    }

    /// Greedy multi-seed pick: walks the candidate order and takes every
    /// eligible node until `count` seeds are chosen or nothing else fits.
    pub fn select_many(
        &self,
        count: usize,
        budget: &mut PlayerBudget,
        excluded: &[NodeId],
        rng_seed: u64,
    ) -> Result<Vec<NodeId>> {
        let mut picked = Vec::new();
        for v in self.candidates(rng_seed)? {
            if picked.len() == count {
                break;
            }
            if excluded.contains(&v) {
                continue;
            }
            let cost = self.costs.cost(v);
            if self.policy.enforce_budget {
                if !budget.can_afford(cost) {
                    continue;
                }
                budget.spend(cost)?;
            }
            picked.push(v);
        }
        if picked.is_empty() {
            return Err(Error::NoAffordableSeed {
                player: budget.player.number(),
                budget: budget.remaining,
            });
        }
        Ok(picked)
    }
}

/// One-shot seed choice for a single player.
pub fn select_seed(
    g: &Graph,
    policy: &SeedPolicy,
    costs: &CostTable,
    budget: &mut PlayerBudget,
    excluded: &[NodeId],
    rng_seed: u64,
) -> Result<NodeId> {
    SeedSelector::new(g, policy.clone(), costs.clone())?.select(budget, excluded, rng_seed)
}

/// Simultaneous choice for both players. Each picks independently; if both
/// land on the same node, player two takes its next eligible candidate.
pub fn select_pair(
    first: &SeedSelector<'_>,
    second: &SeedSelector<'_>,
    budgets: (&mut PlayerBudget, &mut PlayerBudget),
    rng_seeds: (u64, u64),
) -> Result<(NodeId, NodeId)> {
    let (b1, b2) = budgets;
    let a = first.select(b1, &[], rng_seeds.0)?;
    let mut trial = b2.clone();
    let b = second.select(&mut trial, &[], rng_seeds.1)?;
    if a != b {
        *b2 = trial;
        return Ok((a, b));
    }
    let b = second.select(b2, &[a], rng_seeds.1)?;
    Ok((a, b))
}
