//! Two-seed level cascade.
//!
//! Each information spreads over its own BFS tree rooted at its seed(s), with
//! the rival's seeds cut out. A child collects its parents' influence divided
//! by its own degree, plus the parent-only influence of same-level neighbors
//! (siblings), also divided by its degree. Thresholds then decide who counts as
//! informed, and every informed node supports the stronger information.

use std::fmt;
use std::ops::{Add, Div};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_levels_from, Graph, LevelAssignment, NodeId};
use crate::rng;
use crate::Player;

/// Numeric type an influence field can be computed in.
pub trait Influence:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Div<Output = Self>
{
    fn from_degree(d: usize) -> Self;
    fn to_f64(&self) -> f64;
}

impl Influence for f64 {
    fn from_degree(d: usize) -> Self {
        d as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Influence for Ratio<i64> {
    fn from_degree(d: usize) -> Self {
        Ratio::from_integer(d as i64)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Influence for Ratio<i128> {
    fn from_degree(d: usize) -> Self {
        Ratio::from_integer(d as i128)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Per-node adoption thresholds in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    pub theta_of: Vec<f64>,
}

impl Thresholds {
    pub fn constant(n: usize, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self {
            theta_of: vec![theta; n],
        })
    }

    pub fn theta(&self, v: NodeId) -> f64 {
        self.theta_of[v]
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "threshold {theta} outside [0, 1]"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    Constant(f64),
    Uniform,
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMode::Constant(v) => write!(f, "const:{v}"),
            ThresholdMode::Uniform => f.write_str("uniform"),
        }
    }
}

impl FromStr for ThresholdMode {
    type Err = Error;

    /// `const:<v>` or `uniform`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(ThresholdMode::Uniform);
        }
        let value = s.strip_prefix("const:").ok_or_else(|| {
            Error::InvalidParameter(format!("threshold mode {s:?} is not const:<v> or uniform"))
        })?;
        let theta: f64 = value
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad threshold value {value:?}")))?;
        check_theta(theta)?;
        Ok(ThresholdMode::Constant(theta))
    }
}

pub fn assign_thresholds(g: &Graph, mode: ThresholdMode, rng_seed: u64) -> Result<Thresholds> {
    match mode {
        ThresholdMode::Constant(theta) => Thresholds::constant(g.node_count(), theta),
        ThresholdMode::Uniform => {
            let mut rng = rng::from_seed(rng_seed);
            Ok(Thresholds {
                theta_of: (0..g.node_count()).map(|_| rng.gen::<f64>()).collect(),
            })
        }
    }
}

/// Whether sub-threshold nodes pass influence on.
#[derive(Debug, Clone, Copy)]
pub enum Forwarding<'a> {
    /// Every reached node forwards.
    All,
    /// A node forwards only when its influence reaches its threshold; a
    /// sibling forwards when its parent-only influence does.
    AboveThreshold(&'a Thresholds),
}

/// One information's influence over the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Spread<T = f64> {
    pub seeds: Vec<NodeId>,
    pub levels: LevelAssignment,
    pub alpha: Vec<T>,
    /// Influence received from parents only, before sibling terms.
    pub parent_part: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceField<T = f64> {
    pub spreads: [Spread<T>; 2],
}

impl<T> InfluenceField<T> {
    pub fn spread(&self, info: Player) -> &Spread<T> {
        &self.spreads[info.index()]
    }

    pub fn alpha(&self, info: Player, v: NodeId) -> &T {
        &self.spread(info).alpha[v]
    }

    pub fn node_count(&self) -> usize {
        self.spreads[0].alpha.len()
    }

    pub fn depth(&self) -> usize {
        self.spreads[0]
            .levels
            .depth()
            .max(self.spreads[1].levels.depth())
    }
}

/// Influence field for single seeds, in floating point.
pub fn propagate_influence(g: &Graph, seed1: NodeId, seed2: NodeId) -> Result<InfluenceField<f64>> {
    propagate_influence_with(g, &[seed1], &[seed2], Forwarding::All)
}

/// Influence field for seed sets, in any [`Influence`] type.
pub fn propagate_influence_with<T: Influence>(
    g: &Graph,
    seeds1: &[NodeId],
    seeds2: &[NodeId],
    forwarding: Forwarding<'_>,
) -> Result<InfluenceField<T>> {
    for &s in seeds1.iter().chain(seeds2) {
        g.check_node(s)?;
    }
    if let Some(&s) = seeds1.iter().find(|s| seeds2.contains(s)) {
        return Err(Error::InvalidParameter(format!(
            "node {s} is a seed for both informations"
        )));
    }
    Ok(InfluenceField {
        spreads: [
            spread_one(g, seeds1, seeds2, forwarding)?,
            spread_one(g, seeds2, seeds1, forwarding)?,
        ],
    })
}

fn spread_one<T: Influence>(
    g: &Graph,
    seeds: &[NodeId],
    rival: &[NodeId],
    forwarding: Forwarding<'_>,
) -> Result<Spread<T>> {
    let levels = bfs_levels_from(g, seeds, rival)?;
    let n = g.node_count();
    let mut alpha = vec![T::zero(); n];
    let mut parent_part = vec![T::zero(); n];
    for &s in seeds {
        alpha[s] = T::one();
        parent_part[s] = T::one();
    }
    let passes = |value: &T, v: NodeId| match forwarding {
        Forwarding::All => true,
        Forwarding::AboveThreshold(th) => value.to_f64() >= th.theta(v),
    };
    for layer in levels.levels.iter().skip(1) {
        for &ch in layer {
            let mut sum = T::zero();
            for par in levels.parents(g, ch) {
                if passes(&alpha[par], par) {
                    sum = sum + alpha[par].clone();
                }
            }
            parent_part[ch] = sum / T::from_degree(g.degree(ch));
        }
        for &ch in layer {
            let mut sum = T::zero();
            for sib in levels.siblings(g, ch) {
                if passes(&parent_part[sib], sib) {
                    sum = sum + parent_part[sib].clone();
                }
            }
            alpha[ch] = parent_part[ch].clone() + sum / T::from_degree(g.degree(ch));
        }
    }
    Ok(Spread {
        seeds: seeds.to_vec(),
        levels,
        alpha,
        parent_part,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Firm1Wins,
    Firm2Wins,
    Tie,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Firm1Wins => "FIRM1_WINS",
            Verdict::Firm2Wins => "FIRM2_WINS",
            Verdict::Tie => "TIE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cumulative fractions of the population after level `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelMetrics {
    pub level: usize,
    pub influenced: [f64; 2],
    pub supporters: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeOutcome {
    pub informed: [Vec<NodeId>; 2],
    pub informed_both: Vec<NodeId>,
    pub supporters: [Vec<NodeId>; 2],
    pub uninformed: Vec<NodeId>,
    /// Nodes whose influences tied exactly and were assigned by coin.
    pub coin_assigned: Vec<NodeId>,
    pub per_level: Vec<LevelMetrics>,
    pub verdict: Verdict,
}

impl CascadeOutcome {
    pub fn informed_of(&self, info: Player) -> &[NodeId] {
        &self.informed[info.index()]
    }

    pub fn supporters_of(&self, info: Player) -> &[NodeId] {
        &self.supporters[info.index()]
    }

    pub fn supporter_fraction(&self, info: Player, n: usize) -> f64 {
        self.supporters_of(info).len() as f64 / n as f64
    }

    pub fn informed_fraction(&self, info: Player, n: usize) -> f64 {
        self.informed_of(info).len() as f64 / n as f64
    }
}

/// Thresholds the field and assigns supporters. Exact ties go to a fair coin
/// per node, drawn in node order from `tie_rng_seed`.
pub fn classify<T: Influence>(
    field: &InfluenceField<T>,
    th: &Thresholds,
    tie_rng_seed: u64,
) -> CascadeOutcome {
    let n = field.node_count();
    let mut rng = rng::from_seed(tie_rng_seed);
    let mut informed: [Vec<NodeId>; 2] = [Vec::new(), Vec::new()];
    let mut supporters: [Vec<NodeId>; 2] = [Vec::new(), Vec::new()];
    let mut informed_both = Vec::new();
    let mut uninformed = Vec::new();
    let mut coin_assigned = Vec::new();
    for v in 0..n {
        let hit = [Player::One, Player::Two].map(|info| {
            let s = field.spread(info);
            s.levels.is_reached(v) && s.alpha[v].to_f64() >= th.theta(v)
        });
        for info in [Player::One, Player::Two] {
            if hit[info.index()] {
                informed[info.index()].push(v);
            }
        }
        let side = match hit {
            [false, false] => {
                uninformed.push(v);
                continue;
            }
            [true, false] => Player::One,
            [false, true] => Player::Two,
            [true, true] => {
                informed_both.push(v);
                let (a1, a2) = (field.alpha(Player::One, v), field.alpha(Player::Two, v));
                if a1 == a2 {
                    coin_assigned.push(v);
                    if rng.gen_bool(0.5) {
                        Player::One
                    } else {
                        Player::Two
                    }
                } else if a1 > a2 {
                    Player::One
                } else {
                    Player::Two
                }
            }
        };
        supporters[side.index()].push(v);
    }
    let verdict = match supporters[0].len().cmp(&supporters[1].len()) {
        std::cmp::Ordering::Greater => Verdict::Firm1Wins,
        std::cmp::Ordering::Less => Verdict::Firm2Wins,
        std::cmp::Ordering::Equal => Verdict::Tie,
    };
    let mut outcome = CascadeOutcome {
        informed,
        informed_both,
        supporters,
        uninformed,
        coin_assigned,
        per_level: Vec::new(),
        verdict,
    };
    outcome.per_level = per_level_metrics(field, &outcome);
    outcome
}

/// Cumulative informed and supporter fractions per level. Information `i`'s
/// node counts at level `L` once its hop distance in `i`'s tree is at most `L`.
pub fn per_level_metrics<T>(
    field: &InfluenceField<T>,
    outcome: &CascadeOutcome,
) -> Vec<LevelMetrics> {
    let n = field.node_count();
    let depth = field.depth();
    let mut informed_at = [vec![0usize; depth + 1], vec![0usize; depth + 1]];
    let mut support_at = [vec![0usize; depth + 1], vec![0usize; depth + 1]];
    for info in [Player::One, Player::Two] {
        let i = info.index();
        let levels = &field.spread(info).levels;
        for &v in &outcome.informed[i] {
            if let Some(d) = levels.level_of[v] {
                informed_at[i][d] += 1;
            }
        }
        for &v in &outcome.supporters[i] {
            if let Some(d) = levels.level_of[v] {
                support_at[i][d] += 1;
            }
        }
    }
    let mut running = [[0usize; 2]; 2];
    (0..=depth)
        .map(|level| {
            for i in 0..2 {
                running[0][i] += informed_at[i][level];
                running[1][i] += support_at[i][level];
            }
            LevelMetrics {
                level,
                influenced: running[0].map(|c| c as f64 / n as f64),
                supporters: running[1].map(|c| c as f64 / n as f64),
            }
        })
        .collect()
}
