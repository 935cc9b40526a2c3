//! Hotelling-style location game between the two firms.
//!
//! A firm that reached (or won over) a fraction `f` of the population owns an
//! interval of that length: firm 1 from the left end, firm 2 from the right.
//! Its position is the interval midpoint. Best responses are set-valued and
//! only defined where the equations define them; elsewhere they are reported
//! as [`ResponseSet::Undefined`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::Player;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Basis {
    Informed,
    Supporter,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Informed => "informed",
            Basis::Supporter => "supporter",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "informed" => Ok(Basis::Informed),
            "supporter" | "supporters" => Ok(Basis::Supporter),
            _ => Err(Error::InvalidParameter(format!("unknown basis '{s}'"))),
        }
    }
}

/// Set of reals in `[0, 1]` given by two endpoints that may be open or closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            lo_closed: true,
            hi,
            hi_closed: true,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        };
        let below = if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn length(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionModel {
    pub basis: Basis,
    pub frac1: f64,
    pub frac2: f64,
    pub position1: f64,
    pub position2: f64,
    pub interval1: Interval,
    pub interval2: Interval,
}

impl PositionModel {
    pub fn position(&self, player: Player) -> f64 {
        match player {
            Player::One => self.position1,
            Player::Two => self.position2,
        }
    }

    /// Share of the line claimed by both firms, `[1 - frac2, frac1]`.
    pub fn overlap(&self) -> Option<Interval> {
        let iv = Interval::closed(self.interval2.lo, self.interval1.hi);
        (!iv.is_empty()).then_some(iv)
    }
}

fn check_fraction(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

pub fn positions(frac1: f64, frac2: f64, basis: Basis) -> Result<PositionModel> {
    check_fraction("frac1", frac1)?;
    check_fraction("frac2", frac2)?;
    Ok(PositionModel {
        basis,
        frac1,
        frac2,
        position1: frac1 / 2.0,
        position2: 1.0 - frac2 / 2.0,
        interval1: Interval::closed(0.0, frac1),
        interval2: Interval::closed(1.0 - frac2, 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResponseSet {
    Interval(Interval),
    Singleton(f64),
    /// The opponent's position lies outside the cases the response is defined for.
    Undefined,
}

impl ResponseSet {
    pub fn contains(&self, x: f64) -> bool {
        match self {
            ResponseSet::Interval(iv) => iv.contains(x),
            ResponseSet::Singleton(v) => x == *v,
            ResponseSet::Undefined => false,
        }
    }

    pub fn is_defined(&self) -> bool {
        !matches!(self, ResponseSet::Undefined)
    }
}

impl fmt::Display for ResponseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseSet::Interval(iv) => iv.fmt(f),
            ResponseSet::Singleton(v) => write!(f, "{{{v}}}"),
            ResponseSet::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BestResponse {
    pub responder: Player,
    pub opponent_position: f64,
    pub response: ResponseSet,
}

/// Firm 1 against `x2`: `((1 - x2), 0.5]` if `x2 > 0.5`, `{0.5}` if `x2 = 0.5`.
/// Firm 2 against `x1`: `[0.5, (1 - x1))` if `x1 < 0.5`, `{0.5}` if `x1 = 0.5`.
/// The same rule applies to informed and supporter positions.
pub fn best_response(responder: Player, opponent_position: f64) -> Result<BestResponse> {
    check_fraction("opponent position", opponent_position)?;
    let x = opponent_position;
    let response = match responder {
        Player::One if x > 0.5 => ResponseSet::Interval(Interval {
            lo: 1.0 - x,
            lo_closed: false,
            hi: 0.5,
            hi_closed: true,
        }),
        Player::Two if x < 0.5 => ResponseSet::Interval(Interval {
            lo: 0.5,
            lo_closed: true,
            hi: 1.0 - x,
            hi_closed: false,
        }),
        _ if x == 0.5 => ResponseSet::Singleton(0.5),
        _ => ResponseSet::Undefined,
    };
    Ok(BestResponse {
        responder,
        opponent_position,
        response,
    })
}

pub const NASH_STEP: f64 = 0.01;

/// Every grid pair `(i·h, j·h)` in `[0, 1]²` where each firm's position is a
/// best response to the other's.
pub fn mutual_best_responses(step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid step must lie in (0, 1], got {step}"
        )));
    }
    let n = (1.0 / step).round() as usize;
    if ((n as f64) * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} does not divide 1"
        )));
    }
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let responses = |p: Player| -> Result<Vec<ResponseSet>> {
        grid.iter()
            .map(|&x| Ok(best_response(p, x)?.response))
            .collect()
    };
    let (br1, br2) = (responses(Player::One)?, responses(Player::Two)?);
    let mut fixed = Vec::new();
    for (i, &x1) in grid.iter().enumerate() {
        if !br2[i].is_defined() {
            continue;
        }
        for (j, &x2) in grid.iter().enumerate() {
            if br1[j].contains(x1) && br2[i].contains(x2) {
                fixed.push((x1, x2));
            }
        }
    }
    Ok(fixed)
}

/// The unique mutual best response on a grid of spacing `step`.
pub fn nash(step: f64) -> Result<(f64, f64)> {
    let fixed = mutual_best_responses(step)?;
    match fixed.as_slice() {
        [only] => Ok(*only),
        _ => Err(Error::NashNotUnique(fixed.len())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Firm1Wins,
    Firm2Wins,
    Equilibrium,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Firm1Wins => "FIRM1_WINS",
            Outcome::Firm2Wins => "FIRM2_WINS",
            Outcome::Equilibrium => "EQUILIBRIUM",
        }
    }

    pub fn mirrored(self) -> Self {
        match self {
            Outcome::Firm1Wins => Outcome::Firm2Wins,
            Outcome::Firm2Wins => Outcome::Firm1Wins,
            Outcome::Equilibrium => Outcome::Equilibrium,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginVerdict {
    pub rho1: f64,
    pub rho2: f64,
    pub margin: f64,
    pub verdict: Outcome,
}

/// Supporter fractions closer than `margin` count as an equilibrium.
pub fn margin_verdict(rho1: f64, rho2: f64, margin: f64) -> Result<MarginVerdict> {
    check_fraction("rho1", rho1)?;
    check_fraction("rho2", rho2)?;
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "margin must lie in (0, 1), got {margin}"
        )));
    }
    let verdict = if (rho1 - rho2).abs() < margin {
        Outcome::Equilibrium
    } else if rho1 > rho2 {
        Outcome::Firm1Wins
    } else {
        Outcome::Firm2Wins
    };
    Ok(MarginVerdict {
        rho1,
        rho2,
        margin,
        verdict,
    })
}
