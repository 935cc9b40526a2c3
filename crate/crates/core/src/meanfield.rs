//! Six-compartment mean-field model of two competing informations.
//!
//! Compartments: uninformed `S`, informed by one information `A` / `B`,
//! informed by both `AB`, and supporters `a` / `b`. The right-hand side is
//!
//! ```text
//! S'  = -β1 S (A + AB) - β2 S (B + AB)
//! A'  =  β1 S (A + AB) - β2 A (B + AB) - A
//! B'  =  β2 S (B + AB) - β1 B (A + AB) - B
//! AB' =  β2 A (B + AB) + β1 B (A + AB) - 2 AB
//! a'  =  A + AB
//! b'  =  B + AB
//! ```
//!
//! The derivatives sum to zero, so the total mass stays at one. The
//! expressions are written so that swapping `(A, a, β1)` with `(B, b, β2)`
//! reproduces the mirrored run bit for bit.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Values in `(-NEGATIVE_CLAMP, 0)` are rounded up to zero; anything lower is
/// a numerical failure.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Largest tolerated drift of the total mass.
pub const CONSERVATION_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompartmentState {
    /// `S`
    pub uninformed: f64,
    /// `A`
    pub informed_a: f64,
    /// `B`
    pub informed_b: f64,
    /// `AB`
    pub informed_ab: f64,
    /// `a`
    pub supporter_a: f64,
    /// `b`
    pub supporter_b: f64,
}

impl CompartmentState {
    /// `S = 1 - A0 - B0`, everything else zero.
    pub fn seeded(a0: f64, b0: f64) -> Result<Self> {
        let s = Self {
            uninformed: 1.0 - (a0 + b0),
            informed_a: a0,
            informed_b: b0,
            informed_ab: 0.0,
            supporter_a: 0.0,
            supporter_b: 0.0,
        };
        s.validate()?;
        Ok(s)
    }

    /// `S(0) = 0.999`, `A(0) = B(0) = 0.0005`.
    pub fn standard() -> Self {
        Self::seeded(0.0005, 0.0005).expect("valid initial state")
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.uninformed,
            self.informed_a,
            self.informed_b,
            self.informed_ab,
            self.supporter_a,
            self.supporter_b,
        ]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            uninformed: v[0],
            informed_a: v[1],
            informed_b: v[2],
            informed_ab: v[3],
            supporter_a: v[4],
            supporter_b: v[5],
        }
    }

    pub fn total(&self) -> f64 {
        self.to_array().iter().sum()
    }

    /// Largest active compartment, `max(A, B, AB)`.
    pub fn active(&self) -> f64 {
        self.informed_a.max(self.informed_b).max(self.informed_ab)
    }

    /// `a / (a + b)`, or `None` when nobody supports anything.
    pub fn support_ratio(&self) -> Option<f64> {
        let total = self.supporter_a + self.supporter_b;
        (total > 0.0).then(|| self.supporter_a / total)
    }

    /// The state with the two informations' roles exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            informed_a: self.informed_b,
            informed_b: self.informed_a,
            supporter_a: self.supporter_b,
            supporter_b: self.supporter_a,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.to_array();
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "compartments must be finite and >= 0: {v:?}"
            )));
        }
        if (self.total() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "compartments sum to {} instead of 1",
                self.total()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateParams {
    pub beta1: f64,
    pub beta2: f64,
}

impl RateParams {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        if !(beta1 >= 0.0 && beta2 >= 0.0 && beta1.is_finite() && beta2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rates must be finite and >= 0, got ({beta1}, {beta2})"
            )));
        }
        Ok(Self { beta1, beta2 })
    }

    pub fn mirrored(&self) -> Self {
        Self {
            beta1: self.beta2,
            beta2: self.beta1,
        }
    }
}

/// Time derivative of every compartment.
pub fn rhs(state: &CompartmentState, p: &RateParams) -> CompartmentState {
    let CompartmentState {
        uninformed: s,
        informed_a: a,
        informed_b: b,
        informed_ab: ab,
        ..
    } = *state;
    let pull_a = p.beta1 * (a + ab);
    let pull_b = p.beta2 * (b + ab);
    CompartmentState {
        uninformed: -(s * pull_a) - s * pull_b,
        informed_a: s * pull_a - a * pull_b - a,
        informed_b: s * pull_b - b * pull_a - b,
        informed_ab: a * pull_b + b * pull_a - 2.0 * ab,
        supporter_a: a + ab,
        supporter_b: b + ab,
    }
}

fn rhs_array(y: &[f64; 6], p: &RateParams) -> [f64; 6] {
    rhs(&CompartmentState::from_array(*y), p).to_array()
}

fn axpy(y: &[f64; 6], h: f64, k: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

/// One classical fourth-order Runge–Kutta step.
pub fn rk4_step(state: &CompartmentState, p: &RateParams, dt: f64) -> CompartmentState {
    let y = state.to_array();
    let k1 = rhs_array(&y, p);
    let k2 = rhs_array(&axpy(&y, dt / 2.0, &k1), p);
    let k3 = rhs_array(&axpy(&y, dt / 2.0, &k2), p);
    let k4 = rhs_array(&axpy(&y, dt, &k3), p);
    CompartmentState::from_array(std::array::from_fn(|i| {
        y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrateOptions {
    pub dt: f64,
    pub t_end: f64,
    /// Steady state once `max(A, B, AB)` drops below this.
    pub steady_tol: f64,
    /// Halt as soon as the steady state is reached.
    pub stop_at_steady: bool,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_end: 200.0,
            steady_tol: 1e-6,
            stop_at_steady: true,
        }
    }
}

impl IntegrateOptions {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be > 0, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if self.steady_tol.is_nan() || self.steady_tol < 0.0 {
            return Err(Error::InvalidParameter("steady_tol must be >= 0".into()));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CompartmentState>,
    pub steady_state_reached: bool,
    pub steady_time: Option<f64>,
}

impl Trajectory {
    pub fn last(&self) -> &CompartmentState {
        self.states
            .last()
            .expect("trajectory holds the initial state")
    }
}

/// What a run looked like without keeping every point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSummary {
    pub final_state: CompartmentState,
    pub final_time: f64,
    pub peak_a: f64,
    pub peak_b: f64,
    pub peak_ab: f64,
    pub steady_time: Option<f64>,
}

fn clamp_small_negatives(state: CompartmentState, t: f64) -> Result<CompartmentState> {
    let mut v = state.to_array();
    for x in &mut v {
        if !x.is_finite() {
            return Err(Error::Numerical {
                time: t,
                message: "non-finite compartment".into(),
            });
        }
        if *x < 0.0 {
            if *x >= -NEGATIVE_CLAMP {
                *x = 0.0;
            } else {
                return Err(Error::Numerical {
                    time: t,
                    message: format!("compartment went negative ({x:e})"),
                });
            }
        }
    }
    Ok(CompartmentState::from_array(v))
}

/// Fixed-step RK4 from `init`, calling `observe(t, state)` on the initial
/// state and after every accepted step.
pub fn integrate_with<F>(
    init: &CompartmentState,
    p: &RateParams,
    opts: &IntegrateOptions,
    mut observe: F,
) -> Result<RunSummary>
where
    F: FnMut(f64, &CompartmentState),
{
    opts.validate()?;
    init.validate()?;
    let mut state = *init;
    let mut summary = RunSummary {
        final_state: state,
        final_time: 0.0,
        peak_a: state.informed_a,
        peak_b: state.informed_b,
        peak_ab: state.informed_ab,
        steady_time: None,
    };
    observe(0.0, &state);
    if state.active() < opts.steady_tol {
        summary.steady_time = Some(0.0);
        if opts.stop_at_steady {
            return Ok(summary);
        }
    }
    for k in 1..=opts.steps() {
        let t = k as f64 * opts.dt;
        state = clamp_small_negatives(rk4_step(&state, p, opts.dt), t)?;
        let drift = (state.total() - 1.0).abs();
        if drift > CONSERVATION_LIMIT {
            return Err(Error::Numerical {
                time: t,
                message: format!("mass drifted by {drift:e}"),
            });
        }
        observe(t, &state);
        summary.final_state = state;
        summary.final_time = t;
        summary.peak_a = summary.peak_a.max(state.informed_a);
        summary.peak_b = summary.peak_b.max(state.informed_b);
        summary.peak_ab = summary.peak_ab.max(state.informed_ab);
        if summary.steady_time.is_none() && state.active() < opts.steady_tol {
            summary.steady_time = Some(t);
            if opts.stop_at_steady {
                break;
            }
        }
    }
    Ok(summary)
}

pub fn integrate(
    init: &CompartmentState,
    p: &RateParams,
    opts: &IntegrateOptions,
) -> Result<Trajectory> {
    let mut times = Vec::new();
    let mut states = Vec::new();
    let summary = integrate_with(init, p, opts, |t, s| {
        times.push(t);
        states.push(*s);
    })?;
    Ok(Trajectory {
        times,
        states,
        steady_state_reached: summary.steady_time.is_some(),
        steady_time: summary.steady_time,
    })
}

/// Inclusive, evenly spaced axis.
pub fn axis(lo: f64, hi: f64, resolution: usize) -> Result<Vec<f64>> {
    if resolution < 2 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "axis [{lo}, {hi}] with {resolution} points is invalid"
        )));
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    Ok((0..resolution).map(|i| lo + step * i as f64).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub beta1: f64,
    pub beta2: f64,
    /// `None` when the integration failed; see `error`.
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

impl GridCell {
    pub fn final_state(&self) -> Option<&CompartmentState> {
        self.summary.as_ref().map(|s| &s.final_state)
    }

    pub fn ratio(&self) -> Option<f64> {
        self.final_state().and_then(CompartmentState::support_ratio)
    }
}

/// End states over a `(β1, β2)` lattice. Cells are stored row-major with β1
/// as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub beta1: Vec<f64>,
    pub beta2: Vec<f64>,
    pub cells: Vec<GridCell>,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, j: usize) -> &GridCell {
        &self.cells[i * self.beta2.len() + j]
    }
}

pub fn sweep_grid(
    init: &CompartmentState,
    beta1_range: (f64, f64),
    beta2_range: (f64, f64),
    resolution: usize,
    opts: &IntegrateOptions,
) -> Result<SweepGrid> {
    init.validate()?;
    opts.validate()?;
    let beta1 = axis(beta1_range.0, beta1_range.1, resolution)?;
    let beta2 = axis(beta2_range.0, beta2_range.1, resolution)?;
    if beta1[0] < 0.0 || beta2[0] < 0.0 {
        return Err(Error::InvalidParameter("rates must be >= 0".into()));
    }
    let cells = (0..beta1.len() * beta2.len())
        .into_par_iter()
        .map(|k| {
            let (b1, b2) = (beta1[k / beta2.len()], beta2[k % beta2.len()]);
            let p = RateParams {
                beta1: b1,
                beta2: b2,
            };
            match integrate_with(init, &p, opts, |_, _| {}) {
                Ok(summary) => GridCell {
                    beta1: b1,
                    beta2: b2,
                    summary: Some(summary),
                    error: None,
                },
                Err(e) => GridCell {
                    beta1: b1,
                    beta2: b2,
                    summary: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    Ok(SweepGrid {
        beta1,
        beta2,
        cells,
    })
}

/// Points where `a / (a + b)` crosses 0.5, found by linear interpolation
/// between horizontally and vertically adjacent cells. Cells sitting exactly
/// on 0.5 are included as-is. Sorted by `(β1, β2)`, duplicates removed.
pub fn contour_equilibrium(grid: &SweepGrid) -> Vec<(f64, f64)> {
    contour_level(grid, 0.5)
}

pub fn contour_level(grid: &SweepGrid, level: f64) -> Vec<(f64, f64)> {
    let (rows, cols) = (grid.beta1.len(), grid.beta2.len());
    let value = |i: usize, j: usize| grid.cell(i, j).ratio().map(|r| r - level);
    let mut points = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let Some(f) = value(i, j) else { continue };
            let here = (grid.beta1[i], grid.beta2[j]);
            if f == 0.0 {
                points.push(here);
                continue;
            }
            for (ni, nj) in [(i + 1, j), (i, j + 1)] {
                if ni >= rows || nj >= cols {
                    continue;
                }
                let Some(g) = value(ni, nj) else { continue };
                if f * g < 0.0 {
                    let w = f / (f - g);
                    let there = (grid.beta1[ni], grid.beta2[nj]);
                    points.push((
                        here.0 + w * (there.0 - here.0),
                        here.1 + w * (there.1 - here.1),
                    ));
                }
            }
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite contour points"));
    points.dedup();
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn no_informers_is_absorbing() {
        let s = CompartmentState::seeded(0.0, 0.0).unwrap();
        let d = rhs(&s, &RateParams::new(3.0, 4.0).unwrap());
        assert!(d.to_array().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_rates_decay_linearly() {
        let s = CompartmentState::seeded(0.0005, 0.0005).unwrap();
        let p = RateParams::new(0.0, 0.0).unwrap();
        let d = rhs(&s, &p);
        assert_eq!(d.informed_a, -0.0005);
        assert_eq!(d.supporter_a, 0.0005);
        let opts = IntegrateOptions {
            steady_tol: 1e-12,
            ..Default::default()
        };
        let tr = integrate(&s, &p, &opts).unwrap();
        assert!(approx(tr.last().supporter_a, 0.0005, 1e-12));
    }

    #[test]
    fn derivatives_cancel() {
        let s = CompartmentState::from_array([0.4, 0.2, 0.1, 0.15, 0.1, 0.05]);
        let d = rhs(&s, &RateParams::new(7.0, 3.0).unwrap());
        assert!(d.total().abs() < 1e-15);
    }

    #[test]
    fn regimes() {
        let init = CompartmentState::standard();
        let end = |b1, b2| {
            *integrate(
                &init,
                &RateParams::new(b1, b2).unwrap(),
                &IntegrateOptions::default(),
            )
            .unwrap()
            .last()
        };
        let s = end(1.0, 20.0);
        assert!(s.supporter_b > 10.0 * s.supporter_a);
        let s = end(20.0, 10.0);
        assert!(s.supporter_a > s.supporter_b);
    }

    #[test]
    fn equal_rates_stay_symmetric() {
        let init = CompartmentState::standard();
        let tr = integrate(
            &init,
            &RateParams::new(10.0, 10.0).unwrap(),
            &IntegrateOptions::default(),
        )
        .unwrap();
        for s in &tr.states {
            assert_eq!(s.supporter_a, s.supporter_b);
        }
        assert!(tr.steady_state_reached);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CompartmentState::seeded(0.7, 0.7).is_err());
        assert!(RateParams::new(-1.0, 0.0).is_err());
        let bad = IntegrateOptions {
            dt: 0.0,
            ..Default::default()
        };
        assert!(integrate(
            &CompartmentState::standard(),
            &RateParams::new(1.0, 1.0).unwrap(),
            &bad
        )
        .is_err());
    }

    #[test]
    fn huge_step_is_reported() {
        let opts = IntegrateOptions {
            dt: 2.0,
            t_end: 50.0,
            ..Default::default()
        };
        let r = integrate(
            &CompartmentState::standard(),
            &RateParams::new(20.0, 20.0).unwrap(),
            &opts,
        );
        assert!(matches!(r, Err(Error::Numerical { .. })), "{r:?}");
    }

    #[test]
    fn small_grid_diagonal_and_contour() {
        let grid = sweep_grid(
            &CompartmentState::standard(),
            (0.0, 4.0),
            (0.0, 4.0),
            5,
            &IntegrateOptions::default(),
        )
        .unwrap();
        for i in 0..5 {
            assert_eq!(grid.cell(i, i).ratio(), Some(0.5));
        }
        // β1 = 0: information 1 never spreads beyond its initial share
        for j in 0..5 {
            let s = grid.cell(0, j).final_state().unwrap();
            assert!(
                s.supporter_a <= 0.0005 + 1e-9 && s.supporter_a > 0.0004,
                "{}",
                s.supporter_a
            );
        }
        let contour = contour_equilibrium(&grid);
        assert!(contour.iter().all(|&(b1, b2)| (b1 - b2).abs() < 1.0));
        for i in 0..5 {
            assert!(contour.contains(&(grid.beta1[i], grid.beta2[i])));
        }
    }

    #[test]
    fn contour_interpolates_crossings() {
        let mk = |b1: f64, b2: f64, a: f64| GridCell {
            beta1: b1,
            beta2: b2,
            summary: Some(RunSummary {
                final_state: CompartmentState::from_array([0.0, 0.0, 0.0, 0.0, a, 1.0 - a]),
                final_time: 0.0,
                peak_a: 0.0,
                peak_b: 0.0,
                peak_ab: 0.0,
                steady_time: None,
            }),
            error: None,
        };
        let grid = SweepGrid {
            beta1: vec![0.0, 1.0],
            beta2: vec![0.0, 1.0],
            cells: vec![
                mk(0.0, 0.0, 0.4),
                mk(0.0, 1.0, 0.4),
                mk(1.0, 0.0, 0.8),
                mk(1.0, 1.0, 0.8),
            ],
        };
        let c = contour_equilibrium(&grid);
        assert_eq!(c.len(), 2);
        for (b1, _) in c {
            assert!(approx(b1, 0.25, 1e-12));
        }
    }

    #[test]
    fn contour_skips_empty_cells() {
        let grid = SweepGrid {
            beta1: vec![0.0, 1.0],
            beta2: vec![0.0],
            cells: vec![
                GridCell {
                    beta1: 0.0,
                    beta2: 0.0,
                    summary: None,
                    error: Some("x".into()),
                },
                GridCell {
                    beta1: 1.0,
                    beta2: 0.0,
                    summary: None,
                    error: Some("x".into()),
                },
            ],
        };
        assert!(contour_equilibrium(&grid).is_empty());
    }
}
