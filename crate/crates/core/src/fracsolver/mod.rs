//! Caputo fractional initial-value problems on a uniform grid.
//!
//! The solver is the fractional Adams-Bashforth-Moulton scheme in PECE form:
//! one explicit product-rectangle prediction, one product-trapezoid
//! correction. For `D^a y = f(t, y)`, `y(0) = y0`, step `k -> k + 1` is
//!
//! ```text
//! y^P_{k+1} = y0 + 1/Gamma(a) * sum_{j=0}^{k} b_{j,k+1} f_j
//! y_{k+1}   = y0 + 1/Gamma(a) * ( sum_{j=0}^{k} a_{j,k+1} f_j
//!                                 + a_{k+1,k+1} f(t_{k+1}, y^P_{k+1}) )
//! ```
//!
//! with `f_j = f(t_j, y_j)` cached for the whole history. Every step walks the
//! full history, so a solve of `N` steps costs `O(N^2)` multiply-adds. At
//! `a = 1` the weights collapse to the rectangle and trapezoid rules and the
//! scheme is Heun's method.
//!
//! ```
//! use fracmal::fracsolver::{solve, FnSystem, FractionalOrder, TimeGrid};
//!
//! // D^0.8 y = -y, y(0) = 1
//! let decay = FnSystem::new(1, |_t, y: &[f64], dy: &mut [f64]| dy[0] = -y[0]);
//! let order = FractionalOrder::new(0.8).unwrap();
//! let grid = TimeGrid::new(0.01, 100).unwrap();
//! let traj = solve(&decay, &[1.0], order, grid).unwrap();
//! assert_eq!(traj.len(), 101);
//! assert!(traj.final_state()[0] < 1.0);
//! ```

mod stepper;
mod weights;

pub use stepper::{History, PredictorCorrector};
pub use weights::{corrector_weight, predictor_weight, WeightTable};

use thiserror::Error;

/// Errors raised while setting up or running a fractional solve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("fractional order must lie in (0, 1], got {0}")]
    InvalidOrder(f64),
    #[error("step size must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("a time grid needs at least one step")]
    EmptyGrid,
    #[error("weight index j = {j} outside [0, {max_j}] for k = {k}")]
    WeightIndex { j: usize, k: usize, max_j: usize },
    #[error("initial state has length {got}, system dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite state encountered at step {step}")]
    NonFinite { step: usize },
    #[error("all {0} grid steps have already been taken")]
    GridExhausted(usize),
}

/// Caputo order `alpha` in `(0, 1]`, shared by every equation of a system.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// The integer-order limit.
    pub const CLASSICAL: FractionalOrder = FractionalOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self, SolverError> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(SolverError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 / Gamma(alpha)`.
    pub fn inv_gamma(self) -> f64 {
        1.0 / statrs::function::gamma::gamma(self.0)
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = SolverError;

    fn try_from(alpha: f64) -> Result<Self, Self::Error> {
        Self::new(alpha)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(o: FractionalOrder) -> f64 {
        o.0
    }
}

/// Uniform grid `t_k = k h`, `k = 0..=n_steps`, anchored at `t0 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    step: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(step: f64, n_steps: usize) -> Result<Self, SolverError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(SolverError::InvalidStep(step));
        }
        if n_steps == 0 {
            return Err(SolverError::EmptyGrid);
        }
        Ok(Self { step, n_steps })
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.step
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.n_steps)
    }
}

/// Right-hand side `f(t, y)` of a system `D^a y = f(t, y)` of fixed dimension.
pub trait SystemFunction {
    fn dimension(&self) -> usize;

    /// Writes `f(t, y)` into `dydt`. Both slices have length `dimension()`.
    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]);
}

impl<S: SystemFunction + ?Sized> SystemFunction for &S {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        (**self).eval(t, y, dydt)
    }
}

/// Adapts a closure to [`SystemFunction`].
#[derive(Clone)]
pub struct FnSystem<F> {
    dimension: usize,
    f: F,
}

impl<F> FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F> SystemFunction for FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn eval(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        (self.f)(t, y, dydt)
    }
}

/// States produced by a solve, one per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    order: FractionalOrder,
    dimension: usize,
    states: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn from_parts(
        grid: TimeGrid,
        order: FractionalOrder,
        dimension: usize,
        states: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(states.len() % dimension, 0);
        Self {
            grid,
            order,
            dimension,
            states,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of stored states (`n_steps + 1` for a completed solve).
    pub fn len(&self) -> usize {
        self.states.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.time(k)
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k * self.dimension..(k + 1) * self.dimension]
    }

    pub fn initial_state(&self) -> &[f64] {
        self.state(0)
    }

    pub fn final_state(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// Iterates over `(t_k, y_k)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.states
            .chunks_exact(self.dimension)
            .enumerate()
            .map(move |(k, y)| (self.grid.time(k), y))
    }

    /// Largest componentwise deviation from `other` over the shared grid points.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrates `D^a y = f(t, y)`, `y(0) = y0` over `grid` in PECE mode.
///
/// Aborts with [`SolverError::NonFinite`] at the first step producing an
/// overflowed or NaN component.
pub fn solve<S>(
    system: &S,
    y0: &[f64],
    order: FractionalOrder,
    grid: TimeGrid,
) -> Result<Trajectory, SolverError>
where
    S: SystemFunction + ?Sized,
{
    let mut stepper = PredictorCorrector::new(system, y0, order, grid)?;
    for _ in 0..grid.n_steps() {
        stepper.step()?;
    }
    Ok(stepper.into_trajectory())
}
