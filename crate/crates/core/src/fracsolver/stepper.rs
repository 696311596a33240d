use super::{FractionalOrder, SolverError, SystemFunction, TimeGrid, Trajectory, WeightTable};

/// States and cached right-hand-side evaluations `f_j = f(t_j, y_j)` of the
/// steps taken so far.
#[derive(Debug, Clone)]
pub struct History {
    dimension: usize,
    states: Vec<f64>,
    derivatives: Vec<f64>,
}

impl History {
    fn with_capacity(dimension: usize, points: usize) -> Self {
        Self {
            dimension,
            states: Vec::with_capacity(dimension * points),
            derivatives: Vec::with_capacity(dimension * points),
        }
    }

    fn push(&mut self, state: &[f64], derivative: &[f64]) {
        self.states.extend_from_slice(state);
        self.derivatives.extend_from_slice(derivative);
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.states.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, j: usize) -> &[f64] {
        &self.states[j * self.dimension..(j + 1) * self.dimension]
    }

    pub fn derivative(&self, j: usize) -> &[f64] {
        &self.derivatives[j * self.dimension..(j + 1) * self.dimension]
    }
}

/// Step-by-step PECE driver. [`solve`](super::solve) is the usual entry point;
/// this type exposes the individual predict and correct stages.
pub struct PredictorCorrector<'s, S: SystemFunction + ?Sized> {
    system: &'s S,
    order: FractionalOrder,
    grid: TimeGrid,
    inv_gamma: f64,
    weights: WeightTable,
    history: History,
}

impl<'s, S: SystemFunction + ?Sized> PredictorCorrector<'s, S> {
    pub fn new(
        system: &'s S,
        y0: &[f64],
        order: FractionalOrder,
        grid: TimeGrid,
    ) -> Result<Self, SolverError> {
        let dimension = system.dimension();
        if y0.len() != dimension {
            return Err(SolverError::DimensionMismatch {
                expected: dimension,
                got: y0.len(),
            });
        }
        let weights = WeightTable::new(order, grid.step(), grid.n_steps())?;
        let mut f0 = vec![0.0; dimension];
        system.eval(0.0, y0, &mut f0);
        if !all_finite(y0) || !all_finite(&f0) {
            return Err(SolverError::NonFinite { step: 0 });
        }
        let mut history = History::with_capacity(dimension, grid.n_steps() + 1);
        history.push(y0, &f0);
        Ok(Self {
            system,
            order,
            grid,
            inv_gamma: order.inv_gamma(),
            weights,
            history,
        })
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    /// Index `k` of the most recent state.
    pub fn current_step(&self) -> usize {
        self.history.len() - 1
    }

    fn y0(&self) -> &[f64] {
        self.history.state(0)
    }

    /// `y^P_{k+1}` from the current history.
    pub fn predict(&self) -> Vec<f64> {
        let k = self.current_step();
        let mut sum = vec![0.0; self.history.dimension];
        for j in 0..=k {
            let w = self.weights.predictor_by_lag(k - j);
            axpy(&mut sum, w, self.history.derivative(j));
        }
        self.anchor(sum)
    }

    /// `y_{k+1}` given the predicted point `y^P_{k+1}`.
    pub fn correct(&self, predicted: &[f64]) -> Vec<f64> {
        let k = self.current_step();
        let mut sum = vec![0.0; self.history.dimension];
        self.accumulate_corrector(k, &mut sum);
        let mut f_pred = vec![0.0; self.history.dimension];
        self.system
            .eval(self.grid.time(k + 1), predicted, &mut f_pred);
        axpy(&mut sum, self.weights.corrector_last(), &f_pred);
        self.anchor(sum)
    }

    fn accumulate_corrector(&self, k: usize, sum: &mut [f64]) {
        axpy(
            sum,
            self.weights.corrector_start(k),
            self.history.derivative(0),
        );
        for j in 1..=k {
            let w = self.weights.interior_by_lag(k - j);
            axpy(sum, w, self.history.derivative(j));
        }
    }

    /// `y0 + sum / Gamma(alpha)`, in place.
    fn anchor(&self, mut sum: Vec<f64>) -> Vec<f64> {
        for (s, y) in sum.iter_mut().zip(self.y0()) {
            *s = y + self.inv_gamma * *s;
        }
        sum
    }

    /// Advances one grid step. Both history sums are accumulated in a single
    /// pass over the cached derivatives.
    pub fn step(&mut self) -> Result<(), SolverError> {
        let k = self.current_step();
        if k >= self.grid.n_steps() {
            return Err(SolverError::GridExhausted(self.grid.n_steps()));
        }
        let dim = self.history.dimension;
        let mut pred_sum = vec![0.0; dim];
        let mut corr_sum = vec![0.0; dim];

        let f = &self.history.derivatives;
        let start = self.weights.corrector_start(k);
        for d in 0..dim {
            pred_sum[d] = self.weights.predictor_by_lag(k) * f[d];
            corr_sum[d] = start * f[d];
        }
        for j in 1..=k {
            let bp = self.weights.predictor_by_lag(k - j);
            let bc = self.weights.interior_by_lag(k - j);
            let fj = &f[j * dim..(j + 1) * dim];
            for d in 0..dim {
                pred_sum[d] += bp * fj[d];
                corr_sum[d] += bc * fj[d];
            }
        }

        let predicted = self.anchor(pred_sum);
        let step = k + 1;
        if !all_finite(&predicted) {
            return Err(SolverError::NonFinite { step });
        }
        let t_next = self.grid.time(step);
        let mut f_next = vec![0.0; dim];
        self.system.eval(t_next, &predicted, &mut f_next);
        axpy(&mut corr_sum, self.weights.corrector_last(), &f_next);
        let corrected = self.anchor(corr_sum);

        self.system.eval(t_next, &corrected, &mut f_next);
        if !all_finite(&corrected) || !all_finite(&f_next) {
            return Err(SolverError::NonFinite { step });
        }
        self.history.push(&corrected, &f_next);
        Ok(())
    }

    pub fn into_trajectory(self) -> Trajectory {
        Trajectory::from_parts(
            self.grid,
            self.order,
            self.history.dimension,
            self.history.states,
        )
    }
}

#[inline]
fn axpy(acc: &mut [f64], w: f64, x: &[f64]) {
    for (a, x) in acc.iter_mut().zip(x) {
        *a += w * x;
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}
