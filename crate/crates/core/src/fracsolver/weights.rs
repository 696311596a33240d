//! Quadrature weights of the fractional Adams-Bashforth-Moulton scheme.
//!
//! Both weight families depend on `(j, k)` only through the lag `m = k - j`
//! (apart from the corrector's starting weight), so a solve precomputes them
//! once in a [`WeightTable`] and the history sum becomes a plain dot product.
//!
//! For `alpha < 1` the power differences are evaluated in `expm1`/`ln_1p`
//! form. The naive `(m+1)^a - m^a` loses `log10(m)` digits to cancellation,
//! and the second difference in the corrector loses twice that.

use super::{FractionalOrder, SolverError};

/// `(m+1)^alpha - m^alpha`, unscaled.
pub(crate) fn rect_increment(m: usize, alpha: f64) -> f64 {
    if alpha == 1.0 || m == 0 {
        return 1.0;
    }
    let m = m as f64;
    m.powf(alpha) * (alpha * (1.0 / m).ln_1p()).exp_m1()
}

/// `(m+2)^(alpha+1) + m^(alpha+1) - 2 (m+1)^(alpha+1)`, unscaled.
pub(crate) fn trapezoid_interior(m: usize, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return 2.0;
    }
    let p = alpha + 1.0;
    if m == 0 {
        return 2f64.powf(p) - 2.0;
    }
    let m = m as f64;
    let e2 = (p * (2.0 / m).ln_1p()).exp_m1();
    let e1 = (p * (1.0 / m).ln_1p()).exp_m1();
    m.powf(p) * (e2 - 2.0 * e1)
}

/// `k^(alpha+1) - (k - alpha)(k+1)^alpha`, unscaled.
pub(crate) fn trapezoid_start(k: usize, alpha: f64) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    if k == 0 {
        return alpha;
    }
    let kf = k as f64;
    // (k+1)^a = k^a (1 + e)
    let e = (alpha * (1.0 / kf).ln_1p()).exp_m1();
    kf.powf(alpha) * (alpha * (1.0 + e) - kf * e)
}

fn check_step(h: f64) -> Result<(), SolverError> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(SolverError::InvalidStep(h))
    }
}

/// Predictor weight `b_{j,k+1} = h^a/a [(k-j+1)^a - (k-j)^a]` for `0 <= j <= k`.
pub fn predictor_weight(
    j: usize,
    k: usize,
    order: FractionalOrder,
    h: f64,
) -> Result<f64, SolverError> {
    check_step(h)?;
    if j > k {
        return Err(SolverError::WeightIndex { j, k, max_j: k });
    }
    let alpha = order.value();
    Ok(h.powf(alpha) / alpha * rect_increment(k - j, alpha))
}

/// Corrector weight `a_{j,k+1}` for `0 <= j <= k + 1`.
///
/// The three cases are the starting weight (`j = 0`), the interior second
/// differences, and the weight of the freshly predicted point (`j = k + 1`),
/// all scaled by `h^a / (a (a + 1))`.
pub fn corrector_weight(
    j: usize,
    k: usize,
    order: FractionalOrder,
    h: f64,
) -> Result<f64, SolverError> {
    check_step(h)?;
    if j > k + 1 {
        return Err(SolverError::WeightIndex { j, k, max_j: k + 1 });
    }
    let alpha = order.value();
    let prefactor = h.powf(alpha) / (alpha * (alpha + 1.0));
    let bracket = if j == 0 {
        trapezoid_start(k, alpha)
    } else if j == k + 1 {
        1.0
    } else {
        trapezoid_interior(k - j, alpha)
    };
    Ok(prefactor * bracket)
}

/// Lag-indexed weights for a fixed order and step, already scaled by their
/// prefactors.
#[derive(Debug, Clone)]
pub struct WeightTable {
    alpha: f64,
    predictor: Vec<f64>,
    interior: Vec<f64>,
    corrector_prefactor: f64,
}

impl WeightTable {
    /// Builds weights for every lag a solve of `n_steps` steps can touch.
    pub fn new(order: FractionalOrder, h: f64, n_steps: usize) -> Result<Self, SolverError> {
        check_step(h)?;
        let alpha = order.value();
        let h_alpha = h.powf(alpha);
        let predictor_prefactor = h_alpha / alpha;
        let corrector_prefactor = h_alpha / (alpha * (alpha + 1.0));
        let predictor = (0..n_steps)
            .map(|m| predictor_prefactor * rect_increment(m, alpha))
            .collect();
        let interior = (0..n_steps)
            .map(|m| corrector_prefactor * trapezoid_interior(m, alpha))
            .collect();
        Ok(Self {
            alpha,
            predictor,
            interior,
            corrector_prefactor,
        })
    }

    /// Number of lags covered.
    pub fn capacity(&self) -> usize {
        self.predictor.len()
    }

    /// `b_{j,k+1}` looked up by lag `m = k - j`.
    #[inline]
    pub fn predictor_by_lag(&self, m: usize) -> f64 {
        self.predictor[m]
    }

    /// `a_{j,k+1}` for `1 <= j <= k`, looked up by lag `m = k - j`.
    #[inline]
    pub fn interior_by_lag(&self, m: usize) -> f64 {
        self.interior[m]
    }

    /// `a_{0,k+1}`.
    pub fn corrector_start(&self, k: usize) -> f64 {
        self.corrector_prefactor * trapezoid_start(k, self.alpha)
    }

    /// `a_{k+1,k+1}`, the weight carried by the predicted point.
    pub fn corrector_last(&self) -> f64 {
        self.corrector_prefactor
    }
}
