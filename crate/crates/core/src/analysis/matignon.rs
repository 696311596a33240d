use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::fracsolver::FractionalOrder;

/// Eigenvalues whose argument lies within this many radians of `alpha pi / 2`
/// are reported as marginal.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// `|arg lambda| > alpha pi / 2`, strictly. A zero eigenvalue has no argument
/// and fails the test.
pub fn matignon_stable(eigenvalue: Complex64, order: FractionalOrder) -> bool {
    if eigenvalue.norm() == 0.0 {
        return false;
    }
    matignon_margin(eigenvalue, order) > 0.0
}

/// `|arg lambda| - alpha pi / 2`; positive means the stability sector.
pub fn matignon_margin(eigenvalue: Complex64, order: FractionalOrder) -> f64 {
    eigenvalue.arg().abs() - order.value() * FRAC_PI_2
}

/// Whether `eigenvalue` sits on (or numerically at) the sector boundary.
/// `scale` sets what counts as a zero eigenvalue.
pub(crate) fn is_marginal(eigenvalue: Complex64, order: FractionalOrder, scale: f64) -> bool {
    eigenvalue.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
        || matignon_margin(eigenvalue, order).abs() <= BOUNDARY_BAND
}
