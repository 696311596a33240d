use nalgebra::{Matrix2, Matrix3, Matrix5};
use num_complex::Complex64;

use crate::fracsolver::FractionalOrder;
use crate::model::{EpiState, ModelParams};

/// Jacobian of the five-dimensional field at `(1, 0, 0, 1, 0)`.
pub fn jacobian_dfe(p: &ModelParams, order: FractionalOrder) -> Matrix5<f64> {
    let q = p.powered(order);
    let beta_h = q.human_infection();
    let beta_v = q.vector_infection();
    #[rustfmt::skip]
    let j = Matrix5::new(
        -q.lambda_h, q.nu + q.delta,  q.gamma,                 0.0,          -beta_h,
        0.0,         -q.human_exit(), 0.0,                     0.0,          beta_h,
        0.0,         q.r,             -(q.lambda_h + q.gamma), 0.0,          0.0,
        0.0,         -beta_v,         0.0,                     -q.lambda_v,  0.0,
        0.0,         beta_v,          0.0,                     0.0,          -q.lambda_v,
    );
    j
}

/// The `(i_h, i_v)` block of [`jacobian_dfe`] that carries the two
/// non-trivial eigenvalues.
pub fn dfe_infection_block(p: &ModelParams, order: FractionalOrder) -> Matrix2<f64> {
    let q = p.powered(order);
    Matrix2::new(
        -q.human_exit(),
        q.human_infection(),
        q.vector_infection(),
        -q.lambda_v,
    )
}

/// Eigenvalues of [`jacobian_dfe`] from its block structure: three explicit
/// negative reals `-l_h^a`, `-(l_h^a + g^a)`, `-l_v^a` followed by the two
/// roots of the infection block's characteristic quadratic.
pub fn dfe_eigenvalues(p: &ModelParams, order: FractionalOrder) -> [Complex64; 5] {
    let q = p.powered(order);
    let b = dfe_infection_block(p, order);
    let [r1, r2] = quadratic_roots(-b.trace(), b.determinant());
    [
        Complex64::new(-q.lambda_h, 0.0),
        Complex64::new(-(q.lambda_h + q.gamma), 0.0),
        Complex64::new(-q.lambda_v, 0.0),
        r1,
        r2,
    ]
}

/// Roots of `x^2 + p x + s`, computed without cancellation.
fn quadratic_roots(p: f64, s: f64) -> [Complex64; 2] {
    let disc = p * p - 4.0 * s;
    if disc >= 0.0 {
        let t = -0.5 * (p + p.signum() * disc.sqrt());
        if t == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(t, 0.0), Complex64::new(s / t, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(-0.5 * p, im), Complex64::new(-0.5 * p, -im)]
    }
}

/// Jacobian of the reduced field in `(s_h, i_h, i_v)`, obtained by
/// eliminating `r_h = 1 - s_h - i_h` and `s_v = 1 - i_v`, evaluated at
/// `endemic`.
pub fn jacobian_endemic(
    p: &ModelParams,
    order: FractionalOrder,
    endemic: &EpiState,
) -> Matrix3<f64> {
    let q = p.powered(order);
    let beta_h = q.human_infection();
    let beta_v = q.vector_infection();
    let EpiState { s_h, i_h, i_v, .. } = *endemic;
    #[rustfmt::skip]
    let j = Matrix3::new(
        -(q.lambda_h + q.gamma + beta_h * i_v - q.delta * i_h),
        q.nu + q.delta * s_h - q.gamma,
        -beta_h * s_h,

        beta_h * i_v,
        -(q.human_exit() - 2.0 * q.delta * i_h),
        beta_h * s_h,

        0.0,
        beta_v * (1.0 - i_v),
        -(q.lambda_v + beta_v * i_h),
    );
    j
}

/// The reduced three-dimensional field in `(s_h, i_h, i_v)`.
pub fn reduced_rhs(p: &ModelParams, order: FractionalOrder, x: [f64; 3]) -> [f64; 3] {
    let [s_h, i_h, i_v] = x;
    let full = crate::model::rhs_powered(
        &[s_h, i_h, 1.0 - s_h - i_h, 1.0 - i_v, i_v],
        &p.powered(order),
    );
    [full[0], full[1], full[4]]
}
