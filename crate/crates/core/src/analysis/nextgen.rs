use nalgebra::Matrix2;

use crate::fracsolver::FractionalOrder;
use crate::model::ModelParams;

/// Next-generation decomposition at the disease-free state, infected
/// compartments ordered `(i_h, i_v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NextGenMatrices {
    /// New-infection terms.
    pub f: Matrix2<f64>,
    /// Remaining transitions.
    pub v: Matrix2<f64>,
    pub fv_inv: Matrix2<f64>,
    /// Spectral radius of `fv_inv`, i.e. `R0`.
    pub spectral_radius: f64,
}

pub fn next_generation(p: &ModelParams, order: FractionalOrder) -> NextGenMatrices {
    let q = p.powered(order);
    let f = Matrix2::new(0.0, q.human_infection(), q.vector_infection(), 0.0);
    let v = Matrix2::new(q.human_exit(), 0.0, 0.0, q.lambda_v);
    let v_inv = v
        .try_inverse()
        .expect("V is diagonal with positive entries for valid parameters");
    let fv_inv = f * v_inv;
    NextGenMatrices {
        f,
        v,
        fv_inv,
        spectral_radius: spectral_radius_2x2(&fv_inv),
    }
}

/// Largest eigenvalue modulus of a general real 2x2 matrix.
pub(crate) fn spectral_radius_2x2(m: &Matrix2<f64>) -> f64 {
    let half_trace = 0.5 * m.trace();
    let det = m.determinant();
    let disc = half_trace * half_trace - det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        (half_trace + root).abs().max((half_trace - root).abs())
    } else {
        // complex pair: |lambda|^2 = det
        det.sqrt()
    }
}
