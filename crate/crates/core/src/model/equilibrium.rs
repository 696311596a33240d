//! Disease-free and endemic equilibria.
//!
//! At an endemic point every compartment is a rational function of `i_h*`:
//!
//! ```text
//! L = l_h + g - d i,   W = l_v + a c i
//! r_h = r i / L
//! s_v = l_v / W,       i_v = a c i / W
//! s_h = W [L (l_h + nu i) + g r i] / (L [(l_h - d i) W + a^2 b m c i])
//! ```
//!
//! (all rates `alpha`-powered). Substituting these into the `i_h` equation
//! leaves one scalar residual in `i`, located by a uniform sign-change scan
//! over `(0, 1)` and polished by bisection.

use super::{
    disease_free_equilibrium, rhs_powered, EpiState, ModelError, ModelParams, PoweredParams,
};
use crate::fracsolver::FractionalOrder;

const SCAN_CELLS: usize = 1024;
/// Scan points this close to a zero of a denominator in the `i_h` curve are skipped.
const DENOMINATOR_GUARD: f64 = 1e-9;
/// Bisection stops once the bracket is narrower than this.
const ROOT_TOLERANCE: f64 = 1e-12;
/// Largest accepted max-norm residual of the full right-hand side.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndemicEquilibrium {
    pub state: EpiState,
    pub i_h_star: f64,
    /// Max-norm of the right-hand side at `state`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSet {
    pub disease_free: EpiState,
    pub endemic: Option<EndemicEquilibrium>,
}

pub fn equilibria(p: &ModelParams, order: FractionalOrder) -> Result<EquilibriumSet, ModelError> {
    Ok(EquilibriumSet {
        disease_free: disease_free_equilibrium(),
        endemic: endemic_equilibrium(p, order)?,
    })
}

struct Reduced<'a> {
    q: &'a PoweredParams,
}

impl Reduced<'_> {
    fn immune_denominator(&self, i: f64) -> f64 {
        self.q.lambda_h + self.q.gamma - self.q.delta * i
    }

    fn vector_denominator(&self, i: f64) -> f64 {
        self.q.lambda_v + self.q.vector_infection() * i
    }

    fn susceptible_denominator(&self, i: f64) -> f64 {
        let q = self.q;
        (q.lambda_h - q.delta * i) * self.vector_denominator(i)
            + q.human_infection() * q.vector_infection() * i
    }

    fn guarded(&self, i: f64) -> bool {
        self.immune_denominator(i).abs() > DENOMINATOR_GUARD
            && self.susceptible_denominator(i).abs() > DENOMINATOR_GUARD
    }

    /// The equilibrium candidate parameterised by `i_h`.
    fn point(&self, i: f64) -> [f64; 5] {
        let q = self.q;
        let l = self.immune_denominator(i);
        let w = self.vector_denominator(i);
        let r_h = q.r * i / l;
        let s_v = q.lambda_v / w;
        let i_v = q.vector_infection() * i / w;
        let s_h = w * (l * (q.lambda_h + q.nu * i) + q.gamma * q.r * i)
            / (l * self.susceptible_denominator(i));
        [s_h, i, r_h, s_v, i_v]
    }

    /// The `i_h` equation evaluated along the curve.
    fn residual(&self, i: f64) -> f64 {
        let [s_h, i, _, _, i_v] = self.point(i);
        self.q.human_infection() * s_h * i_v - self.q.human_exit() * i + self.q.delta * i * i
    }
}

/// Locates an endemic equilibrium with `i_h*` in `(0, 1)`.
///
/// Returns `Ok(None)` when the scan finds no admissible sign change, and an
/// error when a bracketed root cannot be polished to the residual tolerance.
/// If several admissible roots exist the one with the smallest `i_h*` is
/// returned.
pub fn endemic_equilibrium(
    p: &ModelParams,
    order: FractionalOrder,
) -> Result<Option<EndemicEquilibrium>, ModelError> {
    p.validate()?;
    let q = p.powered(order);
    let curve = Reduced { q: &q };

    // Cell edges; the outermost ones are pulled just inside (0, 1) since i = 0
    // is always a root (the disease-free state).
    let edge = |k: usize| match k {
        0 => 1e-10,
        k if k == SCAN_CELLS => 1.0 - 1e-10,
        k => k as f64 / SCAN_CELLS as f64,
    };

    let mut lo = edge(0);
    let mut f_lo = curve.residual(lo);
    for k in 1..=SCAN_CELLS {
        let hi = edge(k);
        let f_hi = curve.residual(hi);
        let admissible = curve.guarded(lo)
            && curve.guarded(hi)
            && same_sign(curve.immune_denominator(lo), curve.immune_denominator(hi))
            && same_sign(
                curve.susceptible_denominator(lo),
                curve.susceptible_denominator(hi),
            );
        if admissible && f_lo.is_finite() && f_hi.is_finite() && f_lo * f_hi <= 0.0 {
            let root = if f_lo == 0.0 {
                lo
            } else if f_hi == 0.0 {
                hi
            } else {
                bisect(|i| curve.residual(i), lo, hi, f_lo)
            };
            let state = curve.point(root);
            if state.iter().all(|&x| x > 0.0 && x < 1.0) {
                let residual = rhs_powered(&state, &q)
                    .iter()
                    .fold(0.0f64, |m, x| m.max(x.abs()));
                if residual > RESIDUAL_TOLERANCE {
                    return Err(ModelError::RootNotConverged { lo, hi, residual });
                }
                return Ok(Some(EndemicEquilibrium {
                    state: EpiState::from_array(state),
                    i_h_star: root,
                    residual,
                }));
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
    Ok(None)
}

fn same_sign(a: f64, b: f64) -> bool {
    (a > 0.0) == (b > 0.0)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
