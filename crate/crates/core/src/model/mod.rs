//! Fractional-order malaria model with temporary immunity.
//!
//! State is the vector of proportions `(s_h, i_h, r_h, s_v, i_v)` for human
//! hosts (susceptible, infected, immune) and mosquito vectors (susceptible,
//! infected). Every rate parameter enters the right-hand side raised to the
//! Caputo order `alpha`; the dimensionless `b`, `c` and `m` do not.
//!
//! ```text
//! D^a s_h = l_h^a (1 - s_h) - a^a b m s_h i_v + nu^a i_h + g^a r_h + d^a s_h i_h
//! D^a i_h = a^a b m s_h i_v - (nu^a + r^a + l_h^a + d^a) i_h + d^a i_h^2
//! D^a r_h = r^a i_h - (g^a + l_h^a) r_h + d^a i_h r_h
//! D^a s_v = l_v^a (1 - s_v) - a^a c i_h s_v
//! D^a i_v = a^a c s_v i_h - l_v^a i_v
//! ```

mod equilibrium;

pub use equilibrium::{endemic_equilibrium, equilibria, EndemicEquilibrium, EquilibriumSet};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracsolver::{FractionalOrder, SystemFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error(
        "endemic root bracketed in [{lo}, {hi}] but polishing stalled with residual {residual:e}"
    )]
    RootNotConverged { lo: f64, hi: f64, residual: f64 },
    #[error("unknown compartment `{0}` (expected one of s_h, i_h, r_h, s_v, i_v)")]
    UnknownCompartment(String),
}

/// Biological parameters, stored un-powered so one set serves every order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Daily biting rate on humans by a single mosquito.
    pub a: f64,
    /// Proportion of bites on humans that produce an infection.
    pub b: f64,
    /// Probability that a mosquito becomes infectious.
    pub c: f64,
    /// Female mosquitoes per human host, `N_V / N_H`.
    pub m: f64,
    /// Human recovery rate.
    pub nu: f64,
    /// Rate of loss of immunity.
    pub gamma: f64,
    /// Rate of acquiring immunity.
    pub r: f64,
    /// Disease-induced death rate of infected humans.
    pub delta: f64,
    /// Human per-capita birth rate.
    pub lambda_h: f64,
    /// Mosquito per-capita birth rate.
    pub lambda_v: f64,
}

impl ModelParams {
    /// Reference set used by the default scenario.
    ///
    /// The rates are chosen so that `R0 = 1.5` at `alpha = 1` and the endemic
    /// equilibrium is a stable focus: trajectories spiral into it with
    /// a damping rate of about 0.033 and a period of about 64 time units.
    pub const REFERENCE: ModelParams = ModelParams {
        a: 1.0,
        b: 0.5,
        c: 0.5,
        m: 3.69,
        nu: 0.05,
        gamma: 0.02,
        r: 0.3,
        delta: 0.05,
        lambda_h: 0.01,
        lambda_v: 1.0,
    };

    pub fn validate(&self) -> Result<(), ModelError> {
        let non_negative = [
            ("a", self.a),
            ("m", self.m),
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("r", self.r),
            ("delta", self.delta),
        ];
        for (name, value) in non_negative {
            check(name, value, value >= 0.0, "must be finite and >= 0")?;
        }
        for (name, value) in [("b", self.b), ("c", self.c)] {
            check(
                name,
                value,
                (0.0..=1.0).contains(&value),
                "must lie in [0, 1]",
            )?;
        }
        for (name, value) in [("lambda_h", self.lambda_h), ("lambda_v", self.lambda_v)] {
            check(name, value, value > 0.0, "must be finite and > 0")?;
        }
        Ok(())
    }

    /// Rates raised to `alpha`.
    pub fn powered(&self, order: FractionalOrder) -> PoweredParams {
        alpha_power_params(self, order)
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::REFERENCE
    }
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), ModelError> {
    if value.is_finite() && ok {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

/// Parameters as they appear in the order-`alpha` right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoweredParams {
    pub lambda_h: f64,
    pub lambda_v: f64,
    pub a: f64,
    pub nu: f64,
    pub gamma: f64,
    pub delta: f64,
    pub r: f64,
    pub b: f64,
    pub m: f64,
    pub c: f64,
}

impl PoweredParams {
    /// Force of infection coefficient on humans, `a^a b m`.
    #[inline]
    pub fn human_infection(&self) -> f64 {
        self.a * self.b * self.m
    }

    /// Force of infection coefficient on mosquitoes, `a^a c`.
    #[inline]
    pub fn vector_infection(&self) -> f64 {
        self.a * self.c
    }

    /// Total exit rate from the infected human class at the DFE,
    /// `nu^a + r^a + l_h^a + d^a`.
    #[inline]
    pub fn human_exit(&self) -> f64 {
        self.nu + self.r + self.lambda_h + self.delta
    }
}

pub fn alpha_power_params(p: &ModelParams, order: FractionalOrder) -> PoweredParams {
    let alpha = order.value();
    let pow = |x: f64| if alpha == 1.0 { x } else { x.powf(alpha) };
    PoweredParams {
        lambda_h: pow(p.lambda_h),
        lambda_v: pow(p.lambda_v),
        a: pow(p.a),
        nu: pow(p.nu),
        gamma: pow(p.gamma),
        delta: pow(p.delta),
        r: pow(p.r),
        b: p.b,
        m: p.m,
        c: p.c,
    }
}

/// Names of the five compartments, in state-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compartment {
    SH,
    IH,
    RH,
    SV,
    IV,
}

impl Compartment {
    pub const ALL: [Compartment; 5] = [
        Compartment::SH,
        Compartment::IH,
        Compartment::RH,
        Compartment::SV,
        Compartment::IV,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Compartment::SH => "s_h",
            Compartment::IH => "i_h",
            Compartment::RH => "r_h",
            Compartment::SV => "s_v",
            Compartment::IV => "i_v",
        }
    }
}

impl fmt::Display for Compartment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Compartment {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Compartment::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| ModelError::UnknownCompartment(s.to_owned()))
    }
}

/// Population proportions `(s_h, i_h, r_h, s_v, i_v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpiState {
    pub s_h: f64,
    pub i_h: f64,
    pub r_h: f64,
    pub s_v: f64,
    pub i_v: f64,
}

impl EpiState {
    pub const fn new(s_h: f64, i_h: f64, r_h: f64, s_v: f64, i_v: f64) -> Self {
        Self {
            s_h,
            i_h,
            r_h,
            s_v,
            i_v,
        }
    }

    /// Initial condition of the reference scenario.
    pub const REFERENCE_INITIAL: EpiState = EpiState::new(0.8, 0.1, 0.1, 0.9, 0.1);

    pub fn from_array(y: [f64; 5]) -> Self {
        Self::new(y[0], y[1], y[2], y[3], y[4])
    }

    /// # Panics
    /// If `y` does not have exactly five components.
    pub fn from_slice(y: &[f64]) -> Self {
        let y: [f64; 5] = y.try_into().expect("malaria state has five components");
        Self::from_array(y)
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.s_h, self.i_h, self.r_h, self.s_v, self.i_v]
    }

    pub fn get(&self, c: Compartment) -> f64 {
        self.to_array()[c.index()]
    }

    /// Largest componentwise distance to `other`.
    pub fn max_distance(&self, other: &EpiState) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<[f64; 5]> for EpiState {
    fn from(y: [f64; 5]) -> Self {
        Self::from_array(y)
    }
}

/// `(s_h + i_h + r_h - 1, s_v + i_v - 1)`.
pub fn simplex_defect(y: &EpiState) -> (f64, f64) {
    (y.s_h + y.i_h + y.r_h - 1.0, y.s_v + y.i_v - 1.0)
}

/// Right-hand side with pre-powered parameters.
pub fn rhs_powered(y: &[f64; 5], q: &PoweredParams) -> [f64; 5] {
    let [s_h, i_h, r_h, s_v, i_v] = *y;
    let bite_h = q.human_infection() * s_h * i_v;
    let bite_v = q.vector_infection() * s_v * i_h;
    [
        q.lambda_h * (1.0 - s_h) - bite_h + q.nu * i_h + q.gamma * r_h + q.delta * s_h * i_h,
        bite_h - q.human_exit() * i_h + q.delta * i_h * i_h,
        q.r * i_h - (q.gamma + q.lambda_h) * r_h + q.delta * i_h * r_h,
        q.lambda_v * (1.0 - s_v) - bite_v,
        bite_v - q.lambda_v * i_v,
    ]
}

/// `D^alpha y` at `y`. The system is autonomous; `t` is accepted for
/// signature parity with [`SystemFunction`] and ignored.
pub fn rhs(_t: f64, y: &EpiState, p: &ModelParams, order: FractionalOrder) -> [f64; 5] {
    rhs_powered(&y.to_array(), &p.powered(order))
}

/// The malaria right-hand side packaged for the fractional solver.
#[derive(Debug, Clone, Copy)]
pub struct MalariaSystem {
    powered: PoweredParams,
}

impl MalariaSystem {
    pub fn new(p: &ModelParams, order: FractionalOrder) -> Self {
        Self {
            powered: p.powered(order),
        }
    }

    pub fn powered(&self) -> &PoweredParams {
        &self.powered
    }
}

impl SystemFunction for MalariaSystem {
    fn dimension(&self) -> usize {
        5
    }

    fn eval(&self, _t: f64, y: &[f64], dydt: &mut [f64]) {
        let y: &[f64; 5] = y.try_into().expect("malaria state has five components");
        dydt.copy_from_slice(&rhs_powered(y, &self.powered));
    }
}

/// Closed-form basic reproduction number
/// `sqrt(a^{2a} b m c / (l_v^a (nu^a + r^a + l_h^a + d^a)))`.
pub fn basic_reproduction_number(p: &ModelParams, order: FractionalOrder) -> f64 {
    let q = p.powered(order);
    (q.a * q.a * q.b * q.m * q.c / (q.lambda_v * q.human_exit())).sqrt()
}

/// `(1, 0, 0, 1, 0)`.
pub fn disease_free_equilibrium() -> EpiState {
    EpiState::new(1.0, 0.0, 0.0, 1.0, 0.0)
}
