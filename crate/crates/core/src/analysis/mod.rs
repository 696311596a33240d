//! Local stability of the malaria model's equilibria.
//!
//! A fractional linearisation `D^a x = J x` is asymptotically stable iff every
//! eigenvalue of `J` lies in the sector `|arg lambda| > alpha pi / 2`. At the
//! disease-free state the Jacobian factors into three explicit negative
//! eigenvalues and a 2x2 infection block whose determinant has the sign of
//! `1 - R0^2`. At the endemic state the reduced 3x3 Jacobian is classified
//! through its characteristic cubic.
//!
//! ```
//! use fracmal::analysis::{full_report, DfeVerdict};
//! use fracmal::fracsolver::FractionalOrder;
//! use fracmal::model::ModelParams;
//!
//! let report = full_report(&ModelParams::REFERENCE, FractionalOrder::CLASSICAL).unwrap();
//! assert!((report.r0 - 1.5).abs() < 1e-12);
//! assert_eq!(report.dfe_verdict, DfeVerdict::Unstable);
//! assert!(report.endemic.is_some());
//! ```

mod cubic;
mod jacobian;
mod matignon;
mod nextgen;

pub use cubic::{
    characteristic_coefficients, classify_endemic, cubic_discriminant, cubic_roots, Classification,
    CubicCoefficients, EndemicVerdict, PropositionBranch, EQUALITY_TOLERANCE,
};
pub use jacobian::{
    dfe_eigenvalues, dfe_infection_block, jacobian_dfe, jacobian_endemic, reduced_rhs,
};
pub use matignon::{matignon_margin, matignon_stable, BOUNDARY_BAND};
pub use nextgen::{next_generation, NextGenMatrices};

pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracsolver::FractionalOrder;
use crate::model::{
    basic_reproduction_number, endemic_equilibrium, EndemicEquilibrium, ModelError, ModelParams,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DfeVerdict {
    Stable,
    Unstable,
    Marginal,
}

impl DfeVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DfeVerdict::Stable => "stable",
            DfeVerdict::Unstable => "unstable",
            DfeVerdict::Marginal => "marginal",
        }
    }
}

/// Matignon verdict for a full spectrum.
pub fn spectrum_verdict(eigenvalues: &[Complex64], order: FractionalOrder) -> DfeVerdict {
    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if eigenvalues
        .iter()
        .any(|&z| matignon::is_marginal(z, order, scale))
    {
        DfeVerdict::Marginal
    } else if eigenvalues.iter().all(|&z| matignon_stable(z, order)) {
        DfeVerdict::Stable
    } else {
        DfeVerdict::Unstable
    }
}

/// Stability summary for one parameter set and order.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub alpha: f64,
    pub r0: f64,
    pub dfe_eigenvalues: [Complex64; 5],
    pub dfe_verdict: DfeVerdict,
    pub endemic: Option<EndemicEquilibrium>,
    pub endemic_eigenvalues: Option<[Complex64; 3]>,
    pub coefficients: Option<CubicCoefficients>,
    pub discriminant: Option<f64>,
    pub proposition_branch: PropositionBranch,
    pub endemic_verdict: EndemicVerdict,
}

impl StabilityReport {
    pub fn endemic_present(&self) -> bool {
        self.endemic.is_some()
    }
}

pub fn full_report(
    p: &ModelParams,
    order: FractionalOrder,
) -> Result<StabilityReport, AnalysisError> {
    p.validate()?;
    let dfe_eigenvalues = dfe_eigenvalues(p, order);
    let dfe_verdict = spectrum_verdict(&dfe_eigenvalues, order);
    let endemic = endemic_equilibrium(p, order)?;

    let mut report = StabilityReport {
        alpha: order.value(),
        r0: basic_reproduction_number(p, order),
        dfe_eigenvalues,
        dfe_verdict,
        endemic,
        endemic_eigenvalues: None,
        coefficients: None,
        discriminant: None,
        proposition_branch: PropositionBranch::Indeterminate,
        endemic_verdict: EndemicVerdict::Indeterminate,
    };
    if let Some(e) = endemic {
        let j = jacobian_endemic(p, order, &e.state);
        let coefficients = characteristic_coefficients(&j);
        let discriminant = cubic_discriminant(&coefficients);
        let class = classify_endemic(&coefficients, discriminant, order);
        report.endemic_eigenvalues = Some(cubic_roots(&coefficients));
        report.coefficients = Some(coefficients);
        report.discriminant = Some(discriminant);
        report.proposition_branch = class.branch;
        report.endemic_verdict = class.verdict;
    }
    Ok(report)
}
