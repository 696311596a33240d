//! JSON form of a stability report.

use fracmal::analysis::{
    Complex64, DfeVerdict, EndemicVerdict, PropositionBranch, StabilityReport,
};
use fracmal::model::EpiState;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndemicRecord {
    pub state: EpiState,
    pub i_h_star: f64,
    pub residual: f64,
}

/// Complex numbers are written as `[re, im]` pairs. Fields that need an
/// endemic point are `null` when there is none.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub alpha: f64,
    pub r0: f64,
    pub dfe_eigenvalues: Vec<[f64; 2]>,
    pub dfe_verdict: DfeVerdict,
    pub endemic_present: bool,
    pub endemic: Option<EndemicRecord>,
    pub endemic_eigenvalues: Option<Vec<[f64; 2]>>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub b3: Option<f64>,
    pub discriminant: Option<f64>,
    pub proposition_branch: PropositionBranch,
    pub endemic_verdict: EndemicVerdict,
}

fn pairs(zs: &[Complex64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

impl From<&StabilityReport> for ReportRecord {
    fn from(r: &StabilityReport) -> Self {
        ReportRecord {
            alpha: r.alpha,
            r0: r.r0,
            dfe_eigenvalues: pairs(&r.dfe_eigenvalues),
            dfe_verdict: r.dfe_verdict,
            endemic_present: r.endemic_present(),
            endemic: r.endemic.map(|e| EndemicRecord {
                state: e.state,
                i_h_star: e.i_h_star,
                residual: e.residual,
            }),
            endemic_eigenvalues: r.endemic_eigenvalues.map(|z| pairs(&z)),
            b1: r.coefficients.map(|c| c.b1),
            b2: r.coefficients.map(|c| c.b2),
            b3: r.coefficients.map(|c| c.b3),
            discriminant: r.discriminant,
            proposition_branch: r.proposition_branch,
            endemic_verdict: r.endemic_verdict,
        }
    }
}
