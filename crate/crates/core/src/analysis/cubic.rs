//! The endemic characteristic cubic `x^3 + b1 x^2 + b2 x + b3`: coefficients,
//! discriminant, roots, and the sufficient-condition classifier.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fracsolver::FractionalOrder;

/// Relative tolerance of the `b1 b2 = b3` test in branch (iii).
pub const EQUALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoefficients {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl CubicCoefficients {
    pub fn new(b1: f64, b2: f64, b3: f64) -> Self {
        Self { b1, b2, b3 }
    }

    /// Monic cubic with the given roots.
    pub fn from_roots(r: [Complex64; 3]) -> Self {
        let b1 = -(r[0] + r[1] + r[2]);
        let b2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let b3 = -(r[0] * r[1] * r[2]);
        Self::new(b1.re, b2.re, b3.re)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.b1) * x + self.b2) * x + self.b3
    }

    fn eval_derivative(&self, x: Complex64) -> Complex64 {
        (3.0 * x + 2.0 * self.b1) * x + self.b2
    }
}

/// `b1 = -tr J`, `b2 = ` sum of principal 2x2 minors, `b3 = -det J`.
pub fn characteristic_coefficients(j: &Matrix3<f64>) -> CubicCoefficients {
    let minor = |a: usize, b: usize| j[(a, a)] * j[(b, b)] - j[(a, b)] * j[(b, a)];
    CubicCoefficients {
        b1: -j.trace(),
        b2: minor(0, 1) + minor(0, 2) + minor(1, 2),
        b3: -j.determinant(),
    }
}

/// `18 b1 b2 b3 + (b1 b2)^2 - 4 b3 b1^3 - 4 b2^3 - 27 b3^2`.
///
/// The five terms cancel almost completely near a repeated root, so they are
/// formed and summed in double-double arithmetic and rounded once.
pub fn cubic_discriminant(c: &CubicCoefficients) -> f64 {
    let CubicCoefficients { b1, b2, b3 } = *c;
    let term = |factors: &[f64]| {
        factors[1..]
            .iter()
            .fold(DoubleDouble::from(factors[0]), |acc, &f| acc.mul(f))
    };
    [
        term(&[18.0, b1, b2, b3]),
        term(&[b1, b1, b2, b2]),
        term(&[-4.0, b1, b1, b1, b3]),
        term(&[-4.0, b2, b2, b2]),
        term(&[-27.0, b3, b3]),
    ]
    .into_iter()
    .fold(DoubleDouble::from(0.0), DoubleDouble::add)
    .value()
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
}

impl DoubleDouble {
    fn renormalize(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        DoubleDouble {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn mul(self, y: f64) -> Self {
        let p = self.hi * y;
        let err = self.hi.mul_add(y, -p);
        Self::renormalize(p, err + self.lo * y)
    }

    fn add(self, o: Self) -> Self {
        let s = self.hi + o.hi;
        let v = s - self.hi;
        let err = (self.hi - (s - v)) + (o.hi - v);
        Self::renormalize(s, err + self.lo + o.lo)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// All three roots of the cubic.
///
/// Trigonometric form when the roots are real and distinct, Cardano with the
/// sign-safe cube root otherwise, followed by two Newton polishing steps on
/// the undepressed polynomial. A real root comes first in the second case.
pub fn cubic_roots(c: &CubicCoefficients) -> [Complex64; 3] {
    let CubicCoefficients { b1, b2, b3 } = *c;
    let shift = b1 / 3.0;
    // depressed: t^3 + p t + q = 0 with x = t - b1/3
    let p = b2 - b1 * b1 / 3.0;
    let q = 2.0 * b1.powi(3) / 27.0 - b1 * b2 / 3.0 + b3;

    let mut roots = if p < 0.0 && 4.0 * p.powi(3) + 27.0 * q * q < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| Complex64::new(m * (theta - 2.0 * PI * k / 3.0).cos() - shift, 0.0))
    } else {
        let half_q = 0.5 * q;
        let inner = (half_q * half_q + (p / 3.0).powi(3)).max(0.0).sqrt();
        let u = -(half_q + half_q.signum() * inner).cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };
        let real = u + v - shift;
        let re = -0.5 * (u + v) - shift;
        let im = 0.5 * 3f64.sqrt() * (u - v);
        [
            Complex64::new(real, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    };

    for z in roots.iter_mut() {
        for _ in 0..2 {
            let d = c.eval_derivative(*z);
            if d.norm() == 0.0 {
                break;
            }
            let next = *z - c.eval(*z) / d;
            if next.re.is_finite()
                && next.im.is_finite()
                && c.eval(next).norm() <= c.eval(*z).norm()
            {
                *z = next;
            }
        }
    }
    roots
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropositionBranch {
    I,
    Ii,
    Iii,
    Iv,
    Indeterminate,
}

impl PropositionBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            PropositionBranch::I => "i",
            PropositionBranch::Ii => "ii",
            PropositionBranch::Iii => "iii",
            PropositionBranch::Iv => "iv",
            PropositionBranch::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndemicVerdict {
    Stable,
    Unstable,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub branch: PropositionBranch,
    pub verdict: EndemicVerdict,
}

/// Runs the four sufficient conditions in order and returns the first that
/// applies.
///
/// | branch | hypotheses | verdict |
/// |---|---|---|
/// | (i) | `D > 0`, `b1 > 0`, `b3 > 0`, `b1 b2 > b3` | stable |
/// | (ii) | `D < 0`, `b1 >= 0`, `b2 >= 0`, `b3 > 0`, `alpha < 2/3` | stable |
/// | (iii) | `D < 0`, `b1 > 0`, `b2 > 0`, `b1 b2 = b3`, `alpha < 1` | stable |
/// | (iv) | `D < 0`, `b1 < 0`, `b2 < 0`, `alpha > 2/3` | unstable |
pub fn classify_endemic(
    c: &CubicCoefficients,
    discriminant: f64,
    order: FractionalOrder,
) -> Classification {
    let CubicCoefficients { b1, b2, b3 } = *c;
    let alpha = order.value();
    let d = discriminant;
    let product = b1 * b2;
    let balanced = (product - b3).abs() <= EQUALITY_TOLERANCE * product.abs().max(b3.abs());

    let (branch, verdict) = if d > 0.0 && b1 > 0.0 && b3 > 0.0 && product > b3 {
        (PropositionBranch::I, EndemicVerdict::Stable)
    } else if d < 0.0 && b1 >= 0.0 && b2 >= 0.0 && b3 > 0.0 && alpha < 2.0 / 3.0 {
        (PropositionBranch::Ii, EndemicVerdict::Stable)
    } else if d < 0.0 && b1 > 0.0 && b2 > 0.0 && balanced && alpha < 1.0 {
        (PropositionBranch::Iii, EndemicVerdict::Stable)
    } else if d < 0.0 && b1 < 0.0 && b2 < 0.0 && alpha > 2.0 / 3.0 {
        (PropositionBranch::Iv, EndemicVerdict::Unstable)
    } else {
        (
            PropositionBranch::Indeterminate,
            EndemicVerdict::Indeterminate,
        )
    };
    Classification { branch, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn coefficients_of_diagonal_and_zero_matrices() {
        let c = characteristic_coefficients(&Matrix3::from_diagonal(&nalgebra::Vector3::new(
            -1.0, -2.0, -3.0,
        )));
        assert_eq!((c.b1, c.b2, c.b3), (6.0, 11.0, 6.0));
        let c = characteristic_coefficients(&Matrix3::zeros());
        assert_eq!((c.b1, c.b2, c.b3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn coefficients_annihilate_eigenvalues() {
        let j = Matrix3::new(-0.3, 1.2, -0.5, 0.4, -0.9, 0.7, 0.0, 0.25, -1.1);
        let c = characteristic_coefficients(&j);
        for z in j.complex_eigenvalues().iter() {
            assert!(c.eval(*z).norm() < 1e-12);
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(
            cubic_discriminant(&CubicCoefficients::new(-6.0, 11.0, -6.0)),
            4.0
        );
        assert_eq!(
            cubic_discriminant(&CubicCoefficients::new(-4.0, 5.0, -2.0)),
            0.0
        );
        assert_eq!(
            cubic_discriminant(&CubicCoefficients::new(0.0, 1.0, 0.0)),
            -4.0
        );
    }

    #[test]
    fn discriminant_near_repeated_root() {
        let e = 2f64.powi(-20);
        let roots = [1.0, 1.0 + e, 3.0].map(|r| Complex64::new(r, 0.0));
        let exact = e * e * 4.0 * (2.0 - e) * (2.0 - e);
        let d = cubic_discriminant(&CubicCoefficients::from_roots(roots));
        assert!(((d - exact) / exact).abs() < 1e-14, "{d} vs {exact}");
    }

    #[test]
    fn roots_of_known_cubics() {
        let c = CubicCoefficients::new(-6.0, 11.0, -6.0);
        let mut r: Vec<f64> = cubic_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
        }
        // x^3 + x = x (x - i)(x + i)
        let r = cubic_roots(&CubicCoefficients::new(0.0, 1.0, 0.0));
        assert!(r[0].norm() < 1e-15);
        assert_relative_eq!(r[1].im.abs(), 1.0, max_relative = 1e-14);
        // triple root at -2
        let r = cubic_roots(&CubicCoefficients::new(6.0, 12.0, 8.0));
        for z in r {
            assert!((z + 2.0).norm() < 1e-5);
        }
    }

    #[test]
    fn classifier_examples() {
        let c = CubicCoefficients::new(6.0, 11.0, 6.0);
        let k = classify_endemic(&c, cubic_discriminant(&c), order(0.9));
        assert_eq!(k.branch, PropositionBranch::I);
        assert_eq!(k.verdict, EndemicVerdict::Stable);

        let c = CubicCoefficients::new(0.0, 1.0, 0.0);
        let k = classify_endemic(&c, -4.0, order(0.5));
        assert_eq!(k.branch, PropositionBranch::Indeterminate);
        assert_eq!(k.verdict, EndemicVerdict::Indeterminate);
    }

    #[test]
    fn classifier_branches_two_three_four() {
        // (x + 3)(x^2 - 0.2 x + 4): complex pair in the right half plane.
        let c = CubicCoefficients::from_roots([
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.1, 1.997_498),
            Complex64::new(0.1, -1.997_498),
        ]);
        let d = cubic_discriminant(&c);
        assert!(d < 0.0 && c.b1 >= 0.0 && c.b2 >= 0.0 && c.b3 > 0.0);
        assert_eq!(
            classify_endemic(&c, d, order(0.5)).branch,
            PropositionBranch::Ii
        );
        assert_eq!(
            classify_endemic(&c, d, order(0.9)).branch,
            PropositionBranch::Indeterminate
        );

        // b1 b2 = b3: (x + 2)(x^2 + 3) has b1 = 2, b2 = 3, b3 = 6.
        let c = CubicCoefficients::new(2.0, 3.0, 6.0);
        let d = cubic_discriminant(&c);
        assert!(d < 0.0);
        let k = classify_endemic(&c, d, order(0.9));
        assert_eq!(
            (k.branch, k.verdict),
            (PropositionBranch::Iii, EndemicVerdict::Stable)
        );
        assert_eq!(
            classify_endemic(&c, d, order(1.0)).branch,
            PropositionBranch::Indeterminate
        );

        // b1 < 0, b2 < 0 with a complex pair.
        let c = CubicCoefficients::from_roots([
            Complex64::new(2.0, 0.0),
            Complex64::new(-0.5, 0.3),
            Complex64::new(-0.5, -0.3),
        ]);
        let d = cubic_discriminant(&c);
        assert!(d < 0.0 && c.b1 < 0.0 && c.b2 < 0.0, "{c:?} {d}");
        let k = classify_endemic(&c, d, order(0.8));
        assert_eq!(
            (k.branch, k.verdict),
            (PropositionBranch::Iv, EndemicVerdict::Unstable)
        );
        assert_eq!(
            classify_endemic(&c, d, order(0.6)).branch,
            PropositionBranch::Indeterminate
        );
    }

    #[test]
    fn branch_one_requires_full_routh_hurwitz() {
        // Roots 1, 2, -10: b1 = 7 and b3 = 20 pass, b1 b2 = -196 < b3 fails.
        let c = CubicCoefficients::from_roots([
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-10.0, 0.0),
        ]);
        assert!(c.b1 > 0.0 && c.b3 > 0.0);
        assert!(c.b1 * c.b2 < c.b3);
        let d = cubic_discriminant(&c);
        assert!(d > 0.0);
        assert_eq!(
            classify_endemic(&c, d, order(0.9)).branch,
            PropositionBranch::Indeterminate
        );
    }
}
