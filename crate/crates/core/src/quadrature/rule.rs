use std::fmt;
use std::f64::consts::PI;
use std::sync::Arc;

use super::integrate::{integrate_real_line, Tolerance};
use super::roots::{real_zeros_detailed, DEFAULT_TOL_IMAG};
use super::weights::{weights_moment_formula, weights_second_kind, Normalization, RulePolys};
use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::scalar::{q, Q};
use crate::scheme::CoefficientScheme;

#[derive(Clone, Debug, PartialEq)]
pub enum WeightMethod {
    MomentFormula,
    SecondKindRatio(Normalization),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub method: WeightMethod,
    pub perturbation: Perturbation,
    pub m0: Q,
    /// Roots accepted as real whose computed imaginary part was nonzero.
    pub complex_flag: Vec<(f64, f64)>,
}

/// Zeros of `P_n(x; mu, nu)` and their weights.
pub fn build_rule(
    scheme: &CoefficientScheme,
    pert: &Perturbation,
    n: usize,
    method: WeightMethod,
    m0: &Q,
    tol_imag: f64,
) -> Result<QuadratureRule> {
    let polys = RulePolys::new(scheme, pert, n)?;
    let degree = polys.p_n.degree().unwrap_or(0);
    if degree != n {
        return Err(Error::DegreeDrop { expected: n, actual: degree });
    }
    let zeros = real_zeros_detailed(&polys.p_n, tol_imag)?;
    let weights = match &method {
        WeightMethod::MomentFormula => weights_moment_formula(scheme, pert, &polys, &zeros.zeros, m0)?,
        WeightMethod::SecondKindRatio(norm) => weights_second_kind(&polys, &zeros.zeros, norm)?,
    };
    Ok(QuadratureRule {
        n,
        nodes: zeros.zeros,
        weights,
        method,
        perturbation: pert.clone(),
        m0: m0.clone(),
        complex_flag: zeros.snapped,
    })
}

/// Moment-formula rule with `M_0 = 1/2` on the worked example.
pub fn example_rule(pert: &Perturbation, n: usize) -> Result<QuadratureRule> {
    build_rule(&CoefficientScheme::example(), pert, n, WeightMethod::MomentFormula, &q(1, 2), DEFAULT_TOL_IMAG)
}

#[derive(Clone)]
pub struct Integrand {
    pub id: String,
    pub description: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Integrand({}: {})", self.id, self.description)
    }
}

impl Integrand {
    pub fn new(id: impl Into<String>, description: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Integrand {
            id: id.into(),
            description: description.into(),
            eval: Arc::new(eval),
        }
    }

    /// `pi exp(-x^2) / (x^2 + 1)^7`.
    pub fn example3() -> Self {
        Integrand::new("example3", "pi*exp(-x^2)/(x^2+1)^7", |x| PI * (-x * x).exp() / (x * x + 1.0).powi(7))
    }

    pub fn builtin(id: &str) -> Option<Self> {
        (id == "example3").then(Integrand::example3)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }
}

/// `sum_j w_j f(x_j)`.
pub fn estimate(rule: &QuadratureRule, f: &Integrand) -> Result<f64> {
    rule.nodes.iter().zip(&rule.weights).try_fold(0.0, |acc, (x, w)| {
        let v = f.eval(*x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x: *x });
        }
        Ok(acc + w * v)
    })
}

/// `int exp(-x^2)/(x^2 + 1)^8 dx`, the value the example estimates approach.
pub const E_FIXTURE: f64 = 0.6133229495946;

/// Oracle value of the example integral.
pub fn example_exact_integral() -> f64 {
    integrate_real_line(|x| (-x * x).exp() / (x * x + 1.0).powi(8), Tolerance::default()).value
}

/// `|rule - oracle|` for `f = x^m / (x^2 + 1)^n` on the unperturbed example rule.
pub fn exactness_deviation(n: usize, m: usize) -> Result<f64> {
    let rule = example_rule(&Perturbation::none(), n)?;
    let f = |x: f64| x.powi(m as i32) / (x * x + 1.0).powi(n as i32);
    let by_rule: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * f(*x)).sum();
    let oracle = integrate_real_line(|x| f(x) / (PI * (x * x + 1.0)), Tolerance::default()).value;
    Ok((by_rule - oracle).abs())
}

/// Worst deviation over `m = 0..=p_degree`.
pub fn exactness_check(n: usize, p_degree: usize) -> Result<f64> {
    (0..=p_degree).try_fold(0.0f64, |acc, m| Ok(acc.max(exactness_deviation(n, m)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one_first_cell() {
        let rule = example_rule(&Perturbation::corec(0, q(1, 10)), 4).unwrap();
        let v = estimate(&rule, &Integrand::example3()).unwrap();
        assert!((v * 22.0 / (7.0 * PI) - 0.5444480269).abs() < 1e-9);
    }

    #[test]
    fn odd_moments_vanish_by_symmetry() {
        let rule = example_rule(&Perturbation::none(), 6).unwrap();
        let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(3) / (x * x + 1.0).powi(6)).sum();
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn exact_integral_matches_fixture() {
        assert!((example_exact_integral() - E_FIXTURE).abs() < 1e-10);
    }

    #[test]
    fn exactness_inside_and_outside_the_class() {
        assert!(exactness_check(4, 7).unwrap() < 1e-11);
        assert!(exactness_deviation(4, 8).unwrap() > 1e-11);
    }

    #[test]
    fn degree_drop_is_detected() {
        let s = CoefficientScheme::example();
        let pert = Perturbation::codil(1, q(4, 1));
        match build_rule(&s, &pert, 2, WeightMethod::MomentFormula, &q(1, 2), DEFAULT_TOL_IMAG) {
            Err(Error::DegreeDrop { expected: 2, actual }) => assert!(actual < 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let rule = example_rule(&Perturbation::none(), 3).unwrap();
        let f = Integrand::new("bad", "1/x", |x| 1.0 / x);
        assert!(matches!(estimate(&rule, &f), Err(Error::NonFinite { .. })));
    }
}
