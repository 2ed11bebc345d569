//! Quadrature weights at the zeros of `P_n(x; mu, nu)`.

use num_traits::{One, Zero};

use super::integrate::{integrate_real_line, Tolerance};
use super::roots::{real_zeros, DEFAULT_TOL_IMAG};
use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::poly::Poly;
use crate::recurrence::{gen_first_kind, gen_second_kind, Recurrence};
use crate::scalar::{f64_to_q, q_to_f64, rationalize, Q};
use crate::scheme::{CoefficientScheme, SchemeForm};

/// Scaling applied to the second-kind ratio `Q_n / P'_n`.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalization {
    Raw,
    /// Multiply by a fixed constant, normally the calibrated `M_0`.
    Scaled(Q),
    /// Rescale so the weights sum to one.
    UnitMass,
}

/// `P_n`, `P_{n-1}`, `P'_n` and `Q_n` of one perturbed sequence.
#[derive(Clone, Debug)]
pub struct RulePolys {
    pub n: usize,
    pub p_n: Poly<Q>,
    pub p_prev: Poly<Q>,
    pub dp_n: Poly<Q>,
    pub q_n: Poly<Q>,
}

impl RulePolys {
    pub fn new(scheme: &CoefficientScheme, pert: &Perturbation, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("rules need n >= 1".into()));
        }
        let mut p = gen_first_kind::<Q>(scheme, pert, n)?;
        let mut q = gen_second_kind::<Q>(scheme, pert, n)?;
        let p_n = p.pop().expect("n + 1 entries");
        let p_prev = p.pop().expect("n >= 1");
        Ok(RulePolys {
            n,
            dp_n: p_n.derivative(),
            p_n,
            p_prev,
            q_n: q.pop().expect("n + 1 entries"),
        })
    }
}

fn exact_nodes(nodes: &[f64]) -> Result<Vec<Q>> {
    nodes.iter().map(|x| f64_to_q(*x)).collect()
}

/// `M_0 prod_{i=1}^{n-1} lambda_i* (x - a_i)(x - b_i) / (P'_n(x) P_{n-1}(x))` at each node.
pub fn weights_moment_formula(
    scheme: &CoefficientScheme,
    pert: &Perturbation,
    polys: &RulePolys,
    nodes: &[f64],
    m0: &Q,
) -> Result<Vec<f64>> {
    exact_nodes(nodes)?
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            let den = polys.dp_n.eval(&x) * polys.p_prev.eval(&x);
            if den.is_zero() {
                return Err(Error::Degenerate { what: "moment weight denominator", index: j + 1 });
            }
            let rec = Recurrence::at(scheme, x);
            let num = (1..polys.n).try_fold(Q::one(), |acc, i| Ok::<_, Error>(acc * rec.quad(i, pert)?))?;
            Ok(q_to_f64(&(num * m0 / den)))
        })
        .collect()
}

/// `Q_n(x)/P'_n(x)` at each node, then normalized.
pub fn weights_second_kind(polys: &RulePolys, nodes: &[f64], normalization: &Normalization) -> Result<Vec<f64>> {
    let raw = exact_nodes(nodes)?
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            let d = polys.dp_n.eval(&x);
            if d.is_zero() {
                return Err(Error::Degenerate { what: "derivative at node", index: j + 1 });
            }
            Ok(polys.q_n.eval(&x) / d)
        })
        .collect::<Result<Vec<Q>>>()?;
    let scaled: Vec<Q> = match normalization {
        Normalization::Raw => raw,
        Normalization::Scaled(m0) => raw.into_iter().map(|w| w * m0).collect(),
        Normalization::UnitMass => {
            let total = raw.iter().fold(Q::zero(), |acc, w| acc + w);
            if total.is_zero() {
                return Err(Error::Degenerate { what: "total weight", index: 0 });
            }
            raw.into_iter().map(|w| w / &total).collect()
        }
    };
    Ok(scaled.iter().map(q_to_f64).collect())
}

/// Reference orthogonality density used to calibrate `M_0`.
pub struct ReferenceDensity {
    pub description: &'static str,
    pub density: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ReferenceDensity {
    /// `1/(pi (x^2 + 1))`.
    pub fn example() -> Self {
        ReferenceDensity {
            description: "1/(pi (x^2 + 1))",
            density: Box::new(|x| 1.0 / (std::f64::consts::PI * (x * x + 1.0))),
        }
    }
}

/// `M_0` for which the unperturbed moment-formula rule integrates `(x^2 + omega^2)^{-n}`
/// exactly against the reference density, rationalized with denominator at most `10^6`.
pub fn calibrate_m0(scheme: &CoefficientScheme, n: usize, reference: &ReferenceDensity) -> Result<Q> {
    if scheme.form() != SchemeForm::Special {
        return Err(Error::Config("M_0 calibration needs a scheme with factor z^2 + omega^2".into()));
    }
    let omega2 = q_to_f64(scheme.omega().expect("special")).powi(2);
    let none = Perturbation::none();
    let polys = RulePolys::new(scheme, &none, n)?;
    let nodes = real_zeros(&polys.p_n, DEFAULT_TOL_IMAG)?;
    let weights = weights_moment_formula(scheme, &none, &polys, &nodes, &Q::one())?;
    let probe = |x: f64| (x * x + omega2).powi(-(n as i32));
    let rule: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * probe(*x)).sum();
    if rule == 0.0 || !rule.is_finite() {
        return Err(Error::Degenerate { what: "calibration sum", index: n });
    }
    let exact = integrate_real_line(|x| probe(x) * (reference.density)(x), Tolerance::default()).value;
    rationalize(exact / rule, 1_000_000)
}
