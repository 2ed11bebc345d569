//! Reduction of constant-node R_II recurrences to ordinary three-term recurrences, and
//! the co-polynomial relations on the real line.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::poly::Poly;
use crate::recurrence::{eval_recurrence_at, Kind, Recurrence};
use crate::scalar::{qi, Q};
use crate::scheme::{CoefficientScheme, NodeSpec, Seq};
use crate::transfer::structural_residual;

/// Parameters of `P^_n(x) = (gamma x + delta)^n P_n((alpha x + beta) / (gamma x + delta))`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusParams {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
    pub delta: Q,
    pub a: Q,
}

impl MobiusParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha != &self.gamma * &self.a {
            return Err(Error::Input("reduction needs alpha = gamma * a".into()));
        }
        if (&self.alpha * &self.delta - &self.beta * &self.gamma).is_zero() {
            return Err(Error::Input("alpha*delta - beta*gamma must be nonzero".into()));
        }
        if self.beta == &self.a * &self.delta {
            return Err(Error::Input("beta = a*delta makes every reduced lambda vanish".into()));
        }
        Ok(())
    }
}

/// Reduced coefficients `rho^_n, c^_n` for `n = 0..=n_max` and `lambda^_n` for `n = 1..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct OprlScheme {
    pub rho_hat: Vec<Q>,
    pub c_hat: Vec<Q>,
    pub lambda_hat: Vec<Q>,
}

impl OprlScheme {
    pub fn n_max(&self) -> usize {
        self.rho_hat.len() - 1
    }

    pub fn lambda(&self, n: usize) -> Result<Q> {
        if n == 0 {
            return Err(Error::Input("lambda_0 is not a recurrence coefficient".into()));
        }
        self.lambda_hat.get(n - 1).cloned().ok_or(Error::SchemeIndex {
            name: "lambda_hat",
            index: n,
            len: self.lambda_hat.len() + 1,
        })
    }

    pub fn c(&self, n: usize) -> Result<Q> {
        self.c_hat.get(n).cloned().ok_or(Error::SchemeIndex {
            name: "c_hat",
            index: n,
            len: self.c_hat.len(),
        })
    }

    /// Tabulated scheme with unit node factor.
    pub fn to_scheme(&self) -> CoefficientScheme {
        let mut lambda = vec![Q::zero()];
        lambda.extend(self.lambda_hat.iter().cloned());
        CoefficientScheme::oprl(
            Seq::Table(self.rho_hat.clone()),
            Seq::Table(self.c_hat.clone()),
            Seq::Table(lambda),
        )
    }
}

/// Maps a scheme with `a_n = b_n = a` to its three-term form.
pub fn reduce_to_oprl(scheme: &CoefficientScheme, params: &MobiusParams, n_max: usize) -> Result<OprlScheme> {
    params.validate()?;
    match scheme.node_spec() {
        NodeSpec::General { .. } => {}
        _ => return Err(Error::Input("reduction needs a general scheme with constant real nodes".into())),
    }
    for n in 1..=n_max {
        let (a, b) = scheme.nodes(n)?.expect("general nodes");
        if !a.im.is_zero() || a != b || a.re != params.a {
            return Err(Error::Input(format!("nodes at index {n} are not a_n = b_n = a")));
        }
    }
    let gap = &params.beta - &params.a * &params.delta;
    let mut out = OprlScheme {
        rho_hat: Vec::with_capacity(n_max + 1),
        c_hat: Vec::with_capacity(n_max + 1),
        lambda_hat: Vec::with_capacity(n_max),
    };
    for n in 0..=n_max {
        let c = scheme.c(n)?;
        let denom = &params.alpha - &params.gamma * &c;
        if denom.is_zero() {
            return Err(Error::SingularReduction { index: n });
        }
        out.rho_hat.push(scheme.rho(n)? * &denom);
        out.c_hat.push((&params.delta * &c - &params.beta) / &denom);
        if n >= 1 {
            out.lambda_hat.push(scheme.lambda(n)? * &gap * &gap);
        }
    }
    Ok(out)
}

/// `(gamma x + delta)^n P_n(y) - P^_n(x)` at a point, `y = (alpha x + beta)/(gamma x + delta)`.
pub fn mobius_residual(scheme: &CoefficientScheme, params: &MobiusParams, oprl: &OprlScheme, n: usize, x: &Q) -> Result<Q> {
    let g = &params.gamma * x + &params.delta;
    if g.is_zero() {
        return Err(Error::Input("gamma x + delta vanishes".into()));
    }
    let y = (&params.alpha * x + &params.beta) / &g;
    let none = Perturbation::none();
    let original = eval_recurrence_at(scheme, &none, Kind::First, n, &y)?;
    let reduced = eval_recurrence_at(&oprl.to_scheme(), &none, Kind::First, n, x)?;
    Ok(num_traits::pow(g, n) * original - reduced)
}

/// Structural relation residuals for the reduced recurrence.
pub fn coprl_structural(oprl: &OprlScheme, k: usize, kp: usize, mu: Q, nu: Q, n: usize, x: &Q) -> Result<(Q, Q)> {
    let scheme = oprl.to_scheme();
    structural_residual(&Recurrence::at(&scheme, x.clone()), &Perturbation::both(k, mu, kp, nu), n)
}

/// Outcome of computing `P_{k+1}(x; mu_{k+1}, nu_k)` three ways in the shifted monic convention.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionComparison<T> {
    pub direct: T,
    pub corrected: T,
    pub flawed: T,
    /// `flawed - direct`.
    pub discrepancy: T,
    /// `W_k = mu P_k + (nu - 1) lambda_k P_{k-1}`.
    pub w: T,
}

/// Monic recurrence `P_{n+1} = (x - c_{n+1}) P_n - lambda_n P_{n-1}` with the step at `n = k`
/// using `c_{k+1} + mu` and `nu lambda_k`; returns `P_0..P_n`.
fn shifted_monic(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q, n: usize) -> Result<Vec<Poly<Q>>> {
    let mut out = vec![Poly::one()];
    for m in 0..n {
        let mut c = oprl.c(m + 1)?;
        if m == k {
            c += mu;
        }
        let mut next = (Poly::x() - Poly::constant(c)) * out[m].clone();
        if m > 0 {
            let mut lambda = oprl.lambda(m)?;
            if m == k {
                lambda *= nu;
            }
            next = next - out[m - 1].scale(&lambda);
        }
        out.push(next);
    }
    Ok(out)
}

/// Associated polynomials `P^{(j)}_0..P^{(j)}_n` of the shifted convention.
fn shifted_associated(oprl: &OprlScheme, j: usize, n: usize) -> Result<Vec<Poly<Q>>> {
    let mut out = vec![Poly::one()];
    for m in 0..n {
        let mut next = (Poly::x() - Poly::constant(oprl.c(m + j + 1)?)) * out[m].clone();
        if m > 0 {
            next = next - out[m - 1].scale(&oprl.lambda(m + j)?);
        }
        out.push(next);
    }
    Ok(out)
}

fn w_poly(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q) -> Result<Poly<Q>> {
    let p = shifted_monic(oprl, usize::MAX, &Q::zero(), &Q::one(), k)?;
    Ok(p[k].scale(mu) + p[k - 1].scale(&((nu - Q::one()) * oprl.lambda(k)?)))
}

/// Direct, corrected and flawed forms of `P_{k+1}(x; mu_{k+1}, nu_k)` as polynomials, `k >= 1`.
pub fn comparison_polys(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q) -> Result<CorrectionComparison<Poly<Q>>> {
    if k == 0 {
        return Err(Error::Input("the comparison needs k >= 1".into()));
    }
    let base = shifted_monic(oprl, usize::MAX, &Q::zero(), &Q::one(), k + 1)?;
    let direct = shifted_monic(oprl, k, mu, nu, k + 1)?.pop().expect("nonempty");
    let w = w_poly(oprl, k, mu, nu)?;
    let corrected = base[k + 1].clone() - w.clone();
    let flawed = base[k + 1].clone() - w.clone() * shifted_associated(oprl, k, 1)?[1].clone();
    Ok(CorrectionComparison {
        discrepancy: flawed.clone() - direct.clone(),
        direct,
        corrected,
        flawed,
        w,
    })
}

/// The comparison record evaluated at `x`.
pub fn corrected_vs_flawed(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q, x: &Q) -> Result<CorrectionComparison<Q>> {
    let p = comparison_polys(oprl, k, mu, nu)?;
    Ok(CorrectionComparison {
        direct: p.direct.eval(x),
        corrected: p.corrected.eval(x),
        flawed: p.flawed.eval(x),
        discrepancy: p.discrepancy.eval(x),
        w: p.w.eval(x),
    })
}

/// `P_n(x; mu_{k+1}, nu_k) - (P_n - W_k P^{(k+1)}_{n-k-1})` for `n > k`, as a polynomial.
pub fn corrected_relation_residual(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q, n: usize) -> Result<Poly<Q>> {
    if k == 0 || n <= k {
        return Err(Error::Input("needs 1 <= k < n".into()));
    }
    let base = shifted_monic(oprl, usize::MAX, &Q::zero(), &Q::one(), n)?;
    let direct = shifted_monic(oprl, k, mu, nu, n)?;
    let assoc = shifted_associated(oprl, k + 1, n - k - 1)?;
    let w = w_poly(oprl, k, mu, nu)?;
    Ok(direct[n].clone() - (base[n].clone() - w * assoc[n - k - 1].clone()))
}

/// `-W_k (x - c_{k+1} - 1)`, the predicted gap between the flawed form and the recurrence.
pub fn predicted_discrepancy(oprl: &OprlScheme, k: usize, mu: &Q, nu: &Q) -> Result<Poly<Q>> {
    let w = w_poly(oprl, k, mu, nu)?;
    let factor = Poly::x() - Poly::constant(oprl.c(k + 1)? + qi(1));
    Ok(-(w * factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, q};

    fn constant_node_scheme(c: Q, a: Q) -> CoefficientScheme {
        CoefficientScheme::general(
            Seq::Constant(qi(1)),
            Seq::Constant(c),
            Seq::Constant(qi(1)),
            Seq::Constant(gauss(a.clone(), Q::zero())),
            Seq::Constant(gauss(a, Q::zero())),
        )
    }

    fn params() -> MobiusParams {
        MobiusParams {
            alpha: qi(0),
            beta: qi(-1),
            gamma: qi(1),
            delta: qi(0),
            a: qi(0),
        }
    }

    #[test]
    fn reduction_example_values() {
        let r = reduce_to_oprl(&constant_node_scheme(qi(2), qi(0)), &params(), 6).unwrap();
        assert!(r.lambda_hat.iter().all(|l| *l == qi(1)));
        assert!(r.rho_hat.iter().all(|p| *p == qi(-2)));
        assert!(r.c_hat.iter().all(|c| *c == q(-1, 2)));
    }

    #[test]
    fn degenerate_and_singular_reductions_are_rejected() {
        let mut p = params();
        p.beta = qi(0);
        assert!(reduce_to_oprl(&constant_node_scheme(qi(2), qi(0)), &p, 3).is_err());
        let s = constant_node_scheme(qi(0), qi(0));
        assert_eq!(reduce_to_oprl(&s, &params(), 3), Err(Error::SingularReduction { index: 0 }));
    }

    #[test]
    fn mobius_map_matches_reduced_recurrence() {
        let s = constant_node_scheme(qi(2), qi(0));
        let r = reduce_to_oprl(&s, &params(), 8).unwrap();
        for n in 0..=8 {
            assert!(mobius_residual(&s, &params(), &r, n, &q(3, 5)).unwrap().is_zero());
        }
    }

    #[test]
    fn coprl_example_instance_vanishes() {
        let r = reduce_to_oprl(&constant_node_scheme(qi(2), qi(0)), &params(), 8).unwrap();
        let res = coprl_structural(&r, 1, 3, q(1, 10), q(11, 10), 5, &q(1, 3)).unwrap();
        assert_eq!(res, (qi(0), qi(0)));
    }

    #[test]
    fn ordinary_recurrence_perturbation_agrees() {
        let r = reduce_to_oprl(&constant_node_scheme(qi(2), qi(0)), &params(), 8).unwrap();
        let cmp = comparison_polys(&r, 2, &qi(0), &qi(1)).unwrap();
        assert!(cmp.w.is_zero());
        assert_eq!(cmp.direct, cmp.corrected);
        assert_eq!(cmp.direct, cmp.flawed);
    }
}
