use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{gauss, q, qi, GaussQ, Value, Q};

/// Total function of the index: constant, tabulated, or rule based.
#[derive(Clone)]
pub enum Seq<T> {
    Constant(T),
    Table(Vec<T>),
    Rule(Arc<dyn Fn(usize) -> T + Send + Sync>),
}

impl<T: Clone> Seq<T> {
    pub fn at(&self, name: &'static str, n: usize) -> Result<T> {
        match self {
            Seq::Constant(v) => Ok(v.clone()),
            Seq::Table(values) => values.get(n).cloned().ok_or(Error::SchemeIndex {
                name,
                index: n,
                len: values.len(),
            }),
            Seq::Rule(f) => Ok(f(n)),
        }
    }

    pub fn rule(f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Seq::Rule(Arc::new(f))
    }
}

impl<T: fmt::Debug> fmt::Debug for Seq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Constant(v) => write!(f, "Constant({v:?})"),
            Seq::Table(values) => write!(f, "Table({values:?})"),
            Seq::Rule(_) => write!(f, "Rule(..)"),
        }
    }
}

/// How the quadratic factor `(z - a_n)(z - b_n)` is specified.
#[derive(Clone, Debug)]
pub enum NodeSpec {
    General { a: Seq<GaussQ>, b: Seq<GaussQ> },
    /// `a_n = i*omega`, `b_n = -i*omega`, so the factor is `z^2 + omega^2`.
    Special { omega: Q },
    /// Factor identically one: an ordinary three-term recurrence.
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeForm {
    General,
    Special,
    Oprl,
}

/// Recurrence data `rho_n, c_n, lambda_n` and the node factor.
#[derive(Clone, Debug)]
pub struct CoefficientScheme {
    rho: Seq<Q>,
    c: Seq<Q>,
    lambda: Seq<Q>,
    nodes: NodeSpec,
}

impl CoefficientScheme {
    pub fn general(rho: Seq<Q>, c: Seq<Q>, lambda: Seq<Q>, a: Seq<GaussQ>, b: Seq<GaussQ>) -> Self {
        CoefficientScheme {
            rho,
            c,
            lambda,
            nodes: NodeSpec::General { a, b },
        }
    }

    pub fn special(rho: Seq<Q>, c: Seq<Q>, lambda: Seq<Q>, omega: Q) -> Result<Self> {
        if omega.is_zero() {
            return Err(Error::Input("omega must be nonzero".into()));
        }
        Ok(CoefficientScheme {
            rho,
            c,
            lambda,
            nodes: NodeSpec::Special { omega },
        })
    }

    pub fn oprl(rho: Seq<Q>, c: Seq<Q>, lambda: Seq<Q>) -> Self {
        CoefficientScheme {
            rho,
            c,
            lambda,
            nodes: NodeSpec::Unit,
        }
    }

    /// `rho_n = 1`, `c_n = 0`, `lambda_n = 1/4`, `omega = 1`.
    pub fn example() -> Self {
        CoefficientScheme::special(
            Seq::Constant(qi(1)),
            Seq::Constant(qi(0)),
            Seq::Constant(q(1, 4)),
            qi(1),
        )
        .expect("omega = 1")
    }

    pub fn form(&self) -> SchemeForm {
        match self.nodes {
            NodeSpec::General { .. } => SchemeForm::General,
            NodeSpec::Special { .. } => SchemeForm::Special,
            NodeSpec::Unit => SchemeForm::Oprl,
        }
    }

    pub fn node_spec(&self) -> &NodeSpec {
        &self.nodes
    }

    pub fn omega(&self) -> Option<&Q> {
        match &self.nodes {
            NodeSpec::Special { omega } => Some(omega),
            _ => None,
        }
    }

    pub fn rho(&self, n: usize) -> Result<Q> {
        self.rho.at("rho", n)
    }

    pub fn c(&self, n: usize) -> Result<Q> {
        self.c.at("c", n)
    }

    /// `lambda_n` for `n >= 1`; always checked positive.
    pub fn lambda(&self, n: usize) -> Result<Q> {
        if n == 0 {
            return Err(Error::Input("lambda_0 is not a recurrence coefficient".into()));
        }
        let v = self.lambda.at("lambda", n)?;
        if !v.is_positive() {
            return Err(Error::NonPositiveLambda { index: n });
        }
        Ok(v)
    }

    /// `(a_n, b_n)`; `None` for the unit factor.
    pub fn nodes(&self, n: usize) -> Result<Option<(GaussQ, GaussQ)>> {
        Ok(match &self.nodes {
            NodeSpec::General { a, b } => Some((a.at("a", n)?, b.at("b", n)?)),
            NodeSpec::Special { omega } => Some((
                gauss(Q::zero(), omega.clone()),
                gauss(Q::zero(), -omega.clone()),
            )),
            NodeSpec::Unit => None,
        })
    }

    /// `(z - a_n)(z - b_n)` evaluated in `R`.
    pub fn quad<R: Value>(&self, n: usize, z: &R) -> Result<R> {
        match &self.nodes {
            NodeSpec::Unit => Ok(R::one()),
            NodeSpec::Special { omega } => Ok(z.clone() * z.clone() + R::from_q(&(omega * omega))),
            NodeSpec::General { a, b } => {
                let (a, b) = (a.at("a", n)?, b.at("b", n)?);
                let sum = R::from_gauss(&(a.clone() + b.clone()));
                let prod = R::from_gauss(&(a * b));
                match (sum, prod) {
                    (Some(s), Some(p)) => Ok(z.clone() * z.clone() - s * z.clone() + p),
                    _ => Err(Error::NonRealNodes { index: n }),
                }
            }
        }
    }

    /// True when every quadratic factor up to `n_max` has rational coefficients.
    pub fn is_real(&self, n_max: usize) -> bool {
        (1..=n_max).all(|n| self.quad(n, &Q::one()).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn example_scheme_values() {
        let s = CoefficientScheme::example();
        assert_eq!(s.rho(7).unwrap(), qi(1));
        assert_eq!(s.lambda(3).unwrap(), q(1, 4));
        let x2p1 = s.quad(2, &Poly::<Q>::x()).unwrap();
        assert_eq!(x2p1, Poly::new(vec![qi(1), qi(0), qi(1)]));
    }

    #[test]
    fn tables_error_past_their_end() {
        let s = CoefficientScheme::oprl(
            Seq::Table(vec![qi(1), qi(1)]),
            Seq::Constant(qi(0)),
            Seq::Constant(qi(1)),
        );
        assert!(s.rho(1).is_ok());
        assert_eq!(
            s.rho(2),
            Err(Error::SchemeIndex {
                name: "rho",
                index: 2,
                len: 2
            })
        );
    }

    #[test]
    fn lambda_zero_and_nonpositive_are_rejected() {
        let s = CoefficientScheme::oprl(
            Seq::Constant(qi(1)),
            Seq::Constant(qi(0)),
            Seq::Table(vec![qi(0), qi(1), qi(-1)]),
        );
        assert!(s.lambda(0).is_err());
        assert!(s.lambda(1).is_ok());
        assert_eq!(s.lambda(2), Err(Error::NonPositiveLambda { index: 2 }));
    }

    #[test]
    fn special_form_requires_nonzero_omega() {
        let one = || Seq::Constant(qi(1));
        assert!(CoefficientScheme::special(one(), one(), one(), qi(0)).is_err());
    }

    #[test]
    fn complex_nodes_need_a_complex_value_type() {
        let s = CoefficientScheme::general(
            Seq::Constant(qi(1)),
            Seq::Constant(qi(0)),
            Seq::Constant(qi(1)),
            Seq::Constant(gauss(qi(1), qi(1))),
            Seq::Constant(gauss(qi(2), qi(0))),
        );
        assert_eq!(s.quad(1, &qi(0)), Err(Error::NonRealNodes { index: 1 }));
        let z = gauss(qi(0), qi(0));
        assert_eq!(s.quad(1, &z).unwrap(), gauss(qi(2), qi(2)));
        assert!(!s.is_real(3));
    }

    #[test]
    fn rule_sequences_are_pure() {
        let s = Seq::rule(|n| qi(n as i64 * 2));
        assert_eq!(s.at("c", 5).unwrap(), s.at("c", 5).unwrap());
    }
}
