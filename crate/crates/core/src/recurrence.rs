//! Forward recurrences for first-kind, second-kind and associated sequences.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::poly::Poly;
use crate::scalar::{gauss, q, GaussQ, Value, Q};
use crate::scheme::CoefficientScheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `P_{-1} = 0`, `P_0 = 1`.
    First,
    /// `Q_0 = 0`, `Q_1 = 1`.
    Second,
}

/// A scheme paired with an evaluation point `z` in some ring `R`.
///
/// With `R = Poly<S>` and `z = x` every quantity is a polynomial; with a scalar `R`
/// the same code evaluates at a point.
#[derive(Clone, Debug)]
pub struct Recurrence<'a, R> {
    pub scheme: &'a CoefficientScheme,
    pub z: R,
}

impl<'a, S: Value> Recurrence<'a, Poly<S>> {
    pub fn symbolic(scheme: &'a CoefficientScheme) -> Self {
        Recurrence {
            scheme,
            z: Poly::x(),
        }
    }
}

impl<'a, R: Value> Recurrence<'a, R> {
    pub fn at(scheme: &'a CoefficientScheme, z: R) -> Self {
        Recurrence { scheme, z }
    }

    pub fn constant(&self, v: &Q) -> R {
        R::from_q(v)
    }

    /// `rho_n (z - c_n*)`.
    pub fn linear(&self, n: usize, pert: &Perturbation) -> Result<R> {
        let mut c = self.scheme.c(n)?;
        if let Some(mu) = pert.mu_at(n) {
            c += mu;
        }
        let rho = self.scheme.rho(n)?;
        Ok(R::from_q(&rho) * (self.z.clone() - R::from_q(&c)))
    }

    /// `lambda_n* (z - a_n)(z - b_n)` for `n >= 1`.
    pub fn quad(&self, n: usize, pert: &Perturbation) -> Result<R> {
        let mut lambda = self.scheme.lambda(n)?;
        if let Some(nu) = pert.nu_at(n) {
            lambda *= nu;
        }
        Ok(R::from_q(&lambda) * self.scheme.quad(n, &self.z)?)
    }

    /// Unperturbed `(z - a_n)(z - b_n)`.
    pub fn node_factor(&self, n: usize) -> Result<R> {
        self.scheme.quad(n, &self.z)
    }

    /// `prod_{j=from}^{to} lambda_j (z - a_j)(z - b_j)`, empty products equal one.
    pub fn lambda_product(&self, from: usize, to: usize) -> Result<R> {
        let none = Perturbation::none();
        (from.max(1)..=to).try_fold(R::one(), |acc, j| Ok(acc * self.quad(j, &none)?))
    }

    /// Entries `0..=n` of the sequence with recurrence indices shifted by `shift`.
    pub fn sequence(&self, pert: &Perturbation, kind: Kind, shift: usize, n: usize) -> Result<Vec<R>> {
        pert.validate()?;
        let mut out = Vec::with_capacity(n + 1);
        match kind {
            Kind::First => {
                out.push(R::one());
                for m in 0..n {
                    let j = m + shift;
                    let mut next = self.linear(j, pert)? * out[m].clone();
                    if m > 0 {
                        next = next - self.quad(j, pert)? * out[m - 1].clone();
                    }
                    out.push(next);
                }
            }
            Kind::Second => {
                out.push(R::zero());
                if n >= 1 {
                    out.push(R::one());
                }
                for m in 1..n {
                    let j = m + shift;
                    let next = self.linear(j, pert)? * out[m].clone()
                        - self.quad(j, pert)? * out[m - 1].clone();
                    out.push(next);
                }
            }
        }
        Ok(out)
    }

    pub fn first(&self, pert: &Perturbation, n: usize) -> Result<Vec<R>> {
        self.sequence(pert, Kind::First, 0, n)
    }

    pub fn second(&self, pert: &Perturbation, n: usize) -> Result<Vec<R>> {
        self.sequence(pert, Kind::Second, 0, n)
    }

    /// First-kind associated sequence of order `j + 1`, entries `0..=n`.
    pub fn associated(&self, j: usize, n: usize) -> Result<Vec<R>> {
        self.sequence(&Perturbation::none(), Kind::First, j + 1, n)
    }

    /// `P^{(j+1)}_m`, with `P^{(j+1)}_{-1} = 0`.
    pub fn associated_entry(&self, j: usize, m: isize) -> Result<R> {
        if m < 0 {
            return Ok(R::zero());
        }
        Ok(self.associated(j, m as usize)?.pop().expect("nonempty"))
    }
}

/// Generated prefix of a sequence together with how it was produced.
#[derive(Clone, Debug)]
pub struct PolySeq<S> {
    pub perturbation: Perturbation,
    pub kind: Kind,
    pub shift: usize,
    pub polys: Vec<Poly<S>>,
}

impl<S: Value> PolySeq<S> {
    pub fn generate(scheme: &CoefficientScheme, perturbation: Perturbation, kind: Kind, shift: usize, n: usize) -> Result<Self> {
        let polys = Recurrence::symbolic(scheme).sequence(&perturbation, kind, shift, n)?;
        Ok(PolySeq {
            perturbation,
            kind,
            shift,
            polys,
        })
    }

    pub fn get(&self, n: usize) -> Option<&Poly<S>> {
        self.polys.get(n)
    }
}

/// `P_0..P_n`.
pub fn gen_first_kind<S: Value>(scheme: &CoefficientScheme, pert: &Perturbation, n: usize) -> Result<Vec<Poly<S>>> {
    Recurrence::symbolic(scheme).first(pert, n)
}

/// `Q_0..Q_n`, `n >= 1`.
pub fn gen_second_kind<S: Value>(scheme: &CoefficientScheme, pert: &Perturbation, n: usize) -> Result<Vec<Poly<S>>> {
    if n == 0 {
        return Err(Error::Input("second-kind generation needs n >= 1".into()));
    }
    Recurrence::symbolic(scheme).second(pert, n)
}

/// Associated sequence of order `j + 1`, entries `0..=n`.
pub fn gen_associated<S: Value>(scheme: &CoefficientScheme, j: usize, n: usize, kind: Kind) -> Result<Vec<Poly<S>>> {
    Recurrence::symbolic(scheme).sequence(&Perturbation::none(), kind, j + 1, n)
}

/// Entry `n` of the chosen sequence evaluated at `z` without forming coefficients.
pub fn eval_recurrence_at<S: Value>(scheme: &CoefficientScheme, pert: &Perturbation, kind: Kind, n: usize, z: &S) -> Result<S> {
    let mut seq = Recurrence::at(scheme, z.clone()).sequence(pert, kind, 0, n)?;
    Ok(seq.swap_remove(n))
}

/// `i((x - i)/2)^{n+1} - i((x + i)/2)^{n+1}` with exact rational coefficients.
pub fn example_closed_form(n: usize) -> Poly<Q> {
    let i = gauss(Q::zero(), Q::one());
    let half = GaussQ::from_q(&q(1, 2));
    let x = Poly::<GaussQ>::x();
    let minus = (x.clone() - Poly::constant(i.clone())).scale(&half).pow(n + 1);
    let plus = (x + Poly::constant(i.clone())).scale(&half).pow(n + 1);
    let p = minus.scale(&i) - plus.scale(&i);
    p.map(|c| {
        debug_assert!(c.im.is_zero());
        c.re.clone()
    })
}
