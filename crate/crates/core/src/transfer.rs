//! Step matrices, F-matrix products, transfer matrices and the structural relation.
//!
//! Every function is generic over the ring `R` of a [`Recurrence`], so the same code
//! yields polynomial identities (`R = Poly<S>`) and pointwise residuals (`R = S`).

use num_traits::One;

use crate::error::{Error, Result};
use crate::mat2::{Mat2, PolyMatrix2};
use crate::perturbation::{Level, Perturbation};
use crate::recurrence::{Kind, Recurrence};
use crate::scalar::{Value, Q};
use crate::scheme::{CoefficientScheme, SchemeForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    General,
    Special,
    Oprl,
}

/// `[[rho_n (z - c_n*), -lambda_n* (z - a_n)(z - b_n)], [1, 0]]`; the step at `n = 0` carries `-1`.
pub fn step_matrix<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize) -> Result<Mat2<R>> {
    let upper = if n == 0 { -R::one() } else { -rec.quad(n, pert)? };
    Ok(Mat2::new(rec.linear(n, pert)?, upper, R::one(), R::zero()))
}

/// `F_{n+1} = T_n ... T_0 = [[P_{n+1}, -Q_{n+1}], [P_n, -Q_n]]`.
pub fn f_matrix<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize) -> Result<Mat2<R>> {
    (0..=n).try_fold(Mat2::identity(), |acc, j| Ok(step_matrix(rec, pert, j)? * acc))
}

/// `[[P_{n+1}, P_n], [-Q_{n+1}, -Q_n]]`, the transpose of `F_{n+1}`, from the recurrences.
pub fn displayed_matrix<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize) -> Result<Mat2<R>> {
    let p = rec.first(pert, n + 1)?;
    let q = rec.second(pert, n + 1)?;
    Ok(Mat2::new(
        p[n + 1].clone(),
        p[n].clone(),
        -q[n + 1].clone(),
        -q[n].clone(),
    ))
}

struct LevelTerm<R> {
    coef: R,
    a_index: usize,
    b_index: usize,
}

fn level_term<R: Value>(rec: &Recurrence<R>, level: &Level) -> Result<LevelTerm<R>> {
    Ok(match level {
        Level::Corec { k, mu } => LevelTerm {
            coef: R::from_q(&(mu * rec.scheme.rho(*k)?)),
            a_index: *k,
            b_index: *k,
        },
        Level::Codil { kp, nu } => LevelTerm {
            coef: R::from_q(&(nu - Q::one())) * rec.quad(*kp, &Perturbation::none())?,
            a_index: kp - 1,
            b_index: *kp,
        },
    })
}

/// Right-hand side of the structural relation for `X_{n+1}(z; mu, nu)`, `n >= top`.
///
/// Each level contributes `coef * X_a * P^{(l+1)}_{n-l}`, where `X_a` is taken from the
/// sequence already carrying the earlier levels.
pub fn structural_rhs<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize, kind: Kind) -> Result<R> {
    check_order(pert, n)?;
    let base = rec.sequence(&Perturbation::none(), kind, 0, n + 1)?;
    let mut value = base[n + 1].clone();
    for (i, level) in pert.levels().iter().enumerate() {
        let term = level_term(rec, level)?;
        let before = rec.sequence(&pert.prefix(i), kind, 0, n + 1)?;
        let l = level.index();
        let assoc = rec.associated_entry(l, (n - l) as isize)?;
        value = value - term.coef * before[term.a_index].clone() * assoc;
    }
    Ok(value)
}

/// LHS - RHS of the first- and second-kind structural relations.
pub fn structural_residual<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize) -> Result<(R, R)> {
    let p = rec.first(pert, n + 1)?;
    let q = rec.second(pert, n + 1)?;
    Ok((
        p[n + 1].clone() - structural_rhs(rec, pert, n, Kind::First)?,
        q[n + 1].clone() - structural_rhs(rec, pert, n, Kind::Second)?,
    ))
}

pub fn structural_residual_at<S: Value>(scheme: &CoefficientScheme, pert: &Perturbation, n: usize, z: &S) -> Result<(S, S)> {
    structural_residual(&Recurrence::at(scheme, z.clone()), pert, n)
}

/// Transfer matrix `S` with `K F^T(z; mu, nu) = S F^T(z)`, `K = prod_{j=1}^{top} lambda_j (z-a_j)(z-b_j)`.
pub fn transfer_matrix<R: Value>(rec: &Recurrence<R>, pert: &Perturbation) -> Result<Mat2<R>> {
    pert.validate()?;
    let top = pert.top();
    let none = Perturbation::none();
    let p = rec.first(&none, top)?;
    let q = rec.second(&none, top)?;
    let mut s = Mat2::diagonal(rec.lambda_product(1, top)?);
    for (i, level) in pert.levels().iter().enumerate() {
        let term = level_term(rec, level)?;
        let before = pert.prefix(i);
        let pa = rec.first(&before, top)?[term.a_index].clone();
        let qa = rec.second(&before, top)?[term.a_index].clone();
        let (pb, qb) = (p[term.b_index].clone(), q[term.b_index].clone());
        let c = term.coef * rec.lambda_product(level.index() + 1, top)?;
        let contribution = Mat2::new(
            pa.clone() * qb.clone(),
            pa * pb.clone(),
            -(qa.clone() * qb),
            -(qa * pb),
        );
        s = Mat2::new(
            s.a11 + c.clone() * contribution.a11,
            s.a12 + c.clone() * contribution.a12,
            s.a21 + c.clone() * contribution.a21,
            s.a22 + c * contribution.a22,
        );
    }
    Ok(s)
}

/// `K` of the transfer relation.
pub fn transfer_scale<R: Value>(rec: &Recurrence<R>, pert: &Perturbation) -> Result<R> {
    rec.lambda_product(1, pert.top())
}

/// Polynomial transfer matrix for explicit levels and values, checked against the scheme form.
pub fn perturbation_transfer<S: Value>(
    scheme: &CoefficientScheme,
    k: usize,
    kp: usize,
    mu: Q,
    nu: Q,
    variant: Variant,
) -> Result<PolyMatrix2<S>> {
    let expected = match variant {
        Variant::General => None,
        Variant::Special => Some(SchemeForm::Special),
        Variant::Oprl => Some(SchemeForm::Oprl),
    };
    if let Some(form) = expected {
        if scheme.form() != form {
            return Err(Error::Config(format!(
                "{variant:?} transfer matrix requested for a {:?} scheme",
                scheme.form()
            )));
        }
    }
    transfer_matrix(&Recurrence::symbolic(scheme), &Perturbation::both(k, mu, kp, nu))
}

/// `K F^T_{n+1}(z; mu, nu) - S F^T_{n+1}(z)`, all zero when the relation holds.
pub fn transfer_residual<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, n: usize) -> Result<Mat2<R>> {
    check_order(pert, n)?;
    let k = transfer_scale(rec, pert)?;
    let s = transfer_matrix(rec, pert)?;
    let lhs = displayed_matrix(rec, pert, n)?.scale(&k);
    let rhs = s * displayed_matrix(rec, &Perturbation::none(), n)?;
    Ok(lhs - rhs)
}

fn check_order(pert: &Perturbation, n: usize) -> Result<()> {
    pert.validate()?;
    if n < pert.top() {
        return Err(Error::Input(format!(
            "relation needs n >= {} (highest perturbed level), got {n}",
            pert.top()
        )));
    }
    Ok(())
}
