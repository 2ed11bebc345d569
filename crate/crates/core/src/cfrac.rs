//! Truncated R_II continued fractions, tails, homographies and the spectral relation.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mat2::{Mat2, PolyMatrix2};
use crate::perturbation::Perturbation;
use crate::poly::Poly;
use crate::recurrence::{Kind, Recurrence};
use crate::scalar::{GaussQ, Scalar, Value, Q};
use crate::scheme::CoefficientScheme;
use crate::transfer::transfer_matrix;

/// Continued fraction whose first partial quotient is `rho_start (z - c_start*)`.
#[derive(Clone, Debug)]
pub struct CFracSpec<'a> {
    pub scheme: &'a CoefficientScheme,
    pub perturbation: Perturbation,
    pub start: usize,
}

impl<'a> CFracSpec<'a> {
    pub fn full(scheme: &'a CoefficientScheme, perturbation: Perturbation) -> Self {
        CFracSpec {
            scheme,
            perturbation,
            start: 0,
        }
    }

    /// Tail left after deleting the first `kp + 1` partial quotients.
    pub fn tail(scheme: &'a CoefficientScheme, kp: isize) -> Self {
        CFracSpec {
            scheme,
            perturbation: Perturbation::none(),
            start: (kp + 1).max(0) as usize,
        }
    }
}

/// Value of the depth-`depth` truncation at `z`, evaluated from the bottom up.
///
/// The running tail is kept as a numerator/denominator pair so intermediate zeros are
/// harmless; a vanishing quadratic factor terminates the fraction at that level.
pub fn convergent<S: Scalar>(spec: &CFracSpec, depth: usize, z: &S) -> Result<S> {
    let (num, den) = projective_convergent(spec, depth, z)?;
    if num.is_zero() {
        return Err(Error::Pole {
            index: spec.start + depth,
        });
    }
    Ok(den / num)
}

fn projective_convergent<S: Scalar>(spec: &CFracSpec, depth: usize, z: &S) -> Result<(S, S)> {
    if depth == 0 {
        return Err(Error::Input("convergent depth must be at least 1".into()));
    }
    let rec = Recurrence::at(spec.scheme, z.clone());
    let pert = &spec.perturbation;
    let mut num = rec.linear(spec.start + depth - 1, pert)?;
    let mut den = S::one();
    for j in (1..depth).rev() {
        let b = rec.linear(spec.start + j - 1, pert)?;
        let a = rec.quad(spec.start + j, pert)?;
        if a.is_zero() {
            num = b;
            den = S::one();
        } else {
            let next = b * num.clone() - a * den;
            den = num;
            num = next;
        }
    }
    Ok((num, den))
}

/// Float convergent: poles yield a signed infinity and set the flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatConvergent {
    pub value: f64,
    pub pole: bool,
}

pub fn convergent_float(spec: &CFracSpec, depth: usize, z: f64) -> Result<FloatConvergent> {
    let (num, den) = projective_convergent(spec, depth, &z)?;
    if num == 0.0 {
        let sign = if den.is_sign_negative() != num.is_sign_negative() { -1.0 } else { 1.0 };
        return Ok(FloatConvergent {
            value: sign * f64::INFINITY,
            pole: true,
        });
    }
    Ok(FloatConvergent {
        value: den / num,
        pole: false,
    })
}

/// Convergent of the tail after deleting `kp + 1` quotients; `kp = -1` is the full fraction.
pub fn tail_convergent<S: Scalar>(scheme: &CoefficientScheme, kp: isize, depth: usize, z: &S) -> Result<S> {
    convergent(&CFracSpec::tail(scheme, kp), depth, z)
}

/// `u -> (a u + b) / (c u + d)` with polynomial entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Homography<S> {
    pub matrix: PolyMatrix2<S>,
}

impl<S: Scalar> Homography<S> {
    pub fn new(matrix: PolyMatrix2<S>) -> Result<Self> {
        if matrix.det().is_zero() {
            return Err(Error::Input("homography matrix has zero determinant".into()));
        }
        Ok(Homography { matrix })
    }

    pub fn apply(&self, u: &S, z: &S) -> Result<S> {
        apply_matrix(&self.matrix.eval(z), u)
    }
}

pub fn apply_homography<S: Scalar>(h: &Homography<S>, u: &S, z: &S) -> Result<S> {
    h.apply(u, z)
}

/// Applies an evaluated 2x2 matrix as a Moebius map.
pub fn apply_matrix<S: Scalar>(m: &Mat2<S>, u: &S) -> Result<S> {
    let den = m.a21.clone() * u.clone() + m.a22.clone();
    if den.is_zero() {
        return Err(Error::Pole { index: 0 });
    }
    Ok((m.a11.clone() * u.clone() + m.a12.clone()) / den)
}

fn lemma1_entries<R: Value>(rec: &Recurrence<R>, pert: &Perturbation, m: usize) -> Result<Mat2<R>> {
    let p = rec.first(pert, m + 1)?;
    let q = rec.second(pert, m + 1)?;
    let w = rec.quad(m + 1, &Perturbation::none())?;
    Ok(Mat2::new(
        w.clone() * q[m].clone(),
        -q[m + 1].clone(),
        w * p[m].clone(),
        -p[m + 1].clone(),
    ))
}

/// Matrix carrying the tail after the highest perturbed level to the perturbed fraction.
pub fn lemma1_for<S: Scalar>(scheme: &CoefficientScheme, pert: &Perturbation) -> Result<Homography<S>> {
    Homography::new(lemma1_entries(&Recurrence::<Poly<S>>::symbolic(scheme), pert, pert.top())?)
}

pub fn lemma1_matrix<S: Scalar>(scheme: &CoefficientScheme, k: usize, kp: usize, mu: Q, nu: Q) -> Result<Homography<S>> {
    lemma1_for(scheme, &Perturbation::both(k, mu, kp, nu))
}

/// Matrix carrying the unperturbed fraction to its tail after level `m`.
pub fn lemma2_matrix<S: Scalar>(scheme: &CoefficientScheme, m: usize) -> Result<Homography<S>> {
    let rec = Recurrence::<Poly<S>>::symbolic(scheme);
    let none = Perturbation::none();
    let p = rec.first(&none, m + 1)?;
    let q = rec.second(&none, m + 1)?;
    let w = rec.quad(m + 1, &none)?;
    Homography::new(Mat2::new(
        p[m + 1].clone(),
        -q[m + 1].clone(),
        w.clone() * p[m].clone(),
        -(w * q[m].clone()),
    ))
}

/// `cof(S)` as a homography: perturbed fraction as a transform of the unperturbed one.
pub fn spectral_homography<S: Scalar>(scheme: &CoefficientScheme, pert: &Perturbation) -> Result<Homography<S>> {
    Homography::new(transfer_matrix(&Recurrence::<Poly<S>>::symbolic(scheme), pert)?.cof())
}

/// `R(z; mu, nu) - cof(S)(R(z))` with both fractions truncated at `depth >= top`.
pub fn spectral_residual_for<S: Scalar>(scheme: &CoefficientScheme, pert: &Perturbation, z: &S, depth: usize) -> Result<S> {
    if depth < pert.top().max(1) {
        return Err(Error::Input(format!("matched truncation needs depth >= {}", pert.top().max(1))));
    }
    let s = transfer_matrix(&Recurrence::at(scheme, z.clone()), pert)?;
    let perturbed = convergent(&CFracSpec::full(scheme, pert.clone()), depth, z)?;
    let base = convergent(&CFracSpec::full(scheme, Perturbation::none()), depth, z)?;
    Ok(perturbed - apply_matrix(&s.cof(), &base)?)
}

pub fn spectral_residual<S: Scalar>(scheme: &CoefficientScheme, k: usize, kp: usize, mu: Q, nu: Q, z: &S, depth: usize) -> Result<S> {
    spectral_residual_for(scheme, &Perturbation::both(k, mu, kp, nu), z, depth)
}

/// Residuals of the homography chain at one point and matched depth `depth >= top + 2`:
/// perturbed fraction vs. tail map, tail vs. unperturbed map, and the composed cofactor map.
pub fn homography_chain_residuals<S: Scalar>(scheme: &CoefficientScheme, pert: &Perturbation, z: &S, depth: usize) -> Result<[S; 3]> {
    let m = pert.top();
    if depth < m + 2 {
        return Err(Error::Input(format!("homography chain needs depth >= {}", m + 2)));
    }
    let rec = Recurrence::at(scheme, z.clone());
    let perturbed = convergent(&CFracSpec::full(scheme, pert.clone()), depth, z)?;
    let base = convergent(&CFracSpec::full(scheme, Perturbation::none()), depth, z)?;
    let tail = tail_convergent(scheme, m as isize, depth - m - 1, z)?;
    let l1 = lemma1_entries(&rec, pert, m)?;
    let l2 = lemma1_entries(&rec, &Perturbation::none(), m)?.adj();
    let s = transfer_matrix(&rec, pert)?;
    Ok([
        perturbed.clone() - apply_matrix(&l1, &tail)?,
        tail - apply_matrix(&l2, &base)?,
        perturbed - apply_matrix(&s.cof(), &base)?,
    ])
}

/// Convergence-gap diagnostic: `|R_{d1}(z; mu, nu) - cof(S)(R_{d2}(z))|` for unmatched depths.
pub fn spectral_gap(scheme: &CoefficientScheme, pert: &Perturbation, z: &GaussQ, depth_pert: usize, depth_base: usize) -> Result<f64> {
    let s = transfer_matrix(&Recurrence::at(scheme, z.clone()), pert)?;
    let perturbed = convergent(&CFracSpec::full(scheme, pert.clone()), depth_pert, z)?;
    let base = convergent(&CFracSpec::full(scheme, Perturbation::none()), depth_base, z)?;
    Ok((perturbed - apply_matrix(&s.cof(), &base)?).to_c64().norm())
}

/// `Q_n(z) / P_n(z)` straight from the recurrences.
pub fn polynomial_ratio<S: Scalar>(scheme: &CoefficientScheme, pert: &Perturbation, n: usize, z: &S) -> Result<S> {
    let rec = Recurrence::at(scheme, z.clone());
    let p = rec.sequence(pert, Kind::First, 0, n)?;
    let q = rec.sequence(pert, Kind::Second, 0, n)?;
    if p[n].is_zero() {
        return Err(Error::Pole { index: n });
    }
    Ok(q[n].clone() / p[n].clone())
}
