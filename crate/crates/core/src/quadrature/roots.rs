//! Zeros of exact-coefficient polynomials.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{f64_to_q, q_to_f64, Q};

pub const DEFAULT_TOL_IMAG: f64 = 1e-9;

const MAX_SCHUR_ITER: usize = 100_000;
const MAX_NEWTON: usize = 12;

/// Parlett-Reinsch balancing with radix 2, in place.
fn balance(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / 2.0;
            while c < g {
                f *= 2.0;
                c *= 4.0;
            }
            g = r * 2.0;
            while c > g {
                f /= 2.0;
                c /= 4.0;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            return;
        }
    }
}

/// All complex zeros from the eigenvalues of the balanced companion matrix.
pub fn complex_zeros(poly: &Poly<Q>) -> Result<Vec<Complex64>> {
    let n = poly.degree().filter(|d| *d >= 1).ok_or_else(|| Error::Input("root finding needs degree >= 1".into()))?;
    let lead = poly.leading().expect("nonzero").clone();
    let monic: Vec<f64> = poly.coeffs()[..n].iter().map(|c| q_to_f64(&(c / &lead))).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for (i, c) in monic.iter().enumerate() {
        m[(i, n - 1)] = -c;
    }
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, MAX_SCHUR_ITER)
        .ok_or_else(|| Error::Input("companion eigenvalue iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// `sum |c_i| |x|^i`, the natural size of `P(x)` for cancellation checks.
pub fn eval_scale(poly: &Poly<Q>, x: f64) -> f64 {
    poly.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + q_to_f64(c).abs())
}

/// Newton iteration with every step `P(x)/P'(x)` computed exactly at the float `x`.
pub fn newton_polish(poly: &Poly<Q>, deriv: &Poly<Q>, mut x: f64) -> f64 {
    for _ in 0..MAX_NEWTON {
        let xq = match f64_to_q(x) {
            Ok(v) => v,
            Err(_) => return x,
        };
        let d = deriv.eval(&xq);
        if d.is_zero() {
            return x;
        }
        let step = q_to_f64(&(poly.eval(&xq) / d));
        let next = x - step;
        if !next.is_finite() {
            return x;
        }
        if step.abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) || next == x {
            return next;
        }
        x = next;
    }
    x
}

/// Real zeros sorted ascending, together with the imaginary parts that were snapped to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RealZeros {
    pub zeros: Vec<f64>,
    pub snapped: Vec<(f64, f64)>,
}

/// Real zeros of `poly`, all of them or an error listing the complex pairs.
///
/// A root is real when `|Im| <= tol_imag (1 + |Re|)`.
pub fn real_zeros_detailed(poly: &Poly<Q>, tol_imag: f64) -> Result<RealZeros> {
    let roots = complex_zeros(poly)?;
    let pairs: Vec<(f64, f64)> = roots
        .iter()
        .filter(|r| r.im > tol_imag * (1.0 + r.re.abs()))
        .map(|r| (r.re, r.im))
        .collect();
    if roots.iter().any(|r| r.im.abs() > tol_imag * (1.0 + r.re.abs())) {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        return Err(Error::ComplexZeros { pairs });
    }
    let deriv = poly.derivative();
    let snapped = roots.iter().filter(|r| r.im != 0.0).map(|r| (r.re, r.im)).collect();
    let mut zeros: Vec<f64> = roots.iter().map(|r| newton_polish(poly, &deriv, r.re)).collect();
    zeros.sort_by(f64::total_cmp);
    for (j, w) in zeros.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::Degenerate { what: "repeated zero", index: j + 1 });
        }
    }
    for x in &zeros {
        let residual = q_to_f64(&poly.eval(&f64_to_q(*x)?)).abs();
        let scale = eval_scale(poly, *x);
        if residual > 1e-13 * scale {
            log::warn!("zero {x} polished only to |P| = {residual:e} (scale {scale:e})");
        }
    }
    Ok(RealZeros { zeros, snapped })
}

pub fn real_zeros(poly: &Poly<Q>, tol_imag: f64) -> Result<Vec<f64>> {
    real_zeros_detailed(poly, tol_imag).map(|r| r.zeros)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::Perturbation;
    use crate::recurrence::gen_first_kind;
    use crate::scalar::{q, qi};
    use crate::scheme::CoefficientScheme;

    #[test]
    fn example_p2_zeros() {
        let z = real_zeros(&Poly::new(vec![q(-1, 4), qi(0), q(3, 4)]), DEFAULT_TOL_IMAG).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((z[0] + r).abs() < 1e-15 && (z[1] - r).abs() < 1e-15);
    }

    #[test]
    fn cotangent_zeros_up_to_degree_thirty() {
        let p = gen_first_kind::<Q>(&CoefficientScheme::example(), &Perturbation::none(), 30).unwrap();
        for n in [5, 17, 30] {
            let z = real_zeros(&p[n], DEFAULT_TOL_IMAG).unwrap();
            for (j, x) in z.iter().enumerate() {
                let t = (n - j) as f64 * std::f64::consts::PI / (n + 1) as f64;
                assert!((x - 1.0 / t.tan()).abs() < 1e-12, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn complex_pair_is_reported() {
        let p = Poly::new(vec![qi(1), qi(0), qi(1)]);
        match real_zeros(&p, DEFAULT_TOL_IMAG) {
            Err(Error::ComplexZeros { pairs }) => {
                assert_eq!(pairs.len(), 1);
                assert!((pairs[0].1 - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_and_constant_inputs() {
        assert_eq!(real_zeros(&Poly::new(vec![qi(3), qi(2)]), 1e-9).unwrap(), vec![-1.5]);
        assert!(real_zeros(&Poly::constant(qi(2)), 1e-9).is_err());
    }
}
