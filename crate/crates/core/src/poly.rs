use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{GaussQ, Value};

/// Dense univariate polynomial, coefficients in ascending degree with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Value> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![S::zero(), S::one()])
    }

    pub fn monomial(degree: usize, c: S) -> Self {
        let mut coeffs = vec![S::zero(); degree];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &S) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc * self.clone())
    }

    pub fn map<T: Value>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Value> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<S: Value> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<S: Value> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<S: Value> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<S: Value> Zero for Poly<S> {
    fn zero() -> Self {
        Poly::new(Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Value> One for Poly<S> {
    fn one() -> Self {
        Poly::constant(S::one())
    }
}

impl<S: Value> Value for Poly<S> {
    fn from_gauss(g: &GaussQ) -> Option<Self> {
        S::from_gauss(g).map(Poly::constant)
    }
}

impl<S: Value + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let simple_negative = text.starts_with('-') && !text[1..].contains(['+', '-']);
            let (sign, body) = if simple_negative {
                ("-", text[1..].to_string())
            } else if text[1..].contains(['+', '-']) {
                ("+", format!("({text})"))
            } else {
                ("+", text)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = body == "1";
            match (i, unit) {
                (0, _) => write!(f, "{body}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{body}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{body}*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn p(cs: &[(i64, i64)]) -> Poly<Q> {
        Poly::new(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn strips_trailing_zeros() {
        let a = Poly::new(vec![qi(1), qi(0), qi(0)]);
        assert_eq!(a.degree(), Some(0));
        assert_eq!(Poly::<Q>::new(vec![qi(0)]).degree(), None);
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let a = p(&[(-1, 4), (0, 1), (3, 4)]);
        let b = Poly::<Q>::x() - Poly::constant(qi(1));
        let prod = a.clone() * b.clone();
        assert_eq!(prod.degree(), Some(3));
        let z = q(2, 3);
        assert_eq!(prod.eval(&z), a.eval(&z) * b.eval(&z));
        assert_eq!((a.clone() - a.clone()).degree(), None);
        assert_eq!(a.derivative(), p(&[(0, 1), (3, 2)]));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[(-1, 4), (0, 1), (3, 4)]).to_string(), "3/4*x^2 - 1/4");
        assert_eq!(Poly::<Q>::x().to_string(), "x");
        assert_eq!(Poly::<Q>::zero().to_string(), "0");
    }
}
