use std::fmt;
use std::ops::{Mul, Sub};

use serde::Serialize;

use crate::poly::Poly;
use crate::scalar::Value;

/// 2x2 matrix over a ring, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mat2<T> {
    pub a11: T,
    pub a12: T,
    pub a21: T,
    pub a22: T,
}

pub type PolyMatrix2<S> = Mat2<Poly<S>>;

impl<T: Value> Mat2<T> {
    pub fn new(a11: T, a12: T, a21: T, a22: T) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn identity() -> Self {
        Mat2::diagonal(T::one())
    }

    pub fn diagonal(d: T) -> Self {
        Mat2::new(d.clone(), T::zero(), T::zero(), d)
    }

    pub fn zero() -> Self {
        Mat2::diagonal(T::zero())
    }

    pub fn det(&self) -> T {
        self.a11.clone() * self.a22.clone() - self.a12.clone() * self.a21.clone()
    }

    /// Matrix of signed cofactors, `[[a22, -a21], [-a12, a11]]`.
    pub fn cof(&self) -> Self {
        Mat2::new(
            self.a22.clone(),
            -self.a21.clone(),
            -self.a12.clone(),
            self.a11.clone(),
        )
    }

    /// Adjugate (transposed cofactor matrix), `[[a22, -a12], [-a21, a11]]`.
    pub fn adj(&self) -> Self {
        self.cof().transpose()
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.a11.clone(),
            self.a21.clone(),
            self.a12.clone(),
            self.a22.clone(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.clone() * s.clone())
    }

    pub fn map<U: Value>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(f(&self.a11), f(&self.a12), f(&self.a21), f(&self.a22))
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|e| e.is_zero())
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a11, &self.a12, &self.a21, &self.a22]
    }
}

impl<T: Value> Mul for Mat2<T> {
    type Output = Mat2<T>;
    fn mul(self, r: Self) -> Self {
        Mat2::new(
            self.a11.clone() * r.a11.clone() + self.a12.clone() * r.a21.clone(),
            self.a11.clone() * r.a12.clone() + self.a12.clone() * r.a22.clone(),
            self.a21.clone() * r.a11 + self.a22.clone() * r.a21,
            self.a21 * r.a12 + self.a22 * r.a22,
        )
    }
}

impl<T: Value> Sub for Mat2<T> {
    type Output = Mat2<T>;
    fn sub(self, r: Self) -> Self {
        Mat2::new(
            self.a11 - r.a11,
            self.a12 - r.a12,
            self.a21 - r.a21,
            self.a22 - r.a22,
        )
    }
}

impl<S: Value> Mat2<Poly<S>> {
    pub fn eval(&self, z: &S) -> Mat2<S> {
        self.map(|p| p.eval(z))
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[ {} , {} ]", self.a11, self.a12)?;
        write!(f, "[ {} , {} ]", self.a21, self.a22)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Q};

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2<Q> {
        Mat2::new(qi(a), qi(b), qi(c), qi(d))
    }

    #[test]
    fn cofactor_and_adjugate_laws() {
        let s = Mat2::new(q(2, 3), qi(5), q(-1, 7), qi(4));
        let det = s.det();
        assert_eq!(s.adj() * s.clone(), Mat2::diagonal(det.clone()));
        assert_eq!(s.cof() * s.transpose(), Mat2::diagonal(det));
    }

    #[test]
    fn product_is_associative() {
        let (a, b, c) = (m(1, 2, 3, 4), m(0, -1, 5, 2), m(7, 1, -2, 3));
        assert_eq!((a.clone() * b.clone()) * c.clone(), a * (b * c));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let (a, b) = (m(1, 2, 3, 4), m(0, -1, 5, 2));
        assert_eq!((a.clone() * b.clone()).det(), a.det() * b.det());
    }
}
