//! Scalar types: exact rationals, Gaussian rationals and their float shadows.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type GaussQ = Complex<BigRational>;

/// Ring element that the recurrence machinery can compute with.
pub trait Value:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds a Gaussian rational, or `None` when it is not representable.
    fn from_gauss(g: &GaussQ) -> Option<Self>;

    fn from_q(q: &Q) -> Self {
        Self::from_gauss(&GaussQ::new(q.clone(), Q::zero())).expect("rationals embed in every value type")
    }

    fn from_int(n: i64) -> Self {
        Self::from_q(&Q::from_integer(BigInt::from(n)))
    }
}

/// A field of scalars: a `Value` with division and a complex float view.
pub trait Scalar: Value + Div<Output = Self> {
    fn to_c64(&self) -> Complex64;
}

impl Value for Q {
    fn from_gauss(g: &GaussQ) -> Option<Self> {
        g.im.is_zero().then(|| g.re.clone())
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
}

impl Scalar for Q {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
}

impl Value for GaussQ {
    fn from_gauss(g: &GaussQ) -> Option<Self> {
        Some(g.clone())
    }
}

impl Scalar for GaussQ {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
}

impl Value for f64 {
    fn from_gauss(g: &GaussQ) -> Option<Self> {
        g.im.is_zero().then(|| q_to_f64(&g.re))
    }
}

impl Scalar for f64 {
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Value for Complex64 {
    fn from_gauss(g: &GaussQ) -> Option<Self> {
        Some(Complex64::new(q_to_f64(&g.re), q_to_f64(&g.im)))
    }
}

impl Scalar for Complex64 {
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn gauss(re: Q, im: Q) -> GaussQ {
    GaussQ::new(re, im)
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite float.
pub fn f64_to_q(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Input(format!("{x} is not finite")))
}

/// Parses `p/q`, integers, decimals and exponent forms (`0.01`, `1e-3`, `-2.5E2`) exactly.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::Input(format!("cannot parse rational from {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Input(format!("zero denominator in {text:?}")));
        }
        return Ok(Q::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Q::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    if exponent.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = Q::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p/q`, or `p` for integers.
pub fn format_q(x: &Q) -> String {
    x.to_string()
}

/// Best rational approximation with denominator at most `max_den`, via continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::Input(format!("{x} is not finite")));
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return Err(Error::Input(format!("cannot rationalize {x}")));
    }
    Ok(Q::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod qstr {
    use super::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms() {
        assert_eq!(parse_q("1/10").unwrap(), q(1, 10));
        assert_eq!(parse_q("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_q("-0.01").unwrap(), q(-1, 100));
        assert_eq!(parse_q("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_q("2.5E2").unwrap(), qi(250));
        assert_eq!(parse_q("1.004").unwrap(), q(251, 250));
        assert_eq!(parse_q(".5").unwrap(), q(1, 2));
        assert_eq!(parse_q("-3/6").unwrap(), q(-1, 2));
    }

    #[test]
    fn rejects_malformed_rationals() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e", "e5", "."] {
            assert!(parse_q(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_round_trips() {
        for x in [q(3, 4), qi(-7), q(-1, 100)] {
            assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.5000000000001, 1000).unwrap(), q(1, 2));
        assert_eq!(rationalize(-0.75, 1000).unwrap(), q(-3, 4));
        assert_eq!(rationalize(1.0 / 3.0, 1000).unwrap(), q(1, 3));
    }

    #[test]
    fn float_embedding_is_exact() {
        let x = 0.1f64;
        let r = f64_to_q(x).unwrap();
        assert_eq!(q_to_f64(&r), x);
        assert_ne!(r, q(1, 10));
    }

    #[test]
    fn gaussian_values_only_embed_in_real_types_when_real() {
        let g = gauss(q(1, 2), qi(1));
        assert!(Q::from_gauss(&g).is_none());
        assert!(f64::from_gauss(&g).is_none());
        assert_eq!(GaussQ::from_gauss(&g), Some(g.clone()));
        assert_eq!(Complex64::from_gauss(&g), Some(Complex64::new(0.5, 1.0)));
    }
}
