//! Density approximations through quadrature nodes and weights.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{f64_to_q, q_to_f64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Lagrange,
    NaturalCubicSpline,
}

/// Cubic `a + b t + c t^2 + d t^3` with `t = x - x_i` on `[x_i, x_{i+1}]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Segment {
    fn eval(&self, t: f64) -> f64 {
        self.a + t * (self.b + t * (self.c + t * self.d))
    }

    fn second_derivative(&self, t: f64) -> f64 {
        2.0 * self.c + 6.0 * self.d * t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    /// Exact interpolant of the float data, and its coefficients rounded to floats.
    Lagrange { exact: Poly<Q>, coeffs: Vec<f64> },
    Spline { segments: Vec<Segment> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityApprox {
    pub kind: DensityKind,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub representation: Representation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFlag {
    Inside,
    /// Outside the node range, polynomial continued.
    Extrapolated,
    /// Outside the node range, boundary cubic continued.
    Clamped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub x: f64,
    pub density: f64,
    pub flag: SampleFlag,
}

fn sorted_pairs(nodes: &[f64], values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes.len() != values.len() || nodes.is_empty() {
        return Err(Error::Input("nodes and values must be nonempty and of equal length".into()));
    }
    if nodes.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::Input("nodes and values must be finite".into()));
    }
    let mut pairs: Vec<(f64, f64)> = nodes.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Input("nodes must be distinct".into()));
    }
    Ok(pairs.into_iter().unzip())
}

/// Degree `n - 1` interpolant through `(x_j, w_j)`, built in exact arithmetic from Newton's form.
pub fn lagrange_density(nodes: &[f64], weights: &[f64]) -> Result<DensityApprox> {
    let (xs, ys) = sorted_pairs(nodes, weights)?;
    let xq = xs.iter().map(|x| f64_to_q(*x)).collect::<Result<Vec<Q>>>()?;
    let mut dd = ys.iter().map(|y| f64_to_q(*y)).collect::<Result<Vec<Q>>>()?;
    let n = xs.len();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xq[i] - &xq[i - level]);
        }
    }
    let mut p = Poly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p * (Poly::x() - Poly::constant(xq[i].clone())) + Poly::constant(dd[i].clone());
    }
    let coeffs = (0..n).map(|i| q_to_f64(&p.coeff(i))).collect();
    Ok(DensityApprox {
        kind: DensityKind::Lagrange,
        nodes: xs,
        values: ys,
        representation: Representation::Lagrange { exact: p, coeffs },
    })
}

/// Natural cubic spline, zero second derivative at both ends.
pub fn spline_density(nodes: &[f64], weights: &[f64]) -> Result<DensityApprox> {
    let (xs, ys) = sorted_pairs(nodes, weights)?;
    let n = xs.len();
    if n < 3 {
        return Err(Error::Input("a cubic spline needs at least 3 nodes".into()));
    }
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    // Thomas algorithm for the interior second derivatives m_1..m_{n-2}.
    let interior = n - 2;
    let mut diag: Vec<f64> = (0..interior).map(|i| 2.0 * (h[i] + h[i + 1])).collect();
    let mut rhs: Vec<f64> = (0..interior).map(|i| 6.0 * (slope[i + 1] - slope[i])).collect();
    for i in 1..interior {
        let f = h[i] / diag[i - 1];
        diag[i] -= f * h[i];
        rhs[i] -= f * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    for i in (0..interior).rev() {
        let upper = if i + 1 < interior { h[i + 1] * m[i + 2] } else { 0.0 };
        m[i + 1] = (rhs[i] - upper) / diag[i];
    }
    let segments = (0..n - 1)
        .map(|i| Segment {
            a: ys[i],
            b: slope[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0,
            c: m[i] / 2.0,
            d: (m[i + 1] - m[i]) / (6.0 * h[i]),
        })
        .collect();
    Ok(DensityApprox {
        kind: DensityKind::NaturalCubicSpline,
        nodes: xs,
        values: ys,
        representation: Representation::Spline { segments },
    })
}

impl DensityApprox {
    fn segment_index(&self, x: f64) -> usize {
        let last = self.nodes.len() - 2;
        match self.nodes.partition_point(|n| *n <= x) {
            0 => 0,
            i => (i - 1).min(last),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.representation {
            Representation::Lagrange { coeffs, .. } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Representation::Spline { segments } => {
                let i = self.segment_index(x);
                segments[i].eval(x - self.nodes[i])
            }
        }
    }

    /// Second derivative of the spline piece `i` at `x` (one-sided at knots).
    pub fn spline_second_derivative(&self, segment: usize, x: f64) -> Option<f64> {
        match &self.representation {
            Representation::Spline { segments } => segments.get(segment).map(|s| s.second_derivative(x - self.nodes[segment])),
            Representation::Lagrange { .. } => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.representation {
            Representation::Lagrange { exact, .. } => Some(exact.degree().unwrap_or(0)),
            Representation::Spline { .. } => None,
        }
    }

    /// Largest `|interpolant(x_j) - value_j|`.
    pub fn knot_error(&self) -> f64 {
        self.nodes.iter().zip(&self.values).map(|(x, v)| (self.eval(*x) - v).abs()).fold(0.0, f64::max)
    }

    fn flag(&self, x: f64) -> SampleFlag {
        let (lo, hi) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if (lo..=hi).contains(&x) {
            SampleFlag::Inside
        } else if self.kind == DensityKind::Lagrange {
            SampleFlag::Extrapolated
        } else {
            SampleFlag::Clamped
        }
    }
}

/// `count` uniform samples on `[x_min, x_max]`, endpoints included.
pub fn sample_density(approx: &DensityApprox, x_min: f64, x_max: f64, count: usize) -> Result<Vec<Sample>> {
    if count < 2 {
        return Err(Error::Input("sampling needs count >= 2".into()));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_min > x_max {
        return Err(Error::Input("sampling range must be finite with x_min <= x_max".into()));
    }
    let step = (x_max - x_min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let x = if i == count - 1 { x_max } else { x_min + step * i as f64 };
            Sample {
                x,
                density: approx.eval(x),
                flag: approx.flag(x),
            }
        })
        .collect())
}

/// Largest `|lagrange - spline|` over `samples` points spread across the node range.
pub fn max_difference(a: &DensityApprox, b: &DensityApprox, samples: usize) -> f64 {
    let (lo, hi) = (a.nodes[0], a.nodes[a.nodes.len() - 1]);
    let count = samples.max(2);
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .map(|x| (a.eval(x) - b.eval(x)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_data_gives_constant() {
        let d = lagrange_density(&[0.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(d.degree(), Some(0));
        assert_eq!(d.eval(7.0), 1.0);
    }

    #[test]
    fn duplicates_are_rejected() {
        assert!(lagrange_density(&[1.0, 1.0], &[0.0, 2.0]).is_err());
        assert!(spline_density(&[0.0, 1.0], &[0.0, 2.0]).is_err());
    }

    #[test]
    fn collinear_spline_is_linear() {
        let d = spline_density(&[0.0, 1.0, 3.0, 4.0], &[1.0, 3.0, 7.0, 9.0]).unwrap();
        let Representation::Spline { segments } = &d.representation else { panic!() };
        assert!(segments.iter().all(|s| s.c.abs() < 1e-14 && s.d.abs() < 1e-14));
        assert!((d.eval(2.0) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn spline_is_twice_continuous() {
        let xs = [-2.0, -0.5, 0.3, 1.0, 2.5];
        let ys = [0.1, 0.4, 0.2, 0.5, 0.3];
        let d = spline_density(&xs, &ys).unwrap();
        for i in 1..xs.len() - 1 {
            let left = d.spline_second_derivative(i - 1, xs[i]).unwrap();
            let right = d.spline_second_derivative(i, xs[i]).unwrap();
            assert!((left - right).abs() < 1e-10);
        }
        assert!(d.spline_second_derivative(0, xs[0]).unwrap().abs() < 1e-14);
        assert!(d.knot_error() < 1e-14);
    }

    #[test]
    fn sampling_flags_and_endpoints() {
        let d = lagrange_density(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).unwrap();
        let s = sample_density(&d, -1.0, 3.0, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].x, s[1].x), (-1.0, 3.0));
        assert_eq!(s[0].flag, SampleFlag::Extrapolated);
        assert!((s[1].density - 9.0).abs() < 1e-12);
        let sp = spline_density(&[0.0, 1.0, 2.0], &[0.0, 1.0, 4.0]).unwrap();
        assert_eq!(sample_density(&sp, -1.0, 1.0, 3).unwrap()[0].flag, SampleFlag::Clamped);
    }

    #[test]
    fn permutation_invariance() {
        let a = lagrange_density(&[0.0, 2.0, 1.0], &[1.0, 5.0, 2.0]).unwrap();
        let b = lagrange_density(&[1.0, 0.0, 2.0], &[2.0, 1.0, 5.0]).unwrap();
        assert_eq!(a.representation, b.representation);
    }
}
