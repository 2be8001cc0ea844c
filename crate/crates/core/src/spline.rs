//! Periodic splines: uniform B-spline interpolation of closed curves and a
//! monotone cubic Hermite map used to build random reparametrizations.

use std::f64::consts::TAU;

use crate::circulant;
use crate::error::{PlateauError, Result};

/// Cardinal B-spline of degree `d`, supported on `[0, d + 1)`.
pub fn cardinal(d: usize, x: f64) -> f64 {
    if d == 0 {
        return if (0.0..1.0).contains(&x) { 1.0 } else { 0.0 };
    }
    if x <= 0.0 || x >= (d + 1) as f64 {
        return 0.0;
    }
    let df = d as f64;
    (x * cardinal(d - 1, x) + (df + 1.0 - x) * cardinal(d - 1, x - 1.0)) / df
}

pub fn cardinal_deriv(d: usize, x: f64) -> f64 {
    if d == 0 {
        return 0.0;
    }
    cardinal(d - 1, x) - cardinal(d - 1, x - 1.0)
}

/// Closed uniform B-spline curve in R^3 interpolating its data points.
///
/// Data point `i` is reached at `theta = 2 pi i / M`. The data sites sit at the
/// centers of the basis functions, where the periodic collocation matrix is
/// symmetric and positive definite for every degree and every `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicBSpline {
    degree: usize,
    control: Vec<[f64; 3]>,
}

impl PeriodicBSpline {
    pub fn interpolate(points: &[[f64; 3]], degree: usize) -> Result<Self> {
        let m = points.len();
        if degree == 0 {
            return Err(PlateauError::invalid("B-spline degree must be at least 1"));
        }
        if m < degree + 1 {
            return Err(PlateauError::invalid(format!(
                "B-spline of degree {degree} needs at least {} points (got {m})",
                degree + 1
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(PlateauError::invalid("B-spline points must be finite"));
        }
        let spread = points.iter().map(|p| dist(p, &points[0])).fold(0.0f64, f64::max);
        if spread < 1e-12 {
            return Err(PlateauError::invalid("degenerate curve: all points coincide"));
        }

        // C_{ik} = B_d(i + (d+1)/2 - k), wrapped periodically
        let center = (degree + 1) as f64 / 2.0;
        let mut kernel = vec![0.0; m];
        for off in -(degree as i64 + 1)..=(degree as i64 + 1) {
            let v = cardinal(degree, center + off as f64);
            kernel[(-off).rem_euclid(m as i64) as usize] += v;
        }
        let mut control = vec![[0.0; 3]; m];
        for axis in 0..3 {
            let rhs: Vec<f64> = points.iter().map(|p| p[axis]).collect();
            let x = circulant::solve_symmetric(&kernel, &rhs)
                .ok_or_else(|| PlateauError::invalid("singular B-spline interpolation system"))?;
            for (c, v) in control.iter_mut().zip(x) {
                c[axis] = v;
            }
        }
        Ok(PeriodicBSpline { degree, control })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn control_points(&self) -> &[[f64; 3]] {
        &self.control
    }

    fn knot_param(&self, theta: f64) -> f64 {
        let m = self.control.len() as f64;
        theta.rem_euclid(TAU) / TAU * m + (self.degree + 1) as f64 / 2.0
    }

    fn combine(&self, u: f64, basis: impl Fn(f64) -> f64) -> [f64; 3] {
        let m = self.control.len() as i64;
        let base = u.floor() as i64;
        let mut out = [0.0; 3];
        for k in base - self.degree as i64..=base {
            let w = basis(u - k as f64);
            let p = &self.control[k.rem_euclid(m) as usize];
            for a in 0..3 {
                out[a] += w * p[a];
            }
        }
        out
    }

    pub fn eval(&self, theta: f64) -> [f64; 3] {
        let u = self.knot_param(theta);
        self.combine(u, |x| cardinal(self.degree, x))
    }

    pub fn deriv(&self, theta: f64) -> [f64; 3] {
        let u = self.knot_param(theta);
        let scale = self.control.len() as f64 / TAU;
        let d = self.combine(u, |x| cardinal_deriv(self.degree, x));
        [d[0] * scale, d[1] * scale, d[2] * scale]
    }
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Periodic monotone cubic Hermite map from knot index to angle.
///
/// `knots` are sorted angles in `[0, 2 pi)`; the map is extended by
/// `a_{k+K} = a_k + 2 pi` and uses harmonic-mean slopes, which keep every
/// piece nondecreasing. Returns the map sampled at `n` equispaced parameters.
pub fn monotone_periodic_samples(knots: &[f64], n: usize) -> Vec<f64> {
    let k = knots.len();
    let value = |i: i64| -> f64 {
        let wraps = i.div_euclid(k as i64);
        knots[i.rem_euclid(k as i64) as usize] + TAU * wraps as f64
    };
    let secant = |i: i64| value(i + 1) - value(i);
    let slope = |i: i64| {
        let (a, b) = (secant(i - 1), secant(i));
        if a > 0.0 && b > 0.0 {
            2.0 * a * b / (a + b)
        } else {
            0.0
        }
    };
    (0..n)
        .map(|j| {
            let t = j as f64 * k as f64 / n as f64;
            let i = (t.floor() as i64).min(k as i64 - 1);
            let s = t - i as f64;
            let (y0, y1) = (value(i), value(i + 1));
            let (m0, m1) = (slope(i), slope(i + 1));
            let s2 = s * s;
            let s3 = s2 * s;
            (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1
        })
        .collect()
}
