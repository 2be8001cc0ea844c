//! Polar tensor-product quadrature on the unit disk.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{PlateauError, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, t);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` via the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

/// Gauss-Legendre in the radius times the trapezoid rule in the angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { n_r: 64, n_theta: 256 }
    }
}

/// One node of a disk rule: the point `(r, theta)` and its area weight.
#[derive(Debug, Clone, Copy)]
pub struct DiskNode {
    pub r: f64,
    pub theta: f64,
    pub weight: f64,
}

impl Quadrature {
    pub fn validate(&self) -> Result<()> {
        if self.n_r < 2 {
            return Err(PlateauError::invalid(format!("quadrature n_r must be at least 2 (got {})", self.n_r)));
        }
        if self.n_theta < 4 {
            return Err(PlateauError::invalid(format!("quadrature n_theta must be at least 4 (got {})", self.n_theta)));
        }
        Ok(())
    }

    /// Nodes whose weights include the Jacobian `r`; they sum to `pi`.
    pub fn disk_nodes(&self) -> Result<Vec<DiskNode>> {
        self.validate()?;
        let (x, w) = gauss_legendre(self.n_r);
        let dtheta = TAU / self.n_theta as f64;
        let mut nodes = Vec::with_capacity(self.n_r * self.n_theta);
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * (xi + 1.0);
            let wr = 0.5 * wi * r * dtheta;
            for j in 0..self.n_theta {
                nodes.push(DiskNode { r, theta: dtheta * j as f64, weight: wr });
            }
        }
        Ok(nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(5);
        // exact through degree 9
        let i8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_rule_is_accurate() {
        let (x, w) = gauss_legendre(64);
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert!((i - (1f64.exp() - (-1f64).exp())).abs() < 1e-13);
    }

    #[test]
    fn disk_area() {
        let nodes = Quadrature::default().disk_nodes().unwrap();
        let a: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((a - PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_tiny_rules() {
        assert!(Quadrature { n_r: 1, n_theta: 16 }.validate().is_err());
        assert!(Quadrature { n_r: 4, n_theta: 3 }.validate().is_err());
    }
}
