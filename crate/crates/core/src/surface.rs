//! Approximate surfaces `X: closed disk -> R^3` built from a boundary curve and
//! a configuration of boundary parameters, with their differential geometry.
//!
//! Conventions: `d = (d_1 - i d_2) / 2` is the Wirtinger derivative, so for a
//! real function `d_1 u = 2 Re du` and `d_2 u = -2 Im du`. The complex
//! dilatation `Phi = sum_i (d X_i)^2` vanishes exactly where `X` is conformal.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::{BoundaryCurve, CurveSpec};
use crate::error::{PlateauError, Result};
use crate::mfs::{self, BoundaryValues, Coefficients, MfsBasis};
use crate::quadrature::Quadrature;

/// Minimum `|X_1 x X_2|` for a usable tangent plane.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Boundary parameters `phi_j`, reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    angles: Vec<f64>,
    monotone: bool,
}

impl Configuration {
    /// Reduces `angles` mod `2 pi` and records whether their cyclic order is strictly increasing.
    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(PlateauError::invalid("configuration must not be empty"));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(PlateauError::invalid("configuration angles must be finite"));
        }
        let reduced: Vec<f64> = angles.iter().map(|&a| reduce_angle(a)).collect();
        let monotone = cyclically_increasing(&reduced);
        Ok(Configuration { angles: reduced, monotone })
    }

    /// `phi_j = 2 pi j / n`: the identity map of the circle.
    pub fn equidistant(n: usize) -> Self {
        let angles: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        Configuration { monotone: n > 0, angles }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Whether the boundary map is an orientation-preserving homeomorphism surrogate.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }
}

pub fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid rounds tiny negatives up to exactly TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Exactly one cyclic descent means the sequence winds once, strictly increasing.
fn cyclically_increasing(a: &[f64]) -> bool {
    let n = a.len();
    if n < 2 {
        return n == 1;
    }
    let descents = (0..n).filter(|&j| a[(j + 1) % n] <= a[j]).count();
    descents == 1
}

/// First and second fundamental forms at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    pub normal: [f64; 3],
    pub det_g: f64,
}

impl FundamentalForms {
    /// `(g11 h22 + g22 h11 - 2 g12 h12) / (2 det g)`.
    pub fn mean_curvature(&self) -> f64 {
        (self.g11 * self.h22 + self.g22 * self.h11 - 2.0 * self.g12 * self.h12) / (2.0 * self.det_g)
    }
}

/// Harmonic extension of one boundary reparametrization.
#[derive(Debug, Clone)]
pub struct ApproximateSurface {
    basis: Arc<MfsBasis>,
    q: [Coefficients; 3],
    curve: CurveSpec,
    config: Configuration,
}

/// Solves for the three coordinate coefficient vectors from `b(phi_j)`.
pub fn build_surface(
    basis: &Arc<MfsBasis>,
    curve: &BoundaryCurve,
    config: &Configuration,
) -> Result<ApproximateSurface> {
    if !config.is_monotone() {
        log::warn!("building a surface from a non-monotone configuration");
    }
    build_from_angles(basis, curve, config.angles(), config.clone())
}

/// Same as [`build_surface`] for unreduced angles; `b` is periodic so the result agrees.
pub(crate) fn build_from_angles(
    basis: &Arc<MfsBasis>,
    curve: &BoundaryCurve,
    angles: &[f64],
    config: Configuration,
) -> Result<ApproximateSurface> {
    let n = basis.n();
    if angles.len() != n {
        return Err(PlateauError::invalid(format!("configuration has {} angles, basis has {n}", angles.len())));
    }
    let pts: Vec<[f64; 3]> = angles.iter().map(|&t| curve.eval(t)).collect();
    let solve = |axis: usize| mfs::solve_coefficients(basis, &BoundaryValues(pts.iter().map(|p| p[axis]).collect()));
    Ok(ApproximateSurface {
        basis: Arc::clone(basis),
        q: [solve(0)?, solve(1)?, solve(2)?],
        curve: curve.spec().clone(),
        config,
    })
}

impl ApproximateSurface {
    /// Wraps precomputed coefficients.
    pub fn from_coefficients(
        basis: Arc<MfsBasis>,
        q: [Coefficients; 3],
        curve: CurveSpec,
        config: Configuration,
    ) -> Result<Self> {
        if q.iter().any(|c| c.0.len() != basis.n()) {
            return Err(PlateauError::invalid("coefficient length does not match basis"));
        }
        Ok(ApproximateSurface { basis, q, curve, config })
    }

    pub fn basis(&self) -> &Arc<MfsBasis> {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Coefficients; 3] {
        &self.q
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn evaluate(&self, z: Complex64) -> [f64; 3] {
        self.q.each_ref().map(|q| mfs::evaluate(&self.basis, q, z))
    }

    pub fn dz(&self, z: Complex64) -> [Complex64; 3] {
        self.q.each_ref().map(|q| mfs::evaluate_dz(&self.basis, q, z))
    }

    pub fn dzz(&self, z: Complex64) -> [Complex64; 3] {
        self.q.each_ref().map(|q| mfs::evaluate_dzz(&self.basis, q, z))
    }

    /// Real partial derivatives `(X_1, X_2)` at `z`.
    pub fn tangents(&self, z: Complex64) -> ([f64; 3], [f64; 3]) {
        let d = self.dz(z);
        (d.map(|w| 2.0 * w.re), d.map(|w| -2.0 * w.im))
    }

    /// Complex dilatation `sum_i (d X_i)^2`.
    pub fn dilatation(&self, z: Complex64) -> Complex64 {
        self.dz(z).iter().map(|w| w * w).sum()
    }

    /// Maximum of `|Phi|` over `m_samples` equispaced points of the circle `|z| = rho`.
    pub fn dilatation_sup(&self, rho: f64, m_samples: usize) -> Result<f64> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(PlateauError::invalid(format!("rho must lie in (0, 1] (got {rho})")));
        }
        if m_samples == 0 {
            return Err(PlateauError::invalid("need at least one sample"));
        }
        Ok((0..m_samples)
            .map(|j| self.dilatation(Complex64::from_polar(rho, TAU * j as f64 / m_samples as f64)).norm())
            .fold(0.0, f64::max))
    }

    /// Sampled maximum of `|Phi|` over the closed disk `|z| <= radius` on a polar grid.
    pub fn dilatation_max_on_disk(&self, radius: f64, rings: usize, spokes: usize) -> f64 {
        polar_grid(rings, spokes, radius)
            .into_iter()
            .map(|(r, t)| self.dilatation(Complex64::from_polar(r, t)).norm())
            .fold(0.0, f64::max)
    }

    /// `D(X) = 1/2 int (|X_1|^2 + |X_2|^2) = int 2 sum_i |d X_i|^2` over the unit disk.
    pub fn dirichlet_energy(&self, quad: &Quadrature) -> Result<f64> {
        let nodes = quad.disk_nodes()?;
        Ok(nodes
            .iter()
            .map(|nd| {
                let d = self.dz(Complex64::from_polar(nd.r, nd.theta));
                nd.weight * 2.0 * d.iter().map(|w| w.norm_sqr()).sum::<f64>()
            })
            .sum())
    }

    /// Fundamental forms at `z`, for `|z| <= 1`.
    pub fn fundamental_forms(&self, z: Complex64) -> Result<FundamentalForms> {
        if !(z.norm() <= 1.0) {
            return Err(PlateauError::invalid(format!("point {z} lies outside the closed unit disk")));
        }
        let (x1, x2) = self.tangents(z);
        let n = cross(&x1, &x2);
        let len = norm(&n);
        if !(len >= DEGENERACY_TOLERANCE) {
            return Err(PlateauError::DegenerateTangentPlane { re: z.re, im: z.im, cross: len });
        }
        let e = n.map(|v| v / len);
        let dzz = self.dzz(z);
        let mut x11 = [0.0; 3];
        let mut x12 = [0.0; 3];
        for i in 0..3 {
            let (a, b, _) = mfs::hessian_from_dzz(dzz[i]);
            x11[i] = a;
            x12[i] = b;
        }
        let x22 = x11.map(|v| -v);
        let (g11, g12, g22) = (dot(&x1, &x1), dot(&x1, &x2), dot(&x2, &x2));
        Ok(FundamentalForms {
            g11,
            g12,
            g22,
            h11: dot(&x11, &e),
            h12: dot(&x12, &e),
            h22: dot(&x22, &e),
            normal: e,
            det_g: g11 * g22 - g12 * g12,
        })
    }

    pub fn mean_curvature(&self, z: Complex64) -> Result<f64> {
        Ok(self.fundamental_forms(z)?.mean_curvature())
    }

    /// Sampled maximum of `|H|` over `|z| <= radius`, and the number of degenerate samples skipped.
    pub fn mean_curvature_max_on_disk(&self, radius: f64, rings: usize, spokes: usize) -> (f64, usize) {
        let mut worst: f64 = 0.0;
        let mut degenerate = 0;
        for (r, t) in polar_grid(rings, spokes, radius) {
            match self.mean_curvature(Complex64::from_polar(r, t)) {
                Ok(h) if h.is_finite() => worst = worst.max(h.abs()),
                _ => degenerate += 1,
            }
        }
        (worst, degenerate)
    }

    /// Polar tensor mesh of the closed disk with per-vertex `|Phi|` and `H`.
    pub fn sample_mesh(&self, n_r: usize, n_theta: usize) -> Result<Mesh> {
        if n_r == 0 || n_theta < 3 {
            return Err(PlateauError::invalid(format!("mesh needs n_r >= 1 and n_theta >= 3 (got {n_r}, {n_theta})")));
        }
        let params = polar_grid(n_r, n_theta, 1.0);
        let mut vertices = Vec::with_capacity(params.len());
        let mut dilatation = Vec::with_capacity(params.len());
        let mut curvature = Vec::with_capacity(params.len());
        for &(r, t) in &params {
            let z = Complex64::from_polar(r, t);
            vertices.push(self.evaluate(z));
            dilatation.push(self.dilatation(z).norm());
            curvature.push(self.mean_curvature(z).unwrap_or(f64::NAN));
        }
        let ring = |i: usize, j: usize| 1 + (i - 1) * n_theta + j % n_theta;
        let mut faces = Vec::with_capacity(n_r * n_theta);
        for j in 0..n_theta {
            faces.push(vec![0, ring(1, j), ring(1, j + 1)]);
        }
        for i in 1..n_r {
            for j in 0..n_theta {
                faces.push(vec![ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), ring(i, j + 1)]);
            }
        }
        Ok(Mesh { params, vertices, faces, dilatation, curvature })
    }
}

/// Polar grid `(r, theta)`: the center, then `rings` circles of radius `radius * i / rings`.
pub fn polar_grid(rings: usize, spokes: usize, radius: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(rings * spokes + 1);
    pts.push((0.0, 0.0));
    for i in 1..=rings {
        let r = radius * i as f64 / rings as f64;
        for j in 0..spokes {
            pts.push((r, TAU * j as f64 / spokes as f64));
        }
    }
    pts
}

/// Surface mesh over the polar grid of the parameter disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    /// Parameter coordinates `(r, theta)` of each vertex.
    pub params: Vec<(f64, f64)>,
    pub vertices: Vec<[f64; 3]>,
    /// Triangles around the center, quads elsewhere; zero-based vertex indices.
    pub faces: Vec<Vec<usize>>,
    /// `|Phi|` per vertex.
    pub dilatation: Vec<f64>,
    /// Mean curvature per vertex, `NaN` where the tangent plane degenerates.
    pub curvature: Vec<f64>,
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}
