//! Fundamental-solution basis on the unit disk.
//!
//! A harmonic function on the closed disk is approximated by
//! `u(z) = sum_k Q_k G(z - zeta_k)` with `G(z) = log|z| / (2 pi)` and sources
//! `zeta_k = R w^k` on a circle of radius `R > 1`. Collocating at the roots of
//! unity `z_j = w^j` gives the matrix `G_{jk} = G(z_j - zeta_k)`, which depends
//! only on `(k - j) mod N`: it is a real symmetric circulant, so it is
//! diagonalized by the discrete Fourier transform and the solve is exact up to
//! roundoff.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circulant::{self, Twiddles};
use crate::error::{PlateauError, Result};

/// Spectrum entries below this magnitude make the collocation system ill-posed.
pub const SPECTRUM_FLOOR: f64 = 1e-14;

/// Geometric and spectral data of one discretization.
#[derive(Debug, Clone)]
pub struct MfsBasis {
    n: usize,
    radius: f64,
    omega: Complex64,
    collocation: Vec<Complex64>,
    singular: Vec<Complex64>,
    spectrum: Vec<f64>,
    tw: Twiddles,
    // first row of G and of its inverse
    kernel: Vec<f64>,
    inverse_kernel: Vec<f64>,
}

/// Boundary data `f(z_j)` at the collocation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoundaryValues(pub Vec<f64>);

/// Source strengths `Q_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coefficients(pub Vec<f64>);

impl Coefficients {
    pub fn zeros(n: usize) -> Self {
        Coefficients(vec![0.0; n])
    }

    /// The `m`-th unit vector.
    pub fn unit(n: usize, m: usize) -> Self {
        let mut q = vec![0.0; n];
        q[m] = 1.0;
        Coefficients(q)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Fundamental solution of the Laplacian in the plane.
#[inline]
pub fn green(z: Complex64) -> f64 {
    z.norm().ln() / TAU
}

/// Wirtinger derivative of [`green`]: `G = log(z conj z) / (4 pi)` gives `dG/dz = 1 / (4 pi z)`.
#[inline]
pub fn green_dz(z: Complex64) -> Complex64 {
    (4.0 * PI * z).inv()
}

#[inline]
pub fn green_dzz(z: Complex64) -> Complex64 {
    -(4.0 * PI * z * z).inv()
}

/// Builds the basis with `n` collocation points on the unit circle and `n` sources on radius `radius`.
pub fn build_basis(n: usize, radius: f64) -> Result<MfsBasis> {
    if n < 4 {
        return Err(PlateauError::invalid(format!("n must be at least 4 (got {n})")));
    }
    if !(radius > 1.0) || !radius.is_finite() {
        return Err(PlateauError::invalid("radius must exceed 1"));
    }
    let tw = Twiddles::new(n);
    let (cos, sin) = (tw.cos_table(), tw.sin_table());
    let collocation: Vec<Complex64> = (0..n).map(|j| Complex64::new(cos[j], sin[j])).collect();
    let singular: Vec<Complex64> = collocation.iter().map(|z| z * radius).collect();

    // c_m = G(1 - R w^m), using |1 - R w^m|^2 = 1 + R^2 - 2R cos(2 pi m / N)
    let kernel: Vec<f64> = (0..n).map(|m| (1.0 + radius * radius - 2.0 * radius * cos[m]).ln() / (4.0 * PI)).collect();
    let spectrum = circulant::symmetric_spectrum(&tw, &kernel);
    let inverse_kernel = circulant::inverse_kernel(&tw, &spectrum);

    Ok(MfsBasis { n, radius, omega: collocation[1], collocation, singular, spectrum, tw, kernel, inverse_kernel })
}

impl MfsBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Primitive root `exp(2 pi i / N)`.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn collocation(&self) -> &[Complex64] {
        &self.collocation
    }

    pub fn singular(&self) -> &[Complex64] {
        &self.singular
    }

    /// Eigenvalues of the collocation matrix, indexed by Fourier mode `p = 0..N`.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// First row `G(z_0 - zeta_m)` of the collocation matrix.
    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// First row of the inverse matrix, `G^{-1}_{kj} = h[(k - j) mod N]`.
    ///
    /// Only meaningful when [`MfsBasis::check_well_posed`] succeeds.
    pub fn inverse_kernel(&self) -> &[f64] {
        &self.inverse_kernel
    }

    /// Closed form of the zeroth eigenvalue: `prod_k (1 - R w^k) = 1 - R^N`.
    pub fn spectrum_zero_closed_form(&self) -> f64 {
        (self.radius.powi(self.n as i32) - 1.0).ln() / TAU
    }

    /// Smallest eigenvalue magnitude.
    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.spectrum.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()))
    }

    pub fn check_well_posed(&self) -> Result<()> {
        for (index, lam) in self.spectrum.iter().enumerate() {
            if !(lam.abs() >= SPECTRUM_FLOOR) {
                return Err(PlateauError::IllPosedBasis { index, magnitude: lam.abs(), threshold: SPECTRUM_FLOOR });
            }
        }
        Ok(())
    }

    /// Dense collocation matrix, row-major.
    pub fn dense_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        (0..n).map(|j| (0..n).map(|k| self.kernel[(k + n - j) % n]).collect()).collect()
    }

    /// Dense inverse assembled from the spectral formula, row-major.
    pub fn dense_inverse(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        (0..n).map(|k| (0..n).map(|j| self.inverse_kernel[(k + n - j) % n]).collect()).collect()
    }

    /// Applies `G^{-1}` through the inverse kernel.
    pub fn apply_inverse(&self, f: &[f64]) -> Vec<f64> {
        let n = self.n;
        let h = &self.inverse_kernel;
        (0..n).map(|k| (0..n).map(|j| h[(k + n - j) % n] * f[j]).sum()).collect()
    }

    pub(crate) fn twiddles(&self) -> &Twiddles {
        &self.tw
    }
}

/// Solves the collocation system `G Q = f` by diagonalizing it.
///
/// The exact solution is real. The imaginary part left by the inverse transform
/// is checked against `1e-10 ||f||` plus the roundoff that division by the
/// smallest eigenvalue can amplify, then dropped.
pub fn solve_coefficients(basis: &MfsBasis, f: &BoundaryValues) -> Result<Coefficients> {
    let n = basis.n;
    if f.0.len() != n {
        return Err(PlateauError::invalid(format!("boundary data has {} values, basis has {n}", f.0.len())));
    }
    basis.check_well_posed()?;
    let tw = basis.twiddles();
    let (mut re, mut im) = circulant::forward(tw, &f.0);
    for p in 0..n {
        re[p] /= basis.spectrum[p];
        im[p] /= basis.spectrum[p];
    }
    let (q, residue) = circulant::inverse(tw, &re, &im);

    let fmax = f.0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let amplified = n as f64 * f64::EPSILON * fmax / basis.min_abs_eigenvalue();
    let tolerance = 1e-10 * fmax + amplified;
    let worst = residue.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(worst <= tolerance) {
        return Err(PlateauError::ImaginaryResidue { residue: worst, tolerance });
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(PlateauError::invalid("coefficients are not finite"));
    }
    Ok(Coefficients(q))
}

/// `sum_k Q_k G(z - zeta_k)`.
pub fn evaluate(basis: &MfsBasis, q: &Coefficients, z: Complex64) -> f64 {
    basis.singular.iter().zip(&q.0).map(|(zeta, qk)| qk * green(z - zeta)).sum()
}

/// Wirtinger derivative `du/dz`. Real partials follow from `d1 u = 2 Re`, `d2 u = -2 Im`.
pub fn evaluate_dz(basis: &MfsBasis, q: &Coefficients, z: Complex64) -> Complex64 {
    basis.singular.iter().zip(&q.0).map(|(zeta, qk)| green_dz(z - zeta) * *qk).sum()
}

/// Second Wirtinger derivative `d^2u/dz^2`.
///
/// With `4 d_zz = d_11 - d_22 - 2i d_12` and harmonicity `d_11 + d_22 = 0`:
/// `Re(4 d_zz u) = 2 d_11 u` and `Im(4 d_zz u) = -2 d_12 u`.
pub fn evaluate_dzz(basis: &MfsBasis, q: &Coefficients, z: Complex64) -> Complex64 {
    basis.singular.iter().zip(&q.0).map(|(zeta, qk)| green_dzz(z - zeta) * *qk).sum()
}

/// Real Hessian `(u_11, u_12, u_22)` recovered from `d^2u/dz^2`.
pub fn hessian_from_dzz(dzz: Complex64) -> (f64, f64, f64) {
    let u11 = 2.0 * dzz.re;
    (u11, -2.0 * dzz.im, -u11)
}

/// Real gradient `(u_1, u_2)` recovered from `du/dz`.
pub fn gradient_from_dz(dz: Complex64) -> (f64, f64) {
    (2.0 * dz.re, -2.0 * dz.im)
}
