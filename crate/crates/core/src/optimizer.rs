//! Minimization of the discrete dilatation energy
//! `E(phi) = sum_l |Phi(rho z_l; phi)|^2` by Nesterov's accelerated gradient.
//!
//! The surface depends on `phi` only through `Q_i = G^{-1} b_i(phi)`, so
//! `dE/dphi_j = 4 sum_i b_i'(phi_j) Re( sum_l conj(Phi_l) dX_i(w_l) A_lj )`
//! with `w_l = rho z_l` and `A = D G^{-1}`, `D_lk = dG(w_l - zeta_k)`.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{BoundaryCurve, CurveSpec};
use crate::error::{PlateauError, Result};
use crate::mfs::{green_dz, MfsBasis};
use crate::quadrature::Quadrature;
use crate::surface::{build_surface, norm, ApproximateSurface, Configuration};

/// Step size and stopping rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSettings {
    pub eta: f64,
    pub max_iters: usize,
    /// Radius of the circle where the dilatation is sampled.
    pub rho: f64,
    /// Stop once `max_j |dE/dphi_j|` is at or below this value.
    pub grad_tolerance: f64,
    pub energy_log_stride: usize,
    /// Halve `eta` and restart momentum whenever a step blows up the energy.
    pub halve_on_divergence: bool,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            eta: 1e-2,
            max_iters: 10_000,
            rho: 0.87,
            grad_tolerance: 0.0,
            energy_log_stride: 100,
            halve_on_divergence: false,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(PlateauError::invalid(format!("eta must lie in (0, 1) (got {})", self.eta)));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(PlateauError::invalid(format!("rho must lie in (0, 1) (got {})", self.rho)));
        }
        if !(self.grad_tolerance >= 0.0) {
            return Err(PlateauError::invalid("grad_tolerance must be nonnegative"));
        }
        if self.energy_log_stride == 0 {
            return Err(PlateauError::invalid("energy_log_stride must be positive"));
        }
        Ok(())
    }
}

/// What to measure on the final surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticSettings {
    /// Radius of the interior disk where `sup |Phi|` and `sup |H|` are sampled.
    pub interior_radius: f64,
    pub grid_rings: usize,
    pub grid_spokes: usize,
    /// Samples on the circle `|z| = rho`.
    pub circle_samples: usize,
    pub quadrature: Quadrature,
    /// Attach a rigid-motion invariant shape fingerprint to each report.
    pub fingerprint: bool,
}

impl Default for DiagnosticSettings {
    fn default() -> Self {
        DiagnosticSettings {
            interior_radius: 0.5,
            grid_rings: 20,
            grid_spokes: 64,
            circle_samples: 256,
            quadrature: Quadrature::default(),
            fingerprint: false,
        }
    }
}

impl DiagnosticSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.interior_radius > 0.0 && self.interior_radius <= 1.0) {
            return Err(PlateauError::invalid("interior_radius must lie in (0, 1]"));
        }
        if self.grid_rings == 0 || self.grid_spokes == 0 || self.circle_samples == 0 {
            return Err(PlateauError::invalid("diagnostic grids need at least one sample"));
        }
        self.quadrature.validate()
    }
}

/// `E(phi)` computed from scratch: build the surface, then sum `|Phi(rho z_l)|^2`.
pub fn energy(basis: &Arc<MfsBasis>, curve: &BoundaryCurve, config: &Configuration, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let s = build_surface(basis, curve, config)?;
    Ok(basis.collocation().iter().map(|z| s.dilatation(z * rho).norm_sqr()).sum())
}

/// Exact gradient of [`energy`] with respect to the angles of `config`.
pub fn gradient(basis: &Arc<MfsBasis>, curve: &BoundaryCurve, config: &Configuration, rho: f64) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let s = build_surface(basis, curve, config)?;
    let n = basis.n();
    // v_ik = sum_l conj(Phi_l) dX_i(w_l) dG(w_l - zeta_k)
    let mut v = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for z in basis.collocation() {
        let w = z * rho;
        let dx = s.dz(w);
        let phi_conj = dx.iter().map(|d| d * d).sum::<Complex64>().conj();
        for (k, zeta) in basis.singular().iter().enumerate() {
            let g = green_dz(w - zeta);
            for i in 0..3 {
                v[i][k] += (phi_conj * dx[i] * g).re;
            }
        }
    }
    // dE/dphi_j = 4 sum_i b_i'(phi_j) sum_k v_ik h[(k - j) mod N]
    let h = basis.inverse_kernel();
    Ok(config
        .angles()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let db = curve.deriv(t);
            (0..3).map(|i| db[i] * (0..n).map(|k| v[i][k] * h[(k + n - j) % n]).sum::<f64>()).sum::<f64>() * 4.0
        })
        .collect())
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho < 1.0 {
        Ok(())
    } else {
        Err(PlateauError::invalid(format!("rho must lie in (0, 1) (got {rho})")))
    }
}

/// Energy and gradient with the linear map `b(phi) -> dX(w_l)` assembled once.
#[derive(Debug, Clone)]
pub struct EnergyOperator {
    n: usize,
    curve: BoundaryCurve,
    a_re: Vec<f64>,
    a_im: Vec<f64>,
}

impl EnergyOperator {
    pub fn new(basis: &MfsBasis, curve: &BoundaryCurve, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        basis.check_well_posed()?;
        let n = basis.n();
        let h = basis.inverse_kernel();
        let mut a_re = vec![0.0; n * n];
        let mut a_im = vec![0.0; n * n];
        for (l, z) in basis.collocation().iter().enumerate() {
            let w = z * rho;
            let d: Vec<Complex64> = basis.singular().iter().map(|zeta| green_dz(w - zeta)).collect();
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, dk) in d.iter().enumerate() {
                    acc += dk * h[(k + n - j) % n];
                }
                a_re[l * n + j] = acc.re;
                a_im[l * n + j] = acc.im;
            }
        }
        Ok(EnergyOperator { n, curve: curve.clone(), a_re, a_im })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Returns `E(angles)` and writes the gradient into `grad`.
    pub fn energy_and_gradient(&self, angles: &[f64], grad: &mut [f64]) -> f64 {
        let n = self.n;
        debug_assert_eq!(angles.len(), n);
        let mut b = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut db = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for (j, &t) in angles.iter().enumerate() {
            let (p, d) = (self.curve.eval(t), self.curve.deriv(t));
            for i in 0..3 {
                b[i][j] = p[i];
                db[i][j] = d[i];
            }
        }

        let mut energy = 0.0;
        // m_il = conj(Phi_l) dX_i(w_l)
        let mut m_re = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut m_im = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for l in 0..n {
            let (ar, ai) = (&self.a_re[l * n..(l + 1) * n], &self.a_im[l * n..(l + 1) * n]);
            let mut dx = [Complex64::new(0.0, 0.0); 3];
            for i in 0..3 {
                let (mut re, mut im) = (0.0, 0.0);
                for j in 0..n {
                    re += ar[j] * b[i][j];
                    im += ai[j] * b[i][j];
                }
                dx[i] = Complex64::new(re, im);
            }
            let phi: Complex64 = dx.iter().map(|d| d * d).sum();
            energy += phi.norm_sqr();
            for i in 0..3 {
                let m = phi.conj() * dx[i];
                m_re[i][l] = m.re;
                m_im[i][l] = m.im;
            }
        }

        let mut s = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for l in 0..n {
            let (ar, ai) = (&self.a_re[l * n..(l + 1) * n], &self.a_im[l * n..(l + 1) * n]);
            for i in 0..3 {
                let (mr, mi) = (m_re[i][l], m_im[i][l]);
                let si = &mut s[i];
                for j in 0..n {
                    si[j] += mr * ar[j] - mi * ai[j];
                }
            }
        }
        for j in 0..n {
            grad[j] = 4.0 * (db[0][j] * s[0][j] + db[1][j] * s[1][j] + db[2][j] * s[2][j]);
        }
        energy
    }
}

/// Iterate of the accelerated scheme. Angles are kept unwrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    /// Current point `phi_n`.
    pub phi: Vec<f64>,
    /// Previous gradient step `psi_n`.
    pub lookahead: Vec<f64>,
    pub iter: usize,
    /// Momentum counter; restarts at 1 after a step-size halving.
    pub momentum_index: usize,
    pub eta: f64,
    pub last_energy: f64,
    pub last_grad_norm: f64,
    pub best_energy: f64,
    pub halvings: usize,
}

impl OptimizerState {
    pub fn config(&self) -> Result<Configuration> {
        Configuration::from_angles(&self.phi)
    }
}

/// Outcome of one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Accepted,
    /// The candidate blew up; `eta` was halved and momentum restarted.
    Halved,
}

/// Stepper for `psi_{n+1} = phi_n - eta grad E(phi_n)`,
/// `phi_{n+1} = psi_{n+1} + (n-1)/(n+2) (psi_{n+1} - psi_n)`, with `psi_1 = phi_1`.
#[derive(Debug, Clone)]
pub struct Nesterov {
    op: EnergyOperator,
    halve_on_divergence: bool,
    state: OptimizerState,
    grad: Vec<f64>,
    scratch: Vec<f64>,
}

/// Halvings allowed before the run is declared divergent.
const MAX_HALVINGS: usize = 60;

impl Nesterov {
    pub fn new(op: EnergyOperator, initial: &[f64], settings: &OptimizerSettings) -> Result<Self> {
        settings.validate()?;
        if initial.len() != op.n() {
            return Err(PlateauError::invalid(format!(
                "initial configuration has {} angles, basis has {}",
                initial.len(),
                op.n()
            )));
        }
        let mut grad = vec![0.0; op.n()];
        let e = op.energy_and_gradient(initial, &mut grad);
        if !e.is_finite() {
            return Err(PlateauError::NonFiniteEnergy { iter: 0, eta: settings.eta });
        }
        let state = OptimizerState {
            phi: initial.to_vec(),
            lookahead: initial.to_vec(),
            iter: 0,
            momentum_index: 1,
            eta: settings.eta,
            last_energy: e,
            last_grad_norm: inf_norm(&grad),
            best_energy: e,
            halvings: 0,
        };
        let scratch = vec![0.0; op.n()];
        Ok(Nesterov { op, halve_on_divergence: settings.halve_on_divergence, state, grad, scratch })
    }

    pub fn state(&self) -> &OptimizerState {
        &self.state
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }

    pub fn step(&mut self) -> Result<StepOutcome> {
        let st = &mut self.state;
        st.iter += 1;
        let beta = (st.momentum_index as f64 - 1.0) / (st.momentum_index as f64 + 2.0);
        let psi: Vec<f64> = st.phi.iter().zip(&self.grad).map(|(p, g)| p - st.eta * g).collect();
        let candidate: Vec<f64> = psi.iter().zip(&st.lookahead).map(|(p, prev)| p + beta * (p - prev)).collect();
        let e = self.op.energy_and_gradient(&candidate, &mut self.scratch);

        let blown_up = !e.is_finite() || e > 10.0 * st.best_energy;
        if self.halve_on_divergence && blown_up {
            st.halvings += 1;
            if st.halvings > MAX_HALVINGS {
                return Err(PlateauError::NonFiniteEnergy { iter: st.iter, eta: st.eta });
            }
            st.eta *= 0.5;
            st.momentum_index = 1;
            st.lookahead.clone_from(&st.phi);
            log::debug!("iteration {}: energy {e:e} rejected, eta -> {:e}", st.iter, st.eta);
            return Ok(StepOutcome::Halved);
        }
        if !e.is_finite() {
            return Err(PlateauError::NonFiniteEnergy { iter: st.iter, eta: st.eta });
        }
        st.phi = candidate;
        st.lookahead = psi;
        std::mem::swap(&mut self.grad, &mut self.scratch);
        st.momentum_index += 1;
        st.last_energy = e;
        st.last_grad_norm = inf_norm(&self.grad);
        st.best_energy = st.best_energy.min(e);
        Ok(StepOutcome::Accepted)
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Why the iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxIters,
    GradTolerance,
}

/// Outcome of one optimization run and diagnostics of its final surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub curve: CurveSpec,
    pub n: usize,
    pub radius: f64,
    pub rho: f64,
    pub initial_energy: f64,
    /// `E` of the reported configuration, recomputed from scratch.
    pub final_energy: f64,
    pub final_grad_norm: f64,
    /// Sampled `sup |Phi|` on the disk `|z| <= interior_radius`.
    pub dilatation_sup_interior: f64,
    /// Sampled `sup |Phi|` on the circle `|z| = rho`.
    pub dilatation_sup_rho: f64,
    pub dirichlet_energy: f64,
    /// Sampled `sup |H|` on the disk `|z| <= interior_radius`, skipping degenerate points.
    pub mean_curvature_sup: f64,
    pub degenerate_points: usize,
    pub interior_radius: f64,
    pub iters_run: usize,
    pub stop_reason: StopReason,
    pub final_eta: f64,
    pub halvings: usize,
    pub monotone: bool,
    pub energy_trace: Vec<(usize, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Vec<f64>>,
    pub final_config: Configuration,
    /// Seconds; the only field that varies between identical runs.
    pub wall_time: f64,
}

/// Runs the accelerated iteration with default diagnostics.
pub fn nesterov_run(
    basis: &Arc<MfsBasis>,
    curve: &BoundaryCurve,
    initial: &Configuration,
    settings: &OptimizerSettings,
) -> Result<SolveReport> {
    nesterov_run_with(basis, curve, initial, settings, &DiagnosticSettings::default())
}

pub fn nesterov_run_with(
    basis: &Arc<MfsBasis>,
    curve: &BoundaryCurve,
    initial: &Configuration,
    settings: &OptimizerSettings,
    diagnostics: &DiagnosticSettings,
) -> Result<SolveReport> {
    let start = Instant::now();
    settings.validate()?;
    diagnostics.validate()?;
    let op = EnergyOperator::new(basis, curve, settings.rho)?;
    let mut opt = Nesterov::new(op, initial.angles(), settings)?;
    let initial_energy = opt.state().last_energy;
    let mut trace = vec![(0, initial_energy)];
    let mut stop_reason = StopReason::MaxIters;

    while opt.state().iter < settings.max_iters {
        if opt.state().last_grad_norm <= settings.grad_tolerance {
            stop_reason = StopReason::GradTolerance;
            break;
        }
        opt.step()?;
        let st = opt.state();
        if st.iter % settings.energy_log_stride == 0 {
            trace.push((st.iter, st.last_energy));
        }
    }
    let st = opt.state();
    if trace.last().map(|t| t.0) != Some(st.iter) {
        trace.push((st.iter, st.last_energy));
    }

    let final_config = st.config()?;
    let surface = build_surface(basis, curve, &final_config)?;
    let final_energy = energy(basis, curve, &final_config, settings.rho)?;
    let final_grad_norm = inf_norm(&gradient(basis, curve, &final_config, settings.rho)?);
    let d = diagnostics;
    let (mean_curvature_sup, degenerate_points) =
        surface.mean_curvature_max_on_disk(d.interior_radius, d.grid_rings, d.grid_spokes);
    Ok(SolveReport {
        curve: curve.spec().clone(),
        n: basis.n(),
        radius: basis.radius(),
        rho: settings.rho,
        initial_energy,
        final_energy,
        final_grad_norm,
        dilatation_sup_interior: surface.dilatation_max_on_disk(d.interior_radius, d.grid_rings, d.grid_spokes),
        dilatation_sup_rho: surface.dilatation_sup(settings.rho, d.circle_samples)?,
        dirichlet_energy: surface.dirichlet_energy(&d.quadrature)?,
        mean_curvature_sup,
        degenerate_points,
        interior_radius: d.interior_radius,
        iters_run: st.iter,
        stop_reason,
        final_eta: st.eta,
        halvings: st.halvings,
        monotone: final_config.is_monotone(),
        energy_trace: trace,
        fingerprint: d.fingerprint.then(|| shape_fingerprint(&surface)),
        final_config,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Sorted pairwise distances of `X` at 16 points of the circle `|z| = 3/4`.
///
/// Invariant under rigid motions of the surface, not under reparametrization.
pub fn shape_fingerprint(surface: &ApproximateSurface) -> Vec<f64> {
    let pts: Vec<[f64; 3]> = (0..16)
        .map(|k| surface.evaluate(Complex64::from_polar(0.75, std::f64::consts::TAU * k as f64 / 16.0)))
        .collect();
    let mut d = Vec::with_capacity(120);
    for a in 0..16 {
        for b in a + 1..16 {
            let diff = [pts[a][0] - pts[b][0], pts[a][1] - pts[b][1], pts[a][2] - pts[b][2]];
            d.push(norm(&diff));
        }
    }
    d.sort_by(f64::total_cmp);
    d
}
