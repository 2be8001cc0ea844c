//! Enumerating distinct minimal surfaces that share one boundary curve.
//!
//! Two protocols feed the optimizer with many initial configurations: a
//! one-parameter Fourier family and random monotone reparametrizations. The
//! resulting surfaces are grouped by their Dirichlet energy.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{BoundaryCurve, CurveSpec};
use crate::error::{PlateauError, Result};
use crate::mfs::{build_basis, MfsBasis};
use crate::optimizer::{nesterov_run_with, DiagnosticSettings, OptimizerSettings, SolveReport};
use crate::spline::monotone_periodic_samples;
use crate::surface::Configuration;

/// `phi_j = 2 pi j / n + s sin(2 pi m j / n)` for `j = 0..n`.
pub fn fourier_initial(n: usize, s: f64, m: i64) -> Result<Configuration> {
    if n == 0 {
        return Err(PlateauError::invalid("n must be positive"));
    }
    if !s.is_finite() {
        return Err(PlateauError::invalid("s must be finite"));
    }
    let angles: Vec<f64> = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            t + s * (t * m as f64).sin()
        })
        .collect();
    Configuration::from_angles(&angles)
}

/// Random monotone reparametrization from stream 0 of `seed`.
pub fn random_initial(n: usize, seed: u64, n_knots: usize) -> Result<Configuration> {
    random_initial_stream(n, seed, 0, n_knots)
}

/// Draws `n_knots` sorted uniform angles, joins them by a periodic monotone
/// cubic, and samples that map at `n` equispaced parameters.
///
/// Each `(seed, stream)` pair is an independent ChaCha stream, so sample `i` of
/// a search does not depend on how many samples precede it.
pub fn random_initial_stream(n: usize, seed: u64, stream: u64, n_knots: usize) -> Result<Configuration> {
    if n_knots < 4 {
        return Err(PlateauError::invalid(format!("n_knots must be at least 4 (got {n_knots})")));
    }
    if n == 0 {
        return Err(PlateauError::invalid("n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut knots: Vec<f64> = (0..n_knots).map(|_| rng.random::<f64>() * TAU).collect();
    knots.sort_by(f64::total_cmp);
    Configuration::from_angles(&monotone_periodic_samples(&knots, n))
}

/// Everything needed to run one optimization, minus the initial configuration.
#[derive(Debug, Clone)]
pub struct Problem {
    pub basis: Arc<MfsBasis>,
    pub curve: BoundaryCurve,
    pub settings: OptimizerSettings,
    pub diagnostics: DiagnosticSettings,
}

impl Problem {
    pub fn new(
        curve: &CurveSpec,
        n: usize,
        radius: f64,
        settings: OptimizerSettings,
        diagnostics: DiagnosticSettings,
    ) -> Result<Self> {
        let basis = Arc::new(build_basis(n, radius)?);
        basis.check_well_posed()?;
        settings.validate()?;
        diagnostics.validate()?;
        Ok(Problem { basis, curve: BoundaryCurve::new(curve.clone())?, settings, diagnostics })
    }

    pub fn solve(&self, initial: &Configuration) -> Result<SolveReport> {
        nesterov_run_with(&self.basis, &self.curve, initial, &self.settings, &self.diagnostics)
    }
}

/// Runs independent optimizations on at most `jobs` threads; output order follows input order.
pub fn run_batch(problem: &Problem, initials: &[Configuration], jobs: usize) -> Result<Vec<Result<SolveReport>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| PlateauError::invalid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| initials.par_iter().map(|c| problem.solve(c)).collect()))
}

/// One-parameter family sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub curve: CurveSpec,
    pub n: usize,
    pub radius: f64,
    pub s_values: Vec<f64>,
    pub m: i64,
    #[serde(default)]
    pub settings: OptimizerSettings,
    #[serde(default)]
    pub diagnostics: DiagnosticSettings,
}

/// One optimization per `s`, in the order given. Duplicates are kept.
pub fn sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<Result<SolveReport>>> {
    if spec.s_values.is_empty() {
        return Ok(Vec::new());
    }
    let problem = Problem::new(&spec.curve, spec.n, spec.radius, spec.settings.clone(), spec.diagnostics.clone())?;
    let initials = spec.s_values.iter().map(|&s| fourier_initial(spec.n, s, spec.m)).collect::<Result<Vec<_>>>()?;
    run_batch(&problem, &initials, jobs)
}

/// Reports whose Dirichlet energies share their leading significant digits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCluster {
    /// Truncated energy that all members share, e.g. `1.1843e1`.
    pub key: String,
    pub digits: usize,
    /// Index of the first member.
    pub representative: usize,
    pub members: Vec<usize>,
    pub energy_mean: f64,
    /// `max - min` of member energies.
    pub energy_spread: f64,
}

/// Leading `digits` significant digits of `x`, truncated toward zero, with its exponent.
///
/// Truncation (rather than rounding) makes keys nested: equal keys at `d + 1`
/// digits imply equal keys at `d` digits.
pub fn significant_key(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17);
    let s = format!("{:.16e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let all: String = mantissa.chars().filter(|c| *c != '.').collect();
    let kept = &all[..digits];
    let body = if digits == 1 { kept.to_string() } else { format!("{}.{}", &kept[..1], &kept[1..]) };
    format!("{sign}{body}e{exp}")
}

/// Groups reports by the truncated Dirichlet energy, sorted by energy.
///
/// Reports with a non-finite energy are left out.
pub fn classify(reports: &[SolveReport], digits: usize) -> Vec<SolutionCluster> {
    let energies: Vec<Option<f64>> = reports.iter().map(|r| Some(r.dirichlet_energy)).collect();
    classify_energies(&energies, digits)
}

/// [`classify`] over optional energies; `None` marks a failed run.
pub fn classify_energies(energies: &[Option<f64>], digits: usize) -> Vec<SolutionCluster> {
    let mut order: Vec<(usize, f64)> =
        energies.iter().enumerate().filter_map(|(i, e)| e.filter(|v| v.is_finite()).map(|v| (i, v))).collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let mut clusters: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
    for (i, e) in order {
        let key = significant_key(e, digits);
        match clusters.iter_mut().find(|c| c.0 == key) {
            Some(c) => c.1.push((i, e)),
            None => clusters.push((key, vec![(i, e)])),
        }
    }
    clusters
        .into_iter()
        .map(|(key, mut m)| {
            m.sort_by_key(|p| p.0);
            let lo = m.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let hi = m.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            SolutionCluster {
                key,
                digits: digits.clamp(1, 17),
                representative: m[0].0,
                energy_mean: m.iter().map(|p| p.1).sum::<f64>() / m.len() as f64,
                energy_spread: hi - lo,
                members: m.into_iter().map(|p| p.0).collect(),
            }
        })
        .collect()
}

/// Splits energy clusters further by shape fingerprint, comparing within `tol` (max-norm).
///
/// Members without a fingerprint stay with the first group.
pub fn split_by_fingerprint(clusters: &[SolutionCluster], reports: &[SolveReport], tol: f64) -> Vec<SolutionCluster> {
    let mut out = Vec::new();
    for c in clusters {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &c.members {
            let fp = reports[i].fingerprint.as_deref();
            let hit = groups.iter_mut().find(|g| match (fp, reports[g[0]].fingerprint.as_deref()) {
                (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol),
                _ => true,
            });
            match hit {
                Some(g) => g.push(i),
                None => groups.push(vec![i]),
            }
        }
        for g in groups {
            let e: Vec<f64> = g.iter().map(|&i| reports[i].dirichlet_energy).collect();
            let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            out.push(SolutionCluster {
                key: c.key.clone(),
                digits: c.digits,
                representative: g[0],
                energy_mean: e.iter().sum::<f64>() / e.len() as f64,
                energy_spread: hi - lo,
                members: g,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fourier_family_values() {
        let c = fourier_initial(4, 1.0, 1).unwrap();
        let want = [0.0, PI / 2.0 + 1.0, PI, 1.5 * PI - 1.0];
        for (a, b) in c.angles().iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(fourier_initial(8, 0.0, 2).unwrap(), Configuration::equidistant(8));
        let flat = fourier_initial(8, 3.0, 0).unwrap();
        for (a, b) in flat.angles().iter().zip(Configuration::equidistant(8).angles()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_initial_is_deterministic_and_monotone() {
        let a = random_initial(64, 7, 8).unwrap();
        assert_eq!(a, random_initial(64, 7, 8).unwrap());
        assert_ne!(a, random_initial(64, 8, 8).unwrap());
        assert_ne!(a, random_initial_stream(64, 7, 1, 8).unwrap());
        assert!(random_initial(64, 7, 3).is_err());
    }

    #[test]
    fn keys_truncate() {
        assert_eq!(significant_key(11.8436, 5), "1.1843e1");
        assert_eq!(significant_key(11.8439999, 5), "1.1843e1");
        assert_eq!(significant_key(9.87, 1), "9e0");
        assert_eq!(significant_key(-0.0123456, 3), "-1.23e-2");
    }

    #[test]
    fn classification_examples() {
        let same = [Some(3.0), Some(3.0), Some(3.0)];
        assert_eq!(classify_energies(&same, 5).len(), 1);
        let two = [Some(12.7), Some(9.2), Some(9.4)];
        let c = classify_energies(&two, 1);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].members, vec![1, 2]);
        assert_eq!(c[1].members, vec![0]);
        assert!(c[0].energy_mean < c[1].energy_mean);
        let failed = [None, Some(1.0), Some(f64::NAN)];
        assert_eq!(classify_energies(&failed, 3).len(), 1);
        assert!(classify_energies(&[], 5).is_empty());
    }
}
