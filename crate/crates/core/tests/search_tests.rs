//! Multi-start orchestration: reproducibility, ordering and clustering.

use plateau_core::io::to_json_string;
use plateau_core::search::{classify_energies, significant_key, split_by_fingerprint};
use plateau_core::{
    classify, fourier_initial, random_initial_stream, run_batch, sweep, Configuration, CurveSpec, DiagnosticSettings,
    OptimizerSettings, Problem, SolveReport, SweepSpec,
};
use proptest::prelude::*;
use serde_json::Value;

fn quick_settings() -> OptimizerSettings {
    OptimizerSettings { eta: 1e-3, max_iters: 60, energy_log_stride: 20, ..Default::default() }
}

fn quick_diagnostics() -> DiagnosticSettings {
    DiagnosticSettings { grid_rings: 4, grid_spokes: 16, circle_samples: 64, ..Default::default() }
}

fn spec(s_values: Vec<f64>) -> SweepSpec {
    SweepSpec {
        curve: CurveSpec::Enneper { r: 1.15 },
        n: 24,
        radius: 1.5,
        s_values,
        m: 2,
        settings: quick_settings(),
        diagnostics: quick_diagnostics(),
    }
}

fn without_wall_time(r: &SolveReport) -> String {
    let mut v: Value = serde_json::from_str(&to_json_string(r).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("wall_time");
    v.to_string()
}

fn unwrap_all(v: Vec<plateau_core::Result<SolveReport>>) -> Vec<SolveReport> {
    v.into_iter().map(|r| r.unwrap()).collect()
}

#[test]
fn sweeps_are_reproducible() {
    let a = unwrap_all(sweep(&spec(vec![-1.0, 0.0, 1.0]), 1).unwrap());
    let b = unwrap_all(sweep(&spec(vec![-1.0, 0.0, 1.0]), 1).unwrap());
    assert_eq!(a.len(), 3);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(without_wall_time(x), without_wall_time(y));
    }
}

#[test]
fn parallel_and_serial_batches_agree() {
    let problem =
        Problem::new(&CurveSpec::Crown { n: 5, amplitude: 0.3 }, 24, 1.5, quick_settings(), quick_diagnostics())
            .unwrap();
    let initials: Vec<Configuration> = (0..6).map(|k| random_initial_stream(24, 5, k, 4).unwrap()).collect();
    let serial = unwrap_all(run_batch(&problem, &initials, 1).unwrap());
    let parallel = unwrap_all(run_batch(&problem, &initials, 4).unwrap());
    for (i, (s, p)) in serial.iter().zip(&parallel).enumerate() {
        assert_eq!(without_wall_time(s), without_wall_time(p));
        // order follows input
        assert_eq!(without_wall_time(s), without_wall_time(&problem.solve(&initials[i]).unwrap()));
    }
}

#[test]
fn empty_and_duplicate_sweeps() {
    assert!(sweep(&spec(vec![]), 2).unwrap().is_empty());
    let r = unwrap_all(sweep(&spec(vec![0.5, 0.5]), 2).unwrap());
    assert_eq!(without_wall_time(&r[0]), without_wall_time(&r[1]));
    let clusters = classify(&r, 5);
    assert_eq!(clusters.len(), 1);
    assert_eq!(clusters[0].members, vec![0, 1]);
    assert_eq!(clusters[0].energy_spread, 0.0);
}

#[test]
fn invalid_problems_are_rejected() {
    let mut bad = spec(vec![0.0]);
    bad.radius = 0.9;
    assert!(sweep(&bad, 1).is_err());
    let mut bad = spec(vec![0.0]);
    bad.settings.eta = 2.0;
    assert!(sweep(&bad, 1).is_err());
}

#[test]
fn initial_configurations() {
    let flat = fourier_initial(32, 0.0, 2).unwrap();
    assert_eq!(flat, Configuration::equidistant(32));
    let a = random_initial_stream(32, 1, 3, 4).unwrap();
    assert_eq!(a, random_initial_stream(32, 1, 3, 4).unwrap());
    assert_ne!(a, random_initial_stream(32, 1, 4, 4).unwrap());
    assert_ne!(a, random_initial_stream(32, 2, 3, 4).unwrap());
    assert!(a.is_monotone());
    assert!(random_initial_stream(32, 1, 3, 3).is_err());
}

#[test]
fn keys_truncate() {
    assert_eq!(significant_key(12.071653, 5), "1.2071e1");
    assert_eq!(significant_key(11.843399, 5), "1.1843e1");
    assert_eq!(significant_key(0.000123456, 3), "1.23e-4");
    assert_eq!(significant_key(-2.5, 1), "-2e0");
}

#[test]
fn failed_runs_are_left_out_of_clusters() {
    let c = classify_energies(&[Some(1.0), None, Some(f64::NAN), Some(1.00001)], 3);
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].members, vec![0, 3]);
    assert!(classify_energies(&[], 5).is_empty());
}

#[test]
fn fingerprints_split_clusters() {
    let r = unwrap_all(sweep(&spec(vec![0.0, 0.0]), 1).unwrap());
    let clusters = classify(&r, 5);
    let mut b = r.clone();
    b[1].fingerprint = Some(vec![1.0; 120]);
    b[0].fingerprint = Some(vec![0.0; 120]);
    assert_eq!(split_by_fingerprint(&clusters, &b, 1e-3).len(), 2);
    b[1].fingerprint = Some(vec![0.0; 120]);
    assert_eq!(split_by_fingerprint(&clusters, &b, 1e-3).len(), 1);
}

proptest! {
    #[test]
    fn more_digits_only_split_clusters(
        energies in prop::collection::vec(prop_oneof![1.0f64..20.0, Just(12.071653), Just(12.0716)], 0..40),
        digits in 1usize..16,
    ) {
        let opt: Vec<Option<f64>> = energies.iter().copied().map(Some).collect();
        let coarse = classify_energies(&opt, digits);
        let fine = classify_energies(&opt, digits + 1);
        prop_assert!(fine.len() >= coarse.len());
        for f in &fine {
            prop_assert!(coarse.iter().any(|c| f.members.iter().all(|m| c.members.contains(m))));
        }
        let total: usize = coarse.iter().map(|c| c.members.len()).sum();
        prop_assert_eq!(total, energies.len());
    }
}
