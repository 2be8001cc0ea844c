//! Config round trips and the on-disk formats.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use plateau_core::curves::{self, CurveSpec};
use plateau_core::io::export::{sample_field, write_grid_csv, write_mesh_scalars_csv, write_obj};
use plateau_core::io::{
    to_json_string, Document, GridField, GridSpec, InitialSpec, OutputSpec, RunConfig, SearchSpec, SCHEMA_VERSION,
};
use plateau_core::{
    build_basis, build_surface, ApproximateSurface, Coefficients, Configuration, DiagnosticSettings, OptimizerSettings,
    Quadrature,
};
use proptest::prelude::*;
use serde_json::Value;

fn curve_strategy() -> impl Strategy<Value = CurveSpec> {
    prop_oneof![
        (1e-3f64..10.0).prop_map(|radius| CurveSpec::Circle { radius }),
        (0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, b)| CurveSpec::Ellipse { a, b }),
        (1.0001f64..3.0).prop_map(|a| CurveSpec::Cassini { a }),
        (1u32..12, 0.0f64..0.9).prop_map(|(n, amplitude)| CurveSpec::Crown { n, amplitude }),
        (1u32..7, 1u32..7).prop_map(|(p, q)| CurveSpec::TorusKnot { p, q }),
        (0.1f64..2.0).prop_map(|r| CurveSpec::Enneper { r }),
        (prop::collection::vec(prop::array::uniform3(-5.0f64..5.0), 4..10), 1usize..4)
            .prop_map(|(control, degree)| CurveSpec::BSpline { control, degree }),
    ]
}

fn initial_strategy() -> impl Strategy<Value = InitialSpec> {
    prop_oneof![
        Just(InitialSpec::Equidistant),
        (-2.0f64..2.0, -4i64..5).prop_map(|(s, m)| InitialSpec::Fourier { s, m }),
        (any::<u64>(), 4usize..20).prop_map(|(seed, knots)| InitialSpec::Random { seed, knots }),
        prop::collection::vec(-10.0f64..10.0, 0..8).prop_map(|angles| InitialSpec::Explicit { angles }),
    ]
}

prop_compose! {
    fn config_strategy()(
        curve in curve_strategy(),
        n in 4usize..300,
        radius in 1.0001f64..4.0,
        eta in 1e-6f64..0.999,
        max_iters in 0usize..100_000,
        rho in 0.01f64..0.99,
        grad_tolerance in 0.0f64..1e-3,
        halve in any::<bool>(),
        initial in initial_strategy(),
        interior in 0.01f64..1.0,
        n_r in 2usize..200,
        s_values in prop::collection::vec(-3.0f64..3.0, 0..6),
        seed in any::<u64>(),
        digits in 1usize..18,
        field in prop_oneof![Just(GridField::Dilatation), Just(GridField::MeanCurvature)],
        max_radius in 0.01f64..1.0,
        mesh in any::<bool>(),
        jobs in prop::option::of(1usize..64),
    ) -> RunConfig {
        RunConfig {
            curve,
            n,
            radius,
            optimizer: OptimizerSettings {
                eta, max_iters, rho, grad_tolerance, energy_log_stride: 7, halve_on_divergence: halve,
            },
            initial,
            diagnostics: DiagnosticSettings {
                interior_radius: interior,
                quadrature: Quadrature { n_r, n_theta: 4 * n_r },
                ..Default::default()
            },
            search: SearchSpec { s_values, seed, digits, ..Default::default() },
            grid: GridSpec { field, max_radius, ..Default::default() },
            output: OutputSpec { dir: PathBuf::from(format!("runs/{seed}")), mesh, ..Default::default() },
            jobs,
        }
    }
}

proptest! {
    #[test]
    fn configs_survive_a_round_trip(c in config_strategy()) {
        let text = to_json_string(&c).unwrap();
        prop_assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }
}

#[test]
fn documents_carry_version_and_config() {
    let c = RunConfig::for_curve(CurveSpec::Ellipse { a: 2.0, b: 1.0 });
    let doc = Document::new("solve", &c, vec![1.5]);
    let v: Value = serde_json::from_str(&to_json_string(&doc).unwrap()).unwrap();
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["kind"], "solve");
    let back: RunConfig = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(back, c);
}

#[test]
fn flat_disk_grid_is_flat() {
    let basis = Arc::new(build_basis(64, 1.5).unwrap());
    let s = build_surface(&basis, &curves::circle(1.0).unwrap(), &Configuration::equidistant(64)).unwrap();
    let rows = sample_field(&s, GridField::Dilatation, 16, 64, 1.0);
    assert_eq!(rows.len(), 1 + 16 * 64);
    assert!(rows.iter().all(|r| r.2 < 1e-10));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    write_grid_csv(fs::File::create(&path).unwrap(), &rows).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,theta,value"));
    let parsed: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(parsed.len(), rows.len());
    for (p, r) in parsed.iter().zip(&rows) {
        assert_eq!((p[0], p[1], p[2]), *r);
    }
}

#[test]
fn degenerate_points_are_written_as_nan() {
    let basis = Arc::new(build_basis(16, 1.5).unwrap());
    let collapsed = ApproximateSurface::from_coefficients(
        Arc::clone(&basis),
        [Coefficients::zeros(16), Coefficients::zeros(16), Coefficients::zeros(16)],
        CurveSpec::Circle { radius: 1.0 },
        Configuration::equidistant(16),
    )
    .unwrap();
    let rows = sample_field(&collapsed, GridField::MeanCurvature, 2, 4, 0.5);
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",nan")));
}

#[test]
fn mesh_files_are_consistent() {
    let basis = Arc::new(build_basis(32, 1.5).unwrap());
    let s = build_surface(&basis, &curves::crown(5, 0.3).unwrap(), &Configuration::equidistant(32)).unwrap();
    let mesh = s.sample_mesh(3, 16).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("surface.obj");
    let csv = dir.path().join("surface_scalars.csv");
    write_obj(fs::File::create(&obj).unwrap(), &mesh).unwrap();
    write_mesh_scalars_csv(fs::File::create(&csv).unwrap(), &mesh).unwrap();

    let obj = fs::read_to_string(obj).unwrap();
    let vertices: Vec<&str> = obj.lines().filter(|l| l.starts_with("v ")).collect();
    let faces: Vec<Vec<usize>> = obj
        .lines()
        .filter(|l| l.starts_with("f "))
        .map(|l| l[2..].split(' ').map(|i| i.parse().unwrap()).collect())
        .collect();
    assert_eq!(vertices.len(), 1 + 3 * 16);
    assert_eq!(faces.len(), 16 + 2 * 16);
    assert!(faces.iter().flatten().all(|&i| i >= 1 && i <= vertices.len()));
    assert_eq!(faces.iter().filter(|f| f.len() == 3).count(), 16);

    let csv = fs::read_to_string(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("vertex,rho,theta,dilatation,mean_curvature"));
    assert_eq!(lines.count(), vertices.len());
}
