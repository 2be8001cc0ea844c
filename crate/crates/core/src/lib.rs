//! Minimal surfaces spanning a closed curve, computed without a mesh.
//!
//! Each coordinate of the surface is a harmonic function on the unit disk,
//! represented by fundamental solutions placed on a circle outside the disk.
//! Choosing where the boundary points land on the curve (a point of the
//! N-torus) fixes the surface; the optimizer moves those points until the
//! parametrization becomes conformal, at which point the harmonic surface is
//! minimal.
//!
//! ```
//! use std::sync::Arc;
//! use plateau_core::{build_basis, build_surface, curves, Configuration};
//!
//! let basis = Arc::new(build_basis(64, 1.5).unwrap());
//! let surface = build_surface(&basis, &curves::circle(1.0).unwrap(), &Configuration::equidistant(64)).unwrap();
//! let d = surface.dirichlet_energy(&Default::default()).unwrap();
//! assert!((d - std::f64::consts::PI).abs() < 1e-9);
//! ```

// `!(x > a)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circulant;
pub mod curves;
pub mod error;
pub mod io;
pub mod mfs;
pub mod optimizer;
pub mod quadrature;
pub mod search;
pub mod spline;
pub mod surface;

pub use curves::{BoundaryCurve, CurveSpec};
pub use error::{PlateauError, Result};
pub use mfs::{
    build_basis, evaluate, evaluate_dz, evaluate_dzz, solve_coefficients, BoundaryValues, Coefficients, MfsBasis,
};
pub use num_complex::Complex64;
pub use optimizer::{
    energy, gradient, nesterov_run, nesterov_run_with, DiagnosticSettings, EnergyOperator, Nesterov, OptimizerSettings,
    OptimizerState, SolveReport, StepOutcome, StopReason,
};
pub use quadrature::Quadrature;
pub use search::{
    classify, fourier_initial, random_initial, random_initial_stream, run_batch, sweep, Problem, SolutionCluster,
    SweepSpec,
};
pub use surface::{build_surface, ApproximateSurface, Configuration, FundamentalForms, Mesh};
