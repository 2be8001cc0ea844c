//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use plateau_core::{build_basis, curves, BoundaryCurve, Configuration, EnergyOperator, MfsBasis};

/// Ellipse problem of size `n` at the default source radius and sampling circle.
pub fn ellipse_fixture(n: usize) -> (Arc<MfsBasis>, BoundaryCurve, Configuration, EnergyOperator) {
    let basis = Arc::new(build_basis(n, 1.5).expect("valid basis"));
    let curve = curves::ellipse();
    let op = EnergyOperator::new(&basis, &curve, 0.87).expect("well-posed basis");
    (basis, curve, Configuration::equidistant(n), op)
}
