//! Boundary curves `b: [0, 2 pi) -> R^3` with exact derivatives.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{PlateauError, Result};
use crate::spline::PeriodicBSpline;

/// Serializable description of a boundary curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// Planar circle `(r cos t, r sin t, 0)`; spans a flat disk.
    Circle {
        #[serde(default = "one")]
        radius: f64,
    },
    /// `(a cos t, b sin t, 0)`.
    Ellipse {
        #[serde(default = "two")]
        a: f64,
        #[serde(default = "one")]
        b: f64,
    },
    /// Cassini oval `r(t) = sqrt(cos 2t + sqrt(a^4 - sin^2 2t))`.
    Cassini {
        #[serde(default = "cassini_default")]
        a: f64,
    },
    /// `(cos t, sin t, amplitude sin(n t))`.
    Crown {
        n: u32,
        #[serde(default = "crown_amplitude")]
        amplitude: f64,
    },
    /// `((2 + cos qt) cos pt, (2 + cos qt) sin pt, -sin qt)`.
    TorusKnot { p: u32, q: u32 },
    /// Boundary of the Enneper surface restricted to the disk of radius `r`.
    Enneper { r: f64 },
    /// Closed uniform B-spline through the given points.
    #[serde(rename = "bspline")]
    BSpline {
        control: Vec<[f64; 3]>,
        #[serde(default = "cubic")]
        degree: usize,
    },
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn cassini_default() -> f64 {
    1.1
}
fn crown_amplitude() -> f64 {
    0.3
}
fn cubic() -> usize {
    3
}

/// A validated boundary curve.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    spec: CurveSpec,
    spline: Option<PeriodicBSpline>,
}

pub fn circle(radius: f64) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::Circle { radius })
}

pub fn ellipse() -> BoundaryCurve {
    BoundaryCurve::new(CurveSpec::Ellipse { a: 2.0, b: 1.0 }).expect("default ellipse is valid")
}

pub fn cassini_oval(a: f64) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::Cassini { a })
}

pub fn crown(n: u32, amplitude: f64) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::Crown { n, amplitude })
}

pub fn torus_knot(p: u32, q: u32) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::TorusKnot { p, q })
}

pub fn enneper_wire(r: f64) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::Enneper { r })
}

pub fn bspline_curve(control: Vec<[f64; 3]>, degree: usize) -> Result<BoundaryCurve> {
    BoundaryCurve::new(CurveSpec::BSpline { control, degree })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(PlateauError::invalid(format!("{name} must be positive and finite (got {v})")))
    }
}

impl BoundaryCurve {
    pub fn new(spec: CurveSpec) -> Result<Self> {
        let mut spline = None;
        match &spec {
            CurveSpec::Circle { radius } => positive("circle radius", *radius)?,
            CurveSpec::Ellipse { a, b } => {
                positive("ellipse semi-axis a", *a)?;
                positive("ellipse semi-axis b", *b)?;
            }
            CurveSpec::Cassini { a } => {
                if !(*a > 1.0) || !a.is_finite() {
                    return Err(PlateauError::invalid(format!("cassini parameter a must exceed 1 (got {a})")));
                }
            }
            CurveSpec::Crown { n, amplitude } => {
                if *n == 0 {
                    return Err(PlateauError::invalid("crown needs n >= 1"));
                }
                if !amplitude.is_finite() {
                    return Err(PlateauError::invalid("crown amplitude must be finite"));
                }
            }
            CurveSpec::TorusKnot { p, q } => {
                if *p == 0 || *q == 0 || gcd(*p, *q) != 1 {
                    return Err(PlateauError::invalid(format!(
                        "torus knot needs positive coprime p, q (got {p}, {q})"
                    )));
                }
            }
            CurveSpec::Enneper { r } => {
                if !(*r > 0.0 && *r < 3f64.sqrt()) {
                    return Err(PlateauError::invalid(format!("enneper r must lie in (0, sqrt 3) (got {r})")));
                }
            }
            CurveSpec::BSpline { control, degree } => {
                spline = Some(PeriodicBSpline::interpolate(control, *degree)?);
            }
        }
        Ok(BoundaryCurve { spec, spline })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    /// Short human-readable label, e.g. `enneper(r=1.15)`.
    pub fn label(&self) -> String {
        match &self.spec {
            CurveSpec::Circle { radius } => format!("circle(radius={radius})"),
            CurveSpec::Ellipse { a, b } => format!("ellipse(a={a}, b={b})"),
            CurveSpec::Cassini { a } => format!("cassini(a={a})"),
            CurveSpec::Crown { n, amplitude } => format!("crown(n={n}, amplitude={amplitude})"),
            CurveSpec::TorusKnot { p, q } => format!("torus_knot(p={p}, q={q})"),
            CurveSpec::Enneper { r } => format!("enneper(r={r})"),
            CurveSpec::BSpline { control, degree } => {
                format!("bspline(points={}, degree={degree})", control.len())
            }
        }
    }

    pub fn eval(&self, t: f64) -> [f64; 3] {
        match &self.spec {
            CurveSpec::Circle { radius } => [radius * t.cos(), radius * t.sin(), 0.0],
            CurveSpec::Ellipse { a, b } => [a * t.cos(), b * t.sin(), 0.0],
            CurveSpec::Cassini { a } => {
                let r = cassini_radius(*a, t).0;
                [r * t.cos(), r * t.sin(), 0.0]
            }
            CurveSpec::Crown { n, amplitude } => [t.cos(), t.sin(), amplitude * (*n as f64 * t).sin()],
            CurveSpec::TorusKnot { p, q } => {
                let (p, q) = (*p as f64, *q as f64);
                let w = 2.0 + (q * t).cos();
                [w * (p * t).cos(), w * (p * t).sin(), -(q * t).sin()]
            }
            CurveSpec::Enneper { r } => {
                let r3 = r * r * r / 3.0;
                [r * t.cos() - r3 * (3.0 * t).cos(), -r * t.sin() - r3 * (3.0 * t).sin(), r * r * (2.0 * t).cos()]
            }
            CurveSpec::BSpline { .. } => self.spline.as_ref().expect("validated").eval(t),
        }
    }

    pub fn deriv(&self, t: f64) -> [f64; 3] {
        match &self.spec {
            CurveSpec::Circle { radius } => [-radius * t.sin(), radius * t.cos(), 0.0],
            CurveSpec::Ellipse { a, b } => [-a * t.sin(), b * t.cos(), 0.0],
            CurveSpec::Cassini { a } => {
                let (r, dr) = cassini_radius(*a, t);
                let (c, s) = (t.cos(), t.sin());
                [dr * c - r * s, dr * s + r * c, 0.0]
            }
            CurveSpec::Crown { n, amplitude } => {
                let n = *n as f64;
                [-t.sin(), t.cos(), amplitude * n * (n * t).cos()]
            }
            CurveSpec::TorusKnot { p, q } => {
                let (p, q) = (*p as f64, *q as f64);
                let w = 2.0 + (q * t).cos();
                let dw = -q * (q * t).sin();
                [
                    dw * (p * t).cos() - p * w * (p * t).sin(),
                    dw * (p * t).sin() + p * w * (p * t).cos(),
                    -q * (q * t).cos(),
                ]
            }
            CurveSpec::Enneper { r } => {
                let r3 = r * r * r;
                [
                    -r * t.sin() + r3 * (3.0 * t).sin(),
                    -r * t.cos() - r3 * (3.0 * t).cos(),
                    -2.0 * r * r * (2.0 * t).sin(),
                ]
            }
            CurveSpec::BSpline { .. } => self.spline.as_ref().expect("validated").deriv(t),
        }
    }

    /// Samples the curve at `m` equispaced parameters.
    pub fn sample(&self, m: usize) -> Vec<[f64; 3]> {
        (0..m).map(|i| self.eval(TAU * i as f64 / m as f64)).collect()
    }

    /// Returns a copy of the curve scaled about the origin.
    pub fn scaled(&self, factor: f64) -> Result<BoundaryCurve> {
        positive("scale factor", factor)?;
        let spec = match &self.spec {
            CurveSpec::Circle { radius } => CurveSpec::Circle { radius: radius * factor },
            CurveSpec::Ellipse { a, b } => CurveSpec::Ellipse { a: a * factor, b: b * factor },
            _ => {
                // Curves without a scale parameter become interpolating splines
                // through dense samples; exact for splines, close otherwise.
                let control = match &self.spec {
                    CurveSpec::BSpline { control, .. } => control.clone(),
                    _ => self.sample(256),
                }
                .into_iter()
                .map(|p| [p[0] * factor, p[1] * factor, p[2] * factor])
                .collect();
                let degree = match &self.spec {
                    CurveSpec::BSpline { degree, .. } => *degree,
                    _ => 5,
                };
                CurveSpec::BSpline { control, degree }
            }
        };
        BoundaryCurve::new(spec)
    }
}

/// `(r, dr/dt)` for the Cassini oval.
fn cassini_radius(a: f64, t: f64) -> (f64, f64) {
    let (s2, c2) = (2.0 * t).sin_cos();
    let root = (a.powi(4) - s2 * s2).sqrt();
    let r = (c2 + root).sqrt();
    let dr2 = -2.0 * s2 - 2.0 * s2 * c2 / root;
    (r, dr2 / (2.0 * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn ellipse_values() {
        let e = ellipse();
        assert!(close(e.eval(0.0), [2.0, 0.0, 0.0], 1e-15));
        assert!(close(e.eval(FRAC_PI_2), [0.0, 1.0, 0.0], 1e-15));
        assert!(close(e.deriv(0.0), [0.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn cassini_values() {
        let c = cassini_oval(1.1).unwrap();
        assert!((c.eval(0.0)[0] - 2.21f64.sqrt()).abs() < 1e-14);
        let r = cassini_radius(1.1, PI / 4.0).0;
        assert!((r - (1.1f64.powi(4) - 1.0).sqrt().sqrt()).abs() < 1e-14);
        assert!(cassini_oval(1.0).is_err());
    }

    #[test]
    fn crown_values() {
        let c = crown(5, 0.3).unwrap();
        assert!(close(c.eval(0.0), [1.0, 0.0, 0.0], 1e-15));
        assert!((c.eval(PI / 10.0)[2] - 0.3).abs() < 1e-15);
        let flat = crown(5, 0.0).unwrap();
        let t = 0.77;
        assert!(close(flat.eval(t), circle(1.0).unwrap().eval(t), 1e-15));
    }

    #[test]
    fn torus_knot_values() {
        let k = torus_knot(3, 2).unwrap();
        assert!(close(k.eval(0.0), [3.0, 0.0, 0.0], 1e-15));
        assert!(close(k.eval(TAU), k.eval(0.0), 1e-12));
        for i in 0..50 {
            let t = i as f64 * 0.13;
            let b = k.eval(t);
            let core = [2.0 * (3.0 * t).cos(), 2.0 * (3.0 * t).sin(), 0.0];
            let d = ((b[0] - core[0]).powi(2) + (b[1] - core[1]).powi(2) + b[2].powi(2)).sqrt();
            assert!((d - 1.0).abs() < 1e-12);
        }
        assert!(torus_knot(2, 4).is_err());
    }

    #[test]
    fn enneper_values() {
        let e = enneper_wire(1.1).unwrap();
        let b = e.eval(0.0);
        assert!(close(b, [1.1 - 1.331 / 3.0, 0.0, 1.21], 1e-14));
        assert!((b[0] - 0.656_333_333_333_333).abs() < 1e-12);
        assert!(enneper_wire(1.8).is_err());
        assert!(enneper_wire(0.0).is_err());
    }

    #[test]
    fn spec_round_trips_through_json() {
        let specs = [
            CurveSpec::Circle { radius: 1.0 },
            CurveSpec::Crown { n: 5, amplitude: 0.3 },
            CurveSpec::BSpline { control: vec![[0.0, 1.0, 2.0]; 4], degree: 3 },
        ];
        for s in specs {
            let j = serde_json::to_string(&s).unwrap();
            assert_eq!(serde_json::from_str::<CurveSpec>(&j).unwrap(), s);
        }
        let d: CurveSpec = serde_json::from_str(r#"{"name":"ellipse"}"#).unwrap();
        assert_eq!(d, CurveSpec::Ellipse { a: 2.0, b: 1.0 });
        assert!(serde_json::from_str::<CurveSpec>(r#"{"name":"enneper","r":1.1,"x":1}"#).is_err());
    }

    #[test]
    fn scaling_a_circle_is_exact() {
        let c = circle(1.0).unwrap().scaled(2.0).unwrap();
        assert!(close(c.eval(0.3), [2.0 * 0.3f64.cos(), 2.0 * 0.3f64.sin(), 0.0], 1e-15));
    }
}
