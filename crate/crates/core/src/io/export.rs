//! CSV grids and Wavefront OBJ meshes.

use std::io::Write;

use num_complex::Complex64;

use crate::error::Result;
use crate::io::config::GridField;
use crate::surface::{polar_grid, ApproximateSurface, Mesh};

/// 17 significant digits, or `nan` / `inf` / `-inf`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// One grid sample `(rho, theta, value)`.
pub type GridRow = (f64, f64, f64);

/// Samples a scalar field on the polar grid of radius `max_radius`.
///
/// Mean curvature at a degenerate point is reported as `NaN`.
pub fn sample_field(
    surface: &ApproximateSurface,
    field: GridField,
    n_r: usize,
    n_theta: usize,
    max_radius: f64,
) -> Vec<GridRow> {
    polar_grid(n_r, n_theta, max_radius)
        .into_iter()
        .map(|(r, t)| {
            let z = Complex64::from_polar(r, t);
            let v = match field {
                GridField::Dilatation => surface.dilatation(z).norm(),
                GridField::MeanCurvature => surface.mean_curvature(z).unwrap_or(f64::NAN),
            };
            (r, t, v)
        })
        .collect()
}

pub fn write_grid_csv<W: Write>(mut w: W, rows: &[GridRow]) -> Result<()> {
    writeln!(w, "rho,theta,value")?;
    for (r, t, v) in rows {
        writeln!(w, "{},{},{}", format_float(*r), format_float(*t), format_float(*v))?;
    }
    Ok(())
}

/// Vertex positions and faces only; scalars go to [`write_mesh_scalars_csv`].
pub fn write_obj<W: Write>(mut w: W, mesh: &Mesh) -> Result<()> {
    writeln!(w, "# polar tensor mesh: {} vertices, {} faces", mesh.vertices.len(), mesh.faces.len())?;
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]))?;
    }
    for f in &mesh.faces {
        write!(w, "f")?;
        for i in f {
            write!(w, " {}", i + 1)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Per-vertex sidecar with header `vertex,rho,theta,dilatation,mean_curvature`.
pub fn write_mesh_scalars_csv<W: Write>(mut w: W, mesh: &Mesh) -> Result<()> {
    writeln!(w, "vertex,rho,theta,dilatation,mean_curvature")?;
    for (i, (&(r, t), (d, h))) in mesh.params.iter().zip(mesh.dilatation.iter().zip(&mesh.curvature)).enumerate() {
        writeln!(w, "{},{},{},{},{}", i + 1, format_float(r), format_float(t), format_float(*d), format_float(*h))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn grid_header_is_fixed() {
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &[(0.0, 0.0, f64::NAN)]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("rho,theta,value\n"));
        assert!(s.trim_end().ends_with(",nan"));
    }
}
