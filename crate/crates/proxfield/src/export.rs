//! Deterministic text and raster encodings of profiles, slices, grids and meshes.
//!
//! Encoders return bytes; [`write_atomic`] puts them on disk through a
//! temporary file in the destination directory so a failed command never
//! leaves a partial file behind.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use proxfield_core::{Field2D, Field3D, TriMesh};

use crate::error::{Error, Result};

/// Nine significant digits, '.' as decimal separator. Fixed notation for
/// magnitudes in [1e-4, 1e9), scientific otherwise.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0.00000000".to_string();
    }
    let a = v.abs();
    if !(1e-4..1e9).contains(&a) {
        return format!("{v:.8e}");
    }
    let exp = a.log10().floor() as i32;
    let decimals = (8 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding may carry into the next decade, e.g. 9.9999999996 -> 10.00000000.
    let rounded: f64 = s.parse().unwrap_or(v);
    if rounded.abs() >= 10f64.powi(exp + 1) && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{v:.decimals$}");
    }
    s
}

fn nonempty(len: usize, what: &str) -> Result<()> {
    if len == 0 {
        Err(Error::Argument(format!("{what} is empty")))
    } else {
        Ok(())
    }
}

/// `z,f` CSV of a height profile.
pub fn profile_csv(series: &[(f64, f64)]) -> Result<Vec<u8>> {
    nonempty(series.len(), "profile")?;
    let mut out = String::with_capacity(24 * (series.len() + 1));
    out.push_str("z,f\n");
    for &(z, f) in series {
        let _ = writeln!(out, "{},{}", format_sig9(z), format_sig9(f));
    }
    Ok(out.into_bytes())
}

/// `a,b,value` CSV of a slice, named after the plane axes; first axis fastest.
pub fn slice_csv(field: &Field2D) -> Result<Vec<u8>> {
    nonempty(field.values().len(), "slice")?;
    let [a, b] = field.axis_names();
    let [na, nb] = field.dims();
    let mut out = String::with_capacity(36 * (na * nb + 1));
    let _ = writeln!(out, "{a},{b},value");
    for ib in 0..nb {
        for ia in 0..na {
            let [ca, cb] = field.coords(ia, ib);
            let _ = writeln!(
                out,
                "{},{},{}",
                format_sig9(ca),
                format_sig9(cb),
                format_sig9(field.get(ia, ib))
            );
        }
    }
    Ok(out.into_bytes())
}

/// Wavefront OBJ: comment header, `v` lines with six decimals, then 1-based `f` lines.
pub fn mesh_obj(mesh: &TriMesh) -> Vec<u8> {
    let mut out =
        String::with_capacity(40 * (mesh.vertices().len() + mesh.triangles().len()) + 128);
    let _ = writeln!(
        out,
        "# proxfield isosurface level {} vertices {} triangles {}",
        format_sig9(mesh.level()),
        mesh.vertices().len(),
        mesh.triangles().len()
    );
    for v in mesh.vertices() {
        let _ = writeln!(out, "v {:.6} {:.6} {:.6}", v[0], v[1], v[2]);
    }
    for t in mesh.triangles() {
        let _ = writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    out.into_bytes()
}

/// Vertices and 0-based triangles read back from OBJ text.
pub type ObjData = (Vec<[f64; 3]>, Vec<[u32; 3]>);

/// Parses an OBJ produced by [`mesh_obj`]. Only `v` and triangular `f`
/// records are understood.
pub fn read_obj(text: &str) -> Result<ObjData> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let bad = || Error::Argument(format!("line {}: malformed record `{line}`", n + 1));
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut v = [0.0; 3];
                for c in &mut v {
                    *c = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                }
                vertices.push(v);
            }
            Some("f") => {
                let mut f = [0u32; 3];
                for c in &mut f {
                    let idx: u32 = parts
                        .next()
                        .and_then(|s| s.split('/').next())
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(bad)?;
                    *c = idx.checked_sub(1).ok_or_else(bad)?;
                }
                if parts.next().is_some() {
                    return Err(bad());
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

/// VTK legacy ASCII structured points with one scalar array `discomfort`.
pub fn grid_vtk(field: &Field3D) -> Vec<u8> {
    let spec = field.spec();
    let [nx, ny, nz] = spec.dims();
    let min = spec.min();
    let r = format_sig9(spec.resolution());
    let mut out = String::with_capacity(12 * field.values().len() + 256);
    out.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(
        out,
        "proxfield discomfort scene {:016x}",
        field.provenance()
    );
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(out, "DIMENSIONS {nx} {ny} {nz}");
    let _ = writeln!(
        out,
        "ORIGIN {} {} {}",
        format_sig9(min[0]),
        format_sig9(min[1]),
        format_sig9(min[2])
    );
    let _ = writeln!(out, "SPACING {r} {r} {r}");
    let _ = writeln!(out, "POINT_DATA {}", field.values().len());
    out.push_str("SCALARS discomfort double 1\nLOOKUP_TABLE default\n");
    for v in field.values() {
        out.push_str(&format_sig9(*v));
        out.push('\n');
    }
    out.into_bytes()
}

/// 16-bit binary PGM (P5). `[min, max]` maps linearly onto `[0, 65535]`;
/// row `r` holds second-axis index `r`, so the second axis grows downward.
pub fn heatmap_pgm(field: &Field2D, min: f64, max: f64) -> Result<Vec<u8>> {
    if !(min < max) || !min.is_finite() || !max.is_finite() {
        return Err(Error::Argument(format!(
            "heatmap range needs min < max, got [{min}, {max}]"
        )));
    }
    let [w, h] = field.dims();
    let mut out = format!("P5\n{w} {h}\n65535\n").into_bytes();
    out.reserve(2 * w * h);
    let scale = 65535.0 / (max - min);
    for ib in 0..h {
        for ia in 0..w {
            let level = ((field.get(ia, ib) - min) * scale)
                .round()
                .clamp(0.0, 65535.0) as u16;
            out.extend_from_slice(&level.to_be_bytes());
        }
    }
    Ok(out)
}

/// Writes `bytes` to `path` via a sibling temporary file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.flush().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
