//! Regular lattices over the field: 3D grids and axis-aligned 2D slices.
//!
//! Values are sampled at cell corners. Storage is x-fastest, then y, then z,
//! the same order as VTK structured points.

use core::ops::Range;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Scene;
use crate::fuzzy::sample_count;

/// Axis-aligned box plus a uniform spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    min: [f64; 3],
    max: [f64; 3],
    resolution: f64,
    dims: [usize; 3],
}

impl GridSpec {
    pub fn new(min: [f64; 3], max: [f64; 3], resolution: f64) -> Result<Self> {
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(Error::invalid(
                "resolution",
                format!("must be positive, got {resolution}"),
            ));
        }
        let mut dims = [0; 3];
        for axis in 0..3 {
            if !(min[axis] < max[axis]) || !min[axis].is_finite() || !max[axis].is_finite() {
                return Err(Error::invalid(
                    "bounds",
                    format!(
                        "axis {}: min {} must lie below max {}",
                        AXIS_NAMES[axis], min[axis], max[axis]
                    ),
                ));
            }
            dims[axis] = sample_count(max[axis] - min[axis], resolution);
            if dims[axis] < 2 {
                return Err(Error::invalid(
                    "resolution",
                    format!(
                        "axis {} spans fewer than two samples at {resolution}",
                        AXIS_NAMES[axis]
                    ),
                ));
            }
        }
        Ok(GridSpec {
            min,
            max,
            resolution,
            dims,
        })
    }

    /// From `[[xmin, xmax], [ymin, ymax], [zmin, zmax]]`.
    pub fn from_bounds(bounds: [[f64; 2]; 3], resolution: f64) -> Result<Self> {
        Self::new(
            [bounds[0][0], bounds[1][0], bounds[2][0]],
            [bounds[0][1], bounds[1][1], bounds[2][1]],
            resolution,
        )
    }

    pub fn min(&self) -> [f64; 3] {
        self.min
    }

    pub fn max(&self) -> [f64; 3] {
        self.max
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Sample counts per axis.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let r = self.resolution;
        [
            self.min[0] + i as f64 * r,
            self.min[1] + j as f64 * r,
            self.min[2] + k as f64 * r,
        ]
    }

    /// Last sampled coordinate per axis (≤ max).
    pub fn extent(&self) -> [f64; 3] {
        let d = self.dims;
        self.point(d[0] - 1, d[1] - 1, d[2] - 1)
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|a| p[a] >= self.min[a] && p[a] <= self.max[a])
    }
}

pub const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

/// Scalar samples on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field3D {
    spec: GridSpec,
    values: Vec<f64>,
    provenance: u64,
}

impl Field3D {
    /// Wraps precomputed samples; every value must lie in [0, 1].
    pub fn from_values(spec: GridSpec, values: Vec<f64>, provenance: u64) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::invalid(
                "values",
                format!("expected {} samples, got {}", spec.len(), values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(
                "values",
                format!("sample {v} outside [0, 1]"),
            ));
        }
        Ok(Field3D {
            spec,
            values,
            provenance,
        })
    }

    /// Samples an arbitrary function at every lattice point.
    pub fn from_fn<F: Fn([f64; 3]) -> f64>(spec: GridSpec, f: F) -> Result<Self> {
        let [nx, ny, nz] = spec.dims();
        let mut values = Vec::with_capacity(spec.len());
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    values.push(f(spec.point(i, j, k)));
                }
            }
        }
        Self::from_values(spec, values, 0)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fingerprint of the scene the samples came from (0 for synthetic fields).
    pub fn provenance(&self) -> u64 {
        self.provenance
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.spec.index(i, j, k)]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

fn check_floor(spec: &GridSpec) -> Result<()> {
    if spec.min[2] < 0.0 {
        return Err(Error::invalid(
            "bounds",
            format!("z-min must be >= 0, got {}", spec.min[2]),
        ));
    }
    Ok(())
}

/// Samples the z-layers `layers` of `spec`; concatenating consecutive layer
/// ranges reproduces [`sample_grid`] exactly.
pub fn sample_grid_layers(
    scene: &Scene,
    spec: &GridSpec,
    layers: Range<usize>,
) -> Result<Vec<f64>> {
    check_floor(spec)?;
    let [nx, ny, nz] = spec.dims();
    if layers.end > nz || layers.start > layers.end {
        return Err(Error::invalid(
            "layers",
            format!("range {}..{} outside 0..{nz}", layers.start, layers.end),
        ));
    }
    let mut values = Vec::with_capacity(nx * ny * layers.len());
    for k in layers {
        for j in 0..ny {
            for i in 0..nx {
                values.push(scene.eval_unchecked(spec.point(i, j, k)));
            }
        }
    }
    Ok(values)
}

/// Scene discomfort at every lattice point of `spec`.
pub fn sample_grid(scene: &Scene, spec: &GridSpec) -> Result<Field3D> {
    let values = sample_grid_layers(scene, spec, 0..spec.dims()[2])?;
    Ok(Field3D {
        spec: *spec,
        values,
        provenance: scene.fingerprint(),
    })
}

/// Axis-aligned sampling plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plane {
    /// Vertical plane `y = at`; axes (x, z).
    Xz { y: f64 },
    /// Vertical plane `x = at`; axes (y, z).
    Yz { x: f64 },
    /// Horizontal plane `z = at`; axes (x, y).
    Xy { z: f64 },
}

impl Plane {
    pub fn axis_names(&self) -> [&'static str; 2] {
        match self {
            Plane::Xz { .. } => ["x", "z"],
            Plane::Yz { .. } => ["y", "z"],
            Plane::Xy { .. } => ["x", "y"],
        }
    }

    fn point(&self, a: f64, b: f64) -> [f64; 3] {
        match *self {
            Plane::Xz { y } => [a, y, b],
            Plane::Yz { x } => [x, a, b],
            Plane::Xy { z } => [a, b, z],
        }
    }
}

/// In-plane rectangle and spacing of a slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceWindow {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub resolution: f64,
}

/// Samples on a plane; `a` is the first plane axis and varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    plane: Plane,
    origin: [f64; 2],
    resolution: f64,
    dims: [usize; 2],
    values: Vec<f64>,
}

impl Field2D {
    /// Wraps precomputed samples (first axis fastest); every value must lie in [0, 1].
    pub fn from_values(
        plane: Plane,
        origin: [f64; 2],
        resolution: f64,
        dims: [usize; 2],
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != dims[0] * dims[1] || dims[0] == 0 || dims[1] == 0 {
            return Err(Error::invalid(
                "values",
                format!(
                    "expected {}x{} samples, got {}",
                    dims[0],
                    dims[1],
                    values.len()
                ),
            ));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(
                "values",
                format!("sample {v} outside [0, 1]"),
            ));
        }
        Ok(Field2D {
            plane,
            origin,
            resolution,
            dims,
            values,
        })
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    pub fn axis_names(&self) -> [&'static str; 2] {
        self.plane.axis_names()
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// In-plane coordinates of sample `(ia, ib)`.
    pub fn coords(&self, ia: usize, ib: usize) -> [f64; 2] {
        [
            self.origin[0] + ia as f64 * self.resolution,
            self.origin[1] + ib as f64 * self.resolution,
        ]
    }

    #[inline]
    pub fn get(&self, ia: usize, ib: usize) -> f64 {
        self.values[ia + self.dims[0] * ib]
    }
}

/// Scene discomfort on an axis-aligned plane.
pub fn sample_slice(scene: &Scene, plane: Plane, window: &SliceWindow) -> Result<Field2D> {
    let res = window.resolution;
    if !(res > 0.0) || !res.is_finite() {
        return Err(Error::invalid(
            "resolution",
            format!("must be positive, got {res}"),
        ));
    }
    let mut dims = [0; 2];
    for (n, (name, span)) in dims.iter_mut().zip([("a", window.a), ("b", window.b)]) {
        if !(span[0] < span[1]) || !span[0].is_finite() || !span[1].is_finite() {
            return Err(Error::invalid(
                "window",
                format!("{name}: min {} must lie below max {}", span[0], span[1]),
            ));
        }
        *n = sample_count(span[1] - span[0], res);
    }
    let lowest_z = match plane {
        Plane::Xy { z } => z,
        _ => window.b[0],
    };
    if !(lowest_z >= 0.0) {
        return Err(Error::invalid(
            "window",
            format!("slice reaches below the ground (z = {lowest_z})"),
        ));
    }
    let mut values = Vec::with_capacity(dims[0] * dims[1]);
    for ib in 0..dims[1] {
        let b = window.b[0] + ib as f64 * res;
        for ia in 0..dims[0] {
            let a = window.a[0] + ia as f64 * res;
            values.push(scene.eval_unchecked(plane.point(a, b)));
        }
    }
    Ok(Field2D {
        plane,
        origin: [window.a[0], window.b[0]],
        resolution: res,
        dims,
        values,
    })
}
