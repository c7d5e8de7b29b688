//! Isosurface extraction by marching cubes.
//!
//! Edge crossings are keyed by the lattice edge they sit on, so neighbouring
//! cells share vertices and the output is indexed and deterministic: cells
//! are visited z-outermost, x-innermost and vertices are numbered on first
//! use. Triangles wind counter-clockwise seen from the low-valued side, so
//! normals point out of the `{value >= level}` region.
//!
//! A level set that reaches the box boundary leaves an open rim. The capped
//! variant closes it with polygons on the boundary faces covering the part
//! of each face where the field is at or above the level.

mod tables;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Scene;
use crate::grid::Field3D;
use tables::{CORNER_OFFSETS, EDGE_CORNERS, TRIANGLE_TABLE};

/// Interpolation parameters are kept this far from either end of an edge so
/// that no two crossings of a cell collapse onto a lattice node.
const EDGE_PARAM_MARGIN: f64 = 1e-3;
/// Triangles with a smaller area are dropped as degenerate.
const MIN_TRIANGLE_AREA: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[u32; 3]>,
    level: f64,
    surface_vertices: usize,
}

impl TriMesh {
    pub fn empty(level: f64) -> Self {
        TriMesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
            level,
            surface_vertices: 0,
        }
    }

    /// Validates indices and rejects degenerate triangles.
    pub fn new(vertices: Vec<[f64; 3]>, triangles: Vec<[u32; 3]>, level: f64) -> Result<Self> {
        if !vertices.is_empty() && vertices.len() < 3 {
            return Err(Error::invalid(
                "vertices",
                format!(
                    "a nonempty mesh needs at least 3 vertices, got {}",
                    vertices.len()
                ),
            ));
        }
        for (n, t) in triangles.iter().enumerate() {
            if let Some(&bad) = t.iter().find(|&&i| i as usize >= vertices.len()) {
                return Err(Error::invalid(
                    "triangles",
                    format!("triangle {n} references vertex {bad} of {}", vertices.len()),
                ));
            }
            if triangle_area(&vertices, t) <= MIN_TRIANGLE_AREA {
                return Err(Error::invalid(
                    "triangles",
                    format!("triangle {n} is degenerate"),
                ));
            }
        }
        let surface_vertices = vertices.len();
        Ok(TriMesh {
            vertices,
            triangles,
            level,
            surface_vertices,
        })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Vertices lying on the level set. Cap vertices (lattice nodes on the
    /// box boundary) follow them in `vertices`.
    pub fn surface_vertices(&self) -> &[[f64; 3]] {
        &self.vertices[..self.surface_vertices]
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// `(min, max)` corners of the vertex bounding box.
    pub fn bounding_box(&self) -> Option<([f64; 3], [f64; 3])> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), v| {
            (
                [lo[0].min(v[0]), lo[1].min(v[1]), lo[2].min(v[2])],
                [hi[0].max(v[0]), hi[1].max(v[1]), hi[2].max(v[2])],
            )
        }))
    }

    /// Number of triangles using each undirected edge.
    pub fn edge_valence(&self) -> BTreeMap<(u32, u32), usize> {
        let mut counts = BTreeMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Nonempty and every edge shared by exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        !self.is_empty() && self.edge_valence().values().all(|&n| n == 2)
    }

    /// Every directed edge occurs once and its reverse once: a closed,
    /// consistently wound surface.
    pub fn is_consistently_oriented(&self) -> bool {
        let mut directed = BTreeSet::new();
        for t in &self.triangles {
            for e in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if !directed.insert(e) {
                    return false;
                }
            }
        }
        directed.iter().all(|&(a, b)| directed.contains(&(b, a)))
    }

    /// Volume enclosed by a closed mesh (positive for outward winding).
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i as usize]);
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn triangle_area(vertices: &[[f64; 3]], t: &[u32; 3]) -> f64 {
    let [a, b, c] = t.map(|i| vertices[i as usize]);
    let n = cross(sub(b, a), sub(c, a));
    0.5 * libm::sqrt(dot(n, n))
}

/// Builder shared by the surface and cap passes.
struct MeshBuilder<'a> {
    field: &'a Field3D,
    level: f64,
    vertices: Vec<[f64; 3]>,
    triangles: Vec<[u32; 3]>,
    edge_vertices: BTreeMap<usize, u32>,
    node_vertices: BTreeMap<usize, u32>,
}

impl<'a> MeshBuilder<'a> {
    fn node_index(&self, n: [usize; 3]) -> usize {
        self.field.spec().index(n[0], n[1], n[2])
    }

    /// Vertex on the lattice edge from node `lo` one step along `axis`.
    fn edge_vertex(&mut self, lo: [usize; 3], axis: usize) -> u32 {
        let key = self.node_index(lo) * 3 + axis;
        if let Some(&v) = self.edge_vertices.get(&key) {
            return v;
        }
        let mut hi = lo;
        hi[axis] += 1;
        let spec = self.field.spec();
        let v_lo = self.field.get(lo[0], lo[1], lo[2]);
        let v_hi = self.field.get(hi[0], hi[1], hi[2]);
        let t =
            ((self.level - v_lo) / (v_hi - v_lo)).clamp(EDGE_PARAM_MARGIN, 1.0 - EDGE_PARAM_MARGIN);
        let mut p = spec.point(lo[0], lo[1], lo[2]);
        p[axis] += t * spec.resolution();
        let id = self.vertices.len() as u32;
        self.vertices.push(p);
        self.edge_vertices.insert(key, id);
        id
    }

    fn node_vertex(&mut self, n: [usize; 3]) -> u32 {
        let key = self.node_index(n);
        if let Some(&v) = self.node_vertices.get(&key) {
            return v;
        }
        let id = self.vertices.len() as u32;
        self.vertices
            .push(self.field.spec().point(n[0], n[1], n[2]));
        self.node_vertices.insert(key, id);
        id
    }

    fn push_triangle(&mut self, t: [u32; 3]) {
        if t[0] != t[1]
            && t[1] != t[2]
            && t[0] != t[2]
            && triangle_area(&self.vertices, &t) > MIN_TRIANGLE_AREA
        {
            self.triangles.push(t);
        }
    }

    fn inside(&self, n: [usize; 3]) -> bool {
        !(self.field.get(n[0], n[1], n[2]) < self.level)
    }

    fn march(&mut self) {
        let [nx, ny, nz] = self.field.spec().dims();
        for k in 0..nz - 1 {
            for j in 0..ny - 1 {
                for i in 0..nx - 1 {
                    let mut case = 0usize;
                    for (c, off) in CORNER_OFFSETS.iter().enumerate() {
                        if self.field.get(i + off[0], j + off[1], k + off[2]) < self.level {
                            case |= 1 << c;
                        }
                    }
                    if case == 0 || case == 255 {
                        continue;
                    }
                    let row = &TRIANGLE_TABLE[case];
                    for tri in row.chunks_exact(3).take_while(|t| t[0] >= 0) {
                        let ids = [tri[0], tri[1], tri[2]].map(|e| {
                            let [ca, cb] = EDGE_CORNERS[e as usize];
                            let (oa, ob) = (CORNER_OFFSETS[ca], CORNER_OFFSETS[cb]);
                            let axis = (0..3).find(|&a| oa[a] != ob[a]).unwrap_or(0);
                            let lo = if oa[axis] < ob[axis] { oa } else { ob };
                            self.edge_vertex([i + lo[0], j + lo[1], k + lo[2]], axis)
                        });
                        self.push_triangle(ids);
                    }
                }
            }
        }
    }

    /// Closes the surface against the six faces of the lattice box.
    fn cap(&mut self) {
        let mut surface_edges = BTreeSet::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                surface_edges.insert((a.min(b), a.max(b)));
            }
        }
        let dims = self.field.spec().dims();
        // (normal, u, w) with u × w = normal
        for (normal, u, w) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            for max_side in [false, true] {
                let layer = if max_side { dims[normal] - 1 } else { 0 };
                for iw in 0..dims[w] - 1 {
                    for iu in 0..dims[u] - 1 {
                        self.cap_cell(normal, u, w, layer, iu, iw, max_side, &surface_edges);
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn cap_cell(
        &mut self,
        normal: usize,
        u: usize,
        w: usize,
        layer: usize,
        iu: usize,
        iw: usize,
        outward_positive: bool,
        surface_edges: &BTreeSet<(u32, u32)>,
    ) {
        let node = |du: usize, dw: usize| {
            let mut n = [0; 3];
            n[normal] = layer;
            n[u] = iu + du;
            n[w] = iw + dw;
            n
        };
        // Counter-clockwise seen from +normal.
        let corners = [node(0, 0), node(1, 0), node(1, 1), node(0, 1)];
        let inside = corners.map(|c| self.inside(c));
        if inside.iter().all(|&x| !x) {
            return;
        }
        // Side s runs from corner s to corner s+1; its lattice edge starts at
        // the lower of the two nodes.
        let sides = [
            (corners[0], u),
            (corners[1], w),
            (corners[3], u),
            (corners[0], w),
        ];
        let mut crossing = [None; 4];
        for s in 0..4 {
            if inside[s] != inside[(s + 1) % 4] {
                crossing[s] = Some(self.edge_vertex(sides[s].0, sides[s].1));
            }
        }
        let mut polygons: Vec<Vec<u32>> = Vec::new();
        let saddle = inside == [true, false, true, false] || inside == [false, true, false, true];
        if saddle {
            let first = if inside[0] { 0 } else { 1 };
            // Inside corner `first` is cut off alone if the surface joins the
            // crossings on its two sides.
            let before = crossing[(first + 3) % 4].unwrap_or(0);
            let after = crossing[first].unwrap_or(0);
            if surface_edges.contains(&(before.min(after), before.max(after))) {
                for c in [first, first + 2] {
                    let corner = self.node_vertex(corners[c]);
                    let (b, a) = (crossing[(c + 3) % 4], crossing[c]);
                    if let (Some(b), Some(a)) = (b, a) {
                        polygons.push(alloc::vec![corner, a, b]);
                    }
                }
            }
        }
        if polygons.is_empty() {
            let mut poly = Vec::with_capacity(8);
            for s in 0..4 {
                if inside[s] {
                    poly.push(self.node_vertex(corners[s]));
                }
                if let Some(v) = crossing[s] {
                    poly.push(v);
                }
            }
            polygons.push(poly);
        }
        for mut poly in polygons {
            if !outward_positive {
                poly.reverse();
            }
            for n in 1..poly.len().saturating_sub(1) {
                self.push_triangle([poly[0], poly[n], poly[n + 1]]);
            }
        }
    }
}

fn extract(field: &Field3D, level: f64, capped: bool) -> Result<TriMesh> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(
            "level",
            format!("must lie in (0, 1), got {level}"),
        ));
    }
    let mut b = MeshBuilder {
        field,
        level,
        vertices: Vec::new(),
        triangles: Vec::new(),
        edge_vertices: BTreeMap::new(),
        node_vertices: BTreeMap::new(),
    };
    b.march();
    let mut surface_vertices = b.vertices.len();
    if capped && !b.triangles.is_empty() {
        b.cap();
        // Rim crossings that only the cap touches are still on the level set;
        // keep surface vertices ahead of lattice-node cap vertices.
        surface_vertices =
            reorder_cap_vertices(&mut b.vertices, &mut b.triangles, &b.node_vertices);
    }
    let mut mesh = TriMesh {
        vertices: b.vertices,
        triangles: b.triangles,
        level,
        surface_vertices,
    };
    if mesh.triangles.is_empty() {
        mesh = TriMesh::empty(level);
    }
    Ok(mesh)
}

/// Moves lattice-node vertices to the end, preserving relative order.
fn reorder_cap_vertices(
    vertices: &mut Vec<[f64; 3]>,
    triangles: &mut [[u32; 3]],
    node_vertices: &BTreeMap<usize, u32>,
) -> usize {
    let mut is_node = alloc::vec![false; vertices.len()];
    for &v in node_vertices.values() {
        is_node[v as usize] = true;
    }
    let mut remap = alloc::vec![0u32; vertices.len()];
    let mut reordered = Vec::with_capacity(vertices.len());
    for pass_nodes in [false, true] {
        for (old, v) in vertices.iter().enumerate() {
            if is_node[old] == pass_nodes {
                remap[old] = reordered.len() as u32;
                reordered.push(*v);
            }
        }
    }
    let surface = is_node.iter().filter(|&&n| !n).count();
    *vertices = reordered;
    for t in triangles.iter_mut() {
        *t = t.map(|i| remap[i as usize]);
    }
    surface
}

/// Triangulates `{field = level}`. Open where the level set meets the box.
pub fn marching_cubes(field: &Field3D, level: f64) -> Result<TriMesh> {
    extract(field, level, false)
}

/// Like [`marching_cubes`] but closes the surface with caps on the box
/// faces, so the result bounds `{field >= level} ∩ box`.
pub fn marching_cubes_capped(field: &Field3D, level: f64) -> Result<TriMesh> {
    extract(field, level, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualStats {
    pub max: f64,
    pub mean_abs: f64,
    pub count: usize,
}

/// `|S − level|` over the mesh's level-set vertices, re-evaluated on `scene`.
pub fn mesh_vertex_residuals(mesh: &TriMesh, scene: &Scene, level: f64) -> ResidualStats {
    let vs = mesh.surface_vertices();
    if vs.is_empty() {
        return ResidualStats::default();
    }
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for v in vs {
        let r = libm::fabs(scene.eval_unchecked([v[0], v[1], v[2].max(0.0)]) - level);
        max = max.max(r);
        sum += r;
    }
    ResidualStats {
        max,
        mean_abs: sum / vs.len() as f64,
        count: vs.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn ball(res: f64, half: f64) -> Field3D {
        let spec = GridSpec::new([-half; 3], [half; 3], res).unwrap();
        Field3D::from_fn(spec, |p| {
            libm::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]))
        })
        .unwrap()
    }

    #[test]
    fn constant_field_is_empty() {
        let spec = GridSpec::new([0.0; 3], [1.0; 3], 0.25).unwrap();
        let f = Field3D::from_fn(spec, |_| 0.0).unwrap();
        assert!(marching_cubes(&f, 0.5).unwrap().is_empty());
        assert!(marching_cubes_capped(&f, 0.5).unwrap().is_empty());
        assert!(marching_cubes(&f, 0.0).is_err());
        assert!(marching_cubes(&f, 1.0).is_err());
    }

    #[test]
    fn ball_level_set_radius() {
        let res = 0.1;
        let mesh = marching_cubes(&ball(res, 1.5), 0.5).unwrap();
        let r0 = libm::sqrt(core::f64::consts::LN_2);
        assert!(!mesh.is_empty());
        for v in mesh.vertices() {
            let r = libm::sqrt(dot(*v, *v));
            assert!((r - r0).abs() <= 1.5 * res, "{r}");
        }
        assert!(mesh.is_watertight());
        assert!(mesh.is_consistently_oriented());
        let exact = 4.0 / 3.0 * core::f64::consts::PI * r0 * r0 * r0;
        let vol = mesh.signed_volume();
        assert!(
            vol > 0.0 && (vol - exact).abs() < 0.05 * exact,
            "{vol} vs {exact}"
        );
    }

    #[test]
    fn clipped_ball_capped_is_closed() {
        // Box cuts the ball through its middle on two faces.
        let spec = GridSpec::new([0.0, -1.5, 0.0], [1.5, 1.5, 1.5], 0.1).unwrap();
        let f = Field3D::from_fn(spec, |p| {
            libm::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]))
        })
        .unwrap();
        let open = marching_cubes(&f, 0.5).unwrap();
        assert!(!open.is_watertight());
        let closed = marching_cubes_capped(&f, 0.5).unwrap();
        assert!(closed.is_watertight());
        assert!(closed.is_consistently_oriented());
        let r0 = libm::sqrt(core::f64::consts::LN_2);
        let quarter = core::f64::consts::PI * r0 * r0 * r0 / 3.0;
        let vol = closed.signed_volume();
        assert!((vol - quarter).abs() < 0.05 * quarter, "{vol} vs {quarter}");
        assert_eq!(closed.surface_vertices().len(), open.vertices().len());
    }

    #[test]
    fn trimesh_validation() {
        let v = alloc::vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert!(TriMesh::new(v.clone(), alloc::vec![[0, 1, 2]], 0.5).is_ok());
        assert!(TriMesh::new(v.clone(), alloc::vec![[0, 1, 3]], 0.5).is_err());
        assert!(TriMesh::new(v, alloc::vec![[0, 1, 1]], 0.5).is_err());
        assert!(TriMesh::new(alloc::vec![[0.0; 3]; 2], alloc::vec![], 0.5).is_err());
    }

    #[test]
    fn empty_residuals() {
        let s = mesh_vertex_residuals(&TriMesh::empty(0.5), &Scene::empty(), 0.5);
        assert_eq!(s, ResidualStats::default());
    }
}
