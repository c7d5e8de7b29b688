//! Discomfort-weighted shortest paths on a 26-connected lattice.
//!
//! Edge cost is `length · (1 + λ·S(midpoint))`, so straight-line distance
//! stays an admissible, consistent heuristic for A*. An optional cap τ
//! removes every node whose discomfort exceeds it.

use core::cmp::Ordering;

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Scene;
use crate::grid::GridSpec;

#[derive(Debug, Clone)]
pub struct PlanRequest<'a> {
    pub scene: &'a Scene,
    pub grid: GridSpec,
    pub start: [f64; 3],
    pub goal: [f64; 3],
    /// Discomfort weight λ ≥ 0.
    pub lambda: f64,
    /// Hard cap τ ∈ (0, 1] on node discomfort.
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMetrics {
    pub length: f64,
    /// Largest discomfort over waypoints and edge midpoints.
    pub max_discomfort: f64,
    /// Σ edge length × midpoint discomfort.
    pub integrated_discomfort: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub waypoints: Vec<[f64; 3]>,
    pub resolution: f64,
    pub metrics: PathMetrics,
    /// Objective value `length + λ·integrated_discomfort`.
    pub cost: f64,
}

/// Lattice offsets of the 26 neighbours, in lexicographic order.
const NEIGHBORS: [[i32; 3]; 26] = {
    let mut out = [[0; 3]; 26];
    let mut n = 0;
    let mut d = 0;
    while d < 27 {
        let o = [d / 9 - 1, (d / 3) % 3 - 1, d % 3 - 1];
        if !(o[0] == 0 && o[1] == 0 && o[2] == 0) {
            out[n] = o;
            n += 1;
        }
        d += 1;
    }
    out
};

#[derive(Debug, Clone, Copy)]
struct Open {
    f: f64,
    h: f64,
    node: usize,
}

impl PartialEq for Open {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // Reversed: BinaryHeap pops the smallest (f, h, node).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.h.total_cmp(&self.h))
            .then_with(|| other.node.cmp(&self.node))
    }
}

struct Lattice {
    spec: GridSpec,
    dims: [usize; 3],
}

impl Lattice {
    /// Lexicographic (i, j, k) index.
    fn id(&self, c: [usize; 3]) -> usize {
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    fn coords(&self, id: usize) -> [usize; 3] {
        let k = id % self.dims[2];
        let rest = id / self.dims[2];
        [rest / self.dims[1], rest % self.dims[1], k]
    }

    fn point(&self, id: usize) -> [f64; 3] {
        let c = self.coords(id);
        self.spec.point(c[0], c[1], c[2])
    }

    fn snap(&self, p: [f64; 3], what: &str) -> Result<usize> {
        if !p.iter().all(|v| v.is_finite()) || !self.spec.contains(p) {
            return Err(Error::infeasible(format!(
                "{what} ({}, {}, {}) lies outside the planning bounds",
                p[0], p[1], p[2]
            )));
        }
        if p[2] < 0.0 {
            return Err(Error::infeasible(format!("{what} lies below the ground")));
        }
        let min = self.spec.min();
        let res = self.spec.resolution();
        let mut c = [0; 3];
        for a in 0..3 {
            let n = libm::round((p[a] - min[a]) / res) as usize;
            c[a] = n.min(self.dims[a] - 1);
        }
        Ok(self.id(c))
    }

    fn neighbor(&self, id: usize, o: [i32; 3]) -> Option<usize> {
        let c = self.coords(id);
        let mut n = [0; 3];
        for a in 0..3 {
            let v = c[a] as i64 + o[a] as i64;
            if v < 0 || v >= self.dims[a] as i64 {
                return None;
            }
            n[a] = v as usize;
        }
        Some(self.id(n))
    }
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    libm::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])
}

fn midpoint(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        0.5 * (a[0] + b[0]),
        0.5 * (a[1] + b[1]),
        0.5 * (a[2] + b[2]),
    ]
}

fn validate(req: &PlanRequest<'_>) -> Result<()> {
    if !(req.lambda >= 0.0) || !req.lambda.is_finite() {
        return Err(Error::invalid(
            "lambda",
            format!("must be a finite value >= 0, got {}", req.lambda),
        ));
    }
    if let Some(tau) = req.tau {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::invalid(
                "tau",
                format!("must lie in (0, 1], got {tau}"),
            ));
        }
    }
    if req.grid.min()[2] < 0.0 {
        return Err(Error::invalid(
            "bounds",
            format!("z-min must be >= 0, got {}", req.grid.min()[2]),
        ));
    }
    Ok(())
}

/// Optimal lattice path from `start` to `goal` (both snapped to the nearest node).
pub fn plan_path(req: &PlanRequest<'_>) -> Result<Path> {
    validate(req)?;
    let lattice = Lattice {
        spec: req.grid,
        dims: req.grid.dims(),
    };
    let start = lattice.snap(req.start, "start")?;
    let goal = lattice.snap(req.goal, "goal")?;
    if start == goal {
        return Err(Error::invalid(
            "goal",
            "start and goal snap to the same lattice node",
        ));
    }
    let n = lattice.dims.iter().product::<usize>();
    let scene = req.scene;

    // NaN marks a node whose discomfort has not been evaluated yet.
    let mut node_s = vec![f64::NAN; if req.tau.is_some() { n } else { 0 }];
    let mut blocked = |id: usize| -> bool {
        match req.tau {
            None => false,
            Some(tau) => {
                if node_s[id].is_nan() {
                    node_s[id] = scene.eval_unchecked(lattice.point(id));
                }
                node_s[id] > tau
            }
        }
    };
    if blocked(start) {
        return Err(Error::infeasible("start exceeds the discomfort cap"));
    }
    if blocked(goal) {
        return Err(Error::infeasible("goal exceeds the discomfort cap"));
    }

    let goal_p = lattice.point(goal);
    let mut g = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    g[start] = 0.0;
    let h0 = distance(lattice.point(start), goal_p);
    open.push(Open {
        f: h0,
        h: h0,
        node: start,
    });

    while let Some(Open { node, .. }) = open.pop() {
        if closed[node] {
            continue;
        }
        closed[node] = true;
        if node == goal {
            break;
        }
        let p = lattice.point(node);
        for o in NEIGHBORS {
            let Some(next) = lattice.neighbor(node, o) else {
                continue;
            };
            if closed[next] || blocked(next) {
                continue;
            }
            let q = lattice.point(next);
            let len = distance(p, q);
            let weight = if req.lambda == 0.0 {
                1.0
            } else {
                1.0 + req.lambda * scene.eval_unchecked(midpoint(p, q))
            };
            let cand = g[node] + len * weight;
            if cand < g[next] {
                g[next] = cand;
                parent[next] = node;
                let h = distance(q, goal_p);
                open.push(Open {
                    f: cand + h,
                    h,
                    node: next,
                });
            }
        }
    }

    if !closed[goal] {
        return Err(Error::infeasible("no lattice path connects start and goal"));
    }
    let mut ids = vec![goal];
    while let Some(&last) = ids.last() {
        if last == start {
            break;
        }
        ids.push(parent[last]);
    }
    ids.reverse();
    let waypoints: Vec<[f64; 3]> = ids.into_iter().map(|id| lattice.point(id)).collect();
    let resolution = req.grid.resolution();
    let metrics = path_metrics(&waypoints, resolution, scene)?;
    Ok(Path {
        waypoints,
        resolution,
        metrics,
        cost: g[goal],
    })
}

/// Recomputes length and discomfort metrics of a lattice path from scratch.
pub fn path_metrics(waypoints: &[[f64; 3]], resolution: f64, scene: &Scene) -> Result<PathMetrics> {
    if waypoints.is_empty() {
        return Err(Error::invalid("waypoints", "path is empty"));
    }
    let tol = 1e-9 * resolution;
    let mut metrics = PathMetrics {
        length: 0.0,
        max_discomfort: scene_at(scene, waypoints[0])?,
        integrated_discomfort: 0.0,
    };
    for (n, pair) in waypoints.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        let mut moved = false;
        for axis in 0..3 {
            let d = libm::fabs(b[axis] - a[axis]);
            if d > tol {
                if libm::fabs(d - resolution) > tol {
                    return Err(Error::invalid(
                        "waypoints",
                        format!("waypoints {n} and {} are not lattice neighbours", n + 1),
                    ));
                }
                moved = true;
            }
        }
        if !moved {
            return Err(Error::invalid(
                "waypoints",
                format!("waypoints {n} and {} coincide", n + 1),
            ));
        }
        let len = distance(a, b);
        let mid = scene_at(scene, midpoint(a, b))?;
        metrics.length += len;
        metrics.integrated_discomfort += len * mid;
        metrics.max_discomfort = metrics.max_discomfort.max(mid).max(scene_at(scene, b)?);
    }
    Ok(metrics)
}

fn scene_at(scene: &Scene, p: [f64; 3]) -> Result<f64> {
    crate::field::scene_discomfort(scene, p)
}
