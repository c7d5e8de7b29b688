//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use proxfield_core::{scene_discomfort, GridSpec, Scene};

/// (relative height, sigma, consequent) of the four body regions, straight
/// from the published region table.
const BODY: [(f64, f64, f64); 4] = [
    (0.142, 0.3, 0.500),
    (0.431, 0.3, 0.464),
    (0.630, 0.3, 0.591),
    (0.903, 0.25, 1.0),
];

/// Height discomfort by direct weighted-average summation.
pub fn height_oracle(z: f64, h: f64) -> f64 {
    let mut rules: Vec<(f64, f64, f64)> = BODY.iter().map(|&(rh, s, c)| (rh * h, s, c)).collect();
    rules.push((0.0, 0.1, 1.0));
    rules.push((h + 0.75, 0.3, 0.0));
    let mut num = 0.0;
    let mut den = 0.0;
    for (mu, s, c) in rules {
        let w = (-(z - mu) * (z - mu) / (2.0 * s * s)).exp();
        num += w * c;
        den += w;
    }
    num / den
}

/// Maximum of [`height_oracle`] by exhaustive scan at `step`.
pub fn dense_scan_max(h: f64, step: f64) -> (f64, f64) {
    let n = ((h + 1.5) / step).round() as usize;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let z = i as f64 * step;
        let f = height_oracle(z, h);
        if f > best.1 {
            best = (z, f);
        }
    }
    best
}

/// Planar asymmetric Gaussian evaluated in the person's body frame.
pub fn planar_oracle(center: [f64; 2], theta: f64, speed: f64, x: f64, y: f64) -> f64 {
    let sigma_h = 0.5;
    let sigma_s = sigma_h * 2.0 / 3.0;
    let sigma_r = sigma_h / 2.0;
    let dx = x - center[0];
    let dy = y - center[1];
    let forward = theta.cos() * dx + theta.sin() * dy;
    let lateral = -theta.sin() * dx + theta.cos() * dy;
    let sigma = if forward >= 0.0 {
        (2.0 * speed * sigma_h).max(sigma_h)
    } else {
        sigma_r
    };
    (-(forward * forward / (2.0 * sigma * sigma) + lateral * lateral / (2.0 * sigma_s * sigma_s)))
        .exp()
}

/// Lattice node nearest to `p`.
pub fn snap(spec: &GridSpec, p: [f64; 3]) -> [usize; 3] {
    let min = spec.min();
    let r = spec.resolution();
    let mut out = [0; 3];
    for a in 0..3 {
        out[a] = ((p[a] - min[a]) / r).round() as usize;
    }
    out
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

/// Exhaustive Dijkstra over the full 26-connected lattice. Returns the
/// optimal cost, or `None` when the goal is unreachable.
pub fn dijkstra_cost(
    scene: &Scene,
    spec: &GridSpec,
    start: [f64; 3],
    goal: [f64; 3],
    lambda: f64,
    tau: Option<f64>,
) -> Option<f64> {
    let [nx, ny, nz] = spec.dims();
    let id = |i: usize, j: usize, k: usize| i + nx * (j + ny * k);
    let blocked: Vec<bool> = (0..spec.len())
        .map(|n| {
            let (i, j, k) = (n % nx, (n / nx) % ny, n / (nx * ny));
            tau.is_some_and(|t| scene_discomfort(scene, spec.point(i, j, k)).unwrap() > t)
        })
        .collect();
    let s = snap(spec, start);
    let g = snap(spec, goal);
    let (s, g) = (id(s[0], s[1], s[2]), id(g[0], g[1], g[2]));
    if blocked[s] || blocked[g] {
        return None;
    }
    let mut dist = vec![f64::INFINITY; spec.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Entry(0.0, s));
    while let Some(Entry(d, n)) = heap.pop() {
        if d > dist[n] {
            continue;
        }
        if n == g {
            return Some(d);
        }
        let (i, j, k) = (n % nx, (n / nx) % ny, n / (nx * ny));
        let p = spec.point(i, j, k);
        for di in -1i64..=1 {
            for dj in -1i64..=1 {
                for dk in -1i64..=1 {
                    if di == 0 && dj == 0 && dk == 0 {
                        continue;
                    }
                    let (a, b, c) = (i as i64 + di, j as i64 + dj, k as i64 + dk);
                    if a < 0 || b < 0 || c < 0 || a >= nx as i64 || b >= ny as i64 || c >= nz as i64
                    {
                        continue;
                    }
                    let m = id(a as usize, b as usize, c as usize);
                    if blocked[m] {
                        continue;
                    }
                    let q = spec.point(a as usize, b as usize, c as usize);
                    let len =
                        ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2) + (q[2] - p[2]).powi(2))
                            .sqrt();
                    let mid = [
                        (p[0] + q[0]) / 2.0,
                        (p[1] + q[1]) / 2.0,
                        (p[2] + q[2]) / 2.0,
                    ];
                    let cost = len * (1.0 + lambda * scene_discomfort(scene, mid).unwrap());
                    if d + cost < dist[m] {
                        dist[m] = d + cost;
                        heap.push(Entry(d + cost, m));
                    }
                }
            }
        }
    }
    None
}
