//! Multi-threaded grid sampling.
//!
//! z-layers are split into contiguous blocks, one per worker, and the blocks
//! are concatenated in order, so the result is identical to single-threaded
//! sampling for any worker count.

use std::num::NonZeroUsize;
use std::thread;

use proxfield_core::{sample_grid_layers, Field3D, GridSpec, Scene};

use crate::error::Result;

/// Environment variable capping the number of sampling threads.
pub const THREADS_ENV: &str = "PROXFIELD_THREADS";

/// Worker count from `PROXFIELD_THREADS`, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

pub fn sample_grid_parallel(scene: &Scene, spec: &GridSpec, workers: usize) -> Result<Field3D> {
    let nz = spec.dims()[2];
    let workers = workers.clamp(1, nz);
    let chunk = nz.div_ceil(workers);
    let blocks: Vec<_> = (0..nz)
        .step_by(chunk)
        .map(|k| k..(k + chunk).min(nz))
        .collect();
    let parts = thread::scope(|s| {
        let handles: Vec<_> = blocks
            .into_iter()
            .map(|layers| s.spawn(move || sample_grid_layers(scene, spec, layers)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut values = Vec::with_capacity(spec.len());
    for part in parts {
        values.extend(part?);
    }
    Ok(Field3D::from_values(*spec, values, scene.fingerprint())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proxfield_core::{sample_grid, Person, SceneOptions};

    #[test]
    fn worker_count_invariant() {
        let scene = Scene::new(
            vec![
                Person::new([0.0, 0.0], 0.4, 1.75).unwrap(),
                Person::new([0.8, -0.3], 2.0, 1.3).unwrap(),
            ],
            SceneOptions::default(),
        )
        .unwrap();
        let spec = GridSpec::new([-1.0, -1.0, 0.0], [1.5, 1.0, 2.4], 0.1).unwrap();
        let serial = sample_grid(&scene, &spec).unwrap();
        for workers in [1, 2, 3, 7, 64] {
            assert_eq!(
                sample_grid_parallel(&scene, &spec, workers).unwrap(),
                serial
            );
        }
    }
}
