//! Three-dimensional personal-space discomfort field.
//!
//! A person of height `h` at planar pose `(x, y, θ)` induces a discomfort
//! `S(r) ∈ [0, 1]` at every point `r` above the ground. The field combines a
//! fuzzy height model built from body-region pressure limits ([`fuzzy`],
//! [`body`]) with a planar asymmetric Gaussian ([`agf`]) through a normalized
//! geometric mean ([`field`]). On top of that sit lattice sampling
//! ([`grid`]), isosurface extraction ([`mesh`]) and a discomfort-weighted
//! A* planner ([`planner`]).
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod agf;
pub mod body;
mod error;
pub mod field;
pub mod fuzzy;
pub mod grid;
pub mod mesh;
pub mod planner;

pub use agf::{agf_eval, effective_front_sigma, AgfParams, ElongationRule};
pub use body::{
    build_region_table, discomfort_from_mpp, region_anchor_height, Region, RegionOverride,
    RegionOverrides, RegionSpec, RegionTable,
};
pub use error::{Error, Result};
pub use field::{
    normalization_constant, person_discomfort, scene_discomfort, Aggregation, Person, PersonField,
    Scene, SceneOptions,
};
pub use fuzzy::{
    gaussian_mf, max_z_discomfort, s_shaped_mf, z_discomfort, z_profile, FuzzyRule,
    MembershipFunction, TopMembership, ZDiscomfortModel, ZModelOptions,
};
pub use grid::{
    sample_grid, sample_grid_layers, sample_slice, Field2D, Field3D, GridSpec, Plane, SliceWindow,
};
pub use mesh::{
    marching_cubes, marching_cubes_capped, mesh_vertex_residuals, ResidualStats, TriMesh,
};
pub use planner::{path_metrics, plan_path, Path, PathMetrics, PlanRequest};
