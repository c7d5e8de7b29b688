//! File formats, parallel sampling and the command-line interface around
//! [`proxfield_core`].
//!
//! - [`scene`]: JSON scene documents.
//! - [`export`]: CSV, Wavefront OBJ, VTK legacy and PGM encoders.
//! - [`sampling`]: grid sampling across threads.
//! - [`cli`]: the `proxfield` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod error;
pub mod export;
pub mod sampling;
pub mod scene;

pub use error::{Error, Result};
pub use scene::{parse_scene, serialize_scene, SceneDocument};
