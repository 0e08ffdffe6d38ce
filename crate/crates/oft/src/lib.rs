//! Selective enhancement of curve-like structures in noisy 2D and 3D images.
//!
//! The core idea: at every voxel, integrate the image along short line
//! segments in many orientations. Voxels that sit on a curve respond strongly
//! along the curve's tangent and weakly elsewhere, while blob-like clutter
//! responds equally in all orientations. A second integration pass rewards
//! voxels whose neighbourhood orientations *agree*, which suppresses clutter
//! further. Six per-voxel measures derived from the two passes are multiplied
//! into a single enhanced volume.
//!
//! Module map:
//! - [`volume`]: dense scalar/vector grids, interpolation, file formats
//! - [`directions`]: uniform orientation sets on the circle / hemisphere
//! - [`integrals`]: line and alignment integrals, orientation field
//! - [`measures`]: per-voxel statistics over the orientation profiles
//! - [`transform`]: measure combination and the end-to-end pipeline
//! - [`postprocess`]: thresholding, slice normalization, skeleton cleanup
//! - [`synth`]: reproducible ground-truthed test volumes
//! - [`reference`]: slow transliterated implementations used to validate the
//!   production code paths

pub mod directions;
pub mod error;
pub mod integrals;
pub mod measures;
pub mod postprocess;
pub mod reference;
pub mod synth;
pub mod transform;
pub mod volume;

pub use error::{Error, Result};
