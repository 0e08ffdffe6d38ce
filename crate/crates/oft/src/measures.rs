//! Per-voxel statistics over the orientation profiles.
//!
//! For every voxel, the line integral and the alignment integral each yield a
//! profile of `k` values (one per orientation). Three statistics are taken of
//! each profile — maximum, mean, and mean absolute deviation about the mean —
//! giving six measures per voxel. Curve voxels score high on all of them:
//! they respond strongly along the tangent (max), keep some response in every
//! orientation thanks to neighbours (mean), and have strongly anisotropic
//! profiles (deviation).

use crate::directions::DirectionSet;
use crate::error::Result;
use crate::integrals::{alignment_sweep, line_sweep, IntegralParams, OrientationField};
use crate::volume::Volume;

/// The six per-voxel measures. `line_*` statistics come from the
/// line-integral profile, `align_*` from the alignment-integral profile.
#[derive(Clone, Debug)]
pub struct MeasureStack {
    pub line_max: Volume,
    pub align_max: Volume,
    pub line_mean: Volume,
    pub align_mean: Volume,
    pub line_dev: Volume,
    pub align_dev: Volume,
}

impl MeasureStack {
    /// The measures in a fixed presentation order, with short names used for
    /// debug exports.
    pub fn named(&self) -> [(&'static str, &Volume); 6] {
        [
            ("line_max", &self.line_max),
            ("align_max", &self.align_max),
            ("line_mean", &self.line_mean),
            ("align_mean", &self.align_mean),
            ("line_dev", &self.line_dev),
            ("align_dev", &self.align_dev),
        ]
    }
}

/// Computes the line-profile measures (max, mean, deviation) and the
/// orientation field in one pass over the volume.
pub fn line_measures(
    vol: &Volume,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> Result<(Volume, Volume, Volume, OrientationField)> {
    let sweep = line_sweep(vol, dirs, params)?;
    Ok((sweep.max, sweep.mean, sweep.dev, sweep.field))
}

/// Computes the alignment-profile measures (max, mean, deviation) over an
/// orientation field.
pub fn alignment_measures(
    field: &OrientationField,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> Result<(Volume, Volume, Volume)> {
    alignment_sweep(field, dirs, params)
}
