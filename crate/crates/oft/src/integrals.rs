//! Line and alignment integrals over short oriented segments.
//!
//! Both integrals run over a segment of length `epsilon` centered on the
//! evaluation point, discretized with the midpoint rule: `m` equals
//! `ceil(epsilon / step_hint)` samples at spacing `h = epsilon / m`.
//!
//! The samples are generated as symmetric pairs `x + s*b` / `x - s*b`
//! (plus the center point when `m` is odd) and each pair is added as one
//! term. Since IEEE addition commutes, flipping `b` reproduces the exact
//! same floating-point result bit for bit — orientations are axial, so
//! `b` and `-b` must be indistinguishable.

use rayon::prelude::*;

use crate::directions::{norm3, DirectionSet};
use crate::error::{Error, Result};
use crate::volume::{Dims, VectorField, Volume};

/// Segment length and sampling density for the integral operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralParams {
    epsilon: f64,
    step_hint: f64,
}

impl IntegralParams {
    /// Segment length `epsilon` with the default step hint of one voxel.
    pub fn new(epsilon: f64) -> Result<Self> {
        Self::with_step(epsilon, 1.0)
    }

    pub fn with_step(epsilon: f64, step_hint: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if !(step_hint.is_finite() && step_hint > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step_hint must be positive and finite, got {step_hint}"
            )));
        }
        if epsilon / step_hint > 1e6 {
            return Err(Error::InvalidParameter(format!(
                "epsilon / step_hint = {} exceeds 1e6 samples",
                epsilon / step_hint
            )));
        }
        Ok(IntegralParams { epsilon, step_hint })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn step_hint(&self) -> f64 {
        self.step_hint
    }
}

/// Midpoint sample layout for one segment: positive offsets along the
/// direction, mirrored at evaluation time, plus an optional center sample.
#[derive(Clone, Debug)]
pub(crate) struct SampleKernel {
    pub(crate) h: f64,
    pub(crate) center: bool,
    /// Positive sample distances, ascending.
    pub(crate) radii: Vec<f64>,
}

impl SampleKernel {
    pub(crate) fn new(params: &IntegralParams) -> Self {
        let m = (params.epsilon / params.step_hint).ceil() as usize;
        let m = m.max(1);
        let h = params.epsilon / m as f64;
        let center = m % 2 == 1;
        let pairs = m / 2;
        let radii = (0..pairs)
            .map(|i| {
                if center {
                    (i + 1) as f64 * h
                } else {
                    (i as f64 + 0.5) * h
                }
            })
            .collect();
        SampleKernel { h, center, radii }
    }

    /// Offsets `s * b` for the positive half of the segment.
    pub(crate) fn offsets(&self, b: [f64; 3]) -> Vec<[f64; 3]> {
        self.radii
            .iter()
            .map(|&s| [s * b[0], s * b[1], s * b[2]])
            .collect()
    }
}

/// Midpoint sum over symmetric sample pairs. `f` evaluates the integrand.
#[inline]
fn integrate_pairs(
    x: [f64; 3],
    offsets: &[[f64; 3]],
    center: bool,
    h: f64,
    f: impl Fn([f64; 3]) -> f64,
) -> f64 {
    let mut acc = if center { f(x) } else { 0.0 };
    for o in offsets {
        let p = [x[0] + o[0], x[1] + o[1], x[2] + o[2]];
        let q = [x[0] - o[0], x[1] - o[1], x[2] - o[2]];
        acc += f(p) + f(q);
    }
    h * acc
}

fn check_unit(b: [f64; 3]) -> Result<()> {
    let norm = norm3(b);
    if (norm - 1.0).abs() > 1e-4 {
        return Err(Error::NonUnitDirection { norm });
    }
    Ok(())
}

fn check_dims(set: &DirectionSet, dims: Dims) -> Result<()> {
    if set.dim() != dims.dim() {
        return Err(Error::DimensionMismatch {
            set_dim: set.dim(),
            vol_dim: dims.dim(),
        });
    }
    Ok(())
}

/// Integral of the volume along the segment of length `epsilon` centered at
/// `x` with unit orientation `b`. Exact up to rounding on constant volumes
/// (`c * epsilon`), and bit-identical under `b -> -b`.
pub fn line_integral(vol: &Volume, x: [f64; 3], b: [f64; 3], params: &IntegralParams) -> Result<f64> {
    check_unit(b)?;
    let kernel = SampleKernel::new(params);
    let offsets = kernel.offsets(b);
    Ok(integrate_pairs(x, &offsets, kernel.center, kernel.h, |p| {
        vol.sample(p)
    }))
}

/// Per-voxel response of the strongest orientation (`strength`) and the
/// orientation attaining it (`direction`).
///
/// The direction is stored as an axial unit vector from the canonical
/// half-space; ties go to the lowest direction index, and voxels whose whole
/// profile is flat (every direction responds identically, e.g. in constant
/// or empty neighbourhoods) store the zero vector: no orientation exists.
#[derive(Clone, Debug)]
pub struct OrientationField {
    pub strength: Volume,
    pub direction: VectorField,
}

/// Line-sweep outputs: profile max / mean / mean absolute deviation plus the
/// orientation field, all produced in a single pass over the volume.
pub(crate) struct LineSweep {
    pub max: Volume,
    pub mean: Volume,
    pub dev: Volume,
    pub field: OrientationField,
}

/// Max, argmax, mean and mean absolute deviation of one orientation profile.
#[inline]
pub(crate) fn profile_stats(profile: &[f64]) -> (f64, usize, f64, f64) {
    let k = profile.len();
    let mut best = profile[0];
    let mut arg = 0usize;
    for (i, &v) in profile.iter().enumerate().skip(1) {
        if v > best {
            best = v;
            arg = i;
        }
    }
    let mut sum = 0.0;
    for &v in profile {
        sum += v;
    }
    let mean = sum / k as f64;
    let mut dev = 0.0;
    for &v in profile {
        dev += (mean - v).abs();
    }
    (best, arg, mean, dev / k as f64)
}

/// Runs the line-integral profile at every voxel.
///
/// Work is split into rows (fixed `y`, `z`); each row writes only its own
/// output spans, so the result is bit-identical for any rayon pool size.
pub(crate) fn line_sweep(
    vol: &Volume,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> Result<LineSweep> {
    check_dims(dirs, vol.dims())?;
    let dims = vol.dims();
    let (nx, ny) = (dims.nx, dims.ny);
    let kernel = SampleKernel::new(params);
    let dir_offsets: Vec<Vec<[f64; 3]>> =
        dirs.iter().map(|&b| kernel.offsets(b)).collect();
    let vectors = dirs.vectors();
    let k = dirs.len();

    let mut max = vec![0f32; dims.len()];
    let mut mean = vec![0f32; dims.len()];
    let mut dev = vec![0f32; dims.len()];
    let mut dir_data = vec![0f32; 3 * dims.len()];

    max.par_chunks_mut(nx)
        .zip(mean.par_chunks_mut(nx))
        .zip(dev.par_chunks_mut(nx))
        .zip(dir_data.par_chunks_mut(3 * nx))
        .enumerate()
        .for_each(|(row, (((row_max, row_mean), row_dev), row_dir))| {
            let y = (row % ny) as f64;
            let z = (row / ny) as f64;
            let mut profile = vec![0f64; k];
            for i in 0..nx {
                let x = [i as f64, y, z];
                let mut flat = true;
                for (d, offsets) in dir_offsets.iter().enumerate() {
                    let v = integrate_pairs(x, offsets, kernel.center, kernel.h, |p| {
                        vol.sample(p)
                    });
                    profile[d] = v;
                    if v != profile[0] {
                        flat = false;
                    }
                }
                let (best, arg, mn, dv) = profile_stats(&profile);
                row_max[i] = best as f32;
                row_mean[i] = mn as f32;
                row_dev[i] = dv as f32;
                // A flat profile (every direction responds identically, as in
                // a constant neighbourhood) carries no orientation; store the
                // zero vector so alignment treats the voxel as isotropic.
                let b = if flat { [0.0; 3] } else { vectors[arg] };
                row_dir[3 * i] = b[0] as f32;
                row_dir[3 * i + 1] = b[1] as f32;
                row_dir[3 * i + 2] = b[2] as f32;
            }
        });

    let max = Volume::from_vec(dims, max)?;
    let mean = Volume::from_vec(dims, mean)?;
    let dev = Volume::from_vec(dims, dev)?;
    let mut direction = VectorField::zeros(dims);
    direction.data_mut().copy_from_slice(&dir_data);
    Ok(LineSweep {
        field: OrientationField {
            strength: max.clone(),
            direction,
        },
        max,
        mean,
        dev,
    })
}

/// Computes the orientation field (strongest response and its orientation)
/// of a volume under a direction set.
pub fn orientation_field(
    vol: &Volume,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> Result<OrientationField> {
    Ok(line_sweep(vol, dirs, params)?.field)
}

/// Alignment integrand at one point: strength times `2 * (d . b)^2 - 1`,
/// which is +1 when the local orientation is parallel to the probe, -1 when
/// perpendicular. Where the stored orientation is the zero vector the factor
/// is taken as zero.
#[inline]
fn alignment_term(field: &OrientationField, p: [f64; 3], b: [f64; 3]) -> f64 {
    let d = field.direction.sample_nearest(p);
    if d[0] == 0.0 && d[1] == 0.0 && d[2] == 0.0 {
        return 0.0;
    }
    let dot = d[0] * b[0] + d[1] * b[1] + d[2] * b[2];
    field.strength.sample(p) * (2.0 * dot * dot - 1.0)
}

/// Integral of the alignment integrand along the segment centered at `x`
/// with orientation `b`. Rewards neighbourhoods whose orientations agree
/// with the probe direction; bit-identical under `b -> -b`.
pub fn alignment_integral(
    field: &OrientationField,
    x: [f64; 3],
    b: [f64; 3],
    params: &IntegralParams,
) -> Result<f64> {
    check_unit(b)?;
    let kernel = SampleKernel::new(params);
    let offsets = kernel.offsets(b);
    Ok(integrate_pairs(x, &offsets, kernel.center, kernel.h, |p| {
        alignment_term(field, p, b)
    }))
}

/// Runs the alignment-integral profile at every voxel, returning profile
/// max, mean and mean absolute deviation. Same row split and determinism
/// guarantee as [`line_sweep`].
pub(crate) fn alignment_sweep(
    field: &OrientationField,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> Result<(Volume, Volume, Volume)> {
    check_dims(dirs, field.strength.dims())?;
    let dims = field.strength.dims();
    if field.direction.dims() != dims {
        return Err(Error::InvalidParameter(format!(
            "orientation field components disagree: {} vs {}",
            dims,
            field.direction.dims()
        )));
    }
    let (nx, ny) = (dims.nx, dims.ny);
    let kernel = SampleKernel::new(params);
    let dir_offsets: Vec<Vec<[f64; 3]>> =
        dirs.iter().map(|&b| kernel.offsets(b)).collect();
    let vectors = dirs.vectors();
    let k = dirs.len();

    let mut max = vec![0f32; dims.len()];
    let mut mean = vec![0f32; dims.len()];
    let mut dev = vec![0f32; dims.len()];

    max.par_chunks_mut(nx)
        .zip(mean.par_chunks_mut(nx))
        .zip(dev.par_chunks_mut(nx))
        .enumerate()
        .for_each(|(row, ((row_max, row_mean), row_dev))| {
            let y = (row % ny) as f64;
            let z = (row / ny) as f64;
            let mut profile = vec![0f64; k];
            for i in 0..nx {
                let x = [i as f64, y, z];
                for (d, offsets) in dir_offsets.iter().enumerate() {
                    let b = vectors[d];
                    profile[d] =
                        integrate_pairs(x, offsets, kernel.center, kernel.h, |p| {
                            alignment_term(field, p, b)
                        });
                }
                let (best, _, mn, dv) = profile_stats(&profile);
                row_max[i] = best as f32;
                row_mean[i] = mn as f32;
                row_dev[i] = dv as f32;
            }
        });

    Ok((
        Volume::from_vec(dims, max)?,
        Volume::from_vec(dims, mean)?,
        Volume::from_vec(dims, dev)?,
    ))
}
