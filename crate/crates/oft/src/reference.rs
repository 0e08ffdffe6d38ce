//! Slow, direct reference implementations of every numeric operator.
//!
//! These are deliberately written as plain transliterations of the operator
//! definitions — single-threaded, no precomputation, no fused passes — and
//! exist only to validate the production code paths. They share the same
//! discretization decisions (midpoint rule with `m = ceil(epsilon / step)`,
//! trilinear interpolation with zero padding, nearest-neighbour orientation
//! lookup, lowest-index argmax), so production results must agree within
//! floating-point reordering noise (relative 1e-5 with an absolute floor of
//! 1e-9) and exactly on constants.

use crate::directions::DirectionSet;
use crate::integrals::{IntegralParams, OrientationField};
use crate::measures::MeasureStack;
use crate::transform::CombineMode;
use crate::volume::{VectorField, Volume};

/// Trilinear interpolation, written independently of the production sampler.
fn sample_scalar(vol: &Volume, p: [f64; 3]) -> f64 {
    let dims = vol.dims();
    let base = [p[0].floor(), p[1].floor(), p[2].floor()];
    let frac = [p[0] - base[0], p[1] - base[1], p[2] - base[2]];
    if !(p[0] > -1.0
        && p[1] > -1.0
        && p[2] > -1.0
        && p[0] < dims.nx as f64
        && p[1] < dims.ny as f64
        && p[2] < dims.nz as f64)
    {
        return 0.0;
    }
    let value_at = |i: f64, j: f64, k: f64| -> f64 {
        if i < 0.0
            || j < 0.0
            || k < 0.0
            || i >= dims.nx as f64
            || j >= dims.ny as f64
            || k >= dims.nz as f64
        {
            0.0
        } else {
            vol.get(i as usize, j as usize, k as usize) as f64
        }
    };
    // Interpolate axis by axis: 4 edges along x, 2 faces along y, 1 along z.
    let mut corner = [0.0f64; 8];
    for (n, slot) in corner.iter_mut().enumerate() {
        let di = (n & 1) as f64;
        let dj = ((n >> 1) & 1) as f64;
        let dk = ((n >> 2) & 1) as f64;
        *slot = value_at(base[0] + di, base[1] + dj, base[2] + dk);
    }
    let lerp = |a: f64, b: f64, t: f64| a + t * (b - a);
    let x00 = lerp(corner[0], corner[1], frac[0]);
    let x10 = lerp(corner[2], corner[3], frac[0]);
    let x01 = lerp(corner[4], corner[5], frac[0]);
    let x11 = lerp(corner[6], corner[7], frac[0]);
    let y0 = lerp(x00, x10, frac[1]);
    let y1 = lerp(x01, x11, frac[1]);
    lerp(y0, y1, frac[2])
}

/// Nearest-neighbour orientation lookup with ties toward the lower index.
fn sample_vector(field: &VectorField, p: [f64; 3]) -> [f64; 3] {
    let dims = field.dims();
    let idx = [
        (p[0] - 0.5).ceil(),
        (p[1] - 0.5).ceil(),
        (p[2] - 0.5).ceil(),
    ];
    for (a, n) in idx.iter().zip([dims.nx, dims.ny, dims.nz]) {
        if *a < 0.0 || *a >= n as f64 {
            return [0.0, 0.0, 0.0];
        }
    }
    let v = field.get(idx[0] as usize, idx[1] as usize, idx[2] as usize);
    [v[0] as f64, v[1] as f64, v[2] as f64]
}

fn sample_positions(params: &IntegralParams) -> (f64, Vec<f64>) {
    let m = ((params.epsilon() / params.step_hint()).ceil() as usize).max(1);
    let h = params.epsilon() / m as f64;
    let positions = (0..m)
        .map(|k| -params.epsilon() / 2.0 + (k as f64 + 0.5) * h)
        .collect();
    (h, positions)
}

/// Line integral: midpoint sum over `m` samples, accumulated in order.
pub fn line_integral(vol: &Volume, x: [f64; 3], b: [f64; 3], params: &IntegralParams) -> f64 {
    let (h, positions) = sample_positions(params);
    let mut acc = 0.0;
    for s in positions {
        acc += sample_scalar(vol, [x[0] + s * b[0], x[1] + s * b[1], x[2] + s * b[2]]);
    }
    h * acc
}

/// Alignment integral over an orientation field.
pub fn alignment_integral(
    field: &OrientationField,
    x: [f64; 3],
    b: [f64; 3],
    params: &IntegralParams,
) -> f64 {
    let (h, positions) = sample_positions(params);
    let mut acc = 0.0;
    for s in positions {
        let p = [x[0] + s * b[0], x[1] + s * b[1], x[2] + s * b[2]];
        let d = sample_vector(&field.direction, p);
        if d == [0.0, 0.0, 0.0] {
            continue;
        }
        let dot = d[0] * b[0] + d[1] * b[1] + d[2] * b[2];
        acc += sample_scalar(&field.strength, p) * (2.0 * dot * dot - 1.0);
    }
    h * acc
}

/// Orientation field by brute force: every voxel, every direction.
pub fn orientation_field(
    vol: &Volume,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> OrientationField {
    let dims = vol.dims();
    let mut strength = Volume::zeros(dims);
    let mut direction = VectorField::zeros(dims);
    for k in 0..dims.nz {
        for j in 0..dims.ny {
            for i in 0..dims.nx {
                let x = [i as f64, j as f64, k as f64];
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0usize;
                let mut first = 0.0;
                let mut flat = true;
                for (d, &b) in dirs.iter().enumerate() {
                    let v = line_integral(vol, x, b, params);
                    if d == 0 {
                        first = v;
                    } else if v != first {
                        flat = false;
                    }
                    if v > best {
                        best = v;
                        arg = d;
                    }
                }
                strength.set(i, j, k, best as f32);
                // Flat profiles carry no orientation (matches the sweep).
                if !flat {
                    let b = dirs.vectors()[arg];
                    direction.set(i, j, k, [b[0] as f32, b[1] as f32, b[2] as f32]);
                }
            }
        }
    }
    OrientationField { strength, direction }
}

/// All six measures plus the orientation field, by brute force.
pub fn measures(
    vol: &Volume,
    dirs: &DirectionSet,
    params: &IntegralParams,
) -> (MeasureStack, OrientationField) {
    let dims = vol.dims();
    let field = orientation_field(vol, dirs, params);
    let mut line_max = Volume::zeros(dims);
    let mut line_mean = Volume::zeros(dims);
    let mut line_dev = Volume::zeros(dims);
    let mut align_max = Volume::zeros(dims);
    let mut align_mean = Volume::zeros(dims);
    let mut align_dev = Volume::zeros(dims);

    let k_count = dirs.len() as f64;
    let stats = |profile: &[f64]| -> (f64, f64, f64) {
        let mut max = f64::NEG_INFINITY;
        for &v in profile {
            if v > max {
                max = v;
            }
        }
        let mut sum = 0.0;
        for &v in profile {
            sum += v;
        }
        let mean = sum / k_count;
        let mut dev = 0.0;
        for &v in profile {
            dev += (mean - v).abs();
        }
        (max, mean, dev / k_count)
    };

    for k in 0..dims.nz {
        for j in 0..dims.ny {
            for i in 0..dims.nx {
                let x = [i as f64, j as f64, k as f64];
                let line: Vec<f64> = dirs
                    .iter()
                    .map(|&b| line_integral(vol, x, b, params))
                    .collect();
                let align: Vec<f64> = dirs
                    .iter()
                    .map(|&b| alignment_integral(&field, x, b, params))
                    .collect();
                let (lmax, lmean, ldev) = stats(&line);
                let (amax, amean, adev) = stats(&align);
                line_max.set(i, j, k, lmax as f32);
                line_mean.set(i, j, k, lmean as f32);
                line_dev.set(i, j, k, ldev as f32);
                align_max.set(i, j, k, amax as f32);
                align_mean.set(i, j, k, amean as f32);
                align_dev.set(i, j, k, adev as f32);
            }
        }
    }

    (
        MeasureStack {
            line_max,
            align_max,
            line_mean,
            align_mean,
            line_dev,
            align_dev,
        },
        field,
    )
}

/// Voxel-wise clamped product of the participating measures.
pub fn combine(stack: &MeasureStack, mode: CombineMode) -> Volume {
    let dims = stack.line_max.dims();
    let mut out = Volume::zeros(dims);
    for idx in 0..dims.len() {
        let pick = |v: &Volume| (v.data()[idx] as f64).max(0.0);
        let product = match mode {
            CombineMode::All => {
                pick(&stack.line_max)
                    * pick(&stack.align_max)
                    * pick(&stack.line_mean)
                    * pick(&stack.align_mean)
                    * pick(&stack.line_dev)
                    * pick(&stack.align_dev)
            }
            CombineMode::NoMeanAlign => {
                pick(&stack.line_max)
                    * pick(&stack.align_max)
                    * pick(&stack.line_mean)
                    * pick(&stack.line_dev)
                    * pick(&stack.align_dev)
            }
            CombineMode::LinePair => pick(&stack.line_max) * pick(&stack.line_mean),
        };
        out.data_mut()[idx] = product.min(f32::MAX as f64) as f32;
    }
    out
}

/// Agreement check used by the validation tests: `a` and `b` agree when
/// `|a - b| <= rel * max(|a|, |b|)` or `|a - b| <= abs_floor`.
pub fn close(a: f64, b: f64, rel: f64, abs_floor: f64) -> bool {
    let diff = (a - b).abs();
    diff <= rel * a.abs().max(b.abs()) || diff <= abs_floor
}
