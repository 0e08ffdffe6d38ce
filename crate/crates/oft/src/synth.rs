//! Reproducible synthetic test data: a smooth curve buried in point clutter
//! and Gaussian noise, plus the exact binary ground truth of the curve.
//!
//! Everything is driven by a hand-rolled splitmix64 generator so that a
//! `(seed, params)` pair produces bit-identical volumes on every platform and
//! toolchain. Draw order is fixed: clutter blob centers first (x, y, z per
//! blob), then one noise value per voxel in raster order.

use crate::error::{Error, Result};
use crate::volume::{Dims, Volume};

/// splitmix64: a tiny counter-based PRNG with full 64-bit state.
///
/// The update and output constants are the standard published ones; the
/// sequence for a given seed is stable by construction.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }
}

/// Standard normal deviates via Box-Muller on fixed-order uniform draws.
struct Gaussian {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(rng: SplitMix64) -> Self {
        Gaussian { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 is shifted into (0, 1] so ln(u1) stays finite.
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0);
        let u2 = self.rng.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }
}

/// Parameters for the synthetic generators. `curve_amplitude` scales the
/// curve's extent relative to the grid half-extent, `curve_thickness` is the
/// full tube diameter in voxels.
#[derive(Clone, Copy, Debug)]
pub struct SynthParams {
    pub dims: Dims,
    pub seed: u64,
    pub curve_amplitude: f64,
    pub curve_thickness: f64,
    pub noise_sigma: f64,
    pub clutter_density: f64,
    pub clutter_radius: f64,
}

impl SynthParams {
    pub fn new(dims: Dims, seed: u64) -> Self {
        SynthParams {
            dims,
            seed,
            curve_amplitude: 0.7,
            curve_thickness: 3.0,
            noise_sigma: 0.25,
            clutter_density: 0.02,
            // Clutter models point-like objects, so the blobs stay smaller
            // than the curve thickness: dots a curve filter must reject.
            clutter_radius: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.curve_amplitude > 0.0 && self.curve_amplitude <= 1.0) {
            return bad(format!("curve_amplitude {} not in (0, 1]", self.curve_amplitude));
        }
        if !(self.curve_thickness >= 1.0) {
            return bad(format!("curve_thickness {} below 1 voxel", self.curve_thickness));
        }
        if !(self.noise_sigma >= 0.0) {
            return bad(format!("noise_sigma {} negative", self.noise_sigma));
        }
        if !(self.clutter_density >= 0.0 && self.clutter_density <= 0.5) {
            return bad(format!("clutter_density {} not in [0, 0.5]", self.clutter_density));
        }
        if !(self.clutter_radius > 0.0) {
            return bad(format!("clutter_radius {} not positive", self.clutter_radius));
        }
        Ok(())
    }
}

/// Marks every voxel whose center lies within `r` of `c`. Returns how many
/// voxels were newly set.
fn stamp_ball(mask: &mut [bool], dims: Dims, c: [f64; 3], r: f64) -> usize {
    let lo = |x: f64| ((x - r).ceil().max(0.0)) as usize;
    let hi = |x: f64, n: usize| ((x + r).floor().min(n as f64 - 1.0)) as i64;
    let (x0, y0, z0) = (lo(c[0]), lo(c[1]), lo(c[2]));
    let (x1, y1, z1) = (hi(c[0], dims.nx), hi(c[1], dims.ny), hi(c[2], dims.nz));
    let r2 = r * r;
    let mut set = 0;
    let mut k = z0 as i64;
    while k <= z1 {
        let mut j = y0 as i64;
        while j <= y1 {
            let mut i = x0 as i64;
            while i <= x1 {
                let dx = i as f64 - c[0];
                let dy = j as f64 - c[1];
                let dz = k as f64 - c[2];
                if dx * dx + dy * dy + dz * dz <= r2 {
                    let idx = dims.index(i as usize, j as usize, k as usize);
                    if !mask[idx] {
                        mask[idx] = true;
                        set += 1;
                    }
                }
                i += 1;
            }
            j += 1;
        }
        k += 1;
    }
    set
}

/// Sweeps a ball of radius `r` along densely sampled curve points.
fn stamp_tube(mask: &mut [bool], dims: Dims, points: &[[f64; 3]], r: f64) {
    for &p in points {
        stamp_ball(mask, dims, p, r);
    }
}

/// Adds clutter blobs at uniform random centers until at least
/// `density * len` voxels carry clutter. Returns the clutter mask.
fn add_clutter(rng: &mut SplitMix64, dims: Dims, density: f64, radius: f64) -> Vec<bool> {
    let n = dims.len();
    let mut mask = vec![false; n];
    if density <= 0.0 {
        return mask;
    }
    let target = density * n as f64;
    let mut covered = 0usize;
    // The cap is far beyond anything reachable with density <= 0.5; it only
    // guards against degenerate parameter combinations.
    let mut budget = 64usize.saturating_mul(n);
    while (covered as f64) < target && budget > 0 {
        budget -= 1;
        let c = [
            rng.next_f64() * dims.nx as f64,
            rng.next_f64() * dims.ny as f64,
            rng.next_f64() * dims.nz as f64,
        ];
        let mut set = stamp_ball(&mut mask, dims, c, radius);
        if set == 0 {
            // Sub-voxel blobs still occupy their nearest voxel.
            let i = c[0].round();
            let j = c[1].round();
            let k = c[2].round();
            if i < dims.nx as f64 && j < dims.ny as f64 && k < dims.nz as f64 {
                let idx = dims.index(i as usize, j as usize, k as usize);
                if !mask[idx] {
                    mask[idx] = true;
                    set = 1;
                }
            }
        }
        covered += set;
    }
    mask
}

/// Combines a curve mask and clutter mask into intensity 1.0 and overlays
/// i.i.d. Gaussian noise (one draw per voxel, raster order).
fn compose(
    curve: Vec<bool>,
    clutter: Vec<bool>,
    dims: Dims,
    sigma: f64,
    rng: SplitMix64,
) -> (Volume, Volume) {
    let truth: Vec<f32> = curve.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut data: Vec<f32> = curve
        .iter()
        .zip(&clutter)
        .map(|(&a, &b)| if a || b { 1.0 } else { 0.0 })
        .collect();
    if sigma > 0.0 {
        let mut gauss = Gaussian::new(rng);
        for v in &mut data {
            *v = (*v as f64 + sigma * gauss.next()) as f32;
        }
    }
    let truth = Volume::from_vec(dims, truth).expect("mask values are finite");
    let vol = Volume::from_vec(dims, data).expect("noise values are finite");
    (vol, truth)
}

/// Parameter step that keeps consecutive curve samples closer than a quarter
/// voxel, so the swept tube has no gaps.
fn curve_samples(speed_bound: f64, point: impl Fn(f64) -> [f64; 3]) -> Vec<[f64; 3]> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let steps = ((two_pi * speed_bound / 0.25).ceil() as usize).max(8);
    (0..=steps).map(|i| point(i as f64 * two_pi / steps as f64)).collect()
}

/// Generates a 3D volume containing one smooth closed space curve
/// (`sin t, cos t, cos 2t`, scaled to the grid), clutter, and noise.
/// Returns `(volume, truth)` where truth marks exactly the tube voxels.
pub fn make_curve_volume(params: &SynthParams) -> Result<(Volume, Volume)> {
    params.validate()?;
    let dims = params.dims;
    if dims.is_2d() {
        return Err(Error::InvalidParameter(
            "make_curve_volume needs nz > 1; use make_curve_image_2d for images".into(),
        ));
    }
    let hx = (dims.nx as f64 - 1.0) / 2.0;
    let hy = (dims.ny as f64 - 1.0) / 2.0;
    let hz = (dims.nz as f64 - 1.0) / 2.0;
    let a = params.curve_amplitude;
    let point = |t: f64| {
        [
            hx + a * hx * t.sin(),
            hy + a * hy * t.cos(),
            hz + a * hz * (2.0 * t).cos(),
        ]
    };
    let speed_bound = a * (hx * hx + hy * hy + 4.0 * hz * hz).sqrt();
    let mut curve = vec![false; dims.len()];
    stamp_tube(
        &mut curve,
        dims,
        &curve_samples(speed_bound, point),
        params.curve_thickness / 2.0,
    );

    let mut rng = SplitMix64::new(params.seed);
    let clutter = add_clutter(&mut rng, dims, params.clutter_density, params.clutter_radius);
    Ok(compose(curve, clutter, dims, params.noise_sigma, rng))
}

/// 2D counterpart of [`make_curve_volume`]: a sinusoidally perturbed circle
/// in a single-slice volume, plus disc clutter and noise.
pub fn make_curve_image_2d(params: &SynthParams) -> Result<(Volume, Volume)> {
    params.validate()?;
    let dims = params.dims;
    if !dims.is_2d() {
        return Err(Error::InvalidParameter(
            "make_curve_image_2d needs nz == 1".into(),
        ));
    }
    let cx = (dims.nx as f64 - 1.0) / 2.0;
    let cy = (dims.ny as f64 - 1.0) / 2.0;
    let half = cx.min(cy);
    let a = params.curve_amplitude;
    // Radius wobbles between 0.55 and 0.95 of the allowed extent, so the
    // curve bends at several scales but stays inside the frame.
    let point = |t: f64| {
        let rho = half * a * (0.75 + 0.2 * (5.0 * t).sin());
        [cx + rho * t.cos(), cy + rho * t.sin(), 0.0]
    };
    let speed_bound = half * a * (0.95 + 1.0);
    let mut curve = vec![false; dims.len()];
    stamp_tube(
        &mut curve,
        dims,
        &curve_samples(speed_bound, point),
        params.curve_thickness / 2.0,
    );

    let mut rng = SplitMix64::new(params.seed);
    let clutter = add_clutter(&mut rng, dims, params.clutter_density, params.clutter_radius);
    Ok(compose(curve, clutter, dims, params.noise_sigma, rng))
}
