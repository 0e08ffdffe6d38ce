//! Measure combination and the end-to-end enhancement pipeline.

use std::time::{Duration, Instant};

use crate::directions::DirectionSet;
use crate::error::Result;
use crate::integrals::IntegralParams;
use crate::measures::{alignment_measures, line_measures, MeasureStack};
use crate::volume::Volume;

/// Which measures participate in the combined product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    /// Product of all six measures.
    All,
    /// Product of five measures, leaving out the alignment-profile mean.
    /// The alignment mean goes negative in mostly empty volumes, where a
    /// typical orientation disagrees with most probes; dropping it keeps
    /// sparse curves from being annihilated.
    NoMeanAlign,
    /// Product of the line-profile max and mean only. Cheap, and useful when
    /// the alignment pass adds little.
    LinePair,
}

impl CombineMode {
    /// Selects the participating measures from a stack.
    fn factors(self, stack: &MeasureStack) -> Vec<&Volume> {
        match self {
            CombineMode::All => vec![
                &stack.line_max,
                &stack.align_max,
                &stack.line_mean,
                &stack.align_mean,
                &stack.line_dev,
                &stack.align_dev,
            ],
            CombineMode::NoMeanAlign => vec![
                &stack.line_max,
                &stack.align_max,
                &stack.line_mean,
                &stack.line_dev,
                &stack.align_dev,
            ],
            CombineMode::LinePair => vec![&stack.line_max, &stack.line_mean],
        }
    }
}

/// Multiplies the participating measures voxel-wise, clamping each factor at
/// zero first, so any non-positive factor annihilates the voxel. The product
/// is accumulated in f64 and clamped to the f32 range on store.
pub fn combine(stack: &MeasureStack, mode: CombineMode) -> Volume {
    let factors = mode.factors(stack);
    let dims = factors[0].dims();
    let mut out = vec![0f32; dims.len()];
    for (idx, slot) in out.iter_mut().enumerate() {
        let mut product = 1f64;
        for vol in &factors {
            product *= (vol.data()[idx] as f64).max(0.0);
        }
        *slot = product.min(f32::MAX as f64) as f32;
    }
    Volume::from_vec(dims, out).expect("clamped products are finite")
}

/// Affinely rescales a volume to `[0, 1]`. Constant volumes (no spread) map
/// to all zeros.
pub fn normalize_unit(vol: &Volume) -> Volume {
    let (lo, hi) = vol.min_max();
    let span = hi as f64 - lo as f64;
    let mut out = vec![0f32; vol.dims().len()];
    if span > 0.0 {
        for (slot, &v) in out.iter_mut().zip(vol.data()) {
            *slot = ((v as f64 - lo as f64) / span) as f32;
        }
    }
    Volume::from_vec(vol.dims(), out).expect("normalized values are finite")
}

/// Full pipeline configuration. `k_directions` counts orientations (the 2D
/// and 3D sets have different minimums); `invert` enhances dark curves on
/// bright background by flipping the volume to `max - v` first.
#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    pub epsilon: f64,
    pub k_directions: usize,
    pub mode: CombineMode,
    pub step_hint: f64,
    pub invert: bool,
    pub normalize_output: bool,
}

impl PipelineConfig {
    pub fn new(epsilon: f64, k_directions: usize) -> Self {
        PipelineConfig {
            epsilon,
            k_directions,
            mode: CombineMode::NoMeanAlign,
            step_hint: 1.0,
            invert: false,
            normalize_output: false,
        }
    }
}

/// Wall-clock time spent in each pipeline stage.
#[derive(Clone, Copy, Debug, Default)]
pub struct StageTimings {
    pub line_sweep: Duration,
    pub alignment_sweep: Duration,
    pub combine: Duration,
}

/// Runs the full enhancement: optional inversion, line sweep, alignment
/// sweep, measure combination, optional output normalization. Returns the
/// enhanced volume and the measure stack it was combined from.
pub fn run_pipeline(vol: &Volume, config: &PipelineConfig) -> Result<(Volume, MeasureStack)> {
    let (enhanced, stack, _) = run_pipeline_timed(vol, config)?;
    Ok((enhanced, stack))
}

/// [`run_pipeline`] with per-stage wall-clock timings for reporting.
pub fn run_pipeline_timed(
    vol: &Volume,
    config: &PipelineConfig,
) -> Result<(Volume, MeasureStack, StageTimings)> {
    let params = IntegralParams::with_step(config.epsilon, config.step_hint)?;
    let dirs = DirectionSet::for_dim(vol.dims().dim(), config.k_directions)?;

    let inverted;
    let input = if config.invert {
        let (_, hi) = vol.min_max();
        let data = vol.data().iter().map(|&v| hi - v).collect();
        inverted = Volume::from_vec(vol.dims(), data)?;
        &inverted
    } else {
        vol
    };

    let mut timings = StageTimings::default();

    let t = Instant::now();
    let (line_max, line_mean, line_dev, field) = line_measures(input, &dirs, &params)?;
    timings.line_sweep = t.elapsed();

    let t = Instant::now();
    let (align_max, align_mean, align_dev) = alignment_measures(&field, &dirs, &params)?;
    timings.alignment_sweep = t.elapsed();

    let stack = MeasureStack {
        line_max,
        align_max,
        line_mean,
        align_mean,
        line_dev,
        align_dev,
    };

    let t = Instant::now();
    let mut enhanced = combine(&stack, config.mode);
    if config.normalize_output {
        enhanced = normalize_unit(&enhanced);
    }
    timings.combine = t.elapsed();

    Ok((enhanced, stack, timings))
}
