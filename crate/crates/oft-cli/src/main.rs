//! `oft` — enhance curve-like structures in noisy 2D/3D volumes.
//!
//! Subcommands cover the full workflow: `synth` builds ground-truthed test
//! volumes, `enhance` runs the orientation-field pipeline, `threshold`
//! binarizes, `skeleton-denoise` cleans up extracted skeleton graphs,
//! `info` inspects volumes, `bench` times the pipeline stages, and `rerun`
//! replays any previous run from its manifest.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use oft::directions::{DEFAULT_DIRECTIONS_2D, DEFAULT_DIRECTIONS_3D};
use oft::postprocess::{
    merge_skeleton_nodes, normalize_slice_median, percentile_value, rasterize_skeleton,
    threshold, SkeletonGraph,
};
use oft::synth::{make_curve_image_2d, make_curve_volume, SplitMix64, SynthParams};
use oft::transform::{run_pipeline_timed, CombineMode, PipelineConfig};
use oft::volume::{read_volume_any, volume_paths, write_slice_pgm, write_volume, Dims, Volume};

use manifest::{manifest_path, Manifest};

#[derive(Parser)]
#[command(name = "oft", version, about = "Selective enhancement of curve-like structures")]
struct Cli {
    /// Worker threads (defaults to OFT_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the enhancement pipeline on a volume.
    Enhance(EnhanceArgs),
    /// Generate a ground-truthed synthetic curve volume.
    Synth(SynthArgs),
    /// Binarize a volume at a fixed value or percentile.
    Threshold(ThresholdArgs),
    /// Normalize per-slice median intensity of a volume.
    NormalizeSlices(NormalizeArgs),
    /// Merge nearby skeleton-graph nodes and optionally rasterize.
    SkeletonDenoise(SkeletonArgs),
    /// Print volume statistics, optionally exporting a slice as PGM.
    Info(InfoArgs),
    /// Time the pipeline stages on a synthetic volume.
    Bench(BenchArgs),
    /// Replay a previous run from its manifest.
    Rerun(RerunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Product of all six measures.
    All,
    /// All measures except the alignment-profile mean.
    NoMeanAlign,
    /// Line-profile max times mean only.
    LinePair,
}

impl ModeArg {
    fn as_str(self) -> &'static str {
        match self {
            ModeArg::All => "all",
            ModeArg::NoMeanAlign => "no-mean-align",
            ModeArg::LinePair => "line-pair",
        }
    }
}

fn mode_from_str(s: &str) -> Result<CombineMode, String> {
    match s {
        "all" => Ok(CombineMode::All),
        "no-mean-align" => Ok(CombineMode::NoMeanAlign),
        "line-pair" => Ok(CombineMode::LinePair),
        other => Err(format!("unknown mode {other:?}")),
    }
}

/// Parses "N" (cube), "NX,NY" (single-slice image) or "NX,NY,NZ".
fn parse_dims(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad dimension {p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let dims = match parts.as_slice() {
        [n] => [*n, *n, *n],
        [nx, ny] => [*nx, *ny, 1],
        [nx, ny, nz] => [*nx, *ny, *nz],
        _ => return Err("expected 1, 2 or 3 comma-separated sizes".to_string()),
    };
    if dims.contains(&0) {
        return Err("dimensions must be positive".to_string());
    }
    Ok(dims)
}

#[derive(Args)]
struct EnhanceArgs {
    /// Input volume (.json/.raw pair or .mrc).
    input: PathBuf,
    /// Output volume stem.
    #[arg(short, long)]
    output: PathBuf,
    /// Integration segment length, in voxels (about 1.5x the expected
    /// curve thickness works well).
    #[arg(long)]
    epsilon: f64,
    /// Number of probe orientations (default: 96 for volumes, 36 for
    /// single-slice images).
    #[arg(long)]
    directions: Option<usize>,
    /// Measure combination.
    #[arg(long, value_enum, default_value_t = ModeArg::NoMeanAlign)]
    mode: ModeArg,
    /// Sample spacing hint along the segment, in voxels.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    /// Enhance dark curves on a bright background.
    #[arg(long)]
    invert: bool,
    /// Rescale the output to [0, 1].
    #[arg(long)]
    normalize: bool,
    /// Also write the six measure volumes next to the output.
    #[arg(long)]
    debug_measures: bool,
}

#[derive(Serialize, Deserialize)]
struct EnhanceConfig {
    input: String,
    output: String,
    epsilon: f64,
    directions: Option<usize>,
    mode: String,
    step: f64,
    invert: bool,
    normalize: bool,
    debug_measures: bool,
}

#[derive(Args)]
struct SynthArgs {
    /// Output volume stem (also gets a .truth companion).
    #[arg(short, long)]
    output: PathBuf,
    /// Grid size: "96", "256,256" (2D) or "128,128,64".
    #[arg(long, value_parser = parse_dims, default_value = "96")]
    dims: [usize; 3],
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Curve extent relative to the grid half-extent, in (0, 1].
    #[arg(long, default_value_t = 0.7)]
    amplitude: f64,
    /// Curve tube diameter in voxels.
    #[arg(long, default_value_t = 3.0)]
    thickness: f64,
    /// Gaussian noise level.
    #[arg(long, default_value_t = 0.25)]
    sigma: f64,
    /// Fraction of voxels covered by clutter blobs, in [0, 0.5].
    #[arg(long, default_value_t = 0.02)]
    density: f64,
    /// Clutter blob radius in voxels.
    #[arg(long, default_value_t = 1.0)]
    clutter_radius: f64,
}

#[derive(Serialize, Deserialize)]
struct SynthConfig {
    output: String,
    dims: [usize; 3],
    seed: u64,
    amplitude: f64,
    thickness: f64,
    sigma: f64,
    density: f64,
    clutter_radius: f64,
}

#[derive(Args)]
struct ThresholdArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Absolute threshold: voxels strictly above it survive.
    #[arg(long, conflicts_with = "percentile")]
    value: Option<f64>,
    /// Percentile threshold in [0, 100] (nearest-rank).
    #[arg(long)]
    percentile: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ThresholdConfig {
    input: String,
    output: String,
    value: Option<f64>,
    percentile: Option<f64>,
}

#[derive(Args)]
struct NormalizeArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Target slice median (default: the median of the slice medians).
    #[arg(long)]
    target: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct NormalizeConfig {
    input: String,
    output: String,
    target: Option<f64>,
}

#[derive(Args)]
struct SkeletonArgs {
    /// Input skeleton graph (JSON).
    input: PathBuf,
    /// Output skeleton graph (JSON).
    #[arg(short, long)]
    output: PathBuf,
    /// Merge every node pair closer than this distance, in voxels.
    #[arg(long)]
    distance: f64,
    /// Also rasterize the merged graph into a volume of this size.
    #[arg(long, value_parser = parse_dims, requires = "raster_output")]
    rasterize: Option<[usize; 3]>,
    /// Output stem for the rasterized volume.
    #[arg(long, requires = "rasterize")]
    raster_output: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct SkeletonConfig {
    input: String,
    output: String,
    distance: f64,
    rasterize: Option<[usize; 3]>,
    raster_output: Option<String>,
}

#[derive(Args)]
struct InfoArgs {
    input: PathBuf,
    /// Export one z-slice as an 8-bit PGM image.
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Slice index for --pgm (default: the middle slice).
    #[arg(long)]
    slice: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct InfoConfig {
    input: String,
    pgm: Option<String>,
    slice: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = parse_dims, default_value = "64")]
    dims: [usize; 3],
    #[arg(long, default_value_t = 48)]
    directions: usize,
    #[arg(long, default_value_t = 6.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

#[derive(Args)]
struct RerunArgs {
    /// Manifest written by a previous run.
    manifest: PathBuf,
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    let requested = thread_request(cli.threads)?;
    match cli.command {
        Command::Rerun(args) => {
            let manifest = Manifest::read(&args.manifest)?;
            install_threads(requested.or(Some(manifest.threads)))?;
            eprintln!("replaying {} from {}", manifest.command, args.manifest.display());
            dispatch_manifest(manifest)
        }
        command => {
            install_threads(requested)?;
            match command {
                Command::Enhance(args) => run_enhance(enhance_config(args)),
                Command::Synth(args) => run_synth(synth_config(args)),
                Command::Threshold(args) => run_threshold(threshold_config(args)),
                Command::NormalizeSlices(args) => run_normalize(normalize_config(args)),
                Command::SkeletonDenoise(args) => run_skeleton(skeleton_config(args)),
                Command::Info(args) => run_info(info_config(args)),
                Command::Bench(args) => run_bench(args),
                Command::Rerun(_) => unreachable!("handled above"),
            }
        }
    }
}

/// Thread count requested by flag or OFT_THREADS; `None` means rayon's
/// default.
fn thread_request(flag: Option<usize>) -> Result<Option<usize>, String> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("OFT_THREADS") {
        Ok(text) => text
            .parse::<usize>()
            .map(Some)
            .map_err(|e| format!("OFT_THREADS={text:?} is not a thread count: {e}")),
        Err(_) => Ok(None),
    }
}

fn install_threads(threads: Option<usize>) -> Result<(), String> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err("thread count must be at least 1".to_string());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("initializing the thread pool: {e}"))
}

fn dispatch_manifest(manifest: Manifest) -> Result<(), String> {
    let config = manifest.config.clone();
    let parse = |e: serde_json::Error| format!("manifest config does not match {}: {e}", manifest.command);
    match manifest.command.as_str() {
        "enhance" => run_enhance(serde_json::from_value(config).map_err(parse)?),
        "synth" => run_synth(serde_json::from_value(config).map_err(parse)?),
        "threshold" => run_threshold(serde_json::from_value(config).map_err(parse)?),
        "normalize-slices" => run_normalize(serde_json::from_value(config).map_err(parse)?),
        "skeleton-denoise" => run_skeleton(serde_json::from_value(config).map_err(parse)?),
        "info" => run_info(serde_json::from_value(config).map_err(parse)?),
        other => Err(format!("manifest command {other:?} cannot be replayed")),
    }
}

fn enhance_config(args: EnhanceArgs) -> EnhanceConfig {
    EnhanceConfig {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        epsilon: args.epsilon,
        directions: args.directions,
        mode: args.mode.as_str().to_string(),
        step: args.step,
        invert: args.invert,
        normalize: args.normalize,
        debug_measures: args.debug_measures,
    }
}

fn synth_config(args: SynthArgs) -> SynthConfig {
    SynthConfig {
        output: args.output.display().to_string(),
        dims: args.dims,
        seed: args.seed,
        amplitude: args.amplitude,
        thickness: args.thickness,
        sigma: args.sigma,
        density: args.density,
        clutter_radius: args.clutter_radius,
    }
}

fn threshold_config(args: ThresholdArgs) -> ThresholdConfig {
    ThresholdConfig {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        value: args.value,
        percentile: args.percentile,
    }
}

fn normalize_config(args: NormalizeArgs) -> NormalizeConfig {
    NormalizeConfig {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        target: args.target,
    }
}

fn skeleton_config(args: SkeletonArgs) -> SkeletonConfig {
    SkeletonConfig {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        distance: args.distance,
        rasterize: args.rasterize,
        raster_output: args.raster_output.map(|p| p.display().to_string()),
    }
}

fn info_config(args: InfoArgs) -> InfoConfig {
    InfoConfig {
        input: args.input.display().to_string(),
        pgm: args.pgm.map(|p| p.display().to_string()),
        slice: args.slice,
    }
}

fn oops(e: oft::Error) -> String {
    e.to_string()
}

/// Strips a `.json`/`.raw` extension so companion files share the stem.
fn output_stem(path: &Path) -> PathBuf {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") | Some("raw") => path.with_extension(""),
        _ => path.to_path_buf(),
    }
}

fn run_enhance(mut config: EnhanceConfig) -> Result<(), String> {
    let input_path = PathBuf::from(&config.input);
    let output_path = PathBuf::from(&config.output);
    let vol = read_volume_any(&input_path).map_err(oops)?;
    let dims = vol.dims();

    let k = config.directions.unwrap_or(if dims.is_2d() {
        DEFAULT_DIRECTIONS_2D
    } else {
        DEFAULT_DIRECTIONS_3D
    });
    config.directions = Some(k);

    let pipeline = PipelineConfig {
        epsilon: config.epsilon,
        k_directions: k,
        mode: mode_from_str(&config.mode)?,
        step_hint: config.step,
        invert: config.invert,
        normalize_output: config.normalize,
    };

    let total = Instant::now();
    let (enhanced, stack, timings) = run_pipeline_timed(&vol, &pipeline).map_err(oops)?;
    let total = total.elapsed();

    let mut manifest = Manifest::new("enhance", serde_json::to_value(&config).unwrap());
    manifest.stage("line_sweep", timings.line_sweep);
    manifest.stage("alignment_sweep", timings.alignment_sweep);
    manifest.stage("combine", timings.combine);
    manifest.stage("total", total);

    write_volume(&enhanced, &output_path).map_err(oops)?;
    let (json, raw) = volume_paths(&output_path);
    manifest.output(&json);
    manifest.output(&raw);
    println!("wrote {}", raw.display());

    if config.debug_measures {
        let stem = output_stem(&output_path);
        for (name, volume) in stack.named() {
            let mut base = stem.as_os_str().to_os_string();
            base.push(format!(".{name}"));
            let base = PathBuf::from(base);
            write_volume(volume, &base).map_err(oops)?;
            let (mjson, mraw) = volume_paths(&base);
            manifest.output(&mjson);
            manifest.output(&mraw);
            println!("wrote {}", mraw.display());
        }
    }

    let mpath = manifest_path(&output_path);
    manifest.write(&mpath)?;
    println!("wrote {}", mpath.display());
    let voxels_per_sec = dims.len() as f64 / total.as_secs_f64();
    println!(
        "enhanced {} voxels with {} directions in {:.2}s ({:.0} voxels/s)",
        dims.len(),
        k,
        total.as_secs_f64(),
        voxels_per_sec
    );
    Ok(())
}

fn run_synth(config: SynthConfig) -> Result<(), String> {
    let output_path = PathBuf::from(&config.output);
    let dims = Dims::new(config.dims[0], config.dims[1], config.dims[2]).map_err(oops)?;
    let params = SynthParams {
        dims,
        seed: config.seed,
        curve_amplitude: config.amplitude,
        curve_thickness: config.thickness,
        noise_sigma: config.sigma,
        clutter_density: config.density,
        clutter_radius: config.clutter_radius,
    };

    let start = Instant::now();
    let (vol, truth) = if dims.is_2d() {
        make_curve_image_2d(&params).map_err(oops)?
    } else {
        make_curve_volume(&params).map_err(oops)?
    };
    let elapsed = start.elapsed();

    let mut manifest = Manifest::new("synth", serde_json::to_value(&config).unwrap());
    manifest.stage("synthesis", elapsed);

    write_volume(&vol, &output_path).map_err(oops)?;
    let truth_stem = PathBuf::from({
        let mut s = output_stem(&output_path).into_os_string();
        s.push(".truth");
        s
    });
    write_volume(&truth, &truth_stem).map_err(oops)?;
    let (json, raw) = volume_paths(&output_path);
    let (tjson, traw) = volume_paths(&truth_stem);
    for p in [&json, &raw, &tjson, &traw] {
        manifest.output(p);
    }
    println!("wrote {}", raw.display());
    println!("wrote {}", traw.display());

    let mpath = manifest_path(&output_path);
    manifest.write(&mpath)?;
    println!("wrote {}", mpath.display());
    let curve_voxels = truth.data().iter().filter(|&&v| v == 1.0).count();
    println!(
        "synthesized {} ({} curve voxels) with seed {}",
        dims,
        curve_voxels,
        config.seed
    );
    Ok(())
}

fn run_threshold(config: ThresholdConfig) -> Result<(), String> {
    let vol = read_volume_any(Path::new(&config.input)).map_err(oops)?;
    let t = match (config.value, config.percentile) {
        (Some(v), None) => v as f32,
        (None, Some(p)) => percentile_value(&vol, p).map_err(oops)?,
        (None, None) => return Err("pass either --value or --percentile".to_string()),
        (Some(_), Some(_)) => {
            return Err("--value and --percentile are mutually exclusive".to_string())
        }
    };

    let start = Instant::now();
    let out = threshold(&vol, t);
    let elapsed = start.elapsed();

    let output_path = PathBuf::from(&config.output);
    write_volume(&out, &output_path).map_err(oops)?;
    let (json, raw) = volume_paths(&output_path);

    let mut manifest = Manifest::new("threshold", serde_json::to_value(&config).unwrap());
    manifest.stage("threshold", elapsed);
    manifest.output(&json);
    manifest.output(&raw);
    let mpath = manifest_path(&output_path);
    manifest.write(&mpath)?;

    let kept = out.data().iter().filter(|&&v| v == 1.0).count();
    println!("wrote {}", raw.display());
    println!("wrote {}", mpath.display());
    println!(
        "threshold {} kept {} of {} voxels ({:.3}%)",
        t,
        kept,
        out.dims().len(),
        100.0 * kept as f64 / out.dims().len() as f64
    );
    Ok(())
}

fn run_normalize(config: NormalizeConfig) -> Result<(), String> {
    let vol = read_volume_any(Path::new(&config.input)).map_err(oops)?;
    let start = Instant::now();
    let out = normalize_slice_median(&vol, config.target).map_err(oops)?;
    let elapsed = start.elapsed();

    let output_path = PathBuf::from(&config.output);
    write_volume(&out, &output_path).map_err(oops)?;
    let (json, raw) = volume_paths(&output_path);

    let mut manifest = Manifest::new("normalize-slices", serde_json::to_value(&config).unwrap());
    manifest.stage("normalize", elapsed);
    manifest.output(&json);
    manifest.output(&raw);
    let mpath = manifest_path(&output_path);
    manifest.write(&mpath)?;
    println!("wrote {}", raw.display());
    println!("wrote {}", mpath.display());
    Ok(())
}

fn run_skeleton(config: SkeletonConfig) -> Result<(), String> {
    let graph = SkeletonGraph::from_json_file(Path::new(&config.input)).map_err(oops)?;
    let start = Instant::now();
    let merged = merge_skeleton_nodes(&graph, config.distance).map_err(oops)?;
    let elapsed = start.elapsed();

    let output_path = PathBuf::from(&config.output);
    merged.to_json_file(&output_path).map_err(oops)?;
    let mut manifest = Manifest::new("skeleton-denoise", serde_json::to_value(&config).unwrap());
    manifest.stage("merge", elapsed);
    manifest.output(&output_path);
    println!("wrote {}", output_path.display());
    println!(
        "merged {} nodes / {} edges down to {} nodes / {} edges",
        graph.node_count(),
        graph.edge_count(),
        merged.node_count(),
        merged.edge_count()
    );

    if let (Some(dims), Some(raster_out)) = (config.rasterize, &config.raster_output) {
        let dims = Dims::new(dims[0], dims[1], dims[2]).map_err(oops)?;
        let start = Instant::now();
        let vol = rasterize_skeleton(&merged, dims).map_err(oops)?;
        manifest.stage("rasterize", start.elapsed());
        let raster_path = PathBuf::from(raster_out);
        write_volume(&vol, &raster_path).map_err(oops)?;
        let (json, raw) = volume_paths(&raster_path);
        manifest.output(&json);
        manifest.output(&raw);
        println!("wrote {}", raw.display());
    }

    let mpath = manifest_path(&output_path);
    manifest.write(&mpath)?;
    println!("wrote {}", mpath.display());
    Ok(())
}

fn run_info(config: InfoConfig) -> Result<(), String> {
    let vol = read_volume_any(Path::new(&config.input)).map_err(oops)?;
    let dims = vol.dims();
    let (lo, hi) = vol.min_max();
    let mean = vol.data().iter().map(|&v| v as f64).sum::<f64>() / dims.len() as f64;
    let mut sorted: Vec<f32> = vol.data().to_vec();
    sorted.sort_unstable_by(f32::total_cmp);
    let median = sorted[dims.len() / 2];
    println!("dims     {}", dims);
    println!("voxels   {}", dims.len());
    println!("kind     {}", if dims.is_2d() { "2d image" } else { "3d volume" });
    println!("min      {lo}");
    println!("max      {hi}");
    println!("mean     {mean:.6}");
    println!("median   {median}");

    if let Some(pgm) = &config.pgm {
        let z = config.slice.unwrap_or(dims.nz / 2);
        let pgm_path = PathBuf::from(pgm);
        write_slice_pgm(&vol, z, &pgm_path).map_err(oops)?;
        println!("wrote {}", pgm_path.display());
        let mut manifest = Manifest::new("info", serde_json::to_value(&config).unwrap());
        manifest.output(&pgm_path);
        let mpath = manifest_path(&pgm_path);
        manifest.write(&mpath)?;
        println!("wrote {}", mpath.display());
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), String> {
    let dims = Dims::new(args.dims[0], args.dims[1], args.dims[2]).map_err(oops)?;
    let mut rng = SplitMix64::new(0);
    let data: Vec<f32> = (0..dims.len()).map(|_| rng.next_f64() as f32).collect();
    let vol = Volume::from_vec(dims, data).map_err(oops)?;

    let pipeline = PipelineConfig {
        epsilon: args.epsilon,
        k_directions: args.directions,
        mode: CombineMode::All,
        step_hint: args.step,
        invert: false,
        normalize_output: false,
    };
    let total = Instant::now();
    let (_, _, timings) = run_pipeline_timed(&vol, &pipeline).map_err(oops)?;
    let total = total.elapsed();

    let voxels = dims.len() as f64;
    let rate = |d: std::time::Duration| voxels / d.as_secs_f64().max(1e-9);
    println!(
        "bench {} voxels, {} directions, epsilon {}, step {}, {} threads",
        dims.len(),
        args.directions,
        args.epsilon,
        args.step,
        rayon::current_num_threads()
    );
    println!(
        "  line sweep       {:>8.2}s  {:>12.0} voxels/s  (line_max, line_mean, line_dev)",
        timings.line_sweep.as_secs_f64(),
        rate(timings.line_sweep)
    );
    println!(
        "  alignment sweep  {:>8.2}s  {:>12.0} voxels/s  (align_max, align_mean, align_dev)",
        timings.alignment_sweep.as_secs_f64(),
        rate(timings.alignment_sweep)
    );
    println!(
        "  combine          {:>8.2}s  {:>12.0} voxels/s",
        timings.combine.as_secs_f64(),
        rate(timings.combine)
    );
    println!(
        "  total            {:>8.2}s  {:>12.0} voxels/s",
        total.as_secs_f64(),
        rate(total)
    );
    Ok(())
}
