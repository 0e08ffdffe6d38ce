//! Dense voxel grids and their on-disk formats.
//!
//! A [`Volume`] stores one `f32` per voxel, x-fastest (then y, then z), with
//! voxel centers at integer coordinates `(i, j, k)`. A 2D image is a volume
//! with `nz == 1`. A [`VectorField`] stores one `[f32; 3]` per voxel in the
//! same layout.
//!
//! Interpolation rules used throughout the crate:
//! - scalars: trilinear, with everything outside the grid reading as zero;
//! - vectors: nearest neighbour only (the stored directions are axial, so
//!   averaging `v` and `-v` would cancel), ties round toward the lower index,
//!   zero vector outside the grid.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid extents. All three are at least 1; `nz == 1` marks a 2D image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dims {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Dims {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || nz == 0 {
            return Err(Error::InvalidDims(nx, ny, nz));
        }
        Ok(Dims { nx, ny, nz })
    }

    /// Total voxel count.
    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Linear index of voxel `(i, j, k)`, x-fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }

    pub fn is_2d(&self) -> bool {
        self.nz == 1
    }

    /// Spatial dimensionality: 2 when `nz == 1`, else 3.
    pub fn dim(&self) -> u8 {
        if self.is_2d() {
            2
        } else {
            3
        }
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.nz)
    }
}

/// Dense scalar grid, `f32` per voxel, finite everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Volume {
    dims: Dims,
    data: Vec<f32>,
}

impl Volume {
    pub fn zeros(dims: Dims) -> Self {
        Volume {
            dims,
            data: vec![0.0; dims.len()],
        }
    }

    pub fn filled(dims: Dims, value: f32) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Volume {
            dims,
            data: vec![value; dims.len()],
        })
    }

    /// Wraps an existing buffer. The length must match `dims` and every value
    /// must be finite.
    pub fn from_vec(dims: Dims, data: Vec<f32>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::DataLength {
                expected: dims.len(),
                actual: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Volume { dims, data })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f32 {
        self.data[self.dims.index(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f32) {
        let idx = self.dims.index(i, j, k);
        self.data[idx] = value;
    }

    /// Minimum and maximum voxel value.
    pub fn min_max(&self) -> (f32, f32) {
        let mut lo = f32::INFINITY;
        let mut hi = f32::NEG_INFINITY;
        for &v in &self.data {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        (lo, hi)
    }

    /// Trilinear interpolation at an arbitrary point, in f64.
    ///
    /// Points outside the grid read as zero, so the result fades to zero
    /// across the last voxel instead of clamping. Each axis interpolates as
    /// `a + t * (b - a)`, which reproduces voxel values exactly at centers
    /// and is exact on constant volumes away from the boundary.
    #[inline]
    pub fn sample(&self, p: [f64; 3]) -> f64 {
        let nx = self.dims.nx as f64;
        let ny = self.dims.ny as f64;
        let nz = self.dims.nz as f64;
        // Outside [-1, n) on any axis every corner weight or value is zero.
        // Written so that NaN coordinates also fall through to zero.
        if !(p[0] > -1.0 && p[0] < nx && p[1] > -1.0 && p[1] < ny && p[2] > -1.0 && p[2] < nz) {
            return 0.0;
        }
        let xf = p[0].floor();
        let yf = p[1].floor();
        let zf = p[2].floor();
        let i0 = xf as i64;
        let j0 = yf as i64;
        let k0 = zf as i64;
        let fx = p[0] - xf;
        let fy = p[1] - yf;
        let fz = p[2] - zf;

        let fetch = |i: i64, j: i64, k: i64| -> f64 {
            if i < 0
                || j < 0
                || k < 0
                || i >= self.dims.nx as i64
                || j >= self.dims.ny as i64
                || k >= self.dims.nz as i64
            {
                0.0
            } else {
                self.data[self.dims.index(i as usize, j as usize, k as usize)] as f64
            }
        };

        let c000 = fetch(i0, j0, k0);
        let c100 = fetch(i0 + 1, j0, k0);
        let c010 = fetch(i0, j0 + 1, k0);
        let c110 = fetch(i0 + 1, j0 + 1, k0);
        let c001 = fetch(i0, j0, k0 + 1);
        let c101 = fetch(i0 + 1, j0, k0 + 1);
        let c011 = fetch(i0, j0 + 1, k0 + 1);
        let c111 = fetch(i0 + 1, j0 + 1, k0 + 1);

        let c00 = c000 + fx * (c100 - c000);
        let c10 = c010 + fx * (c110 - c010);
        let c01 = c001 + fx * (c101 - c001);
        let c11 = c011 + fx * (c111 - c011);

        let c0 = c00 + fy * (c10 - c00);
        let c1 = c01 + fy * (c11 - c01);

        c0 + fz * (c1 - c0)
    }
}

/// Dense 3-vector grid in the same layout as [`Volume`].
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    dims: Dims,
    data: Vec<f32>,
}

impl VectorField {
    pub fn zeros(dims: Dims) -> Self {
        VectorField {
            dims,
            data: vec![0.0; 3 * dims.len()],
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Raw storage: three consecutive `f32` per voxel, x-fastest.
    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> [f32; 3] {
        let at = 3 * self.dims.index(i, j, k);
        [self.data[at], self.data[at + 1], self.data[at + 2]]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: [f32; 3]) {
        let at = 3 * self.dims.index(i, j, k);
        self.data[at..at + 3].copy_from_slice(&v);
    }

    /// Nearest-neighbour lookup, in f64 components.
    ///
    /// Halfway points round toward the lower index; outside the grid the
    /// field reads as the zero vector.
    #[inline]
    pub fn sample_nearest(&self, p: [f64; 3]) -> [f64; 3] {
        let i = (p[0] - 0.5).ceil();
        let j = (p[1] - 0.5).ceil();
        let k = (p[2] - 0.5).ceil();
        if !(i >= 0.0
            && i < self.dims.nx as f64
            && j >= 0.0
            && j < self.dims.ny as f64
            && k >= 0.0
            && k < self.dims.nz as f64)
        {
            return [0.0, 0.0, 0.0];
        }
        let at = 3 * self.dims.index(i as usize, j as usize, k as usize);
        [
            self.data[at] as f64,
            self.data[at + 1] as f64,
            self.data[at + 2] as f64,
        ]
    }
}

/// JSON sidecar written next to every `.raw` payload.
#[derive(Serialize, Deserialize)]
struct VolumeHeader {
    dims: Vec<usize>,
    dtype: String,
    order: String,
    endianness: String,
}

/// Resolves the `.json` / `.raw` pair for a volume path. The path may point
/// at either file or at the common stem.
/// Resolves the `(header, raw)` file pair for a volume path. A `.json` or
/// `.raw` extension selects the pair directly; any other path is treated as
/// a stem and gets both extensions appended.
pub fn volume_paths(path: &Path) -> (PathBuf, PathBuf) {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => (path.to_path_buf(), path.with_extension("raw")),
        Some("raw") => (path.with_extension("json"), path.to_path_buf()),
        _ => {
            let mut header = path.as_os_str().to_os_string();
            header.push(".json");
            let mut raw = path.as_os_str().to_os_string();
            raw.push(".raw");
            (PathBuf::from(header), PathBuf::from(raw))
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Serializes `f32` values as little-endian bytes.
pub(crate) fn f32s_to_le_bytes(values: &[f32]) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(4 * values.len());
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes
}

fn le_bytes_to_f32s(bytes: &[u8]) -> Vec<f32> {
    bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect()
}

/// Writes `<stem>.json` + `<stem>.raw`. Round-trips bit-exactly through
/// [`read_volume`].
pub fn write_volume(vol: &Volume, path: &Path) -> Result<()> {
    let (header_path, raw_path) = volume_paths(path);
    let d = vol.dims();
    let header = VolumeHeader {
        dims: vec![d.nx, d.ny, d.nz],
        dtype: "f32".to_string(),
        order: "x-fastest".to_string(),
        endianness: "little".to_string(),
    };
    let text = serde_json::to_string_pretty(&header)?;
    fs::write(&header_path, text).map_err(io_err(&header_path))?;
    fs::write(&raw_path, f32s_to_le_bytes(vol.data())).map_err(io_err(&raw_path))?;
    Ok(())
}

/// Reads a `.json` + `.raw` pair written by [`write_volume`].
///
/// Rejects unknown dtype/order/endianness, size mismatches between the
/// header and the payload, and non-finite values.
pub fn read_volume(path: &Path) -> Result<Volume> {
    let (header_path, raw_path) = volume_paths(path);
    let text = fs::read_to_string(&header_path).map_err(io_err(&header_path))?;
    let header: VolumeHeader = serde_json::from_str(&text)?;

    let bad_header = |reason: String| Error::Header {
        path: header_path.clone(),
        reason,
    };
    let dims = match header.dims.as_slice() {
        // A missing third entry means a 2D image.
        &[nx, ny] => Dims::new(nx, ny, 1)?,
        &[nx, ny, nz] => Dims::new(nx, ny, nz)?,
        other => {
            return Err(bad_header(format!(
                "dims must have 2 or 3 entries, got {}",
                other.len()
            )))
        }
    };
    if header.dtype != "f32" {
        return Err(bad_header(format!("unsupported dtype {:?}", header.dtype)));
    }
    if header.order != "x-fastest" {
        return Err(bad_header(format!("unsupported order {:?}", header.order)));
    }
    if header.endianness != "little" {
        return Err(bad_header(format!(
            "unsupported endianness {:?}",
            header.endianness
        )));
    }

    let bytes = fs::read(&raw_path).map_err(io_err(&raw_path))?;
    if bytes.len() != 4 * dims.len() {
        return Err(Error::SizeMismatch {
            expected: dims.len(),
            actual: bytes.len() / 4,
        });
    }
    Volume::from_vec(dims, le_bytes_to_f32s(&bytes))
}

fn mrc_i32(header: &[u8], byte_offset: usize) -> i32 {
    i32::from_le_bytes([
        header[byte_offset],
        header[byte_offset + 1],
        header[byte_offset + 2],
        header[byte_offset + 3],
    ])
}

/// Reads an MRC2014 mode-2 (float32) file into a [`Volume`].
///
/// Only the fields needed to locate the data block are interpreted: NX, NY,
/// NZ, MODE and NSYMBT. The extended header is skipped. Write support is
/// intentionally absent.
pub fn read_mrc(path: &Path) -> Result<Volume> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    if bytes.len() < 1024 {
        return Err(Error::UnsupportedFormat(format!(
            "{}: shorter than an MRC header",
            path.display()
        )));
    }
    if &bytes[208..212] != b"MAP " {
        return Err(Error::UnsupportedFormat(format!(
            "{}: missing MAP stamp, not an MRC2014 file",
            path.display()
        )));
    }
    let nx = mrc_i32(&bytes, 0);
    let ny = mrc_i32(&bytes, 4);
    let nz = mrc_i32(&bytes, 8);
    let mode = mrc_i32(&bytes, 12);
    let nsymbt = mrc_i32(&bytes, 92);
    if mode != 2 {
        return Err(Error::UnsupportedFormat(format!(
            "{}: MRC mode {} (only mode 2 / float32 is supported)",
            path.display(),
            mode
        )));
    }
    if nx <= 0 || ny <= 0 || nz <= 0 || nsymbt < 0 {
        return Err(Error::UnsupportedFormat(format!(
            "{}: invalid MRC dimensions {}x{}x{}",
            path.display(),
            nx,
            ny,
            nz
        )));
    }
    let dims = Dims::new(nx as usize, ny as usize, nz as usize)?;
    let start = 1024 + nsymbt as usize;
    let need = start + 4 * dims.len();
    if bytes.len() < need {
        return Err(Error::SizeMismatch {
            expected: dims.len(),
            actual: bytes.len().saturating_sub(start) / 4,
        });
    }
    Volume::from_vec(dims, le_bytes_to_f32s(&bytes[start..need]))
}

/// Reads a volume in any supported format, keyed on the file extension
/// (`.mrc` / `.map` for MRC2014, otherwise the `.json` + `.raw` pair).
pub fn read_volume_any(path: &Path) -> Result<Volume> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mrc") | Some("map") => read_mrc(path),
        _ => read_volume(path),
    }
}

/// Exports one z-slice as a binary 8-bit PGM, min-max scaled over the slice.
/// A constant slice maps to all zeros.
pub fn write_slice_pgm(vol: &Volume, z: usize, path: &Path) -> Result<()> {
    let d = vol.dims();
    if z >= d.nz {
        return Err(Error::InvalidParameter(format!(
            "slice {} out of range for {}",
            z, d
        )));
    }
    let slice = &vol.data()[d.index(0, 0, z)..d.index(0, 0, z) + d.nx * d.ny];
    let mut lo = f32::INFINITY;
    let mut hi = f32::NEG_INFINITY;
    for &v in slice {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = (hi - lo) as f64;
    let mut out = Vec::with_capacity(64 + slice.len());
    write!(out, "P5\n{} {}\n255\n", d.nx, d.ny).expect("write to Vec");
    for &v in slice {
        let byte = if span > 0.0 {
            (((v - lo) as f64 / span) * 255.0).round() as u8
        } else {
            0
        };
        out.push(byte);
    }
    fs::write(path, out).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::SplitMix64;

    fn random_volume(dims: Dims, seed: u64) -> Volume {
        let mut rng = SplitMix64::new(seed);
        let data = (0..dims.len()).map(|_| rng.next_f64() as f32).collect();
        Volume::from_vec(dims, data).unwrap()
    }

    #[test]
    fn dims_reject_zero() {
        assert!(Dims::new(0, 4, 4).is_err());
        assert!(Dims::new(4, 4, 0).is_err());
        assert!(Dims::new(1, 1, 1).is_ok());
    }

    #[test]
    fn indexing_is_x_fastest() {
        let d = Dims::new(3, 4, 5).unwrap();
        assert_eq!(d.index(0, 0, 0), 0);
        assert_eq!(d.index(1, 0, 0), 1);
        assert_eq!(d.index(0, 1, 0), 3);
        assert_eq!(d.index(0, 0, 1), 12);
        assert_eq!(d.index(2, 3, 4), d.len() - 1);
    }

    #[test]
    fn from_vec_validates() {
        let d = Dims::new(2, 2, 1).unwrap();
        assert!(matches!(
            Volume::from_vec(d, vec![0.0; 3]),
            Err(Error::DataLength { .. })
        ));
        assert!(matches!(
            Volume::from_vec(d, vec![0.0, f32::NAN, 0.0, 0.0]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn sample_is_exact_at_voxel_centers() {
        let vol = random_volume(Dims::new(4, 3, 2).unwrap(), 7);
        for k in 0..2 {
            for j in 0..3 {
                for i in 0..4 {
                    let got = vol.sample([i as f64, j as f64, k as f64]);
                    assert_eq!(got, vol.get(i, j, k) as f64);
                }
            }
        }
    }

    #[test]
    fn sample_is_exact_on_constants_in_the_interior() {
        let vol = Volume::filled(Dims::new(5, 5, 5).unwrap(), 2.5).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..100 {
            let p = [
                1.0 + 2.0 * rng.next_f64(),
                1.0 + 2.0 * rng.next_f64(),
                1.0 + 2.0 * rng.next_f64(),
            ];
            assert_eq!(vol.sample(p), 2.5);
        }
    }

    #[test]
    fn sample_interpolates_linearly_between_two_voxels() {
        let vol = Volume::from_vec(Dims::new(2, 1, 1).unwrap(), vec![0.0, 1.0]).unwrap();
        assert_eq!(vol.sample([0.25, 0.0, 0.0]), 0.25);
        assert_eq!(vol.sample([0.5, 0.0, 0.0]), 0.5);
    }

    #[test]
    fn sample_fades_to_zero_outside() {
        let vol = Volume::filled(Dims::new(2, 2, 2).unwrap(), 1.0).unwrap();
        // Half a voxel out: half the corners are gone.
        assert_eq!(vol.sample([-0.5, 0.0, 0.0]), 0.5);
        // A full voxel out: everything reads zero.
        assert_eq!(vol.sample([-1.0, 0.0, 0.0]), 0.0);
        assert_eq!(vol.sample([5.0, 0.0, 0.0]), 0.0);
        assert_eq!(vol.sample([0.0, 0.0, 1e12]), 0.0);
        assert_eq!(vol.sample([-1e12, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn sample_of_nonnegative_volume_is_nonnegative() {
        let vol = random_volume(Dims::new(6, 5, 4).unwrap(), 3);
        let mut rng = SplitMix64::new(4);
        for _ in 0..500 {
            let p = [
                rng.next_f64() * 8.0 - 1.5,
                rng.next_f64() * 7.0 - 1.5,
                rng.next_f64() * 6.0 - 1.5,
            ];
            assert!(vol.sample(p) >= 0.0);
        }
    }

    #[test]
    fn nearest_rounds_halfway_toward_lower_index() {
        let d = Dims::new(3, 1, 1).unwrap();
        let mut f = VectorField::zeros(d);
        f.set(0, 0, 0, [1.0, 0.0, 0.0]);
        f.set(1, 0, 0, [0.0, 1.0, 0.0]);
        f.set(2, 0, 0, [0.0, 0.0, 1.0]);
        assert_eq!(f.sample_nearest([0.49, 0.0, 0.0]), [1.0, 0.0, 0.0]);
        assert_eq!(f.sample_nearest([0.5, 0.0, 0.0]), [1.0, 0.0, 0.0]);
        assert_eq!(f.sample_nearest([0.51, 0.0, 0.0]), [0.0, 1.0, 0.0]);
        assert_eq!(f.sample_nearest([1.5, 0.0, 0.0]), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn nearest_is_zero_outside() {
        let d = Dims::new(2, 2, 1).unwrap();
        let mut f = VectorField::zeros(d);
        f.set(0, 0, 0, [1.0, 1.0, 1.0]);
        assert_eq!(f.sample_nearest([-0.6, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        assert_eq!(f.sample_nearest([0.0, 1.6, 0.0]), [0.0, 0.0, 0.0]);
        // The halfway point ties toward the lower index, which is outside.
        assert_eq!(f.sample_nearest([-0.5, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        assert_eq!(f.sample_nearest([-0.49, 0.0, 0.0]), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn volume_roundtrip_is_bit_exact() {
        let dir = std::env::temp_dir().join("oft_vol_roundtrip");
        fs::create_dir_all(&dir).unwrap();
        let vol = random_volume(Dims::new(3, 4, 5).unwrap(), 99);
        let base = dir.join("vol");
        write_volume(&vol, &base).unwrap();
        let back = read_volume(&base).unwrap();
        assert_eq!(back.dims(), vol.dims());
        for (a, b) in vol.data().iter().zip(back.data()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // Reading via either half of the pair works too.
        assert_eq!(read_volume(&dir.join("vol.json")).unwrap(), vol);
        assert_eq!(read_volume(&dir.join("vol.raw")).unwrap(), vol);
    }

    #[test]
    fn read_rejects_size_mismatch() {
        let dir = std::env::temp_dir().join("oft_vol_mismatch");
        fs::create_dir_all(&dir).unwrap();
        let vol = random_volume(Dims::new(10, 1, 1).unwrap(), 1);
        write_volume(&vol, &dir.join("v")).unwrap();
        // Truncate the payload to 9 values.
        let bytes = fs::read(dir.join("v.raw")).unwrap();
        fs::write(dir.join("v.raw"), &bytes[..36]).unwrap();
        assert!(matches!(
            read_volume(&dir.join("v")),
            Err(Error::SizeMismatch {
                expected: 10,
                actual: 9
            })
        ));
    }

    #[test]
    fn read_rejects_bad_header_and_nonfinite_payload() {
        let dir = std::env::temp_dir().join("oft_vol_bad");
        fs::create_dir_all(&dir).unwrap();

        fs::write(
            dir.join("bad.json"),
            r#"{"dims":[2,1,1],"dtype":"f64","order":"x-fastest","endianness":"little"}"#,
        )
        .unwrap();
        fs::write(dir.join("bad.raw"), [0u8; 8]).unwrap();
        assert!(matches!(
            read_volume(&dir.join("bad")),
            Err(Error::Header { .. })
        ));

        fs::write(
            dir.join("nan.json"),
            r#"{"dims":[2,1,1],"dtype":"f32","order":"x-fastest","endianness":"little"}"#,
        )
        .unwrap();
        let mut bytes = 1.0f32.to_le_bytes().to_vec();
        bytes.extend_from_slice(&f32::NAN.to_le_bytes());
        fs::write(dir.join("nan.raw"), bytes).unwrap();
        assert!(matches!(
            read_volume(&dir.join("nan")),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn two_entry_dims_read_as_a_2d_image() {
        let dir = std::env::temp_dir().join("oft_vol_2d");
        fs::create_dir_all(&dir).unwrap();
        fs::write(
            dir.join("img.json"),
            r#"{"dims":[3,2],"dtype":"f32","order":"x-fastest","endianness":"little"}"#,
        )
        .unwrap();
        let values: Vec<f32> = (0..6).map(|v| v as f32).collect();
        fs::write(dir.join("img.raw"), f32s_to_le_bytes(&values)).unwrap();
        let vol = read_volume(&dir.join("img")).unwrap();
        assert_eq!(vol.dims(), Dims::new(3, 2, 1).unwrap());
        assert!(vol.dims().is_2d());
        assert_eq!(vol.get(2, 1, 0), 5.0);
    }

    /// Builds a minimal MRC2014 mode-2 byte stream in memory.
    fn mrc_bytes(nx: i32, ny: i32, nz: i32, nsymbt: i32, data: &[f32]) -> Vec<u8> {
        let mut bytes = vec![0u8; 1024];
        bytes[0..4].copy_from_slice(&nx.to_le_bytes());
        bytes[4..8].copy_from_slice(&ny.to_le_bytes());
        bytes[8..12].copy_from_slice(&nz.to_le_bytes());
        bytes[12..16].copy_from_slice(&2i32.to_le_bytes());
        bytes[92..96].copy_from_slice(&nsymbt.to_le_bytes());
        bytes[208..212].copy_from_slice(b"MAP ");
        bytes.extend_from_slice(&vec![0u8; nsymbt as usize]);
        bytes.extend_from_slice(&f32s_to_le_bytes(data));
        bytes
    }

    #[test]
    fn mrc_mode2_reads_with_extended_header() {
        let dir = std::env::temp_dir().join("oft_mrc");
        fs::create_dir_all(&dir).unwrap();
        let data: Vec<f32> = (0..24).map(|v| v as f32 * 0.5).collect();
        fs::write(dir.join("t.mrc"), mrc_bytes(2, 3, 4, 128, &data)).unwrap();
        let vol = read_mrc(&dir.join("t.mrc")).unwrap();
        assert_eq!(vol.dims(), Dims::new(2, 3, 4).unwrap());
        assert_eq!(vol.data(), &data[..]);
        // Same file through the extension-dispatching entry point.
        let again = read_volume_any(&dir.join("t.mrc")).unwrap();
        assert_eq!(again, vol);
    }

    #[test]
    fn mrc_rejects_other_modes() {
        let dir = std::env::temp_dir().join("oft_mrc_bad");
        fs::create_dir_all(&dir).unwrap();
        let mut bytes = mrc_bytes(2, 2, 1, 0, &[0.0; 4]);
        bytes[12..16].copy_from_slice(&1i32.to_le_bytes());
        fs::write(dir.join("m1.mrc"), bytes).unwrap();
        assert!(matches!(
            read_mrc(&dir.join("m1.mrc")),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn pgm_export_scales_min_max() {
        let dir = std::env::temp_dir().join("oft_pgm");
        fs::create_dir_all(&dir).unwrap();
        let vol =
            Volume::from_vec(Dims::new(2, 2, 1).unwrap(), vec![1.0, 2.0, 3.0, 5.0]).unwrap();
        write_slice_pgm(&vol, 0, &dir.join("s.pgm")).unwrap();
        let bytes = fs::read(dir.join("s.pgm")).unwrap();
        assert!(bytes.starts_with(b"P5\n2 2\n255\n"));
        let px = &bytes[bytes.len() - 4..];
        assert_eq!(px, &[0, 64, 128, 255]);

        // Constant slices export as all zeros.
        let flat = Volume::filled(Dims::new(2, 2, 1).unwrap(), 4.0).unwrap();
        write_slice_pgm(&flat, 0, &dir.join("flat.pgm")).unwrap();
        let bytes = fs::read(dir.join("flat.pgm")).unwrap();
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 0, 0, 0]);
    }
}
