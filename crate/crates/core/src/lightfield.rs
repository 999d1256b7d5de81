//! The dense 4D light-field container.
//!
//! Samples are stored in `(u, v, x, y, c)` order: angular row, angular
//! column, spatial row, spatial column, channel. Angular indices vary
//! slowest, so every sub-aperture view is one contiguous slice.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BitDepth, Image};

/// Shape of a light field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub angular_rows: usize,
    pub angular_cols: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
}

impl Dims {
    pub const fn new(
        angular_rows: usize,
        angular_cols: usize,
        height: usize,
        width: usize,
        channels: usize,
    ) -> Self {
        Dims {
            angular_rows,
            angular_cols,
            height,
            width,
            channels,
        }
    }

    pub fn sample_count(&self) -> usize {
        self.angular_rows * self.angular_cols * self.height * self.width * self.channels
    }

    pub fn view_len(&self) -> usize {
        self.height * self.width * self.channels
    }

    /// First violated shape invariant, if any.
    pub fn check(&self) -> Option<Violation> {
        let axes = [
            ("angular_rows", self.angular_rows),
            ("angular_cols", self.angular_cols),
            ("height", self.height),
            ("width", self.width),
        ];
        if let Some((axis, _)) = axes.iter().find(|(_, n)| *n == 0) {
            return Some(Violation::ZeroDimension { axis });
        }
        if self.channels != 1 && self.channels != 3 {
            return Some(Violation::Channels {
                channels: self.channels,
            });
        }
        None
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x{}x{}x{}x{}",
            self.angular_rows, self.angular_cols, self.height, self.width, self.channels
        )
    }
}

/// An invariant broken by a candidate light field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension { axis: &'static str },
    Channels { channels: usize },
    SizeMismatch { expected: usize, actual: usize },
    SampleRange { index: usize, value: u16, max: u16 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension { axis } => write!(f, "{axis} must be positive"),
            Violation::Channels { channels } => {
                write!(
                    f,
                    "channel count {channels} not supported (expected 1 or 3)"
                )
            }
            Violation::SizeMismatch { expected, actual } => write!(
                f,
                "sample buffer holds {actual} values, expected U*V*H*W*C = {expected}"
            ),
            Violation::SampleRange { index, value, max } => {
                write!(
                    f,
                    "sample {index} has value {value} above bit-depth maximum {max}"
                )
            }
        }
    }
}

/// Checks a raw sample buffer against the light-field invariants without
/// constructing anything. Returns the first violation found.
pub fn validate_parts(dims: Dims, bit_depth: BitDepth, samples: &[u16]) -> Option<Violation> {
    if let Some(v) = dims.check() {
        return Some(v);
    }
    let expected = dims.sample_count();
    if samples.len() != expected {
        return Some(Violation::SizeMismatch {
            expected,
            actual: samples.len(),
        });
    }
    let max = bit_depth.max_value();
    samples
        .iter()
        .position(|&s| s > max)
        .map(|index| Violation::SampleRange {
            index,
            value: samples[index],
            max,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ViewIndex {
    pub u: usize,
    pub v: usize,
}

impl ViewIndex {
    pub const fn new(u: usize, v: usize) -> Self {
        ViewIndex { u, v }
    }

    pub fn check(&self, dims: &Dims) -> Result<()> {
        if self.u >= dims.angular_rows {
            return Err(Error::Index {
                axis: "angular row",
                index: self.u,
                bound: dims.angular_rows,
            });
        }
        if self.v >= dims.angular_cols {
            return Err(Error::Index {
                axis: "angular col",
                index: self.v,
                bound: dims.angular_cols,
            });
        }
        Ok(())
    }
}

/// Which view counts as the middle perspective.
///
/// The default is `(floor(U/2), floor(V/2))`; for even grids that picks the
/// lower-right of the four central views.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CenterPolicy {
    pub row: usize,
    pub col: usize,
}

impl CenterPolicy {
    pub const fn new(row: usize, col: usize) -> Self {
        CenterPolicy { row, col }
    }

    pub fn middle(dims: &Dims) -> Self {
        CenterPolicy {
            row: dims.angular_rows / 2,
            col: dims.angular_cols / 2,
        }
    }

    pub fn view(&self) -> ViewIndex {
        ViewIndex::new(self.row, self.col)
    }

    pub fn check(&self, dims: &Dims) -> Result<()> {
        self.view().check(dims)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightField {
    dims: Dims,
    bit_depth: BitDepth,
    samples: Vec<u16>,
}

impl LightField {
    pub fn from_samples(dims: Dims, bit_depth: BitDepth, samples: Vec<u16>) -> Result<Self> {
        if let Some(v) = validate_parts(dims, bit_depth, &samples) {
            return Err(Error::InvalidDimension(v));
        }
        Ok(LightField {
            dims,
            bit_depth,
            samples,
        })
    }

    /// Builds a light field by evaluating `fill(u, v, x, y, c)` at every
    /// index, in storage order.
    pub fn from_fn(
        dims: Dims,
        bit_depth: BitDepth,
        mut fill: impl FnMut(usize, usize, usize, usize, usize) -> u16,
    ) -> Result<Self> {
        if let Some(v) = dims.check() {
            return Err(Error::InvalidDimension(v));
        }
        let mut samples = Vec::with_capacity(dims.sample_count());
        for u in 0..dims.angular_rows {
            for v in 0..dims.angular_cols {
                for x in 0..dims.height {
                    for y in 0..dims.width {
                        for c in 0..dims.channels {
                            samples.push(fill(u, v, x, y, c));
                        }
                    }
                }
            }
        }
        Self::from_samples(dims, bit_depth, samples)
    }

    /// Assembles a light field from row-major views (`views[u * V + v]`).
    pub fn from_views(angular_rows: usize, angular_cols: usize, views: &[Image]) -> Result<Self> {
        let first = views
            .first()
            .ok_or_else(|| Error::Geometry("no views supplied".into()))?;
        if views.len() != angular_rows * angular_cols {
            return Err(Error::Geometry(format!(
                "{} views supplied for a {angular_rows}x{angular_cols} grid",
                views.len()
            )));
        }
        let dims = Dims::new(
            angular_rows,
            angular_cols,
            first.height(),
            first.width(),
            first.channels(),
        );
        let mut samples = Vec::with_capacity(dims.sample_count());
        for (i, view) in views.iter().enumerate() {
            if (
                view.height(),
                view.width(),
                view.channels(),
                view.bit_depth(),
            ) != (dims.height, dims.width, dims.channels, first.bit_depth())
            {
                return Err(Error::Geometry(format!(
                    "view ({}, {}) has shape {}x{}x{}, expected {}x{}x{}",
                    i / angular_cols,
                    i % angular_cols,
                    view.height(),
                    view.width(),
                    view.channels(),
                    dims.height,
                    dims.width,
                    dims.channels
                )));
            }
            samples.extend_from_slice(view.data());
        }
        Self::from_samples(dims, first.bit_depth(), samples)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    /// Always `None` for a constructed instance; kept so callers can treat
    /// loaded and built light fields uniformly.
    pub fn validate(&self) -> Option<Violation> {
        validate_parts(self.dims, self.bit_depth, &self.samples)
    }

    #[inline]
    pub fn offset(&self, u: usize, v: usize, x: usize, y: usize, c: usize) -> usize {
        let d = &self.dims;
        debug_assert!(
            u < d.angular_rows
                && v < d.angular_cols
                && x < d.height
                && y < d.width
                && c < d.channels
        );
        (((u * d.angular_cols + v) * d.height + x) * d.width + y) * d.channels + c
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize, x: usize, y: usize, c: usize) -> u16 {
        self.samples[self.offset(u, v, x, y, c)]
    }

    /// Checked read.
    pub fn sample(&self, u: usize, v: usize, x: usize, y: usize, c: usize) -> Result<u16> {
        ViewIndex::new(u, v).check(&self.dims)?;
        check_axis("spatial row", x, self.dims.height)?;
        check_axis("spatial col", y, self.dims.width)?;
        check_axis("channel", c, self.dims.channels)?;
        Ok(self.get(u, v, x, y, c))
    }

    /// Checked write; values above the bit-depth maximum are rejected.
    pub fn set_sample(
        &mut self,
        u: usize,
        v: usize,
        x: usize,
        y: usize,
        c: usize,
        value: u16,
    ) -> Result<()> {
        self.sample(u, v, x, y, c)?;
        let max = self.bit_depth.max_value();
        if value > max {
            return Err(Error::Parameter(format!(
                "sample value {value} exceeds {}-bit maximum {max}",
                self.bit_depth.bits()
            )));
        }
        let at = self.offset(u, v, x, y, c);
        self.samples[at] = value;
        Ok(())
    }

    /// The contiguous samples of one view.
    pub fn view_slice(&self, idx: ViewIndex) -> Result<&[u16]> {
        idx.check(&self.dims)?;
        let start = self.offset(idx.u, idx.v, 0, 0, 0);
        Ok(&self.samples[start..start + self.dims.view_len()])
    }
}

fn check_axis(axis: &'static str, index: usize, bound: usize) -> Result<()> {
    if index >= bound {
        return Err(Error::Index { axis, index, bound });
    }
    Ok(())
}

/// A finite 2D scalar field addressed in logical coordinates. Storage cell
/// `(r, c)` holds the value at logical `(r - origin_row, c - origin_col)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Texture {
    rows: usize,
    cols: usize,
    origin_row: isize,
    origin_col: isize,
    bit_depth: BitDepth,
    data: Vec<u16>,
}

impl Texture {
    pub fn new(
        rows: usize,
        cols: usize,
        origin: (isize, isize),
        bit_depth: BitDepth,
        data: Vec<u16>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Geometry(format!(
                "texture buffer holds {} values, expected {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Texture {
            rows,
            cols,
            origin_row: origin.0,
            origin_col: origin.1,
            bit_depth,
            data,
        })
    }

    /// Smallest texture that covers every read `synth_planar` makes for a
    /// light field of shape `(U, V, H, W)` at disparity `d`, filled from a
    /// field over logical coordinates.
    pub fn covering(
        angular: (usize, usize),
        spatial: (usize, usize),
        disparity: i64,
        bit_depth: BitDepth,
        field: impl Fn(isize, isize) -> u16,
    ) -> Self {
        let dims = Dims::new(angular.0, angular.1, spatial.0, spatial.1, 1);
        let center = CenterPolicy::middle(&dims);
        let (row_lo, row_hi) = read_span(angular.0, center.row, spatial.0, disparity);
        let (col_lo, col_hi) = read_span(angular.1, center.col, spatial.1, disparity);
        let rows = (row_hi - row_lo + 1) as usize;
        let cols = (col_hi - col_lo + 1) as usize;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(field(r as isize + row_lo, c as isize + col_lo));
            }
        }
        Texture {
            rows,
            cols,
            origin_row: -row_lo,
            origin_col: -col_lo,
            bit_depth,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    /// Value at logical `(i, j)`, or `None` outside the stored extent.
    pub fn at(&self, i: isize, j: isize) -> Option<u16> {
        let r = i + self.origin_row;
        let c = j + self.origin_col;
        if r < 0 || c < 0 || r as usize >= self.rows || c as usize >= self.cols {
            return None;
        }
        Some(self.data[r as usize * self.cols + c as usize])
    }
}

/// Logical read span `[lo, hi]` along one axis for `n` spatial samples and
/// angular extent `views` centered on `center`.
fn read_span(views: usize, center: usize, n: usize, disparity: i64) -> (isize, isize) {
    let first = disparity * (0 - center as i64);
    let last = disparity * (views as i64 - 1 - center as i64);
    let lo = first.min(last) as isize;
    let hi = (n as i64 - 1 + first.max(last)) as isize;
    (lo, hi)
}

/// Uniform white noise over logical coordinates: the value at `(i, j)`
/// depends only on `seed` and the coordinate, never on texture extent.
pub fn noise_field(seed: u64, bit_depth: BitDepth) -> impl Fn(isize, isize) -> u16 {
    let max = bit_depth.max_value() as u32;
    move |i, j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((i as i32 as u32 as u64) << 32) | (j as i32 as u32 as u64));
        (rng.next_u32() % (max + 1)) as u16
    }
}

/// Diagonal sawtooth ramp with a 256-sample period.
pub fn ramp_field(bit_depth: BitDepth) -> impl Fn(isize, isize) -> u16 {
    let scale = match bit_depth {
        BitDepth::Eight => 1,
        BitDepth::Sixteen => 257,
    };
    move |i, j| ((i + j).rem_euclid(256) as u16) * scale
}

/// Light field of a fronto-parallel textured plane at constant disparity.
///
/// `samples[u, v, x, y] = texture[x + d·(u − cu), y + d·(v − cv)]` with
/// `(cu, cv)` the default middle view. The output is grayscale and inherits
/// the texture's bit depth. Reads outside the texture are an error.
pub fn synth_planar(
    angular_rows: usize,
    angular_cols: usize,
    height: usize,
    width: usize,
    texture: &Texture,
    disparity: i64,
) -> Result<LightField> {
    let dims = Dims::new(angular_rows, angular_cols, height, width, 1);
    if let Some(v) = dims.check() {
        return Err(Error::InvalidDimension(v));
    }
    let center = CenterPolicy::middle(&dims);
    let (row_lo, row_hi) = read_span(angular_rows, center.row, height, disparity);
    let (col_lo, col_hi) = read_span(angular_cols, center.col, width, disparity);
    for (i, j) in [(row_lo, col_lo), (row_hi, col_hi)] {
        if texture.at(i, j).is_none() {
            return Err(Error::OutOfRange(format!(
                "disparity {disparity} on a {angular_rows}x{angular_cols} grid reads texture \
                 rows {row_lo}..={row_hi}, cols {col_lo}..={col_hi}; texture is {}x{} with origin ({}, {})",
                texture.rows, texture.cols, texture.origin_row, texture.origin_col
            )));
        }
    }
    LightField::from_fn(dims, texture.bit_depth, |u, v, x, y, _| {
        let i = x as isize + (disparity * (u as i64 - center.row as i64)) as isize;
        let j = y as isize + (disparity * (v as i64 - center.col as i64)) as isize;
        texture.at(i, j).expect("read span checked above")
    })
}
