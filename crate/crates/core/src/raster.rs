use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer sample model of a light field or image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> u16 {
        match self {
            BitDepth::Eight => u8::MAX as u16,
            BitDepth::Sixteen => u16::MAX,
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }
}

impl TryFrom<u8> for BitDepth {
    type Error = String;

    fn try_from(bits: u8) -> Result<Self, String> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(format!("unsupported bit depth {other}, expected 8 or 16")),
        }
    }
}

impl From<BitDepth> for u8 {
    fn from(depth: BitDepth) -> u8 {
        depth.bits()
    }
}

/// A 2D raster of `height × width × channels` integer samples, row-major
/// with interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    height: usize,
    width: usize,
    channels: usize,
    bit_depth: BitDepth,
    data: Vec<u16>,
}

impl Image {
    pub fn new(
        height: usize,
        width: usize,
        channels: usize,
        bit_depth: BitDepth,
        data: Vec<u16>,
    ) -> Result<Self> {
        let expected = height * width * channels;
        if data.len() != expected {
            return Err(Error::Geometry(format!(
                "image buffer holds {} samples, expected {height}x{width}x{channels} = {expected}",
                data.len()
            )));
        }
        Ok(Image {
            height,
            width,
            channels,
            bit_depth,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize, bit_depth: BitDepth) -> Self {
        Image {
            height,
            width,
            channels,
            bit_depth,
            data: vec![0; height * width * channels],
        }
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        channels: usize,
        bit_depth: BitDepth,
        mut fill: impl FnMut(usize, usize, usize) -> u16,
    ) -> Self {
        let mut data = Vec::with_capacity(height * width * channels);
        for x in 0..height {
            for y in 0..width {
                for c in 0..channels {
                    data.push(fill(x, y, c));
                }
            }
        }
        Image {
            height,
            width,
            channels,
            bit_depth,
            data,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u16> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> u16 {
        debug_assert!(x < self.height && y < self.width && c < self.channels);
        self.data[(x * self.width + y) * self.channels + c]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: u16) {
        debug_assert!(x < self.height && y < self.width && c < self.channels);
        self.data[(x * self.width + y) * self.channels + c] = value;
    }

    /// Channel mean at `(x, y)` in normalized `[0, 1]` units.
    pub fn intensity(&self, x: usize, y: usize) -> f64 {
        let base = (x * self.width + y) * self.channels;
        let sum: f64 = self.data[base..base + self.channels]
            .iter()
            .map(|&s| s as f64)
            .sum();
        sum / (self.channels as f64 * self.bit_depth.max_value() as f64)
    }

    /// Grayscale intensities in normalized units, row-major.
    pub fn to_intensity(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.height * self.width);
        for x in 0..self.height {
            for y in 0..self.width {
                out.push(self.intensity(x, y));
            }
        }
        out
    }
}
