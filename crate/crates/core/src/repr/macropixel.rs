//! Macro-pixel images: the middle perspective with each k×k spatial block
//! replaced by the k² angular samples of one anchor pixel.
//!
//! For output pixel `(r, c)`:
//!
//! ```text
//! block     (bi, bj) = (r / k, c / k)
//! offset    (a, b)   = (r % k, c % k)
//! anchor    (ax, ay) = (bi·k + ⌊(k−1)/2⌋, bj·k + ⌊(k−1)/2⌋)
//! out[r, c]          = lf[u0 + a, v0 + b, ax, ay]
//! ```
//!
//! where the k×k view window starts at `(cu − ⌊(k−1)/2⌋, cv − ⌊(k−1)/2⌋)`,
//! shifted inward when it would leave the angular grid. Blocks tile the
//! image with stride k, so the output never holds more pixels than the
//! source view.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lightfield::{CenterPolicy, Dims, LightField};
use crate::raster::Image;

/// What to do with the bottom/right remainder when H or W is not a
/// multiple of k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SizePolicy {
    /// Drop the remainder rows/cols.
    #[default]
    Crop,
    /// Keep H×W; partial border blocks reuse the nearest full block's anchor.
    Pad,
}

impl fmt::Display for SizePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizePolicy::Crop => "crop",
            SizePolicy::Pad => "pad",
        })
    }
}

impl FromStr for SizePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crop" => Ok(SizePolicy::Crop),
            "pad" => Ok(SizePolicy::Pad),
            other => Err(Error::Parameter(format!(
                "unknown size policy {other:?}, expected crop or pad"
            ))),
        }
    }
}

/// Source coordinates of one macro-pixel output sample (channel excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceIndex {
    pub u: usize,
    pub v: usize,
    pub x: usize,
    pub y: usize,
}

/// The resolved geometry of a macro-pixel construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MacroPixelLayout {
    pub k: usize,
    pub center: CenterPolicy,
    pub window_origin: (usize, usize),
    pub anchor_offset: usize,
    pub size_policy: SizePolicy,
    pub source_dims: Dims,
    pub out_height: usize,
    pub out_width: usize,
}

impl MacroPixelLayout {
    pub fn new(
        dims: Dims,
        k: usize,
        center: CenterPolicy,
        size_policy: SizePolicy,
    ) -> Result<Self> {
        let max = dims.angular_rows.min(dims.angular_cols);
        if k == 0 || k > max {
            return Err(Error::TradeOff { k, max });
        }
        center.check(&dims)?;
        let (out_height, out_width) = match size_policy {
            SizePolicy::Crop => {
                if dims.height < k || dims.width < k {
                    return Err(Error::EmptyOutput {
                        height: dims.height,
                        width: dims.width,
                        k,
                    });
                }
                (dims.height / k * k, dims.width / k * k)
            }
            SizePolicy::Pad => (dims.height, dims.width),
        };
        let anchor_offset = (k - 1) / 2;
        let window =
            |center: usize, views: usize| center.saturating_sub(anchor_offset).min(views - k);
        Ok(MacroPixelLayout {
            k,
            center,
            window_origin: (
                window(center.row, dims.angular_rows),
                window(center.col, dims.angular_cols),
            ),
            anchor_offset,
            size_policy,
            source_dims: dims,
            out_height,
            out_width,
        })
    }

    /// Spatial anchor along one axis for block `block` of an axis with `n`
    /// samples.
    fn anchor(&self, block: usize, n: usize) -> usize {
        let full = n / self.k;
        if full == 0 {
            // pad policy on a grid thinner than one block
            return self.anchor_offset.min(n - 1);
        }
        block.min(full - 1) * self.k + self.anchor_offset
    }

    pub fn map(&self, r: usize, c: usize) -> Result<SourceIndex> {
        if r >= self.out_height {
            return Err(Error::Index {
                axis: "output row",
                index: r,
                bound: self.out_height,
            });
        }
        if c >= self.out_width {
            return Err(Error::Index {
                axis: "output col",
                index: c,
                bound: self.out_width,
            });
        }
        let k = self.k;
        Ok(SourceIndex {
            u: self.window_origin.0 + r % k,
            v: self.window_origin.1 + c % k,
            x: self.anchor(r / k, self.source_dims.height),
            y: self.anchor(c / k, self.source_dims.width),
        })
    }
}

/// Pure index map: which source sample lands at output `(r, c)`.
pub fn macropixel_map(
    dims: Dims,
    k: usize,
    center: CenterPolicy,
    size_policy: SizePolicy,
    r: usize,
    c: usize,
) -> Result<SourceIndex> {
    MacroPixelLayout::new(dims, k, center, size_policy)?.map(r, c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroPixelImage {
    pub pixels: Image,
    pub layout: MacroPixelLayout,
}

impl MacroPixelImage {
    pub fn k(&self) -> usize {
        self.layout.k
    }

    pub fn window_origin(&self) -> (usize, usize) {
        self.layout.window_origin
    }
}

pub fn build_macropixel(
    lf: &LightField,
    k: usize,
    center: CenterPolicy,
    size_policy: SizePolicy,
) -> Result<MacroPixelImage> {
    let dims = lf.dims();
    let layout = MacroPixelLayout::new(dims, k, center, size_policy)?;
    let mut pixels = Image::zeros(
        layout.out_height,
        layout.out_width,
        dims.channels,
        lf.bit_depth(),
    );
    for r in 0..layout.out_height {
        for c in 0..layout.out_width {
            let s = layout.map(r, c)?;
            for ch in 0..dims.channels {
                pixels.set(r, c, ch, lf.get(s.u, s.v, s.x, s.y, ch));
            }
        }
    }
    Ok(MacroPixelImage { pixels, layout })
}
