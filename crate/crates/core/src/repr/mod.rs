//! Light-field representations: sub-aperture views, epipolar-plane images,
//! lenslet mosaics and macro-pixel images.

mod epi;
mod lenslet;
mod macropixel;

pub use epi::{extract_epi, EpiOrientation, EpiSlice};
pub use lenslet::{from_lenslet, to_lenslet, LensletMosaic};
pub use macropixel::{
    build_macropixel, macropixel_map, MacroPixelImage, MacroPixelLayout, SizePolicy, SourceIndex,
};

use crate::error::Result;
use crate::lightfield::{CenterPolicy, LightField, ViewIndex};
use crate::raster::Image;

/// The sub-aperture image at `idx`.
pub fn extract_view(lf: &LightField, idx: ViewIndex) -> Result<Image> {
    let dims = lf.dims();
    let data = lf.view_slice(idx)?.to_vec();
    Image::new(dims.height, dims.width, dims.channels, lf.bit_depth(), data)
}

pub fn center_view(lf: &LightField, policy: CenterPolicy) -> Result<Image> {
    extract_view(lf, policy.view())
}
