//! Light-field toolkit.
//!
//! Converts dense 4D light fields between sub-aperture views, epipolar-plane
//! images, lenslet mosaics and macro-pixel images, where a k×k block of the
//! middle view is traded for k² angular samples of one scene point. Also
//! estimates disparity, counts convolution cost for a given input size, and
//! prepares split, exported corpora for recognition experiments.

pub mod costmodel;
pub mod dataset;
pub mod disparity;
mod error;
pub mod io;
pub mod lightfield;
pub mod raster;
pub mod repr;

pub use error::{Error, Result};
pub use lightfield::{
    noise_field, ramp_field, synth_planar, validate_parts, CenterPolicy, Dims, LightField, Texture,
    ViewIndex, Violation,
};
pub use raster::{BitDepth, Image};
