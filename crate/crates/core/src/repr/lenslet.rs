use crate::error::{Error, Result};
use crate::lightfield::{Dims, LightField};
use crate::raster::Image;

/// Sensor-style tiling: spatial position `(x, y)` owns the U×V block at
/// mosaic rows `x·U..(x+1)·U`, cols `y·V..(y+1)·V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensletMosaic {
    pixels: Image,
    angular_rows: usize,
    angular_cols: usize,
}

impl LensletMosaic {
    pub fn new(pixels: Image, angular_rows: usize, angular_cols: usize) -> Result<Self> {
        if angular_rows == 0
            || angular_cols == 0
            || pixels.height() == 0
            || pixels.width() == 0
            || !pixels.height().is_multiple_of(angular_rows)
            || !pixels.width().is_multiple_of(angular_cols)
        {
            return Err(Error::Geometry(format!(
                "lenslet mosaic {}x{} is not tiled by {angular_rows}x{angular_cols} angular blocks",
                pixels.height(),
                pixels.width()
            )));
        }
        Ok(LensletMosaic {
            pixels,
            angular_rows,
            angular_cols,
        })
    }

    pub fn pixels(&self) -> &Image {
        &self.pixels
    }

    pub fn angular_dims(&self) -> (usize, usize) {
        (self.angular_rows, self.angular_cols)
    }
}

pub fn to_lenslet(lf: &LightField) -> LensletMosaic {
    let d = lf.dims();
    let (nu, nv) = (d.angular_rows, d.angular_cols);
    let pixels = Image::from_fn(
        d.height * nu,
        d.width * nv,
        d.channels,
        lf.bit_depth(),
        |r, c, ch| lf.get(r % nu, c % nv, r / nu, c / nv, ch),
    );
    LensletMosaic {
        pixels,
        angular_rows: nu,
        angular_cols: nv,
    }
}

pub fn from_lenslet(mosaic: &LensletMosaic) -> Result<LightField> {
    let (nu, nv) = mosaic.angular_dims();
    let p = &mosaic.pixels;
    let dims = Dims::new(nu, nv, p.height() / nu, p.width() / nv, p.channels());
    LightField::from_fn(dims, p.bit_depth(), |u, v, x, y, c| {
        p.get(x * nu + u, y * nv + v, c)
    })
}
