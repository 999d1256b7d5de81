use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lightfield::LightField;
use crate::raster::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpiOrientation {
    /// Fixes angular row `u0` and spatial row `x0`; axes are `(v, y)`.
    Horizontal,
    /// Fixes angular col `v0` and spatial col `y0`; axes are `(u, x)`.
    Vertical,
}

impl fmt::Display for EpiOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpiOrientation::Horizontal => "horizontal",
            EpiOrientation::Vertical => "vertical",
        })
    }
}

impl FromStr for EpiOrientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" | "horizontal" => Ok(EpiOrientation::Horizontal),
            "v" | "vertical" => Ok(EpiOrientation::Vertical),
            other => Err(Error::Parameter(format!(
                "unknown EPI orientation {other:?}, expected h or v"
            ))),
        }
    }
}

/// A 2D slice with the angular axis as rows and the spatial axis as columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpiSlice {
    pub values: Image,
    pub orientation: EpiOrientation,
    pub fixed_spatial: usize,
    pub fixed_angular: usize,
}

impl EpiSlice {
    pub fn angular_len(&self) -> usize {
        self.values.height()
    }

    pub fn spatial_len(&self) -> usize {
        self.values.width()
    }
}

pub fn extract_epi(
    lf: &LightField,
    orientation: EpiOrientation,
    fixed_spatial: usize,
    fixed_angular: usize,
) -> Result<EpiSlice> {
    let d = lf.dims();
    let (angular_bound, spatial_bound, rows, cols) = match orientation {
        EpiOrientation::Horizontal => (d.angular_rows, d.height, d.angular_cols, d.width),
        EpiOrientation::Vertical => (d.angular_cols, d.width, d.angular_rows, d.height),
    };
    if fixed_angular >= angular_bound {
        return Err(Error::Index {
            axis: "fixed angular",
            index: fixed_angular,
            bound: angular_bound,
        });
    }
    if fixed_spatial >= spatial_bound {
        return Err(Error::Index {
            axis: "fixed spatial",
            index: fixed_spatial,
            bound: spatial_bound,
        });
    }
    let values = Image::from_fn(
        rows,
        cols,
        d.channels,
        lf.bit_depth(),
        |a, s, c| match orientation {
            EpiOrientation::Horizontal => lf.get(fixed_angular, a, fixed_spatial, s, c),
            EpiOrientation::Vertical => lf.get(a, fixed_angular, s, fixed_spatial, c),
        },
    );
    Ok(EpiSlice {
        values,
        orientation,
        fixed_spatial,
        fixed_angular,
    })
}
