//! Disparity between sub-aperture views and EPI line slopes.
//!
//! Block matching compares a reference view with a target view on the same
//! angular row (horizontal baseline) or column (vertical baseline). With `n`
//! the absolute number of view steps between them, a pixel has disparity
//! `d` when `target[x, y − d·n] ≈ reference[x, y]` (horizontal) or
//! `target[x − d·n, y] ≈ reference[x, y]` (vertical). Swapping the two views
//! therefore negates the map.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lightfield::{LightField, ViewIndex};
use crate::raster::{BitDepth, Image};
use crate::repr::{extract_view, EpiSlice};

/// Added to the second-best cost in the confidence denominator, in
/// normalized intensity units.
pub const CONFIDENCE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisparityParams {
    pub range: (i64, i64),
    pub radius: usize,
    pub reference: ViewIndex,
    pub target: ViewIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap {
    height: usize,
    width: usize,
    values: Vec<i64>,
    confidence: Vec<f64>,
    evaluated: Vec<bool>,
    params: DisparityParams,
}

impl DisparityMap {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn params(&self) -> &DisparityParams {
        &self.params
    }

    pub fn value(&self, x: usize, y: usize) -> i64 {
        self.values[x * self.width + y]
    }

    pub fn confidence(&self, x: usize, y: usize) -> f64 {
        self.confidence[x * self.width + y]
    }

    /// Whether the full matching block fits for every candidate at `(x, y)`.
    pub fn is_evaluated(&self, x: usize, y: usize) -> bool {
        self.evaluated[x * self.width + y]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn confidences(&self) -> &[f64] {
        &self.confidence
    }

    /// 16-bit encoding `pixel = d − range.0`; decode with
    /// `d = offset + scale · pixel`.
    pub fn to_image16(&self) -> Result<(Image, DisparityCoding)> {
        let (lo, hi) = self.params.range;
        if hi - lo > u16::MAX as i64 {
            return Err(Error::Parameter(format!(
                "disparity range [{lo}, {hi}] does not fit a 16-bit image"
            )));
        }
        let data = self.values.iter().map(|&d| (d - lo) as u16).collect();
        let image = Image::new(self.height, self.width, 1, BitDepth::Sixteen, data)?;
        Ok((
            image,
            DisparityCoding {
                offset: lo,
                scale: 1,
                range: [lo, hi],
                radius: self.params.radius,
                reference: [self.params.reference.u, self.params.reference.v],
                target: [self.params.target.u, self.params.target.v],
            },
        ))
    }
}

/// Sidecar describing how a disparity image decodes to pixel shifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisparityCoding {
    pub offset: i64,
    pub scale: i64,
    pub range: [i64; 2],
    pub radius: usize,
    pub reference: [usize; 2],
    pub target: [usize; 2],
}

/// Sum-of-absolute-differences block matching over integer disparities.
pub fn block_match_disparity(
    lf: &LightField,
    reference: ViewIndex,
    target: ViewIndex,
    range: (i64, i64),
    radius: usize,
) -> Result<DisparityMap> {
    let dims = lf.dims();
    reference.check(&dims)?;
    target.check(&dims)?;
    if reference == target {
        return Err(Error::Parameter(
            "reference and target views must differ".into(),
        ));
    }
    let horizontal = match (reference.u == target.u, reference.v == target.v) {
        (true, false) => true,
        (false, true) => false,
        _ => {
            return Err(Error::UnsupportedBaseline {
                ru: reference.u,
                rv: reference.v,
                tu: target.u,
                tv: target.v,
            })
        }
    };
    let (d_min, d_max) = range;
    if d_min > d_max {
        return Err(Error::Parameter(format!(
            "empty disparity range [{d_min}, {d_max}]"
        )));
    }
    if radius == 0 {
        return Err(Error::Parameter("block radius must be at least 1".into()));
    }
    let steps = if horizontal {
        reference.v.abs_diff(target.v)
    } else {
        reference.u.abs_diff(target.u)
    } as i64;

    let (h, w) = (dims.height, dims.width);
    let reference_sums = channel_sums(&extract_view(lf, reference)?);
    let target_sums = channel_sums(&extract_view(lf, target)?);
    let norm = (dims.channels as f64) * lf.bit_depth().max_value() as f64;
    let r = radius as i64;
    let candidates: Vec<i64> = (d_min..=d_max).collect();
    let fallback = if d_min > 0 {
        d_min
    } else if d_max < 0 {
        d_max
    } else {
        0
    };

    let rows: Vec<Vec<(i64, f64, bool)>> = (0..h)
        .into_par_iter()
        .map(|x| {
            (0..w)
                .map(|y| {
                    let (xi, yi) = (x as i64, y as i64);
                    let along = if horizontal { yi } else { xi };
                    let across = if horizontal { xi } else { yi };
                    let (len_along, len_across) = if horizontal {
                        (w as i64, h as i64)
                    } else {
                        (h as i64, w as i64)
                    };
                    let fits = across - r >= 0
                        && across + r < len_across
                        && along - r >= 0
                        && along + r < len_along
                        && along - d_max * steps - r >= 0
                        && along - d_min * steps + r < len_along;
                    if !fits {
                        return (fallback, 0.0, false);
                    }
                    let mut costs: Vec<(u64, i64)> = candidates
                        .iter()
                        .map(|&d| {
                            let shift = d * steps;
                            let mut sad = 0u64;
                            for i in -r..=r {
                                for j in -r..=r {
                                    let (rx, ry) = (xi + i, yi + j);
                                    let (tx, ty) = if horizontal {
                                        (rx, ry - shift)
                                    } else {
                                        (rx - shift, ry)
                                    };
                                    let a = reference_sums[rx as usize * w + ry as usize];
                                    let b = target_sums[tx as usize * w + ty as usize];
                                    sad += a.abs_diff(b) as u64;
                                }
                            }
                            (sad, d)
                        })
                        .collect();
                    costs.sort_by_key(|&(sad, d)| (sad, d.unsigned_abs(), d));
                    let (best_sad, best_d) = costs[0];
                    let confidence = match costs.get(1) {
                        Some(&(second_sad, _)) => {
                            let best = best_sad as f64 / norm;
                            let second = second_sad as f64 / norm;
                            (second - best) / (second + CONFIDENCE_EPSILON)
                        }
                        None => 0.0,
                    };
                    (best_d, confidence, true)
                })
                .collect()
        })
        .collect();

    let mut values = Vec::with_capacity(h * w);
    let mut confidence = Vec::with_capacity(h * w);
    let mut evaluated = Vec::with_capacity(h * w);
    for (d, c, e) in rows.into_iter().flatten() {
        values.push(d);
        confidence.push(c);
        evaluated.push(e);
    }
    Ok(DisparityMap {
        height: h,
        width: w,
        values,
        confidence,
        evaluated,
        params: DisparityParams {
            range,
            radius,
            reference,
            target,
        },
    })
}

fn channel_sums(img: &Image) -> Vec<u32> {
    img.data()
        .chunks_exact(img.channels())
        .map(|px| px.iter().map(|&s| s as u32).sum())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpiFit {
    /// Pixels of spatial shift per view step.
    pub slope: f64,
    /// RMS deviation of the per-row offsets from the fitted line.
    pub residual: f64,
    /// Best-correlating offset of each angular row against the center row.
    pub offsets: Vec<i64>,
}

/// Fits the dominant line slope of an EPI.
///
/// Each angular row is aligned to the center row (`floor(n/2)`) by the
/// integer offset maximizing zero-mean normalized cross-correlation, so that
/// `row[a][y] ≈ center[y + offset]`. The slope is the least-squares line
/// through the origin of offset against `a − center`.
pub fn epi_slope(epi: &EpiSlice) -> Result<EpiFit> {
    let n = epi.angular_len();
    if n < 2 {
        return Err(Error::InsufficientViews(n));
    }
    let width = epi.spatial_len();
    let intensity = epi.values.to_intensity();
    let row = |a: usize| &intensity[a * width..(a + 1) * width];
    let center = n / 2;
    let max_offset = (width / 2) as i64;

    let offsets: Vec<i64> = (0..n)
        .map(|a| best_offset(row(a), row(center), max_offset))
        .collect();

    let t: Vec<f64> = (0..n).map(|a| a as f64 - center as f64).collect();
    let stt: f64 = t.iter().map(|t| t * t).sum();
    let sto: f64 = t.iter().zip(&offsets).map(|(t, &o)| t * o as f64).sum();
    let slope = sto / stt;
    let residual = (t
        .iter()
        .zip(&offsets)
        .map(|(t, &o)| (o as f64 - slope * t).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(EpiFit {
        slope,
        residual,
        offsets,
    })
}

/// Offset `o` in `[-max, max]` maximizing the correlation of `row[y]` with
/// `center[y + o]`; ties go to the smaller `|o|`.
fn best_offset(row: &[f64], center: &[f64], max: i64) -> i64 {
    let len = row.len() as i64;
    let mut best = (f64::NEG_INFINITY, 0i64);
    let mut candidates: Vec<i64> = (-max..=max).collect();
    candidates.sort_by_key(|o| (o.unsigned_abs(), *o));
    for o in candidates {
        let lo = 0.max(-o);
        let hi = len.min(len - o);
        if hi - lo < 2 {
            continue;
        }
        let a: Vec<f64> = (lo..hi).map(|y| row[y as usize]).collect();
        let b: Vec<f64> = (lo..hi).map(|y| center[(y + o) as usize]).collect();
        let score = zncc(&a, &b);
        if score > best.0 {
            best = (score, o);
        }
    }
    best.1
}

fn zncc(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        num += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    let den = (va * vb).sqrt();
    if den <= f64::EPSILON {
        0.0
    } else {
        num / den
    }
}
