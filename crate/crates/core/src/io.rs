//! On-disk light fields and lossless PNG images.
//!
//! A light-field directory holds a `meta.json` plus either one PNG per view
//! (`view_UU_VV.png`) or a single `lenslet.png` mosaic.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lightfield::{CenterPolicy, Dims, LightField, ViewIndex};
use crate::raster::{BitDepth, Image};
use crate::repr::{extract_view, from_lenslet, to_lenslet, LensletMosaic};

pub const META_FILE: &str = "meta.json";
pub const LENSLET_FILE: &str = "lenslet.png";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LightFieldMeta {
    pub angular_rows: usize,
    pub angular_cols: usize,
    pub height: usize,
    pub width: usize,
    pub channels: usize,
    pub bit_depth: BitDepth,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_col: Option<usize>,
}

impl LightFieldMeta {
    pub fn for_lightfield(lf: &LightField, center: Option<CenterPolicy>) -> Self {
        let d = lf.dims();
        LightFieldMeta {
            angular_rows: d.angular_rows,
            angular_cols: d.angular_cols,
            height: d.height,
            width: d.width,
            channels: d.channels,
            bit_depth: lf.bit_depth(),
            center_row: center.map(|c| c.row),
            center_col: center.map(|c| c.col),
        }
    }

    pub fn dims(&self) -> Dims {
        Dims::new(
            self.angular_rows,
            self.angular_cols,
            self.height,
            self.width,
            self.channels,
        )
    }

    /// Center recorded in the metadata, falling back to the grid middle for
    /// any axis left unspecified.
    pub fn center(&self) -> CenterPolicy {
        let middle = CenterPolicy::middle(&self.dims());
        CenterPolicy::new(
            self.center_row.unwrap_or(middle.row),
            self.center_col.unwrap_or(middle.col),
        )
    }
}

/// How a light field is laid out in its directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StorageForm {
    Views,
    Lenslet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedLightField {
    pub lightfield: LightField,
    pub center: CenterPolicy,
    pub form: StorageForm,
}

pub fn view_file_name(idx: ViewIndex) -> String {
    format!("view_{:02}_{:02}.png", idx.u, idx.v)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_png(path: &Path) -> Result<Image> {
    let img = image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let (channels, depth, data): (usize, BitDepth, Vec<u16>) = match img {
        DynamicImage::ImageLuma8(b) => (
            1,
            BitDepth::Eight,
            b.into_raw().into_iter().map(u16::from).collect(),
        ),
        DynamicImage::ImageRgb8(b) => (
            3,
            BitDepth::Eight,
            b.into_raw().into_iter().map(u16::from).collect(),
        ),
        DynamicImage::ImageLuma16(b) => (1, BitDepth::Sixteen, b.into_raw()),
        DynamicImage::ImageRgb16(b) => (3, BitDepth::Sixteen, b.into_raw()),
        other => {
            return Err(Error::format(
                path,
                format!(
                    "unsupported PNG color type {:?}, expected gray or RGB",
                    other.color()
                ),
            ))
        }
    };
    Image::new(h, w, channels, depth, data)
}

pub fn encode_png(img: &Image) -> Result<Vec<u8>> {
    let color = match (img.channels(), img.bit_depth()) {
        (1, BitDepth::Eight) => ExtendedColorType::L8,
        (3, BitDepth::Eight) => ExtendedColorType::Rgb8,
        (1, BitDepth::Sixteen) => ExtendedColorType::L16,
        (3, BitDepth::Sixteen) => ExtendedColorType::Rgb16,
        (c, _) => {
            return Err(Error::Parameter(format!(
                "cannot encode {c}-channel image as PNG"
            )))
        }
    };
    let bytes: Vec<u8> = match img.bit_depth() {
        BitDepth::Eight => img.data().iter().map(|&s| s as u8).collect(),
        // the encoder takes native-endian 16-bit samples
        BitDepth::Sixteen => img.data().iter().flat_map(|s| s.to_ne_bytes()).collect(),
    };
    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(&bytes, img.width() as u32, img.height() as u32, color)
        .map_err(|source| Error::Image {
            path: PathBuf::from("<memory>"),
            source,
        })?;
    Ok(out)
}

pub fn write_png(path: &Path, img: &Image) -> Result<()> {
    let bytes = encode_png(img).map_err(|e| match e {
        Error::Image { source, .. } => Error::Image {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })?;
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn read_lightfield(dir: &Path) -> Result<LoadedLightField> {
    let meta: LightFieldMeta = read_json(&dir.join(META_FILE))?;
    let dims = meta.dims();
    if let Some(v) = dims.check() {
        return Err(Error::format(dir.join(META_FILE), v.to_string()));
    }
    let center = meta.center();
    center
        .check(&dims)
        .map_err(|e| Error::format(dir.join(META_FILE), e.to_string()))?;

    let lenslet_path = dir.join(LENSLET_FILE);
    let (lightfield, form) = if lenslet_path.is_file() {
        let img = read_png(&lenslet_path)?;
        let mosaic = LensletMosaic::new(img, meta.angular_rows, meta.angular_cols)
            .map_err(|e| Error::format(&lenslet_path, e.to_string()))?;
        (from_lenslet(&mosaic)?, StorageForm::Lenslet)
    } else {
        let mut views = Vec::with_capacity(meta.angular_rows * meta.angular_cols);
        for u in 0..meta.angular_rows {
            for v in 0..meta.angular_cols {
                views.push(read_png(&dir.join(view_file_name(ViewIndex::new(u, v))))?);
            }
        }
        let lf = LightField::from_views(meta.angular_rows, meta.angular_cols, &views)
            .map_err(|e| Error::format(dir, e.to_string()))?;
        (lf, StorageForm::Views)
    };

    let got = lightfield.dims();
    if got != dims || lightfield.bit_depth() != meta.bit_depth {
        return Err(Error::format(
            dir,
            format!(
                "image data is {got} at {} bits but {META_FILE} declares {dims} at {} bits",
                lightfield.bit_depth().bits(),
                meta.bit_depth.bits()
            ),
        ));
    }
    Ok(LoadedLightField {
        lightfield,
        center,
        form,
    })
}

pub fn write_lightfield(
    dir: &Path,
    lf: &LightField,
    center: Option<CenterPolicy>,
    form: StorageForm,
) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match form {
        StorageForm::Views => {
            let d = lf.dims();
            for u in 0..d.angular_rows {
                for v in 0..d.angular_cols {
                    let idx = ViewIndex::new(u, v);
                    write_png(&dir.join(view_file_name(idx)), &extract_view(lf, idx)?)?;
                }
            }
        }
        StorageForm::Lenslet => {
            write_png(&dir.join(LENSLET_FILE), to_lenslet(lf).pixels())?;
        }
    }
    write_json(
        &dir.join(META_FILE),
        &LightFieldMeta::for_lightfield(lf, center),
    )
}
