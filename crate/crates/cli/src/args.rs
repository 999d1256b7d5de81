use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Comma-separated tuple of `N` numbers, e.g. `3,5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tuple<T, const N: usize>(pub [T; N]);

impl<T, const N: usize> FromStr for Tuple<T, N>
where
    T: FromStr + Copy + Default,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != N {
            return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
        }
        let mut out = [T::default(); N];
        for (slot, p) in out.iter_mut().zip(parts) {
            *slot = p
                .parse()
                .map_err(|_| format!("{p:?} is not a valid number"))?;
        }
        Ok(Tuple(out))
    }
}

pub type Pair = Tuple<usize, 2>;

#[derive(Debug, Parser)]
#[command(
    name = "lfkit",
    version,
    about = "Light-field representation, disparity and dataset toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract one sub-aperture view as a PNG.
    View(ViewArgs),
    /// Build a macro-pixel image from the middle perspective.
    Macropixel(MacropixelArgs),
    /// Extract an epipolar-plane image.
    Epi(EpiArgs),
    /// Convert a light-field directory to lenslet form (lenslet.png + meta.json).
    Lenslet(ConvertArgs),
    /// Convert a light-field directory to per-view form (view_UU_VV.png + meta.json).
    Delenslet(ConvertArgs),
    /// Estimate disparity between the reference view and a target view.
    Disparity(DisparityArgs),
    /// Report convolution output sizes and multiply-accumulate counts as JSON.
    Cost(CostArgs),
    /// Write a synthetic light field of a textured plane at constant disparity.
    Synth(SynthArgs),
    /// Corpus scanning, splitting and export.
    #[command(subcommand)]
    Dataset(DatasetCommand),
}

#[derive(Debug, Args)]
pub struct ViewArgs {
    /// View index as U,V [default: the light field's center view]
    #[arg(long, value_name = "U,V")]
    pub view: Option<Pair>,
    /// Light-field directory
    pub input: PathBuf,
    /// Output PNG
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SizePolicyArg {
    Crop,
    Pad,
}

#[derive(Debug, Args)]
pub struct MacropixelArgs {
    /// Macro-pixel side length (views per side), 1 <= k <= min(U, V)
    #[arg(long)]
    pub k: usize,
    /// Handling of rows/cols left over when H or W is not a multiple of k
    #[arg(long, value_enum, default_value = "crop")]
    pub size_policy: SizePolicyArg,
    /// Middle perspective as R,C [default: from meta.json, else (U/2, V/2)]
    #[arg(long, value_name = "R,C")]
    pub center: Option<Pair>,
    /// Also write the construction metadata (window, anchor, policy) as JSON
    #[arg(long, value_name = "FILE")]
    pub metadata: Option<PathBuf>,
    /// Light-field directory
    pub input: PathBuf,
    /// Output PNG
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    /// Fix angular row and spatial row; slice spans (v, y)
    H,
    /// Fix angular col and spatial col; slice spans (u, x)
    V,
}

#[derive(Debug, Args)]
pub struct EpiArgs {
    #[arg(long, value_enum)]
    pub orientation: OrientationArg,
    /// Spatial row (h) or column (v) held fixed
    #[arg(long)]
    pub fixed_spatial: usize,
    /// Angular row (h) or column (v) held fixed
    #[arg(long)]
    pub fixed_angular: usize,
    /// Light-field directory
    pub input: PathBuf,
    /// Output PNG (angular axis vertical)
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Light-field directory
    pub input: PathBuf,
    /// Output light-field directory
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DisparityArgs {
    /// Target view as U,V; must share a row or column with the reference
    #[arg(long, value_name = "U,V")]
    pub target: Pair,
    /// Reference view as U,V [default: the center view]
    #[arg(long, value_name = "U,V")]
    pub reference: Option<Pair>,
    /// Inclusive integer search range as MIN,MAX
    #[arg(long, value_name = "MIN,MAX", allow_hyphen_values = true)]
    pub range: Tuple<i64, 2>,
    /// Block radius; blocks are (2r+1)x(2r+1)
    #[arg(long)]
    pub radius: usize,
    /// Light-field directory
    pub input: PathBuf,
    /// Output 16-bit PNG; the decoding sidecar goes next to it with a .json extension
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// JSON layer stack: [{"in_channels", "out_channels", "kernel", "stride", "padding"}, ...]
    #[arg(long, value_name = "FILE")]
    pub layers: PathBuf,
    /// Input dimensions as H,W,C
    #[arg(long, value_name = "H,W,C")]
    pub input: Tuple<usize, 3>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TextureArg {
    Noise,
    Ramp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BitDepthArg {
    #[value(name = "8")]
    Eight,
    #[value(name = "16")]
    Sixteen,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormArg {
    Views,
    Lenslet,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Signed disparity in pixels per view step
    #[arg(long, allow_hyphen_values = true)]
    pub disparity: i64,
    #[arg(long, value_enum)]
    pub texture: TextureArg,
    /// Light-field shape as U,V,H,W
    #[arg(long, value_name = "U,V,H,W")]
    pub dims: Tuple<usize, 4>,
    /// Noise seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample bit depth
    #[arg(long, value_enum, default_value = "16")]
    pub bit_depth: BitDepthArg,
    /// On-disk form of the output light field
    #[arg(long, value_enum, default_value = "views")]
    pub form: FormArg,
    /// Output light-field directory
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum DatasetCommand {
    /// Discover light fields under a corpus root and write a manifest.
    Scan(ScanArgs),
    /// Hold out one variation category as the test set.
    Split(SplitArgs),
    /// Render every manifest record into one representation.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Corpus root directory
    #[arg(long)]
    pub root: PathBuf,
    /// Layout spec JSON {"pattern", "categories", "category_counts"} [default: sNN/sessionN/<category>_<label>]
    #[arg(long, value_name = "FILE")]
    pub layout: Option<PathBuf>,
    /// Manifest CSV output
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Manifest JSON output
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Input manifest (.csv or .json)
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Variation category assigned to the test set
    #[arg(long, value_name = "CATEGORY")]
    pub hold_out: String,
    /// Manifest CSV output
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Manifest JSON output
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Center,
    Macropixel,
    Lenslet,
    Epi,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Input manifest (.csv or .json)
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Corpus root the manifest paths are relative to
    #[arg(long)]
    pub root: PathBuf,
    /// Representation to render
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Macro-pixel side length
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "crop")]
    pub size_policy: SizePolicyArg,
    /// Middle perspective override as R,C
    #[arg(long, value_name = "R,C")]
    pub center: Option<Pair>,
    /// EPI orientation (kind=epi)
    #[arg(long, value_enum, default_value = "h")]
    pub orientation: OrientationArg,
    /// EPI fixed spatial index [default: middle row/col]
    #[arg(long)]
    pub fixed_spatial: Option<usize>,
    /// EPI fixed angular index [default: center view's row/col]
    #[arg(long)]
    pub fixed_angular: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}
