mod args;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use lfkit::costmodel::{parse_layers, pipeline_cost};
use lfkit::dataset::{
    export_representation, scan_corpus, split_by_variation, DatasetManifest, EpiParams, LayoutSpec,
    ReprKind, ReprSpec,
};
use lfkit::disparity::block_match_disparity;
use lfkit::io::{read_json, read_lightfield, write_json, write_lightfield, write_png, StorageForm};
use lfkit::repr::{build_macropixel, extract_epi, extract_view, EpiOrientation, SizePolicy};
use lfkit::{
    noise_field, ramp_field, synth_planar, BitDepth, CenterPolicy, Error, Texture, ViewIndex,
};

use crate::args::*;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                // --help / --version
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::View(a) => {
            let loaded = read_lightfield(&a.input)?;
            let idx = a
                .view
                .map(view_index)
                .unwrap_or_else(|| loaded.center.view());
            write_png(&a.output, &extract_view(&loaded.lightfield, idx)?)
        }
        Command::Macropixel(a) => {
            let loaded = read_lightfield(&a.input)?;
            let center = a.center.map(center_policy).unwrap_or(loaded.center);
            let mp = build_macropixel(&loaded.lightfield, a.k, center, size_policy(a.size_policy))?;
            write_png(&a.output, &mp.pixels)?;
            if let Some(path) = a.metadata {
                write_json(&path, &mp.layout)?;
            }
            Ok(())
        }
        Command::Epi(a) => {
            let loaded = read_lightfield(&a.input)?;
            let epi = extract_epi(
                &loaded.lightfield,
                orientation(a.orientation),
                a.fixed_spatial,
                a.fixed_angular,
            )?;
            write_png(&a.output, &epi.values)
        }
        Command::Lenslet(a) => convert(&a.input, &a.output, StorageForm::Lenslet),
        Command::Delenslet(a) => convert(&a.input, &a.output, StorageForm::Views),
        Command::Disparity(a) => {
            let loaded = read_lightfield(&a.input)?;
            let reference = a
                .reference
                .map(view_index)
                .unwrap_or_else(|| loaded.center.view());
            let map = block_match_disparity(
                &loaded.lightfield,
                reference,
                view_index(a.target),
                (a.range.0[0], a.range.0[1]),
                a.radius,
            )?;
            let (image, coding) = map.to_image16()?;
            write_png(&a.output, &image)?;
            write_json(&a.output.with_extension("json"), &coding)
        }
        Command::Cost(a) => {
            let text = std::fs::read_to_string(&a.layers).map_err(|e| io_error(&a.layers, e))?;
            let layers = parse_layers(&text).map_err(|source| Error::Json {
                path: a.layers.clone(),
                source,
            })?;
            let [h, w, c] = a.input.0;
            let report = pipeline_cost((h, w, c), &layers)?;
            match a.output {
                Some(path) => write_json(&path, &report),
                None => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("report serializes")
                    );
                    Ok(())
                }
            }
        }
        Command::Synth(a) => {
            let [nu, nv, h, w] = a.dims.0;
            let depth = match a.bit_depth {
                BitDepthArg::Eight => BitDepth::Eight,
                BitDepthArg::Sixteen => BitDepth::Sixteen,
            };
            let texture = match a.texture {
                TextureArg::Noise => Texture::covering(
                    (nu, nv),
                    (h, w),
                    a.disparity,
                    depth,
                    noise_field(a.seed, depth),
                ),
                TextureArg::Ramp => {
                    Texture::covering((nu, nv), (h, w), a.disparity, depth, ramp_field(depth))
                }
            };
            let lf = synth_planar(nu, nv, h, w, &texture, a.disparity)?;
            let form = match a.form {
                FormArg::Views => StorageForm::Views,
                FormArg::Lenslet => StorageForm::Lenslet,
            };
            write_lightfield(&a.output, &lf, None, form)
        }
        Command::Dataset(cmd) => dataset(cmd),
    }
}

fn dataset(cmd: DatasetCommand) -> Result<(), Error> {
    match cmd {
        DatasetCommand::Scan(a) => {
            let layout = match &a.layout {
                Some(path) => read_json::<LayoutSpec>(path)?,
                None => LayoutSpec::default(),
            };
            let report = scan_corpus(&a.root, &layout)?;
            for s in &report.skipped {
                eprintln!("skipped {}: {}", s.path, s.reason);
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!(
                "{} light fields, {} skipped",
                report.manifest.records.len(),
                report.skipped.len()
            );
            emit_manifest(&report.manifest, a.csv.as_deref(), a.json.as_deref())
        }
        DatasetCommand::Split(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let out = split_by_variation(&manifest, &a.hold_out)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let counts = out.manifest.counts();
            eprintln!("train {}, test {}", counts.train, counts.test);
            emit_manifest(&out.manifest, a.csv.as_deref(), a.json.as_deref())
        }
        DatasetCommand::Export(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let kind = match a.kind {
                KindArg::Center => ReprKind::Center,
                KindArg::Macropixel => ReprKind::Macropixel,
                KindArg::Lenslet => ReprKind::Lenslet,
                KindArg::Epi => ReprKind::Epi,
            };
            let spec = ReprSpec {
                kind,
                k: a.k,
                size_policy: size_policy(a.size_policy),
                center: a.center.map(center_policy),
                epi: (kind == ReprKind::Epi).then_some(EpiParams {
                    orientation: orientation(a.orientation),
                    fixed_spatial: a.fixed_spatial,
                    fixed_angular: a.fixed_angular,
                }),
            };
            let report = export_representation(&manifest, &a.root, &spec, &a.out, a.jobs)?;
            for f in &report.failed {
                eprintln!("failed {}: {}", f.path, f.reason);
            }
            eprintln!(
                "{} exported, {} failed",
                report.succeeded,
                report.failed.len()
            );
            Ok(())
        }
    }
}

fn emit_manifest(
    m: &DatasetManifest,
    csv: Option<&Path>,
    json: Option<&Path>,
) -> Result<(), Error> {
    if let Some(path) = csv {
        m.write_csv(path)?;
    }
    if let Some(path) = json {
        m.write_json(path)?;
    }
    if csv.is_none() && json.is_none() {
        print!("{}", m.to_csv_string()?);
    }
    Ok(())
}

fn convert(input: &Path, output: &Path, form: StorageForm) -> Result<(), Error> {
    let loaded = read_lightfield(input)?;
    write_lightfield(output, &loaded.lightfield, Some(loaded.center), form)
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from(path),
        source: e,
    }
}

fn view_index(p: Pair) -> ViewIndex {
    ViewIndex::new(p.0[0], p.0[1])
}

fn center_policy(p: Pair) -> CenterPolicy {
    CenterPolicy::new(p.0[0], p.0[1])
}

fn size_policy(a: SizePolicyArg) -> SizePolicy {
    match a {
        SizePolicyArg::Crop => SizePolicy::Crop,
        SizePolicyArg::Pad => SizePolicy::Pad,
    }
}

fn orientation(a: OrientationArg) -> EpiOrientation {
    match a {
        OrientationArg::H => EpiOrientation::Horizontal,
        OrientationArg::V => EpiOrientation::Vertical,
    }
}
