//! Acceptance criteria. Each criterion prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use lfkit::costmodel::{conv_out_dims, pipeline_cost, ConvLayerSpec};
use lfkit::dataset::{scan_corpus, split_by_variation, LayoutSpec, Split, DEFAULT_CATEGORIES};
use lfkit::disparity::{block_match_disparity, epi_slope};
use lfkit::io::{write_json, write_lightfield, LightFieldMeta, StorageForm, META_FILE};
use lfkit::repr::{
    build_macropixel, center_view, extract_epi, from_lenslet, macropixel_map, to_lenslet,
    EpiOrientation, SizePolicy,
};
use lfkit::{
    noise_field, synth_planar, BitDepth, CenterPolicy, Dims, LightField, Texture, ViewIndex,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

const MACROPIXEL_INSTANCES: usize = 250;
const LENSLET_INSTANCES: usize = 150;
const EPI_TOLERANCE: f64 = 0.1;
const DISPARITY_EXACT_FRACTION: f64 = 0.95;
const TIME_BUDGET: Duration = Duration::from_secs(300);

struct Instance {
    lf: LightField,
    k: usize,
    center: CenterPolicy,
}

/// Random instances with U,V in [1,7], k in [1, min(U,V)], H,W in [k,20].
/// Odd-numbered instances use a random center instead of the middle view.
fn macropixel_instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c66);
    (0..MACROPIXEL_INSTANCES)
        .map(|i| {
            let nu = rng.gen_range(1..=7);
            let nv = rng.gen_range(1..=7);
            let k = rng.gen_range(1..=nu.min(nv));
            let h = rng.gen_range(k..=20);
            let w = rng.gen_range(k..=20);
            let c = if rng.gen_bool(0.5) { 1 } else { 3 };
            let dims = Dims::new(nu, nv, h, w, c);
            let samples = (0..dims.sample_count()).map(|_| rng.gen()).collect();
            let lf = LightField::from_samples(dims, BitDepth::Sixteen, samples).unwrap();
            let center = if i % 2 == 0 {
                CenterPolicy::middle(&dims)
            } else {
                CenterPolicy::new(rng.gen_range(0..nu), rng.gen_range(0..nv))
            };
            Instance { lf, k, center }
        })
        .collect()
}

/// Brute-force macro-pixel construction written independently of the
/// library: walks output blocks, picks the source anchor for each, and
/// scatters the k×k angular window into the block.
fn macropixel_oracle(
    lf: &LightField,
    k: usize,
    center: CenterPolicy,
    policy: SizePolicy,
) -> (usize, usize, Vec<u16>) {
    let d = lf.dims();
    let half = (k - 1) / 2;
    let start = |c: usize, n: usize| -> usize {
        let s = c as i64 - half as i64;
        s.clamp(0, (n - k) as i64) as usize
    };
    let (wu, wv) = (
        start(center.row, d.angular_rows),
        start(center.col, d.angular_cols),
    );
    let (oh, ow) = match policy {
        SizePolicy::Crop => (d.height - d.height % k, d.width - d.width % k),
        SizePolicy::Pad => (d.height, d.width),
    };
    let anchor = |block: usize, n: usize| -> usize {
        let full_blocks = n / k;
        if full_blocks == 0 {
            half.min(n - 1)
        } else {
            block.min(full_blocks - 1) * k + half
        }
    };
    let mut out: Vec<Option<u16>> = vec![None; oh * ow * d.channels];
    for br in 0..oh.div_ceil(k) {
        for bc in 0..ow.div_ceil(k) {
            let (ax, ay) = (anchor(br, d.height), anchor(bc, d.width));
            for a in 0..k {
                for b in 0..k {
                    let (r, c) = (br * k + a, bc * k + b);
                    if r >= oh || c >= ow {
                        continue;
                    }
                    for ch in 0..d.channels {
                        out[(r * ow + c) * d.channels + ch] =
                            Some(lf.get(wu + a, wv + b, ax, ay, ch));
                    }
                }
            }
        }
    }
    let filled = out
        .into_iter()
        .map(|v| v.expect("oracle covers every output pixel"))
        .collect();
    (oh, ow, filled)
}

fn criterion_1_macropixel_oracle(instances: &[Instance]) -> Check {
    let mut compared = 0;
    for (i, inst) in instances.iter().enumerate() {
        for policy in [SizePolicy::Crop, SizePolicy::Pad] {
            let mp = build_macropixel(&inst.lf, inst.k, inst.center, policy)
                .map_err(|e| e.to_string())?;
            let (oh, ow, expected) = macropixel_oracle(&inst.lf, inst.k, inst.center, policy);
            ensure!(
                (mp.pixels.height(), mp.pixels.width()) == (oh, ow),
                "instance {i} {policy}: dims {}x{} vs oracle {oh}x{ow}",
                mp.pixels.height(),
                mp.pixels.width()
            );
            ensure!(
                mp.pixels.data() == &expected[..],
                "instance {i} {policy}: pixel mismatch"
            );
            // the exposed index map agrees with the image
            let d = inst.lf.dims();
            for r in 0..oh {
                for c in 0..ow {
                    let s = macropixel_map(d, inst.k, inst.center, policy, r, c)
                        .map_err(|e| e.to_string())?;
                    ensure!(
                        mp.pixels.get(r, c, 0) == inst.lf.get(s.u, s.v, s.x, s.y, 0),
                        "instance {i} {policy}: macropixel_map disagrees at ({r}, {c})"
                    );
                }
            }
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} constructions bit-exact against the scatter oracle"
    ))
}

fn criterion_2_identity(instances: &[Instance]) -> Check {
    for (i, inst) in instances.iter().enumerate() {
        let view = center_view(&inst.lf, inst.center).map_err(|e| e.to_string())?;
        for policy in [SizePolicy::Crop, SizePolicy::Pad] {
            let mp =
                build_macropixel(&inst.lf, 1, inst.center, policy).map_err(|e| e.to_string())?;
            ensure!(
                mp.pixels == view,
                "instance {i} {policy}: k=1 differs from center view"
            );
        }
    }
    Ok(format!(
        "k=1 equals center view on {} instances",
        instances.len()
    ))
}

fn criterion_3_pixel_budget(instances: &[Instance]) -> Check {
    for (i, inst) in instances.iter().enumerate() {
        let d = inst.lf.dims();
        let crop = build_macropixel(&inst.lf, inst.k, inst.center, SizePolicy::Crop)
            .map_err(|e| e.to_string())?;
        let (h, w) = (crop.pixels.height(), crop.pixels.width());
        ensure!(
            h <= d.height && w <= d.width && d.height - h < inst.k && d.width - w < inst.k,
            "instance {i}: crop {h}x{w} from {}x{} at k={}",
            d.height,
            d.width,
            inst.k
        );
        let pad = build_macropixel(&inst.lf, inst.k, inst.center, SizePolicy::Pad)
            .map_err(|e| e.to_string())?;
        ensure!(
            (pad.pixels.height(), pad.pixels.width()) == (d.height, d.width),
            "instance {i}: pad changed dimensions"
        );
    }

    let expected = [
        (625, 434),
        (624, 434),
        (624, 432),
        (624, 432),
        (625, 430),
        (624, 432),
    ];
    let dims = Dims::new(6, 6, 625, 434, 1);
    let lf = LightField::from_fn(dims, BitDepth::Eight, |u, v, x, y, _| {
        ((u * 6 + v + x + y) % 256) as u16
    })
    .map_err(|e| e.to_string())?;
    for (k, &(eh, ew)) in (1..=6).zip(&expected) {
        ensure!(
            (625 / k * k, 434 / k * k) == (eh, ew),
            "floor arithmetic disagrees at k={k}"
        );
        let mp = build_macropixel(&lf, k, CenterPolicy::middle(&dims), SizePolicy::Crop)
            .map_err(|e| e.to_string())?;
        ensure!(
            (mp.pixels.height(), mp.pixels.width()) == (eh, ew),
            "625x434 at k={k}: got {}x{}, expected {eh}x{ew}",
            mp.pixels.height(),
            mp.pixels.width()
        );
    }
    Ok("budget holds on all instances; 625x434 crops to (624,434),(624,432),(624,432),(625,430),(624,432)".into())
}

fn criterion_4_lenslet_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c454e53);
    for i in 0..LENSLET_INSTANCES {
        let c = if rng.gen_bool(0.5) { 1 } else { 3 };
        let dims = Dims::new(
            rng.gen_range(1..=7),
            rng.gen_range(1..=7),
            rng.gen_range(1..=20),
            rng.gen_range(1..=20),
            c,
        );
        let samples = (0..dims.sample_count()).map(|_| rng.gen()).collect();
        let lf = LightField::from_samples(dims, BitDepth::Sixteen, samples)
            .map_err(|e| e.to_string())?;
        let back = from_lenslet(&to_lenslet(&lf)).map_err(|e| e.to_string())?;
        ensure!(back == lf, "instance {i} ({dims}) did not round-trip");
    }
    Ok(format!(
        "{LENSLET_INSTANCES} random light fields round-trip bit-exactly"
    ))
}

fn criterion_5_epi_slope() -> Check {
    let mut worst: f64 = 0.0;
    for views in [5, 7] {
        for d in -3i64..=3 {
            let (h, w) = (48, 64);
            let field = noise_field((100 + d) as u64 + views as u64, BitDepth::Sixteen);
            let tex = Texture::covering((views, views), (h, w), d, BitDepth::Sixteen, field);
            let lf = synth_planar(views, views, h, w, &tex, d).map_err(|e| e.to_string())?;
            let c = CenterPolicy::middle(&lf.dims());
            for (orientation, spatial, angular) in [
                (EpiOrientation::Horizontal, h / 2, c.row),
                (EpiOrientation::Vertical, w / 2, c.col),
            ] {
                let epi =
                    extract_epi(&lf, orientation, spatial, angular).map_err(|e| e.to_string())?;
                let fit = epi_slope(&epi).map_err(|e| e.to_string())?;
                let err = (fit.slope - d as f64).abs();
                worst = worst.max(err);
                ensure!(
                    err <= EPI_TOLERANCE,
                    "{views} views, d={d}, {orientation}: slope {} (tolerance {EPI_TOLERANCE})",
                    fit.slope
                );
            }
        }
    }
    Ok(format!(
        "d in -3..=3 with 5 and 7 views, worst |slope - d| = {worst:.3}"
    ))
}

fn criterion_6_disparity() -> Check {
    let mut worst: f64 = 1.0;
    for d in -2i64..=2 {
        let (h, w) = (32, 40);
        let tex = Texture::covering(
            (5, 5),
            (h, w),
            d,
            BitDepth::Sixteen,
            noise_field((7 + d) as u64, BitDepth::Sixteen),
        );
        let lf = synth_planar(5, 5, h, w, &tex, d).map_err(|e| e.to_string())?;
        for target in [
            ViewIndex::new(2, 3),
            ViewIndex::new(3, 2),
            ViewIndex::new(2, 4),
        ] {
            let map = block_match_disparity(&lf, ViewIndex::new(2, 2), target, (-3, 3), 2)
                .map_err(|e| e.to_string())?;
            let mut interior = 0usize;
            let mut exact = 0usize;
            for x in 0..h {
                for y in 0..w {
                    if map.is_evaluated(x, y) {
                        interior += 1;
                        exact += usize::from(map.value(x, y) == d);
                    }
                }
            }
            ensure!(interior > 0, "d={d}: no interior pixels");
            let frac = exact as f64 / interior as f64;
            worst = worst.min(frac);
            ensure!(
                frac >= DISPARITY_EXACT_FRACTION,
                "d={d} target ({}, {}): {:.1}% exact",
                target.u,
                target.v,
                100.0 * frac
            );
        }
    }

    let flat = LightField::from_fn(
        Dims::new(5, 5, 24, 24, 1),
        BitDepth::Sixteen,
        |_, _, _, _, _| 30000,
    )
    .map_err(|e| e.to_string())?;
    let map = block_match_disparity(
        &flat,
        ViewIndex::new(2, 2),
        ViewIndex::new(2, 3),
        (-3, 3),
        2,
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        map.confidences().iter().all(|&c| c == 0.0),
        "textureless input has nonzero confidence"
    );
    Ok(format!(
        "worst exact fraction {:.1}%; textureless confidence all zero",
        100.0 * worst
    ))
}

fn placements(n: usize, k: usize, s: usize, p: usize) -> Option<usize> {
    let padded = n + 2 * p;
    let count = (0..padded)
        .step_by(s)
        .filter(|&start| start + k <= padded)
        .count();
    (count > 0).then_some(count)
}

fn criterion_7_conv_arithmetic() -> Check {
    let mut cases = 0;
    for n in 1..=64 {
        for k in 1..=9 {
            for s in 1..=4 {
                for p in 0..=4 {
                    let other = 65 - n;
                    let spec = ConvLayerSpec::new(1, 1, k, s, p);
                    let got = conv_out_dims(n, other, &spec).ok();
                    let want = placements(n, k, s, p).zip(placements(other, k, s, p));
                    ensure!(
                        got == want,
                        "in={n}x{other} K={k} S={s} P={p}: {got:?} vs {want:?}"
                    );
                    cases += 1;
                }
            }
        }
    }
    let stem =
        conv_out_dims(625, 434, &ConvLayerSpec::new(3, 64, 7, 2, 0)).map_err(|e| e.to_string())?;
    ensure!(stem == (310, 214), "625x434 K=7 S=2 P=0 gave {stem:?}");
    Ok(format!(
        "{cases} parameter combinations match placement counting; 625x434 -> 310x214"
    ))
}

fn criterion_8_cost_invariance() -> Check {
    let stack = [
        ConvLayerSpec::new(3, 64, 7, 2, 3),
        ConvLayerSpec::new(64, 64, 3, 1, 1),
        ConvLayerSpec::new(64, 128, 3, 2, 1),
    ];
    let mut checked = 0;
    for (dims, policy) in [
        (Dims::new(5, 5, 36, 30, 3), SizePolicy::Crop),
        (Dims::new(6, 6, 625, 434, 3), SizePolicy::Pad),
    ] {
        let lf = LightField::from_fn(dims, BitDepth::Eight, |u, v, x, y, c| {
            ((u * 31 + v * 17 + x * 3 + y + c) % 256) as u16
        })
        .map_err(|e| e.to_string())?;
        let center = CenterPolicy::middle(&dims);
        let a = build_macropixel(&lf, 2, center, policy).map_err(|e| e.to_string())?;
        let b = build_macropixel(&lf, 3, center, policy).map_err(|e| e.to_string())?;
        let shape = |m: &lfkit::repr::MacroPixelImage| {
            (m.pixels.height(), m.pixels.width(), m.pixels.channels())
        };
        ensure!(shape(&a) == shape(&b), "k=2 and k=3 images differ in shape");
        ensure!(
            a.pixels != b.pixels,
            "k=2 and k=3 images are identical; fixture is degenerate"
        );
        let ra = pipeline_cost(shape(&a), &stack).map_err(|e| e.to_string())?;
        let rb = pipeline_cost(shape(&b), &stack).map_err(|e| e.to_string())?;
        ensure!(
            ra == rb,
            "cost reports differ for equal {:?} inputs",
            shape(&a)
        );
        checked += 1;
    }
    Ok(format!(
        "{checked} equal-size k=2 / k=3 pairs give identical cost reports"
    ))
}

fn criterion_9_dataset_protocol() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    // 50 subjects x 2 sessions x 40 light fields = 4000, occlusion at 5 per subject and session
    let counts: BTreeMap<String, usize> = DEFAULT_CATEGORIES
        .iter()
        .map(|c| c.to_string())
        .zip([12, 12, 11, 5])
        .collect();
    let meta = serde_json::to_string(&LightFieldMeta {
        angular_rows: 3,
        angular_cols: 3,
        height: 4,
        width: 4,
        channels: 1,
        bit_depth: BitDepth::Eight,
        center_row: None,
        center_col: None,
    })
    .unwrap();
    for s in 1..=50 {
        for session in 1..=2 {
            for (cat, &n) in &counts {
                for i in 1..=n {
                    let dir = root.join(format!("s{s:02}/session{session}/{cat}_{i:02}"));
                    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                    fs::write(dir.join(META_FILE), &meta).map_err(|e| e.to_string())?;
                }
            }
        }
    }
    let layout = LayoutSpec {
        category_counts: counts,
        ..LayoutSpec::default()
    };
    let scan = scan_corpus(root, &layout).map_err(|e| e.to_string())?;
    ensure!(
        scan.manifest.records.len() == 4000,
        "scanned {} records",
        scan.manifest.records.len()
    );
    ensure!(
        scan.skipped.is_empty() && scan.warnings.is_empty(),
        "unexpected skips or warnings"
    );

    let split = split_by_variation(&scan.manifest, "occlusion")
        .map_err(|e| e.to_string())?
        .manifest;
    let c = split.counts();
    ensure!(
        c.test == 500 && c.train == 3500,
        "test {}, train {}",
        c.test,
        c.train
    );
    ensure!(
        c.unassigned == 0 && c.test + c.train == split.records.len(),
        "split is not a partition"
    );
    ensure!(
        split
            .records
            .iter()
            .all(|r| (r.split == Split::Test) == (r.variation == "occlusion")),
        "held-out category leaked into train"
    );
    split.check()?;
    Ok("4000 records, |test| = 500, |train| = 3500, partition holds".into())
}

fn lfkit(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lfkit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "lfkit {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                files.insert(
                    path.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&path).unwrap(),
                );
            }
        }
    }
    files
}

/// Runs every subcommand with outputs under `out`; returns concatenated stdout.
fn run_every_subcommand(inputs: &Path, out: &Path) -> Result<Vec<u8>, String> {
    let s = |p: PathBuf| p.to_str().unwrap().to_owned();
    let lf = s(inputs.join("lf"));
    let corpus = s(inputs.join("corpus"));
    let layers = s(inputs.join("layers.json"));
    fs::create_dir_all(out).map_err(|e| e.to_string())?;
    let o = |name: &str| s(out.join(name));
    let mut stdout = Vec::new();
    let runs: Vec<Vec<String>> = vec![
        vec![
            "synth".into(),
            "--disparity".into(),
            "-1".into(),
            "--texture".into(),
            "noise".into(),
            "--dims".into(),
            "5,5,16,20".into(),
            "--seed".into(),
            "11".into(),
            o("synth_noise"),
        ],
        vec![
            "synth".into(),
            "--disparity".into(),
            "2".into(),
            "--texture".into(),
            "ramp".into(),
            "--dims".into(),
            "3,4,8,9".into(),
            "--bit-depth".into(),
            "8".into(),
            "--form".into(),
            "lenslet".into(),
            o("synth_ramp"),
        ],
        vec![
            "view".into(),
            "--view".into(),
            "1,3".into(),
            lf.clone(),
            o("view.png"),
        ],
        vec![
            "macropixel".into(),
            "--k".into(),
            "3".into(),
            "--metadata".into(),
            o("mp.json"),
            lf.clone(),
            o("mp.png"),
        ],
        vec![
            "macropixel".into(),
            "--k".into(),
            "2".into(),
            "--size-policy".into(),
            "pad".into(),
            "--center".into(),
            "1,1".into(),
            lf.clone(),
            o("mp_pad.png"),
        ],
        vec![
            "epi".into(),
            "--orientation".into(),
            "h".into(),
            "--fixed-spatial".into(),
            "5".into(),
            "--fixed-angular".into(),
            "2".into(),
            lf.clone(),
            o("epi.png"),
        ],
        vec!["lenslet".into(), lf.clone(), o("lenslet")],
        vec!["delenslet".into(), o("lenslet"), o("delenslet")],
        vec![
            "disparity".into(),
            "--target".into(),
            "2,4".into(),
            "--range".into(),
            "-3,3".into(),
            "--radius".into(),
            "2".into(),
            lf.clone(),
            o("disp.png"),
        ],
        vec![
            "cost".into(),
            "--layers".into(),
            layers.clone(),
            "--input".into(),
            "625,434,3".into(),
        ],
        vec![
            "cost".into(),
            "--layers".into(),
            layers,
            "--input".into(),
            "312,217,3".into(),
            "--output".into(),
            o("cost.json"),
        ],
        vec![
            "dataset".into(),
            "scan".into(),
            "--root".into(),
            corpus.clone(),
            "--csv".into(),
            o("scan.csv"),
            "--json".into(),
            o("scan.json"),
        ],
        vec![
            "dataset".into(),
            "split".into(),
            "--manifest".into(),
            o("scan.csv"),
            "--hold-out".into(),
            "illumination".into(),
            "--csv".into(),
            o("split.csv"),
            "--json".into(),
            o("split.json"),
        ],
        vec![
            "dataset".into(),
            "export".into(),
            "--manifest".into(),
            o("split.json"),
            "--root".into(),
            corpus.clone(),
            "--kind".into(),
            "macropixel".into(),
            "--k".into(),
            "2".into(),
            "--out".into(),
            o("export_j1"),
            "--jobs".into(),
            "1".into(),
        ],
        vec![
            "dataset".into(),
            "export".into(),
            "--manifest".into(),
            o("split.json"),
            "--root".into(),
            corpus.clone(),
            "--kind".into(),
            "macropixel".into(),
            "--k".into(),
            "2".into(),
            "--out".into(),
            o("export_j4"),
            "--jobs".into(),
            "4".into(),
        ],
        vec![
            "dataset".into(),
            "export".into(),
            "--manifest".into(),
            o("split.csv"),
            "--root".into(),
            corpus,
            "--kind".into(),
            "epi".into(),
            "--out".into(),
            o("export_epi"),
            "--jobs".into(),
            "3".into(),
        ],
    ];
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        stdout.extend(lfkit(&args)?);
    }
    Ok(stdout)
}

fn criterion_10_determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inputs = tmp.path().join("inputs");
    let tex = Texture::covering(
        (5, 5),
        (16, 20),
        1,
        BitDepth::Sixteen,
        noise_field(5, BitDepth::Sixteen),
    );
    let lf = synth_planar(5, 5, 16, 20, &tex, 1).map_err(|e| e.to_string())?;
    write_lightfield(&inputs.join("lf"), &lf, None, StorageForm::Views)
        .map_err(|e| e.to_string())?;
    let mut n = 0u64;
    for s in ["s01", "s02", "s03"] {
        for session in [1, 2] {
            for cat in DEFAULT_CATEGORIES {
                for i in 1..=2 {
                    let tex = Texture::covering(
                        (3, 3),
                        (8, 10),
                        1,
                        BitDepth::Eight,
                        noise_field(n, BitDepth::Eight),
                    );
                    let lf = synth_planar(3, 3, 8, 10, &tex, 1).map_err(|e| e.to_string())?;
                    let form = if n.is_multiple_of(2) {
                        StorageForm::Views
                    } else {
                        StorageForm::Lenslet
                    };
                    let dir = inputs.join(format!("corpus/{s}/session{session}/{cat}_{i:02}"));
                    write_lightfield(&dir, &lf, None, form).map_err(|e| e.to_string())?;
                    n += 1;
                }
            }
        }
    }
    write_json(
        &inputs.join("layers.json"),
        &[
            ConvLayerSpec::new(3, 64, 7, 2, 0),
            ConvLayerSpec::new(64, 64, 3, 1, 1),
        ],
    )
    .map_err(|e| e.to_string())?;

    let first_out = tmp.path().join("run1");
    let second_out = tmp.path().join("run2");
    let first = run_every_subcommand(&inputs, &first_out)?;
    let second = run_every_subcommand(&inputs, &second_out)?;
    ensure!(first == second, "stdout differs between runs");
    let a = snapshot(&first_out);
    let b = snapshot(&second_out);
    ensure!(a.keys().eq(b.keys()), "runs produced different file sets");
    for (path, bytes) in &a {
        ensure!(&b[path] == bytes, "{} differs between runs", path.display());
    }
    let j1 = snapshot(&first_out.join("export_j1"));
    let j4 = snapshot(&first_out.join("export_j4"));
    ensure!(
        j1.len() == 51,
        "expected 48 images + 3 metadata files, got {}",
        j1.len()
    );
    ensure!(j1 == j4, "--jobs 1 and --jobs 4 exports differ");
    Ok(format!(
        "{} output files byte-identical across runs; --jobs 1 == --jobs 4",
        a.len()
    ))
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let instances = macropixel_instances();
    let criteria: Vec<Criterion> = vec![
        (
            "macro-pixel oracle equivalence",
            Box::new(|| criterion_1_macropixel_oracle(&instances)),
        ),
        (
            "k=1 identity",
            Box::new(|| criterion_2_identity(&instances)),
        ),
        (
            "pixel budget",
            Box::new(|| criterion_3_pixel_budget(&instances)),
        ),
        (
            "lenslet round-trip",
            Box::new(criterion_4_lenslet_round_trip),
        ),
        ("EPI slope recovery", Box::new(criterion_5_epi_slope)),
        ("disparity recovery", Box::new(criterion_6_disparity)),
        (
            "convolution arithmetic",
            Box::new(criterion_7_conv_arithmetic),
        ),
        ("cost invariance", Box::new(criterion_8_cost_invariance)),
        ("dataset protocol", Box::new(criterion_9_dataset_protocol)),
        ("determinism", Box::new(criterion_10_determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(reason) => {
                println!("FAIL {:>2} {name}: {reason}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    println!("acceptance suite finished in {:.1}s", elapsed.as_secs_f64());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(elapsed < TIME_BUDGET, "suite exceeded {TIME_BUDGET:?}");
}
