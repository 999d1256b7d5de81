use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::manifest::{DatasetManifest, SampleRecord};
use crate::error::{Error, Result};
use crate::io::{encode_png, read_lightfield, write_json};
use crate::lightfield::{CenterPolicy, LightField};
use crate::raster::Image;
use crate::repr::{
    build_macropixel, center_view, extract_epi, to_lenslet, EpiOrientation, SizePolicy,
};

pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_CSV: &str = "manifest.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReprKind {
    Center,
    Macropixel,
    Lenslet,
    Epi,
}

impl fmt::Display for ReprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReprKind::Center => "center",
            ReprKind::Macropixel => "macropixel",
            ReprKind::Lenslet => "lenslet",
            ReprKind::Epi => "epi",
        })
    }
}

impl FromStr for ReprKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "center" => Ok(ReprKind::Center),
            "macropixel" => Ok(ReprKind::Macropixel),
            "lenslet" => Ok(ReprKind::Lenslet),
            "epi" => Ok(ReprKind::Epi),
            other => Err(Error::Parameter(format!(
                "unknown representation {other:?}, expected center, macropixel, lenslet or epi"
            ))),
        }
    }
}

/// EPI placement. Unset indices default to the middle spatial line and the
/// center view's angular line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiParams {
    pub orientation: EpiOrientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_spatial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_angular: Option<usize>,
}

impl Default for EpiParams {
    fn default() -> Self {
        EpiParams {
            orientation: EpiOrientation::Horizontal,
            fixed_spatial: None,
            fixed_angular: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReprSpec {
    pub kind: ReprKind,
    pub k: usize,
    pub size_policy: SizePolicy,
    /// Overrides the center stored with each light field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<CenterPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epi: Option<EpiParams>,
}

impl ReprSpec {
    pub fn new(kind: ReprKind, k: usize) -> Self {
        ReprSpec {
            kind,
            k,
            size_policy: SizePolicy::Crop,
            center: None,
            epi: None,
        }
    }
}

/// Renders one light field into the image a training pipeline consumes.
pub fn render(lf: &LightField, stored_center: CenterPolicy, spec: &ReprSpec) -> Result<Image> {
    let center = spec.center.unwrap_or(stored_center);
    match spec.kind {
        ReprKind::Center => center_view(lf, center),
        ReprKind::Macropixel => Ok(build_macropixel(lf, spec.k, center, spec.size_policy)?.pixels),
        ReprKind::Lenslet => Ok(to_lenslet(lf).pixels().clone()),
        ReprKind::Epi => {
            let p = spec.epi.unwrap_or_default();
            let d = lf.dims();
            let (spatial, angular) = match p.orientation {
                EpiOrientation::Horizontal => (d.height / 2, center.row),
                EpiOrientation::Vertical => (d.width / 2, center.col),
            };
            let epi = extract_epi(
                lf,
                p.orientation,
                p.fixed_spatial.unwrap_or(spatial),
                p.fixed_angular.unwrap_or(angular),
            )?;
            Ok(epi.values)
        }
    }
}

/// `{subject}_s{session}_{variation}[_{sublabel}]_{kind}_k{k}.png`, with
/// characters outside `[A-Za-z0-9.-]` in each field replaced by `-`.
pub fn output_name(record: &SampleRecord, spec: &ReprSpec) -> String {
    let clean = |s: &str| -> String {
        s.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                    c
                } else {
                    '-'
                }
            })
            .collect()
    };
    let mut name = format!(
        "{}_s{}_{}",
        clean(&record.subject),
        record.session,
        clean(&record.variation)
    );
    if let Some(sub) = &record.sublabel {
        name.push('_');
        name.push_str(&clean(sub));
    }
    format!("{name}_{}_k{}.png", spec.kind, spec.k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedRecord {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportReport {
    pub succeeded: usize,
    pub failed: Vec<FailedRecord>,
}

enum Outcome {
    Written(String),
    Failed(String),
    Fatal(String),
}

/// Renders every record of `manifest` (paths relative to `root`) into
/// `out_dir`, then writes `manifest.csv`, `manifest.json` and `report.json`.
///
/// Records are processed on `jobs` worker threads; outputs do not depend on
/// `jobs`. A light field that fails to load or render is recorded in the
/// report and skipped. A failure to write output aborts the export.
///
/// The manifest copy lists the successfully exported records, with `path`
/// pointing at the output image relative to `out_dir`.
pub fn export_representation(
    manifest: &DatasetManifest,
    root: &Path,
    spec: &ReprSpec,
    out_dir: &Path,
    jobs: usize,
) -> Result<ExportReport> {
    if jobs == 0 {
        return Err(Error::Parameter("jobs must be at least 1".into()));
    }
    if spec.k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let names: Vec<String> = manifest
        .records
        .iter()
        .map(|r| output_name(r, spec))
        .collect();
    let mut first_use: HashMap<&str, usize> = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        first_use.entry(n.as_str()).or_insert(i);
    }

    let process = |i: usize| -> Outcome {
        let record = &manifest.records[i];
        if first_use[names[i].as_str()] != i {
            return Outcome::Failed(format!(
                "output name {} already used by another record",
                names[i]
            ));
        }
        let loaded = match read_lightfield(&root.join(&record.path)) {
            Ok(l) => l,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        let bytes = match render(&loaded.lightfield, loaded.center, spec)
            .and_then(|img| encode_png(&img))
        {
            Ok(b) => b,
            Err(e) => return Outcome::Failed(e.to_string()),
        };
        let path = out_dir.join(&names[i]);
        match fs::write(&path, bytes) {
            Ok(()) => Outcome::Written(names[i].clone()),
            Err(e) => Outcome::Fatal(format!("{}: {e}", path.display())),
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start {jobs} workers: {e}")))?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        (0..manifest.records.len())
            .into_par_iter()
            .map(process)
            .collect()
    });

    let mut report = ExportReport::default();
    let mut exported = Vec::new();
    let mut fatal = None;
    for (record, outcome) in manifest.records.iter().zip(outcomes) {
        match outcome {
            Outcome::Written(name) => {
                report.succeeded += 1;
                exported.push(SampleRecord {
                    path: name,
                    ..record.clone()
                });
            }
            Outcome::Failed(reason) => report.failed.push(FailedRecord {
                path: record.path.clone(),
                reason,
            }),
            Outcome::Fatal(reason) => {
                fatal.get_or_insert(reason);
            }
        }
    }

    if let Some(reason) = fatal {
        // best effort: the directory may be the thing that failed
        let _ = write_json(&out_dir.join(REPORT_FILE), &report);
        return Err(Error::ExportAborted {
            succeeded: report.succeeded,
            reason,
            report: Box::new(report),
        });
    }

    let copy = DatasetManifest {
        categories: manifest.categories.clone(),
        held_out: manifest.held_out.clone(),
        representation: Some(*spec),
        records: exported,
    };
    copy.write_csv(&out_dir.join(MANIFEST_CSV))?;
    copy.write_json(&out_dir.join(MANIFEST_JSON))?;
    write_json(&out_dir.join(REPORT_FILE), &report)?;
    Ok(report)
}
