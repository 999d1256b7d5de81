use std::collections::BTreeMap;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use crate::dataset::manifest::{DatasetManifest, SampleRecord, Split, DEFAULT_CATEGORIES};
use crate::error::{Error, Result};
use crate::io::META_FILE;

/// Maps light-field directory paths (relative to the corpus root, `/`
/// separated) to subject, session and variation.
///
/// `pattern` must define the named groups `subject`, `session` and
/// `variation`; `sublabel` is optional. `category_counts` gives the expected
/// number of light fields per category for each subject and session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub pattern: String,
    pub categories: Vec<String>,
    #[serde(default)]
    pub category_counts: BTreeMap<String, usize>,
}

impl Default for LayoutSpec {
    /// `s01/session1/pose_03` style trees, five light fields per category.
    fn default() -> Self {
        LayoutSpec {
            pattern: r"^(?P<subject>s\d+)/session(?P<session>\d+)/(?P<variation>[a-z]+)_(?P<sublabel>[^/]+)$"
                .into(),
            categories: DEFAULT_CATEGORIES.iter().map(|s| s.to_string()).collect(),
            category_counts: DEFAULT_CATEGORIES.iter().map(|s| (s.to_string(), 5)).collect(),
        }
    }
}

impl LayoutSpec {
    fn compile(&self) -> Result<Regex> {
        let re = Regex::new(&self.pattern)
            .map_err(|e| Error::Parameter(format!("invalid layout pattern: {e}")))?;
        for group in ["subject", "session", "variation"] {
            if !re.capture_names().flatten().any(|n| n == group) {
                return Err(Error::Parameter(format!(
                    "layout pattern lacks the named group {group:?}"
                )));
            }
        }
        Ok(re)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedEntry {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub manifest: DatasetManifest,
    pub skipped: Vec<SkippedEntry>,
    pub warnings: Vec<String>,
}

/// Finds every light-field directory (one holding `meta.json`) below `root`
/// and classifies it with `layout`. Entries the layout cannot parse are
/// reported, not fatal.
pub fn scan_corpus(root: &Path, layout: &LayoutSpec) -> Result<ScanReport> {
    let re = layout.compile()?;
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "corpus root is not a directory",
            ),
        ));
    }

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut walker = WalkDir::new(root)
        .min_depth(1)
        .sort_by_file_name()
        .into_iter();
    while let Some(entry) = walker.next() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_dir() || !entry.path().join(META_FILE).is_file() {
            continue;
        }
        // light-field directories are leaves
        walker.skip_current_dir();

        let rel = entry
            .path()
            .strip_prefix(root)
            .expect("walkdir yields paths under root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        match classify(&rel, &re, layout) {
            Ok(r) => records.push(r),
            Err(reason) => skipped.push(SkippedEntry { path: rel, reason }),
        }
    }
    records.sort_by(|a, b| a.path.cmp(&b.path));

    let mut warnings = Vec::new();
    if records.is_empty() {
        warnings.push(format!("no light fields found under {}", root.display()));
    }
    warnings.extend(count_warnings(&records, layout));
    Ok(ScanReport {
        manifest: DatasetManifest::new(layout.categories.clone(), records),
        skipped,
        warnings,
    })
}

fn classify(
    rel: &str,
    re: &Regex,
    layout: &LayoutSpec,
) -> std::result::Result<SampleRecord, String> {
    let caps = re
        .captures(rel)
        .ok_or_else(|| "path does not match the layout pattern".to_string())?;
    let session: u8 = match caps["session"].parse() {
        Ok(s @ (1 | 2)) => s,
        _ => return Err(format!("session {:?} is not 1 or 2", &caps["session"])),
    };
    let variation = caps["variation"].to_string();
    if !layout.categories.contains(&variation) {
        return Err(format!(
            "variation {variation:?} not in categories [{}]",
            layout.categories.join(", ")
        ));
    }
    Ok(SampleRecord {
        path: rel.to_string(),
        subject: caps["subject"].to_string(),
        session,
        variation,
        sublabel: caps.name("sublabel").map(|m| m.as_str().to_string()),
        split: Split::Unassigned,
    })
}

fn count_warnings(records: &[SampleRecord], layout: &LayoutSpec) -> Vec<String> {
    if layout.category_counts.is_empty() {
        return Vec::new();
    }
    let mut seen: BTreeMap<(&str, u8), BTreeMap<&str, usize>> = BTreeMap::new();
    for r in records {
        *seen
            .entry((&r.subject, r.session))
            .or_default()
            .entry(&r.variation)
            .or_default() += 1;
    }
    let mut warnings = Vec::new();
    for ((subject, session), counts) in &seen {
        for (category, &expected) in &layout.category_counts {
            let got = counts.get(category.as_str()).copied().unwrap_or(0);
            if got != expected {
                warnings.push(format!(
                    "subject {subject} session {session}: {got} {category} light fields, expected {expected}"
                ));
            }
        }
    }
    warnings
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub manifest: DatasetManifest,
    pub warnings: Vec<String>,
}

/// Holds out every record of one variation category as the test set and
/// assigns everything else to train.
pub fn split_by_variation(manifest: &DatasetManifest, held_out: &str) -> Result<SplitOutcome> {
    if !manifest.categories.iter().any(|c| c == held_out) {
        return Err(Error::Parameter(format!(
            "unknown category {held_out:?}; valid categories: {}",
            manifest.categories.join(", ")
        )));
    }
    let mut out = manifest.clone();
    out.held_out = Some(held_out.to_string());
    for r in &mut out.records {
        r.split = if r.variation == held_out {
            Split::Test
        } else {
            Split::Train
        };
    }
    let mut warnings = Vec::new();
    if out.counts().test == 0 {
        warnings.push(format!(
            "held-out category {held_out} has no records; test set is empty"
        ));
    }
    Ok(SplitOutcome {
        manifest: out,
        warnings,
    })
}
