//! Corpus preparation: discover light fields, split them by variation
//! category, and export one representation per record.

mod export;
mod manifest;
mod scan;

pub use export::{
    export_representation, output_name, render, EpiParams, ExportReport, FailedRecord, ReprKind,
    ReprSpec, MANIFEST_CSV, MANIFEST_JSON, REPORT_FILE,
};
pub use manifest::{
    DatasetManifest, SampleRecord, Split, SplitCounts, CSV_HEADER, DEFAULT_CATEGORIES,
};
pub use scan::{
    scan_corpus, split_by_variation, LayoutSpec, ScanReport, SkippedEntry, SplitOutcome,
};
