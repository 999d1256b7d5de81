use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::export::ReprSpec;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 5] = ["path", "subject", "session", "variation", "split"];

/// The four kinds of facial variation in the capture protocol.
pub const DEFAULT_CATEGORIES: [&str; 4] = ["expression", "pose", "illumination", "occlusion"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
    #[default]
    Unassigned,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
            Split::Unassigned => "unassigned",
        })
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            "unassigned" => Ok(Split::Unassigned),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    /// Relative, `/`-separated.
    pub path: String,
    pub subject: String,
    pub session: u8,
    /// Category from the manifest's category set.
    pub variation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sublabel: Option<String>,
    #[serde(default)]
    pub split: Split,
}

impl SampleRecord {
    /// `category` or `category:sublabel`, as written in the CSV column.
    pub fn variation_label(&self) -> String {
        match &self.sublabel {
            Some(s) => format!("{}:{s}", self.variation),
            None => self.variation.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub test: usize,
    pub unassigned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub categories: Vec<String>,
    #[serde(default)]
    pub held_out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<ReprSpec>,
    pub records: Vec<SampleRecord>,
}

impl DatasetManifest {
    pub fn new(categories: Vec<String>, records: Vec<SampleRecord>) -> Self {
        DatasetManifest {
            categories,
            held_out: None,
            representation: None,
            records,
        }
    }

    pub fn counts(&self) -> SplitCounts {
        let mut counts = SplitCounts::default();
        for r in &self.records {
            match r.split {
                Split::Train => counts.train += 1,
                Split::Test => counts.test += 1,
                Split::Unassigned => counts.unassigned += 1,
            }
        }
        counts
    }

    /// Checks the held-out invariant and that every record carries a known
    /// session and category. Returns a description of the first problem.
    pub fn check(&self) -> std::result::Result<(), String> {
        for r in &self.records {
            if r.session != 1 && r.session != 2 {
                return Err(format!("{}: session {} not in {{1, 2}}", r.path, r.session));
            }
            if !self.categories.contains(&r.variation) {
                return Err(format!("{}: unknown variation {:?}", r.path, r.variation));
            }
            if let Some(h) = &self.held_out {
                let want = if &r.variation == h {
                    Split::Test
                } else {
                    Split::Train
                };
                if r.split != want {
                    return Err(format!(
                        "{}: split {} but held-out category is {h}",
                        r.path, r.split
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |source| Error::Csv {
            path: "<memory>".into(),
            source,
        };
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for r in &self.records {
            w.write_record([
                r.path.as_str(),
                r.subject.as_str(),
                &r.session.to_string(),
                &r.variation_label(),
                &r.split.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Parameter(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("manifest fields are UTF-8"))
    }

    /// Parses the CSV form. The CSV carries no category set, so the default
    /// categories are assumed and extended with any others encountered.
    pub fn from_csv_str(text: &str, source: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let csv_err = |e| Error::Csv {
            path: source.to_path_buf(),
            source: e,
        };
        let header = rdr.headers().map_err(csv_err)?;
        if header.iter().ne(CSV_HEADER) {
            return Err(Error::format(
                source,
                format!("header must be exactly {}", CSV_HEADER.join(",")),
            ));
        }
        let mut categories: Vec<String> =
            DEFAULT_CATEGORIES.iter().map(|s| s.to_string()).collect();
        let mut records = Vec::new();
        for (line, row) in rdr.records().enumerate() {
            let row = row.map_err(csv_err)?;
            let bad = |what: &str| Error::format(source, format!("row {}: {what}", line + 1));
            let session: u8 = row[2]
                .parse()
                .map_err(|_| bad("session is not an integer"))?;
            let (variation, sublabel) = match row[3].split_once(':') {
                Some((c, s)) => (c.to_string(), Some(s.to_string())),
                None => (row[3].to_string(), None),
            };
            if !categories.contains(&variation) {
                categories.push(variation.clone());
            }
            records.push(SampleRecord {
                path: row[0].to_string(),
                subject: row[1].to_string(),
                session,
                variation,
                sublabel,
                split: row[4].parse().map_err(|e: String| bad(&e))?,
            });
        }
        let held_out = infer_held_out(&records);
        Ok(DatasetManifest {
            categories,
            held_out,
            representation: None,
            records,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()?).map_err(|e| Error::io(path, e))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }

    /// Loads either form, chosen by extension (`.csv`, otherwise JSON).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            Self::from_csv_str(&text, path)
        } else {
            serde_json::from_str(&text).map_err(|source| Error::Json {
                path: path.to_path_buf(),
                source,
            })
        }
    }
}

/// A CSV split is recognized as a held-out split when all test records share
/// one category and every other record is train.
fn infer_held_out(records: &[SampleRecord]) -> Option<String> {
    let test = records.iter().find(|r| r.split == Split::Test)?;
    let consistent = records.iter().all(|r| {
        (r.variation == test.variation && r.split == Split::Test)
            || (r.variation != test.variation && r.split == Split::Train)
    });
    consistent.then(|| test.variation.clone())
}
