//! JSON interchange format, corpus statistics and graph export.
//!
//! ```text
//! {"pages": [{"id", "width", "height",
//!             "instances": [{"id", "category", "bbox": [x, y, w, h], "text"?, "score"?}],
//!             "relations": [{"subject", "object", "type", "score"?, "existence"?}]}],
//!  "metadata": {...}}
//! ```

mod export;
mod stats;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use export::{export_dataset_dot, export_dataset_graphml, export_dot, export_graphml, ExportOptions};
pub use stats::{compute_stats, StatsReport, TripleCount};

use crate::model::{
    validate_page, BoundingBox, Category, InstanceId, LayoutInstance, Page, PageId, RelationEdge, RelationType,
    ValidationReport, Violation,
};

/// A collection of pages plus free-form metadata (source, split, version).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub pages: Vec<Page>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl Dataset {
    pub fn new(pages: Vec<Page>) -> Self {
        Self { pages, metadata: BTreeMap::new() }
    }
}

/// Dataset-level validation outcome.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetValidation {
    pub duplicate_pages: Vec<PageId>,
    /// Only pages with at least one violation.
    pub pages: Vec<(PageId, ValidationReport)>,
}

impl DatasetValidation {
    pub fn is_empty(&self) -> bool {
        self.duplicate_pages.is_empty() && self.pages.is_empty()
    }
}

impl fmt::Display for DatasetValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in &self.duplicate_pages {
            writeln!(f, "duplicate page id {id}")?;
        }
        for (id, report) in &self.pages {
            for v in &report.violations {
                writeln!(f, "page {id}: {v}")?;
            }
        }
        Ok(())
    }
}

pub fn validate_dataset(dataset: &Dataset) -> DatasetValidation {
    validate_with(dataset, |_| true)
}

/// Validation for detector output: boxes may overlap each other and spill
/// past the page edge, everything else is checked as usual.
pub fn validate_predictions(dataset: &Dataset) -> DatasetValidation {
    validate_with(dataset, |v| !matches!(v, Violation::Overlap { .. } | Violation::OutsidePage { .. }))
}

fn validate_with(dataset: &Dataset, keep: impl Fn(&Violation) -> bool) -> DatasetValidation {
    let mut seen = HashSet::new();
    let duplicate_pages = dataset.pages.iter().filter(|p| !seen.insert(p.id)).map(|p| p.id).collect();
    let pages = dataset
        .pages
        .iter()
        .map(|p| {
            let mut report = validate_page(p);
            report.violations.retain(&keep);
            (p.id, report)
        })
        .filter(|(_, r)| !r.is_empty())
        .collect();
    DatasetValidation { duplicate_pages, pages }
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("page {page}, instance {instance}: unknown category {label:?}")]
    UnknownCategory { page: PageId, instance: InstanceId, label: String },
    #[error("page {page}, edge {subject} -> {object}: unknown relation type {label:?}")]
    UnknownRelationType { page: PageId, subject: InstanceId, object: InstanceId, label: String },
    #[error("invalid dataset:\n{0}")]
    Invalid(DatasetValidation),
}

/// A recoverable issue noticed while loading.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadWarning {
    pub page: PageId,
    pub message: String,
}

impl fmt::Display for LoadWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "page {}: {}", self.page, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: Dataset,
    pub warnings: Vec<LoadWarning>,
}

#[derive(Serialize, Deserialize)]
struct RawDataset {
    pages: Vec<RawPage>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct RawPage {
    id: PageId,
    width: f64,
    height: f64,
    #[serde(default)]
    instances: Vec<RawInstance>,
    #[serde(default)]
    relations: Vec<RawRelation>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    id: InstanceId,
    category: String,
    bbox: BoundingBox,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    subject: InstanceId,
    object: InstanceId,
    #[serde(rename = "type")]
    rel: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    existence: Option<f64>,
}

fn clamp_score(value: Option<f64>, page: PageId, what: impl FnOnce() -> String, warnings: &mut Vec<LoadWarning>) -> Option<f64> {
    let v = value?;
    let clamped = v.clamp(0.0, 1.0);
    if clamped != v {
        warnings.push(LoadWarning { page, message: format!("{} {v} clamped to {clamped}", what()) });
    }
    Some(clamped)
}

fn convert(raw: RawDataset) -> Result<Loaded, DatasetError> {
    let mut warnings = Vec::new();
    let mut pages = Vec::with_capacity(raw.pages.len());
    for rp in raw.pages {
        let page_id = rp.id;
        let mut instances = Vec::with_capacity(rp.instances.len());
        for ri in rp.instances {
            let category = ri.category.parse::<Category>().map_err(|e| DatasetError::UnknownCategory {
                page: page_id,
                instance: ri.id,
                label: e.label,
            })?;
            let score = clamp_score(ri.score, page_id, || format!("score of instance {}", ri.id), &mut warnings);
            instances.push(LayoutInstance { id: ri.id, bbox: ri.bbox, category, text: ri.text, score });
        }
        let mut relations = Vec::with_capacity(rp.relations.len());
        for rr in rp.relations {
            let rel = rr.rel.parse::<RelationType>().map_err(|e| DatasetError::UnknownRelationType {
                page: page_id,
                subject: rr.subject,
                object: rr.object,
                label: e.label,
            })?;
            let edge_name = || format!("edge {} -{}-> {}", rr.subject, rel, rr.object);
            let score = clamp_score(rr.score, page_id, || format!("score of {}", edge_name()), &mut warnings);
            let existence =
                clamp_score(rr.existence, page_id, || format!("existence of {}", edge_name()), &mut warnings);
            relations.push(RelationEdge { subject: rr.subject, object: rr.object, rel, score, existence });
        }
        pages.push(Page { id: page_id, width: rp.width, height: rp.height, instances, relations });
    }
    Ok(Loaded { dataset: Dataset { pages, metadata: raw.metadata }, warnings })
}

/// Parse the JSON text of a dataset. Labels are checked and out-of-range
/// scores clamped (with a warning), but page invariants are not validated.
pub fn parse_dataset(text: &str, origin: &str) -> Result<Loaded, DatasetError> {
    let raw: RawDataset = serde_json::from_str(text).map_err(|e| DatasetError::Parse {
        origin: origin.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    convert(raw)
}

/// Read and parse a dataset file without validating page invariants.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<Loaded, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })?;
    parse_dataset(&text, &path.display().to_string())
}

fn checked(loaded: Loaded, validation: DatasetValidation) -> Result<Loaded, DatasetError> {
    if validation.is_empty() {
        Ok(loaded)
    } else {
        Err(DatasetError::Invalid(validation))
    }
}

/// Read, parse and validate a dataset file.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Loaded, DatasetError> {
    let loaded = read_dataset(path)?;
    let validation = validate_dataset(&loaded.dataset);
    checked(loaded, validation)
}

/// Read a prediction file, checked with [`validate_predictions`].
pub fn load_predictions(path: impl AsRef<Path>) -> Result<Loaded, DatasetError> {
    let loaded = read_dataset(path)?;
    let validation = validate_predictions(&loaded.dataset);
    checked(loaded, validation)
}

fn to_raw(dataset: &Dataset) -> RawDataset {
    RawDataset {
        pages: dataset
            .pages
            .iter()
            .map(|p| RawPage {
                id: p.id,
                width: p.width,
                height: p.height,
                instances: p
                    .instances
                    .iter()
                    .map(|i| RawInstance {
                        id: i.id,
                        category: i.category.as_str().to_owned(),
                        bbox: i.bbox,
                        text: i.text.clone(),
                        score: i.score,
                    })
                    .collect(),
                relations: p
                    .relations
                    .iter()
                    .map(|e| RawRelation {
                        subject: e.subject,
                        object: e.object,
                        rel: e.rel.as_str().to_owned(),
                        score: e.score,
                        existence: e.existence,
                    })
                    .collect(),
            })
            .collect(),
        metadata: dataset.metadata.clone(),
    }
}

/// Pretty-printed JSON text of a dataset.
pub fn to_json_string(dataset: &Dataset) -> String {
    serde_json::to_string_pretty(&to_raw(dataset)).expect("dataset serializes") + "\n"
}

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    fs::write(path, to_json_string(dataset))
        .map_err(|source| DatasetError::Io { path: path.display().to_string(), source })
}
