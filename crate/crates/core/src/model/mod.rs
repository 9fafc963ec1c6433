//! Domain types shared by every stage: boxes, labels, instances, typed
//! relation edges and pages.

mod geometry;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use geometry::{interval_overlap, iou, BoundingBox};
pub use validate::{validate_page, ValidationReport, Violation};

/// Instance identifier, unique within one page.
pub type InstanceId = u32;

/// Page identifier, unique within one dataset.
pub type PageId = u64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} label {label:?}")]
pub struct UnknownLabel {
    pub kind: &'static str,
    pub label: String,
}

/// The eleven layout element classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Caption,
    Footnote,
    Formula,
    #[serde(rename = "List-item")]
    ListItem,
    #[serde(rename = "Page-footer")]
    PageFooter,
    #[serde(rename = "Page-header")]
    PageHeader,
    Picture,
    #[serde(rename = "Section-header")]
    SectionHeader,
    Table,
    Text,
    Title,
}

impl Category {
    pub const ALL: [Category; 11] = [
        Category::Caption,
        Category::Footnote,
        Category::Formula,
        Category::ListItem,
        Category::PageFooter,
        Category::PageHeader,
        Category::Picture,
        Category::SectionHeader,
        Category::Table,
        Category::Text,
        Category::Title,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Caption => "Caption",
            Category::Footnote => "Footnote",
            Category::Formula => "Formula",
            Category::ListItem => "List-item",
            Category::PageFooter => "Page-footer",
            Category::PageHeader => "Page-header",
            Category::Picture => "Picture",
            Category::SectionHeader => "Section-header",
            Category::Table => "Table",
            Category::Text => "Text",
            Category::Title => "Title",
        }
    }

    /// Tables and pictures carry no text content.
    pub fn is_textless(self) -> bool {
        matches!(self, Category::Table | Category::Picture)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownLabel { kind: "category", label: s.to_owned() })
    }
}

/// The eight relation labels. The first four are spatial, the rest logical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationType {
    Up,
    Down,
    Left,
    Right,
    Parent,
    Child,
    Sequence,
    Reference,
}

impl RelationType {
    pub const ALL: [RelationType; 8] = [
        RelationType::Up,
        RelationType::Down,
        RelationType::Left,
        RelationType::Right,
        RelationType::Parent,
        RelationType::Child,
        RelationType::Sequence,
        RelationType::Reference,
    ];

    pub const SPATIAL: [RelationType; 4] =
        [RelationType::Up, RelationType::Down, RelationType::Left, RelationType::Right];

    pub const LOGICAL: [RelationType; 4] = [
        RelationType::Parent,
        RelationType::Child,
        RelationType::Sequence,
        RelationType::Reference,
    ];

    pub fn is_spatial(self) -> bool {
        matches!(self, RelationType::Up | RelationType::Down | RelationType::Left | RelationType::Right)
    }

    pub fn is_logical(self) -> bool {
        !self.is_spatial()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationType::Up => "Up",
            RelationType::Down => "Down",
            RelationType::Left => "Left",
            RelationType::Right => "Right",
            RelationType::Parent => "Parent",
            RelationType::Child => "Child",
            RelationType::Sequence => "Sequence",
            RelationType::Reference => "Reference",
        }
    }

    /// Position in [`RelationType::ALL`]; used as the channel index of dense
    /// pairwise score arrays.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RelationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationType {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RelationType::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| UnknownLabel { kind: "relation type", label: s.to_owned() })
    }
}

/// Which relation types a stage should keep.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum RelationFilter {
    #[default]
    All,
    Spatial,
    Logical,
    Only(Vec<RelationType>),
}

impl RelationFilter {
    pub fn accepts(&self, rel: RelationType) -> bool {
        match self {
            RelationFilter::All => true,
            RelationFilter::Spatial => rel.is_spatial(),
            RelationFilter::Logical => rel.is_logical(),
            RelationFilter::Only(types) => types.contains(&rel),
        }
    }
}

impl FromStr for RelationFilter {
    type Err = UnknownLabel;

    /// `all`, `spatial`, `logical`, or a comma list of relation type names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(RelationFilter::All),
            "spatial" => Ok(RelationFilter::Spatial),
            "logical" => Ok(RelationFilter::Logical),
            _ => s
                .split(',')
                .map(|part| {
                    let part = part.trim();
                    RelationType::ALL
                        .into_iter()
                        .find(|r| r.as_str().eq_ignore_ascii_case(part))
                        .ok_or_else(|| UnknownLabel { kind: "relation type", label: part.to_owned() })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(RelationFilter::Only),
        }
    }
}

/// One annotated or detected layout element.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutInstance {
    pub id: InstanceId,
    pub bbox: BoundingBox,
    pub category: Category,
    pub text: Option<String>,
    /// Detection confidence; present only on predictions.
    pub score: Option<f64>,
}

impl LayoutInstance {
    pub fn new(id: InstanceId, category: Category, bbox: BoundingBox) -> Self {
        Self { id, bbox, category, text: None, score: None }
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn with_score(mut self, score: f64) -> Self {
        self.score = Some(score);
        self
    }
}

/// Directed typed edge: `object` stands in relation `rel` to `subject`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationEdge {
    pub subject: InstanceId,
    pub object: InstanceId,
    pub rel: RelationType,
    pub score: Option<f64>,
    /// Relation-existence probability from an auxiliary head, predictions only.
    pub existence: Option<f64>,
}

impl RelationEdge {
    pub fn new(subject: InstanceId, rel: RelationType, object: InstanceId) -> Self {
        Self { subject, object, rel, score: None, existence: None }
    }

    pub fn with_score(mut self, score: f64) -> Self {
        self.score = Some(score);
        self
    }

    pub fn triple(&self) -> (InstanceId, RelationType, InstanceId) {
        (self.subject, self.rel, self.object)
    }
}

/// A single page: its layout instances and the relation edges among them.
#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub id: PageId,
    pub width: f64,
    pub height: f64,
    pub instances: Vec<LayoutInstance>,
    pub relations: Vec<RelationEdge>,
}

impl Page {
    pub fn new(id: PageId, width: f64, height: f64) -> Self {
        Self { id, width, height, instances: Vec::new(), relations: Vec::new() }
    }

    pub fn with_instances(mut self, instances: Vec<LayoutInstance>) -> Self {
        self.instances = instances;
        self
    }

    pub fn with_relations(mut self, relations: Vec<RelationEdge>) -> Self {
        self.relations = relations;
        self
    }

    pub fn instance(&self, id: InstanceId) -> Option<&LayoutInstance> {
        self.instances.iter().find(|i| i.id == id)
    }

    /// Copy of the page without any relation edges.
    pub fn stripped(&self) -> Self {
        Self { relations: Vec::new(), ..self.clone() }
    }
}

/// A page whose instances and edges satisfy every page invariant; the
/// `G = (V, E)` unit handed to evaluation and export.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentGraph {
    page: Page,
}

impl DocumentGraph {
    pub fn new(page: Page) -> Result<Self, ValidationReport> {
        let report = validate_page(&page);
        if report.is_empty() {
            Ok(Self { page })
        } else {
            Err(report)
        }
    }

    pub(crate) fn new_unchecked(page: Page) -> Self {
        Self { page }
    }

    pub fn page(&self) -> &Page {
        &self.page
    }

    pub fn instances(&self) -> &[LayoutInstance] {
        &self.page.instances
    }

    pub fn edges(&self) -> &[RelationEdge] {
        &self.page.relations
    }

    pub fn into_page(self) -> Page {
        self.page
    }
}
