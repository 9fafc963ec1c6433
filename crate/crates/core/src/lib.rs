//! Spatial and logical relation graphs over document layout annotations.
//!
//! The annotation pipeline turns a page of layout boxes into a typed graph:
//!
//! 1. [`spatial`] finds the nearest Up/Down/Left/Right neighbor of every box.
//! 2. [`reading_order`] orders the boxes with a recursive X-Y cut.
//! 3. [`hierarchy`] groups boxes by role, attaches captions to their tables
//!    and pictures, and hangs content under section headers.
//! 4. [`completion`] turns the hierarchy into Parent/Child/Sequence edges and
//!    resolves "Table n" / "Figure n" / footnote mentions into Reference edges.
//!
//! [`eval`] scores predicted graphs against ground truth, and [`io`] reads and
//! writes the JSON interchange format, computes corpus statistics and exports
//! DOT or GraphML.

pub mod cli;
pub mod completion;
pub mod eval;
pub mod hierarchy;
pub mod io;
pub mod model;
pub mod reading_order;
pub mod spatial;

pub use completion::{annotate, AnnotateConfig};
pub use model::{
    BoundingBox, Category, DocumentGraph, InstanceId, LayoutInstance, Page, PageId, RelationEdge, RelationFilter,
    RelationType,
};
