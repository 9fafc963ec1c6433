//! Directional nearest-neighbor relations (Up/Down/Left/Right) and the
//! Manhattan / non-Manhattan page classification.
//!
//! A candidate is a neighbor of the subject in a direction when it lies
//! entirely on that side of the subject and the two boxes share a
//! perpendicular interval of positive length: x-intervals for Up/Down,
//! y-intervals for Left/Right. Only the nearest candidate is recorded,
//! measured as the gap between the facing edges. Equal gaps go to the larger
//! perpendicular overlap, then to the lower instance id.

use std::cmp::Ordering;

use serde::Serialize;

use crate::model::{validate_page, BoundingBox, InstanceId, Page, RelationEdge, RelationType, ValidationReport};
use crate::reading_order::xy_cut;

#[derive(Debug, thiserror::Error)]
pub enum SpatialError {
    #[error("{0} is not a spatial direction")]
    NotSpatial(RelationType),
    #[error("instance {0} is not on the page")]
    UnknownInstance(InstanceId),
    #[error("invalid page: {0}")]
    InvalidPage(ValidationReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalNeighbor {
    pub subject: InstanceId,
    pub direction: RelationType,
    pub object: InstanceId,
    pub edge_distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LayoutClass {
    Manhattan,
    NonManhattan,
}

#[derive(Clone, Copy)]
struct Entry {
    id: InstanceId,
    bbox: BoundingBox,
}

/// Best candidate so far: (gap, perpendicular overlap, id).
#[derive(Clone, Copy)]
struct Best {
    gap: f64,
    overlap: f64,
    id: InstanceId,
}

impl Best {
    fn beats(&self, other: &Best) -> bool {
        match self.gap.partial_cmp(&other.gap).unwrap_or(Ordering::Equal) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => match self.overlap.partial_cmp(&other.overlap).unwrap_or(Ordering::Equal) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => self.id < other.id,
            },
        }
    }
}

/// Per-page index holding the instances sorted by each of the four box edges,
/// so a query only walks candidates in gap order and stops early.
pub struct SpatialIndex {
    by_top: Vec<Entry>,
    by_bottom: Vec<Entry>,
    by_left: Vec<Entry>,
    by_right: Vec<Entry>,
}

fn sorted_by(entries: &[Entry], key: impl Fn(&BoundingBox) -> f64) -> Vec<Entry> {
    let mut v = entries.to_vec();
    v.sort_by(|a, b| key(&a.bbox).total_cmp(&key(&b.bbox)).then(a.id.cmp(&b.id)));
    v
}

impl SpatialIndex {
    pub fn new(page: &Page) -> Self {
        let entries: Vec<Entry> = page.instances.iter().map(|i| Entry { id: i.id, bbox: i.bbox }).collect();
        Self {
            by_top: sorted_by(&entries, BoundingBox::top),
            by_bottom: sorted_by(&entries, BoundingBox::bottom),
            by_left: sorted_by(&entries, BoundingBox::left),
            by_right: sorted_by(&entries, BoundingBox::right),
        }
    }

    /// Nearest neighbor of a box in one direction.
    pub fn nearest(
        &self,
        subject: InstanceId,
        bbox: &BoundingBox,
        direction: RelationType,
    ) -> Result<Option<DirectionalNeighbor>, SpatialError> {
        let mut best: Option<Best> = None;
        let consider = |best: &mut Option<Best>, cand: &Entry, gap: f64, overlap: f64| {
            if cand.id == subject || overlap <= 0.0 {
                return;
            }
            let c = Best { gap, overlap, id: cand.id };
            if best.is_none_or(|b| c.beats(&b)) {
                *best = Some(c);
            }
        };
        let past = |gap: f64, best: Option<Best>| best.is_some_and(|b| gap > b.gap);

        match direction {
            RelationType::Down => {
                let start = self.by_top.partition_point(|e| e.bbox.top() < bbox.bottom());
                for cand in &self.by_top[start..] {
                    let gap = cand.bbox.top() - bbox.bottom();
                    if past(gap, best) {
                        break;
                    }
                    consider(&mut best, cand, gap, bbox.x_overlap(&cand.bbox));
                }
            }
            RelationType::Up => {
                let end = self.by_bottom.partition_point(|e| e.bbox.bottom() <= bbox.top());
                for cand in self.by_bottom[..end].iter().rev() {
                    let gap = bbox.top() - cand.bbox.bottom();
                    if past(gap, best) {
                        break;
                    }
                    consider(&mut best, cand, gap, bbox.x_overlap(&cand.bbox));
                }
            }
            RelationType::Right => {
                let start = self.by_left.partition_point(|e| e.bbox.left() < bbox.right());
                for cand in &self.by_left[start..] {
                    let gap = cand.bbox.left() - bbox.right();
                    if past(gap, best) {
                        break;
                    }
                    consider(&mut best, cand, gap, bbox.y_overlap(&cand.bbox));
                }
            }
            RelationType::Left => {
                let end = self.by_right.partition_point(|e| e.bbox.right() <= bbox.left());
                for cand in self.by_right[..end].iter().rev() {
                    let gap = bbox.left() - cand.bbox.right();
                    if past(gap, best) {
                        break;
                    }
                    consider(&mut best, cand, gap, bbox.y_overlap(&cand.bbox));
                }
            }
            other => return Err(SpatialError::NotSpatial(other)),
        }

        Ok(best.map(|b| DirectionalNeighbor { subject, direction, object: b.id, edge_distance: b.gap }))
    }
}

/// Nearest neighbor of `subject` in `direction`, or `None` when nothing lies
/// on that side with a shared perpendicular interval.
pub fn nearest_in_direction(
    subject: InstanceId,
    page: &Page,
    direction: RelationType,
) -> Result<Option<DirectionalNeighbor>, SpatialError> {
    if !direction.is_spatial() {
        return Err(SpatialError::NotSpatial(direction));
    }
    let inst = page.instance(subject).ok_or(SpatialError::UnknownInstance(subject))?;
    SpatialIndex::new(page).nearest(subject, &inst.bbox, direction)
}

/// All spatial edges of a valid page: one per (subject, direction) that has a
/// neighbor. Edges come in page instance order, then Up, Down, Left, Right.
pub fn extract_spatial(page: &Page) -> Result<Vec<RelationEdge>, SpatialError> {
    let report = validate_page(page);
    if !report.is_empty() {
        return Err(SpatialError::InvalidPage(report));
    }
    Ok(extract_spatial_unchecked(page))
}

pub(crate) fn extract_spatial_unchecked(page: &Page) -> Vec<RelationEdge> {
    let index = SpatialIndex::new(page);
    let mut edges = Vec::new();
    for inst in &page.instances {
        for dir in RelationType::SPATIAL {
            if let Ok(Some(n)) = index.nearest(inst.id, &inst.bbox, dir) {
                edges.push(RelationEdge::new(n.subject, dir, n.object));
            }
        }
    }
    edges
}

/// Manhattan when recursive whitespace cuts separate every instance into its
/// own region.
pub fn classify_layout(page: &Page) -> LayoutClass {
    if xy_cut(page, 0.0).leaves().all(|ids| ids.len() <= 1) {
        LayoutClass::Manhattan
    } else {
        LayoutClass::NonManhattan
    }
}
