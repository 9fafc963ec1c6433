//! Recursive X-Y cut and the basic reading order derived from it.

use std::collections::HashMap;

use serde::Serialize;

use crate::model::{BoundingBox, InstanceId, Page};

/// Segmentation tree produced by [`xy_cut`]. `YCut` children run top to
/// bottom, `XCut` children left to right. Leaves holding more than one id are
/// regions no whitespace cut could separate; their ids are already in
/// fallback reading order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum CutTree {
    Leaf { region: BoundingBox, ids: Vec<InstanceId> },
    YCut { region: BoundingBox, children: Vec<CutTree> },
    XCut { region: BoundingBox, children: Vec<CutTree> },
}

impl CutTree {
    pub fn region(&self) -> &BoundingBox {
        match self {
            CutTree::Leaf { region, .. } | CutTree::YCut { region, .. } | CutTree::XCut { region, .. } => region,
        }
    }

    pub fn children(&self) -> &[CutTree] {
        match self {
            CutTree::Leaf { .. } => &[],
            CutTree::YCut { children, .. } | CutTree::XCut { children, .. } => children,
        }
    }

    /// Leaf id lists in depth-first, left-to-right order.
    pub fn leaves(&self) -> impl Iterator<Item = &[InstanceId]> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.into_iter()
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a [InstanceId]>) {
        match self {
            CutTree::Leaf { ids, .. } => out.push(ids),
            CutTree::YCut { children, .. } | CutTree::XCut { children, .. } => {
                children.iter().for_each(|c| c.collect_leaves(out))
            }
        }
    }

    /// All ids below this node, in reading order.
    pub fn ids(&self) -> Vec<InstanceId> {
        self.leaves().flatten().copied().collect()
    }
}

#[derive(Clone, Copy)]
struct Item {
    id: InstanceId,
    bbox: BoundingBox,
}

#[derive(Clone, Copy)]
enum Axis {
    /// Horizontal whitespace bands; splits along y.
    Y,
    /// Vertical whitespace bands; splits along x.
    X,
}

fn span(item: &Item, axis: Axis) -> (f64, f64) {
    match axis {
        Axis::Y => (item.bbox.top(), item.bbox.bottom()),
        Axis::X => (item.bbox.left(), item.bbox.right()),
    }
}

/// Partition items at every projection gap wider than `min_gap`.
fn split(items: &[Item], axis: Axis, min_gap: f64) -> Vec<Vec<Item>> {
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| span(a, axis).0.total_cmp(&span(b, axis).0).then(a.id.cmp(&b.id)));

    let mut groups: Vec<Vec<Item>> = Vec::new();
    let mut reach = f64::NEG_INFINITY;
    for item in sorted {
        let (start, end) = span(&item, axis);
        match groups.last_mut() {
            Some(group) if start - reach <= min_gap => group.push(item),
            _ => groups.push(vec![item]),
        }
        reach = reach.max(end);
    }
    groups
}

fn enclosing(items: &[Item]) -> BoundingBox {
    items.iter().skip(1).fold(items[0].bbox, |acc, i| acc.union(&i.bbox))
}

/// Order inside a region that no cut separates: top edge, then left edge, then id.
fn fallback_order(items: &mut [Item]) {
    items.sort_by(|a, b| {
        a.bbox
            .top()
            .total_cmp(&b.bbox.top())
            .then(a.bbox.left().total_cmp(&b.bbox.left()))
            .then(a.id.cmp(&b.id))
    });
}

fn cut(mut items: Vec<Item>, min_gap: f64) -> CutTree {
    let region = enclosing(&items);
    if items.len() > 1 {
        for axis in [Axis::Y, Axis::X] {
            let groups = split(&items, axis, min_gap);
            if groups.len() > 1 {
                let children = groups.into_iter().map(|g| cut(g, min_gap)).collect();
                return match axis {
                    Axis::Y => CutTree::YCut { region, children },
                    Axis::X => CutTree::XCut { region, children },
                };
            }
        }
    }
    fallback_order(&mut items);
    CutTree::Leaf { region, ids: items.into_iter().map(|i| i.id).collect() }
}

/// Recursively split the page at whitespace gaps wider than `min_gap`,
/// trying horizontal bands before columns at every level.
pub fn xy_cut(page: &Page, min_gap: f64) -> CutTree {
    let items: Vec<Item> = page.instances.iter().map(|i| Item { id: i.id, bbox: i.bbox }).collect();
    if items.is_empty() {
        return CutTree::Leaf { region: BoundingBox::new(0.0, 0.0, page.width, page.height), ids: Vec::new() };
    }
    cut(items, min_gap.max(0.0))
}

/// A permutation of a page's instance ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReadingOrder {
    pub order: Vec<InstanceId>,
}

impl ReadingOrder {
    pub fn new(order: Vec<InstanceId>) -> Self {
        Self { order }
    }

    /// Map from id to its position in the order.
    pub fn positions(&self) -> HashMap<InstanceId, usize> {
        self.order.iter().enumerate().map(|(pos, &id)| (id, pos)).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Depth-first traversal of the X-Y cut tree: bands top to bottom, columns
/// left to right, so a left column is read in full before the right one.
pub fn reading_order(page: &Page, min_gap: f64) -> ReadingOrder {
    ReadingOrder::new(xy_cut(page, min_gap).ids())
}
