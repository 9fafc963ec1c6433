//! Role groups, caption-to-container association and the logical forest.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::model::{Category, InstanceId, Page};
use crate::reading_order::ReadingOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RoleGroup {
    /// Section-header, Text, Formula, List-item.
    Structural,
    /// Table, Picture, Caption.
    NonTextualContent,
    /// Page-header, Page-footer, Title.
    Unassociated,
    /// Footnote.
    ReferenceOnly,
}

impl RoleGroup {
    pub fn of(category: Category) -> Self {
        use Category::*;
        match category {
            SectionHeader | Text | Formula | ListItem => RoleGroup::Structural,
            Table | Picture | Caption => RoleGroup::NonTextualContent,
            PageHeader | PageFooter | Title => RoleGroup::Unassociated,
            Footnote => RoleGroup::ReferenceOnly,
        }
    }

    /// Whether instances of this group take part in the parent/child forest.
    pub fn in_hierarchy(self) -> bool {
        matches!(self, RoleGroup::Structural | RoleGroup::NonTextualContent)
    }
}

pub fn group_roles(page: &Page) -> BTreeMap<InstanceId, RoleGroup> {
    page.instances.iter().map(|i| (i.id, RoleGroup::of(i.category))).collect()
}

/// A caption and the Table or Picture it describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaptionLink {
    pub caption: InstanceId,
    pub container: InstanceId,
}

fn position_of(positions: &HashMap<InstanceId, usize>, id: InstanceId) -> usize {
    positions.get(&id).copied().unwrap_or(usize::MAX)
}

/// Pair every caption with its closest Table or Picture (box gap distance),
/// ties going to the container earlier in reading order. Captions on pages
/// without any container stay unpaired.
pub fn associate_captions(page: &Page, order: &ReadingOrder) -> Vec<CaptionLink> {
    let positions = order.positions();
    let containers: Vec<_> = page.instances.iter().filter(|i| i.category.is_textless()).collect();

    let mut captions: Vec<_> = page.instances.iter().filter(|i| i.category == Category::Caption).collect();
    captions.sort_by_key(|c| (position_of(&positions, c.id), c.id));

    captions
        .into_iter()
        .filter_map(|cap| {
            containers
                .iter()
                .min_by(|a, b| {
                    cap.bbox
                        .gap_distance(&a.bbox)
                        .total_cmp(&cap.bbox.gap_distance(&b.bbox))
                        .then(position_of(&positions, a.id).cmp(&position_of(&positions, b.id)))
                        .then(a.id.cmp(&b.id))
                })
                .map(|c| CaptionLink { caption: cap.id, container: c.id })
        })
        .collect()
}

/// Parent links over the Structural and NonTextualContent instances of one
/// page.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct HierarchyForest {
    /// child id -> parent id
    pub parent_of: BTreeMap<InstanceId, InstanceId>,
    /// Members without a parent, in reading order.
    pub roots: Vec<InstanceId>,
    /// Every member, in reading order.
    pub members: Vec<InstanceId>,
}

impl HierarchyForest {
    pub fn parent(&self, id: InstanceId) -> Option<InstanceId> {
        self.parent_of.get(&id).copied()
    }

    /// Children of `parent` in reading order.
    pub fn children(&self, parent: InstanceId) -> Vec<InstanceId> {
        self.members.iter().copied().filter(|m| self.parent(*m) == Some(parent)).collect()
    }

    /// Sibling groups: the root set first, then each parent's children,
    /// parents taken in reading order. Every group is in reading order.
    pub fn sibling_groups(&self) -> Vec<Vec<InstanceId>> {
        let mut by_parent: BTreeMap<usize, Vec<InstanceId>> = BTreeMap::new();
        let rank: HashMap<InstanceId, usize> = self.members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        for &m in &self.members {
            if let Some(p) = self.parent(m) {
                by_parent.entry(rank.get(&p).copied().unwrap_or(usize::MAX)).or_default().push(m);
            }
        }
        std::iter::once(self.roots.clone()).chain(by_parent.into_values()).collect()
    }

    /// True when following parent links from any member never revisits a node.
    pub fn is_acyclic(&self) -> bool {
        let limit = self.parent_of.len();
        self.parent_of.keys().all(|&start| {
            let mut cur = start;
            for _ in 0..=limit {
                match self.parent(cur) {
                    Some(p) => cur = p,
                    None => return true,
                }
            }
            false
        })
    }
}

/// Build the forest with captions associated by [`associate_captions`].
pub fn build_hierarchy(page: &Page, order: &ReadingOrder) -> HierarchyForest {
    let captions = associate_captions(page, order);
    build_hierarchy_with(page, order, &captions)
}

/// Flat section forest. Section-headers are roots. Text, Formula and
/// List-item instances hang under the closest preceding Section-header.
/// A Table or Picture, together with its captions, is placed by the earliest
/// reading position of that unit; captions hang under their container.
/// Anything that precedes the first Section-header stays a root.
pub fn build_hierarchy_with(page: &Page, order: &ReadingOrder, captions: &[CaptionLink]) -> HierarchyForest {
    let positions = order.positions();
    let category: HashMap<InstanceId, Category> = page.instances.iter().map(|i| (i.id, i.category)).collect();
    let container_of: HashMap<InstanceId, InstanceId> = captions.iter().map(|l| (l.caption, l.container)).collect();

    let mut unit_anchor: HashMap<InstanceId, usize> = HashMap::new();
    for link in captions {
        let cap = position_of(&positions, link.caption);
        let entry = unit_anchor.entry(link.container).or_insert_with(|| position_of(&positions, link.container));
        *entry = (*entry).min(cap);
    }

    let mut members: Vec<InstanceId> = page
        .instances
        .iter()
        .filter(|i| RoleGroup::of(i.category).in_hierarchy())
        .map(|i| i.id)
        .collect();
    members.sort_by_key(|&id| (position_of(&positions, id), id));

    let mut headers: Vec<(usize, InstanceId)> = members
        .iter()
        .filter(|id| category[id] == Category::SectionHeader)
        .map(|&id| (position_of(&positions, id), id))
        .collect();
    headers.sort();
    let section_before = |anchor: usize| -> Option<InstanceId> {
        let idx = headers.partition_point(|&(pos, _)| pos < anchor);
        idx.checked_sub(1).map(|i| headers[i].1)
    };

    let mut parent_of = BTreeMap::new();
    for &id in &members {
        let parent = match category[&id] {
            Category::SectionHeader => None,
            Category::Caption => match container_of.get(&id) {
                Some(&container) => Some(container),
                None => section_before(position_of(&positions, id)),
            },
            Category::Table | Category::Picture => {
                let anchor = unit_anchor.get(&id).copied().unwrap_or_else(|| position_of(&positions, id));
                section_before(anchor)
            }
            _ => section_before(position_of(&positions, id)),
        };
        if let Some(p) = parent {
            parent_of.insert(id, p);
        }
    }

    let roots = members.iter().copied().filter(|m| !parent_of.contains_key(m)).collect();
    HierarchyForest { parent_of, roots, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundingBox, LayoutInstance};
    use crate::reading_order::reading_order;

    fn inst(id: InstanceId, category: Category, x: f64, y: f64, w: f64, h: f64) -> LayoutInstance {
        LayoutInstance::new(id, category, BoundingBox::new(x, y, w, h))
    }

    fn stacked(cats: &[Category]) -> Page {
        Page::new(0, 100.0, 400.0).with_instances(
            cats.iter().enumerate().map(|(i, &c)| inst(i as u32, c, 0.0, i as f64 * 30.0, 100.0, 20.0)).collect(),
        )
    }

    #[test]
    fn fixed_role_mapping() {
        assert_eq!(RoleGroup::of(Category::SectionHeader), RoleGroup::Structural);
        assert_eq!(RoleGroup::of(Category::Caption), RoleGroup::NonTextualContent);
        assert_eq!(RoleGroup::of(Category::Footnote), RoleGroup::ReferenceOnly);
        assert_eq!(RoleGroup::of(Category::Title), RoleGroup::Unassociated);
        let page = stacked(&Category::ALL);
        assert_eq!(group_roles(&page).len(), 11);
    }

    #[test]
    fn caption_below_picture() {
        let page = stacked(&[Category::Picture, Category::Caption]);
        let order = reading_order(&page, 0.0);
        assert_eq!(associate_captions(&page, &order), vec![CaptionLink { caption: 1, container: 0 }]);
    }

    #[test]
    fn equidistant_caption_pairs_with_earlier_container() {
        let page = stacked(&[Category::Table, Category::Caption, Category::Picture]);
        let order = reading_order(&page, 0.0);
        assert_eq!(associate_captions(&page, &order), vec![CaptionLink { caption: 1, container: 0 }]);
    }

    #[test]
    fn caption_without_container() {
        let page = stacked(&[Category::Text, Category::Caption]);
        assert!(associate_captions(&page, &reading_order(&page, 0.0)).is_empty());
    }

    #[test]
    fn header_with_two_paragraphs() {
        let page = stacked(&[Category::SectionHeader, Category::Text, Category::Text]);
        let forest = build_hierarchy(&page, &reading_order(&page, 0.0));
        assert_eq!(forest.parent_of, BTreeMap::from([(1, 0), (2, 0)]));
        assert_eq!(forest.roots, vec![0]);
    }

    #[test]
    fn content_before_first_header_is_a_root() {
        let page = stacked(&[Category::Text, Category::SectionHeader, Category::Text]);
        let forest = build_hierarchy(&page, &reading_order(&page, 0.0));
        assert_eq!(forest.parent_of, BTreeMap::from([(2, 1)]));
        assert_eq!(forest.roots, vec![0, 1]);
    }

    #[test]
    fn picture_with_caption_under_section() {
        let page = stacked(&[Category::SectionHeader, Category::Picture, Category::Caption]);
        let forest = build_hierarchy(&page, &reading_order(&page, 0.0));
        assert_eq!(forest.parent_of, BTreeMap::from([(1, 0), (2, 1)]));
        assert!(forest.is_acyclic());
    }

    #[test]
    fn caption_above_table_moves_unit_into_earlier_section() {
        // S0, T, Caption(of table), S1, Table: the unit starts before S1.
        let page = stacked(&[
            Category::SectionHeader,
            Category::Text,
            Category::Caption,
            Category::SectionHeader,
            Category::Table,
        ]);
        let order = ReadingOrder::new(vec![0, 1, 2, 3, 4]);
        let links = [CaptionLink { caption: 2, container: 4 }];
        let forest = build_hierarchy_with(&page, &order, &links);
        assert_eq!(forest.parent(4), Some(0));
        assert_eq!(forest.parent(2), Some(4));
    }

    #[test]
    fn unassociated_and_footnotes_stay_out() {
        let page = stacked(&[
            Category::PageHeader,
            Category::Title,
            Category::SectionHeader,
            Category::Text,
            Category::Footnote,
            Category::PageFooter,
        ]);
        let forest = build_hierarchy(&page, &reading_order(&page, 0.0));
        assert_eq!(forest.members, vec![2, 3]);
        assert_eq!(forest.parent_of, BTreeMap::from([(3, 2)]));
    }

    #[test]
    fn cycle_detection() {
        let forest = HierarchyForest {
            parent_of: BTreeMap::from([(1, 2), (2, 1)]),
            roots: vec![],
            members: vec![1, 2],
        };
        assert!(!forest.is_acyclic());
    }
}
