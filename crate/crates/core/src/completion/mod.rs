//! Logical edges (Parent, Child, Sequence, Reference) and the end-to-end
//! annotation pipeline.

mod patterns;

use std::collections::{HashMap, HashSet};

use regex::Regex;

pub use patterns::{MarkerMatch, PatternError, ReferenceKind, ReferencePattern, ReferencePatterns};

use crate::hierarchy::{associate_captions, build_hierarchy_with, CaptionLink, HierarchyForest, RoleGroup};
use crate::model::{
    validate_page, Category, DocumentGraph, InstanceId, Page, RelationEdge, RelationFilter, RelationType,
    ValidationReport,
};
use crate::reading_order::{reading_order, ReadingOrder};
use crate::spatial::extract_spatial_unchecked;

/// `(parent, Parent, child)` and `(child, Child, parent)` for every link, in
/// reading order of the child.
pub fn emit_parent_child(forest: &HierarchyForest) -> Vec<RelationEdge> {
    forest
        .members
        .iter()
        .filter_map(|&child| forest.parent(child).map(|parent| (parent, child)))
        .flat_map(|(parent, child)| {
            [RelationEdge::new(parent, RelationType::Parent, child), RelationEdge::new(child, RelationType::Child, parent)]
        })
        .collect()
}

/// Chain consecutive siblings, the root set counting as one sibling group.
pub fn emit_sequence(forest: &HierarchyForest, order: &ReadingOrder) -> Vec<RelationEdge> {
    let positions = order.positions();
    let mut edges = Vec::new();
    for mut group in forest.sibling_groups() {
        group.sort_by_key(|id| (positions.get(id).copied().unwrap_or(usize::MAX), *id));
        edges.extend(group.windows(2).map(|w| RelationEdge::new(w[0], RelationType::Sequence, w[1])));
    }
    edges
}

fn leading_footnote_marker() -> &'static Regex {
    static RE: std::sync::OnceLock<Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^\s*([0-9]+|[*†‡]+)").expect("static regex"))
}

/// Reference edges from textual instances to the Tables, Pictures and
/// Footnotes they mention.
///
/// A "Table n" / "Figure n" marker resolves to the container whose caption
/// opens with the same marker. Only when no container of that kind has a
/// marked caption does it fall back to the n-th container of that kind in
/// reading order. Footnote markers resolve to the Footnote whose text starts
/// with the same token. Captions are never targets, and a caption never
/// references its own container.
pub fn emit_references(
    page: &Page,
    captions: &[CaptionLink],
    order: &ReadingOrder,
    patterns: &ReferencePatterns,
) -> Vec<RelationEdge> {
    let positions = order.positions();
    let pos = |id: InstanceId| positions.get(&id).copied().unwrap_or(usize::MAX);
    let mut in_order: Vec<_> = page.instances.iter().collect();
    in_order.sort_by_key(|i| (pos(i.id), i.id));

    let own_container: HashMap<InstanceId, InstanceId> = captions.iter().map(|l| (l.caption, l.container)).collect();

    struct Targets {
        by_marker: HashMap<String, InstanceId>,
        ordinal: Vec<InstanceId>,
    }
    let targets_for = |kind: ReferenceKind, category: Category| {
        let ordinal: Vec<InstanceId> = in_order.iter().filter(|i| i.category == category).map(|i| i.id).collect();
        let mut by_marker = HashMap::new();
        for &container in &ordinal {
            let mut caps: Vec<_> = captions
                .iter()
                .filter(|l| l.container == container)
                .filter_map(|l| page.instance(l.caption))
                .collect();
            caps.sort_by_key(|c| (pos(c.id), c.id));
            for cap in caps {
                let Some(text) = cap.text.as_deref() else { continue };
                if let Some(first) = patterns.find(kind, text).into_iter().next() {
                    by_marker.entry(first.token).or_insert(container);
                }
            }
        }
        Targets { by_marker, ordinal }
    };
    let tables = targets_for(ReferenceKind::TableRef, Category::Table);
    let figures = targets_for(ReferenceKind::FigureRef, Category::Picture);

    let mut footnotes: HashMap<String, InstanceId> = HashMap::new();
    for inst in in_order.iter().filter(|i| i.category == Category::Footnote) {
        let Some(text) = inst.text.as_deref() else { continue };
        if let Some(caps) = leading_footnote_marker().captures(text) {
            if let Some(token) = patterns::normalize_footnote_token(&caps[1]) {
                footnotes.entry(token).or_insert(inst.id);
            }
        }
    }

    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for subject in &in_order {
        if !RoleGroup::of(subject.category).in_hierarchy() {
            continue;
        }
        let Some(text) = subject.text.as_deref() else { continue };
        let mut push = |object: InstanceId| {
            if object != subject.id
                && own_container.get(&subject.id) != Some(&object)
                && seen.insert((subject.id, object))
            {
                edges.push(RelationEdge::new(subject.id, RelationType::Reference, object));
            }
        };

        let mut claimed: Vec<(usize, usize)> = Vec::new();
        for (kind, targets) in [(ReferenceKind::TableRef, &tables), (ReferenceKind::FigureRef, &figures)] {
            for m in patterns.find(kind, text) {
                claimed.push((m.start, m.end));
                let target = if targets.by_marker.is_empty() {
                    m.token.parse::<usize>().ok().and_then(|n| targets.ordinal.get(n - 1).copied())
                } else {
                    targets.by_marker.get(&m.token).copied()
                };
                if let Some(t) = target {
                    push(t);
                }
            }
        }
        for m in patterns.find(ReferenceKind::FootnoteRef, text) {
            if claimed.iter().any(|&(s, e)| m.start < e && s < m.end) {
                continue;
            }
            if let Some(&f) = footnotes.get(&m.token) {
                push(f);
            }
        }
    }
    edges
}

/// Pipeline settings.
#[derive(Debug, Clone)]
pub struct AnnotateConfig {
    /// Minimum whitespace width, in pixels, for an X-Y cut.
    pub min_gap: f64,
    pub patterns: ReferencePatterns,
    pub output: RelationFilter,
}

impl Default for AnnotateConfig {
    fn default() -> Self {
        Self { min_gap: 0.0, patterns: ReferencePatterns::default(), output: RelationFilter::All }
    }
}

/// Every intermediate product of one pipeline run.
#[derive(Debug, Clone)]
pub struct Annotation {
    pub graph: DocumentGraph,
    pub order: ReadingOrder,
    pub captions: Vec<CaptionLink>,
    pub forest: HierarchyForest,
}

/// Run the whole rule-based pipeline on a page. Relations already on the page
/// are discarded and replaced.
pub fn annotate(page: &Page, config: &AnnotateConfig) -> Result<DocumentGraph, ValidationReport> {
    annotate_detailed(page, config).map(|a| a.graph)
}

pub fn annotate_detailed(page: &Page, config: &AnnotateConfig) -> Result<Annotation, ValidationReport> {
    let mut page = page.stripped();
    let report = validate_page(&page);
    if !report.is_empty() {
        return Err(report);
    }

    let order = reading_order(&page, config.min_gap);
    let captions = associate_captions(&page, &order);
    let forest = build_hierarchy_with(&page, &order, &captions);

    let mut edges = extract_spatial_unchecked(&page);
    edges.extend(emit_parent_child(&forest));
    edges.extend(emit_sequence(&forest, &order));
    edges.extend(emit_references(&page, &captions, &order, &config.patterns));

    let mut seen = HashSet::new();
    edges.retain(|e| config.output.accepts(e.rel) && seen.insert(e.triple()));
    page.relations = edges;

    Ok(Annotation { graph: DocumentGraph::new_unchecked(page), order, captions, forest })
}
