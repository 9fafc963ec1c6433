use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::model::{Category, Page, RelationType};

use super::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleCount {
    pub subject: Category,
    pub object: Category,
    #[serde(rename = "type")]
    pub rel: RelationType,
    pub count: u64,
}

/// Relation and instance counts over a dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub pages: u64,
    pub instances: u64,
    pub total_relations: u64,
    pub spatial_relations: u64,
    pub logical_relations: u64,
    /// 0 on an empty dataset.
    pub spatial_share: f64,
    /// `1 - spatial_share`, so the two always sum to exactly 1 when defined.
    pub logical_share: f64,
    pub per_type: BTreeMap<RelationType, u64>,
    pub per_triple: Vec<TripleCount>,
    pub instances_per_category: BTreeMap<Category, u64>,
}

#[derive(Default)]
struct Tally {
    pages: u64,
    instances: u64,
    per_type: BTreeMap<RelationType, u64>,
    per_triple: BTreeMap<(Category, Category, RelationType), u64>,
    per_category: BTreeMap<Category, u64>,
}

impl Tally {
    fn of_page(page: &Page) -> Self {
        let mut t = Tally { pages: 1, instances: page.instances.len() as u64, ..Default::default() };
        let category: HashMap<_, _> = page.instances.iter().map(|i| (i.id, i.category)).collect();
        for i in &page.instances {
            *t.per_category.entry(i.category).or_default() += 1;
        }
        for e in &page.relations {
            *t.per_type.entry(e.rel).or_default() += 1;
            if let (Some(&s), Some(&o)) = (category.get(&e.subject), category.get(&e.object)) {
                *t.per_triple.entry((s, o, e.rel)).or_default() += 1;
            }
        }
        t
    }

    fn merge(mut self, other: Self) -> Self {
        self.pages += other.pages;
        self.instances += other.instances;
        for (k, v) in other.per_type {
            *self.per_type.entry(k).or_default() += v;
        }
        for (k, v) in other.per_triple {
            *self.per_triple.entry(k).or_default() += v;
        }
        for (k, v) in other.per_category {
            *self.per_category.entry(k).or_default() += v;
        }
        self
    }
}

/// Exact relation counts per type, per (subject category, object category,
/// type), and the spatial / logical split.
pub fn compute_stats(dataset: &Dataset) -> StatsReport {
    let tally = dataset.pages.par_iter().map(Tally::of_page).reduce(Tally::default, Tally::merge);

    let per_type: BTreeMap<RelationType, u64> =
        RelationType::ALL.into_iter().map(|r| (r, tally.per_type.get(&r).copied().unwrap_or(0))).collect();
    let total: u64 = per_type.values().sum();
    let spatial: u64 = per_type.iter().filter(|(r, _)| r.is_spatial()).map(|(_, c)| c).sum();
    let (spatial_share, logical_share) = if total == 0 {
        (0.0, 0.0)
    } else {
        let s = spatial as f64 / total as f64;
        (s, 1.0 - s)
    };

    StatsReport {
        pages: tally.pages,
        instances: tally.instances,
        total_relations: total,
        spatial_relations: spatial,
        logical_relations: total - spatial,
        spatial_share,
        logical_share,
        per_type,
        per_triple: tally
            .per_triple
            .into_iter()
            .map(|((subject, object, rel), count)| TripleCount { subject, object, rel, count })
            .collect(),
        instances_per_category: Category::ALL
            .into_iter()
            .map(|c| (c, tally.per_category.get(&c).copied().unwrap_or(0)))
            .collect(),
    }
}

impl StatsReport {
    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {:>12}", "pages", self.pages);
        let _ = writeln!(out, "{:<16} {:>12}", "instances", self.instances);
        let _ = writeln!(out, "{:<16} {:>12}", "relations", self.total_relations);
        let _ = writeln!(
            out,
            "{:<16} {:>12} {:>8.2}%",
            "spatial",
            self.spatial_relations,
            self.spatial_share * 100.0
        );
        let _ = writeln!(
            out,
            "{:<16} {:>12} {:>8.2}%",
            "logical",
            self.logical_relations,
            self.logical_share * 100.0
        );
        out.push_str("\nrelation type\n");
        for (r, c) in &self.per_type {
            let _ = writeln!(out, "  {:<14} {:>12}", r.as_str(), c);
        }
        out.push_str("\ncategory\n");
        for (cat, c) in &self.instances_per_category {
            let _ = writeln!(out, "  {:<14} {:>12}", cat.as_str(), c);
        }
        out.push_str("\nsubject -> object\n");
        for t in &self.per_triple {
            let _ = writeln!(
                out,
                "  {:<14} {:<10} {:<14} {:>12}",
                t.subject.as_str(),
                t.rel.as_str(),
                t.object.as_str(),
                t.count
            );
        }
        out
    }
}
