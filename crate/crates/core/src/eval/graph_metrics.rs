use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::model::{InstanceId, Page, PageId, RelationEdge, RelationType};

use super::matching::InstanceMapping;

/// A ground-truth relation `(subject, predicate, object)` on one page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triplet {
    pub page: PageId,
    pub subject: InstanceId,
    pub predicate: RelationType,
    pub object: InstanceId,
}

/// A predicted relation rewritten onto ground-truth ids, with its confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoredTriplet {
    pub page: PageId,
    pub subject: InstanceId,
    pub predicate: RelationType,
    pub object: InstanceId,
    pub score: f64,
}

impl ScoredTriplet {
    pub fn key(&self) -> Triplet {
        Triplet { page: self.page, subject: self.subject, predicate: self.predicate, object: self.object }
    }
}

/// The ground-truth relation set `G` of a page.
pub fn ground_truth_triplets(page: &Page) -> Vec<Triplet> {
    let ids: HashSet<InstanceId> = page.instances.iter().map(|i| i.id).collect();
    page.relations
        .iter()
        .filter(|e| ids.contains(&e.subject) && ids.contains(&e.object))
        .map(|e| Triplet { page: page.id, subject: e.subject, predicate: e.rel, object: e.object })
        .collect()
}

/// Keep predicted edges whose score is strictly above `t_r` and whose
/// endpoints are both matched, rewriting the endpoints through `L`. An edge
/// without a score counts as a hard prediction with score 1.
pub fn filter_relations(
    page: PageId,
    pred_edges: &[RelationEdge],
    mapping: &InstanceMapping,
    t_r: f64,
) -> Vec<ScoredTriplet> {
    pred_edges
        .iter()
        .filter_map(|e| {
            let score = e.score.unwrap_or(1.0);
            if score <= t_r {
                return None;
            }
            Some(ScoredTriplet {
                page,
                subject: mapping.gt_for(e.subject)?,
                predicate: e.rel,
                object: mapping.gt_for(e.object)?,
                score,
            })
        })
        .collect()
}

/// Per-relation-category values and their mean over the categories present
/// in the ground truth. `mean` is `None` when the ground truth is empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CategoryScores {
    pub per_category: BTreeMap<RelationType, f64>,
    /// Categories without ground-truth support, left out of the mean.
    pub excluded: Vec<RelationType>,
    pub mean: Option<f64>,
}

fn support(ground_truth: &[Triplet]) -> BTreeMap<RelationType, HashSet<Triplet>> {
    let mut by_cat: BTreeMap<RelationType, HashSet<Triplet>> = BTreeMap::new();
    for t in ground_truth {
        by_cat.entry(t.predicate).or_default().insert(*t);
    }
    by_cat
}

fn finish(per_category: BTreeMap<RelationType, f64>) -> CategoryScores {
    let excluded = RelationType::ALL.into_iter().filter(|r| !per_category.contains_key(r)).collect();
    let mean = (!per_category.is_empty()).then(|| per_category.values().sum::<f64>() / per_category.len() as f64);
    CategoryScores { per_category, excluded, mean }
}

/// `Recall_r = TP_r / |G_r|` per category and their mean (mR_g). Repeated
/// predictions of the same triplet count once.
pub fn mean_recall_g(predicted: &[ScoredTriplet], ground_truth: &[Triplet]) -> CategoryScores {
    let predicted: HashSet<Triplet> = predicted.iter().map(ScoredTriplet::key).collect();
    let per_category = support(ground_truth)
        .into_iter()
        .map(|(rel, truth)| {
            let hits = truth.iter().filter(|t| predicted.contains(t)).count();
            (rel, hits as f64 / truth.len() as f64)
        })
        .collect();
    finish(per_category)
}

/// Area under the precision envelope of a ranked hit list. `hits` is ordered
/// by descending confidence; `positives` is the number of ground-truth items.
pub fn average_precision(hits: &[bool], positives: usize) -> f64 {
    if positives == 0 {
        return 0.0;
    }
    let mut precision = Vec::with_capacity(hits.len());
    let mut recall = Vec::with_capacity(hits.len());
    let mut tp = 0usize;
    for (k, &hit) in hits.iter().enumerate() {
        tp += usize::from(hit);
        precision.push(tp as f64 / (k + 1) as f64);
        recall.push(tp as f64 / positives as f64);
    }
    for k in (0..precision.len().saturating_sub(1)).rev() {
        precision[k] = precision[k].max(precision[k + 1]);
    }
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for (p, r) in precision.iter().zip(&recall) {
        ap += (r - prev_recall) * p;
        prev_recall = *r;
    }
    ap
}

/// Per-category AP over score-ranked triplets and their mean (mAP_g). A
/// triplet predicted twice is a hit the first time and a false positive
/// after that.
pub fn mean_ap_g(predicted: &[ScoredTriplet], ground_truth: &[Triplet]) -> CategoryScores {
    let mut by_cat: HashMap<RelationType, Vec<&ScoredTriplet>> = HashMap::new();
    for p in predicted {
        by_cat.entry(p.predicate).or_default().push(p);
    }
    let per_category = support(ground_truth)
        .into_iter()
        .map(|(rel, truth)| {
            let mut ranked = by_cat.remove(&rel).unwrap_or_default();
            ranked.sort_by(|a, b| b.score.total_cmp(&a.score));
            let mut claimed = HashSet::new();
            let hits: Vec<bool> = ranked
                .iter()
                .map(|p| {
                    let key = p.key();
                    truth.contains(&key) && claimed.insert(key)
                })
                .collect();
            (rel, average_precision(&hits, truth.len()))
        })
        .collect();
    finish(per_category)
}
