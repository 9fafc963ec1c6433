//! Detection mAP averaged over IoU thresholds 0.50:0.05:0.95, COCO style.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::model::{Category, Page};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlaParams {
    pub iou_thresholds: Vec<f64>,
    /// Detections kept per page and class, highest scores first.
    pub max_dets: usize,
}

impl Default for DlaParams {
    fn default() -> Self {
        // Built from integers so that 0.60 is exactly the literal 0.6.
        let iou_thresholds = (0..10).map(|i| f64::from(50 + 5 * i) / 100.0).collect();
        Self { iou_thresholds, max_dets: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlaReport {
    /// AP per class, averaged over the IoU thresholds.
    pub per_class: BTreeMap<Category, f64>,
    /// mAP over classes at each IoU threshold.
    pub per_threshold: Vec<(f64, f64)>,
    /// Classes without ground truth; left out of every mean.
    pub excluded: Vec<Category>,
    /// `None` when the ground truth holds no boxes.
    pub map: Option<f64>,
    pub params: DlaParams,
}

/// 101-point interpolated AP from score-sorted hits.
fn ap_101(hits: &[bool], positives: usize) -> f64 {
    let mut tp = 0usize;
    let mut precision = Vec::with_capacity(hits.len());
    let mut recall = Vec::with_capacity(hits.len());
    for (k, &h) in hits.iter().enumerate() {
        tp += usize::from(h);
        precision.push(tp as f64 / (k + 1) as f64);
        recall.push(tp as f64 / positives as f64);
    }
    for k in (0..precision.len().saturating_sub(1)).rev() {
        precision[k] = precision[k].max(precision[k + 1]);
    }
    let total: f64 = (0..=100)
        .map(|i| {
            let r = f64::from(i) / 100.0;
            let idx = recall.partition_point(|&rc| rc < r);
            precision.get(idx).copied().unwrap_or(0.0)
        })
        .sum();
    total / 101.0
}

/// Greedy matching of one class on one page at one threshold. Returns
/// `(score, hit)` for every kept detection.
fn match_class(
    gt: &[&crate::model::LayoutInstance],
    dets: &[(f64, &crate::model::LayoutInstance)],
    threshold: f64,
) -> Vec<(f64, bool)> {
    let mut taken = vec![false; gt.len()];
    dets.iter()
        .map(|&(score, d)| {
            let mut best: Option<(usize, f64)> = None;
            for (gi, g) in gt.iter().enumerate() {
                if taken[gi] {
                    continue;
                }
                let iou = g.bbox.iou(&d.bbox);
                if iou >= threshold && best.is_none_or(|(_, b)| iou > b) {
                    best = Some((gi, iou));
                }
            }
            if let Some((gi, _)) = best {
                taken[gi] = true;
            }
            (score, best.is_some())
        })
        .collect()
}

/// DLA mAP over the ground-truth pages. Prediction pages are paired by id;
/// prediction pages with no ground-truth counterpart are ignored.
pub fn dla_map(gt_pages: &[Page], pred_pages: &[Page], params: &DlaParams) -> Result<DlaReport, EvalError> {
    let preds: HashMap<_, _> = pred_pages.iter().map(|p| (p.id, p)).collect();

    // class -> threshold index -> (scored hits across pages, positives)
    let mut hits: BTreeMap<Category, Vec<Vec<(f64, bool)>>> = BTreeMap::new();
    let mut positives: BTreeMap<Category, usize> = BTreeMap::new();

    for gt_page in gt_pages {
        let pred_page = preds.get(&gt_page.id);
        for category in Category::ALL {
            let gt: Vec<_> = gt_page.instances.iter().filter(|i| i.category == category).collect();
            let mut dets = Vec::new();
            if let Some(p) = pred_page {
                for d in p.instances.iter().filter(|i| i.category == category) {
                    let score = d.score.ok_or(EvalError::MissingScore { page: p.id, instance: d.id })?;
                    dets.push((score, d));
                }
            }
            if gt.is_empty() && dets.is_empty() {
                continue;
            }
            dets.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.id.cmp(&b.1.id)));
            dets.truncate(params.max_dets);
            *positives.entry(category).or_default() += gt.len();
            let per_t = hits.entry(category).or_insert_with(|| vec![Vec::new(); params.iou_thresholds.len()]);
            for (ti, &t) in params.iou_thresholds.iter().enumerate() {
                per_t[ti].extend(match_class(&gt, &dets, t));
            }
        }
    }

    let mut per_class = BTreeMap::new();
    let mut per_threshold_sum = vec![0.0; params.iou_thresholds.len()];
    for (category, per_t) in hits {
        let n = positives[&category];
        if n == 0 {
            continue;
        }
        let mut class_sum = 0.0;
        for (ti, mut scored) in per_t.into_iter().enumerate() {
            scored.sort_by(|a, b| b.0.total_cmp(&a.0));
            let flags: Vec<bool> = scored.iter().map(|s| s.1).collect();
            let ap = ap_101(&flags, n);
            class_sum += ap;
            per_threshold_sum[ti] += ap;
        }
        per_class.insert(category, class_sum / params.iou_thresholds.len() as f64);
    }

    let classes = per_class.len() as f64;
    let per_threshold = params
        .iou_thresholds
        .iter()
        .zip(per_threshold_sum)
        .map(|(&t, s)| (t, if classes > 0.0 { s / classes } else { 0.0 }))
        .collect();
    let excluded = Category::ALL.into_iter().filter(|c| !per_class.contains_key(c)).collect();
    let map = (!per_class.is_empty()).then(|| per_class.values().sum::<f64>() / classes);
    Ok(DlaReport { per_class, per_threshold, excluded, map, params: params.clone() })
}
