//! Graph-level evaluation: instance matching, relation filtering, mR_g and
//! mAP_g at a relation confidence threshold, plus detection mAP and
//! auxiliary-score fusion.

mod dla;
mod fusion;
mod graph_metrics;
mod matching;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

pub use dla::{dla_map, DlaParams, DlaReport};
pub use fusion::{dense_to_edges, fuse_auxiliary, fuse_edge_scores};
pub use graph_metrics::{
    average_precision, filter_relations, ground_truth_triplets, mean_ap_g, mean_recall_g, CategoryScores,
    ScoredTriplet, Triplet,
};
pub use matching::{match_instances, InstanceMapping};

use crate::model::{InstanceId, Page, PageId, RelationType};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("page {page}: predicted instance {instance} has no score")]
    MissingScore { page: PageId, instance: InstanceId },
    #[error("page {page}: ground truth is {gt:?} but prediction is {pred:?}")]
    PageSizeMismatch { page: PageId, gt: (f64, f64), pred: (f64, f64) },
    #[error("relation scores have shape {relation:?} but existence scores have shape {existence:?}")]
    ShapeMismatch { relation: Vec<usize>, existence: Vec<usize> },
    #[error("threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalParams {
    /// Strict lower bound on IoU for instance matching.
    pub t_iou: f64,
    /// Strict lower bounds on relation confidence; one report per value.
    pub rel_thresholds: Vec<f64>,
    /// Multiply relation scores by their existence scores before filtering.
    pub fuse_existence: bool,
    /// Detection mAP settings; `None` skips it.
    pub dla: Option<DlaParams>,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self { t_iou: 0.5, rel_thresholds: vec![0.5], fuse_existence: false, dla: Some(DlaParams::default()) }
    }
}

/// Metrics at one relation threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub t_iou: f64,
    pub t_r: f64,
    pub recall: BTreeMap<RelationType, f64>,
    pub ap: BTreeMap<RelationType, f64>,
    /// `None` when the ground truth holds no relations.
    pub mr_g: Option<f64>,
    pub map_g: Option<f64>,
    /// Relation categories with no ground-truth support.
    pub excluded: Vec<RelationType>,
    pub gt_instances: usize,
    pub pred_instances: usize,
    pub matched_instances: usize,
    pub gt_relations: usize,
    pub kept_relations: usize,
    pub dla: Option<DlaReport>,
}

impl MetricReport {
    /// True when some requested mean could not be computed.
    pub fn is_undefined(&self) -> bool {
        self.mr_g.is_none() || self.map_g.is_none() || self.dla.as_ref().is_some_and(|d| d.map.is_none())
    }
}

/// Matching and filtering for a single gt/pred page pair at one threshold.
pub fn evaluate_page(
    gt: &Page,
    pred: &Page,
    t_iou: f64,
    t_r: f64,
) -> Result<(InstanceMapping, Vec<ScoredTriplet>, Vec<Triplet>), EvalError> {
    let mapping = match_instances(gt, pred, t_iou)?;
    let kept = filter_relations(gt.id, &pred.relations, &mapping, t_r);
    Ok((mapping, kept, ground_truth_triplets(gt)))
}

fn check_threshold(t: f64) -> Result<(), EvalError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(EvalError::ThresholdOutOfRange(t))
    }
}

/// Evaluate predictions against ground truth, one [`MetricReport`] per
/// relation threshold in `params`. Prediction pages are paired with
/// ground-truth pages by id; a missing prediction page counts as empty.
/// Instance matching is done once and shared across thresholds.
pub fn evaluate(gt_pages: &[Page], pred_pages: &[Page], params: &EvalParams) -> Result<Vec<MetricReport>, EvalError> {
    check_threshold(params.t_iou)?;
    for &t in &params.rel_thresholds {
        check_threshold(t)?;
    }

    let preds: HashMap<PageId, &Page> = pred_pages.iter().map(|p| (p.id, p)).collect();
    let paired: Vec<(&Page, Page)> = gt_pages
        .iter()
        .map(|gt| {
            let mut pred = preds
                .get(&gt.id)
                .map(|p| (*p).clone())
                .unwrap_or_else(|| Page::new(gt.id, gt.width, gt.height));
            if params.fuse_existence {
                fuse_edge_scores(&mut pred.relations);
            }
            (gt, pred)
        })
        .collect();

    // Per-page work is independent; results are gathered in input order.
    let matched: Vec<(InstanceMapping, Vec<Triplet>)> = paired
        .par_iter()
        .map(|(gt, pred)| Ok((match_instances(gt, pred, params.t_iou)?, ground_truth_triplets(gt))))
        .collect::<Result<_, EvalError>>()?;

    let dla = params.dla.as_ref().map(|p| {
        let preds: Vec<Page> = paired.iter().map(|(_, p)| p.clone()).collect();
        dla_map(gt_pages, &preds, p)
    });
    let dla = dla.transpose()?;

    let ground_truth: Vec<Triplet> = matched.iter().flat_map(|(_, g)| g.iter().copied()).collect();
    let gt_instances = gt_pages.iter().map(|p| p.instances.len()).sum();
    let pred_instances = paired.iter().map(|(_, p)| p.instances.len()).sum();
    let matched_instances = matched.iter().map(|(m, _)| m.len()).sum();

    Ok(params
        .rel_thresholds
        .iter()
        .map(|&t_r| {
            let kept: Vec<ScoredTriplet> = paired
                .iter()
                .zip(&matched)
                .flat_map(|((gt, pred), (mapping, _))| filter_relations(gt.id, &pred.relations, mapping, t_r))
                .collect();
            let recall = mean_recall_g(&kept, &ground_truth);
            let ap = mean_ap_g(&kept, &ground_truth);
            MetricReport {
                t_iou: params.t_iou,
                t_r,
                mr_g: recall.mean,
                map_g: ap.mean,
                recall: recall.per_category,
                ap: ap.per_category,
                excluded: recall.excluded,
                gt_instances,
                pred_instances,
                matched_instances,
                gt_relations: ground_truth.len(),
                kept_relations: kept.len(),
                dla: dla.clone(),
            }
        })
        .collect())
}
