use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{InstanceId, Page};

use super::EvalError;

/// Ground-truth to prediction assignment `M` and its inverse `L`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InstanceMapping {
    gt_to_pred: BTreeMap<InstanceId, InstanceId>,
    pred_to_gt: BTreeMap<InstanceId, InstanceId>,
}

impl InstanceMapping {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (InstanceId, InstanceId)>) -> Self {
        let gt_to_pred: BTreeMap<_, _> = pairs.into_iter().collect();
        let pred_to_gt = gt_to_pred.iter().map(|(&g, &p)| (p, g)).collect();
        Self { gt_to_pred, pred_to_gt }
    }

    /// `M[gt]`
    pub fn pred_for(&self, gt: InstanceId) -> Option<InstanceId> {
        self.gt_to_pred.get(&gt).copied()
    }

    /// `L(pred)`
    pub fn gt_for(&self, pred: InstanceId) -> Option<InstanceId> {
        self.pred_to_gt.get(&pred).copied()
    }

    /// (gt, pred) pairs ordered by ground-truth id.
    pub fn pairs(&self) -> impl Iterator<Item = (InstanceId, InstanceId)> + '_ {
        self.gt_to_pred.iter().map(|(&g, &p)| (g, p))
    }

    pub fn len(&self) -> usize {
        self.gt_to_pred.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gt_to_pred.is_empty()
    }
}

fn same_size(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0)
}

/// Single-pass instance matching.
///
/// Predictions are visited by descending score (ties by id). Each one picks
/// the same-label ground truth with the highest IoU (ties to the lower gt id)
/// and claims it when the IoU is strictly above `t_iou` and the gt is either
/// free or held by a prediction with strictly lower IoU. A displaced
/// prediction is not revisited.
pub fn match_instances(gt: &Page, pred: &Page, t_iou: f64) -> Result<InstanceMapping, EvalError> {
    if !same_size(gt.width, pred.width) || !same_size(gt.height, pred.height) {
        return Err(EvalError::PageSizeMismatch {
            page: gt.id,
            gt: (gt.width, gt.height),
            pred: (pred.width, pred.height),
        });
    }

    let mut preds = Vec::with_capacity(pred.instances.len());
    for p in &pred.instances {
        let score = p.score.ok_or(EvalError::MissingScore { page: pred.id, instance: p.id })?;
        preds.push((score, p));
    }
    preds.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.id.cmp(&b.1.id)));

    // gt index -> (pred id, iou)
    let mut assigned: Vec<Option<(InstanceId, f64)>> = vec![None; gt.instances.len()];
    for (_, p) in preds {
        let mut best: Option<(usize, f64)> = None;
        for (gi, g) in gt.instances.iter().enumerate() {
            if g.category != p.category {
                continue;
            }
            let iou = g.bbox.iou(&p.bbox);
            let better = match best {
                None => true,
                Some((bi, biou)) => iou > biou || (iou == biou && g.id < gt.instances[bi].id),
            };
            if better {
                best = Some((gi, iou));
            }
        }
        let Some((gi, iou)) = best else { continue };
        if iou > t_iou && assigned[gi].is_none_or(|(_, held)| iou > held) {
            assigned[gi] = Some((p.id, iou));
        }
    }

    Ok(InstanceMapping::from_pairs(
        gt.instances.iter().zip(assigned).filter_map(|(g, a)| a.map(|(p, _)| (g.id, p))),
    ))
}
