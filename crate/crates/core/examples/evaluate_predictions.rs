//! Scoring a predicted relation graph against ground truth at several
//! relation confidence thresholds.
//!
//! cargo run --example evaluate_predictions

use docrel::eval::{evaluate, EvalParams};
use docrel::model::{BoundingBox, Category, LayoutInstance, Page, RelationEdge, RelationType};

fn main() {
    let b = BoundingBox::new;
    let gt = Page::new(1, 600.0, 800.0)
        .with_instances(vec![
            LayoutInstance::new(0, Category::SectionHeader, b(50.0, 40.0, 500.0, 30.0)),
            LayoutInstance::new(1, Category::Text, b(50.0, 90.0, 500.0, 80.0)),
            LayoutInstance::new(2, Category::Text, b(50.0, 190.0, 500.0, 80.0)),
        ])
        .with_relations(vec![
            RelationEdge::new(0, RelationType::Parent, 1),
            RelationEdge::new(0, RelationType::Parent, 2),
            RelationEdge::new(1, RelationType::Child, 0),
            RelationEdge::new(2, RelationType::Child, 0),
            RelationEdge::new(1, RelationType::Sequence, 2),
            RelationEdge::new(1, RelationType::Down, 2),
        ]);

    // Slightly shifted boxes under new ids, with confidences.
    let pred = Page::new(1, 600.0, 800.0)
        .with_instances(vec![
            LayoutInstance::new(10, Category::SectionHeader, b(52.0, 41.0, 495.0, 30.0)).with_score(0.95),
            LayoutInstance::new(11, Category::Text, b(50.0, 92.0, 500.0, 76.0)).with_score(0.9),
            LayoutInstance::new(12, Category::Text, b(48.0, 188.0, 500.0, 85.0)).with_score(0.8),
        ])
        .with_relations(vec![
            RelationEdge::new(10, RelationType::Parent, 11).with_score(0.97),
            RelationEdge::new(10, RelationType::Parent, 12).with_score(0.7),
            RelationEdge::new(11, RelationType::Child, 10).with_score(0.96),
            RelationEdge::new(11, RelationType::Sequence, 12).with_score(0.8),
            RelationEdge::new(12, RelationType::Sequence, 11).with_score(0.3),
            RelationEdge::new(11, RelationType::Down, 12).with_score(0.99),
        ]);

    let params = EvalParams { rel_thresholds: vec![0.5, 0.75, 0.95], ..EvalParams::default() };
    for r in evaluate(&[gt], &[pred], &params).expect("scored predictions") {
        println!(
            "T_R={:.2}  mR_g={:.4}  mAP_g={:.4}  matched {}/{}  kept {} relations",
            r.t_r,
            r.mr_g.unwrap(),
            r.map_g.unwrap(),
            r.matched_instances,
            r.gt_instances,
            r.kept_relations
        );
        for (rel, recall) in &r.recall {
            println!("    {:<9} recall {recall:.3}  AP {:.3}", rel.as_str(), r.ap[rel]);
        }
    }
}
