//! COCO-style detection mAP over IoU thresholds 0.50 to 0.95.
//!
//! cargo run --example detection_map

use docrel::eval::{dla_map, DlaParams};
use docrel::model::{BoundingBox, Category, LayoutInstance, Page};

fn main() {
    let gt = Page::new(0, 100.0, 100.0).with_instances(vec![
        LayoutInstance::new(0, Category::Table, BoundingBox::new(0.0, 0.0, 10.0, 10.0)),
        LayoutInstance::new(1, Category::Text, BoundingBox::new(0.0, 20.0, 50.0, 10.0)),
    ]);
    let pred = Page::new(0, 100.0, 100.0).with_instances(vec![
        // IoU 0.6 with the table.
        LayoutInstance::new(0, Category::Table, BoundingBox::new(0.0, 0.0, 10.0, 6.0)).with_score(0.9),
        LayoutInstance::new(1, Category::Text, BoundingBox::new(0.0, 20.0, 50.0, 10.0)).with_score(0.8),
        LayoutInstance::new(2, Category::Text, BoundingBox::new(60.0, 60.0, 20.0, 10.0)).with_score(0.3),
    ]);

    let report = dla_map(&[gt], &[pred], &DlaParams::default()).expect("scored predictions");
    for (class, ap) in &report.per_class {
        println!("{:<8} AP {ap:.3}", class.as_str());
    }
    for (t, map) in &report.per_threshold {
        println!("IoU {t:.2}  mAP {map:.3}");
    }
    println!("mAP@50:5:95 = {:.4}", report.map.unwrap());
}
