//! Listing every invariant a page breaks.
//!
//! cargo run --example validate_page

use docrel::model::{validate_page, BoundingBox, Category, LayoutInstance, Page, RelationEdge, RelationType};
use docrel::DocumentGraph;

fn main() {
    let page = Page::new(9, 100.0, 100.0)
        .with_instances(vec![
            LayoutInstance::new(0, Category::Text, BoundingBox::new(0.0, 0.0, 50.0, 50.0)),
            LayoutInstance::new(1, Category::Text, BoundingBox::new(40.0, 40.0, 30.0, 30.0)),
            LayoutInstance::new(2, Category::Picture, BoundingBox::new(80.0, 80.0, 40.0, 10.0)),
        ])
        .with_relations(vec![
            RelationEdge::new(0, RelationType::Down, 7),
            RelationEdge::new(1, RelationType::Up, 1),
        ]);

    let report = validate_page(&page);
    println!("{} violation(s)", report.len());
    println!("{report}");
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    assert!(DocumentGraph::new(page).is_err());
}
