//! Recursive X-Y cut: the cut tree and the reading order it produces.
//!
//! cargo run --example reading_order

use docrel::model::{BoundingBox, Category, LayoutInstance, Page};
use docrel::reading_order::{reading_order, xy_cut};

fn main() {
    let b = BoundingBox::new;
    // Header, then a left column (1, 2) and a right column (3, 4).
    let page = Page::new(0, 600.0, 800.0).with_instances(vec![
        LayoutInstance::new(0, Category::Title, b(50.0, 20.0, 500.0, 40.0)),
        LayoutInstance::new(1, Category::Text, b(50.0, 100.0, 240.0, 300.0)),
        LayoutInstance::new(2, Category::Text, b(50.0, 420.0, 240.0, 200.0)),
        LayoutInstance::new(3, Category::Text, b(310.0, 100.0, 240.0, 150.0)),
        LayoutInstance::new(4, Category::Picture, b(310.0, 270.0, 240.0, 350.0)),
    ]);

    let tree = xy_cut(&page, 0.0);
    println!("{}", serde_json::to_string_pretty(&tree).unwrap());
    println!("order: {:?}", reading_order(&page, 0.0).order);

    // A wider minimum gap keeps the two columns together as one region.
    println!("order with min_gap 25: {:?}", reading_order(&page, 25.0).order);
}
