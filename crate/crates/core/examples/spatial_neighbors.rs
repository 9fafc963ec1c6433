//! Nearest neighbors in the four directions, and the Manhattan check.
//!
//! cargo run --example spatial_neighbors

use docrel::model::{BoundingBox, Category, LayoutInstance, Page, RelationType};
use docrel::spatial::{classify_layout, extract_spatial, nearest_in_direction};

fn main() {
    // A full-width heading over two side-by-side paragraphs.
    let page = Page::new(0, 200.0, 200.0).with_instances(vec![
        LayoutInstance::new(0, Category::SectionHeader, BoundingBox::new(0.0, 0.0, 100.0, 20.0)),
        LayoutInstance::new(1, Category::Text, BoundingBox::new(0.0, 30.0, 45.0, 20.0)),
        LayoutInstance::new(2, Category::Text, BoundingBox::new(55.0, 30.0, 45.0, 20.0)),
    ]);

    for edge in extract_spatial(&page).expect("valid page") {
        println!("{} -{}-> {}", edge.subject, edge.rel, edge.object);
    }

    let up = nearest_in_direction(2, &page, RelationType::Up).unwrap().unwrap();
    println!("instance 2 looks up at {} across {}px", up.object, up.edge_distance);
    println!("layout: {:?}", classify_layout(&page));
}
