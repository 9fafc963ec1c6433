//! Annotating a small dataset, saving it, loading it back and counting
//! relations per type and per category pair.
//!
//! cargo run --example dataset_stats

use docrel::io::{compute_stats, load_dataset, save_dataset, Dataset};
use docrel::model::{BoundingBox, Category, LayoutInstance, Page};
use docrel::{annotate, AnnotateConfig};

fn page(id: u64, rows: u32) -> Page {
    let mut instances =
        vec![LayoutInstance::new(0, Category::SectionHeader, BoundingBox::new(40.0, 40.0, 520.0, 30.0)).with_text("1 Intro")];
    for r in 0..rows {
        let y = 90.0 + f64::from(r) * 70.0;
        instances.push(
            LayoutInstance::new(r + 1, Category::Text, BoundingBox::new(40.0, y, 250.0, 60.0)).with_text("Body text."),
        );
        instances.push(
            LayoutInstance::new(r + 100, Category::ListItem, BoundingBox::new(310.0, y, 250.0, 60.0)).with_text("- item"),
        );
    }
    Page::new(id, 600.0, 800.0).with_instances(instances)
}

fn main() {
    let config = AnnotateConfig::default();
    let pages = (0..4).map(|i| annotate(&page(i, 2 + i as u32), &config).unwrap().into_page()).collect();
    let dataset = Dataset::new(pages);

    let path = std::env::temp_dir().join("docrel_stats_example.json");
    save_dataset(&dataset, &path).expect("writable temp dir");
    let loaded = load_dataset(&path).expect("round trip").dataset;
    assert_eq!(loaded, dataset);

    print!("{}", compute_stats(&loaded).to_text());
    let _ = std::fs::remove_file(path);
}
