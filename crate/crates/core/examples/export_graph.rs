//! DOT and GraphML renderings of an annotated page.
//!
//! cargo run --example export_graph | dot -Tsvg > page.svg

use docrel::io::{export_dot, export_graphml, ExportOptions};
use docrel::model::{BoundingBox, Category, LayoutInstance, Page, RelationFilter};
use docrel::{annotate, AnnotateConfig};

fn main() {
    let page = Page::new(3, 400.0, 300.0).with_instances(vec![
        LayoutInstance::new(0, Category::SectionHeader, BoundingBox::new(20.0, 20.0, 360.0, 20.0)).with_text("3 Data"),
        LayoutInstance::new(1, Category::Text, BoundingBox::new(20.0, 50.0, 360.0, 60.0)).with_text("See Figure 1."),
        LayoutInstance::new(2, Category::Picture, BoundingBox::new(20.0, 120.0, 360.0, 120.0)),
        LayoutInstance::new(3, Category::Caption, BoundingBox::new(20.0, 250.0, 360.0, 20.0)).with_text("Figure 1: Pipeline."),
    ]);
    let graph = annotate(&page, &AnnotateConfig::default()).expect("valid page");

    let logical = ExportOptions { filter: RelationFilter::Logical };
    print!("{}", export_dot(graph.page(), &logical));

    let all = export_graphml(graph.page(), &ExportOptions::default());
    eprintln!("GraphML: {} bytes, {} edges", all.len(), all.matches("<edge ").count());
}
