//! The whole rule-based pipeline on one page: spatial edges, sections,
//! caption pairing, sequences and textual references.
//!
//! cargo run --example annotate_page

use docrel::completion::annotate_detailed;
use docrel::model::{BoundingBox, Category, LayoutInstance, Page, RelationType};
use docrel::AnnotateConfig;

fn main() {
    let b = BoundingBox::new;
    let page = Page::new(7, 600.0, 800.0).with_instances(vec![
        LayoutInstance::new(0, Category::SectionHeader, b(50.0, 40.0, 500.0, 30.0)).with_text("2 Results"),
        LayoutInstance::new(1, Category::Text, b(50.0, 90.0, 500.0, 80.0))
            .with_text("Accuracy is reported in Table 1 and the gap is small1."),
        LayoutInstance::new(2, Category::Table, b(50.0, 190.0, 500.0, 200.0)),
        LayoutInstance::new(3, Category::Caption, b(50.0, 400.0, 500.0, 30.0)).with_text("Table 1: Accuracy."),
        LayoutInstance::new(4, Category::Text, b(50.0, 450.0, 500.0, 80.0)).with_text("We discuss it next."),
        LayoutInstance::new(5, Category::Footnote, b(50.0, 700.0, 500.0, 30.0)).with_text("1 Within noise."),
        LayoutInstance::new(6, Category::PageFooter, b(280.0, 760.0, 40.0, 20.0)).with_text("12"),
    ]);

    let a = annotate_detailed(&page, &AnnotateConfig::default()).expect("valid page");
    println!("reading order: {:?}", a.order.order);
    println!("captions: {:?}", a.captions);
    println!("parent of: {:?}", a.forest.parent_of);

    for rel in RelationType::LOGICAL {
        for e in a.graph.edges().iter().filter(|e| e.rel == rel) {
            println!("{} -{}-> {}", e.subject, e.rel, e.object);
        }
    }
    let spatial = a.graph.edges().iter().filter(|e| e.rel.is_spatial()).count();
    println!("{spatial} spatial edges, {} in total", a.graph.edges().len());
}
