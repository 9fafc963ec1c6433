use std::fmt::Write as _;

use crate::model::{LayoutInstance, Page, RelationFilter};

use super::Dataset;

#[derive(Debug, Clone, Default)]
pub struct ExportOptions {
    pub filter: RelationFilter,
}

fn node_label(i: &LayoutInstance) -> String {
    format!("{}#{}", i.category, i.id)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn write_dot(out: &mut String, page: &Page, options: &ExportOptions) {
    let _ = writeln!(out, "digraph page_{} {{", page.id);
    for i in &page.instances {
        let _ = writeln!(out, "  n{} [label=\"{}\"];", i.id, dot_escape(&node_label(i)));
    }
    for e in page.relations.iter().filter(|e| options.filter.accepts(e.rel)) {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.subject, e.object, e.rel);
    }
    out.push_str("}\n");
}

/// Graphviz DOT text: one node per instance labeled `Category#id`, one edge
/// per relation kept by the filter, labeled with its type.
pub fn export_dot(page: &Page, options: &ExportOptions) -> String {
    let mut out = String::new();
    write_dot(&mut out, page, options);
    out
}

/// One `digraph` per page, in dataset order.
pub fn export_dataset_dot(dataset: &Dataset, options: &ExportOptions) -> String {
    let mut out = String::new();
    for page in &dataset.pages {
        write_dot(&mut out, page, options);
    }
    out
}

const GRAPHML_HEAD: &str = concat!(
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
    "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n",
    "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n",
    "  <key id=\"type\" for=\"edge\" attr.name=\"type\" attr.type=\"string\"/>\n",
);

fn write_graphml_graph(out: &mut String, page: &Page, options: &ExportOptions) {
    let _ = writeln!(out, "  <graph id=\"page_{}\" edgedefault=\"directed\">", page.id);
    for i in &page.instances {
        let _ = writeln!(
            out,
            "    <node id=\"n{}\"><data key=\"label\">{}</data></node>",
            i.id,
            xml_escape(&node_label(i))
        );
    }
    for (k, e) in page.relations.iter().filter(|e| options.filter.accepts(e.rel)).enumerate() {
        let _ = writeln!(
            out,
            "    <edge id=\"e{k}\" source=\"n{}\" target=\"n{}\"><data key=\"type\">{}</data></edge>",
            e.subject, e.object, e.rel
        );
    }
    out.push_str("  </graph>\n");
}

/// GraphML document with the same nodes, edges and labels as [`export_dot`].
pub fn export_graphml(page: &Page, options: &ExportOptions) -> String {
    let mut out = String::from(GRAPHML_HEAD);
    write_graphml_graph(&mut out, page, options);
    out.push_str("</graphml>\n");
    out
}

pub fn export_dataset_graphml(dataset: &Dataset, options: &ExportOptions) -> String {
    let mut out = String::from(GRAPHML_HEAD);
    for page in &dataset.pages {
        write_graphml_graph(&mut out, page, options);
    }
    out.push_str("</graphml>\n");
    out
}
