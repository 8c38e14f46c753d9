//! Graphviz DOT export for graphs, modifications and target trees.

use std::sync::Arc;
use tropls_core::graph::MetricGraph;
use tropls_core::morphism::{ModifiedGraph, TargetTree};
use tropls_core::rational::format_rational;

pub fn metric_graph(g: &Arc<MetricGraph>) -> String {
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{}\";\n", v.name));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [label=\"{} ({})\"];\n",
            g.vertices()[e.tail].name,
            g.vertices()[e.head].name,
            e.id,
            format_rational(&e.length)
        ));
    }
    out.push('}');
    out
}

pub fn modified_graph(m: &ModifiedGraph) -> String {
    let g = m.module.graph();
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{}\";\n", v.name));
    }
    for e in g.edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [label=\"{} ({})\"];\n",
            g.vertices()[e.tail].name,
            g.vertices()[e.head].name,
            e.id,
            format_rational(&e.length)
        ));
    }
    for r in &m.rays {
        // rays drawn truncated at unit length, slopes recorded on the label
        out.push_str(&format!(
            "  \"{}\" [shape=none, label=\"inf\"];\n",
            r.id
        ));
        out.push_str(&format!(
            "  \"{}\" -- \"{}\" [style=dashed, label=\"slopes {:?}\"];\n",
            g.describe_point(&r.base),
            r.id,
            r.slopes
        ));
    }
    out.push('}');
    out
}

pub fn target_tree(t: &TargetTree) -> String {
    let mut out = String::from("graph {\n");
    let coords = |i: usize| -> String {
        let cs: Vec<String> = t.vertices[i]
            .coords
            .iter()
            .map(|c| match c {
                Some(c) => format_rational(c),
                None => "inf".to_string(),
            })
            .collect();
        format!("[{}]", cs.join(":"))
    };
    for i in 0..t.vertices.len() {
        out.push_str(&format!("  \"v{i}\" [label=\"{}\"];\n", coords(i)));
    }
    for (a, b, len, dir) in &t.segments {
        out.push_str(&format!(
            "  \"v{a}\" -- \"v{b}\" [label=\"len {} dir {:?}\"];\n",
            format_rational(len),
            dir
        ));
    }
    for (k, (base, dir)) in t.rays.iter().enumerate() {
        out.push_str(&format!("  \"r{k}\" [shape=none, label=\"inf\"];\n"));
        out.push_str(&format!(
            "  \"v{base}\" -- \"r{k}\" [style=dashed, label=\"dir {dir:?}\"];\n"
        ));
    }
    out.push('}');
    out
}
