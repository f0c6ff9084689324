//! Graphviz export: vertices on one line in index order, edges as arcs.

use std::fmt::Write as _;

use crate::format::{EdgeClass, EdgeClasses};
use crate::graph::OrderedGraph;

const PALETTE: [&str; 8] = [
    "black", "red3", "blue3", "green4", "darkorange2", "purple3", "cyan4", "goldenrod3",
];

/// Pen color for a color id; ids beyond the palette cycle.
pub fn pen_color(id: u16) -> &'static str {
    PALETTE[id as usize % PALETTE.len()]
}

pub fn to_dot(g: &OrderedGraph, classes: Option<&EdgeClasses>) -> String {
    let mut out = String::new();
    out.push_str("graph ordered {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, width=0.3, fixedsize=true];\n");
    out.push_str("  { rank=same;");
    for v in 0..g.n() {
        write!(out, " {v};").unwrap();
    }
    out.push_str(" }\n");
    if g.n() > 1 {
        out.push_str("  ");
        let chain: Vec<String> = (0..g.n()).map(|v| v.to_string()).collect();
        out.push_str(&chain.join(" -- "));
        out.push_str(" [style=invis];\n");
    }
    for (u, v, color) in g.edges_with_colors() {
        let mut attrs = vec!["constraint=false".to_owned()];
        if let Some(c) = color {
            attrs.push(format!("color={}", pen_color(c.0)));
        }
        match classes.and_then(|m| m.get(&(u, v))) {
            Some(EdgeClass::Permutation) => attrs.push("style=bold".into()),
            Some(EdgeClass::Auxiliary) => attrs.push("style=dashed".into()),
            None => {}
        }
        writeln!(out, "  {u} -- {v} [{}];", attrs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}
