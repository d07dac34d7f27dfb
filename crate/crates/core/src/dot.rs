//! Graphviz export of Hasse diagrams.

use std::fmt::Write;

use crate::order::FinitePoset;

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A `digraph` with one node per element in id order and one edge per
/// covering pair, drawn from the smaller element to the larger.
pub fn to_dot(p: &FinitePoset, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(name)).unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    for x in 0..p.len() {
        writeln!(s, "  {};", quote(p.id(x))).unwrap();
    }
    for (a, b) in p.hasse_edges() {
        writeln!(s, "  {} -> {};", quote(p.id(a)), quote(p.id(b))).unwrap();
    }
    s.push_str("}\n");
    s
}
