//! Graphviz output for vertex sets.

use std::fmt::Write;

use super::vertex::Vertex;

pub struct DotGraph {
    name: String,
    directed: bool,
    nodes: Vec<(String, String)>,
    edges: Vec<(String, String, String)>,
}

impl DotGraph {
    pub fn new(name: &str, directed: bool) -> Self {
        DotGraph { name: name.to_string(), directed, nodes: Vec::new(), edges: Vec::new() }
    }

    pub fn node(&mut self, v: &Vertex, attrs: &str) {
        self.nodes.push((v.label(), attrs.to_string()));
    }

    pub fn edge(&mut self, a: &Vertex, b: &Vertex, label: &str) {
        self.edges.push((a.label(), b.label(), label.to_string()));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let (kw, arrow) = if self.directed { ("digraph", "->") } else { ("graph", "--") };
        let _ = writeln!(s, "{kw} \"{}\" {{", self.name);
        for (n, attrs) in &self.nodes {
            if attrs.is_empty() {
                let _ = writeln!(s, "  \"{n}\";");
            } else {
                let _ = writeln!(s, "  \"{n}\" [{attrs}];");
            }
        }
        for (a, b, l) in &self.edges {
            if l.is_empty() {
                let _ = writeln!(s, "  \"{a}\" {arrow} \"{b}\";");
            } else {
                let _ = writeln!(s, "  \"{a}\" {arrow} \"{b}\" [label=\"{l}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}
