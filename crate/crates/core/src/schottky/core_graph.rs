use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::group::SchottkyGroup;
use super::word::{reduced_words, Letter, Word};
use crate::error::{Error, Result};
use crate::pgl2::classify_raw;
use crate::tree::{median, DotGraph, End, Vertex};

/// Default word length for the axis enumeration; stabilization is checked at `L + 1`.
pub const DEFAULT_WORD_LENGTH: usize = 2;

const AXIS_WALK_CAP: usize = 256;

/// One edge of the quotient graph seen from `from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dart {
    pub from: usize,
    pub to: usize,
    /// Neighbor of `from` in the tree.
    pub via: Vertex,
    /// `None` for an edge inside F, otherwise the letter `g` with `via = g . to`.
    pub glue: Option<Letter>,
}

/// The quotient of the limit tree by the group, on F-representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreGraph {
    pub word_length: usize,
    pub vertices: Vec<Vertex>,
    pub darts: Vec<Dart>,
    pub degrees: Vec<usize>,
    /// Membership in F', the core vertices with a neighbor outside F.
    pub boundary: Vec<bool>,
}

/// F-vertices on the axis of `w`, in order along the axis.
pub fn axis_in_domain(g: &SchottkyGroup, w: &Word) -> Result<Vec<Vertex>> {
    let m = g.word_matrix(w);
    let h = match classify_raw(&m)?.hyperbolic() {
        Some(h) => h,
        None => return Err(Error::PrecisionExhausted(format!("word {w} did not classify as hyperbolic"))),
    };
    let plus = End::from_point(&h.fixed_plus)?;
    let minus = End::from_point(&h.fixed_minus)?;
    let base = g.roots()[0].clone();
    let proj = median(&base, &minus, &plus)?;
    if !g.in_fundamental_domain(&proj) {
        return Ok(Vec::new());
    }
    let walk = |end: &End| -> Result<Vec<Vertex>> {
        let mut out = Vec::new();
        let mut cur = proj.clone();
        for _ in 0..AXIS_WALK_CAP {
            cur = end.step_from(&cur)?;
            if !g.in_fundamental_domain(&cur) {
                return Ok(out);
            }
            out.push(cur.clone());
        }
        Err(Error::NonTermination(AXIS_WALK_CAP))
    };
    let mut back = walk(&minus)?;
    back.reverse();
    back.push(proj.clone());
    back.extend(walk(&plus)?);
    Ok(back)
}

/// Union of `Axis(w) ∩ F` over reduced words of length `1..=max_len`.
pub fn core_vertices_from_words(g: &SchottkyGroup, max_len: usize) -> Result<BTreeSet<Vertex>> {
    let mut set = BTreeSet::new();
    for w in reduced_words(g.rank(), max_len) {
        set.extend(axis_in_domain(g, &w)?);
    }
    Ok(set)
}

fn build(g: &SchottkyGroup, vertices: BTreeSet<Vertex>, word_length: usize) -> Result<CoreGraph> {
    let vertices: Vec<Vertex> = vertices.into_iter().collect();
    let index: BTreeMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut darts = Vec::new();
    let mut degrees = vec![0; vertices.len()];
    let mut boundary = vec![false; vertices.len()];
    for (i, v) in vertices.iter().enumerate() {
        for w in v.neighbors() {
            let glue = g.containing(&w);
            if glue.is_some() {
                boundary[i] = true;
            }
            let r = g.reduce(&w)?;
            if let Some(&j) = index.get(&r.f) {
                darts.push(Dart { from: i, to: j, via: w, glue });
                degrees[i] += 1;
            }
        }
    }
    Ok(CoreGraph { word_length, vertices, darts, degrees, boundary })
}

impl CoreGraph {
    /// Word-based core at length `L`, required to agree with length `L + 1`.
    pub fn compute(g: &SchottkyGroup, word_length: usize) -> Result<CoreGraph> {
        let a = core_vertices_from_words(g, word_length)?;
        let b = core_vertices_from_words(g, word_length + 1)?;
        if a != b {
            return Err(Error::NotStabilized(word_length, word_length + 1));
        }
        build(g, a, word_length)
    }

    /// Core from the hull of the half-tree roots, without word enumeration.
    pub fn from_root_hull(g: &SchottkyGroup) -> Result<CoreGraph> {
        build(g, g.core_vertices().iter().cloned().collect(), 0)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    pub fn degree_of(&self, v: &Vertex) -> Option<usize> {
        self.index_of(v).map(|i| self.degrees[i])
    }

    /// Largest tree distance between two core vertices.
    pub fn diameter(&self) -> u32 {
        let mut d = 0;
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for d in self.darts.iter().filter(|d| d.from == i) {
                if !seen[d.to] {
                    seen[d.to] = true;
                    stack.push(d.to);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graphviz rendering; gluing edges are drawn once, from the `O+` side.
    pub fn to_dot(&self) -> String {
        let mut dot = DotGraph::new("core", false);
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if self.boundary[i] { "doublecircle" } else { "circle" };
            dot.node(v, &format!("shape={shape}, xlabel=\"deg {}\"", self.degrees[i]));
        }
        for d in &self.darts {
            match d.glue {
                None if d.from < d.to => dot.edge(&self.vertices[d.from], &self.vertices[d.to], ""),
                Some(l) if !l.inverse => dot.edge(&self.vertices[d.from], &self.vertices[d.to], &l.to_string()),
                _ => {}
            }
        }
        dot.render()
    }
}
