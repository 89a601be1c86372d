use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::census::{h_neighbors, Walker};
use super::circle::Circle;
use super::stabilizer::{classify_orbit, OrbitCase, OrbitReport};
use crate::error::{Error, Result};
use crate::schottky::SchottkyGroup;
use crate::tree::{DotGraph, Vertex};

#[derive(Debug, Clone, Serialize)]
pub struct Projection {
    pub radius: usize,
    /// Distinct projected vertices within radius `0..=radius`.
    pub growth: Vec<usize>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
    /// Core vertices met by the projection.
    pub core_hit: Vec<Vertex>,
    pub core_size: usize,
    /// Largest degree of a projected vertex outside the core.
    pub max_end_degree: usize,
    pub shape: &'static str,
    pub orbit: OrbitReport,
}

impl Projection {
    pub fn to_dot(&self) -> String {
        let mut dot = DotGraph::new("projection", false);
        for v in &self.vertices {
            let attrs = if self.core_hit.contains(v) { "style=filled, fillcolor=gray80" } else { "" };
            dot.node(v, attrs);
        }
        for (a, b) in &self.edges {
            dot.edge(a, b, "");
        }
        dot.render()
    }
}

fn shape(case: OrbitCase) -> &'static str {
    match case {
        OrbitCase::Discrete => "contained in an end",
        OrbitCase::Saturated => "closed in the core",
        OrbitCase::ClosedWithStabilizer => "infinite, closed orbit",
        OrbitCase::DenseConjecture => "space-filling evidence",
        OrbitCase::Inconclusive => "inconclusive",
    }
}

/// Image of the radius-`radius` ball of the hull of `C` in the quotient graph,
/// through reduction to the fundamental domain.
pub fn project_subtree(
    c: &Circle,
    g: &SchottkyGroup,
    radius: usize,
    depth: usize,
    max_len: usize,
    cap: usize,
) -> Result<Projection> {
    let ctx = c.context();
    let p = ctx.p() as u64;
    let ball = 1 + (p + 1) * (p.pow(radius as u32) - 1) / (p - 1);
    if ball > cap as u64 {
        return Err(Error::FrontierBudgetExceeded(format!("radius {radius} ball has {ball} vertices, cap {cap}")));
    }
    let x0 = Vertex::origin(ctx.p());
    let walker = Walker { g, rep: *c.rep().raw() };
    let f0 = walker.anchor(&x0)?;
    let mut seen: BTreeSet<Vertex> = BTreeSet::from([f0.f.clone()]);
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut growth = vec![1];
    let mut layer = vec![(x0, None::<Vertex>, f0)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (x, from, frame) in &layer {
            for (y, s) in h_neighbors(ctx, x) {
                if from.as_ref() == Some(&y) {
                    continue;
                }
                let fy = walker.step(frame, &y, &s)?;
                let e = if frame.f <= fy.f { (frame.f.clone(), fy.f.clone()) } else { (fy.f.clone(), frame.f.clone()) };
                edges.insert(e);
                seen.insert(fy.f.clone());
                next.push((y, Some(x.clone()), fy));
            }
        }
        growth.push(seen.len());
        layer = next;
    }
    let mut degree: BTreeMap<&Vertex, usize> = BTreeMap::new();
    for (a, b) in &edges {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    let core_hit: Vec<Vertex> = seen.iter().filter(|v| g.core_contains(v)).cloned().collect();
    let max_end_degree =
        degree.iter().filter(|(v, _)| !g.core_contains(v)).map(|(_, &d)| d).max().unwrap_or(0);
    let orbit = classify_orbit(c, g, depth, max_len)?;
    Ok(Projection {
        radius,
        growth,
        vertices: seen.into_iter().collect(),
        edges: edges.into_iter().collect(),
        core_hit,
        core_size: g.core_vertices().len(),
        max_end_degree,
        shape: shape(orbit.case),
        orbit,
    })
}
