use std::collections::HashSet;

use serde::Serialize;

use super::circle::Circle;
use crate::error::{Error, Result};
use crate::pgl2::PNorm;
use crate::tree::{project_to_h, Vertex};

pub const DEFAULT_FRONTIER_CAP: usize = 20_000;

#[derive(Debug, Clone, Serialize)]
pub struct HausdorffDistance {
    /// Exact when `resolved`, otherwise an upper bound `p^-depth`.
    pub value: PNorm,
    pub depth: usize,
    pub resolved: bool,
}

/// Rays from the origin toward points of `C`: the hull of `C` together with
/// the path from the origin to it.
struct Shadow {
    circle: Circle,
    approach: HashSet<Vertex>,
}

impl Shadow {
    fn new(c: &Circle) -> Result<Shadow> {
        let o = Vertex::origin(c.context().p());
        let foot = project_to_h(&o.act(c.rep_inv().raw())?).act(c.rep().raw())?;
        Ok(Shadow { circle: *c, approach: o.path_to(&foot).into_iter().collect() })
    }

    fn contains(&self, v: &Vertex) -> Result<bool> {
        Ok(self.approach.contains(v) || self.circle.hull_contains(v)?)
    }
}

/// `sup_{x in B} d(A, x)` as `Some(k)` meaning `p^-k`, or `None` when the two
/// shadows agree to `depth`.
fn one_sided(a: &Shadow, b: &Shadow, depth: usize, cap: usize) -> Result<Option<usize>> {
    let o = Vertex::origin(a.circle.context().p());
    let mut layer = vec![o.clone()];
    for k in 1..=depth + 1 {
        let mut next = Vec::new();
        for u in &layer {
            for w in u.neighbors() {
                if o.distance(&w) as usize != k || !b.contains(&w)? {
                    continue;
                }
                if !a.contains(&w)? {
                    return Ok(Some(k - 1));
                }
                next.push(w);
            }
        }
        if next.len() > cap {
            return Err(Error::FrontierBudgetExceeded(format!("{} vertices at depth {k}", next.len())));
        }
        layer = next;
    }
    Ok(None)
}

/// Hausdorff distance between two circles in the chordal metric. The chordal
/// distance of two boundary points is `p^-(x|y)`, the Gromov product at the
/// origin, so each one-sided supremum is read off the first vertex where the
/// rays toward one circle leave the rays toward the other.
pub fn hausdorff_circle_distance(c1: &Circle, c2: &Circle, depth: usize, cap: usize) -> Result<HausdorffDistance> {
    if c1 == c2 {
        return Ok(HausdorffDistance { value: PNorm::ZERO, depth, resolved: true });
    }
    let (s1, s2) = (Shadow::new(c1)?, Shadow::new(c2)?);
    let a = one_sided(&s1, &s2, depth, cap)?;
    let b = one_sided(&s2, &s1, depth, cap)?;
    let k = match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    };
    Ok(match k {
        Some(k) if k <= depth => HausdorffDistance { value: PNorm::pow(k as i64), depth, resolved: true },
        _ => HausdorffDistance { value: PNorm::pow(depth as i64), depth, resolved: false },
    })
}
