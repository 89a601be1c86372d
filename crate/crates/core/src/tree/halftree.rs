use serde::Serialize;

use super::vertex::{End, Vertex};
use crate::error::Result;

/// The component containing `toward` after removing the open edge `(root, toward)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HalfTree {
    pub root: Vertex,
    pub toward: Vertex,
}

impl HalfTree {
    pub fn new(root: Vertex, toward: Vertex) -> Self {
        debug_assert_eq!(root.distance(&toward), 1);
        HalfTree { root, toward }
    }

    fn points_down(&self) -> bool {
        self.toward.level() > self.root.level()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        if self.points_down() {
            self.toward.is_ancestor_of(v)
        } else {
            !self.root.is_ancestor_of(v)
        }
    }

    /// Whether the end lies in the boundary of this half-tree.
    pub fn contains_end(&self, e: &End) -> Result<bool> {
        match e {
            End::Infinity => Ok(!self.points_down()),
            _ => {
                let c = e.meet_level(&self.root)?.unwrap();
                let below_root = c == self.root.level();
                if self.points_down() {
                    Ok(below_root && e.step_from(&self.root)? == self.toward)
                } else {
                    Ok(!below_root)
                }
            }
        }
    }

    pub fn disjoint(&self, o: &HalfTree) -> bool {
        !o.contains(&self.toward) && !self.contains(&o.toward)
    }

    pub fn complement(&self) -> HalfTree {
        HalfTree { root: self.toward.clone(), toward: self.root.clone() }
    }
}
