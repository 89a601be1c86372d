//! The Bruhat-Tits tree of PGL2(K).

mod dot;
mod halftree;
mod vertex;

pub use dot::DotGraph;
pub use halftree::HalfTree;
pub use vertex::{median, End, Vertex};

use crate::error::Result;
use crate::pgl2::Mat2;

/// Whether `v` lies in `g T_H`, the image of the standard `Q_p`-subtree.
pub fn in_h_subtree(g_inv: &Mat2, v: &Vertex) -> Result<bool> {
    Ok(v.act(g_inv)?.is_rational())
}

/// Projection of `v` onto the standard `Q_p`-subtree.
pub fn project_to_h(v: &Vertex) -> Vertex {
    let (low, rs) = v.center_residues();
    let first_w = rs.iter().position(|r| r.y != 0).map(|j| low + j as i32);
    match first_w {
        Some(pos) if pos < v.level() => v.ancestor(pos),
        _ => v.clone(),
    }
}
