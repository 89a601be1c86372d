use serde::Serialize;

use super::circle::Circle;
use crate::error::{Error, Result};
use crate::padic::{ExtContext, ExtScalar, Residue};
use crate::pgl2::{BoundaryPoint, Mat2, ProjMatrix};
use crate::schottky::SchottkyGroup;
use crate::tree::Vertex;

/// Largest number of frontier leaves a census may enumerate.
pub const CENSUS_LEAF_CAP: u64 = 1_000_000;
/// Rays are listed individually up to this count.
pub const RAY_RECORD_CAP: usize = 4096;
const EXIT_RECORD_CAP: usize = 8;

/// Change of lattice basis from a vertex of `T_H` to a neighbor.
pub(crate) fn child_step(ctx: &'static ExtContext, t: u32) -> Mat2 {
    Mat2::new(ExtScalar::from_i64(ctx, ctx.p() as i64), ExtScalar::from_i64(ctx, t as i64), ExtScalar::zero(ctx), ExtScalar::one(ctx))
}

pub(crate) fn parent_step(ctx: &'static ExtContext, d: u32) -> Mat2 {
    Mat2::new(ExtScalar::one(ctx), ExtScalar::from_i64(ctx, -(d as i64)), ExtScalar::zero(ctx), ExtScalar::from_i64(ctx, ctx.p() as i64))
}

/// Neighbors of a rational vertex inside `T_H`, with the step matrices.
pub(crate) fn h_neighbors(ctx: &'static ExtContext, x: &Vertex) -> Vec<(Vertex, Mat2)> {
    let p = ctx.p();
    let mut out = vec![(x.parent(), parent_step(ctx, x.top_digit().x))];
    for t in 0..p {
        out.push((x.child(Residue { x: t, y: 0 }), child_step(ctx, t)));
    }
    out
}

/// Below this many known digits in the frame basis, it is recomputed from scratch.
const REANCHOR_DIGITS: i32 = 12;

/// The lattice basis `w^-1 g lift(x)` written as `lift(f) k` with `f` in the
/// fundamental domain and `k` in `GL2(O_K)`. Keeping `f` exact and only `k`
/// approximate loses one digit of `k` per step instead of compounding the loss
/// of every reduction.
#[derive(Clone)]
pub(crate) struct Frame {
    pub f: Vertex,
    k: Mat2,
}

impl Frame {
    pub fn in_limit_tree(&self, g: &SchottkyGroup) -> bool {
        g.core_contains(&self.f)
    }

    fn digits(&self) -> i32 {
        let known = self.k.entries().iter().filter_map(|e| e.abs_precision()).min().unwrap_or(i32::MAX);
        if self.k.det().valuation() == Some(0) {
            known
        } else {
            i32::MIN
        }
    }

    /// `a . (lift(f) k) = lift(a.f) (j k)`.
    fn apply(&self, a: &Mat2) -> Result<Frame> {
        let ctx = a.context();
        let f = self.f.act(a)?;
        let j = f.lift(ctx).adj().mul(a).mul(&self.f.lift(ctx));
        Ok(Frame { f, k: j.mul(&self.k).normalized() })
    }

    fn reduce(mut self, g: &SchottkyGroup) -> Result<Frame> {
        let cap = 4 * g.context().precision() as usize + 16;
        for _ in 0..cap {
            match g.containing(&self.f) {
                None => return Ok(self),
                Some(l) => self = self.apply(g.letter_matrix(l.inv()))?,
            }
        }
        Err(Error::NonTermination(cap))
    }
}

/// Frames along `rep . T_H`.
pub(crate) struct Walker<'a> {
    pub g: &'a SchottkyGroup,
    pub rep: Mat2,
}

impl Walker<'_> {
    /// Frame of the `T_H` vertex `x`, computed from scratch.
    pub fn anchor(&self, x: &Vertex) -> Result<Frame> {
        let ctx = self.rep.context();
        let v = x.act(&self.rep)?;
        let k = v.lift(ctx).adj().mul(&self.rep).mul(&x.lift(ctx)).normalized();
        Frame { f: v, k }.reduce(self.g)
    }

    /// Frame of the neighbor `y` reached from `fr` by the step matrix `s`.
    pub fn step(&self, fr: &Frame, y: &Vertex, s: &Mat2) -> Result<Frame> {
        if fr.digits() < REANCHOR_DIGITS {
            return self.anchor(y);
        }
        let ctx = self.rep.context();
        let ks = fr.k.mul(s);
        let e = Vertex::from_matrix(&ks)?;
        let base = fr.f.lift(ctx);
        let f = e.act(&base)?;
        let k = f.lift(ctx).adj().mul(&base).mul(&ks).normalized();
        let next = Frame { f, k }.reduce(self.g)?;
        if next.digits() < REANCHOR_DIGITS {
            return self.anchor(y);
        }
        Ok(next)
    }
}

/// An edge leaving the limit tree: `inside` is in it, `outside` is not. For an
/// empty census it is the end of the bridge from the hull, which lies entirely
/// on the `outside` side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExitEdge {
    pub inside: Vertex,
    pub outside: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count")]
pub enum Verdict {
    Empty,
    ProperNonempty(u64),
    /// Every frontier ray persists; provisional at finite depth.
    SaturatedFull,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ray {
    /// Endpoint of the ray in `T_H` coordinates.
    pub h_leaf: Vertex,
    /// Its image in the hull.
    pub leaf: Vertex,
    /// A boundary point in the direction of the ray.
    pub point: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub circle: Circle,
    pub depth: usize,
    /// Vertex of the hull where the rays start, in `T_H` coordinates.
    pub h_root: Vertex,
    pub root: Vertex,
    /// Steps walked from the base vertex to reach the limit tree.
    pub walked: usize,
    /// Persistent paths of each length `0..=depth`.
    pub counts: Vec<u64>,
    pub ray_count: u64,
    pub frontier_size: u64,
    pub verdict: Verdict,
    /// Empty when more than [`RAY_RECORD_CAP`] rays persist.
    pub rays: Vec<Ray>,
    pub certificates: Vec<ExitEdge>,
}

pub fn frontier_size(p: u32, depth: usize) -> u64 {
    if depth == 0 {
        1
    } else {
        (p as u64 + 1) * (p as u64).pow(depth as u32 - 1)
    }
}

/// Largest depth whose frontier fits in [`CENSUS_LEAF_CAP`].
pub fn max_census_depth(p: u32) -> usize {
    let mut d = 1;
    while frontier_size(p, d + 1) <= CENSUS_LEAF_CAP {
        d += 1;
    }
    d
}

struct Dfs<'a> {
    g: &'a SchottkyGroup,
    walker: Walker<'a>,
    circle: &'a Circle,
    ctx: &'static ExtContext,
    depth: usize,
    counts: Vec<u64>,
    leaves: Vec<Vertex>,
    exits: Vec<(Vertex, Vertex)>,
}

impl Dfs<'_> {
    fn go(&mut self, x: &Vertex, frame: &Frame, from: Option<&Vertex>, d: usize) -> Result<()> {
        self.counts[d] += 1;
        if d == self.depth {
            if self.leaves.len() <= RAY_RECORD_CAP {
                self.leaves.push(x.clone());
            }
            return Ok(());
        }
        for (y, s) in h_neighbors(self.ctx, x) {
            if Some(&y) == from {
                continue;
            }
            let next = self.walker.step(frame, &y, &s)?;
            if next.in_limit_tree(self.g) {
                self.go(&y, &next, Some(x), d + 1)?;
            } else if self.exits.len() < EXIT_RECORD_CAP {
                self.exits.push((x.clone(), y));
            }
        }
        Ok(())
    }
}

/// Boundary point of `T_H` in the direction of `leaf` seen from `root`.
pub(crate) fn h_direction(ctx: &'static ExtContext, root: &Vertex, leaf: &Vertex) -> BoundaryPoint {
    if leaf.is_ancestor_of(root) && leaf != root {
        BoundaryPoint::Infinity
    } else {
        BoundaryPoint::Finite(leaf.center(ctx))
    }
}

/// Walk inside the hull from its base vertex toward the limit tree.
/// Returns the `T_H` vertex reached with its frame, or the exit edge.
fn find_root(g: &SchottkyGroup, c: &Circle) -> Result<std::result::Result<(Vertex, Frame, usize), ExitEdge>> {
    let ctx = c.context();
    let p = ctx.p();
    let walker = Walker { g, rep: *c.rep().raw() };
    let mut x = Vertex::origin(p);
    let mut cap = 64 + 4 * ctx.precision() as usize;
    let mut walked = 0;
    loop {
        let image = x.act(c.rep().raw())?;
        match g.toward_limit_tree(&image)? {
            None => {
                let frame = walker.anchor(&x)?;
                return Ok(Ok((x, frame, walked)));
            }
            Some(y) => {
                let z = y.act(c.rep_inv().raw())?;
                if !z.is_rational() {
                    // `image` is the point of the hull nearest to S; the bridge
                    // from there ends on the edge recorded
                    let (mut prev, mut cur) = (image, y);
                    while let Some(n) = g.toward_limit_tree(&cur)? {
                        prev = std::mem::replace(&mut cur, n);
                    }
                    return Ok(Err(ExitEdge { inside: cur, outside: prev }));
                }
                x = z;
                walked += 1;
            }
        }
        cap -= 1;
        if cap == 0 {
            return Err(Error::NonTermination(walked));
        }
    }
}

/// Rays of the hull of `c` that stay in the limit tree for `depth` steps.
pub fn circle_limit_census(c: &Circle, g: &SchottkyGroup, depth: usize) -> Result<Census> {
    let ctx = c.context();
    let p = ctx.p();
    let full = frontier_size(p, depth);
    if full > CENSUS_LEAF_CAP {
        return Err(Error::FrontierBudgetExceeded(format!(
            "depth {depth} has {full} frontier leaves, cap {CENSUS_LEAF_CAP} (max depth {})",
            max_census_depth(p)
        )));
    }
    let (h_root, frame, walked) = match find_root(g, c)? {
        Ok(r) => r,
        Err(edge) => {
            let base = Vertex::origin(p);
            return Ok(Census {
                circle: *c,
                depth,
                root: base.act(c.rep().raw())?,
                h_root: base,
                walked: 0,
                counts: vec![0; depth + 1],
                ray_count: 0,
                frontier_size: full,
                verdict: Verdict::Empty,
                rays: Vec::new(),
                certificates: vec![edge],
            });
        }
    };
    run_census(c, g, depth, h_root, frame, walked)
}

/// Census with the rays started at `root`, a vertex of the hull of `c` in the
/// limit tree. Counts depend on the root; translating both the circle and the
/// root by a group element leaves them unchanged.
pub fn circle_limit_census_at(c: &Circle, g: &SchottkyGroup, depth: usize, root: &Vertex) -> Result<Census> {
    let full = frontier_size(c.context().p(), depth);
    if full > CENSUS_LEAF_CAP {
        return Err(Error::FrontierBudgetExceeded(format!("depth {depth} has {full} frontier leaves, cap {CENSUS_LEAF_CAP}")));
    }
    let h_root = root.act(c.rep_inv().raw())?;
    if !h_root.is_rational() || !g.in_limit_tree(root)? {
        return Err(Error::Precondition(format!("{root} is not in both the hull and the limit tree")));
    }
    let frame = Walker { g, rep: *c.rep().raw() }.anchor(&h_root)?;
    run_census(c, g, depth, h_root, frame, 0)
}

fn run_census(c: &Circle, g: &SchottkyGroup, depth: usize, h_root: Vertex, frame: Frame, walked: usize) -> Result<Census> {
    let ctx = c.context();
    let full = frontier_size(ctx.p(), depth);
    let walker = Walker { g, rep: *c.rep().raw() };
    let mut dfs = Dfs { g, walker, circle: c, ctx, depth, counts: vec![0; depth + 1], leaves: Vec::new(), exits: Vec::new() };
    dfs.go(&h_root, &frame, None, 0)?;
    let ray_count = dfs.counts[depth];
    let verdict = if ray_count == 0 {
        Verdict::Empty
    } else if ray_count == full {
        Verdict::SaturatedFull
    } else {
        Verdict::ProperNonempty(ray_count)
    };
    let rays = if dfs.leaves.len() <= RAY_RECORD_CAP {
        dfs.leaves
            .iter()
            .map(|leaf| {
                let point = c.rep().mobius(&h_direction(ctx, &h_root, leaf))?;
                Ok(Ray { h_leaf: leaf.clone(), leaf: leaf.act(c.rep().raw())?, point: format!("{point:.6}") })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let certificates = dfs
        .exits
        .iter()
        .map(|(a, b)| Ok(ExitEdge { inside: a.act(dfs.circle.rep().raw())?, outside: b.act(dfs.circle.rep().raw())? }))
        .collect::<Result<Vec<_>>>()?;
    let root = h_root.act(c.rep().raw())?;
    Ok(Census { circle: *c, depth, h_root, root, walked, counts: dfs.counts, ray_count, frontier_size: full, verdict, rays, certificates })
}

#[derive(Debug, Clone, Serialize)]
pub struct RfMembership {
    pub member: bool,
    pub depth: usize,
    /// First vertex `g . v_j` found outside the limit tree.
    pub exit: Option<(i32, Vertex)>,
}

/// Whether `g . v_j` lies in the limit tree for `|j| <= depth`, i.e. both
/// `g.0` and `g.inf` are limit points to that depth.
pub fn rf_membership(frame: &ProjMatrix, g: &SchottkyGroup, depth: usize) -> Result<RfMembership> {
    let p = g.p();
    let mut order = vec![0i32];
    for j in 1..=depth as i32 {
        order.push(-j);
        order.push(j);
    }
    for j in order {
        let v = Vertex::standard(p, j).act(frame.raw())?;
        if !g.in_limit_tree(&v)? {
            return Ok(RfMembership { member: false, depth, exit: Some((j, v)) });
        }
    }
    Ok(RfMembership { member: true, depth, exit: None })
}
