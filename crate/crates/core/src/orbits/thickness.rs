use serde::Serialize;

use super::census::{child_step, rf_membership, Frame, Walker};
use crate::error::{Error, Result};
use crate::padic::{ExtScalar, PadicScalar, Residue};
use crate::pgl2::{Mat2, PNorm, ProjMatrix};
use crate::schottky::SchottkyGroup;
use crate::tree::Vertex;

/// Search nodes allowed per shell.
pub const SHELL_NODE_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct ShellWitness {
    pub shell: i32,
    /// `t` with `v(t)` in `[-(K + l), -l)`, or `None` on a miss.
    pub t: Option<String>,
    pub valuation: Option<i32>,
    /// `g u_t` passed the membership test independently.
    pub verified: bool,
    pub nodes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessWitness {
    pub k: u32,
    pub depth: usize,
    pub frame: String,
    pub shells: Vec<ShellWitness>,
    pub misses: Vec<i32>,
}

/// `u_t = [[1, t], [0, 1]]`.
pub fn unipotent(t: &PadicScalar) -> Mat2 {
    let ctx = t.context();
    Mat2::new(ExtScalar::one(ctx), t.to_ext(), ExtScalar::zero(ctx), ExtScalar::one(ctx))
}

struct ShellSearch<'a> {
    g: &'a SchottkyGroup,
    walker: &'a Walker<'a>,
    x: Vertex,
    depth: i32,
    digits: Vec<u32>,
    nodes: usize,
}

impl ShellSearch<'_> {
    /// Extend the digits of `t` from position `pos`, the frame being that of
    /// `g (pos; t mod p^pos)`.
    fn extend(&mut self, frame: &Frame, pos: i32) -> Result<bool> {
        let first = self.digits.is_empty();
        if pos >= self.depth && !first {
            return Ok(true);
        }
        let ctx = self.g.context();
        for d in (if first { 1 } else { 0 })..ctx.p() {
            self.nodes += 1;
            if self.nodes > SHELL_NODE_BUDGET {
                return Ok(false);
            }
            let y = self.x.child(Residue { x: d, y: 0 });
            let next = self.walker.step(frame, &y, &child_step(ctx, d))?;
            if (-self.depth..=self.depth).contains(&(pos + 1)) && !next.in_limit_tree(self.g) {
                continue;
            }
            self.digits.push(d);
            let x = std::mem::replace(&mut self.x, y);
            if self.extend(&next, pos + 1)? {
                return Ok(true);
            }
            self.x = x;
            self.digits.pop();
        }
        Ok(false)
    }
}

/// For each shell `l`, look for `t` with `v(t)` in `[-(K + l), -l)` such that
/// `g u_t` keeps both endpoints in the limit set to depth `depth`. Digits of `t`
/// are chosen along the limit tree in `Q_p`-directions, smallest first.
pub fn thickness_sample(
    frame: &ProjMatrix,
    g: &SchottkyGroup,
    k: u32,
    shells: std::ops::RangeInclusive<i32>,
    depth: usize,
    core_diameter: u32,
) -> Result<ThicknessWitness> {
    if k < core_diameter + 1 {
        return Err(Error::Precondition(format!("K = {k} is below diam(core) + 1 = {}", core_diameter + 1)));
    }
    let base = rf_membership(frame, g, depth)?;
    if !base.member {
        return Err(Error::Precondition(format!("frame leaves the limit tree at {:?}", base.exit)));
    }
    let ctx = g.context();
    let p = ctx.p();
    let walker = Walker { g, rep: *frame.raw() };
    let mut out = Vec::new();
    let mut misses = Vec::new();
    for l in shells {
        let mut found = None;
        let mut nodes = 0;
        for s in -(k as i32) - l..-l {
            let x = Vertex::standard(p, s);
            let start = walker.anchor(&x)?;
            let mut search = ShellSearch { g, walker: &walker, x, depth: depth as i32, digits: Vec::new(), nodes: 0 };
            let ok = search.extend(&start, s)?;
            nodes += search.nodes;
            if ok {
                let t = PadicScalar::from_digits(ctx, s, &search.digits);
                found = Some(t);
                break;
            }
        }
        match found {
            Some(t) => {
                let shifted = ProjMatrix::canonicalize(frame.raw().mul(&unipotent(&t)))?;
                let verified = rf_membership(&shifted, g, depth)?.member;
                out.push(ShellWitness { shell: l, t: Some(format!("{t:.12}")), valuation: t.valuation(), verified, nodes });
            }
            None => {
                misses.push(l);
                out.push(ShellWitness { shell: l, t: None, valuation: None, verified: false, nodes });
            }
        }
    }
    Ok(ThicknessWitness { k, depth, frame: frame.to_string(), shells: out, misses })
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyBound {
    pub holds: bool,
    /// `p^{-Kd} max_{B_m} |f|`.
    pub lhs: PNorm,
    /// `max_{T ∩ B_m} |f|`.
    pub rhs: PNorm,
    pub degree: usize,
}

fn horner(coeffs: &[ExtScalar], t: &ExtScalar) -> ExtScalar {
    let mut acc = ExtScalar::zero(t.context());
    for c in coeffs.iter().rev() {
        acc = acc * *t + *c;
    }
    acc
}

/// Compare `p^{-Kd} max_{|t| <= p^m} |f(t)|` with `max_{t in T, |t| <= p^m} |f(t)|`
/// for `f = sum coeffs[i] t^i` over `O_K`. The left side is exact once the
/// leading term dominates on the sphere `|t| = p^m`.
pub fn polybound_property(coeffs: &[ExtScalar], sample: &[PadicScalar], k: u32, m: i32) -> Result<PolyBound> {
    let d = coeffs.iter().rposition(|c| !c.is_zero()).ok_or(Error::DegenerateBall(m as i64))?;
    if coeffs.iter().any(|c| c.val_or(0) < 0) {
        return Err(Error::Precondition("coefficients must be integral".into()));
    }
    // |a_i| p^{im} as the exponent of p^{-e}: e = v(a_i) - i m
    let size = |i: usize| coeffs[i].valuation().map(|v| v as i64 - i as i64 * m as i64);
    let lead = size(d).unwrap();
    if (0..d).any(|i| size(i).is_some_and(|e| e <= lead)) {
        return Err(Error::DegenerateBall(m as i64));
    }
    let lhs = PNorm::pow(lead + k as i64 * d as i64);
    let rhs = sample
        .iter()
        .filter(|t| t.valuation().is_none_or(|v| v >= -m))
        .map(|t| PNorm::of(&horner(coeffs, &t.to_ext())))
        .max()
        .unwrap_or(PNorm::ZERO);
    Ok(PolyBound { holds: lhs <= rhs, lhs, rhs, degree: d })
}
