//! Vertices `(m; a)` of the Bruhat-Tits tree: the class of the ball `a + p^m O_K`.

use std::cmp::{max, min};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::padic::{format_expansion, ExtContext, ExtScalar, Residue};
use crate::pgl2::{BoundaryPoint, Mat2};

pub(crate) type Digits = SmallVec<[u16; 16]>;

/// A finite digit string `sum d_j p^(low + j)`, digits coded as `x*p + y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DigitString {
    pub(crate) low: i32,
    pub(crate) digits: Digits,
}

impl DigitString {
    pub(crate) fn new(low: i32, mut digits: Digits) -> Self {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        if lead == digits.len() {
            return DigitString::default();
        }
        if lead > 0 {
            digits.drain(..lead);
        }
        DigitString { low: low + lead as i32, digits }
    }

    #[inline]
    pub(crate) fn high(&self) -> i32 {
        self.low + self.digits.len() as i32
    }

    #[inline]
    pub(crate) fn get(&self, pos: i32) -> u16 {
        if pos < self.low || pos >= self.high() {
            0
        } else {
            self.digits[(pos - self.low) as usize]
        }
    }

    pub(crate) fn truncate(&self, level: i32) -> Self {
        if self.high() <= level {
            return self.clone();
        }
        if self.low >= level {
            return DigitString::default();
        }
        DigitString::new(self.low, self.digits[..(level - self.low) as usize].iter().copied().collect())
    }

    /// First position below `limit` where the two strings differ.
    pub(crate) fn first_diff(&self, o: &DigitString, limit: i32) -> Option<i32> {
        if self.digits.is_empty() && o.digits.is_empty() {
            return None;
        }
        let start = match (self.digits.is_empty(), o.digits.is_empty()) {
            (true, _) => o.low,
            (_, true) => self.low,
            _ => min(self.low, o.low),
        };
        let end = min(limit, max(self.high(), o.high()));
        (start..end).find(|&pos| self.get(pos) != o.get(pos))
    }

    pub(crate) fn with_digit(&self, pos: i32, d: u16) -> Self {
        if d == 0 {
            return self.clone();
        }
        debug_assert!(self.digits.is_empty() || pos >= self.high());
        if self.digits.is_empty() {
            let mut ds = Digits::new();
            ds.push(d);
            return DigitString { low: pos, digits: ds };
        }
        let mut ds = self.digits.clone();
        for _ in self.high()..pos {
            ds.push(0);
        }
        ds.push(d);
        DigitString { low: self.low, digits: ds }
    }

    pub(crate) fn is_rational(&self, p: u32) -> bool {
        self.digits.iter().all(|&d| d as u32 % p == 0)
    }

    pub(crate) fn residues(&self, p: u32) -> Vec<Residue> {
        self.digits.iter().map(|&d| Residue { x: d as u32 / p, y: d as u32 % p }).collect()
    }

    pub(crate) fn from_scalar(x: &ExtScalar, below: i32) -> Result<Self> {
        let p = x.context().p();
        match x.valuation() {
            None => Ok(DigitString::default()),
            Some(v) if v >= below => Ok(DigitString::default()),
            Some(v) => {
                let ds = x.digits_between(v, below)?;
                Ok(DigitString::new(v, ds.iter().map(|r| (r.x * p + r.y) as u16).collect()))
            }
        }
    }

    pub(crate) fn to_scalar(&self, ctx: &'static ExtContext) -> ExtScalar {
        ExtScalar::from_digits(ctx, self.low, &self.residues(ctx.p()))
    }
}

/// Vertex `(m; a)` with `a` reduced modulo `p^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    level: i32,
    center: DigitString,
    p: u16,
}

impl Vertex {
    pub(crate) fn from_digits(p: u32, level: i32, center: DigitString) -> Self {
        Vertex { level, center: center.truncate(level), p: p as u16 }
    }

    /// `(m; a)` for an element `a` known at least to `p^m`.
    pub fn new(level: i32, center: &ExtScalar) -> Result<Self> {
        let p = center.context().p();
        Ok(Vertex { level, center: DigitString::from_scalar(center, level)?, p: p as u16 })
    }

    /// The standard vertex `(j; 0)`.
    pub fn standard(p: u32, j: i32) -> Self {
        Vertex { level: j, center: DigitString::default(), p: p as u16 }
    }

    pub fn origin(p: u32) -> Self {
        Self::standard(p, 0)
    }

    pub fn level(&self) -> i32 {
        self.level
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn center(&self, ctx: &'static ExtContext) -> ExtScalar {
        self.center.to_scalar(ctx)
    }

    /// Center digits as residues with the position of the first one.
    pub fn center_residues(&self) -> (i32, Vec<Residue>) {
        (self.center.low, self.center.residues(self.p()))
    }

    /// Digit of the center at position `level - 1`.
    pub fn top_digit(&self) -> Residue {
        let d = self.center.get(self.level - 1) as u32;
        Residue { x: d / self.p(), y: d % self.p() }
    }

    /// True when the center lies in Q_p, i.e. the vertex is in the standard `Q_p`-subtree.
    pub fn is_rational(&self) -> bool {
        self.center.is_rational(self.p())
    }

    pub fn parent(&self) -> Vertex {
        Vertex { level: self.level - 1, center: self.center.truncate(self.level - 1), p: self.p }
    }

    /// Child `(m+1; a + t p^m)`.
    pub fn child(&self, t: Residue) -> Vertex {
        let code = (t.x * self.p() + t.y) as u16;
        Vertex { level: self.level + 1, center: self.center.with_digit(self.level, code), p: self.p }
    }

    /// Children in row-major residue order.
    pub fn children(&self) -> impl Iterator<Item = Vertex> + '_ {
        let p = self.p();
        (0..p * p).map(move |i| self.child(Residue { x: i / p, y: i % p }))
    }

    /// Parent first, then the children in row-major residue order.
    pub fn neighbors(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity((self.p() * self.p() + 1) as usize);
        out.push(self.parent());
        out.extend(self.children());
        out
    }

    /// Neighbors flagged as `Q_p`-directions in the local coordinate: parent and
    /// children with residue in `F_p`.
    pub fn rational_neighbors(&self) -> Vec<Vertex> {
        let mut out = vec![self.parent()];
        out.extend((0..self.p()).map(|x| self.child(Residue { x, y: 0 })));
        out
    }

    pub fn ancestor(&self, level: i32) -> Vertex {
        debug_assert!(level <= self.level);
        Vertex { level, center: self.center.truncate(level), p: self.p }
    }

    /// Level of the vertex where the descending rays from infinity separate.
    pub fn meet_level(&self, o: &Vertex) -> i32 {
        let l = min(self.level, o.level);
        self.center.first_diff(&o.center, l).unwrap_or(l)
    }

    pub fn distance(&self, o: &Vertex) -> u32 {
        let c = self.meet_level(o);
        ((self.level - c) + (o.level - c)) as u32
    }

    /// `self` lies on the ray from infinity down to `o`.
    pub fn is_ancestor_of(&self, o: &Vertex) -> bool {
        self.level <= o.level && self.center.first_diff(&o.center, self.level).is_none()
    }

    /// The neighbor of `self` on the path to `o`.
    pub fn step_toward(&self, o: &Vertex) -> Option<Vertex> {
        if self == o {
            None
        } else if self.is_ancestor_of(o) {
            Some(o.ancestor(self.level + 1))
        } else {
            Some(self.parent())
        }
    }

    /// Vertices of the geodesic from `self` to `o`, both included.
    pub fn path_to(&self, o: &Vertex) -> Vec<Vertex> {
        let c = self.meet_level(o);
        let mut out: Vec<Vertex> = (c..=self.level).rev().map(|l| self.ancestor(l)).collect();
        out.extend((c + 1..=o.level).map(|l| o.ancestor(l)));
        out
    }

    /// The lattice matrix `[[p^m, a], [0, 1]]`.
    pub fn lift(&self, ctx: &'static ExtContext) -> Mat2 {
        let one = ExtScalar::one(ctx);
        Mat2::new(one.shift(self.level), self.center(ctx), ExtScalar::zero(ctx), one)
    }

    /// Vertex of the lattice spanned by the columns of `m`.
    pub fn from_matrix(m: &Mat2) -> Result<Vertex> {
        let det = m.det();
        let vdet = det.valuation().ok_or(Error::SingularMatrix)?;
        let (vc, vd) = (m.c.val_or(i32::MAX), m.d.val_or(i32::MAX));
        if vc == i32::MAX && vd == i32::MAX {
            return Err(Error::SingularMatrix);
        }
        let (num, den, vden) = if vd <= vc { (m.b, m.d, vd) } else { (m.a, m.c, vc) };
        let level = vdet - 2 * vden;
        let a = num.try_div(&den)?;
        Vertex::new(level, &a)
    }

    /// Image under a matrix.
    pub fn act(&self, g: &Mat2) -> Result<Vertex> {
        Vertex::from_matrix(&g.mul(&self.lift(g.context())))
    }

    pub fn label(&self) -> String {
        format!("({}; {})", self.level, format_expansion(self.p(), self.center.low, &self.center.residues(self.p())))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl serde::Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

/// An end of the tree, i.e. a boundary point, as a digit string known to some depth.
#[derive(Clone, Debug)]
pub enum End {
    Infinity,
    Finite { digits: DigitString, known: i32 },
}

const EXACT: i32 = i32::MAX / 4;

impl End {
    pub fn from_point(x: &BoundaryPoint) -> Result<End> {
        match x {
            BoundaryPoint::Infinity => Ok(End::Infinity),
            BoundaryPoint::Finite(z) => match z.abs_precision() {
                None => Ok(End::Finite { digits: DigitString::default(), known: EXACT }),
                Some(known) => Ok(End::Finite { digits: DigitString::from_scalar(z, known)?, known }),
            },
        }
    }

    /// Vertex `(l; x mod p^l)` on the ray from infinity to this end.
    pub fn vertex_at(&self, p: u32, level: i32) -> Result<Vertex> {
        match self {
            End::Infinity => Err(Error::Precondition("infinity has no vertex at a level".into())),
            End::Finite { digits, known } => {
                if level > *known {
                    return Err(Error::PrecisionExhausted(format!("end known to level {known}, need {level}")));
                }
                Ok(Vertex::from_digits(p, level, digits.clone()))
            }
        }
    }

    /// Meet level with a vertex; `None` for the end at infinity.
    pub fn meet_level(&self, v: &Vertex) -> Result<Option<i32>> {
        match self {
            End::Infinity => Ok(None),
            End::Finite { digits, known } => {
                let lim = min(v.level, *known);
                match digits.first_diff(&v.center, lim) {
                    Some(c) => Ok(Some(c)),
                    None if v.level <= *known => Ok(Some(v.level)),
                    None => Err(Error::PrecisionExhausted("end not known deep enough".into())),
                }
            }
        }
    }

    /// Level where two ends separate.
    pub fn meet_level_end(&self, o: &End) -> Result<Option<i32>> {
        match (self, o) {
            (End::Finite { digits: a, known: ka }, End::Finite { digits: b, known: kb }) => {
                let lim = min(*ka, *kb);
                match a.first_diff(b, lim) {
                    Some(c) => Ok(Some(c)),
                    None => Err(Error::PrecisionExhausted("ends agree to all known digits".into())),
                }
            }
            _ => Ok(None),
        }
    }

    /// The neighbor of `v` toward this end.
    pub fn step_from(&self, v: &Vertex) -> Result<Vertex> {
        match self.meet_level(v)? {
            Some(c) if c == v.level => self.vertex_at(v.p(), v.level + 1),
            _ => Ok(v.parent()),
        }
    }

    /// `steps` vertices after `v` along the ray toward this end.
    pub fn ray_from(&self, v: &Vertex, steps: usize) -> Result<Vec<Vertex>> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(v.clone());
        for _ in 0..steps {
            let next = self.step_from(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Projection of `u` onto the geodesic between two distinct ends.
pub fn median(u: &Vertex, x: &End, y: &End) -> Result<Vertex> {
    let p = u.p();
    match (x, y) {
        (End::Infinity, End::Infinity) => Err(Error::DegenerateFrame),
        (End::Infinity, e) | (e, End::Infinity) => {
            let c = e.meet_level(u)?.unwrap();
            Ok(u.ancestor(c))
        }
        _ => {
            let cux = x.meet_level(u)?.unwrap();
            let cuy = y.meet_level(u)?.unwrap();
            let cxy = x.meet_level_end(y)?.unwrap();
            if cxy >= cux && cxy >= cuy {
                x.vertex_at(p, cxy)
            } else if cux >= cuy {
                x.vertex_at(p, cux)
            } else {
                y.vertex_at(p, cuy)
            }
        }
    }
}
