use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::padic::ExtContext;
use crate::pgl2::{BoundaryPoint, Mat2, ProjMatrix};
use crate::tree::Vertex;

/// `m` lies in `K^* GL2(Q_p)`: dividing by an entry of least valuation leaves
/// only `Q_p` entries.
pub fn in_h(m: &Mat2) -> bool {
    let e = m.entries();
    let pivot = e.iter().filter(|x| !x.is_zero()).min_by_key(|x| x.val_or(i32::MAX));
    match pivot.and_then(|x| x.try_inv().ok()) {
        None => false,
        Some(s) => e.iter().all(|x| (*x * s).is_in_qp()),
    }
}

/// The circle `g . P^1(Q_p)`, identified with the coset `gH`.
#[derive(Clone, Copy)]
pub struct Circle {
    rep: ProjMatrix,
    rep_inv: ProjMatrix,
}

impl Circle {
    pub fn new(rep: ProjMatrix) -> Result<Circle> {
        Ok(Circle { rep, rep_inv: rep.inverse()? })
    }

    /// The standard circle `P^1(Q_p)`.
    pub fn standard(ctx: &'static ExtContext) -> Circle {
        let id = ProjMatrix::identity(ctx);
        Circle { rep: id, rep_inv: id }
    }

    pub fn rep(&self) -> &ProjMatrix {
        &self.rep
    }

    pub fn rep_inv(&self) -> &ProjMatrix {
        &self.rep_inv
    }

    pub fn context(&self) -> &'static ExtContext {
        self.rep.context()
    }

    /// `m . C` for a raw matrix `m`.
    pub fn translate(&self, m: &Mat2) -> Result<Circle> {
        Circle::new(ProjMatrix::canonicalize(m.mul(self.rep.raw()))?)
    }

    /// Whether `m . C = C`.
    pub fn stabilized_by(&self, m: &Mat2) -> bool {
        in_h(&self.rep_inv.raw().mul(m).mul(self.rep.raw()))
    }

    /// Vertex of the hull `g . T_H`.
    pub fn hull_contains(&self, v: &Vertex) -> Result<bool> {
        Ok(v.act(self.rep_inv.raw())?.is_rational())
    }

    pub fn contains_point(&self, x: &BoundaryPoint) -> Result<bool> {
        Ok(self.rep_inv.mobius(x)?.is_rational())
    }

    /// Image of the origin, the base vertex of the hull.
    pub fn base_vertex(&self) -> Result<Vertex> {
        Vertex::origin(self.context().p()).act(self.rep.raw())
    }
}

impl PartialEq for Circle {
    fn eq(&self, o: &Circle) -> bool {
        in_h(&self.rep_inv.raw().mul(o.rep.raw()))
    }
}

impl fmt::Debug for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Circle({})", self.rep)
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} . P1(Q_p)", self.rep)
    }
}

impl Serialize for Circle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{parse_scalar, ExtScalar};

    fn ctx() -> &'static ExtContext {
        ExtContext::new(3, 2, 40).unwrap()
    }

    #[test]
    fn coset_equality() {
        let k = ctx();
        let g = ProjMatrix::parse(k, "[[1 + w, 2], [3*w, 1]]").unwrap();
        let h = ProjMatrix::parse(k, "[[5, 1/3], [7, 2]]").unwrap();
        let c = Circle::new(g).unwrap();
        let d = Circle::new(g.mul(&h).unwrap()).unwrap();
        assert_eq!(c, d);
        let u = ProjMatrix::parse(k, "[[1, w], [0, 1]]").unwrap();
        assert_ne!(c, Circle::new(g.mul(&u).unwrap()).unwrap());
        assert!(Circle::standard(k).stabilized_by(h.raw()));
        // scalar multiples of H elements are still in H
        assert!(in_h(&h.raw().scale(parse_scalar(k, "w + 3").unwrap())));
    }

    #[test]
    fn hull_and_points() {
        let k = ctx();
        let c = Circle::new(ProjMatrix::parse(k, "[[1, w], [0, 1]]").unwrap()).unwrap();
        assert!(c.contains_point(&BoundaryPoint::Infinity).unwrap());
        let w = BoundaryPoint::Finite(ExtScalar::omega(k));
        assert!(c.contains_point(&w).unwrap());
        assert!(!c.contains_point(&BoundaryPoint::Finite(ExtScalar::zero(k))).unwrap());
        assert!(c.hull_contains(&Vertex::origin(3)).unwrap());
        let deep = Vertex::new(1, &ExtScalar::zero(k)).unwrap();
        assert!(!c.hull_contains(&deep).unwrap());
    }
}
