use std::fmt;

use super::matrix::{Mat2, PNorm, ProjMatrix};
use crate::error::{Error, Result};
use crate::padic::{parse_scalar, ExtContext, ExtScalar};

/// A point of the projective line over K.
#[derive(Clone, Copy)]
pub enum BoundaryPoint {
    Finite(ExtScalar),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    pub fn finite(&self) -> Option<ExtScalar> {
        match self {
            BoundaryPoint::Finite(x) => Some(*x),
            BoundaryPoint::Infinity => None,
        }
    }

    /// Chordal distance `|x - y| / (max(1,|x|) max(1,|y|))`.
    pub fn chordal_distance(&self, o: &BoundaryPoint) -> PNorm {
        fn big(x: &ExtScalar) -> i64 {
            (-(x.val_or(i32::MAX) as i64)).max(0)
        }
        match (self, o) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => PNorm::ZERO,
            (BoundaryPoint::Finite(x), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => {
                PNorm::pow(big(x))
            }
            (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => {
                let d = *x - *y;
                match d.valuation() {
                    None => PNorm::ZERO,
                    Some(v) => PNorm::pow(v as i64 + big(x) + big(y)),
                }
            }
        }
    }

    /// Agreement to truncation depth `depth`: chordal distance at most `p^-depth`.
    /// Points agreeing to all known digits also count as agreeing.
    pub fn agrees_to_depth(&self, o: &BoundaryPoint, depth: i64) -> bool {
        match self.chordal_distance(o).neg_exp {
            None => true,
            Some(e) => e >= depth,
        }
    }

    /// True when the point lies on P^1(Q_p).
    pub fn is_rational(&self) -> bool {
        match self {
            BoundaryPoint::Infinity => true,
            BoundaryPoint::Finite(x) => x.is_in_qp(),
        }
    }

    /// `inf` or a scalar literal.
    pub fn parse(ctx: &'static ExtContext, s: &str) -> Result<BoundaryPoint> {
        let t = s.trim();
        if t == "inf" || t == "oo" || t == "∞" {
            Ok(BoundaryPoint::Infinity)
        } else {
            Ok(BoundaryPoint::Finite(parse_scalar(ctx, t)?))
        }
    }
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, o: &Self) -> bool {
        self.chordal_distance(o).is_zero()
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Infinity => write!(f, "inf"),
            BoundaryPoint::Finite(x) => write!(f, "{:?}", x),
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Infinity => write!(f, "inf"),
            BoundaryPoint::Finite(x) => fmt::Display::fmt(x, f),
        }
    }
}

/// The element sending `0, inf, 1` to `x, y, z`.
pub fn frame_to_matrix(x: &BoundaryPoint, y: &BoundaryPoint, z: &BoundaryPoint) -> Result<ProjMatrix> {
    if x == y || y == z || x == z {
        return Err(Error::DegenerateFrame);
    }
    use BoundaryPoint::*;
    let m = match (x, y, z) {
        (Infinity, Finite(y), Finite(z)) => {
            let ctx = y.context();
            Mat2::new(-*y, *y - *z, -ExtScalar::one(ctx), ExtScalar::zero(ctx))
        }
        (Finite(x), Infinity, Finite(z)) => {
            let ctx = x.context();
            Mat2::new(*z - *x, *x, ExtScalar::zero(ctx), ExtScalar::one(ctx))
        }
        (Finite(x), Finite(y), Infinity) => {
            let ctx = x.context();
            Mat2::new(*y, -*x, ExtScalar::one(ctx), -ExtScalar::one(ctx))
        }
        (Finite(x), Finite(y), Finite(z)) => Mat2::new(*y * (*z - *x), *x * (*y - *z), *z - *x, *y - *z),
        _ => return Err(Error::DegenerateFrame),
    };
    ProjMatrix::canonicalize(m)
}
