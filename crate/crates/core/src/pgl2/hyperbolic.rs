use super::boundary::BoundaryPoint;
use super::matrix::{Mat2, ProjMatrix};
use crate::error::{Error, Result};
use crate::padic::{ExtScalar, PadicScalar};

/// Normal form `g = h diag(p^-n a, 1) h^-1` of a hyperbolic element.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicData {
    /// Translation length along the axis.
    pub length: u32,
    /// The unit `a_g`.
    pub multiplier: ExtScalar,
    /// Eigenvalue of larger absolute value.
    pub lambda_attracting: ExtScalar,
    pub lambda_repelling: ExtScalar,
    pub fixed_minus: BoundaryPoint,
    pub fixed_plus: BoundaryPoint,
    /// `h` with `h.0 = fixed_minus` and `h.inf = fixed_plus`.
    pub conjugator: ProjMatrix,
}

#[derive(Debug, Clone, Copy)]
pub enum Classification {
    Hyperbolic(HyperbolicData),
    NonHyperbolic,
}

impl Classification {
    pub fn hyperbolic(self) -> Option<HyperbolicData> {
        match self {
            Classification::Hyperbolic(h) => Some(h),
            Classification::NonHyperbolic => None,
        }
    }
}

/// Hyperbolic iff `2 v(tr) < v(det)` on any representative.
pub fn classify(g: &ProjMatrix) -> Result<Classification> {
    classify_raw(g.raw())
}

pub fn classify_raw(m: &Mat2) -> Result<Classification> {
    let ctx = m.context();
    let tr = m.trace();
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (vt, vd) = match tr.valuation() {
        None => return Ok(Classification::NonHyperbolic),
        Some(vt) => (vt, det.valuation().unwrap()),
    };
    if 2 * vt >= vd {
        return Ok(Classification::NonHyperbolic);
    }
    let length = (vd - 2 * vt) as u32;
    let four = ExtScalar::from_i64(ctx, 4);
    let delta = (four * det).try_div(&(tr * tr))?;
    let s = (ExtScalar::one(ctx) - delta).sqrt()?;
    let half = ExtScalar::from_ratio(ctx, 1, 2)?;
    let l1 = (tr * (ExtScalar::one(ctx) + s) * half).checked()?;
    let l2 = det.try_div(&l1)?.checked()?;
    let fixed_plus = eigen_point(m, l1)?;
    let fixed_minus = eigen_point(m, l2)?;
    let multiplier = l1.try_div(&l2)?.shift(length as i32).checked()?;
    let one = ExtScalar::one(ctx);
    let zero = ExtScalar::zero(ctx);
    let h = match (fixed_plus, fixed_minus) {
        (BoundaryPoint::Finite(xp), BoundaryPoint::Finite(xm)) => Mat2::new(xp, xm, one, one),
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(xm)) => Mat2::new(one, xm, zero, one),
        (BoundaryPoint::Finite(xp), BoundaryPoint::Infinity) => Mat2::new(xp, one, one, zero),
        _ => return Err(Error::PrecisionExhausted("coincident fixed points".into())),
    };
    let conjugator = ProjMatrix::canonicalize(h)?;
    Ok(Classification::Hyperbolic(HyperbolicData {
        length,
        multiplier,
        lambda_attracting: l1,
        lambda_repelling: l2,
        fixed_minus,
        fixed_plus,
        conjugator,
    }))
}

fn eigen_point(m: &Mat2, l: ExtScalar) -> Result<BoundaryPoint> {
    // (b, l - a) and (l - d, c) both span the eigenline; take the larger one.
    let v1 = (m.b, l - m.a);
    let v2 = (l - m.d, m.c);
    let size = |v: &(ExtScalar, ExtScalar)| v.0.val_or(i32::MAX).min(v.1.val_or(i32::MAX));
    let (x, y) = if size(&v1) <= size(&v2) { v1 } else { v2 };
    if x.is_zero() && y.is_zero() {
        return Err(Error::PrecisionExhausted("eigenvector vanished".into()));
    }
    if y.is_zero() {
        return Ok(BoundaryPoint::Infinity);
    }
    Ok(BoundaryPoint::Finite(x.try_div(&y)?.checked()?))
}

/// `g diag(p^-k u, 1) g^-1` for `g = [[a, b], [1, 1]]`.
pub fn from_quadruple(a: ExtScalar, b: ExtScalar, k: i32, u: ExtScalar) -> Result<ProjMatrix> {
    let ctx = a.context();
    let one = ExtScalar::one(ctx);
    let g = Mat2::new(a, b, one, one);
    let d = Mat2::diag(u.shift(-k), one);
    ProjMatrix::canonicalize(g.mul(&d).mul(&g.adj()))
}

/// `a` with the angle `theta` and modulus `r`, as in the polar form.
pub fn unit_from_polar(r: &PadicScalar, zeta: &ExtScalar, theta: &PadicScalar) -> Result<ExtScalar> {
    let ctx = zeta.context();
    Ok(r.to_ext() * *zeta * (ctx.i_value() * ctx.omega_p() * theta.to_ext()).exp()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{parse_scalar, ExtContext};

    fn ctx() -> &'static ExtContext {
        ExtContext::new(3, 2, 48).unwrap()
    }

    #[test]
    fn quadruple_roundtrip() {
        let k = ctx();
        let a = parse_scalar(k, "2 + 2*w").unwrap();
        let b = parse_scalar(k, "w").unwrap();
        let u = parse_scalar(k, "phi * (sqrt(1 + 2*3^2) + w*3)").unwrap();
        let g = from_quadruple(a, b, 1, u).unwrap();
        let h = classify(&g).unwrap().hyperbolic().unwrap();
        assert_eq!(h.length, 1);
        assert!(h.multiplier.agrees_to(&u, 40));
        assert!(h.fixed_plus == BoundaryPoint::Finite(a));
        assert!(h.fixed_minus == BoundaryPoint::Finite(b));
    }

    #[test]
    fn closed_form_matches_product() {
        // [[a l - b, ab(1 - l)], [l - 1, a - b l]] with l = p^-k u
        let k = ctx();
        let a = parse_scalar(k, "1 + 3*w").unwrap();
        let b = parse_scalar(k, "1 + (1 + 2*w)*3").unwrap();
        let l = ExtScalar::from_ratio(k, 1, 3).unwrap();
        let one = ExtScalar::one(k);
        let closed = ProjMatrix::from_entries(a * l - b, a * b * (one - l), l - one, a - b * l).unwrap();
        assert!(closed == from_quadruple(a, b, 1, one).unwrap());
    }

    #[test]
    fn elliptic_and_parabolic_are_not_hyperbolic() {
        let k = ctx();
        let rot = ProjMatrix::canonicalize(Mat2::from_i64(k, [[0, -1], [1, 0]])).unwrap();
        assert!(classify(&rot).unwrap().hyperbolic().is_none());
        let par = ProjMatrix::canonicalize(Mat2::from_i64(k, [[1, 1], [0, 1]])).unwrap();
        assert!(classify(&par).unwrap().hyperbolic().is_none());
        let small = ProjMatrix::canonicalize(Mat2::from_i64(k, [[3, 1], [1, 0]])).unwrap();
        assert!(classify(&small).unwrap().hyperbolic().is_none());
    }

    #[test]
    fn diagonal() {
        let k = ctx();
        let g = ProjMatrix::canonicalize(Mat2::from_i64(k, [[1, 0], [0, 9]])).unwrap();
        let h = classify(&g).unwrap().hyperbolic().unwrap();
        assert_eq!(h.length, 2);
        // z -> z/9 pushes points toward infinity p-adically
        assert!(h.fixed_plus.is_infinity());
        assert!(h.fixed_minus == BoundaryPoint::Finite(ExtScalar::zero(k)));
        assert!(h.multiplier == ExtScalar::one(k));
    }
}
