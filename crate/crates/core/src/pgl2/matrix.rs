use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::boundary::BoundaryPoint;
use crate::error::{Error, Result};
use crate::padic::{parse_scalar, ExtContext, ExtScalar};

/// A magnitude `p^-e`, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PNorm {
    /// `None` is zero.
    pub neg_exp: Option<i64>,
}

impl PNorm {
    pub const ZERO: PNorm = PNorm { neg_exp: None };

    pub fn pow(e: i64) -> PNorm {
        PNorm { neg_exp: Some(e) }
    }

    pub fn of(x: &ExtScalar) -> PNorm {
        PNorm { neg_exp: x.valuation().map(|v| v as i64) }
    }

    pub fn is_zero(&self) -> bool {
        self.neg_exp.is_none()
    }

    pub fn value(&self, p: u32) -> f64 {
        match self.neg_exp {
            None => 0.0,
            Some(e) => (p as f64).powi(-(e as i32)),
        }
    }

    pub fn describe(&self, p: u32) -> String {
        match self.neg_exp {
            None => "0".into(),
            Some(0) => "1".into(),
            Some(e) => format!("{p}^{}", -e),
        }
    }
}

impl Ord for PNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.neg_exp, other.neg_exp) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) => b.cmp(&a),
        }
    }
}

impl PartialOrd for PNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&match self.neg_exp {
            None => "0".to_string(),
            Some(e) => format!("p^{}", -e),
        })
    }
}

/// A 2x2 matrix over K, used as a projective representative.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: ExtScalar,
    pub b: ExtScalar,
    pub c: ExtScalar,
    pub d: ExtScalar,
}

impl Mat2 {
    pub fn new(a: ExtScalar, b: ExtScalar, c: ExtScalar, d: ExtScalar) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(ctx: &'static ExtContext) -> Self {
        let (o, z) = (ExtScalar::one(ctx), ExtScalar::zero(ctx));
        Mat2::new(o, z, z, o)
    }

    pub fn diag(x: ExtScalar, y: ExtScalar) -> Self {
        let z = ExtScalar::zero(x.context());
        Mat2::new(x, z, z, y)
    }

    pub fn from_i64(ctx: &'static ExtContext, e: [[i64; 2]; 2]) -> Self {
        let f = |n| ExtScalar::from_i64(ctx, n);
        Mat2::new(f(e[0][0]), f(e[0][1]), f(e[1][0]), f(e[1][1]))
    }

    pub fn context(&self) -> &'static ExtContext {
        self.a.context()
    }

    pub fn entries(&self) -> [ExtScalar; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// Adjugate, the inverse up to the scalar `det`.
    pub fn adj(&self) -> Mat2 {
        Mat2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn det(&self) -> ExtScalar {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> ExtScalar {
        self.a + self.d
    }

    /// Minimum valuation over the entries.
    pub fn min_valuation(&self) -> Option<i32> {
        self.entries().iter().filter_map(|e| e.valuation()).min()
    }

    /// Rescale by a power of p so the entries are integral with a unit among them.
    pub fn normalized(&self) -> Mat2 {
        match self.min_valuation() {
            Some(v) if v != 0 => self.scale_p(-v),
            _ => *self,
        }
    }

    pub fn scale_p(&self, k: i32) -> Mat2 {
        Mat2 { a: self.a.shift(k), b: self.b.shift(k), c: self.c.shift(k), d: self.d.shift(k) }
    }

    pub fn scale(&self, s: ExtScalar) -> Mat2 {
        Mat2 { a: self.a * s, b: self.b * s, c: self.c * s, d: self.d * s }
    }

    /// Mobius action on the boundary.
    pub fn apply(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        match x {
            BoundaryPoint::Infinity => {
                if self.c.is_zero() {
                    Ok(BoundaryPoint::Infinity)
                } else {
                    Ok(BoundaryPoint::Finite(self.a.try_div(&self.c)?.checked()?))
                }
            }
            BoundaryPoint::Finite(z) => {
                let num = self.a * *z + self.b;
                let den = self.c * *z + self.d;
                if den.is_zero() {
                    if num.is_zero() {
                        return Err(Error::PrecisionExhausted("0/0 in Mobius action".into()));
                    }
                    return Ok(BoundaryPoint::Infinity);
                }
                den.checked()?;
                Ok(BoundaryPoint::Finite(num.try_div(&den)?.checked()?))
            }
        }
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?}, {:?}], [{:?}, {:?}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixClass {
    /// Lower-right entry 1.
    G1,
    /// Upper-right entry 1, lower-right entry 0.
    G2,
}

/// An element of PGL2(K) in canonical form.
#[derive(Clone, Copy)]
pub struct ProjMatrix {
    m: Mat2,
    class: MatrixClass,
}

impl ProjMatrix {
    pub fn canonicalize(raw: Mat2) -> Result<ProjMatrix> {
        if raw.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        if !raw.d.is_zero() {
            let s = raw.d.try_inv()?;
            let mut m = raw.scale(s);
            m.d = ExtScalar::one(raw.context());
            Ok(ProjMatrix { m, class: MatrixClass::G1 })
        } else {
            let s = raw.b.try_inv()?;
            let mut m = raw.scale(s);
            m.b = ExtScalar::one(raw.context());
            m.d = ExtScalar::zero(raw.context());
            Ok(ProjMatrix { m, class: MatrixClass::G2 })
        }
    }

    pub fn from_entries(a: ExtScalar, b: ExtScalar, c: ExtScalar, d: ExtScalar) -> Result<ProjMatrix> {
        Self::canonicalize(Mat2::new(a, b, c, d))
    }

    pub fn identity(ctx: &'static ExtContext) -> ProjMatrix {
        ProjMatrix { m: Mat2::identity(ctx), class: MatrixClass::G1 }
    }

    pub fn raw(&self) -> &Mat2 {
        &self.m
    }

    pub fn class(&self) -> MatrixClass {
        self.class
    }

    pub fn context(&self) -> &'static ExtContext {
        self.m.context()
    }

    pub fn mul(&self, o: &ProjMatrix) -> Result<ProjMatrix> {
        Self::canonicalize(self.m.mul(&o.m))
    }

    pub fn inverse(&self) -> Result<ProjMatrix> {
        Self::canonicalize(self.m.adj())
    }

    pub fn mobius(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        self.m.apply(x)
    }

    /// `max |g_ij - h_ij|` on canonical representatives, also across classes.
    pub fn distance(&self, o: &ProjMatrix) -> PNorm {
        self.m
            .entries()
            .iter()
            .zip(o.m.entries().iter())
            .map(|(x, y)| PNorm::of(&(*x - *y)))
            .max()
            .unwrap_or(PNorm::ZERO)
    }

    /// Distance to the identity.
    pub fn norm(&self) -> PNorm {
        self.distance(&ProjMatrix::identity(self.context()))
    }

    /// `[[a, b], [c, d]]` with scalar literals.
    pub fn parse(ctx: &'static ExtContext, s: &str) -> Result<ProjMatrix> {
        let entries = parse_matrix_entries(s)?;
        let e: Vec<ExtScalar> = entries.iter().map(|t| parse_scalar(ctx, t)).collect::<Result<_>>()?;
        Self::from_entries(e[0], e[1], e[2], e[3])
    }
}

impl PartialEq for ProjMatrix {
    fn eq(&self, o: &Self) -> bool {
        self.class == o.class && self.distance(o).is_zero()
    }
}

impl fmt::Debug for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.class, self.m)
    }
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.m.entries();
        write!(f, "[[{:.6}, {:.6}], [{:.6}, {:.6}]]", e[0], e[1], e[2], e[3])
    }
}

/// Split `[[a, b], [c, d]]` into its four entry strings.
pub fn parse_matrix_entries(s: &str) -> Result<Vec<String>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix("[[")
        .and_then(|r| r.strip_suffix("]]"))
        .ok_or_else(|| Error::Parse(format!("matrix literal must look like [[a,b],[c,d]]: {s}")))?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != 2 {
        return Err(Error::Parse("matrix literal needs two rows".into()));
    }
    let mut out = Vec::new();
    for r in rows {
        let mut depth = 0;
        let mut start = 0;
        let bytes: Vec<char> = r.chars().collect();
        let mut cells = Vec::new();
        for (i, ch) in bytes.iter().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    cells.push(bytes[start..i].iter().collect::<String>());
                    start = i + 1;
                }
                _ => {}
            }
        }
        cells.push(bytes[start..].iter().collect());
        if cells.len() != 2 {
            return Err(Error::Parse("each matrix row needs two entries".into()));
        }
        out.extend(cells);
    }
    Ok(out)
}
