//! Elements of Q_p, represented inside the extension with vanishing `w`-part.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::context::ExtContext;
use super::ext::ExtScalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq)]
pub struct PadicScalar(ExtScalar);

impl PadicScalar {
    pub(crate) fn from_ext_unchecked(x: ExtScalar) -> Self {
        PadicScalar(x)
    }

    /// Accepts `x` when its `w`-part vanishes to the known precision.
    pub fn from_ext(x: ExtScalar) -> Result<Self> {
        if x.is_in_qp() {
            Ok(PadicScalar(x.re_part().0))
        } else {
            Err(Error::Precondition("value has a nonzero w-component".into()))
        }
    }

    pub fn zero(ctx: &'static ExtContext) -> Self {
        PadicScalar(ExtScalar::zero(ctx))
    }

    pub fn one(ctx: &'static ExtContext) -> Self {
        PadicScalar(ExtScalar::one(ctx))
    }

    pub fn from_i64(ctx: &'static ExtContext, n: i64) -> Self {
        PadicScalar(ExtScalar::from_i64(ctx, n))
    }

    pub fn from_ratio(ctx: &'static ExtContext, num: i64, den: i64) -> Result<Self> {
        Ok(PadicScalar(ExtScalar::from_ratio(ctx, num, den)?))
    }

    /// Exact finite expansion `sum digits[j] p^(low + j)`.
    pub fn from_digits(ctx: &'static ExtContext, low: i32, digits: &[u32]) -> Self {
        let rs: Vec<_> = digits.iter().map(|&x| super::Residue { x, y: 0 }).collect();
        PadicScalar(ExtScalar::from_digits(ctx, low, &rs))
    }

    pub fn to_ext(&self) -> ExtScalar {
        self.0
    }

    pub fn context(&self) -> &'static ExtContext {
        self.0.context()
    }

    pub fn p(&self) -> u32 {
        self.0.context().p()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn valuation(&self) -> Option<i32> {
        self.0.valuation()
    }

    pub fn precision(&self) -> u32 {
        self.0.precision()
    }

    /// Digits of the unit part, lowest first.
    pub fn digits(&self) -> Vec<u32> {
        self.0.unit_digits(self.0.precision() as usize).into_iter().map(|r| r.x).collect()
    }

    /// Digits at absolute positions `from..to`.
    pub fn digits_between(&self, from: i32, to: i32) -> Result<Vec<u32>> {
        Ok(self.0.digits_between(from, to)?.into_iter().map(|r| r.x).collect())
    }

    pub fn shift(self, k: i32) -> Self {
        PadicScalar(self.0.shift(k))
    }

    pub fn try_inv(&self) -> Result<Self> {
        Ok(PadicScalar(self.0.try_inv()?))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(PadicScalar(self.0.try_div(&o.0)?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(PadicScalar(self.0.pow(e)?))
    }

    pub fn agrees_to(&self, other: &Self, k: i32) -> bool {
        self.0.agrees_to(&other.0, k)
    }

    /// Residue in F_p of the unit part.
    pub fn unit_residue(&self) -> u32 {
        self.0.unit_residue().x
    }

    pub fn checked(self) -> Result<Self> {
        Ok(PadicScalar(self.0.checked()?))
    }
}

impl Add for PadicScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PadicScalar(self.0 + o.0)
    }
}

impl Sub for PadicScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        PadicScalar(self.0 - o.0)
    }
}

impl Mul for PadicScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        PadicScalar(self.0 * o.0)
    }
}

impl Neg for PadicScalar {
    type Output = Self;
    fn neg(self) -> Self {
        PadicScalar(-self.0)
    }
}

impl From<PadicScalar> for ExtScalar {
    fn from(x: PadicScalar) -> ExtScalar {
        x.0
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}
