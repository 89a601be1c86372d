//! Elements of K = Q_p(w) stored as `p^val * (A + w B)` with relative precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::context::{ExtContext, MIN_SIGNIFICANT};
use super::residue::{modpow, Residue};
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

const ZERO_VAL: i32 = i32::MAX;

/// An element of the unramified quadratic extension.
///
/// The unit part `A + w B` has at least one of `A`, `B` a p-adic unit and is
/// known modulo `p^prec`. `A`, `B` are kept in Montgomery form; digits at or
/// above `prec` carry no meaning.
#[derive(Clone, Copy)]
pub struct ExtScalar {
    ctx: &'static ExtContext,
    val: i32,
    prec: u32,
    re: u128,
    im: u128,
}

#[inline]
pub(crate) fn mod_small(x: u128, p: u32) -> u32 {
    let p = p as u64;
    let hi = (x >> 64) as u64 % p;
    let lo = x as u64 % p;
    let r64 = ((1u128 << 64) % p as u128) as u64;
    ((hi as u128 * r64 as u128 + lo as u128) % p as u128) as u32
}

/// Base-p digits of `x`, lowest first.
pub(crate) fn base_digits(mut x: u128, p: u32, count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut chunk_exp = 0usize;
    let mut chunk: u64 = 1;
    while (chunk as u128) * (p as u128) < (1u128 << 63) {
        chunk *= p as u64;
        chunk_exp += 1;
    }
    while out.len() < count {
        let (mut lo, rest) = if x >> 64 == 0 {
            ((x as u64) % chunk, (x as u64 / chunk) as u128)
        } else {
            ((x % chunk as u128) as u64, x / chunk as u128)
        };
        for _ in 0..chunk_exp {
            if out.len() == count {
                break;
            }
            out.push((lo % p as u64) as u32);
            lo /= p as u64;
        }
        x = rest;
    }
    out
}

impl ExtScalar {
    pub fn context(&self) -> &'static ExtContext {
        self.ctx
    }

    pub fn zero(ctx: &'static ExtContext) -> Self {
        ExtScalar { ctx, val: ZERO_VAL, prec: 0, re: 0, im: 0 }
    }

    pub fn one(ctx: &'static ExtContext) -> Self {
        ExtScalar { ctx, val: 0, prec: ctx.precision(), re: ctx.mont.one, im: 0 }
    }

    pub fn omega(ctx: &'static ExtContext) -> Self {
        ExtScalar { ctx, val: 0, prec: ctx.precision(), re: 0, im: ctx.mont.one }
    }

    pub fn from_i64(ctx: &'static ExtContext, n: i64) -> Self {
        Self::from_i128(ctx, n as i128)
    }

    pub fn from_i128(ctx: &'static ExtContext, mut n: i128) -> Self {
        if n == 0 {
            return Self::zero(ctx);
        }
        let p = ctx.p() as i128;
        let mut v = 0;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        let m = ctx.mont.modulus as i128;
        let u = n.rem_euclid(m) as u128;
        ExtScalar { ctx, val: v, prec: ctx.precision(), re: ctx.mont.to_mont(u), im: 0 }
    }

    pub fn from_ratio(ctx: &'static ExtContext, num: i64, den: i64) -> Result<Self> {
        Self::from_i64(ctx, num).try_div(&Self::from_i64(ctx, den))
    }

    /// Exact lift `x + w y` of a residue with digits 0..p.
    pub fn from_residue(ctx: &'static ExtContext, r: Residue) -> Self {
        let re = ctx.mont.to_mont(r.x as u128);
        let im = ctx.mont.to_mont(r.y as u128);
        Self::normalize(ctx, 0, ctx.precision(), re, im)
    }

    /// Exact finite expansion `sum_j digits[j] p^(low + j)`.
    pub fn from_digits(ctx: &'static ExtContext, low: i32, digits: &[Residue]) -> Self {
        let mut acc = Self::zero(ctx);
        for (j, d) in digits.iter().enumerate().rev() {
            if !d.is_zero() {
                acc = acc + Self::from_residue(ctx, *d).shift(low + j as i32);
            }
        }
        acc
    }

    /// `a + w b` from two Q_p values.
    pub fn from_parts(a: &PadicScalar, b: &PadicScalar) -> Self {
        let a = a.to_ext();
        a + Self::omega(a.ctx) * b.to_ext()
    }

    fn normalize(ctx: &'static ExtContext, val: i32, prec: u32, mut re: u128, mut im: u128) -> Self {
        let p = ctx.p();
        let mut k = 0;
        while k < prec && mod_small(re, p) == 0 && mod_small(im, p) == 0 {
            re /= p as u128;
            im /= p as u128;
            k += 1;
        }
        if k >= prec {
            return Self::zero(ctx);
        }
        ExtScalar { ctx, val: val + k as i32, prec: prec - k, re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.val == ZERO_VAL
    }

    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation with zero mapped to `inf`.
    pub fn val_or(&self, inf: i32) -> i32 {
        if self.is_zero() {
            inf
        } else {
            self.val
        }
    }

    /// Number of significant p-adic digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Absolute precision `val + prec`; `None` for the zero marker.
    pub fn abs_precision(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.val + self.prec as i32)
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Reject nonzero values with too few significant digits.
    pub fn checked(self) -> Result<Self> {
        if !self.is_zero() && self.prec < MIN_SIGNIFICANT {
            Err(Error::PrecisionExhausted(format!("{} significant digits left", self.prec)))
        } else {
            Ok(self)
        }
    }

    /// Truncate to at most `prec` significant digits.
    pub fn with_precision(mut self, prec: u32) -> Self {
        if !self.is_zero() {
            self.prec = self.prec.min(prec.max(1));
        }
        self
    }

    /// Multiply by `p^k`.
    pub fn shift(mut self, k: i32) -> Self {
        if !self.is_zero() {
            self.val += k;
        }
        self
    }

    /// Residue of the unit part.
    pub fn unit_residue(&self) -> Residue {
        if self.is_zero() {
            return Residue::ZERO;
        }
        let p = self.ctx.p();
        Residue {
            x: mod_small(self.ctx.mont.from_mont(self.re), p),
            y: mod_small(self.ctx.mont.from_mont(self.im), p),
        }
    }

    /// Image in the residue field; errors when the valuation is negative.
    pub fn residue(&self) -> Result<Residue> {
        match self.valuation() {
            None => Ok(Residue::ZERO),
            Some(v) if v > 0 => Ok(Residue::ZERO),
            Some(0) => Ok(self.unit_residue()),
            Some(_) => Err(Error::NotAUnit),
        }
    }

    /// The first `count` digit pairs of the unit part.
    pub fn unit_digits(&self, count: usize) -> Vec<Residue> {
        if self.is_zero() {
            return vec![Residue::ZERO; count];
        }
        let p = self.ctx.p();
        let xs = base_digits(self.ctx.mont.from_mont(self.re), p, count);
        let ys = base_digits(self.ctx.mont.from_mont(self.im), p, count);
        xs.into_iter().zip(ys).map(|(x, y)| Residue { x, y }).collect()
    }

    /// Digit pairs at absolute positions `from..to`, which must be known.
    pub fn digits_between(&self, from: i32, to: i32) -> Result<Vec<Residue>> {
        if to <= from {
            return Ok(Vec::new());
        }
        let n = (to - from) as usize;
        if self.is_zero() {
            return Ok(vec![Residue::ZERO; n]);
        }
        let abs = self.val + self.prec as i32;
        if to > abs {
            return Err(Error::PrecisionExhausted(format!("digit {} requested, known to {abs}", to - 1)));
        }
        if to <= self.val {
            return Ok(vec![Residue::ZERO; n]);
        }
        let start = from.max(self.val);
        let skip = (start - self.val) as usize;
        let mut out = vec![Residue::ZERO; (start - from) as usize];
        out.extend(self.unit_digits(skip + (to - start) as usize).into_iter().skip(skip));
        Ok(out)
    }

    fn part(&self, re: u128) -> PadicScalar {
        if self.is_zero() {
            return PadicScalar::from_ext_unchecked(Self::zero(self.ctx));
        }
        PadicScalar::from_ext_unchecked(Self::normalize(self.ctx, self.val, self.prec, re, 0))
    }

    /// `a` in `a + w b`.
    pub fn re_part(&self) -> PadicScalar {
        self.part(self.re)
    }

    /// `b` in `a + w b`.
    pub fn im_part(&self) -> PadicScalar {
        self.part(self.im)
    }

    /// True when the `w`-component vanishes to the known precision.
    pub fn is_in_qp(&self) -> bool {
        self.im_part().is_zero()
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        out.im = self.ctx.mont.neg(self.im);
        out
    }

    /// Norm to Q_p.
    pub fn norm(&self) -> PadicScalar {
        PadicScalar::from_ext_unchecked(*self * self.conj())
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = &self.ctx.mont;
        let n = m.sub(m.mul(self.re, self.re), m.mul(self.ctx.c_mont, m.mul(self.im, self.im)));
        let ninv = self.inv_unit_part(n, self.prec);
        Ok(ExtScalar {
            ctx: self.ctx,
            val: -self.val,
            prec: self.prec,
            re: m.mul(self.re, ninv),
            im: m.neg(m.mul(self.im, ninv)),
        })
    }

    /// Newton inverse of a Q_p unit in Montgomery form.
    fn inv_unit_part(&self, n: u128, prec: u32) -> u128 {
        let m = &self.ctx.mont;
        let p = self.ctx.p() as u64;
        let r0 = mod_small(m.from_mont(n), p as u32) as u64;
        debug_assert!(r0 != 0);
        let mut y = m.to_mont(modpow(r0, p - 2, p) as u128);
        let mut good = 1;
        while good < prec {
            y = m.mul(y, m.sub(self.ctx.two_mont, m.mul(n, y)));
            good *= 2;
        }
        y
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(*self * other.try_inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.try_inv()? } else { *self };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        Ok(acc)
    }

    /// True when `|self - other| <= p^-k`, or the difference vanishes to known precision.
    pub fn agrees_to(&self, other: &Self, k: i32) -> bool {
        let d = *self - *other;
        d.is_zero() || d.val >= k
    }
}


impl Add for ExtScalar {
    type Output = ExtScalar;
    fn add(self, o: ExtScalar) -> ExtScalar {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (a, b) = if self.val <= o.val { (self, o) } else { (o, self) };
        let d = (b.val as i64 - a.val as i64) as u64;
        let rp = (a.prec as u64).min(d + b.prec as u64) as u32;
        if d >= rp as u64 {
            return ExtScalar { prec: rp, ..a };
        }
        let m = &a.ctx.mont;
        let s = a.ctx.pow_mont[d as usize];
        let (re, im) = if d == 0 {
            (m.add(a.re, b.re), m.add(a.im, b.im))
        } else {
            (m.add(a.re, m.mul(b.re, s)), m.add(a.im, m.mul(b.im, s)))
        };
        ExtScalar::normalize(a.ctx, a.val, rp, re, im)
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        let m = &self.ctx.mont;
        ExtScalar { re: m.neg(self.re), im: m.neg(self.im), ..self }
    }
}

impl Sub for ExtScalar {
    type Output = ExtScalar;
    fn sub(self, o: ExtScalar) -> ExtScalar {
        self + (-o)
    }
}

impl Mul for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, o: ExtScalar) -> ExtScalar {
        if self.is_zero() || o.is_zero() {
            return ExtScalar::zero(self.ctx);
        }
        let m = &self.ctx.mont;
        let t1 = m.mul(self.re, o.re);
        let t2 = m.mul(self.im, o.im);
        let t3 = m.mul(m.add(self.re, self.im), m.add(o.re, o.im));
        ExtScalar {
            ctx: self.ctx,
            val: self.val + o.val,
            prec: self.prec.min(o.prec),
            re: m.add(t1, m.mul(self.ctx.c_mont, t2)),
            im: m.sub(m.sub(t3, t1), t2),
        }
    }
}

/// Panics on division by zero; use [`ExtScalar::try_div`] when the divisor may vanish.
impl Div for ExtScalar {
    type Output = ExtScalar;
    fn div(self, o: ExtScalar) -> ExtScalar {
        self.try_div(&o).expect("division by zero")
    }
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        (*self - *other).is_zero()
    }
}

/// Render `sum digit * p^pos` in the literal syntax accepted by the parser.
pub(crate) fn format_expansion(p: u32, low: i32, digits: &[Residue]) -> String {
    let mut terms = Vec::new();
    for (j, d) in digits.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let pos = low + j as i32;
        let coef = match (d.x, d.y) {
            (x, 0) => format!("{x}"),
            (0, 1) => "w".to_string(),
            (0, y) => format!("{y}*w"),
            (x, 1) => format!("({x}+w)"),
            (x, y) => format!("({x}+{y}*w)"),
        };
        let term = match pos {
            0 => coef,
            1 if coef == "1" => format!("{p}"),
            1 => format!("{coef}*{p}"),
            _ if coef == "1" => format!("{p}^{pos}"),
            _ => format!("{coef}*{p}^{pos}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let shown = f.precision().unwrap_or(8).min(self.prec as usize);
        let digits = self.unit_digits(shown);
        write!(
            f,
            "{} + O({}^{})",
            format_expansion(self.ctx.p(), self.val, &digits),
            self.ctx.p(),
            self.val + shown as i32
        )
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.12}", self)
    }
}
