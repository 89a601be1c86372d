//! Power series on the maximal ideal of K.

use super::ext::ExtScalar;
use crate::error::{Error, Result};

fn ilog(p: u32, n: u64) -> i64 {
    let mut k = 0;
    let mut m = n;
    while m >= p as u64 {
        m /= p as u64;
        k += 1;
    }
    k
}

fn int(x: &ExtScalar, n: i64) -> ExtScalar {
    ExtScalar::from_i64(x.context(), n)
}

fn require_ideal(x: &ExtScalar, name: &'static str) -> Result<i64> {
    match x.valuation() {
        None => Ok(i64::MAX),
        Some(v) if v >= 1 => Ok(v as i64),
        Some(_) => Err(Error::OutOfConvergenceDomain(name)),
    }
}

impl ExtScalar {
    pub fn exp(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let v = require_ideal(self, "exp")?;
        if self.is_zero() {
            return Ok(ExtScalar::one(ctx));
        }
        let target = (ctx.precision() as i64).min(self.abs_precision().unwrap() as i64);
        let pm1 = ctx.p() as i64 - 1;
        let mut acc = ExtScalar::one(ctx);
        let mut term = ExtScalar::one(ctx);
        let mut n = 1i64;
        // v(x^n/n!) >= n v - (n-1)/(p-1), increasing in n
        while (n * v * pm1 - (n - 1)) < target * pm1 {
            term = term * *self / int(self, n);
            acc = acc + term;
            n += 1;
        }
        Ok(acc.with_precision(target as u32))
    }

    pub fn log(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let y = *self - ExtScalar::one(ctx);
        let v = require_ideal(&y, "log")?;
        if y.is_zero() {
            return Ok(ExtScalar::zero(ctx));
        }
        let target = y.abs_precision().unwrap() as i64;
        let mut acc = ExtScalar::zero(ctx);
        let mut power = y;
        let mut n = 1i64;
        while n * v - ilog(ctx.p(), n as u64) < target {
            let term = power / int(self, n);
            acc = if n % 2 == 1 { acc + term } else { acc - term };
            power = power * y;
            n += 1;
        }
        Ok(clamp_abs(acc, target))
    }

    pub fn sin(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let v = require_ideal(self, "sin")?;
        if self.is_zero() {
            return Ok(*self);
        }
        let target = self.abs_precision().unwrap() as i64;
        let pm1 = ctx.p() as i64 - 1;
        let x2 = *self * *self;
        let mut term = *self;
        let mut acc = term;
        let mut k = 1i64;
        while ((2 * k + 1) * v * pm1 - 2 * k) < target * pm1 {
            term = -(term * x2) / int(self, (2 * k) * (2 * k + 1));
            acc = acc + term;
            k += 1;
        }
        Ok(clamp_abs(acc, target))
    }

    pub fn cos(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let v = require_ideal(self, "cos")?;
        if self.is_zero() {
            return Ok(ExtScalar::one(ctx));
        }
        let target = (ctx.precision() as i64).min(self.abs_precision().unwrap() as i64);
        let pm1 = ctx.p() as i64 - 1;
        let x2 = *self * *self;
        let mut term = ExtScalar::one(ctx);
        let mut acc = term;
        let mut k = 1i64;
        while ((2 * k) * v * pm1 - (2 * k - 1)) < target * pm1 {
            term = -(term * x2) / int(self, (2 * k - 1) * (2 * k));
            acc = acc + term;
            k += 1;
        }
        Ok(clamp_abs(acc, target))
    }

    pub fn arcsin(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let v = require_ideal(self, "arcsin")?;
        if self.is_zero() {
            return Ok(*self);
        }
        let target = self.abs_precision().unwrap() as i64;
        let y2 = *self * *self;
        let mut term = *self;
        let mut acc = term;
        let mut n = 0i64;
        loop {
            // t_{n+1} = t_n y^2 (2n+1)^2 / ((2n+2)(2n+3))
            let m = n + 1;
            if (2 * m + 1) * v - ilog(ctx.p(), (2 * m + 1) as u64) >= target {
                break;
            }
            term = term * y2 * int(self, (2 * n + 1) * (2 * n + 1)) / int(self, (2 * n + 2) * (2 * n + 3));
            acc = acc + term;
            n = m;
        }
        Ok(clamp_abs(acc, target))
    }
}

fn clamp_abs(x: ExtScalar, target: i64) -> ExtScalar {
    match x.valuation() {
        None => x,
        Some(v) if (v as i64) < target => x.with_precision((target - v as i64) as u32),
        Some(_) => ExtScalar::zero(x.context()),
    }
}
