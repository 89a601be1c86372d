//! Square roots and Teichmuller lifts.

use super::ext::ExtScalar;
use crate::error::{Error, Result};

impl ExtScalar {
    /// Square root by Hensel lifting. The branch is the one whose residue has
    /// the smaller row-major index.
    pub fn sqrt(&self) -> Result<ExtScalar> {
        let ctx = self.context();
        let v = match self.valuation() {
            None => return Ok(*self),
            Some(v) => v,
        };
        if v.rem_euclid(2) == 1 {
            return Err(Error::OddValuation);
        }
        let field = ctx.residue_field();
        let root = field.sqrt(self.unit_residue()).ok_or(Error::NotASquare)?;
        let u = self.shift(-v);
        let half = ExtScalar::from_ratio(ctx, 1, 2)?;
        let mut s = ExtScalar::from_residue(ctx, root).with_precision(u.precision());
        let mut good = 1;
        while good < u.precision() {
            s = (s + u.try_div(&s)?) * half;
            good *= 2;
        }
        Ok(s.shift(v / 2))
    }

    /// The root of unity of order prime to p congruent to this unit.
    pub fn teichmuller(&self) -> Result<ExtScalar> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let ctx = self.context();
        let q = ctx.residue_size() as i64;
        let mut y = ExtScalar::from_residue(ctx, self.unit_residue());
        for _ in 0..=ctx.precision() {
            let next = y.pow(q)?;
            if next == y {
                return Ok(next);
            }
            y = next;
        }
        Ok(y)
    }

    /// Order of the Teichmuller representative of this unit.
    pub fn teichmuller_order(&self) -> Result<u64> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(self.context().residue_field().order(self.unit_residue()))
    }
}
