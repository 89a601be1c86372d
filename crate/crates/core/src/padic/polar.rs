//! Polar decomposition `a = r * zeta * exp(i w_p theta)` of units of K.

use serde::Serialize;

use super::ext::ExtScalar;
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct UnitDecomposition {
    /// Modulus in `1 + pZ_p`.
    pub r: PadicScalar,
    /// Root of unity of order prime to p.
    pub zeta: ExtScalar,
    /// Angle in `pZ_p`.
    pub theta: PadicScalar,
    pub zeta_order: u64,
}

impl UnitDecomposition {
    pub fn recompose(&self) -> Result<ExtScalar> {
        let ctx = self.zeta.context();
        let phase = (ctx.i_value() * ctx.omega_p() * self.theta.to_ext()).exp()?;
        Ok(self.r.to_ext() * self.zeta * phase)
    }
}

pub fn polar_decompose(a: &ExtScalar) -> Result<UnitDecomposition> {
    if !a.is_unit() {
        return Err(Error::NotAUnit);
    }
    let ctx = a.context();
    let zeta = a.teichmuller()?;
    let zeta_order = a.teichmuller_order()?;
    let s = a.try_div(&zeta)?;
    let n = s * s.conj();
    let r = n.sqrt()?;
    let q = s.try_div(&r)?;
    let angle = q.log()?.try_div(&(ctx.i_value() * ctx.omega_p()))?;
    if !angle.is_in_qp() {
        return Err(Error::PrecisionExhausted("angle has a w-component".into()));
    }
    let r = PadicScalar::from_ext(r)?;
    let theta = PadicScalar::from_ext(angle)?;
    Ok(UnitDecomposition { r, zeta, theta, zeta_order })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityWitness {
    pub dense: bool,
    pub zeta_order: u64,
    pub required_order: u64,
    /// `None` when the angle vanishes.
    pub theta_valuation: Option<i32>,
    pub theta: String,
    pub zeta: String,
    pub r: String,
}

/// Whether `{a^n}` is dense in the unit circle of K: `zeta` generates the
/// roots of unity and the angle has valuation exactly one.
pub fn density_check(a: &ExtScalar) -> Result<DensityWitness> {
    let d = polar_decompose(a)?;
    let q = a.context().residue_size();
    let tv = d.theta.valuation();
    Ok(DensityWitness {
        dense: d.zeta_order == q - 1 && tv == Some(1),
        zeta_order: d.zeta_order,
        required_order: q - 1,
        theta_valuation: tv,
        theta: format!("{:.6}", d.theta),
        zeta: format!("{:.6}", d.zeta),
        r: format!("{:.6}", d.r),
    })
}
