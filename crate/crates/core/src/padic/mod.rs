//! p-adic scalars over Q_p and its unramified quadratic extension.

mod context;
mod ext;
mod literal;
mod montgomery;
mod polar;
mod residue;
mod roots;
mod scalar;
mod series;

pub use context::{ExtContext, DEFAULT_PRECISION, MIN_SIGNIFICANT};
pub use ext::ExtScalar;
pub(crate) use ext::format_expansion;
pub use literal::parse_scalar;
pub use polar::{density_check, polar_decompose, DensityWitness, UnitDecomposition};
pub use residue::{Residue, ResidueField};
pub use scalar::PadicScalar;

/// Binary operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: fails on division by zero and on results left with
/// fewer than [`MIN_SIGNIFICANT`] digits.
pub fn arith(x: ExtScalar, y: ExtScalar, op: ArithOp) -> crate::Result<ExtScalar> {
    let r = match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.try_div(&y)?,
    };
    r.checked()
}
