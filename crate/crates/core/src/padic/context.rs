use std::sync::{Mutex, OnceLock};

use super::ext::ExtScalar;
use super::montgomery::Montgomery;
use super::residue::{is_prime, ResidueField};
use crate::error::{Error, Result};

/// Default number of p-adic digits carried by every scalar.
pub const DEFAULT_PRECISION: u32 = 48;
/// Nonzero results with fewer significant digits than this are rejected.
pub const MIN_SIGNIFICANT: u32 = 4;

/// Arithmetic context for K = Q_p(w), w^2 = c. Contexts are interned and live
/// for the whole process, so scalars can hold a `&'static` reference.
pub struct ExtContext {
    p: u32,
    c: i64,
    precision: u32,
    pub(crate) mont: Montgomery,
    pub(crate) pow_mont: Vec<u128>,
    pub(crate) c_mont: u128,
    pub(crate) two_mont: u128,
    residue: ResidueField,
    omega_p_is_one: bool,
    i_cache: OnceLock<ExtScalar>,
    phi_cache: OnceLock<ExtScalar>,
}

impl std::fmt::Debug for ExtContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExtContext(p={}, c={}, N={})", self.p, self.c, self.precision)
    }
}

static REGISTRY: Mutex<Vec<&'static ExtContext>> = Mutex::new(Vec::new());

impl ExtContext {
    /// Look up or build the context for `p`, `w^2 = c` and `precision` digits.
    pub fn new(p: u32, c: i64, precision: u32) -> Result<&'static ExtContext> {
        let mut reg = REGISTRY.lock().expect("context registry poisoned");
        if let Some(ctx) = reg.iter().find(|k| k.p == p && k.c == c && k.precision == precision) {
            return Ok(ctx);
        }
        let ctx = Self::build(p, c, precision)?;
        let leaked: &'static ExtContext = Box::leak(Box::new(ctx));
        reg.push(leaked);
        Ok(leaked)
    }

    pub fn with_default_precision(p: u32, c: i64) -> Result<&'static ExtContext> {
        Self::new(p, c, DEFAULT_PRECISION)
    }

    /// The context for a monic quadratic `t^2 + b t + d`, completed to `w^2 = b^2 - 4d`.
    pub fn from_monic_quadratic(p: u32, b: i64, d: i64, precision: u32) -> Result<&'static ExtContext> {
        let c = b
            .checked_mul(b)
            .and_then(|bb| d.checked_mul(4).and_then(|dd| bb.checked_sub(dd)))
            .ok_or_else(|| Error::InvalidContext("quadratic coefficients overflow".into()))?;
        Self::new(p, c, precision)
    }

    fn build(p: u32, c: i64, precision: u32) -> Result<ExtContext> {
        if p == 2 || !is_prime(p) || p >= 1 << 12 {
            return Err(Error::InvalidContext(format!("p = {p} must be an odd prime below 4096")));
        }
        let residue = ResidueField::new(p, c);
        if residue.c == 0 || residue.is_fp_square(residue.c) {
            return Err(Error::InvalidContext(format!("c = {c} is not a non-square unit mod {p}")));
        }
        if precision < 2 * MIN_SIGNIFICANT {
            return Err(Error::InvalidContext(format!("precision {precision} is below {}", 2 * MIN_SIGNIFICANT)));
        }
        let mut pow_plain = vec![1u128];
        for k in 1..=precision {
            let prev = pow_plain[k as usize - 1];
            match prev.checked_mul(p as u128) {
                Some(v) if v < 1u128 << 127 => pow_plain.push(v),
                _ => {
                    return Err(Error::InvalidContext(format!(
                        "{p}^{precision} does not fit below 2^127; at most {} digits",
                        k - 1
                    )))
                }
            }
        }
        let modulus = pow_plain[precision as usize];
        let mont = Montgomery::new(modulus);
        let pow_mont = (0..precision as usize).map(|k| mont.to_mont(pow_plain[k])).collect();
        let c_mont = mont.to_mont((c as i128).rem_euclid(modulus as i128) as u128);
        let two_mont = mont.to_mont(2);
        // w*i lies in Q_p exactly when -c is a square, i.e. when -1 is not.
        let omega_p_is_one = residue.is_fp_square((p as i64 - residue.c as i64) as u32);
        Ok(ExtContext {
            p,
            c,
            precision,
            mont,
            pow_mont,
            c_mont,
            two_mont,
            residue,
            omega_p_is_one,
            i_cache: OnceLock::new(),
            phi_cache: OnceLock::new(),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue_field(&self) -> ResidueField {
        self.residue
    }

    pub fn residue_size(&self) -> u64 {
        self.residue.size()
    }

    /// True when `w_p = 1`, false when `w_p = w`.
    pub fn omega_p_is_one(&self) -> bool {
        self.omega_p_is_one
    }

    /// Same field at a different precision.
    pub fn at_precision(&self, precision: u32) -> Result<&'static ExtContext> {
        Self::new(self.p, self.c, precision)
    }

    /// A fixed square root of -1 in K.
    pub fn i_value(&'static self) -> ExtScalar {
        *self.i_cache.get_or_init(|| {
            let minus_one = ExtScalar::from_i64(self, -1);
            if self.omega_p_is_one {
                // i = w * a with a^2 = -1/c in Q_p
                let a2 = minus_one.try_div(&ExtScalar::from_i64(self, self.c)).expect("c is a unit");
                let a = a2.sqrt().expect("-1/c is a square when -c is");
                ExtScalar::omega(self) * a
            } else {
                minus_one.sqrt().expect("-1 is a square when -c is not")
            }
        })
    }

    /// `w_p`: 1 or w, chosen so that `i * w_p` lies in `w Q_p`.
    pub fn omega_p(&'static self) -> ExtScalar {
        if self.omega_p_is_one {
            ExtScalar::one(self)
        } else {
            ExtScalar::omega(self)
        }
    }

    /// Teichmuller lift of the first generator of the residue field's unit group.
    pub fn phi(&'static self) -> ExtScalar {
        *self.phi_cache.get_or_init(|| {
            let g = self.residue.first_generator();
            ExtScalar::from_residue(self, g).teichmuller().expect("generator is a unit")
        })
    }
}
