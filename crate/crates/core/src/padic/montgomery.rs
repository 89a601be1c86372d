//! Montgomery multiplication modulo an odd modulus below 2^127, with R = 2^128.

#[derive(Debug, Clone)]
pub(crate) struct Montgomery {
    pub(crate) modulus: u128,
    neg_inv: u128,
    r2: u128,
    pub(crate) one: u128,
}

#[inline(always)]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (lo, hi)
}

impl Montgomery {
    pub(crate) fn new(modulus: u128) -> Self {
        assert!(modulus % 2 == 1 && modulus < (1u128 << 127) && modulus > 1);
        // Newton iteration for the inverse modulo 2^128; m*m = 1 mod 8 seeds 3 bits.
        let mut inv = modulus;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(modulus.wrapping_mul(inv)));
        }
        debug_assert_eq!(inv.wrapping_mul(modulus), 1);
        let r = (u128::MAX % modulus + 1) % modulus;
        let mut r2 = r;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= modulus {
                r2 -= modulus;
            }
        }
        Montgomery { modulus, neg_inv: inv.wrapping_neg(), r2, one: r }
    }

    #[inline(always)]
    fn redc(&self, lo: u128, hi: u128) -> u128 {
        let u = lo.wrapping_mul(self.neg_inv);
        let (ulo, uhi) = mul_wide(u, self.modulus);
        let (_, carry) = lo.overflowing_add(ulo);
        let t = hi + uhi + carry as u128;
        if t >= self.modulus {
            t - self.modulus
        } else {
            t
        }
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        let (lo, hi) = mul_wide(a, b);
        self.redc(lo, hi)
    }

    #[inline(always)]
    pub(crate) fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline(always)]
    pub(crate) fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.modulus - b)
        }
    }

    #[inline(always)]
    pub(crate) fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub(crate) fn to_mont(&self, x: u128) -> u128 {
        self.mul(x % self.modulus, self.r2)
    }

    pub(crate) fn from_mont(&self, x: u128) -> u128 {
        self.redc(x, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_mulmod(a: u128, b: u128, m: u128) -> u128 {
        // double-and-add, safe because m < 2^127
        let (mut acc, mut a, mut b) = (0u128, a % m, b);
        while b > 0 {
            if b & 1 == 1 {
                acc = (acc + a) % m;
            }
            a = (a << 1) % m;
            b >>= 1;
        }
        acc
    }

    proptest! {
        #[test]
        fn matches_naive(a in any::<u128>(), b in any::<u128>(), e in 1u32..=80) {
            let m = 3u128.pow(e);
            let mont = Montgomery::new(m);
            let (a, b) = (a % m, b % m);
            let prod = mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)));
            prop_assert_eq!(prod, naive_mulmod(a, b, m));
            prop_assert_eq!(mont.from_mont(mont.to_mont(a)), a);
        }
    }
}
