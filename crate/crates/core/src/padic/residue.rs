//! The residue field F_{p^2} = F_p(w), w^2 = c.

use serde::{Deserialize, Serialize};

/// Residue `x + w*y`. Row-major index is `x*p + y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    pub x: u32,
    pub y: u32,
}

impl Residue {
    pub const ZERO: Residue = Residue { x: 0, y: 0 };
    pub const ONE: Residue = Residue { x: 1, y: 0 };

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u32,
    pub c: u32,
}

impl ResidueField {
    pub fn new(p: u32, c: i64) -> Self {
        let c = c.rem_euclid(p as i64) as u32;
        ResidueField { p, c }
    }

    pub fn size(&self) -> u64 {
        self.p as u64 * self.p as u64
    }

    pub fn index(&self, r: Residue) -> u32 {
        r.x * self.p + r.y
    }

    pub fn from_index(&self, i: u32) -> Residue {
        Residue { x: i / self.p, y: i % self.p }
    }

    pub fn elements(&self) -> impl Iterator<Item = Residue> + '_ {
        (0..self.p * self.p).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        Residue { x: (a.x + b.x) % self.p, y: (a.y + b.y) % self.p }
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        Residue { x: (a.x + self.p - b.x) % self.p, y: (a.y + self.p - b.y) % self.p }
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        let p = self.p as u64;
        let (ax, ay, bx, by) = (a.x as u64, a.y as u64, b.x as u64, b.y as u64);
        let x = (ax * bx + (self.c as u64) * (ay * by % p)) % p;
        let y = (ax * by + ay * bx) % p;
        Residue { x: x as u32, y: y as u32 }
    }

    pub fn pow(&self, mut a: Residue, mut e: u64) -> Residue {
        let mut acc = Residue::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Residue) -> Option<Residue> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.size() - 2))
        }
    }

    pub fn is_square(&self, a: Residue) -> bool {
        a.is_zero() || self.pow(a, (self.size() - 1) / 2) == Residue::ONE
    }

    /// Square root with the smallest row-major index.
    pub fn sqrt(&self, a: Residue) -> Option<Residue> {
        if !self.is_square(a) {
            return None;
        }
        self.elements().find(|&r| self.mul(r, r) == a)
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(&self, a: Residue) -> u64 {
        assert!(!a.is_zero());
        let n = self.size() - 1;
        let mut ord = n;
        for q in prime_factors(n) {
            while ord % q == 0 && self.pow(a, ord / q) == Residue::ONE {
                ord /= q;
            }
        }
        ord
    }

    /// First element of order q-1 in row-major order.
    pub fn first_generator(&self) -> Residue {
        let n = self.size() - 1;
        self.elements().find(|&r| !r.is_zero() && self.order(r) == n).expect("cyclic group")
    }

    pub fn is_fp_square(&self, a: u32) -> bool {
        let a = a % self.p;
        a == 0 || modpow(a as u64, (self.p as u64 - 1) / 2, self.p as u64) == 1
    }
}

pub(crate) fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u32) -> bool {
    n >= 2 && prime_factors(n as u64) == vec![n as u64]
}
