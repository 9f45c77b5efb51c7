//! Exact arithmetic in a prime field F_p, p odd.
//!
//! Elements are plain canonical residues in `[0, p)`; the [`PrimeField`]
//! value carries the modulus and performs every operation. With `p < 2^32`
//! all products fit a `u64` without overflow.

use crate::error::{Error, Result};

/// A canonical residue modulo the field's prime.
pub type Scalar = u64;

/// The outcome of a square-root extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Roots {
    None,
    /// Only for the input 0.
    One(Scalar),
    /// The two roots `r < p - r`.
    Two(Scalar, Scalar),
}

impl Roots {
    pub fn smallest(&self) -> Option<Scalar> {
        match *self {
            Roots::None => None,
            Roots::One(r) | Roots::Two(r, _) => Some(r),
        }
    }

    pub fn to_vec(&self) -> Vec<Scalar> {
        match *self {
            Roots::None => vec![],
            Roots::One(r) => vec![r],
            Roots::Two(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    // Tonelli-Shanks data: p - 1 = q * 2^s with q odd, z the least non-residue.
    q: u64,
    s: u32,
    z: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if p >= 1 << 32 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut f = PrimeField { p, q, s, z: 0 };
        f.z = (2..p)
            .find(|&c| f.legendre(c) == -1)
            .expect("odd prime has a non-residue");
        Ok(f)
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed integer.
    #[inline]
    pub fn elem(&self, x: i64) -> Scalar {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> Scalar {
        x % self.p
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        (a * b) % self.p
    }

    #[inline]
    pub fn square(&self, a: Scalar) -> Scalar {
        self.mul(a, a)
    }

    pub fn pow(&self, mut base: Scalar, mut e: u64) -> Scalar {
        let mut acc = 1 % self.p;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Result<Scalar> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Dot product of two equal-length slices.
    #[inline]
    pub fn dot(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Legendre symbol: 0, 1 or -1.
    pub fn legendre(&self, a: Scalar) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Scalar) -> bool {
        self.legendre(a) >= 0
    }

    /// Square roots by Tonelli-Shanks, smaller root first.
    pub fn sqrt(&self, a: Scalar) -> Roots {
        let a = a % self.p;
        if a == 0 {
            return Roots::One(0);
        }
        if self.legendre(a) != 1 {
            return Roots::None;
        }
        let mut m = self.s;
        let mut c = self.pow(self.z, self.q);
        let mut t = self.pow(a, self.q);
        let mut r = self.pow(a, self.q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.square(t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        let other = self.neg(r);
        Roots::Two(r.min(other), r.max(other))
    }

    /// Lexicographically least `(a, b)` with `a^2 + b^2 = t`.
    pub fn sum_two_squares(&self, t: Scalar) -> (Scalar, Scalar) {
        let t = t % self.p;
        for a in 0..self.p {
            if let Some(b) = self.sqrt(self.sub(t, self.square(a))).smallest() {
                return (a, b);
            }
        }
        unreachable!("every element of F_p, p odd, is a sum of two squares")
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        0..self.p
    }
}
