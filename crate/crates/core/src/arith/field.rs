//! Arithmetic in a prime field F_p with p an odd word-size prime.
//!
//! Elements are plain `u32` residues kept canonical in `[0, p)`. Products are
//! formed in `u64` and reduced immediately; bulk kernels that want delayed
//! reduction ask the context for [`FieldCtx::lazy_terms`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 10007;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldCtx {
    p: u32,
}

impl TryFrom<u32> for FieldCtx {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        FieldCtx::new(p as u64)
    }
}

impl From<FieldCtx> for u32 {
    fn from(f: FieldCtx) -> u32 {
        f.p
    }
}

impl Default for FieldCtx {
    fn default() -> Self {
        FieldCtx { p: DEFAULT_PRIME }
    }
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Number of products `(p-1)^2` that fit on top of a reduced value in a `u64`
    /// accumulator before a reduction is required.
    pub fn lazy_terms(&self) -> usize {
        let pm = (self.p - 1) as u128;
        let room = (u64::MAX as u128) - self.p as u128;
        ((room / (pm * pm)).min(1 << 20)) as usize
    }

    #[inline]
    pub fn reduce_i64(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn reduce_u64(&self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// `a + b*c`
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        ((a as u64 + b as u64 * c as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    ///
    /// Panics on zero: callers only invert pivots they have checked.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        self.reduce_i64(t0)
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn from_i64(&self, a: i64) -> u32 {
        self.reduce_i64(a)
    }

    /// Residue as a signed representative in `(-p/2, p/2]`.
    pub fn signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.pow(a, ((self.p - 1) / 2) as u64) == 1
    }

    /// Square root by Tonelli-Shanks; `None` for non-residues.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p as u64;
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = 2u32;
        while self.is_square(z) {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(self.p - r))
    }
}

/// Deterministic Miller-Rabin, exact for all `n < 3.4e14` with these bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(10007) && is_prime(31513) && is_prime(65521));
        assert!(!is_prime(10007 * 31513));
    }

    #[test]
    fn rejects_composites_and_two() {
        assert!(FieldCtx::new(2).is_err());
        assert!(FieldCtx::new(10005).is_err());
        assert!(FieldCtx::new(1 << 31).is_err());
        assert_eq!(FieldCtx::new(10007).unwrap().p(), 10007);
    }

    #[test]
    fn inverse_of_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [10007u64, 31513, 65521, 2147483647] {
            let f = FieldCtx::new(p).unwrap();
            for _ in 0..1000 {
                let a = rng.gen_range(1..f.p());
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn square_roots() {
        let f = FieldCtx::new(10007).unwrap();
        for a in 0..2000u32 {
            match f.sqrt(a) {
                Some(r) => assert_eq!(f.mul(r, r), a),
                None => assert!(!f.is_square(a)),
            }
        }
    }

    #[test]
    fn lazy_terms_bound() {
        let f = FieldCtx::new(65521).unwrap();
        let k = f.lazy_terms() as u128;
        let pm = (f.p() - 1) as u128;
        assert!(k * pm * pm + f.p() as u128 <= u64::MAX as u128);
        let big = FieldCtx::new(2147483647).unwrap();
        assert!(big.lazy_terms() >= 1);
    }
}
