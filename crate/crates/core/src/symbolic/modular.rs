//! Residues of run-length numerals.
//!
//! A numeral is folded from its top run down: `acc <- acc * b^c + d * R(c)`
//! where `R(c) = (b^c - 1) / (b - 1)` is the repunit of length `c`. When `c` is
//! itself symbolic both factors are computed one prime power at a time, with the
//! exponent reduced modulo the group order, and glued back together by CRT.

use super::{Sym, TowerNat};
use crate::numtheory::{crt_solve, factorize, mod_inverse, mod_pow, mul_mod};
use crate::{Error, Result};

/// `R(c) mod m` for the base-`b` repunit of length `c`, by affine doubling.
pub fn repunit_mod_small(b: u64, c: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    // (r, p) = (R(k), b^k mod m) for the prefix k of c's bits processed so far.
    let bm = b % m;
    let (mut r, mut p) = (0u64, 1u64);
    for bit in (0..64 - c.leading_zeros()).rev() {
        // k -> 2k
        r = mul_mod(r, (1 + p) % m, m);
        p = mul_mod(p, p, m);
        if (c >> bit) & 1 == 1 {
            // k -> k + 1
            r = (mul_mod(r, bm, m) + 1) % m;
            p = mul_mod(p, bm, m);
        }
    }
    r
}

fn pow_checked(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .ok_or_else(|| Error::TooLarge(format!("modulus {p}^{k} overflows a machine word")))
}

impl Sym {
    /// `t mod m` for `m >= 1`.
    pub fn modulo(&self, t: &TowerNat, m: u64) -> Result<u64> {
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if let TowerNat::Small(n) = t {
            return Ok(n % m);
        }
        self.check_depth(t)?;
        let mut acc = 0u64;
        for (d, c) in self.runs_of(t)?.into_iter().rev() {
            let shift = self.base_pow_mod(&c, m)?;
            acc = mul_mod(acc, shift, m);
            if d != 0 {
                let rep = self.repunit_mod(&c, m)?;
                acc = (acc + mul_mod(d % m, rep, m)) % m;
            }
        }
        Ok(acc)
    }

    /// `b^k mod m`.
    pub fn base_pow_mod(&self, k: &TowerNat, m: u64) -> Result<u64> {
        if m == 1 {
            return Ok(0);
        }
        if let TowerNat::Small(k) = k {
            return Ok(mod_pow(self.base, *k, m));
        }
        let mut parts = Vec::new();
        for (p, a) in factorize(m).factors {
            let q = pow_checked(p, a)?;
            parts.push((self.base_pow_mod_prime_power(k, p, a)?, q));
        }
        Ok(crt_solve(&parts)?.0)
    }

    /// `b^k mod p^a` for a symbolic `k` (which is then larger than any `a`).
    fn base_pow_mod_prime_power(&self, k: &TowerNat, p: u64, a: u32) -> Result<u64> {
        let q = pow_checked(p, a)?;
        if self.base.is_multiple_of(p) {
            return Ok(match k {
                TowerNat::Small(k) => mod_pow(self.base, *k, q),
                TowerNat::Runs(_) => 0,
            });
        }
        let order = q / p * (p - 1);
        let reduced = self.modulo(k, order)?;
        Ok(mod_pow(self.base, reduced, q))
    }

    /// `R(c) mod m` for the repunit of length `c`.
    pub fn repunit_mod(&self, c: &TowerNat, m: u64) -> Result<u64> {
        if m == 1 {
            return Ok(0);
        }
        if let TowerNat::Small(c) = c {
            return Ok(repunit_mod_small(self.base, *c, m));
        }
        let b = self.base;
        let mut parts = Vec::new();
        for (p, a) in factorize(m).factors {
            let q = pow_checked(p, a)?;
            let r = if b.is_multiple_of(p) {
                // b^c vanishes mod p^a, so R(c) = -1/(b-1).
                let inv = mod_inverse((b - 1) % q, q).expect("b - 1 is a unit");
                (q - inv) % q
            } else if !(b - 1).is_multiple_of(p) {
                let x = self.base_pow_mod_prime_power(c, p, a)?;
                let inv = mod_inverse((b - 1) % q, q).expect("b - 1 is a unit");
                mul_mod((x + q - 1) % q, inv, q)
            } else {
                let mut beta = 0u32;
                let mut u = b - 1;
                while u.is_multiple_of(p) {
                    u /= p;
                    beta += 1;
                }
                let wide = pow_checked(p, a + beta)?;
                let x = self.base_pow_mod_prime_power(c, p, a + beta)?;
                let head = ((x + wide - 1) % wide) / pow_checked(p, beta)?;
                let inv = mod_inverse(u % q, q).expect("cofactor is a unit");
                mul_mod(head % q, inv, q)
            };
            parts.push((r, q));
        }
        Ok(crt_solve(&parts)?.0)
    }
}
