//! Small-modulus number theory: factorization, totients, primitive roots,
//! discrete logarithms, CRT and the power congruence solver used to lift
//! residue witnesses.
//!
//! Everything here works on machine words with `u128` intermediates. Moduli in
//! the witness constructions are powers of `b - 1` for desk-scale bases, so
//! trial division and baby-step giant-step are more than fast enough.

use std::collections::HashMap;

use crate::{Error, Result};

/// A natural number together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredModulus {
    pub n: u64,
    /// `(prime, multiplicity)` pairs in increasing prime order.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredModulus {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The prime-power components `p^a`.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, a)| p.pow(a)).collect()
    }
}

/// Trial-division factorization. `factorize(1)` has no factors.
pub fn factorize(n: u64) -> FactoredModulus {
    assert!(n >= 1, "factorize(0)");
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut a = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                a += 1;
            }
            factors.push((p, a));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    FactoredModulus { n, factors }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).factors == [(n, 1)]
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, a)| (p - 1) * p.pow(a - 1))
        .product()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square-and-multiply.
pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m >= 1, "modulus must be positive");
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut acc = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, acc, m);
        }
        acc = mul_mod(acc, acc, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) != 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    let mut order = euler_phi(m);
    for (q, _) in factorize(order).factors {
        while order.is_multiple_of(q) && mod_pow(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Some(order)
}

/// Least primitive root of `p^k` for an odd prime `p`.
pub fn primitive_root(p: u64, k: u32) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument(
            "multiplicity must be at least 1".into(),
        ));
    }
    let m = p
        .checked_pow(k)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{k} overflows")))?;
    let phi = (p - 1) * p.pow(k - 1);
    let divisors: Vec<u64> = factorize(phi).primes().collect();
    (2..m)
        .find(|&g| g % p != 0 && divisors.iter().all(|&q| mod_pow(g, phi / q, m) != 1))
        .ok_or_else(|| Error::InvalidArgument(format!("no primitive root modulo {m}")))
}

/// Least `t >= 0` with `g^t = a (mod modulus)`, where `g` generates the unit
/// group modulo the odd prime power `modulus`. Baby-step giant-step.
pub fn discrete_log(g: u64, a: u64, modulus: u64) -> Result<u64> {
    let a = a % modulus;
    if modulus == 1 {
        return Ok(0);
    }
    if gcd(a, modulus) != 1 {
        return Err(Error::InvalidArgument(format!(
            "{a} is not a unit modulo {modulus}"
        )));
    }
    let order = euler_phi(modulus);
    let step = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = 1u64;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, modulus);
    }
    // g^{-step}
    let giant = mod_inverse(mod_pow(g, step, modulus), modulus)
        .ok_or_else(|| Error::InvalidArgument(format!("{g} is not a unit modulo {modulus}")))?;
    let mut gamma = a;
    for i in 0..=step {
        if let Some(&j) = baby.get(&gamma) {
            return Ok(i * step + j);
        }
        gamma = mul_mod(gamma, giant, modulus);
    }
    Err(Error::InvalidArgument(format!(
        "{a} is not a power of {g} modulo {modulus}"
    )))
}

/// Least non-negative `x` with `x = r_i (mod m_i)` for pairwise coprime moduli.
/// Returns `(x, product of moduli)`.
pub fn crt_solve(congruences: &[(u64, u64)]) -> Result<(u64, u64)> {
    let mut x: u64 = 0;
    let mut modulus: u64 = 1;
    for &(r, m) in congruences {
        if m == 0 {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        if gcd(modulus, m) != 1 {
            return Err(Error::InvalidArgument(format!(
                "moduli {modulus} and {m} are not coprime"
            )));
        }
        let combined = modulus
            .checked_mul(m)
            .ok_or_else(|| Error::TooLarge("CRT modulus overflows".into()))?;
        // x + modulus * t = r (mod m)
        let inv = mod_inverse(modulus % m, m).expect("coprime");
        let diff = (r % m + m - x % m) % m;
        let t = mul_mod(diff, inv, m);
        x = ((x as u128 + modulus as u128 * t as u128) % combined as u128) as u64;
        modulus = combined;
    }
    Ok((x, modulus))
}

/// Solves `(n+1)^r = a (mod n^k)` for odd `n >= 3` and `a = 1 (mod n)`.
///
/// Per odd prime power `p^a || n` the discrete logs of `n+1` and of the target
/// modulo `p^{ak}` are both multiples of `phi(p^a)`; after dividing them out the
/// coefficient of `r` is a unit modulo `p^{a(k-1)}`, and the per-prime answers
/// are glued with CRT. The returned `r` is positive; any valid `r` satisfies the
/// contract, this one is the least the construction yields.
pub fn successor_power_log(n: u64, a: u64, k: u32) -> Result<u64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} must be odd and at least 3"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if a % n != 1 {
        return Err(Error::InvalidArgument(format!("{a} is not 1 modulo {n}")));
    }
    let nk = n
        .checked_pow(k)
        .ok_or_else(|| Error::TooLarge(format!("{n}^{k} overflows")))?;
    let mut congruences = Vec::new();
    for (p, alpha) in factorize(n).factors {
        let q = p.pow(alpha * k);
        let g = primitive_root(p, alpha * k)?;
        let beta = discrete_log(g, (n + 1) % q, q)?;
        let gamma = discrete_log(g, a % q, q)?;
        let phi_small = (p - 1) * p.pow(alpha - 1);
        debug_assert!(beta % phi_small == 0 && gamma % phi_small == 0);
        let sub_mod = p.pow(alpha * (k - 1));
        let coeff = (beta / phi_small) % sub_mod;
        let rhs = (gamma / phi_small) % sub_mod;
        let r_i = if sub_mod == 1 {
            0
        } else {
            let inv = mod_inverse(coeff, sub_mod).ok_or_else(|| {
                Error::InvalidArgument(format!("log coefficient not invertible mod {sub_mod}"))
            })?;
            mul_mod(rhs, inv, sub_mod)
        };
        congruences.push((r_i, sub_mod));
    }
    let (r, period) = crt_solve(&congruences)?;
    let r = if r == 0 { period } else { r };
    debug_assert_eq!(mod_pow(n + 1, r, nk), a % nk);
    Ok(r)
}
