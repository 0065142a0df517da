//! Exact integer primitives shared by every test in the crate.
//!
//! Values are [`Natural`]s (arbitrary precision). When a modulus fits in a
//! machine word the hot paths drop to `u64`/`u128` arithmetic; results are
//! identical either way.

mod factor;
mod oracle;
mod order;
mod sieve;

pub(crate) use factor::product_of;
pub use factor::{factor, Factorization, PrimePower};
pub use oracle::{
    oracle_is_prime, oracle_is_prime_u64, MR_DETERMINISTIC_BOUND, TRIAL_DIVISION_LIMIT,
};
pub use order::{multiplicative_order, totient};
pub use sieve::{primes_between, primes_in_range, PrimeRange};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

/// Shorthand for building a [`Natural`] from a machine integer.
pub fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// `base^exponent mod modulus`, always in `[0, modulus)`.
///
/// ```
/// use primecert::arith::{mod_pow, nat};
/// assert_eq!(mod_pow(&nat(2), &nat(42), &nat(547)).unwrap(), nat(475));
/// ```
pub fn mod_pow(base: &Natural, exponent: &Natural, modulus: &Natural) -> Result<Natural> {
    if *modulus < nat(2) {
        return Err(Error::ModulusTooSmall(modulus.clone()));
    }
    if let Some(m) = modulus.to_u64() {
        let b = (base % m).to_u64().unwrap_or(0);
        let r = match exponent.to_u64() {
            Some(e) => mod_pow_u64(b, e, m),
            None => mod_pow_u64_big_exp(b, exponent, m),
        };
        return Ok(nat(r));
    }
    Ok(base.modpow(exponent, modulus))
}

/// Word-sized modular exponentiation. `modulus` must be non-zero; a modulus
/// of 1 yields 0.
pub fn mod_pow_u64(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc: u128 = 1;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exponent >>= 1;
    }
    acc as u64
}

fn mod_pow_u64_big_exp(base: u64, exponent: &Natural, modulus: u64) -> u64 {
    let m = modulus as u128;
    let b = (base % modulus) as u128;
    let mut acc: u128 = 1 % m;
    for i in (0..exponent.bits()).rev() {
        acc = acc * acc % m;
        if exponent.bit(i) {
            acc = acc * b % m;
        }
    }
    acc as u64
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn gcd(a: &Natural, b: &Natural) -> Natural {
    a.gcd(b)
}

/// `floor(n^(1/k))`.
///
/// # Panics
///
/// Panics if `k == 0`.
pub fn integer_root(n: &Natural, k: u32) -> Natural {
    assert!(k >= 1, "integer_root: k must be positive");
    n.nth_root(k)
}

/// True when `n = r^k` for some integer `r`.
pub fn is_perfect_power(n: &Natural, k: u32) -> bool {
    let r = integer_root(n, k);
    r.pow(k) == *n
}

/// Exact `p`-adic valuation of `n`; zero for `n == 0` by convention here.
pub fn valuation(n: &Natural, p: &Natural) -> u32 {
    if n.is_zero() || *p <= Natural::one() {
        return 0;
    }
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        rest = q;
        v += 1;
    }
}

/// Parse a decimal string into a [`Natural`].
pub fn parse_natural(s: &str) -> Option<Natural> {
    let s = s.trim().replace('_', "");
    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}
