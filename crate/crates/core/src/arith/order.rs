use num_traits::One;

use super::{factor, gcd, mod_pow, nat, Factorization, Natural};
use crate::error::{Error, Result};

/// Euler's totient of the factorization's target, by the product formula.
pub fn totient(f: &Factorization) -> Natural {
    f.factors().iter().fold(Natural::one(), |acc, pp| {
        acc * pp.prime.pow(pp.exponent - 1) * (&pp.prime - 1u32)
    })
}

/// Least `x >= 1` with `a^x = 1 (mod n)`.
///
/// Starts from `phi(n)` and strips prime factors while the power stays 1.
pub fn multiplicative_order(a: &Natural, n: &Natural) -> Result<Natural> {
    if *n < nat(2) {
        return Err(Error::ModulusTooSmall(n.clone()));
    }
    if !gcd(a, n).is_one() {
        return Err(Error::NotCoprime {
            value: a.clone(),
            modulus: n.clone(),
        });
    }
    let phi = totient(&factor(n));
    let mut order = phi.clone();
    for pp in factor(&phi).factors() {
        for _ in 0..pp.exponent {
            let candidate = &order / &pp.prime;
            if mod_pow(a, &candidate, n)?.is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}
