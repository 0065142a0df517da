//! Trusted primality baseline.
//!
//! Below [`TRIAL_DIVISION_LIMIT`] the verdict comes from trial division.
//! Between that and 3.3e24 it comes from Miller-Rabin over the first thirteen
//! prime bases, a set proven to admit no strong pseudoprime in that range, so
//! the answer is still exact. Anything larger falls back to trial division,
//! which is exact and correspondingly slow.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{mod_pow_u64, mul_mod_u64, nat, Natural};

/// Trial division is used for every `n` below this bound.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000_000_000;

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Smallest strong pseudoprime to all of the Miller-Rabin bases used. Below
/// it the oracle answers without trial division past [`TRIAL_DIVISION_LIMIT`].
pub const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

pub fn oracle_is_prime(n: &Natural) -> bool {
    if let Some(v) = n.to_u64() {
        return oracle_is_prime_u64(v);
    }
    if let Some(v) = n.to_u128() {
        if v < MR_DETERMINISTIC_BOUND {
            return strong_probable_prime_all(n);
        }
    }
    trial_division_big(n)
}

pub fn oracle_is_prime_u64(n: u64) -> bool {
    if n < TRIAL_DIVISION_LIMIT {
        trial_division_u64(n)
    } else {
        miller_rabin_u64(n)
    }
}

fn trial_division_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &MR_BASES {
        let mut x = mod_pow_u64(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime_all(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let b = nat(b);
        if (n % &b).is_zero() {
            return *n == b;
        }
        let mut x = b.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn trial_division_big(n: &BigUint) -> bool {
    if n.is_even() {
        return false;
    }
    let mut d = nat(3);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 2u32;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(oracle_is_prime(&nat(547)));
        assert!(!oracle_is_prime(&nat(1)));
        assert!(!oracle_is_prime(&nat(0)));
        assert!(!oracle_is_prime(&nat(341)));
        assert!(oracle_is_prime(&nat(2)));
        assert!(oracle_is_prime(&nat(7867)));
    }

    #[test]
    fn agrees_with_sieve_below_100k() {
        let limit = 100_000usize;
        let mut composite = vec![false; limit + 1];
        composite[0] = true;
        composite[1] = true;
        for i in 2..=limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        for (n, &c) in composite.iter().enumerate() {
            assert_eq!(oracle_is_prime_u64(n as u64), !c, "n = {n}");
        }
    }

    #[test]
    fn word_paths_agree_above_trial_limit() {
        // primes and composites straddling the trial-division limit
        for n in TRIAL_DIVISION_LIMIT - 200..TRIAL_DIVISION_LIMIT + 200 {
            assert_eq!(trial_division_u64(n), miller_rabin_u64(n), "n = {n}");
        }
    }

    #[test]
    fn large_values() {
        // 2^61 - 1 and 2^89 - 1 are Mersenne primes.
        assert!(oracle_is_prime_u64((1u64 << 61) - 1));
        let m89 = (Natural::one() << 89u32) - 1u32;
        // largest prime below 2^80
        let p80 = (Natural::one() << 80u32) - 65u32;
        assert!(oracle_is_prime(&p80));
        assert!(!oracle_is_prime(&(&p80 - 2u32)));
        // semiprime above 2^64, inside the deterministic Miller-Rabin range
        let semi = nat((1u64 << 61) - 1) * nat(1_000_003);
        assert!(!oracle_is_prime(&semi));
        // above that range: trial division finds the factor 3 at once
        assert!(!oracle_is_prime(&(m89 * 3u32)));
        // 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7
        assert!(!miller_rabin_u64(3_215_031_751));
    }
}
