use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{gcd, mul_mod_u64, nat, oracle_is_prime, oracle_is_prime_u64, Natural};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::natser")]
    pub prime: Natural,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: impl Into<Natural>, exponent: u32) -> Self {
        PrimePower {
            prime: prime.into(),
            exponent,
        }
    }

    pub fn value(&self) -> Natural {
        self.prime.pow(self.exponent)
    }
}

/// Complete prime factorization of `target`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::natser")]
    target: Natural,
    factors: Vec<PrimePower>,
}

impl Factorization {
    /// Validates and builds a factorization. Primes are checked with the
    /// oracle; order is normalized.
    pub fn new(target: Natural, mut factors: Vec<PrimePower>) -> Result<Self> {
        factors.sort_by(|a, b| a.prime.cmp(&b.prime));
        for w in factors.windows(2) {
            if w[0].prime == w[1].prime {
                return Err(Error::Invariant(format!(
                    "prime {} listed twice in factorization",
                    w[0].prime
                )));
            }
        }
        for f in &factors {
            if f.exponent == 0 {
                return Err(Error::Invariant(format!("zero exponent on {}", f.prime)));
            }
            if !oracle_is_prime(&f.prime) {
                return Err(Error::NotPrime(f.prime.clone()));
            }
        }
        let product = product_of(&factors);
        if product != target {
            return Err(Error::FactorizationMismatch {
                product,
                expected: target,
            });
        }
        Ok(Factorization { target, factors })
    }

    pub fn from_pairs(target: u64, pairs: &[(u64, u32)]) -> Result<Self> {
        Self::new(
            nat(target),
            pairs.iter().map(|&(p, e)| PrimePower::new(p, e)).collect(),
        )
    }

    pub fn target(&self) -> &Natural {
        &self.target
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> {
        self.factors.iter().map(|f| &f.prime)
    }

    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.factors
            .iter()
            .find(|f| f.prime == *p)
            .map_or(0, |f| f.exponent)
    }

    pub fn least_prime(&self) -> Option<&Natural> {
        self.factors.first().map(|f| &f.prime)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<Natural> {
        let mut divs = vec![Natural::one()];
        for f in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (f.exponent as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..f.exponent {
                    pk *= &f.prime;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }
}

pub(crate) fn product_of(factors: &[PrimePower]) -> Natural {
    factors
        .iter()
        .fold(Natural::one(), |acc, f| acc * f.value())
}

/// Complete prime factorization of `n`.
///
/// Trial division by small primes, then Brent's variant of Pollard rho on
/// whatever is left. `factor(1)` is the empty factorization.
///
/// # Panics
///
/// Panics on `n == 0`.
pub fn factor(n: &Natural) -> Factorization {
    assert!(!n.is_zero(), "factor: zero has no factorization");
    let mut primes: Vec<Natural> = Vec::new();
    match n.to_u64() {
        Some(v) => factor_u64_into(v, &mut primes),
        None => factor_big_into(n.clone(), &mut primes),
    }
    primes.sort();
    let mut factors: Vec<PrimePower> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => factors.push(PrimePower::new(p, 1)),
        }
    }
    Factorization {
        target: n.clone(),
        factors,
    }
}

const SMALL_TRIAL_BOUND: u64 = 1 << 12;

fn factor_u64_into(mut n: u64, out: &mut Vec<Natural>) {
    while n.is_multiple_of(2) {
        out.push(nat(2));
        n /= 2;
    }
    let mut d = 3u64;
    while d <= SMALL_TRIAL_BOUND && d * d <= n {
        while n.is_multiple_of(d) {
            out.push(nat(d));
            n /= d;
        }
        d += 2;
    }
    if n == 1 {
        return;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if oracle_is_prime_u64(m) {
            out.push(nat(m));
            continue;
        }
        let d = rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
}

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        if let Some(d) = brent_u64(n, c) {
            return d;
        }
    }
    unreachable!()
}

// One Brent cycle-finding attempt with polynomial x^2 + c.
fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let m = 128u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn factor_big_into(mut n: Natural, out: &mut Vec<Natural>) {
    for d in [2u64, 3, 5, 7, 11, 13] {
        let dn = nat(d);
        while (&n % &dn).is_zero() {
            out.push(dn.clone());
            n /= &dn;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(v) = m.to_u64() {
            factor_u64_into(v, out);
            continue;
        }
        if oracle_is_prime(&m) {
            out.push(m);
            continue;
        }
        let d = rho_big(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
}

fn rho_big(n: &Natural) -> Natural {
    for c in 1u64.. {
        let c = nat(c);
        let f = |x: &Natural| (x * x + &c) % n;
        let mut x = nat(2);
        let mut y = nat(2);
        let mut power = 1u64;
        let mut lam = 1u64;
        loop {
            if power == lam {
                x = y.clone();
                power *= 2;
                lam = 0;
            }
            y = f(&y);
            lam += 1;
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = gcd(&diff, n);
            if g.is_one() {
                continue;
            }
            if g != *n {
                return g;
            }
            break;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors()
            .iter()
            .map(|p| (p.prime.to_u64().unwrap(), p.exponent))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(pairs(&factor(&nat(341))), vec![(11, 1), (31, 1)]);
        assert_eq!(pairs(&factor(&nat(437))), vec![(19, 1), (23, 1)]);
        assert_eq!(pairs(&factor(&nat(8))), vec![(2, 3)]);
        assert_eq!(
            pairs(&factor(&nat(7866))),
            vec![(2, 1), (3, 2), (19, 1), (23, 1)]
        );
        assert!(factor(&nat(1)).factors().is_empty());
    }

    #[test]
    fn rho_splits_semiprimes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        let f = factor(&(nat(p) * nat(q)));
        assert_eq!(pairs(&f), vec![(q, 1), (p, 1)]);
    }

    #[test]
    fn big_path() {
        let p = nat(4_294_967_291);
        let q = nat((1u64 << 31) - 1);
        // above a machine word, below the deterministic Miller-Rabin bound
        let n = &p * &q * 97u32 * 6u32;
        assert!(n.to_u64().is_none());
        let f = factor(&n);
        assert_eq!(f.factors().len(), 5);
        assert_eq!(f.exponent_of(&p), 1);
        assert_eq!(f.exponent_of(&q), 1);
        assert_eq!(product_of(f.factors()), n);
    }

    #[test]
    fn new_validates() {
        assert!(Factorization::from_pairs(726, &[(2, 1), (3, 1), (11, 2)]).is_ok());
        assert!(matches!(
            Factorization::from_pairs(726, &[(2, 1), (3, 1), (11, 1)]),
            Err(Error::FactorizationMismatch { .. })
        ));
        assert!(matches!(
            Factorization::from_pairs(8, &[(4, 1), (2, 1)]),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn divisors_of_12() {
        let d: Vec<u64> = factor(&nat(12))
            .divisors()
            .iter()
            .map(|d| d.to_u64().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    proptest! {
        #[test]
        fn round_trips(n in 1u64..u64::MAX) {
            let f = factor(&nat(n));
            prop_assert_eq!(product_of(f.factors()), nat(n));
            for w in f.factors().windows(2) {
                prop_assert!(w[0].prime < w[1].prime);
            }
            for pp in f.factors() {
                prop_assert!(oracle_is_prime(&pp.prime));
            }
        }
    }
}
