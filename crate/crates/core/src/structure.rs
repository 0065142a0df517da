//! Brute-force checks of the structural facts the optimized tests rest on.
//!
//! Everything here computes `phi(n)` from a complete factorization, so the
//! bounds are meant for exhaustive sweeps in the `10^5`..`10^6` range.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    factor, is_perfect_power, nat, oracle_is_prime, primes_between, totient, Natural,
};
use crate::error::{Error, Result};

/// `n = (s*p + 1)(t*p + 1)` with `t*p + 1` prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorShape {
    #[serde(with = "crate::natser")]
    pub n: Natural,
    #[serde(with = "crate::natser")]
    pub p: Natural,
    #[serde(with = "crate::natser")]
    pub s: Natural,
    #[serde(with = "crate::natser")]
    pub t: Natural,
    /// `s*p + 1`
    #[serde(with = "crate::natser")]
    pub cofactor: Natural,
    /// `t*p + 1`, prime.
    #[serde(with = "crate::natser")]
    pub prime_part: Natural,
}

/// `(x*z + 1)(y*z + 1) = a*z^3 + 1` in positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DiophantineSolution {
    pub a: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// `m | phi(n)`.
pub fn phi_divisibility_holds(n: &Natural, m: &Natural) -> Result<bool> {
    if *n < nat(2) {
        return Err(Error::precondition(
            "phi-divisibility",
            "n must be at least 2",
        ));
    }
    if m.is_zero() {
        return Err(Error::precondition(
            "phi-divisibility",
            "m must be positive",
        ));
    }
    Ok((totient(&factor(n)) % m).is_zero())
}

/// For composite `n` and an odd prime `p` dividing both `n - 1` and
/// `phi(n)`, finds a prime divisor `t*p + 1` of `n`; the cofactor is then
/// `s*p + 1` as well. The smallest such prime is used.
///
/// ```
/// use primecert::nat;
/// use primecert::structure::factor_shape;
/// let shape = factor_shape(&nat(91), &nat(3)).unwrap();
/// assert_eq!((shape.prime_part, shape.cofactor), (nat(7), nat(13)));
/// ```
pub fn factor_shape(n: &Natural, p: &Natural) -> Result<FactorShape> {
    const NAME: &str = "factor-shape";
    if *n < nat(4) || oracle_is_prime(n) {
        return Err(Error::precondition(NAME, format!("{n} is not composite")));
    }
    if p.is_even() || !oracle_is_prime(p) {
        return Err(Error::precondition(
            NAME,
            format!("{p} is not an odd prime"),
        ));
    }
    if !((n - 1u32) % p).is_zero() {
        return Err(Error::NotDivisible {
            divisor: p.clone(),
            value: n - 1u32,
        });
    }
    if !phi_divisibility_holds(n, p)? {
        return Err(Error::precondition(
            NAME,
            format!("{p} does not divide phi({n})"),
        ));
    }
    let f = factor(n);
    let q = f
        .primes()
        .find(|q| (*q % p).to_u64() == Some(1))
        .ok_or_else(|| Error::Invariant(format!("no prime factor of {n} is 1 mod {p}")))?;
    let cofactor = n / q;
    if ((&cofactor - 1u32) % p).to_u64() != Some(0) {
        return Err(Error::Invariant(format!("{n} / {q} is not 1 mod {p}")));
    }
    Ok(FactorShape {
        n: n.clone(),
        p: p.clone(),
        s: (&cofactor - 1u32) / p,
        t: (q - 1u32) / p,
        cofactor,
        prime_part: q.clone(),
    })
}

/// A family of `n = a*p^k + 1` in which `m | phi(n)` should be equivalent
/// to primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `k = 1`, `a` even, `a < 4(p+1)`; `m = p`.
    K1Bounded,
    /// Any `k >= 1`, `a < p`; `m = p^k`.
    Pk,
    /// `k = 2`, `a < p`; `m = p`.
    P2,
    /// `k = 3`, `a` not a cube, `p > a^2 + 2a`; `m = p`.
    P3Noncube,
    /// `k = 2` with no bound on `a`; `m = p`. Fails, showing `a < p` is needed.
    P2Relaxed,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::K1Bounded,
        Family::Pk,
        Family::P2,
        Family::P3Noncube,
        Family::P2Relaxed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::K1Bounded => "k1-bounded",
            Family::Pk => "pk",
            Family::P2 => "p2",
            Family::P3Noncube => "p3-noncube",
            Family::P2Relaxed => "p2-relaxed",
        }
    }

    /// Accepts `k1-bounded` and `k1_bounded` alike.
    pub fn from_name(s: &str) -> Option<Self> {
        let s = s.replace('_', "-");
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    fn admits(self, a: u64, p: u64) -> bool {
        match self {
            Family::K1Bounded => a.is_multiple_of(2) && a < 4 * (p + 1),
            Family::Pk | Family::P2 => a < p,
            Family::P3Noncube => {
                !is_perfect_power(&nat(a), 3)
                    && (p as u128) > (a as u128) * (a as u128) + 2 * a as u128
            }
            Family::P2Relaxed => true,
        }
    }

    fn exponents(self) -> std::ops::RangeInclusive<u32> {
        match self {
            Family::K1Bounded => 1..=1,
            Family::Pk => 1..=u32::MAX,
            Family::P2 | Family::P2Relaxed => 2..=2,
            Family::P3Noncube => 3..=3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiCounterexample {
    #[serde(with = "crate::natser")]
    pub n: Natural,
    pub a: u64,
    pub p: u64,
    pub k: u32,
    pub prime: bool,
    pub divides: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEquivalenceReport {
    pub family: Family,
    pub n_bound: u64,
    pub checked: u64,
    pub primes: u64,
    pub counterexamples: Vec<PhiCounterexample>,
}

/// Enumerates every `(a, p, k)` of `family` with `p` an odd prime and
/// `n = a*p^k + 1 <= n_bound`, comparing `m | phi(n)` against primality.
pub fn verify_phi_equivalence(family: Family, n_bound: u64) -> PhiEquivalenceReport {
    let primes: Vec<u64> = primes_between(3, n_bound.saturating_sub(1)).collect();
    let per_p: Vec<(u64, u64, Vec<PhiCounterexample>)> = primes
        .par_iter()
        .map(|&p| {
            let (mut checked, mut prime_count, mut bad) = (0, 0, Vec::new());
            for k in family.exponents() {
                let Some(pk) = p.checked_pow(k).filter(|&pk| pk < n_bound) else {
                    break;
                };
                let m = if family == Family::Pk { pk } else { p };
                for a in 1..=(n_bound - 1) / pk {
                    if !family.admits(a, p) {
                        continue;
                    }
                    let n = nat(a * pk + 1);
                    let prime = oracle_is_prime(&n);
                    let divides = (totient(&factor(&n)) % m).is_zero();
                    checked += 1;
                    prime_count += prime as u64;
                    if prime != divides {
                        bad.push(PhiCounterexample {
                            n,
                            a,
                            p,
                            k,
                            prime,
                            divides,
                        });
                    }
                }
            }
            (checked, prime_count, bad)
        })
        .collect();
    let mut report = PhiEquivalenceReport {
        family,
        n_bound,
        checked: 0,
        primes: 0,
        counterexamples: Vec::new(),
    };
    for (c, pr, bad) in per_p {
        report.checked += c;
        report.primes += pr;
        report.counterexamples.extend(bad);
    }
    report
        .counterexamples
        .sort_by(|x, y| x.n.cmp(&y.n).then(x.p.cmp(&y.p)));
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureCounterexample {
    #[serde(with = "crate::natser")]
    pub n: Natural,
    pub a: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub a_bound: u64,
    pub m_bound: u64,
    pub checked: u64,
    pub counterexamples: Vec<ConjectureCounterexample>,
}

/// Looks for composite `n = a*m + 1` with `m | phi(n)`, over
/// `2 <= m <= m_bound` and `1 <= a <= a_bound` below the least prime of `m`.
/// Any hit would refute the phi-divisibility conjecture.
pub fn phi_conjecture_search(a_bound: u64, m_bound: u64) -> ConjectureReport {
    let per_m: Vec<(u64, Vec<ConjectureCounterexample>)> = (2..=m_bound.max(1))
        .into_par_iter()
        .map(|m| {
            let least = factor(&nat(m))
                .least_prime()
                .and_then(|p| p.to_u64())
                .expect("m >= 2");
            let top = a_bound.min(least - 1);
            let mut bad = Vec::new();
            for a in 1..=top {
                let n = nat(a) * m + 1u32;
                if (totient(&factor(&n)) % m).is_zero() && !oracle_is_prime(&n) {
                    bad.push(ConjectureCounterexample { n, a, m });
                }
            }
            (top, bad)
        })
        .collect();
    let mut report = ConjectureReport {
        a_bound,
        m_bound,
        checked: 0,
        counterexamples: Vec::new(),
    };
    for (c, bad) in per_m {
        report.checked += c;
        report.counterexamples.extend(bad);
    }
    report
}

/// Every solution of `(x*z + 1)(y*z + 1) = a*z^3 + 1` with `z <= z_bound`,
/// ordered by `z` then `x`.
///
/// Solutions are read off the divisors `d = x*z + 1` of `a*z^3 + 1`. Any
/// solution has `z | x + y`, which is asserted as a consistency check.
///
/// # Panics
///
/// Panics if `a == 0`.
pub fn diophantine_search(a: u64, z_bound: u64) -> Vec<DiophantineSolution> {
    assert!(a >= 1, "diophantine_search: a must be positive");
    let mut out: Vec<DiophantineSolution> = (1..=z_bound)
        .into_par_iter()
        .flat_map_iter(|z| {
            let big = nat(a) * nat(z).pow(3) + 1u32;
            let divisors = factor(&big).divisors();
            let mut found = Vec::new();
            for d in &divisors {
                if *d <= nat(1) || *d >= big || ((d - 1u32) % z).to_u64() != Some(0) {
                    continue;
                }
                let e = &big / d;
                if ((&e - 1u32) % z).to_u64() != Some(0) {
                    continue;
                }
                let x = ((d - 1u32) / z).to_u64().expect("x fits");
                let y = ((e - 1u32) / z).to_u64().expect("y fits");
                assert_eq!((x + y) % z, 0, "z must divide x + y");
                found.push(DiophantineSolution { a, x, y, z });
            }
            found
        })
        .collect();
    out.sort_by_key(|s| (s.z, s.x));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_divisibility_examples() {
        assert!(phi_divisibility_holds(&nat(727), &nat(121)).unwrap());
        assert!(phi_divisibility_holds(&nat(341), &nat(5)).unwrap());
        assert!(!phi_divisibility_holds(&nat(341), &nat(17)).unwrap());
        assert!(phi_divisibility_holds(&nat(1), &nat(1)).is_err());
    }

    #[test]
    fn factor_shape_examples() {
        // smaller prime factor taken as t*p + 1
        let s = factor_shape(&nat(341), &nat(5)).unwrap();
        assert_eq!((s.s.clone(), s.t.clone()), (nat(6), nat(2)));
        assert_eq!(s.prime_part, nat(11));
        let s = factor_shape(&nat(91), &nat(3)).unwrap();
        assert_eq!((s.s, s.t), (nat(4), nat(2)));
        assert!(factor_shape(&nat(547), &nat(13)).is_err());
        assert!(factor_shape(&nat(341), &nat(17)).is_err());
    }

    #[test]
    fn families_hold_to_1e4() {
        for f in [Family::K1Bounded, Family::Pk, Family::P2, Family::P3Noncube] {
            let r = verify_phi_equivalence(f, 10_000);
            assert!(
                r.counterexamples.is_empty(),
                "{f:?}: {:?}",
                r.counterexamples
            );
            assert!(r.checked > 0 || f == Family::P3Noncube);
        }
    }

    #[test]
    fn relaxed_square_family_fails() {
        let r = verify_phi_equivalence(Family::P2Relaxed, 1000);
        let first = &r.counterexamples[0];
        assert_eq!((first.n.clone(), first.a, first.p), (nat(28), 3, 3));
        assert!(first.divides && !first.prime);
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
        assert_eq!(Family::from_name("k1_bounded"), Some(Family::K1Bounded));
    }

    #[test]
    fn conjecture_search_small() {
        let r = phi_conjecture_search(1, 100);
        assert_eq!(r.checked, 99);
        assert!(r.counterexamples.is_empty());
        let r = phi_conjecture_search(10, 1000);
        assert!(r.counterexamples.is_empty());
    }

    #[test]
    fn diophantine_a2() {
        let s = diophantine_search(2, 100);
        assert_eq!(
            s,
            vec![
                DiophantineSolution {
                    a: 2,
                    x: 3,
                    y: 5,
                    z: 8
                },
                DiophantineSolution {
                    a: 2,
                    x: 5,
                    y: 3,
                    z: 8
                },
            ]
        );
    }

    #[test]
    fn diophantine_matches_grid_for_a1() {
        let s = diophantine_search(1, 10);
        let mut grid = Vec::new();
        for z in 1..=10u64 {
            for x in 1..=z * z {
                for y in 1..=z * z {
                    if (x * z + 1) * (y * z + 1) == z * z * z + 1 {
                        grid.push(DiophantineSolution { a: 1, x, y, z });
                    }
                }
            }
        }
        assert_eq!(s, grid);
        assert_eq!(s.len(), 17);
    }

    #[test]
    fn cube_family_appears_everywhere() {
        let s = diophantine_search(8, 50);
        for z in 1..=50 {
            assert!(s.contains(&DiophantineSolution {
                a: 8,
                x: 2,
                y: 4 * z - 2,
                z
            }));
        }
    }
}
