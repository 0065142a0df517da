use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{integer_root, is_perfect_power, nat, product_of, Natural, PrimePower};
use crate::error::{Error, Result};

/// Why `m | phi(n)` is enough to conclude that `n = a*m + 1` is prime.
///
/// Every variant but [`Conjectured`](Self::Conjectured) is a proven
/// statement; a certificate resting on `Conjectured` is only conditional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiDivisibilityBasis {
    /// `m = p` odd prime, `a` even, `a < 4(p+1)`. A composite would need two
    /// factors of the form `s*p+1` with `s >= 2`, which is too large.
    EvenCofactor,
    /// `m = p^k`, `p` an odd prime, `a < p`.
    PrimePower,
    /// `m = p`, `n = A*p^2 + 1` with `A < p`.
    SquareForm,
    /// `m = p`, `n = A*p^3 + 1` with `A` not a cube and `p > A^2 + 2A`.
    CubeForm,
    /// `m = p` odd prime and no `s*p+1` in `(1, sqrt(n)]` divides `n`.
    TrialDivision,
    /// `a = 1`, or `a = 2` with `m` odd: `phi(n) <= n-1 = a*m` pins
    /// `phi(n) = n-1`.
    SmallCofactor,
    /// `a` below the least prime factor of `m`. Unproven.
    Conjectured,
}

impl PhiDivisibilityBasis {
    pub fn is_proven(self) -> bool {
        self != PhiDivisibilityBasis::Conjectured
    }

    /// The strongest basis available for a cofactor/factored-part split,
    /// without doing any trial division.
    pub fn for_split(a: &Natural, m: &Natural, factors: &[PrimePower]) -> Option<Self> {
        let candidates = [
            PhiDivisibilityBasis::SmallCofactor,
            PhiDivisibilityBasis::PrimePower,
            PhiDivisibilityBasis::Conjectured,
        ];
        let n = a * m + 1u32;
        candidates
            .into_iter()
            .find(|b| b.validate(&n, a, m, factors).is_ok())
    }

    /// Checks that this basis applies to `n = a*m + 1` with `m` factored as
    /// `factors`.
    pub fn validate(
        self,
        n: &Natural,
        a: &Natural,
        m: &Natural,
        factors: &[PrimePower],
    ) -> Result<()> {
        const NAME: &str = "phi-divisibility basis";
        let fail = |c: String| Err(Error::precondition(NAME, c));
        if a * m + 1u32 != *n {
            return fail(format!("{n} != a*m + 1 with a = {a}, m = {m}"));
        }
        if product_of(factors) != *m {
            return Err(Error::FactorizationMismatch {
                product: product_of(factors),
                expected: m.clone(),
            });
        }
        if *m <= Natural::one() {
            return fail("m must exceed 1".into());
        }
        let single = |exp: u32| -> Option<&Natural> {
            match factors {
                [pp] if pp.exponent == exp && pp.prime.is_odd() => Some(&pp.prime),
                _ => None,
            }
        };
        let nm1 = n - 1u32;
        match self {
            PhiDivisibilityBasis::EvenCofactor => {
                let Some(p) = single(1) else {
                    return fail("m must be a single odd prime".into());
                };
                if a.is_odd() || *a >= (p + 1u32) * 4u32 {
                    return fail(format!("need a even and a < 4(p+1); a = {a}, p = {p}"));
                }
            }
            PhiDivisibilityBasis::PrimePower => {
                let p = match factors {
                    [pp] if pp.prime.is_odd() => &pp.prime,
                    _ => return fail("m must be a power of one odd prime".into()),
                };
                if a >= p {
                    return fail(format!("need a < p; a = {a}, p = {p}"));
                }
            }
            PhiDivisibilityBasis::SquareForm => {
                let Some(p) = single(1) else {
                    return fail("m must be a single odd prime".into());
                };
                let p2 = p * p;
                if !(&nm1 % &p2).is_zero() || &nm1 / &p2 >= *p {
                    return fail(format!("need n = A*p^2 + 1 with A < p; p = {p}"));
                }
            }
            PhiDivisibilityBasis::CubeForm => {
                let Some(p) = single(1) else {
                    return fail("m must be a single odd prime".into());
                };
                let p3 = p.pow(3);
                if !(&nm1 % &p3).is_zero() {
                    return fail(format!("p^3 must divide n-1; p = {p}"));
                }
                let big_a = &nm1 / &p3;
                if is_perfect_power(&big_a, 3) {
                    return fail(format!("A = {big_a} is a perfect cube"));
                }
                if *p <= &big_a * &big_a + &big_a * 2u32 {
                    return fail(format!("need p > A^2 + 2A; A = {big_a}, p = {p}"));
                }
            }
            PhiDivisibilityBasis::TrialDivision => {
                let Some(p) = single(1) else {
                    return fail("m must be a single odd prime".into());
                };
                if let Some(d) = trial_divide_progression(n, p).divisor {
                    return fail(format!("{d} divides n"));
                }
            }
            PhiDivisibilityBasis::SmallCofactor => {
                let two = nat(2);
                if !(a.is_one() || (*a == two && m.is_odd())) {
                    return fail(format!("need a = 1, or a = 2 with m odd; a = {a}"));
                }
            }
            PhiDivisibilityBasis::Conjectured => {
                let least = factors.iter().map(|f| &f.prime).min().expect("m > 1");
                if a.is_zero() || a >= least {
                    return fail(format!(
                        "need 0 < a < least prime of m; a = {a}, least prime = {least}"
                    ));
                }
            }
        }
        Ok(())
    }
}

pub(crate) struct ProgressionScan {
    pub bound: Natural,
    pub odd_only: bool,
    pub tested: u64,
    pub divisor: Option<Natural>,
}

/// Trial division of `n` by `s*p + 1` for `s >= 1` up to `sqrt(n)`,
/// skipping even candidates when `n` is odd.
pub(crate) fn trial_divide_progression(n: &Natural, p: &Natural) -> ProgressionScan {
    let bound = integer_root(n, 2);
    let odd_only = n.is_odd();
    // p odd: s*p + 1 is odd exactly when s is even
    let (start, step) = if odd_only && p.is_odd() {
        (2, 2u32)
    } else {
        (1, 1u32)
    };
    let mut s = nat(start);
    let mut tested = 0;
    loop {
        let d = &s * p + 1u32;
        if d > bound {
            break;
        }
        if !(odd_only && d.is_even()) {
            tested += 1;
            if (n % &d).is_zero() {
                return ProgressionScan {
                    bound,
                    odd_only,
                    tested,
                    divisor: Some(d),
                };
            }
        }
        s += step;
    }
    ProgressionScan {
        bound,
        odd_only,
        tested,
        divisor: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, e: u32) -> Vec<PrimePower> {
        vec![PrimePower::new(p, e)]
    }

    #[test]
    fn square_form_for_727() {
        let b = PhiDivisibilityBasis::SquareForm;
        assert!(b
            .validate(&nat(727), &nat(66), &nat(11), &pp(11, 1))
            .is_ok());
        // 7 = A*p^2 + 1 form fails for p = 3: 6/9 not integral
        assert!(b.validate(&nat(7), &nat(2), &nat(3), &pp(3, 1)).is_err());
    }

    #[test]
    fn small_cofactor() {
        let b = PhiDivisibilityBasis::SmallCofactor;
        assert!(b.validate(&nat(23), &nat(2), &nat(11), &pp(11, 1)).is_ok());
        assert!(b.validate(&nat(34), &nat(3), &nat(11), &pp(11, 1)).is_err());
    }

    #[test]
    fn conjectured_needs_small_a() {
        let f = vec![PrimePower::new(19u64, 1), PrimePower::new(23u64, 1)];
        let b = PhiDivisibilityBasis::Conjectured;
        assert!(b.validate(&nat(7867), &nat(18), &nat(437), &f).is_ok());
        assert!(b.validate(&nat(8741), &nat(20), &nat(437), &f).is_err());
        assert!(!b.is_proven());
    }

    #[test]
    fn cube_form_gates() {
        let b = PhiDivisibilityBasis::CubeForm;
        assert!(b
            .validate(&nat(2663), &nat(2 * 121), &nat(11), &pp(11, 1))
            .is_ok());
        // a = 8 is a cube
        let n = 8 * 1331 + 1;
        assert!(b
            .validate(&nat(n), &nat(8 * 121), &nat(11), &pp(11, 1))
            .is_err());
        // p = 7 <= 2^2 + 4
        let n = 2 * 343 + 1;
        assert!(b
            .validate(&nat(n), &nat(2 * 49), &nat(7), &pp(7, 1))
            .is_err());
    }

    #[test]
    fn progression_scan_700001() {
        let scan = trial_divide_progression(&nat(700001), &nat(7));
        assert_eq!(scan.bound, nat(836));
        assert!(scan.odd_only);
        assert_eq!(scan.tested, 59);
        assert!(scan.divisor.is_none());
    }

    #[test]
    fn for_split_picks_strongest() {
        let f = vec![PrimePower::new(19u64, 1), PrimePower::new(23u64, 1)];
        assert_eq!(
            PhiDivisibilityBasis::for_split(&nat(18), &nat(437), &f),
            Some(PhiDivisibilityBasis::Conjectured)
        );
        assert_eq!(
            PhiDivisibilityBasis::for_split(&nat(2), &nat(437), &f),
            Some(PhiDivisibilityBasis::SmallCofactor)
        );
        assert_eq!(
            PhiDivisibilityBasis::for_split(&nat(6), &nat(121), &pp(11, 2)),
            Some(PhiDivisibilityBasis::PrimePower)
        );
        assert_eq!(
            PhiDivisibilityBasis::for_split(&nat(20), &nat(437), &f),
            None
        );
    }
}
