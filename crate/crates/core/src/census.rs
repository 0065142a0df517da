//! Enumeration of base-`b` Fermat pseudoprimes of the form `a*p^k + 1`.
//!
//! For `k = 1, 2, 3` a bound on `p` exists past which no pseudoprime of the
//! form can occur. When the sweep reaches that bound the report is complete.

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    is_perfect_power, mod_pow, nat, oracle_is_prime, primes_between, Natural,
    MR_DETERMINISTIC_BOUND,
};
use crate::error::{Error, Result};

/// Cutoffs are only evaluated when `b^a` has at most this many bits.
pub const CUTOFF_MAX_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pseudoprime {
    #[serde(with = "crate::natser")]
    pub p: Natural,
    #[serde(with = "crate::natser")]
    pub n: Natural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    #[serde(with = "crate::natser")]
    pub a: Natural,
    pub k: u32,
    #[serde(with = "crate::natser")]
    pub base: Natural,
    #[serde(with = "crate::natser")]
    pub p_bound: Natural,
    pub pseudoprimes: Vec<Pseudoprime>,
    /// No pseudoprime of the form exists with `p` above this value.
    #[serde(with = "crate::natser::opt")]
    pub theoretical_cutoff: Option<Natural>,
    /// For `k = 2, 3`: no pseudoprime with `n >= b^a` satisfies the form's
    /// hypotheses.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::natser::opt"
    )]
    pub n_cutoff: Option<Natural>,
    pub complete: bool,
    pub primes_scanned: u64,
    pub notes: Vec<String>,
}

impl CensusReport {
    /// Pseudoprimes the form's theorem says cannot exist. Always empty
    /// unless the theory (or this code) is wrong.
    pub fn violations(&self) -> Vec<&Pseudoprime> {
        let a = &self.a;
        let ba = self.n_cutoff.as_ref();
        self.pseudoprimes
            .iter()
            .filter(|pp| match self.k {
                1 => self.theoretical_cutoff.as_ref().is_some_and(|c| pp.p > *c),
                2 => a < &pp.p && ba.is_some_and(|b| pp.n >= *b),
                3 => {
                    !is_perfect_power(a, 3)
                        && pp.p > a * a + a * 2u32
                        && ba.is_some_and(|b| pp.n >= *b)
                }
                _ => false,
            })
            .collect()
    }
}

struct Cutoffs {
    p: Option<Natural>,
    n: Option<Natural>,
    notes: Vec<String>,
}

fn cutoffs(a: u64, k: u32, base: u64) -> Cutoffs {
    let mut notes = Vec::new();
    let bits = (base.ilog2() as u64 + 1).saturating_mul(a);
    let none = |notes| Cutoffs {
        p: None,
        n: None,
        notes,
    };
    if bits > CUTOFF_MAX_BITS {
        notes.push(format!(
            "b^a exceeds {CUTOFF_MAX_BITS} bits; no cutoff evaluated"
        ));
        return none(notes);
    }
    let an = nat(a);
    let ba = nat(base).pow(a as u32);
    match k {
        1 if a.is_multiple_of(2) => {
            let c1 = (&an - 1u32) / 4u32;
            let c2 = (&ba - 1u32) / &an;
            let alt = (&ba - 2u32) / &an;
            notes.push(format!(
                "cutoff uses (b^a-1)/a; the variant (b^a-2)/a gives {alt}"
            ));
            Cutoffs {
                p: Some(c1.max(c2)),
                n: None,
                notes,
            }
        }
        1 => {
            notes.push("a is odd; no cutoff for k = 1".into());
            none(notes)
        }
        2 => {
            let c = ((&ba - 2u32) / &an).sqrt();
            Cutoffs {
                p: Some(an.clone().max(c)),
                n: Some(ba),
                notes,
            }
        }
        3 if is_perfect_power(&an, 3) => {
            notes.push("a is a perfect cube; no cutoff for k = 3".into());
            none(notes)
        }
        3 => {
            let c = ((&ba - 2u32) / &an).cbrt();
            Cutoffs {
                p: Some((&an * &an + &an * 2u32).max(c)),
                n: Some(ba),
                notes,
            }
        }
        _ => {
            notes.push(format!("no finiteness result for k = {k}"));
            none(notes)
        }
    }
}

/// Every prime `3 <= p <= p_bound` for which `n = a*p^k + 1` is composite and
/// `base^(n-1) = 1 (mod n)`.
///
/// Compositeness comes from the exact oracle, so `a*p_bound^k + 1` must stay
/// below the oracle's fast range.
///
/// ```
/// use primecert::census::census;
/// let r = census(20, 1, 2, 1000).unwrap();
/// assert_eq!(r.pseudoprimes[0].n, primecert::nat(341));
/// assert!(!r.complete);
/// ```
pub fn census(a: u64, k: u32, base: u64, p_bound: u64) -> Result<CensusReport> {
    const NAME: &str = "census";
    if base < 2 {
        return Err(Error::precondition(NAME, "base must be at least 2"));
    }
    if a == 0 || k == 0 {
        return Err(Error::precondition(NAME, "a and k must be positive"));
    }
    let largest = nat(a) * nat(p_bound).pow(k) + 1u32;
    if largest
        .to_u128()
        .is_none_or(|v| v >= MR_DETERMINISTIC_BOUND)
    {
        return Err(Error::precondition(
            NAME,
            format!("a*p_bound^k + 1 = {largest} is beyond the exact oracle's fast range"),
        ));
    }
    let primes: Vec<u64> = primes_between(3, p_bound).collect();
    let b = nat(base);
    let pseudoprimes: Vec<Pseudoprime> = primes
        .par_iter()
        .filter_map(|&p| {
            let n = nat(a) * nat(p).pow(k) + 1u32;
            let r = mod_pow(&b, &(&n - 1u32), &n).expect("n >= 4");
            (r.is_one() && !oracle_is_prime(&n)).then(|| Pseudoprime { p: nat(p), n })
        })
        .collect();
    let cut = cutoffs(a, k, base);
    let complete = cut.p.as_ref().is_some_and(|c| nat(p_bound) >= *c);
    Ok(CensusReport {
        a: nat(a),
        k,
        base: b,
        p_bound: nat(p_bound),
        pseudoprimes,
        theoretical_cutoff: cut.p,
        n_cutoff: cut.n,
        complete,
        primes_scanned: primes.len() as u64,
        notes: cut.notes,
    })
}

/// [`census`] for each `a`, in the order given.
pub fn census_sweep(
    a_values: &[u64],
    k: u32,
    base: u64,
    p_bound: u64,
) -> Result<Vec<CensusReport>> {
    a_values
        .par_iter()
        .map(|&a| census(a, k, base, p_bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(r: &CensusReport) -> Vec<u64> {
        r.pseudoprimes
            .iter()
            .map(|p| p.n.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn small_even_a_is_complete_and_empty() {
        let r = census(2, 1, 2, 10_000).unwrap();
        assert!(r.pseudoprimes.is_empty());
        assert_eq!(r.theoretical_cutoff, Some(nat(1)));
        assert!(r.complete);
        let r = census(6, 1, 2, 10_000).unwrap();
        assert!(r.pseudoprimes.is_empty());
        assert_eq!(r.theoretical_cutoff, Some(nat(10)));
        assert!(r.complete);
    }

    #[test]
    fn a20_contains_341() {
        let r = census(20, 1, 2, 1000).unwrap();
        assert_eq!(ns(&r), vec![341]);
        assert_eq!(r.theoretical_cutoff, Some(nat(52428)));
        assert!(!r.complete);
        assert!(r.violations().is_empty());
    }

    #[test]
    fn cube_a_has_no_cutoff() {
        let r = census(8, 3, 2, 1000).unwrap();
        assert!(!r.complete);
        assert_eq!(r.theoretical_cutoff, None);
    }

    #[test]
    fn square_and_cube_cutoffs() {
        let r = census(10, 2, 2, 100).unwrap();
        assert_eq!(r.theoretical_cutoff, Some(nat(10)));
        assert_eq!(r.n_cutoff, Some(nat(1024)));
        let r = census(3, 3, 2, 100).unwrap();
        assert_eq!(r.theoretical_cutoff, Some(nat(15)));
    }

    #[test]
    fn sweep_keeps_order() {
        let rs = census_sweep(&[10, 2, 6], 1, 2, 1000).unwrap();
        let a: Vec<_> = rs.iter().map(|r| r.a.clone()).collect();
        assert_eq!(a, vec![nat(10), nat(2), nat(6)]);
        assert!(census_sweep(&[], 1, 2, 1000).unwrap().is_empty());
    }

    #[test]
    fn k4_is_never_complete() {
        for r in census_sweep(&(1..=10).collect::<Vec<_>>(), 4, 2, 10_000).unwrap() {
            assert!(!r.complete);
            assert!(r.pseudoprimes.is_empty());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(census(2, 1, 1, 100).is_err());
        assert!(census(2, 9, 2, u64::MAX).is_err());
    }
}
