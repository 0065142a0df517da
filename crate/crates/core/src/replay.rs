//! Re-verifying a [`Certificate`] from its recorded data alone.
//!
//! Replay never searches for a base. It recomputes every recorded residue,
//! checks each against its expectation, re-establishes the theorem's
//! hypotheses on `n = a*m + 1` and re-derives each side condition.

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{
    gcd, is_perfect_power, mod_pow, nat, oracle_is_prime, product_of, valuation, Natural,
    TRIAL_DIVISION_LIMIT,
};
use crate::optimized::{trial_divide_progression, PhiDivisibilityBasis, FERMAT_BOUND_MAX_BITS};
use crate::verdict::{Certificate, Conjecture, Expect, SideCondition, TheoremTag, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayStatus {
    /// The certificate proves `n` prime.
    Certified,
    /// The certificate proves `n` prime if the conjecture holds.
    Conditional(Conjecture),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub status: ReplayStatus,
    /// Primes taken on the certificate's word rather than re-tested.
    pub assumed_primes: Vec<Natural>,
    pub modexps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("{base}^{exponent} mod n is {actual}, certificate records {recorded}")]
    ResidueMismatch {
        base: Natural,
        exponent: Natural,
        recorded: Natural,
        actual: Natural,
    },
    #[error("{base}^{exponent} = {residue} does not meet {expect:?}")]
    ExpectationFailed {
        base: Natural,
        exponent: Natural,
        residue: Natural,
        expect: Expect,
    },
    #[error("base {0} outside [2, n-1]")]
    BadBase(Natural),
    #[error("listed factor {0} is not prime")]
    NotPrime(Natural),
    #[error("no witness checks exponent {0}")]
    MissingCheck(Natural),
    #[error("malformed certificate: {0}")]
    Structure(String),
    #[error("side condition does not hold: {0}")]
    SideCondition(String),
    #[error("{0} never certifies primality")]
    Unsupported(TheoremTag),
}

type Outcome<T> = std::result::Result<T, ReplayError>;

fn structure<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(ReplayError::Structure(msg.into()))
}

/// Replays `cert`.
///
/// ```
/// use primecert::optimized::{decompose, test_ap1};
/// use primecert::replay::{replay, ReplayStatus};
/// use primecert::{nat, WitnessSearch};
///
/// let d = decompose(&nat(547), &nat(13), 1).unwrap();
/// let c = test_ap1(&d, WitnessSearch::default(), true).unwrap();
/// let report = replay(c.certificate().unwrap()).unwrap();
/// assert_eq!(report.status, ReplayStatus::Certified);
/// ```
pub fn replay(cert: &Certificate) -> Outcome<ReplayReport> {
    let n = &cert.n;
    if *n < nat(2) {
        return structure("n < 2");
    }
    let nm1 = n - 1u32;
    if &cert.a * &cert.m != nm1 {
        return structure(format!("a*m + 1 = {} != n", &cert.a * &cert.m + 1u32));
    }
    if product_of(&cert.factors) != cert.m {
        return structure("factors do not multiply to m");
    }
    for w in cert.factors.windows(2) {
        if w[0].prime >= w[1].prime {
            return structure("factors not strictly increasing");
        }
    }
    if cert.factors.iter().any(|f| f.exponent == 0) {
        return structure("zero exponent");
    }

    let mut assumed = Vec::new();
    for sc in &cert.side_conditions {
        if let SideCondition::PrimeAsserted { p } = sc {
            if !cert.factors.iter().any(|f| f.prime == *p) {
                return structure(format!("asserted prime {p} is not a listed factor"));
            }
            assumed.push(p.clone());
        }
    }
    for f in &cert.factors {
        if !assumed.contains(&f.prime) && !oracle_is_prime(&f.prime) {
            return Err(ReplayError::NotPrime(f.prime.clone()));
        }
    }

    let mut modexps = 0;
    for w in &cert.witnesses {
        if w.base < nat(2) || w.base >= *n {
            return Err(ReplayError::BadBase(w.base.clone()));
        }
        for c in &w.checks {
            let actual = mod_pow(&w.base, &c.exponent, n).expect("n >= 2");
            modexps += 1;
            if actual != c.residue {
                return Err(ReplayError::ResidueMismatch {
                    base: w.base.clone(),
                    exponent: c.exponent.clone(),
                    recorded: c.residue.clone(),
                    actual,
                });
            }
            if !c.expect.holds(&c.residue, n) {
                return Err(ReplayError::ExpectationFailed {
                    base: w.base.clone(),
                    exponent: c.exponent.clone(),
                    residue: c.residue.clone(),
                    expect: c.expect,
                });
            }
        }
    }

    for sc in &cert.side_conditions {
        check_side_condition(cert, sc)?;
    }

    let status = check_theorem(cert, &nm1)?;
    Ok(ReplayReport {
        status,
        assumed_primes: assumed,
        modexps,
    })
}

fn check_side_condition(cert: &Certificate, sc: &SideCondition) -> Outcome<()> {
    let n = &cert.n;
    match sc {
        SideCondition::PrimeAsserted { .. } => Ok(()),
        SideCondition::GcdOne { q, residue } => {
            if residue.is_zero() {
                return Err(ReplayError::SideCondition(format!("residue for {q} is 0")));
            }
            let g = gcd(&(residue - 1u32), n);
            if !g.is_one() {
                return Err(ReplayError::SideCondition(format!(
                    "gcd({residue} - 1, n) = {g} for q = {q}"
                )));
            }
            Ok(())
        }
        SideCondition::TrialDivision {
            p,
            bound,
            odd_only,
            candidates_tested,
        } => {
            let scan = trial_divide_progression(n, p);
            if let Some(d) = scan.divisor {
                return Err(ReplayError::SideCondition(format!("{d} divides n")));
            }
            if scan.bound != *bound
                || scan.odd_only != *odd_only
                || scan.tested != *candidates_tested
            {
                return Err(ReplayError::SideCondition(format!(
                    "trial division record differs: bound {}, odd_only {}, tested {}",
                    scan.bound, scan.odd_only, scan.tested
                )));
            }
            Ok(())
        }
        SideCondition::NoSmallDivisor => match n.to_u64() {
            Some(v) if v <= TRIAL_DIVISION_LIMIT => {
                if oracle_is_prime(n) {
                    Ok(())
                } else {
                    Err(ReplayError::SideCondition("n has a small divisor".into()))
                }
            }
            _ => Err(ReplayError::SideCondition(
                "n too large to replay by trial division".into(),
            )),
        },
    }
}

fn fermat_ok(w: &Witness, nm1: &Natural, euler: bool) -> bool {
    let has = |e: &Natural, x: Expect| w.checks.iter().any(|c| c.exponent == *e && c.expect == x);
    has(nm1, Expect::One) || (euler && has(&(nm1 >> 1u32), Expect::PlusMinusOne))
}

fn not_one(w: &Witness, e: &Natural) -> bool {
    w.checks
        .iter()
        .any(|c| c.exponent == *e && c.expect == Expect::NotOne)
}

/// Some single witness passes the Fermat screen and keeps `b^e` off 1.
fn require(cert: &Certificate, nm1: &Natural, e: &Natural, euler: bool) -> Outcome<()> {
    if cert
        .witnesses
        .iter()
        .any(|w| fermat_ok(w, nm1, euler) && not_one(w, e))
    {
        Ok(())
    } else {
        Err(ReplayError::MissingCheck(e.clone()))
    }
}

fn single_prime(cert: &Certificate, k: Option<u32>) -> Outcome<&Natural> {
    match cert.factors.as_slice() {
        [f] if f.prime.is_odd() && k.is_none_or(|k| f.exponent == k) => Ok(&f.prime),
        _ => structure(format!(
            "{} needs m to be {} of one odd prime",
            cert.theorem,
            match k {
                Some(1) => "a single power".to_string(),
                Some(k) => format!("the {k}th power"),
                None => "a power".to_string(),
            }
        )),
    }
}

fn check_theorem(cert: &Certificate, nm1: &Natural) -> Outcome<ReplayStatus> {
    let a = &cert.a;
    let n = &cert.n;
    let certified = Ok(ReplayStatus::Certified);
    match cert.theorem {
        TheoremTag::Fermat => Err(ReplayError::Unsupported(TheoremTag::Fermat)),
        TheoremTag::TrialDivision => {
            if !cert
                .side_conditions
                .contains(&SideCondition::NoSmallDivisor)
            {
                return structure("trial-division certificate without its side condition");
            }
            certified
        }
        TheoremTag::LucasConverse => {
            if !a.is_one() {
                return structure("Lucas certificate needs m = n-1");
            }
            let w = cert
                .witnesses
                .iter()
                .find(|w| fermat_ok(w, nm1, false))
                .ok_or_else(|| ReplayError::MissingCheck(nm1.clone()))?;
            for f in &cert.factors {
                let e = nm1 / &f.prime;
                if !not_one(w, &e) {
                    return Err(ReplayError::MissingCheck(e));
                }
            }
            certified
        }
        TheoremTag::Pocklington => {
            let (f, r) = (&cert.m, a);
            if f <= r || !f.gcd(r).is_one() {
                return structure("Pocklington needs F > R and gcd(F, R) = 1");
            }
            let w = cert
                .witnesses
                .iter()
                .find(|w| fermat_ok(w, nm1, false))
                .ok_or_else(|| ReplayError::MissingCheck(nm1.clone()))?;
            for pp in &cert.factors {
                let e = nm1 / &pp.prime;
                let check = w
                    .checks
                    .iter()
                    .find(|c| c.exponent == e)
                    .ok_or_else(|| ReplayError::MissingCheck(e.clone()))?;
                let gcd_recorded = cert.side_conditions.iter().any(|sc| {
                    matches!(sc, SideCondition::GcdOne { q, residue } if *q == pp.prime && *residue == check.residue)
                });
                if !gcd_recorded {
                    return structure(format!("no gcd condition recorded for q = {}", pp.prime));
                }
            }
            certified
        }
        TheoremTag::ApPlusOne => {
            let p = single_prime(cert, Some(1))?;
            if a.is_odd() || *a >= (p + 1u32) * 4u32 {
                return structure("need a even and a < 4(p+1)");
            }
            require(cert, nm1, a, true)?;
            certified
        }
        TheoremTag::FermatBound => {
            let p = single_prime(cert, Some(1))?;
            if a.is_odd() || p * 4u32 < *a {
                return structure("need a even and p > (a-1)/4");
            }
            let ok = cert.witnesses.iter().any(|w| {
                let bits = a.to_u64().and_then(|x| x.checked_mul(w.base.bits()));
                fermat_ok(w, nm1, false)
                    && bits.is_some_and(|b| b <= FERMAT_BOUND_MAX_BITS)
                    && p * a + 1u32 > w.base.pow(a.to_u32().expect("bounded"))
            });
            if !ok {
                return structure("no witness base satisfies p > (b^a-1)/a with b^(n-1) = 1");
            }
            certified
        }
        TheoremTag::SingleFactor => {
            let p = single_prime(cert, Some(1))?;
            let recorded = cert
                .side_conditions
                .iter()
                .any(|sc| matches!(sc, SideCondition::TrialDivision { p: q, .. } if q == p));
            if !recorded {
                return structure("single-factor certificate without trial division record");
            }
            require(cert, nm1, a, false)?;
            certified
        }
        TheoremTag::PowerOfPrime => {
            let p = single_prime(cert, None)?;
            if a >= p {
                return structure("need a < p");
            }
            require(cert, nm1, &(nm1 / p), false)?;
            certified
        }
        TheoremTag::SquareForm => {
            let p = single_prime(cert, Some(2))?;
            if a >= p {
                return structure("need a < p");
            }
            require(cert, nm1, a, false)?;
            certified
        }
        TheoremTag::CubeForm => {
            let p = single_prime(cert, Some(3))?;
            if is_perfect_power(a, 3) || *p <= a * a + a * 2u32 {
                return structure("need a not a cube and p > a^2 + 2a");
            }
            require(cert, nm1, a, false)?;
            certified
        }
        TheoremTag::ExtendedLucas | TheoremTag::PartialExponent => {
            let basis = cert
                .basis
                .ok_or_else(|| ReplayError::Structure("missing phi-divisibility basis".into()))?;
            basis
                .validate(n, a, &cert.m, &cert.factors)
                .map_err(|e| ReplayError::Structure(e.to_string()))?;
            if basis == PhiDivisibilityBasis::TrialDivision {
                let p = &cert.factors[0].prime;
                let recorded = cert
                    .side_conditions
                    .iter()
                    .any(|sc| matches!(sc, SideCondition::TrialDivision { p: q, .. } if q == p));
                if !recorded {
                    return structure("trial-division basis without its record");
                }
            }
            for f in &cert.factors {
                let e = if cert.theorem == TheoremTag::ExtendedLucas {
                    nm1 / &f.prime
                } else {
                    let s = valuation(nm1, &f.prime);
                    if f.exponent > s {
                        return structure(format!(
                            "{}^{} does not divide n-1",
                            f.prime, f.exponent
                        ));
                    }
                    nm1 / f.prime.pow(s - f.exponent + 1)
                };
                require(cert, nm1, &e, false)?;
            }
            Ok(if basis.is_proven() {
                ReplayStatus::Certified
            } else {
                ReplayStatus::Conditional(Conjecture::PhiDivisibility)
            })
        }
    }
}
