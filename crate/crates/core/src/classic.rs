//! The baseline tests: Fermat, Lucas's converse, and Pocklington.
//!
//! These exist so the form-specific tests in [`crate::optimized`] can be
//! compared against them on the same inputs: same verdicts, fewer operations.

use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};

use crate::arith::{factor, nat, Factorization, Natural, TRIAL_DIVISION_LIMIT};
use crate::error::{Error, Result};
use crate::search::{FermatStep, Probe, Searcher, WitnessSearch};
use crate::verdict::{
    Certificate, Check, Classification, CompositeEvidence, Expect, InconclusiveReason, OpCounts,
    SideCondition, TheoremTag, Witness,
};

/// Direct trial division by every integer in `[2, sqrt(n)]`, for
/// `2 <= n <= 10^12`. The fallback for inputs too small for any other test.
pub fn trial_division(n: &Natural) -> Result<Classification> {
    const NAME: &str = "trial-division";
    let Some(v) = n
        .to_u64()
        .filter(|&v| (2..=TRIAL_DIVISION_LIMIT).contains(&v))
    else {
        return Err(Error::precondition(
            NAME,
            format!("n must lie in [2, {TRIAL_DIVISION_LIMIT}]"),
        ));
    };
    let mut ops = OpCounts::default();
    for d in 2..=v.sqrt() {
        ops.trial_divisions += 1;
        if v % d == 0 {
            return Ok(Classification::composite(
                n.clone(),
                TheoremTag::TrialDivision,
                CompositeEvidence::NontrivialFactor { d: nat(d) },
                ops,
            ));
        }
    }
    let nm1 = n - 1u32;
    Ok(Classification::prime(
        Certificate {
            n: n.clone(),
            theorem: TheoremTag::TrialDivision,
            a: Natural::one(),
            factors: factor(&nm1).factors().to_vec(),
            m: nm1,
            basis: None,
            witnesses: vec![],
            side_conditions: vec![SideCondition::NoSmallDivisor],
        },
        ops,
    ))
}

/// One Fermat check. A residue of 1 proves nothing, so the best this can
/// say is [`crate::Verdict::Inconclusive`].
pub fn fermat_test(n: &Natural, base: &Natural) -> Result<Classification> {
    if *n < nat(3) {
        return Err(Error::precondition("fermat", "n must be at least 3"));
    }
    let max = n - 2u32;
    if *base < nat(2) || *base > max {
        return Err(Error::BaseOutOfRange {
            base: base.clone(),
            max,
        });
    }
    let b = u64::try_from(base).expect("base below n - 1 fits the search range");
    let mut s = Searcher::new(n, WitnessSearch::single(b));
    let out = s.fermat(b, FermatStep::Full);
    Ok(match out {
        Ok(_) => Classification::inconclusive(
            n.clone(),
            TheoremTag::Fermat,
            InconclusiveReason::FermatPassed { base: base.clone() },
            s.ops,
        ),
        Err(ev) => Classification::composite(n.clone(), TheoremTag::Fermat, ev, s.ops),
    })
}

/// Lucas's converse of Fermat's little theorem: a single base `b` with
/// `b^(n-1) = 1` and `b^((n-1)/q) != 1` for every prime `q | n-1`.
pub fn lucas_converse(
    n: &Natural,
    n_minus_1: &Factorization,
    search: WitnessSearch,
) -> Result<Classification> {
    if *n < nat(2) {
        return Err(Error::precondition(
            "lucas-converse",
            "n must be at least 2",
        ));
    }
    let nm1 = n - 1u32;
    if *n_minus_1.target() != nm1 {
        return Err(Error::FactorizationMismatch {
            product: n_minus_1.target().clone(),
            expected: nm1,
        });
    }
    let exponents: Vec<Natural> = n_minus_1.primes().map(|q| &nm1 / q).collect();
    let mut s = Searcher::new(n, search);
    Ok(match s.find(FermatStep::Full, &exponents) {
        Probe::Found(w) => Classification::prime(
            Certificate {
                n: n.clone(),
                theorem: TheoremTag::LucasConverse,
                a: Natural::one(),
                m: nm1,
                factors: n_minus_1.factors().to_vec(),
                basis: None,
                witnesses: vec![w],
                side_conditions: vec![],
            },
            s.ops,
        ),
        Probe::Composite(ev) => {
            Classification::composite(n.clone(), TheoremTag::LucasConverse, ev, s.ops)
        }
        Probe::Exhausted { bases_tried } => Classification::inconclusive(
            n.clone(),
            TheoremTag::LucasConverse,
            InconclusiveReason::NoWitness { bases_tried },
            s.ops,
        ),
    })
}

/// Pocklington's test over `n - 1 = F*R` with `gcd(F, R) = 1` and `F > R`.
///
/// Needs a base with `b^(n-1) = 1` and `gcd(b^((n-1)/q) - 1, n) = 1` for
/// every prime `q | F`. The gcd count in [`Classification::ops`] is the
/// overhead the form-specific tests avoid.
pub fn pocklington(
    n: &Natural,
    f: &Natural,
    r: &Natural,
    f_factors: &Factorization,
    search: WitnessSearch,
) -> Result<Classification> {
    const NAME: &str = "pocklington";
    if *n < nat(3) {
        return Err(Error::precondition(NAME, "n must be at least 3"));
    }
    let nm1 = n - 1u32;
    if f * r != nm1 {
        return Err(Error::precondition(NAME, format!("F*R = {} != n-1", f * r)));
    }
    if !f.gcd(r).is_one() {
        return Err(Error::precondition(NAME, "gcd(F, R) != 1"));
    }
    if f <= r {
        return Err(Error::precondition(NAME, "F must exceed R"));
    }
    if f_factors.target() != f {
        return Err(Error::FactorizationMismatch {
            product: f_factors.target().clone(),
            expected: f.clone(),
        });
    }

    let mut s = Searcher::new(n, search);
    let mut tried = 0;
    'bases: for base in search.bases(n) {
        tried += 1;
        let fermat = match s.fermat(base, FermatStep::Full) {
            Ok(c) => c,
            Err(ev) => {
                return Ok(Classification::composite(
                    n.clone(),
                    TheoremTag::Pocklington,
                    ev,
                    s.ops,
                ))
            }
        };
        let b = nat(base);
        let mut checks = vec![fermat];
        let mut side = Vec::new();
        for q in f_factors.primes() {
            let e = &nm1 / q;
            let residue = s.pow(&b, &e);
            let shifted = (&residue + n - 1u32) % n;
            let g = s.gcd(&shifted);
            if g == *n {
                // residue is 1: this base says nothing about q
                continue 'bases;
            }
            if !g.is_one() {
                return Ok(Classification::composite(
                    n.clone(),
                    TheoremTag::Pocklington,
                    CompositeEvidence::GcdWitness { d: g },
                    s.ops,
                ));
            }
            side.push(SideCondition::GcdOne {
                q: q.clone(),
                residue: residue.clone(),
            });
            checks.push(Check {
                exponent: e,
                residue,
                expect: Expect::NotOne,
            });
        }
        return Ok(Classification::prime(
            Certificate {
                n: n.clone(),
                theorem: TheoremTag::Pocklington,
                a: r.clone(),
                m: f.clone(),
                factors: f_factors.factors().to_vec(),
                basis: None,
                witnesses: vec![Witness { base: b, checks }],
                side_conditions: side,
            },
            s.ops,
        ));
    }
    Ok(Classification::inconclusive(
        n.clone(),
        TheoremTag::Pocklington,
        InconclusiveReason::NoWitness { bases_tried: tried },
        s.ops,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor;
    use crate::verdict::Verdict;

    #[test]
    fn trial_division_small() {
        assert!(trial_division(&nat(2)).unwrap().is_certified_prime());
        assert!(trial_division(&nat(547)).unwrap().is_certified_prime());
        let c = trial_division(&nat(341)).unwrap();
        assert_eq!(
            c.composite_evidence(),
            Some(&CompositeEvidence::NontrivialFactor { d: nat(11) })
        );
        assert!(trial_division(&nat(1)).is_err());
    }

    #[test]
    fn fermat_examples() {
        let c = fermat_test(&nat(341), &nat(2)).unwrap();
        assert_eq!(c.verdict(), Verdict::Inconclusive);
        let c = fermat_test(&nat(341), &nat(3)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedComposite);
        match c.composite_evidence().unwrap() {
            CompositeEvidence::FermatFailure { base, residue } => {
                assert_eq!(*base, nat(3));
                assert_eq!(*residue, nat(3).modpow(&nat(340), &nat(341)));
                assert_ne!(*residue, nat(1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            fermat_test(&nat(15), &nat(4)).unwrap().verdict(),
            Verdict::Inconclusive
        );
    }

    #[test]
    fn fermat_gcd_gives_factor() {
        let c = fermat_test(&nat(341), &nat(11)).unwrap();
        assert_eq!(
            c.composite_evidence(),
            Some(&CompositeEvidence::NontrivialFactor { d: nat(11) })
        );
    }

    #[test]
    fn fermat_rejects_bad_base() {
        assert!(matches!(
            fermat_test(&nat(341), &nat(1)),
            Err(Error::BaseOutOfRange { .. })
        ));
        assert!(matches!(
            fermat_test(&nat(341), &nat(340)),
            Err(Error::BaseOutOfRange { .. })
        ));
        assert!(fermat_test(&nat(2), &nat(2)).is_err());
    }

    #[test]
    fn lucas_examples() {
        let c = lucas_converse(&nat(7867), &factor(&nat(7866)), WitnessSearch::up_to(10)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        // 2^(7866/3) = 1, so base 2 fails the q = 3 check and 3 is the first witness
        assert_eq!(c.certificate().unwrap().witnesses[0].base, nat(3));

        let c = lucas_converse(&nat(341), &factor(&nat(340)), WitnessSearch::up_to(10)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedComposite);

        let c = lucas_converse(&nat(3), &factor(&nat(2)), WitnessSearch::up_to(10)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        let w = &c.certificate().unwrap().witnesses[0];
        assert_eq!(w.base, nat(2));
        assert_eq!(w.checks[1].residue, nat(2));
    }

    #[test]
    fn lucas_rejects_wrong_factorization() {
        assert!(matches!(
            lucas_converse(&nat(7867), &factor(&nat(7865)), WitnessSearch::up_to(10)),
            Err(Error::FactorizationMismatch { .. })
        ));
    }

    #[test]
    fn pocklington_examples() {
        let f = Factorization::from_pairs(121, &[(11, 2)]).unwrap();
        let c = pocklington(&nat(727), &nat(121), &nat(6), &f, WitnessSearch::up_to(10)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(c.ops().gcds, 1);
        let cert = c.certificate().unwrap();
        assert_eq!(cert.witnesses[0].checks[1].residue, nat(590));

        let f = Factorization::from_pairs(437, &[(19, 1), (23, 1)]).unwrap();
        let c = pocklington(
            &nat(7867),
            &nat(437),
            &nat(18),
            &f,
            WitnessSearch::up_to(10),
        )
        .unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(c.ops().gcds, 2);
        let residues: Vec<_> = c.certificate().unwrap().witnesses[0].checks[1..]
            .iter()
            .map(|ch| ch.residue.clone())
            .collect();
        assert_eq!(residues, vec![nat(5437), nat(7369)]);

        let f = Factorization::from_pairs(20, &[(2, 2), (5, 1)]).unwrap();
        let c = pocklington(&nat(341), &nat(20), &nat(17), &f, WitnessSearch::up_to(10)).unwrap();
        assert_ne!(c.verdict(), Verdict::CertifiedPrime);
    }

    #[test]
    fn pocklington_preconditions() {
        let f = Factorization::from_pairs(6, &[(2, 1), (3, 1)]).unwrap();
        // F < R
        assert!(pocklington(&nat(727), &nat(6), &nat(121), &f, WitnessSearch::up_to(10)).is_err());
        // F*R != n-1
        let f = Factorization::from_pairs(121, &[(11, 2)]).unwrap();
        assert!(pocklington(&nat(729), &nat(121), &nat(6), &f, WitnessSearch::up_to(10)).is_err());
        // gcd(F, R) != 1: 7867 - 1 = 7866 = 2*3^2*19*23 with F = 3*19*23, R = 6
        let f = Factorization::from_pairs(1311, &[(3, 1), (19, 1), (23, 1)]).unwrap();
        assert!(pocklington(
            &nat(7867),
            &nat(1311),
            &nat(6),
            &f,
            WitnessSearch::up_to(10)
        )
        .is_err());
    }
}
