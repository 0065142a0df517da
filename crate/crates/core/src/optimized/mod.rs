//! Pocklington-style tests specialised to `n = a*p^k + 1` and `n = a*m + 1`.
//!
//! Each function transcribes one criterion. It checks that criterion's
//! hypotheses, searches for witnesses in ascending base order, and emits a
//! certificate. None of them falls back to another test when it comes up
//! inconclusive; choosing between them is the caller's business.
//!
//! The common thread: once the shape of `n` guarantees that `m | phi(n)`
//! forces primality, a base with `b^(n-1) = 1` and `b^((n-1)/q) != 1`
//! settles the question without the gcd evaluations Pocklington needs.

mod basis;

pub(crate) use basis::trial_divide_progression;
pub use basis::PhiDivisibilityBasis;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_perfect_power, nat, oracle_is_prime, Factorization, Natural, PrimePower};
use crate::error::{Error, Result};
use crate::search::{FermatStep, Probe, Searcher, WitnessSearch};
use crate::verdict::{
    Certificate, Classification, Conjecture, InconclusiveReason, OpCounts, SideCondition,
    TheoremTag, Witness,
};

/// `n = a * p^k + 1` with `p` prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDecomposition {
    #[serde(with = "crate::natser")]
    pub n: Natural,
    #[serde(with = "crate::natser")]
    pub a: Natural,
    #[serde(with = "crate::natser")]
    pub p: Natural,
    pub k: u32,
    /// `p^k`
    #[serde(with = "crate::natser")]
    pub m: Natural,
    /// Primality of `p` was taken on the caller's word.
    pub prime_asserted: bool,
}

/// Splits `n - 1` as `a * p^k`, checking `p` with the primality oracle.
pub fn decompose(n: &Natural, p: &Natural, k: u32) -> Result<FormDecomposition> {
    if !oracle_is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    split(n, p, k, false)
}

/// As [`decompose`], but `p` is assumed prime. The assumption is recorded in
/// every certificate built from the result.
pub fn decompose_asserted(n: &Natural, p: &Natural, k: u32) -> Result<FormDecomposition> {
    if *p < nat(2) {
        return Err(Error::NotPrime(p.clone()));
    }
    split(n, p, k, true)
}

fn split(n: &Natural, p: &Natural, k: u32, prime_asserted: bool) -> Result<FormDecomposition> {
    if k == 0 {
        return Err(Error::precondition("decompose", "k must be positive"));
    }
    if *n < nat(2) {
        return Err(Error::precondition("decompose", "n must be at least 2"));
    }
    let m = p.pow(k);
    let (a, rem) = (n - 1u32).div_rem(&m);
    if !rem.is_zero() || a.is_zero() {
        return Err(Error::NotDivisible {
            divisor: m,
            value: n - 1u32,
        });
    }
    Ok(FormDecomposition {
        n: n.clone(),
        a,
        p: p.clone(),
        k,
        m,
        prime_asserted,
    })
}

impl FormDecomposition {
    fn certificate(&self, theorem: TheoremTag, witness: Witness) -> Certificate {
        let mut side_conditions = Vec::new();
        if self.prime_asserted {
            side_conditions.push(SideCondition::PrimeAsserted { p: self.p.clone() });
        }
        Certificate {
            n: self.n.clone(),
            theorem,
            a: self.a.clone(),
            m: self.m.clone(),
            factors: vec![PrimePower::new(self.p.clone(), self.k)],
            basis: None,
            witnesses: vec![witness],
            side_conditions,
        }
    }

    fn require_odd_p(&self, test: &'static str) -> Result<()> {
        if self.p.is_even() {
            return Err(Error::precondition(test, "p must be an odd prime"));
        }
        Ok(())
    }

    fn require_k(&self, test: &'static str, k: u32) -> Result<()> {
        if self.k != k {
            return Err(Error::precondition(
                test,
                format!("k must be {k}, got {}", self.k),
            ));
        }
        Ok(())
    }

    fn require_a_below_p(&self, test: &'static str) -> Result<()> {
        if self.a >= self.p {
            return Err(Error::precondition(
                test,
                format!("need a < p; a = {}, p = {}", self.a, self.p),
            ));
        }
        Ok(())
    }
}

fn finish(
    d: &FormDecomposition,
    theorem: TheoremTag,
    probe: Probe,
    ops: OpCounts,
    exhausted: impl FnOnce(u64) -> InconclusiveReason,
) -> Classification {
    match probe {
        Probe::Found(w) => Classification::prime(d.certificate(theorem, w), ops),
        Probe::Composite(ev) => Classification::composite(d.n.clone(), theorem, ev, ops),
        Probe::Exhausted { bases_tried } => {
            Classification::inconclusive(d.n.clone(), theorem, exhausted(bases_tried), ops)
        }
    }
}

/// `n = a*p + 1`, `a` even, `a < 4(p+1)`: a base with `b^(n-1) = 1` and
/// `b^a != 1` proves `n` prime.
///
/// With `euler_variant` the Fermat screen is `b^((n-1)/2) = +-1` instead.
pub fn test_ap1(
    d: &FormDecomposition,
    search: WitnessSearch,
    euler_variant: bool,
) -> Result<Classification> {
    const NAME: &str = "ap-plus-one";
    d.require_k(NAME, 1)?;
    d.require_odd_p(NAME)?;
    if d.a.is_odd() {
        return Err(Error::precondition(
            NAME,
            format!("a must be even, got {}", d.a),
        ));
    }
    if d.a >= (&d.p + 1u32) * 4u32 {
        return Err(Error::precondition(
            NAME,
            format!("need a < 4(p+1); a = {}, p = {}", d.a, d.p),
        ));
    }
    let step = if euler_variant {
        FermatStep::Euler
    } else {
        FermatStep::Full
    };
    let mut s = Searcher::new(&d.n, search);
    let probe = s.find(step, std::slice::from_ref(&d.a));
    Ok(finish(
        d,
        TheoremTag::ApPlusOne,
        probe,
        s.ops,
        |bases_tried| InconclusiveReason::PossibleComposite { bases_tried },
    ))
}

/// Largest `a * log2(b)` for which `b^a` is evaluated exactly when checking
/// the Fermat-only bound. Larger inputs fail the precondition.
pub const FERMAT_BOUND_MAX_BITS: u64 = 64 * 16;

/// `n = a*p + 1`, `a` even, `p > max((a-1)/4, (b^a-1)/a)`: a single Fermat
/// check to base `b` decides primality outright.
pub fn fermat_only(d: &FormDecomposition, base: &Natural) -> Result<Classification> {
    const NAME: &str = "fermat-bound";
    d.require_k(NAME, 1)?;
    d.require_odd_p(NAME)?;
    if d.a.is_odd() {
        return Err(Error::precondition(
            NAME,
            format!("a must be even, got {}", d.a),
        ));
    }
    if *base < nat(2) {
        return Err(Error::BaseOutOfRange {
            base: base.clone(),
            max: &d.n - 1u32,
        });
    }
    // p > (a-1)/4  <=>  4p > a-1
    if &d.p * 4u32 < d.a {
        return Err(Error::precondition(NAME, "need p > (a-1)/4"));
    }
    let bits = d.a.to_u64().and_then(|a| a.checked_mul(base.bits()));
    if bits.is_none_or(|b| b > FERMAT_BOUND_MAX_BITS) {
        return Err(Error::precondition(NAME, "b^a too large to evaluate"));
    }
    let a = d.a.to_u32().expect("bounded by FERMAT_BOUND_MAX_BITS");
    // p > (b^a-1)/a  <=>  p*a > b^a - 1
    if &d.p * &d.a < base.pow(a) {
        return Err(Error::precondition(NAME, "need p > (b^a-1)/a"));
    }
    let b = base.to_u64().expect("b^a fits the bit budget");
    let mut s = Searcher::new(&d.n, WitnessSearch::single(b));
    Ok(match s.fermat(b, FermatStep::Full) {
        Ok(check) => Classification::prime(
            d.certificate(
                TheoremTag::FermatBound,
                Witness {
                    base: base.clone(),
                    checks: vec![check],
                },
            ),
            s.ops,
        ),
        Err(ev) => Classification::composite(d.n.clone(), TheoremTag::FermatBound, ev, s.ops),
    })
}

/// Any `n` with an odd prime `p | n-1`, `m = (n-1)/p`.
///
/// Phase one trial-divides `n` by every `s*p+1` in `(1, sqrt(n)]` (odd ones
/// only when `n` is odd). Phase two looks for `b` with `b^(n-1) = 1` and
/// `b^m != 1`.
pub fn general_test(n: &Natural, p: &Natural, search: WitnessSearch) -> Result<Classification> {
    const NAME: &str = "single-factor";
    if *n < nat(3) {
        return Err(Error::precondition(NAME, "n must be at least 3"));
    }
    if p.is_even() {
        return Err(Error::precondition(NAME, "p must be an odd prime"));
    }
    if !oracle_is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let nm1 = n - 1u32;
    let (m, rem) = nm1.div_rem(p);
    if !rem.is_zero() {
        return Err(Error::NotDivisible {
            divisor: p.clone(),
            value: nm1,
        });
    }

    let scan = trial_divide_progression(n, p);
    let mut s = Searcher::new(n, search);
    s.ops.trial_divisions = scan.tested;
    if let Some(d) = scan.divisor {
        return Ok(Classification::composite(
            n.clone(),
            TheoremTag::SingleFactor,
            crate::verdict::CompositeEvidence::NontrivialFactor { d },
            s.ops,
        ));
    }
    Ok(match s.find(FermatStep::Full, std::slice::from_ref(&m)) {
        Probe::Found(w) => Classification::prime(
            Certificate {
                n: n.clone(),
                theorem: TheoremTag::SingleFactor,
                a: m,
                m: p.clone(),
                factors: vec![PrimePower::new(p.clone(), 1)],
                basis: None,
                witnesses: vec![w],
                side_conditions: vec![SideCondition::TrialDivision {
                    p: p.clone(),
                    bound: scan.bound,
                    odd_only: scan.odd_only,
                    candidates_tested: scan.tested,
                }],
            },
            s.ops,
        ),
        Probe::Composite(ev) => {
            Classification::composite(n.clone(), TheoremTag::SingleFactor, ev, s.ops)
        }
        Probe::Exhausted { bases_tried } => Classification::inconclusive(
            n.clone(),
            TheoremTag::SingleFactor,
            InconclusiveReason::NoWitness { bases_tried },
            s.ops,
        ),
    })
}

/// `n = a*p^k + 1`, `a < p`: a base with `b^(n-1) = 1` and
/// `b^((n-1)/p) != 1` proves `n` prime.
pub fn test_apk(d: &FormDecomposition, search: WitnessSearch) -> Result<Classification> {
    const NAME: &str = "power-of-prime";
    d.require_odd_p(NAME)?;
    d.require_a_below_p(NAME)?;
    let e = (&d.n - 1u32) / &d.p;
    let mut s = Searcher::new(&d.n, search);
    let probe = s.find(FermatStep::Full, &[e]);
    Ok(finish(
        d,
        TheoremTag::PowerOfPrime,
        probe,
        s.ops,
        |bases_tried| InconclusiveReason::NoWitness { bases_tried },
    ))
}

/// `n = a*p^2 + 1`, `a < p`: the non-unity exponent shrinks to `a`.
pub fn test_ap2(d: &FormDecomposition, search: WitnessSearch) -> Result<Classification> {
    const NAME: &str = "square-form";
    d.require_k(NAME, 2)?;
    d.require_odd_p(NAME)?;
    d.require_a_below_p(NAME)?;
    let mut s = Searcher::new(&d.n, search);
    let probe = s.find(FermatStep::Full, std::slice::from_ref(&d.a));
    Ok(finish(
        d,
        TheoremTag::SquareForm,
        probe,
        s.ops,
        |bases_tried| InconclusiveReason::NoWitness { bases_tried },
    ))
}

/// `n = a*p^3 + 1`, `a` not a perfect cube, `p > a^2 + 2a`: exponent `a`.
pub fn test_ap3(d: &FormDecomposition, search: WitnessSearch) -> Result<Classification> {
    const NAME: &str = "cube-form";
    d.require_k(NAME, 3)?;
    if is_perfect_power(&d.a, 3) {
        return Err(Error::precondition(
            NAME,
            format!("a = {} is a perfect cube", d.a),
        ));
    }
    if d.p <= &d.a * &d.a + &d.a * 2u32 {
        return Err(Error::precondition(
            NAME,
            format!("need p > a^2 + 2a; a = {}, p = {}", d.a, d.p),
        ));
    }
    let mut s = Searcher::new(&d.n, search);
    let probe = s.find(FermatStep::Full, std::slice::from_ref(&d.a));
    Ok(finish(
        d,
        TheoremTag::CubeForm,
        probe,
        s.ops,
        |bases_tried| InconclusiveReason::NoWitness { bases_tried },
    ))
}

fn merge_witness(witnesses: &mut Vec<Witness>, w: Witness) {
    match witnesses.iter_mut().find(|x| x.base == w.base) {
        Some(existing) => {
            for c in w.checks {
                if existing.check_for(&c.exponent).is_none() {
                    existing.checks.push(c);
                }
            }
        }
        None => witnesses.push(w),
    }
}

/// `n = a*m + 1` with `a` below the least prime of `m`: one base per prime
/// `q | m` with `b^(n-1) = 1` and `b^((n-1)/q) != 1`.
///
/// The verdict is only as strong as the [`PhiDivisibilityBasis`] behind the
/// split: certified when `a <= 2` or `m` is a prime power, otherwise
/// conditional on [`Conjecture::PhiDivisibility`].
pub fn extended_lucas(
    n: &Natural,
    a: &Natural,
    m: &Natural,
    m_factors: &Factorization,
    search: WitnessSearch,
) -> Result<Classification> {
    const NAME: &str = "extended-lucas";
    if m_factors.target() != m {
        return Err(Error::FactorizationMismatch {
            product: m_factors.target().clone(),
            expected: m.clone(),
        });
    }
    if *m <= Natural::one() {
        return Err(Error::precondition(NAME, "m must exceed 1"));
    }
    if a * m + 1u32 != *n {
        return Err(Error::precondition(
            NAME,
            format!("n != a*m + 1 with a = {a}, m = {m}"),
        ));
    }
    let least = m_factors.least_prime().expect("m > 1");
    if a.is_zero() || a >= least {
        return Err(Error::precondition(
            NAME,
            format!("need 0 < a < least prime of m; a = {a}, least prime = {least}"),
        ));
    }
    // a < least prime of m already forces gcd(a, m) = 1
    let basis = PhiDivisibilityBasis::for_split(a, m, m_factors.factors())
        .expect("Conjectured basis always applies here");

    let nm1 = n - 1u32;
    let mut s = Searcher::new(n, search);
    let mut witnesses = Vec::new();
    for q in m_factors.primes() {
        match s.find(FermatStep::Full, &[&nm1 / q]) {
            Probe::Found(w) => merge_witness(&mut witnesses, w),
            Probe::Composite(ev) => {
                return Ok(Classification::composite(
                    n.clone(),
                    TheoremTag::ExtendedLucas,
                    ev,
                    s.ops,
                ))
            }
            Probe::Exhausted { bases_tried } => {
                return Ok(Classification::inconclusive(
                    n.clone(),
                    TheoremTag::ExtendedLucas,
                    InconclusiveReason::NoWitness { bases_tried },
                    s.ops,
                ))
            }
        }
    }
    let cert = Certificate {
        n: n.clone(),
        theorem: TheoremTag::ExtendedLucas,
        a: a.clone(),
        m: m.clone(),
        factors: m_factors.factors().to_vec(),
        basis: Some(basis),
        witnesses,
        side_conditions: vec![],
    };
    Ok(if basis.is_proven() {
        Classification::prime(cert, s.ops)
    } else {
        Classification::conditional(cert, Conjecture::PhiDivisibility, s.ops)
    })
}

/// Exponent-slack test over a full factorization of `n - 1`.
///
/// For each chosen `(p_i, t_i)` with `t_i >= 1`, where `p_i^s_i || n-1`,
/// a base must satisfy `b^(n-1) = 1` and `b^((n-1)/p_i^(s_i - t_i + 1)) != 1`.
/// That gives `m = prod p_i^t_i | phi(n)`; `basis` must justify why that
/// suffices.
pub fn partial_exponent_test(
    n: &Natural,
    n_minus_1: &Factorization,
    chosen: &[(Natural, u32)],
    basis: PhiDivisibilityBasis,
    search: WitnessSearch,
) -> Result<Classification> {
    const NAME: &str = "partial-exponent";
    if *n < nat(3) {
        return Err(Error::precondition(NAME, "n must be at least 3"));
    }
    let nm1 = n - 1u32;
    if *n_minus_1.target() != nm1 {
        return Err(Error::FactorizationMismatch {
            product: n_minus_1.target().clone(),
            expected: nm1,
        });
    }
    let mut targets: Vec<(Natural, u32, u32)> = Vec::new();
    for (p, t) in chosen {
        let s_i = n_minus_1.exponent_of(p);
        if s_i == 0 {
            return Err(Error::precondition(
                NAME,
                format!("{p} does not divide n-1"),
            ));
        }
        if *t > s_i {
            return Err(Error::precondition(
                NAME,
                format!("t = {t} exceeds the exponent {s_i} of {p} in n-1"),
            ));
        }
        if *t >= 1 && !targets.iter().any(|(q, _, _)| q == p) {
            targets.push((p.clone(), *t, s_i));
        }
    }
    targets.sort_by(|x, y| x.0.cmp(&y.0));
    if targets.is_empty() {
        return Ok(Classification::inconclusive(
            n.clone(),
            TheoremTag::PartialExponent,
            InconclusiveReason::EmptyCheckSet,
            OpCounts::default(),
        ));
    }
    let factors: Vec<PrimePower> = targets
        .iter()
        .map(|(p, t, _)| PrimePower::new(p.clone(), *t))
        .collect();
    let m = crate::arith::product_of(&factors);
    let a = &nm1 / &m;
    basis.validate(n, &a, &m, &factors)?;

    let mut s = Searcher::new(n, search);
    let mut witnesses = Vec::new();
    for (p, t, s_i) in &targets {
        let e = &nm1 / p.pow(s_i - t + 1);
        match s.find(FermatStep::Full, &[e]) {
            Probe::Found(w) => merge_witness(&mut witnesses, w),
            Probe::Composite(ev) => {
                return Ok(Classification::composite(
                    n.clone(),
                    TheoremTag::PartialExponent,
                    ev,
                    s.ops,
                ))
            }
            Probe::Exhausted { bases_tried } => {
                return Ok(Classification::inconclusive(
                    n.clone(),
                    TheoremTag::PartialExponent,
                    InconclusiveReason::NoWitness { bases_tried },
                    s.ops,
                ))
            }
        }
    }
    let mut side_conditions = Vec::new();
    if basis == PhiDivisibilityBasis::TrialDivision {
        let scan = trial_divide_progression(n, &factors[0].prime);
        s.ops.trial_divisions += scan.tested;
        side_conditions.push(SideCondition::TrialDivision {
            p: factors[0].prime.clone(),
            bound: scan.bound,
            odd_only: scan.odd_only,
            candidates_tested: scan.tested,
        });
    }
    let cert = Certificate {
        n: n.clone(),
        theorem: TheoremTag::PartialExponent,
        a,
        m,
        factors,
        basis: Some(basis),
        witnesses,
        side_conditions,
    };
    Ok(if basis.is_proven() {
        Classification::prime(cert, s.ops)
    } else {
        Classification::conditional(cert, Conjecture::PhiDivisibility, s.ops)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor, mod_pow};
    use crate::verdict::{CompositeEvidence, Expect, Verdict};

    fn search() -> WitnessSearch {
        WitnessSearch::up_to(64)
    }

    fn residues(c: &Classification) -> Vec<(u64, u64)> {
        c.certificate()
            .unwrap()
            .witnesses
            .iter()
            .flat_map(|w| w.checks.iter())
            .map(|ch| (ch.exponent.to_u64().unwrap(), ch.residue.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&nat(547), &nat(13), 1).unwrap().a, nat(42));
        assert_eq!(decompose(&nat(727), &nat(11), 2).unwrap().a, nat(6));
        assert_eq!(decompose(&nat(700001), &nat(7), 1).unwrap().a, nat(100000));
    }

    #[test]
    fn decompose_errors() {
        assert!(matches!(
            decompose(&nat(547), &nat(5), 1),
            Err(Error::NotDivisible { .. })
        ));
        assert!(matches!(
            decompose(&nat(547), &nat(21), 1),
            Err(Error::NotPrime(_))
        ));
        assert!(decompose(&nat(547), &nat(13), 0).is_err());
        let d = decompose_asserted(&nat(547), &nat(13), 1).unwrap();
        assert!(d.prime_asserted);
    }

    #[test]
    fn ap1_547_euler() {
        let d = decompose(&nat(547), &nat(13), 1).unwrap();
        let c = test_ap1(&d, WitnessSearch::single(2), true).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(273, 546), (42, 475)]);
        assert_eq!(
            c.certificate().unwrap().witnesses[0].checks[0].expect,
            Expect::PlusMinusOne
        );
        assert_eq!(c.ops().gcds, 0);
    }

    #[test]
    fn ap1_547_full() {
        let d = decompose(&nat(547), &nat(13), 1).unwrap();
        let c = test_ap1(&d, search(), false).unwrap();
        assert_eq!(residues(&c), vec![(546, 1), (42, 475)]);
    }

    #[test]
    fn ap1_341_is_inconclusive() {
        let d = decompose(&nat(341), &nat(17), 1).unwrap();
        let c = test_ap1(&d, WitnessSearch::single(2), false).unwrap();
        assert_eq!(c.verdict(), Verdict::Inconclusive);
        assert_eq!(
            c.inconclusive_reason(),
            Some(&InconclusiveReason::PossibleComposite { bases_tried: 1 })
        );
        // the full search hits a Fermat failure at base 3
        let c = test_ap1(&d, search(), false).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedComposite);
    }

    #[test]
    fn ap1_gates() {
        let d = decompose(&nat(9), &nat(2), 1).unwrap();
        assert!(matches!(
            test_ap1(&d, search(), false),
            Err(Error::Precondition { .. })
        ));
        // a odd: 4*3 + 1 = 13 with a = 4 is fine; 3*5 + 1 = 16 has a odd
        let d = decompose(&nat(16), &nat(5), 1).unwrap();
        assert!(test_ap1(&d, search(), false).is_err());
        // a >= 4(p+1): 16*3 + 1 = 49
        let d = decompose(&nat(49), &nat(3), 1).unwrap();
        assert!(test_ap1(&d, search(), false).is_err());
    }

    #[test]
    fn fermat_only_examples() {
        let d = decompose(&nat(67), &nat(11), 1).unwrap();
        assert_eq!(
            fermat_only(&d, &nat(2)).unwrap().verdict(),
            Verdict::CertifiedPrime
        );
        let d = decompose(&nat(11), &nat(5), 1).unwrap();
        assert_eq!(
            fermat_only(&d, &nat(2)).unwrap().verdict(),
            Verdict::CertifiedPrime
        );
        let d = decompose(&nat(15), &nat(7), 1).unwrap();
        let c = fermat_only(&d, &nat(2)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedComposite);
        assert_eq!(
            c.composite_evidence(),
            Some(&CompositeEvidence::FermatFailure {
                base: nat(2),
                residue: nat(4)
            })
        );
    }

    #[test]
    fn fermat_only_bound() {
        // a = 6, b = 2: (2^6 - 1)/6 = 10.5, so p = 7 is below the bound
        let d = decompose(&nat(43), &nat(7), 1).unwrap();
        assert!(fermat_only(&d, &nat(2)).is_err());
        // a = 2000: b^a fits, but p would have to be astronomically large
        let d = decompose(&nat(2000 * 1009 + 1), &nat(1009), 1).unwrap();
        assert!(fermat_only(&d, &nat(2)).is_err());
    }

    #[test]
    fn general_test_examples() {
        let c = general_test(&nat(700001), &nat(7), WitnessSearch::single(2)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(700000, 1), (100000, 158306)]);
        assert_eq!(c.ops().trial_divisions, 59);

        let c = general_test(&nat(561), &nat(5), search()).unwrap();
        assert_eq!(
            c.composite_evidence(),
            Some(&CompositeEvidence::NontrivialFactor { d: nat(11) })
        );

        let c = general_test(&nat(29), &nat(7), WitnessSearch::single(2)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(28, 1), (4, 16)]);
        assert_eq!(c.ops().trial_divisions, 0);
    }

    #[test]
    fn general_test_errors() {
        assert!(matches!(
            general_test(&nat(29), &nat(5), search()),
            Err(Error::NotDivisible { .. })
        ));
        assert!(general_test(&nat(29), &nat(2), search()).is_err());
        assert!(matches!(
            general_test(&nat(28), &nat(9), search()),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn apk_examples() {
        let d = decompose(&nat(727), &nat(11), 2).unwrap();
        let c = test_apk(&d, WitnessSearch::single(2)).unwrap();
        assert_eq!(residues(&c), vec![(726, 1), (66, 590)]);
        assert_eq!(c.ops().gcds, 0);

        let d = decompose(&nat(23), &nat(11), 1).unwrap();
        let c = test_apk(&d, WitnessSearch::single(5)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(22, 1), (2, 2)]);

        // a = p
        let d = decompose(&nat(2 * 4 + 1), &nat(2), 2).unwrap();
        assert!(test_apk(&d, search()).is_err());
        let d = decompose(&nat(5 * 5 + 1), &nat(5), 1).unwrap();
        assert!(test_apk(&d, search()).is_err());
    }

    #[test]
    fn ap2_examples() {
        let d = decompose(&nat(727), &nat(11), 2).unwrap();
        let c = test_ap2(&d, WitnessSearch::single(2)).unwrap();
        assert_eq!(residues(&c), vec![(726, 1), (6, 64)]);

        let d = decompose(&nat(51), &nat(5), 2).unwrap();
        let c = test_ap2(&d, search()).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedComposite);
        assert_eq!(
            c.composite_evidence(),
            Some(&CompositeEvidence::FermatFailure {
                base: nat(2),
                residue: nat(4)
            })
        );

        let d = decompose(&nat(11 * 9 + 1), &nat(3), 2).unwrap();
        assert!(test_ap2(&d, search()).is_err());
    }

    #[test]
    fn ap3_examples() {
        let d = decompose(&nat(2663), &nat(11), 3).unwrap();
        let c = test_ap3(&d, WitnessSearch::single(2)).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(2662, 1), (2, 4)]);

        let d = decompose(&nat(8 * 1331 + 1), &nat(11), 3).unwrap();
        assert!(matches!(
            test_ap3(&d, search()),
            Err(Error::Precondition { .. })
        ));
        let d = decompose(&nat(2 * 343 + 1), &nat(7), 3).unwrap();
        assert!(matches!(
            test_ap3(&d, search()),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn extended_lucas_7867() {
        let m_f = factor(&nat(437));
        let c = extended_lucas(
            &nat(7867),
            &nat(18),
            &nat(437),
            &m_f,
            WitnessSearch::single(2),
        )
        .unwrap();
        assert_eq!(c.verdict(), Verdict::ConditionallyPrime);
        assert_eq!(c.conjecture(), Some(Conjecture::PhiDivisibility));
        assert_eq!(residues(&c), vec![(7866, 1), (414, 5437), (342, 7369)]);
        assert_eq!(c.ops().modexps, 3);
        assert_eq!(c.ops().gcds, 0);
    }

    #[test]
    fn extended_lucas_small_cofactor_is_certified() {
        // 2*11 + 1 = 23 and 2*(3*5) + 1 = 31
        let c = extended_lucas(&nat(23), &nat(2), &nat(11), &factor(&nat(11)), search()).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(
            c.certificate().unwrap().basis,
            Some(PhiDivisibilityBasis::SmallCofactor)
        );
        let c = extended_lucas(&nat(31), &nat(2), &nat(15), &factor(&nat(15)), search()).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
    }

    #[test]
    fn extended_lucas_errors() {
        let m_f = factor(&nat(19));
        assert!(extended_lucas(&nat(7867), &nat(18), &nat(19), &m_f, search()).is_err());
        let m_f = factor(&nat(437));
        assert!(extended_lucas(&nat(20 * 437 + 1), &nat(20), &nat(437), &m_f, search()).is_err());
        assert!(matches!(
            extended_lucas(&nat(7867), &nat(18), &nat(437), &factor(&nat(19)), search()),
            Err(Error::FactorizationMismatch { .. })
        ));
    }

    #[test]
    fn partial_exponent_727() {
        let full = Factorization::from_pairs(726, &[(2, 1), (3, 1), (11, 2)]).unwrap();
        let c = partial_exponent_test(
            &nat(727),
            &full,
            &[(nat(11), 1)],
            PhiDivisibilityBasis::SquareForm,
            WitnessSearch::single(2),
        )
        .unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        assert_eq!(residues(&c), vec![(726, 1), (6, 64)]);
        // same base and exponent as the square-form test
        let d = decompose(&nat(727), &nat(11), 2).unwrap();
        let direct = test_ap2(&d, WitnessSearch::single(2)).unwrap();
        assert_eq!(residues(&direct), residues(&c));
    }

    #[test]
    fn partial_exponent_full_is_lucas() {
        let n = nat(7867);
        let full = factor(&nat(7866));
        let chosen: Vec<(Natural, u32)> = full
            .factors()
            .iter()
            .map(|f| (f.prime.clone(), f.exponent))
            .collect();
        let c = partial_exponent_test(
            &n,
            &full,
            &chosen,
            PhiDivisibilityBasis::SmallCofactor,
            search(),
        )
        .unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime);
        let cert = c.certificate().unwrap();
        assert_eq!(cert.a, nat(1));
        // every prime q of n-1 has a witness with b^((n-1)/q) != 1
        for q in full.primes() {
            let e = &(&n - 1u32) / q;
            assert!(cert.witnesses.iter().any(|w| {
                w.check_for(&e).is_some_and(|ch| ch.residue != nat(1))
                    && mod_pow(&w.base, &e, &n).unwrap() == ch_res(w, &e)
            }));
        }
    }

    fn ch_res(w: &Witness, e: &Natural) -> Natural {
        w.check_for(e).unwrap().residue.clone()
    }

    #[test]
    fn partial_exponent_edge_cases() {
        let full = Factorization::from_pairs(726, &[(2, 1), (3, 1), (11, 2)]).unwrap();
        let c = partial_exponent_test(
            &nat(727),
            &full,
            &[(nat(11), 0), (nat(3), 0)],
            PhiDivisibilityBasis::SquareForm,
            search(),
        )
        .unwrap();
        assert_eq!(
            c.inconclusive_reason(),
            Some(&InconclusiveReason::EmptyCheckSet)
        );

        assert!(partial_exponent_test(
            &nat(727),
            &full,
            &[(nat(11), 3)],
            PhiDivisibilityBasis::SquareForm,
            search()
        )
        .is_err());
        // basis does not fit the split
        assert!(partial_exponent_test(
            &nat(727),
            &full,
            &[(nat(3), 1)],
            PhiDivisibilityBasis::SquareForm,
            search()
        )
        .is_err());
    }
}
