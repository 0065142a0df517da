//! Verdicts, certificates and the evidence behind them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Natural, PrimePower};
use crate::optimized::PhiDivisibilityBasis;

/// Which primality criterion produced a classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// Direct trial division, used only for tiny `n`.
    TrialDivision,
    /// Plain Fermat check; never certifies a prime.
    Fermat,
    /// One base, every prime of `n-1`.
    LucasConverse,
    /// Partial factorization `n-1 = F*R`, gcd side conditions.
    Pocklington,
    /// `n = a*p+1`, `a` even, `a < 4(p+1)`; exponent `a`.
    ApPlusOne,
    /// `n = a*p+1` with `p` past the base-dependent bound: one Fermat check.
    FermatBound,
    /// One odd prime `p | n-1` plus trial division by `s*p+1 <= sqrt(n)`.
    SingleFactor,
    /// `n = a*p^k+1`, `a < p`; exponent `(n-1)/p`.
    PowerOfPrime,
    /// `n = a*p^2+1`, `a < p`; exponent `a`.
    SquareForm,
    /// `n = a*p^3+1`, `a` not a cube, `p > a^2+2a`; exponent `a`.
    CubeForm,
    /// `n = a*m+1`, one base per prime of `m`.
    ExtendedLucas,
    /// Per-prime exponent slack over a full factorization of `n-1`.
    PartialExponent,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 12] = [
        TheoremTag::TrialDivision,
        TheoremTag::Fermat,
        TheoremTag::LucasConverse,
        TheoremTag::Pocklington,
        TheoremTag::ApPlusOne,
        TheoremTag::FermatBound,
        TheoremTag::SingleFactor,
        TheoremTag::PowerOfPrime,
        TheoremTag::SquareForm,
        TheoremTag::CubeForm,
        TheoremTag::ExtendedLucas,
        TheoremTag::PartialExponent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremTag::TrialDivision => "trial-division",
            TheoremTag::Fermat => "fermat",
            TheoremTag::LucasConverse => "lucas-converse",
            TheoremTag::Pocklington => "pocklington",
            TheoremTag::ApPlusOne => "ap-plus-one",
            TheoremTag::FermatBound => "fermat-bound",
            TheoremTag::SingleFactor => "single-factor",
            TheoremTag::PowerOfPrime => "power-of-prime",
            TheoremTag::SquareForm => "square-form",
            TheoremTag::CubeForm => "cube-form",
            TheoremTag::ExtendedLucas => "extended-lucas",
            TheoremTag::PartialExponent => "partial-exponent",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unproven statement a conditional verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjecture {
    /// For `n = a*m+1` with `a` below the least prime factor of `m`,
    /// `m | phi(n)` forces `n` prime.
    PhiDivisibility,
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conjecture::PhiDivisibility => {
                f.write_str("m | phi(a*m+1) implies prime when a < least prime of m")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedPrime,
    CertifiedComposite,
    ConditionallyPrime,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedPrime => "certified prime",
            Verdict::CertifiedComposite => "certified composite",
            Verdict::ConditionallyPrime => "conditionally prime",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// What a residue is required to be for a check to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    One,
    NotOne,
    PlusMinusOne,
}

impl Expect {
    pub fn holds(self, residue: &Natural, n: &Natural) -> bool {
        let one = residue == &Natural::from(1u32);
        match self {
            Expect::One => one,
            Expect::NotOne => !one,
            Expect::PlusMinusOne => one || residue + 1u32 == *n,
        }
    }
}

/// One recorded congruence `base^exponent = residue (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    #[serde(with = "crate::natser")]
    pub exponent: Natural,
    #[serde(with = "crate::natser")]
    pub residue: Natural,
    pub expect: Expect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "crate::natser")]
    pub base: Natural,
    pub checks: Vec<Check>,
}

impl Witness {
    pub fn check_for(&self, exponent: &Natural) -> Option<&Check> {
        self.checks.iter().find(|c| c.exponent == *exponent)
    }
}

/// A precondition that was established while certifying, recorded so that
/// replay can re-establish it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SideCondition {
    /// The caller vouched for the primality of `p`; replay does not re-test it.
    PrimeAsserted {
        #[serde(with = "crate::natser")]
        p: Natural,
    },
    /// No `s*p+1` with `1 < s*p+1 <= bound` divides `n`. When `odd_only`,
    /// even candidates were skipped because `n` is odd.
    TrialDivision {
        #[serde(with = "crate::natser")]
        p: Natural,
        #[serde(with = "crate::natser")]
        bound: Natural,
        odd_only: bool,
        candidates_tested: u64,
    },
    /// `gcd(residue - 1, n) = 1` where `residue = base^((n-1)/q)`.
    GcdOne {
        #[serde(with = "crate::natser")]
        q: Natural,
        #[serde(with = "crate::natser")]
        residue: Natural,
    },
    /// `n` has no divisor in `[2, sqrt(n)]`.
    NoSmallDivisor,
}

/// Replayable evidence of (conditional) primality.
///
/// Every certificate describes `n = a*m + 1` where `m` is the factored part
/// (`factors` multiply to `m`) and `a` the cofactor. For the Pocklington
/// certificate `m = F` and `a = R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(with = "crate::natser")]
    pub n: Natural,
    pub theorem: TheoremTag,
    #[serde(with = "crate::natser")]
    pub a: Natural,
    #[serde(with = "crate::natser")]
    pub m: Natural,
    pub factors: Vec<PrimePower>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<PhiDivisibilityBasis>,
    pub witnesses: Vec<Witness>,
    pub side_conditions: Vec<SideCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CompositeEvidence {
    /// `1 < d < n` and `d | n`.
    NontrivialFactor {
        #[serde(with = "crate::natser")]
        d: Natural,
    },
    /// `base^(n-1) mod n = residue != 1` with `gcd(base, n) = 1`.
    FermatFailure {
        #[serde(with = "crate::natser")]
        base: Natural,
        #[serde(with = "crate::natser")]
        residue: Natural,
    },
    /// `1 < d < n`, `d | n`, surfaced by a Pocklington gcd.
    GcdWitness {
        #[serde(with = "crate::natser")]
        d: Natural,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InconclusiveReason {
    /// Fermat check passed: prime or a pseudoprime to this base.
    FermatPassed {
        #[serde(with = "crate::natser")]
        base: Natural,
    },
    /// Every base in the search range passed Fermat but none satisfied the
    /// non-unity checks.
    NoWitness { bases_tried: u64 },
    /// As `NoWitness`, for the `a*p+1` test: every passing base had
    /// `b^a = 1`, which is exactly what a composite of this shape forces.
    PossibleComposite { bases_tried: u64 },
    /// The chosen exponents left nothing to check.
    EmptyCheckSet,
}

/// Operation counts, kept for differential cost comparisons.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub modexps: u64,
    pub gcds: u64,
    pub trial_divisions: u64,
}

impl std::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.modexps += rhs.modexps;
        self.gcds += rhs.gcds;
        self.trial_divisions += rhs.trial_divisions;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Certificate(Certificate),
    Composite(CompositeEvidence),
    Inconclusive(InconclusiveReason),
}

/// A verdict plus the evidence for it.
///
/// Constructors enforce the pairing: certified and conditional verdicts
/// carry a [`Certificate`], composite verdicts carry [`CompositeEvidence`],
/// and a conditional verdict names its [`Conjecture`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(with = "crate::natser")]
    n: Natural,
    verdict: Verdict,
    theorem: TheoremTag,
    evidence: Evidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conjecture: Option<Conjecture>,
    ops: OpCounts,
}

impl Classification {
    pub fn prime(certificate: Certificate, ops: OpCounts) -> Self {
        Classification {
            n: certificate.n.clone(),
            verdict: Verdict::CertifiedPrime,
            theorem: certificate.theorem,
            evidence: Evidence::Certificate(certificate),
            conjecture: None,
            ops,
        }
    }

    pub fn conditional(certificate: Certificate, conjecture: Conjecture, ops: OpCounts) -> Self {
        Classification {
            n: certificate.n.clone(),
            verdict: Verdict::ConditionallyPrime,
            theorem: certificate.theorem,
            evidence: Evidence::Certificate(certificate),
            conjecture: Some(conjecture),
            ops,
        }
    }

    pub fn composite(
        n: Natural,
        theorem: TheoremTag,
        evidence: CompositeEvidence,
        ops: OpCounts,
    ) -> Self {
        Classification {
            n,
            verdict: Verdict::CertifiedComposite,
            theorem,
            evidence: Evidence::Composite(evidence),
            conjecture: None,
            ops,
        }
    }

    pub fn inconclusive(
        n: Natural,
        theorem: TheoremTag,
        reason: InconclusiveReason,
        ops: OpCounts,
    ) -> Self {
        Classification {
            n,
            verdict: Verdict::Inconclusive,
            theorem,
            evidence: Evidence::Inconclusive(reason),
            conjecture: None,
            ops,
        }
    }

    pub fn n(&self) -> &Natural {
        &self.n
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn theorem(&self) -> TheoremTag {
        self.theorem
    }

    pub fn evidence(&self) -> &Evidence {
        &self.evidence
    }

    pub fn conjecture(&self) -> Option<Conjecture> {
        self.conjecture
    }

    pub fn ops(&self) -> OpCounts {
        self.ops
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.evidence {
            Evidence::Certificate(c) => Some(c),
            _ => None,
        }
    }

    pub fn composite_evidence(&self) -> Option<&CompositeEvidence> {
        match &self.evidence {
            Evidence::Composite(c) => Some(c),
            _ => None,
        }
    }

    pub fn inconclusive_reason(&self) -> Option<&InconclusiveReason> {
        match &self.evidence {
            Evidence::Inconclusive(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_certified_prime(&self) -> bool {
        self.verdict == Verdict::CertifiedPrime
    }

    pub fn is_certified_composite(&self) -> bool {
        self.verdict == Verdict::CertifiedComposite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nat;

    #[test]
    fn tag_names_round_trip() {
        for t in TheoremTag::ALL {
            assert_eq!(TheoremTag::from_name(t.name()), Some(t));
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.name()));
        }
        assert_eq!(TheoremTag::from_name("nope"), None);
    }

    #[test]
    fn expect_minus_one() {
        let n = nat(547);
        assert!(Expect::PlusMinusOne.holds(&nat(546), &n));
        assert!(Expect::PlusMinusOne.holds(&nat(1), &n));
        assert!(!Expect::PlusMinusOne.holds(&nat(475), &n));
        assert!(Expect::NotOne.holds(&nat(475), &n));
        assert!(!Expect::One.holds(&nat(475), &n));
    }

    #[test]
    fn naturals_serialize_as_decimal_strings() {
        let ev = CompositeEvidence::FermatFailure {
            base: nat(3),
            residue: nat(56),
        };
        let json = serde_json::to_string(&ev).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"fermat-failure","base":"3","residue":"56"}"#
        );
        let back: CompositeEvidence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ev);
    }
}
