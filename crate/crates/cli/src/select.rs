//! Theorem selection for `primecert test`.

use num_traits::{One, Zero};
use serde::Serialize;

use primecert::arith::{gcd, PrimePower};
use primecert::classic::{fermat_test, lucas_converse, pocklington, trial_division};
use primecert::optimized::{
    decompose, extended_lucas, fermat_only, general_test, partial_exponent_test, test_ap1,
    test_ap2, test_ap3, test_apk, FormDecomposition, PhiDivisibilityBasis,
};
use primecert::{
    factor, nat, Classification, Factorization, Natural, TheoremTag, Verdict, WitnessSearch,
};

use crate::config::TestArgs;
use crate::UsageError;

/// `n - 1` is only factored automatically below this many bits.
pub const AUTO_FACTOR_MAX_BITS: u64 = 128;

/// The order tests are tried in when no theorem is forced.
pub const PRECEDENCE: [TheoremTag; 8] = [
    TheoremTag::SquareForm,
    TheoremTag::CubeForm,
    TheoremTag::PowerOfPrime,
    TheoremTag::ApPlusOne,
    TheoremTag::SingleFactor,
    TheoremTag::ExtendedLucas,
    TheoremTag::LucasConverse,
    TheoremTag::Pocklington,
];

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Attempt {
    NotApplicable {
        theorem: TheoremTag,
        reason: String,
    },
    Ran {
        theorem: TheoremTag,
        verdict: Verdict,
    },
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub classification: Classification,
    pub attempts: Vec<Attempt>,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub search: WitnessSearch,
    pub euler_variant: bool,
    /// Whether Pocklington may be used as the last resort.
    pub pocklington: bool,
}

type Run = primecert::Result<Classification>;

/// The form `n` is tested under.
enum Form {
    Auto,
    Power { p: Natural, k: u32 },
    Split { a: Natural, m: Natural },
}

struct Selector {
    n: Natural,
    nm1: Natural,
    form: Form,
    opts: Options,
    nm1_factors: Option<Option<Factorization>>,
}

fn usage(e: impl std::fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

impl Selector {
    fn new(args: &TestArgs, opts: Options) -> Result<Self, UsageError> {
        let n = args.n.clone();
        if n < nat(2) {
            return Err(usage(format!("n must be at least 2, got {n}")));
        }
        let nm1 = &n - 1u32;
        let form = match (&args.p, args.k, &args.m) {
            (Some(p), Some(k), None) => {
                decompose(&n, p, k).map_err(usage)?;
                Form::Power { p: p.clone(), k }
            }
            (None, None, Some(m)) => {
                if m.is_zero() || !(&nm1 % m).is_zero() {
                    return Err(usage(format!("m = {m} does not divide n-1 = {nm1}")));
                }
                let a = &nm1 / m;
                if let Some(given) = &args.a {
                    if *given != a {
                        return Err(usage(format!("n != a*m + 1 with a = {given}, m = {m}")));
                    }
                }
                Form::Split { a, m: m.clone() }
            }
            (None, None, None) => Form::Auto,
            _ => return Err(usage("give either --p with --k, or --m")),
        };
        Ok(Selector {
            n,
            nm1,
            form,
            opts,
            nm1_factors: None,
        })
    }

    /// Full factorization of `n - 1`, or `None` when `n` is too large to
    /// factor without help.
    fn nm1_factors(&mut self) -> Option<&Factorization> {
        if self.nm1_factors.is_none() {
            let f = (self.nm1.bits() <= AUTO_FACTOR_MAX_BITS).then(|| factor(&self.nm1));
            self.nm1_factors = Some(f);
        }
        self.nm1_factors.as_ref().unwrap().as_ref()
    }

    /// Odd primes of `n - 1` with their exponents, largest prime first.
    fn odd_primes_desc(&mut self) -> Option<Vec<(Natural, u32)>> {
        let f = self.nm1_factors()?;
        let mut v: Vec<_> = f
            .factors()
            .iter()
            .filter(|pp| pp.prime != nat(2))
            .map(|pp| (pp.prime.clone(), pp.exponent))
            .collect();
        v.reverse();
        Some(v)
    }

    /// The first decomposition `n - 1 = a*q^k` (largest `q` first) on which
    /// `test` does not reject its hypotheses.
    fn first_power(
        &mut self,
        exponent: impl Fn(u32) -> Option<u32>,
        test: impl Fn(&FormDecomposition) -> Run,
    ) -> Run {
        match &self.form {
            Form::Power { p, k } => return test(&decompose(&self.n, p, *k)?),
            Form::Split { m, .. } => {
                let f = factor(m);
                return match f.factors() {
                    [pp] => test(&decompose(&self.n, &pp.prime, pp.exponent)?),
                    _ => Err(not_applicable("m is not a prime power")),
                };
            }
            Form::Auto => {}
        }
        let Some(primes) = self.odd_primes_desc() else {
            return Err(too_large());
        };
        let mut last = Err(not_applicable("n-1 has no odd prime factor"));
        for (q, s) in primes {
            let Some(k) = exponent(s) else { continue };
            let d = decompose(&self.n, &q, k)?;
            last = test(&d);
            if last.is_ok() {
                break;
            }
        }
        last
    }

    /// `(a, m, factors of m)` for the extended Lucas test: `m` is the given
    /// part, or else the shortest run of the largest prime powers of `n - 1`
    /// whose cofactor falls below the least prime used.
    fn split(&mut self) -> primecert::Result<(Natural, Natural, Factorization)> {
        match &self.form {
            Form::Split { a, m } => {
                let (a, m) = (a.clone(), m.clone());
                let f = factor(&m);
                Ok((a, m, f))
            }
            Form::Power { p, k } => {
                let m = p.pow(*k);
                let f = Factorization::new(m.clone(), vec![PrimePower::new(p.clone(), *k)])?;
                Ok((&self.nm1 / &m, m, f))
            }
            Form::Auto => {
                let nm1 = self.nm1.clone();
                let f = self.nm1_factors().ok_or_else(too_large)?;
                let mut taken: Vec<PrimePower> = Vec::new();
                let mut m = Natural::one();
                for pp in f.factors().iter().rev() {
                    m *= pp.value();
                    taken.push(pp.clone());
                    let a = &nm1 / &m;
                    if a < pp.prime {
                        taken.reverse();
                        let fm = Factorization::new(m.clone(), taken)?;
                        return Ok((a, m, fm));
                    }
                }
                Err(not_applicable(
                    "no split of n-1 has a below the least prime of m",
                ))
            }
        }
    }

    /// `F` and `R` for Pocklington: the given split if it qualifies, else
    /// the largest prime powers of `n - 1` until `F > R`.
    fn pocklington_split(&mut self) -> primecert::Result<(Natural, Natural, Factorization)> {
        if !matches!(self.form, Form::Auto) {
            if let Ok((r, f, ff)) = self.split() {
                if f > r && gcd(&f, &r).is_one() {
                    return Ok((f, r, ff));
                }
            }
        }
        let nm1 = self.nm1.clone();
        let f = self.nm1_factors().ok_or_else(too_large)?;
        let mut taken = Vec::new();
        let mut big_f = Natural::one();
        for pp in f.factors().iter().rev() {
            big_f *= pp.value();
            taken.push(pp.clone());
            let r = &nm1 / &big_f;
            if big_f > r {
                taken.reverse();
                let ff = Factorization::new(big_f.clone(), taken)?;
                return Ok((big_f, r, ff));
            }
        }
        Err(not_applicable(
            "n-1 has no factored part exceeding its cofactor",
        ))
    }

    fn run(&mut self, theorem: TheoremTag) -> Run {
        let search = self.opts.search;
        let n = self.n.clone();
        match theorem {
            TheoremTag::TrialDivision => trial_division(&n),
            TheoremTag::Fermat => fermat_test(&n, &nat(search.first())),
            TheoremTag::SquareForm => {
                self.first_power(|s| (s >= 2).then_some(2), |d| test_ap2(d, search))
            }
            TheoremTag::CubeForm => {
                self.first_power(|s| (s >= 3).then_some(3), |d| test_ap3(d, search))
            }
            TheoremTag::PowerOfPrime => self.first_power(Some, |d| test_apk(d, search)),
            TheoremTag::ApPlusOne => {
                let euler = self.opts.euler_variant;
                self.first_power(|_| Some(1), |d| test_ap1(d, search, euler))
            }
            TheoremTag::FermatBound => {
                let base = nat(search.first());
                self.first_power(|_| Some(1), |d| fermat_only(d, &base))
            }
            TheoremTag::SingleFactor => {
                self.first_power(Some, |d| general_test(&d.n, &d.p, search))
            }
            TheoremTag::ExtendedLucas => {
                let (a, m, f) = self.split()?;
                extended_lucas(&n, &a, &m, &f, search)
            }
            TheoremTag::PartialExponent => {
                let (a, m, f) = self.split()?;
                let full = self.nm1_factors().cloned().ok_or_else(too_large)?;
                let chosen: Vec<(Natural, u32)> = f
                    .factors()
                    .iter()
                    .map(|pp| (pp.prime.clone(), pp.exponent))
                    .collect();
                let basis = strongest_basis(&n, &a, &m, f.factors())
                    .ok_or_else(|| not_applicable("no basis for m | phi(n) applies"))?;
                partial_exponent_test(&n, &full, &chosen, basis, search)
            }
            TheoremTag::LucasConverse => {
                let f = self.nm1_factors().cloned().ok_or_else(too_large)?;
                lucas_converse(&n, &f, search)
            }
            TheoremTag::Pocklington => {
                let (f, r, ff) = self.pocklington_split()?;
                pocklington(&n, &f, &r, &ff, search)
            }
        }
    }
}

/// Proven bases first, then trial division, then the conjecture.
fn strongest_basis(
    n: &Natural,
    a: &Natural,
    m: &Natural,
    factors: &[PrimePower],
) -> Option<PhiDivisibilityBasis> {
    use PhiDivisibilityBasis::*;
    [
        SmallCofactor,
        PrimePower,
        EvenCofactor,
        SquareForm,
        CubeForm,
        TrialDivision,
        Conjectured,
    ]
    .into_iter()
    .find(|b| b.validate(n, a, m, factors).is_ok())
}

fn not_applicable(why: &str) -> primecert::Error {
    primecert::Error::Precondition {
        test: "selection",
        condition: why.into(),
    }
}

fn too_large() -> primecert::Error {
    not_applicable("n-1 is too large to factor automatically")
}

/// Runs `--theorem`, `--classic`, or the precedence order.
pub fn select(args: &TestArgs, opts: Options) -> Result<Selection, UsageError> {
    let mut sel = Selector::new(args, opts)?;
    let forced = if args.classic {
        Some(TheoremTag::LucasConverse)
    } else {
        args.theorem
    };
    if let Some(t) = forced {
        let c = sel.run(t).map_err(usage)?;
        return Ok(Selection {
            attempts: vec![Attempt::Ran {
                theorem: t,
                verdict: c.verdict(),
            }],
            classification: c,
        });
    }
    if sel.n == nat(2) {
        let c = trial_division(&sel.n).map_err(usage)?;
        return Ok(Selection {
            attempts: vec![Attempt::Ran {
                theorem: TheoremTag::TrialDivision,
                verdict: c.verdict(),
            }],
            classification: c,
        });
    }

    let mut attempts = Vec::new();
    let mut fallback: Option<Classification> = None;
    for t in PRECEDENCE {
        if t == TheoremTag::Pocklington && !opts.pocklington {
            continue;
        }
        match sel.run(t) {
            Err(e) => attempts.push(Attempt::NotApplicable {
                theorem: t,
                reason: e.to_string(),
            }),
            Ok(c) => {
                attempts.push(Attempt::Ran {
                    theorem: t,
                    verdict: c.verdict(),
                });
                if c.verdict() != Verdict::Inconclusive {
                    return Ok(Selection {
                        classification: c,
                        attempts,
                    });
                }
                fallback.get_or_insert(c);
            }
        }
    }
    let classification = match fallback {
        Some(c) => c,
        None => {
            // nothing applied: at least say whether a Fermat check fails
            let c = sel.run(TheoremTag::Fermat).map_err(usage)?;
            attempts.push(Attempt::Ran {
                theorem: TheoremTag::Fermat,
                verdict: c.verdict(),
            });
            c
        }
    };
    Ok(Selection {
        classification,
        attempts,
    })
}
