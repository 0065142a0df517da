//! Deterministic witness search shared by every test.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive};

use crate::arith::{gcd, mod_pow, nat, Natural};
use crate::verdict::{Check, CompositeEvidence, Expect, OpCounts, Witness};

/// Inclusive range of candidate bases, tried in ascending order.
///
/// Bases outside `[2, n-1]` are skipped for a given `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessSearch {
    first: u64,
    last: u64,
}

impl WitnessSearch {
    /// Bases `2..=limit`.
    pub fn up_to(limit: u64) -> Self {
        WitnessSearch {
            first: 2,
            last: limit,
        }
    }

    /// Exactly one base.
    pub fn single(base: u64) -> Self {
        WitnessSearch {
            first: base,
            last: base,
        }
    }

    pub fn range(first: u64, last: u64) -> Self {
        WitnessSearch { first, last }
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn last(&self) -> u64 {
        self.last
    }

    pub(crate) fn bases(&self, n: &Natural) -> impl Iterator<Item = u64> {
        let cap = (n - 1u32).to_u64().unwrap_or(u64::MAX);
        let last = self.last.min(cap);
        self.first.max(2)..=last
    }
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch::up_to(64)
    }
}

/// How a base is screened before its non-unity checks are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FermatStep {
    /// `b^(n-1) = 1`.
    Full,
    /// `b^((n-1)/2) = +-1`.
    Euler,
}

pub(crate) enum Probe {
    Found(Witness),
    Composite(CompositeEvidence),
    Exhausted { bases_tried: u64 },
}

/// Runs witness searches against one modulus, counting operations and
/// caching Fermat residues per base.
pub(crate) struct Searcher<'a> {
    pub n: &'a Natural,
    pub n_minus_1: Natural,
    pub ops: OpCounts,
    search: WitnessSearch,
    fermat_cache: HashMap<(u64, bool), Result<Check, CompositeEvidence>>,
}

impl<'a> Searcher<'a> {
    pub fn new(n: &'a Natural, search: WitnessSearch) -> Self {
        Searcher {
            n,
            n_minus_1: n - 1u32,
            ops: OpCounts::default(),
            search,
            fermat_cache: HashMap::new(),
        }
    }

    pub fn pow(&mut self, base: &Natural, exponent: &Natural) -> Natural {
        self.ops.modexps += 1;
        mod_pow(base, exponent, self.n).expect("modulus checked by caller")
    }

    pub fn gcd(&mut self, a: &Natural) -> Natural {
        self.ops.gcds += 1;
        gcd(a, self.n)
    }

    /// The Fermat screen for one base. `Err` carries proof of compositeness.
    pub fn fermat(&mut self, base: u64, step: FermatStep) -> Result<Check, CompositeEvidence> {
        let key = (base, step == FermatStep::Euler);
        if let Some(hit) = self.fermat_cache.get(&key) {
            return hit.clone();
        }
        let b = nat(base);
        let out = match step {
            FermatStep::Full => {
                let e = self.n_minus_1.clone();
                let r = self.pow(&b, &e);
                if r.is_one() {
                    Ok(Check {
                        exponent: e,
                        residue: r,
                        expect: Expect::One,
                    })
                } else {
                    Err(self.classify_failure(&b, r))
                }
            }
            FermatStep::Euler => {
                let e = &self.n_minus_1 >> 1u32;
                let r = self.pow(&b, &e);
                if Expect::PlusMinusOne.holds(&r, self.n) {
                    Ok(Check {
                        exponent: e,
                        residue: r,
                        expect: Expect::PlusMinusOne,
                    })
                } else {
                    let sq = &r * &r % self.n;
                    if sq.is_one() {
                        // r is a square root of 1 other than +-1
                        let d = self.gcd(&(&r - 1u32));
                        Err(CompositeEvidence::NontrivialFactor { d })
                    } else {
                        Err(self.classify_failure(&b, sq))
                    }
                }
            }
        };
        self.fermat_cache.insert(key, out.clone());
        out
    }

    fn classify_failure(&mut self, b: &Natural, residue: Natural) -> CompositeEvidence {
        let g = self.gcd(b);
        if !g.is_one() && g != *self.n {
            CompositeEvidence::NontrivialFactor { d: g }
        } else {
            CompositeEvidence::FermatFailure {
                base: b.clone(),
                residue,
            }
        }
    }

    /// Ascending search for a base that passes the Fermat screen and leaves
    /// every exponent in `non_unity` off 1.
    pub fn find(&mut self, step: FermatStep, non_unity: &[Natural]) -> Probe {
        let mut tried = 0;
        for base in self.search.bases(self.n) {
            tried += 1;
            let fermat = match self.fermat(base, step) {
                Ok(c) => c,
                Err(e) => return Probe::Composite(e),
            };
            let b = nat(base);
            let mut checks = vec![fermat];
            let mut ok = true;
            for e in non_unity {
                let r = self.pow(&b, e);
                if r.is_one() {
                    ok = false;
                    break;
                }
                checks.push(Check {
                    exponent: e.clone(),
                    residue: r,
                    expect: Expect::NotOne,
                });
            }
            if ok {
                return Probe::Found(Witness { base: b, checks });
            }
        }
        Probe::Exhausted { bases_tried: tried }
    }
}
