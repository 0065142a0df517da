//! Deterministic primality certificates for integers of the form `a*p^k + 1`
//! and `a*m + 1`.
//!
//! Each test in [`optimized`] needs only modular exponentiations: once the
//! shape of `n` rules out composite factorizations, a single base with
//! `b^(n-1) = 1` and one non-unity check settles primality, with no
//! Pocklington-style gcd. [`classic`] has the baselines they are measured
//! against, [`replay`] re-checks emitted certificates, and [`structure`] and
//! [`census`] check the underlying number theory by exhaustive search.
//!
//! ```
//! use primecert::optimized::{decompose, test_apk};
//! use primecert::{nat, Verdict, WitnessSearch};
//!
//! let d = decompose(&nat(727), &nat(11), 2).unwrap();
//! let c = test_apk(&d, WitnessSearch::default()).unwrap();
//! assert_eq!(c.verdict(), Verdict::CertifiedPrime);
//! assert_eq!(c.ops().gcds, 0);
//! ```

pub mod arith;
pub mod census;
pub mod classic;
mod error;
pub mod natser;
pub mod optimized;
pub mod replay;
mod search;
pub mod structure;
pub mod verdict;

pub use arith::{factor, nat, oracle_is_prime, parse_natural, Factorization, Natural};
pub use error::{Error, Result};
pub use search::WitnessSearch;
pub use verdict::{
    Certificate, Classification, CompositeEvidence, Conjecture, InconclusiveReason, OpCounts,
    TheoremTag, Verdict,
};

/// The guide's code samples, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/certificates.md")]
    struct Certificates;
    #[doc = include_str!("../../../book/src/forms.md")]
    struct Forms;
    #[doc = include_str!("../../../book/src/splits.md")]
    struct Splits;
    #[doc = include_str!("../../../book/src/census.md")]
    struct Census;
    #[doc = include_str!("../../../book/src/structure.md")]
    struct Structure;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
