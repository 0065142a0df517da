use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use primecert::structure::Family;
use primecert::{parse_natural, Natural, TheoremTag};
use serde::Serialize;

pub const DEFAULT_BASE_SEARCH_LIMIT: u64 = 64;

/// Primality certificates for a*p^k+1 and a*m+1.
///
/// Exit status: 0 certified prime / success, 1 certified composite,
/// 2 inconclusive, 3 conditionally prime (0 with --accept-conditional),
/// 10 counterexample or invariant violation, 64 usage error.
#[derive(Debug, Clone, Parser)]
#[command(name = "primecert", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads. PRIMECERT_WORKERS, when set, takes precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub workers: Option<usize>,

    /// Highest witness base tried (bases run 2, 3, ... in order).
    #[arg(long, global = true, default_value_t = DEFAULT_BASE_SEARCH_LIMIT)]
    pub base_search_limit: u64,

    /// Treat a conditionally prime verdict as a pass (exit 0 instead of 3).
    #[arg(long, global = true)]
    pub accept_conditional: bool,

    /// Where to write the replay dump when a counterexample turns up.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Certify n prime or composite.
    ///
    /// Without --theorem, tests run in this order until one is decisive:
    /// square-form, cube-form, power-of-prime, ap-plus-one, single-factor,
    /// extended-lucas, lucas-converse, pocklington. When neither --p nor
    /// --m is given the form is read off a factorization of n-1.
    Test(TestArgs),
    /// List base-b Fermat pseudoprimes a*p^k+1 for primes p <= p-bound.
    Census(CensusArgs),
    /// Exhaustive checks of the number theory, or certificate replay.
    Verify(VerifyArgs),
    /// Operation counts of the optimized tests against Pocklington.
    Bench(BenchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Test(_) => "test",
            Command::Census(_) => "census",
            Command::Verify(_) => "verify",
            Command::Bench(_) => "bench",
        }
    }
}

fn natural(s: &str) -> Result<Natural, String> {
    parse_natural(s).ok_or_else(|| format!("{s:?} is not a non-negative decimal integer"))
}

fn theorem(s: &str) -> Result<TheoremTag, String> {
    TheoremTag::from_name(s).ok_or_else(|| {
        let names: Vec<_> = TheoremTag::ALL.iter().map(|t| t.name()).collect();
        format!(
            "unknown theorem {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

fn family(s: &str) -> Result<Family, String> {
    Family::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

/// Values of `a` for a census: `6`, `2,4,6` or `1..10` (inclusive).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct AList(pub Vec<u64>);

fn a_list(s: &str) -> Result<AList, String> {
    let bad = || format!("{s:?} is not a value, a comma list or an inclusive range lo..hi");
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        return Ok(AList((lo..=hi).collect()));
    }
    s.split(',')
        .map(|v| v.trim().parse::<u64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()
        .map(AList)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TestArgs {
    #[arg(long, value_parser = natural)]
    #[serde(with = "primecert::natser")]
    pub n: Natural,

    /// Odd prime with p^k | n-1.
    #[arg(long, value_parser = natural, requires = "k", conflicts_with = "m")]
    #[serde(with = "primecert::natser::opt")]
    pub p: Option<Natural>,

    #[arg(long, requires = "p")]
    pub k: Option<u32>,

    /// Factored part for n = a*m + 1.
    #[arg(long, value_parser = natural)]
    #[serde(with = "primecert::natser::opt")]
    pub m: Option<Natural>,

    /// Cofactor for n = a*m + 1; derived from n and m when omitted.
    #[arg(long, value_parser = natural, requires = "m")]
    #[serde(with = "primecert::natser::opt")]
    pub a: Option<Natural>,

    /// Try only this base.
    #[arg(long)]
    pub base: Option<u64>,

    /// Run exactly one test.
    #[arg(long, value_parser = theorem, conflicts_with = "classic")]
    pub theorem: Option<TheoremTag>,

    /// Run Lucas's converse on a full factorization of n-1.
    #[arg(long)]
    pub classic: bool,

    /// Screen with b^(n-1) = 1 instead of b^((n-1)/2) = +-1 in ap-plus-one.
    #[arg(long)]
    pub no_euler: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CensusArgs {
    /// Cofactor a: one value, a comma list, or lo..hi.
    #[arg(long, value_parser = a_list)]
    pub a: AList,

    #[arg(long, default_value_t = 1)]
    pub k: u32,

    #[arg(long, default_value_t = 2)]
    pub base: u64,

    #[arg(long)]
    pub p_bound: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("mode").required(true).args(["family", "conjecture41", "diophantine", "certificate"])))]
pub struct VerifyArgs {
    /// Check that m | phi(n) holds exactly for the primes of a family.
    #[arg(long, value_parser = family, requires = "n_bound")]
    pub family: Option<Family>,

    #[arg(long)]
    pub n_bound: Option<u64>,

    /// Search for composite a*m+1 with a below the least prime of m and
    /// m | phi(n).
    #[arg(long, visible_alias = "phi-conjecture", requires_all = ["a_bound", "m_bound"])]
    pub conjecture41: bool,

    #[arg(long)]
    pub a_bound: Option<u64>,

    #[arg(long)]
    pub m_bound: Option<u64>,

    /// Solve (xz+1)(yz+1) = az^3+1 for z <= z-bound.
    #[arg(long, requires_all = ["a", "z_bound"])]
    pub diophantine: bool,

    #[arg(long)]
    pub a: Option<u64>,

    #[arg(long)]
    pub z_bound: Option<u64>,

    /// Replay the certificates in a JSON file.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    /// Comma-separated primes to compare on.
    #[arg(long, value_parser = natural, value_delimiter = ',')]
    #[serde(serialize_with = "nat_seq")]
    pub n: Vec<Natural>,

    /// Add this many random primes a*p+1 with p of --bits bits.
    #[arg(long, default_value_t = 0)]
    pub random: usize,

    #[arg(long, default_value_t = 64)]
    pub bits: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn nat_seq<S: serde::Serializer>(v: &[Natural], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_str_radix(10)))
}

/// Everything a run depends on. Worker count and dump path are left out of
/// the serialized form: they do not change results.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub global: GlobalArgs,
    #[serde(flatten)]
    pub command: Command,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        RunConfig {
            global: cli.global,
            command: cli.command,
        }
    }

    /// Worker count after applying `PRIMECERT_WORKERS`.
    pub fn workers(&self, env: Option<&str>) -> Result<usize, String> {
        let from_env = match env {
            Some(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("PRIMECERT_WORKERS={v:?} is not a positive integer"))?,
            ),
            None => None,
        };
        let w = from_env
            .or(self.global.workers)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if w == 0 {
            return Err("worker count must be at least 1".into());
        }
        Ok(w)
    }

    pub fn strict(&self) -> bool {
        !self.global.accept_conditional
    }
}
