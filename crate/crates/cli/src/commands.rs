use std::fmt::Write;
use std::time::Instant;

use primecert::arith::{is_perfect_power, oracle_is_prime, oracle_is_prime_u64};
use primecert::census::census_sweep;
use primecert::replay::{replay, ReplayStatus};
use primecert::structure::{
    diophantine_search, phi_conjecture_search, verify_phi_equivalence, Family,
};
use primecert::{nat, Certificate, Classification, Natural, Verdict, WitnessSearch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{BenchArgs, CensusArgs, RunConfig, TestArgs, VerifyArgs};
use crate::output::{classification_text, to_value, verdict_exit, Document};
use crate::select::{select, Options};
use crate::{exit, Outcome, UsageError};

fn search(cfg: &RunConfig, base: Option<u64>) -> WitnessSearch {
    match base {
        Some(b) => WitnessSearch::single(b),
        None => WitnessSearch::up_to(cfg.global.base_search_limit),
    }
}

pub fn test(cfg: &RunConfig, args: &TestArgs) -> Result<Outcome, UsageError> {
    let opts = Options {
        search: search(cfg, args.base),
        euler_variant: !args.no_euler,
        pocklington: true,
    };
    let sel = select(args, opts)?;
    let c = sel.classification;
    let mut doc = Document::new(cfg);
    let mut text = classification_text(&c);
    let mut code = verdict_exit(c.verdict(), cfg.global.accept_conditional);
    let mut dump = None;

    if let Some(cert) = c.certificate() {
        doc.certificates.push(cert.clone());
        // a certificate that does not replay is a bug worth keeping
        if let Err(e) = replay(cert) {
            let _ = writeln!(
                text,
                "INVARIANT VIOLATION: emitted certificate fails replay: {e}"
            );
            doc.reports.push(json!({ "replay_failure": e.to_string() }));
            dump = Some(
                json!({ "kind": "replay-failure", "certificate": cert, "error": e.to_string() }),
            );
            code = exit::COUNTEREXAMPLE;
        }
    }
    doc.reports.push(json!({ "attempts": sel.attempts }));
    doc.verdicts.push(c);
    Ok(Outcome {
        exit: code,
        document: doc,
        text,
        dump,
    })
}

pub fn census(cfg: &RunConfig, args: &CensusArgs) -> Result<Outcome, UsageError> {
    let reports = census_sweep(&args.a.0, args.k, args.base, args.p_bound)
        .map_err(|e| UsageError(e.to_string()))?;
    let mut doc = Document::new(cfg);
    let mut text = String::new();
    let mut violations = Vec::new();
    for r in &reports {
        let ns: Vec<String> = r.pseudoprimes.iter().map(|pp| pp.n.to_string()).collect();
        let cutoff = r
            .theoretical_cutoff
            .as_ref()
            .map_or("none".to_string(), |c| c.to_string());
        let _ = writeln!(
            text,
            "a = {}, k = {}, base {}: {} pseudoprime(s) [{}]; p <= {} scanned ({} primes), cutoff {}, complete = {}",
            r.a,
            r.k,
            r.base,
            r.pseudoprimes.len(),
            ns.join(", "),
            r.p_bound,
            r.primes_scanned,
            cutoff,
            r.complete
        );
        for note in &r.notes {
            let _ = writeln!(text, "  note: {note}");
        }
        for v in r.violations() {
            let _ = writeln!(
                text,
                "  VIOLATION: n = {} (p = {}) lies past the cutoff",
                v.n, v.p
            );
            violations.push(json!({ "a": r.a.to_string(), "k": r.k, "pseudoprime": v }));
        }
        doc.reports.push(to_value(r));
    }
    let (code, dump) = if violations.is_empty() {
        (exit::SUCCESS, None)
    } else {
        (
            exit::COUNTEREXAMPLE,
            Some(json!({ "kind": "census-violation", "violations": violations })),
        )
    };
    Ok(Outcome {
        exit: code,
        document: doc,
        text,
        dump,
    })
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<Outcome, UsageError> {
    let mut doc = Document::new(cfg);
    let mut text = String::new();
    let mut code = exit::SUCCESS;
    let mut dump = None;

    if let (Some(family), Some(n_bound)) = (args.family, args.n_bound) {
        let r = verify_phi_equivalence(family, n_bound);
        let _ = writeln!(
            text,
            "family {}: n <= {}, {} checked ({} prime), {} counterexample(s)",
            family.name(),
            n_bound,
            r.checked,
            r.primes,
            r.counterexamples.len()
        );
        if family == Family::P2Relaxed {
            // the control family is expected to fail
            let _ = writeln!(
                text,
                "  control family: counterexamples expected without a < p"
            );
        } else if !r.counterexamples.is_empty() {
            code = exit::COUNTEREXAMPLE;
            dump = Some(json!({ "kind": "phi-equivalence", "report": r }));
        }
        doc.reports.push(to_value(&r));
    } else if args.conjecture41 {
        let (a_bound, m_bound) = (args.a_bound.unwrap_or(0), args.m_bound.unwrap_or(0));
        let r = phi_conjecture_search(a_bound, m_bound);
        let _ = writeln!(
            text,
            "phi-divisibility search: a <= {}, m <= {}, {} pairs checked, {} counterexample(s)",
            a_bound,
            m_bound,
            r.checked,
            r.counterexamples.len()
        );
        for c in &r.counterexamples {
            let _ = writeln!(text, "  COUNTEREXAMPLE: n = {} = {}*{} + 1", c.n, c.a, c.m);
        }
        if !r.counterexamples.is_empty() {
            code = exit::COUNTEREXAMPLE;
            dump = Some(json!({ "kind": "phi-conjecture", "report": r }));
        }
        doc.reports.push(to_value(&r));
    } else if args.diophantine {
        let (a, z_bound) = (args.a.unwrap_or(0), args.z_bound.unwrap_or(0));
        if a == 0 {
            return Err(UsageError("--a must be positive".into()));
        }
        let sols = diophantine_search(a, z_bound);
        let max_z = sols.iter().map(|s| s.z).max();
        let cube = is_perfect_power(&nat(a), 3);
        let bound = a.saturating_mul(a).saturating_add(a.saturating_mul(2));
        let beyond: Vec<_> = sols.iter().filter(|s| s.z > bound).collect();
        let _ = writeln!(
            text,
            "(xz+1)(yz+1) = {a}z^3+1, z <= {z_bound}: {} solution(s), max z = {}",
            sols.len(),
            max_z.map_or("none".into(), |z| z.to_string())
        );
        if cube {
            let _ = writeln!(text, "  a is a cube: no bound on z applies");
        } else {
            let _ = writeln!(text, "  bound z <= a^2 + 2a = {bound}");
            if !beyond.is_empty() {
                code = exit::COUNTEREXAMPLE;
                dump = Some(json!({ "kind": "diophantine", "a": a, "solutions": beyond }));
            }
        }
        doc.reports.push(json!({
            "a": a,
            "z_bound": z_bound,
            "cube": cube,
            "z_limit": if cube { Value::Null } else { json!(bound) },
            "max_z": max_z,
            "solutions": sols,
        }));
    } else if let Some(path) = &args.certificate {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
        let certs = parse_certificates(&raw)?;
        for cert in &certs {
            let entry = match replay(cert) {
                Ok(rep) => {
                    let status = match rep.status {
                        ReplayStatus::Certified => "certified".to_string(),
                        ReplayStatus::Conditional(c) => format!("conditional: {c}"),
                    };
                    let _ = writeln!(
                        text,
                        "n = {} ({}): replay ok, {status}",
                        cert.n, cert.theorem
                    );
                    if !rep.assumed_primes.is_empty() {
                        let assumed: Vec<String> =
                            rep.assumed_primes.iter().map(|p| p.to_string()).collect();
                        let _ = writeln!(text, "  assumed prime: {}", assumed.join(", "));
                    }
                    json!({
                        "n": cert.n.to_string(),
                        "theorem": cert.theorem,
                        "ok": true,
                        "status": status,
                        "assumed_primes": rep.assumed_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "modexps": rep.modexps,
                    })
                }
                Err(e) => {
                    let _ = writeln!(text, "n = {} ({}): REJECTED: {e}", cert.n, cert.theorem);
                    code = exit::INCONCLUSIVE;
                    json!({ "n": cert.n.to_string(), "theorem": cert.theorem, "ok": false, "error": e.to_string() })
                }
            };
            doc.reports.push(entry);
        }
        doc.certificates = certs;
    }
    Ok(Outcome {
        exit: code,
        document: doc,
        text,
        dump,
    })
}

/// A bare certificate, a list of them, or a document with `certificates`.
fn parse_certificates(raw: &str) -> Result<Vec<Certificate>, UsageError> {
    let bad = |e: serde_json::Error| UsageError(format!("not a certificate file: {e}"));
    let v: Value = serde_json::from_str(raw).map_err(bad)?;
    match v {
        Value::Object(ref o) if o.contains_key("certificates") => {
            serde_json::from_value(o["certificates"].clone()).map_err(bad)
        }
        Value::Array(_) => serde_json::from_value(v).map_err(bad),
        _ => serde_json::from_value(v).map(|c| vec![c]).map_err(bad),
    }
}

#[derive(Debug, Clone, Serialize)]
struct BenchSide {
    verdict: Verdict,
    theorem: primecert::TheoremTag,
    modexps: u64,
    gcds: u64,
    trial_divisions: u64,
    wall_time_us: f64,
}

impl BenchSide {
    fn new(c: &Classification, secs: f64) -> Self {
        let ops = c.ops();
        BenchSide {
            verdict: c.verdict(),
            theorem: c.theorem(),
            modexps: ops.modexps,
            gcds: ops.gcds,
            trial_divisions: ops.trial_divisions,
            wall_time_us: secs * 1e6,
        }
    }
}

/// `count` primes `n = a*p + 1` with `p` a prime of `bits` bits and `a`
/// even, at most 64.
pub fn random_corpus(count: usize, bits: u32, seed: u64) -> Result<Vec<Natural>, UsageError> {
    if !(3..=64).contains(&bits) {
        return Err(UsageError(format!("--bits must be in 3..=64, got {bits}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 1u64 << (bits - 1);
    let hi = if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(lo..=hi) | 1;
        if !oracle_is_prime_u64(p) {
            continue;
        }
        let a = 2 * rng.gen_range(1..=32u64);
        let n = nat(a) * p + 1u32;
        if oracle_is_prime(&n) {
            out.push(n);
        }
    }
    Ok(out)
}

pub fn bench(cfg: &RunConfig, args: &BenchArgs) -> Result<Outcome, UsageError> {
    let mut corpus = args.n.clone();
    corpus.extend(random_corpus(args.random, args.bits, args.seed)?);
    let mut doc = Document::new(cfg);
    let mut text = String::new();
    let mut code = exit::SUCCESS;
    let mut offenders = Vec::new();
    let (mut opt_total, mut pock_total) = (0.0f64, 0.0f64);

    for n in &corpus {
        let targs = TestArgs {
            n: n.clone(),
            p: None,
            k: None,
            m: None,
            a: None,
            base: None,
            theorem: None,
            classic: false,
            no_euler: false,
        };
        let opts = Options {
            search: search(cfg, None),
            euler_variant: true,
            pocklington: false,
        };
        let t0 = Instant::now();
        let opt = select(&targs, opts)?.classification;
        let t_opt = t0.elapsed().as_secs_f64();
        let pargs = TestArgs {
            theorem: Some(primecert::TheoremTag::Pocklington),
            ..targs
        };
        let t0 = Instant::now();
        let pock = select(&pargs, opts)?.classification;
        let t_pock = t0.elapsed().as_secs_f64();

        let o = BenchSide::new(&opt, t_opt);
        let p = BenchSide::new(&pock, t_pock);
        opt_total += t_opt;
        pock_total += t_pock;
        let _ = writeln!(
            text,
            "{n}: optimized {} {} modexp {} gcd | pocklington {} modexp {} gcd",
            o.theorem, o.modexps, o.gcds, p.modexps, p.gcds
        );
        if o.gcds > 0 {
            offenders.push(n.to_string());
        }
        doc.reports
            .push(json!({ "n": n.to_string(), "optimized": o, "pocklington": p }));
        doc.verdicts.push(opt);
    }
    let _ = writeln!(
        text,
        "{} input(s); wall time optimized {:.3} ms, pocklington {:.3} ms",
        corpus.len(),
        opt_total * 1e3,
        pock_total * 1e3
    );
    if !offenders.is_empty() {
        let _ = writeln!(
            text,
            "INVARIANT VIOLATION: optimized path evaluated gcds for {}",
            offenders.join(", ")
        );
        code = exit::COUNTEREXAMPLE;
    }
    let dump = (!offenders.is_empty()).then(|| json!({ "kind": "bench-gcd", "n": offenders }));
    Ok(Outcome {
        exit: code,
        document: doc,
        text,
        dump,
    })
}
