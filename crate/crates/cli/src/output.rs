//! The structured document every run emits, and text rendering helpers.

use std::fmt::Write;

use primecert::verdict::Evidence;
use primecert::{Certificate, Classification, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: &str = "1";

/// One document per invocation. Naturals are decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub config: RunConfig,
    pub verdicts: Vec<Classification>,
    pub certificates: Vec<Certificate>,
    pub reports: Vec<Value>,
}

impl Document {
    pub fn new(config: &RunConfig) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            command: config.command.name(),
            config: config.clone(),
            verdicts: Vec::new(),
            certificates: Vec::new(),
            reports: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Human-readable account of a classification.
pub fn classification_text(c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", c.n());
    let _ = writeln!(out, "verdict: {} ({})", c.verdict(), c.theorem());
    if let Some(conj) = c.conjecture() {
        let _ = writeln!(out, "assumes: {conj}");
    }
    match c.evidence() {
        Evidence::Certificate(cert) => out.push_str(&certificate_text(cert)),
        Evidence::Composite(ev) => {
            let _ = writeln!(out, "evidence: {}", serde_json::to_string(ev).unwrap());
        }
        Evidence::Inconclusive(why) => {
            let _ = writeln!(out, "reason: {}", serde_json::to_string(why).unwrap());
        }
    }
    let ops = c.ops();
    let _ = writeln!(
        out,
        "ops: {} modexp, {} gcd, {} trial division",
        ops.modexps, ops.gcds, ops.trial_divisions
    );
    out
}

pub fn certificate_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let factors: Vec<String> = cert
        .factors
        .iter()
        .map(|f| {
            if f.exponent == 1 {
                f.prime.to_string()
            } else {
                format!("{}^{}", f.prime, f.exponent)
            }
        })
        .collect();
    let factors = if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join(" * ")
    };
    let _ = writeln!(out, "n = {} * {} + 1, m = {}", cert.a, cert.m, factors);
    if let Some(b) = cert.basis {
        let _ = writeln!(
            out,
            "basis: {}",
            serde_json::to_string(&b).unwrap().trim_matches('"')
        );
    }
    for w in &cert.witnesses {
        for ch in &w.checks {
            let _ = writeln!(
                out,
                "  {}^{} = {} (mod n)  [{}]",
                w.base,
                ch.exponent,
                ch.residue,
                serde_json::to_string(&ch.expect).unwrap().trim_matches('"')
            );
        }
    }
    for sc in &cert.side_conditions {
        let _ = writeln!(
            out,
            "  side condition: {}",
            serde_json::to_string(sc).unwrap()
        );
    }
    out
}

/// Exit status for a verdict.
pub fn verdict_exit(v: Verdict, accept_conditional: bool) -> i32 {
    use crate::exit;
    match v {
        Verdict::CertifiedPrime => exit::SUCCESS,
        Verdict::CertifiedComposite => exit::COMPOSITE,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
        Verdict::ConditionallyPrime if accept_conditional => exit::SUCCESS,
        Verdict::ConditionallyPrime => exit::CONDITIONAL,
    }
}
