use num_traits::ToPrimitive;
use primecert::arith::{oracle_is_prime_u64, primes_between, PrimePower};
use primecert::classic::{lucas_converse, pocklington};
use primecert::optimized::{decompose, general_test, test_ap1, test_ap2, test_apk};
use primecert::replay::replay;
use primecert::structure::{factor_shape, phi_divisibility_holds};
use primecert::{factor, nat, Certificate, Factorization, Natural, Verdict, WitnessSearch};
use proptest::prelude::*;

fn search() -> WitnessSearch {
    WitnessSearch::up_to(64)
}

fn largest_odd_prime(n: u64) -> Option<u64> {
    factor(&nat(n - 1))
        .primes()
        .filter_map(|p| p.to_u64())
        .filter(|&p| p != 2)
        .max()
}

#[test]
fn every_prime_below_1e5_is_certified() {
    for n in primes_between(3, 100_000) {
        let nn = nat(n);
        let f = factor(&nat(n - 1));
        let c = lucas_converse(&nn, &f, search()).unwrap();
        assert_eq!(c.verdict(), Verdict::CertifiedPrime, "lucas {n}");
        if let Some(p) = largest_odd_prime(n) {
            let c = general_test(&nn, &nat(p), search()).unwrap();
            assert_eq!(c.verdict(), Verdict::CertifiedPrime, "single-factor {n}");
            replay(c.certificate().unwrap()).unwrap();
        }
    }
}

#[test]
fn composite_factor_shape_below_1e5() {
    let mut seen = 0;
    for n in 4..=100_000u64 {
        if oracle_is_prime_u64(n) {
            continue;
        }
        let nn = nat(n);
        for p in factor(&nat(n - 1)).primes().filter(|p| **p != nat(2)) {
            if !phi_divisibility_holds(&nn, p).unwrap() {
                assert!(factor_shape(&nn, p).is_err());
                continue;
            }
            let s = factor_shape(&nn, p).unwrap();
            assert_eq!(&s.prime_part * &s.cofactor, nn);
            assert_eq!(&s.t * p + 1u32, s.prime_part);
            assert_eq!(&s.s * p + 1u32, s.cofactor);
            assert!(s.s >= nat(1) && s.t >= nat(1));
            seen += 1;
        }
    }
    assert!(seen > 0);
}

/// Largest non-unity exponent a certificate asks for.
fn max_exponent(cert: &Certificate) -> Natural {
    cert.witnesses
        .iter()
        .flat_map(|w| w.checks.iter())
        .filter(|c| c.exponent != &cert.n - 1u32)
        .map(|c| c.exponent.clone())
        .max()
        .unwrap_or_default()
}

#[test]
fn form_tests_dominate_pocklington_below_1e5() {
    let mut compared = 0;
    for p in primes_between(3, 50_000) {
        for k in 1..=2u32 {
            let pk = p.pow(k);
            for a in 1..=(100_000 - 1) / pk {
                let n = a * pk + 1;
                if a >= p || !oracle_is_prime_u64(n) {
                    continue;
                }
                let d = decompose(&nat(n), &nat(p), k).unwrap();
                let fast = if k == 2 {
                    test_ap2(&d, search()).unwrap()
                } else {
                    test_apk(&d, search()).unwrap()
                };
                let ff = Factorization::new(nat(pk), vec![PrimePower::new(p, k)]).unwrap();
                let slow = pocklington(&nat(n), &nat(pk), &nat(a), &ff, search()).unwrap();
                assert_eq!(fast.verdict(), Verdict::CertifiedPrime, "{n}");
                assert_eq!(slow.verdict(), Verdict::CertifiedPrime, "{n}");
                assert_eq!(fast.ops().gcds, 0);
                assert!(slow.ops().gcds >= 1);
                let fe = max_exponent(fast.certificate().unwrap());
                let se = max_exponent(slow.certificate().unwrap());
                assert!(fe <= se, "{n}: {fe} > {se}");
                compared += 1;
            }
        }
    }
    assert!(compared > 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn even_cofactor_verdicts_match_oracle(p_seed in 1u64 << 20..1 << 40, a_half in 1u64..64) {
        // next prime at or above the seed
        let p = (p_seed | 1..).step_by(2).find(|&q| oracle_is_prime_u64(q)).unwrap();
        let a = 2 * a_half;
        let n = nat(a) * p + 1u32;
        let d = decompose(&n, &nat(p), 1).unwrap();
        let c = test_ap1(&d, search(), true).unwrap();
        let prime = primecert::oracle_is_prime(&n);
        match c.verdict() {
            Verdict::CertifiedPrime => {
                prop_assert!(prime);
                let cert = c.certificate().unwrap();
                prop_assert!(replay(cert).is_ok());
                let json = serde_json::to_string(cert).unwrap();
                let back: Certificate = serde_json::from_str(&json).unwrap();
                prop_assert_eq!(&back, cert);
            }
            Verdict::CertifiedComposite => prop_assert!(!prime),
            v => prop_assert!(false, "unexpected {v} for {n}"),
        }
    }
}
