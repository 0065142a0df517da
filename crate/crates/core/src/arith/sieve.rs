use num_integer::Roots;
use num_traits::ToPrimitive;

use super::{nat, oracle_is_prime, oracle_is_prime_u64, Natural};

const SEGMENT_LEN: u64 = 1 << 16;

// Base primes are capped here; past the cap the sieve only pre-filters and
// survivors are confirmed with the oracle.
const BASE_PRIME_LIMIT: u64 = 1 << 20;

/// Primes in `[lo, hi]`, ascending, from a segmented sieve of Eratosthenes.
///
/// Each segment is sieved on demand, so memory stays bounded by
/// `sqrt(hi)` plus one segment. Values above `u64::MAX` are produced by
/// testing candidates with the oracle.
pub fn primes_in_range(lo: &Natural, hi: &Natural) -> PrimeRange {
    let lo_w = lo.to_u64();
    let hi_w = hi.to_u64().unwrap_or(u64::MAX);
    let word = lo_w.map(|l| WordSieve::new(l, hi_w));
    let big_start = match lo_w {
        Some(_) if hi.to_u64().is_some() => None,
        Some(_) => Some(nat(u64::MAX) + 1u32),
        None => Some(lo.clone()),
    };
    PrimeRange {
        word,
        big: big_start.map(|start| (start, hi.clone())),
    }
}

/// Word-sized convenience wrapper around [`primes_in_range`].
pub fn primes_between(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    WordSieve::new(lo, hi)
}

pub struct PrimeRange {
    word: Option<WordSieve>,
    big: Option<(Natural, Natural)>,
}

impl Iterator for PrimeRange {
    type Item = Natural;

    fn next(&mut self) -> Option<Natural> {
        if let Some(w) = &mut self.word {
            if let Some(p) = w.next() {
                return Some(nat(p));
            }
            self.word = None;
        }
        let (cur, hi) = self.big.as_mut()?;
        while *cur <= *hi {
            let c = cur.clone();
            *cur += 1u32;
            if oracle_is_prime(&c) {
                return Some(c);
            }
        }
        self.big = None;
        None
    }
}

struct WordSieve {
    partial: bool,
    base_primes: Vec<u64>,
    next_start: u64,
    hi: u64,
    done: bool,
    segment: Vec<u64>,
    pos: usize,
}

impl WordSieve {
    fn new(lo: u64, hi: u64) -> Self {
        let lo = lo.max(2);
        let root = hi.sqrt();
        WordSieve {
            partial: root > BASE_PRIME_LIMIT,
            base_primes: simple_sieve(root.min(BASE_PRIME_LIMIT)),
            next_start: lo,
            hi,
            done: lo > hi,
            segment: Vec::new(),
            pos: 0,
        }
    }

    fn fill(&mut self) {
        let start = self.next_start;
        let end = start.saturating_add(SEGMENT_LEN - 1).min(self.hi);
        let len = (end - start + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &self.base_primes {
            let Some(sq) = p.checked_mul(p) else { break };
            if sq > end {
                break;
            }
            let Some(aligned) = start.div_ceil(p).checked_mul(p) else {
                continue;
            };
            let first = sq.max(aligned);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                match m.checked_add(p) {
                    Some(next) => m = next,
                    None => break,
                }
            }
        }
        self.segment = composite
            .iter()
            .enumerate()
            .filter(|&(_, &c)| !c)
            .map(|(i, _)| start + i as u64)
            .filter(|&v| v >= 2 && (!self.partial || oracle_is_prime_u64(v)))
            .collect();
        self.pos = 0;
        if end == self.hi {
            self.done = true;
        } else {
            self.next_start = end + 1;
        }
    }
}

impl Iterator for WordSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.segment.len() {
                self.pos += 1;
                return Some(self.segment[self.pos - 1]);
            }
            if self.done {
                return None;
            }
            self.fill();
        }
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(lo: u64, hi: u64) -> Vec<u64> {
        primes_in_range(&nat(lo), &nat(hi))
            .map(|p| p.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(collect(2, 13), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(
            collect(1_000_000, 1_000_100),
            vec![1000003, 1000033, 1000037, 1000039, 1000081, 1000099]
        );
        assert!(collect(14, 16).is_empty());
        assert!(collect(0, 1).is_empty());
        assert!(collect(20, 10).is_empty());
        assert_eq!(collect(13, 13), vec![13]);
    }

    #[test]
    fn agrees_with_oracle_across_segments() {
        // spans several segments; checks every element and every gap
        let lo = 9_800_000;
        let hi = 10_000_000;
        let got = collect(lo, hi);
        let want: Vec<u64> = (lo..=hi).filter(|&n| oracle_is_prime_u64(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn near_word_boundary() {
        let hi = u64::MAX;
        let lo = hi - 200;
        let got = collect(lo, hi);
        let want: Vec<u64> = (lo..=hi).filter(|&n| oracle_is_prime_u64(n)).collect();
        assert_eq!(got, want);
        assert!(!got.is_empty());
    }

    #[test]
    fn crosses_into_big_values() {
        let lo = nat(u64::MAX - 100);
        let hi = nat(u64::MAX) + 100u32;
        let got: Vec<Natural> = primes_in_range(&lo, &hi).collect();
        assert!(got.iter().all(oracle_is_prime));
        assert!(got.iter().any(|p| p.to_u64().is_none()));
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }
}
