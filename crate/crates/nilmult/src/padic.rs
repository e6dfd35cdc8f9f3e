//! p-adic valuations of binomial coefficients, computed two independent
//! ways, and the divisibility check they feed.
//!
//! The two oracles: Kummer (count the carries when adding k and n-k in base
//! p) and Legendre (valuation of factorials via digit sums). Every public
//! entry point compares them and refuses to answer if they disagree.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("k must satisfy 0 <= k <= n (got n={n}, k={k})")]
    BadRange { n: u128, k: u128 },
    #[error("p must be at least 2 (got {0})")]
    BadPrime(u128),
    #[error("Kummer and Legendre oracles disagree for n={n}, k={k}, p={p}: {kummer} vs {legendre}")]
    OracleDisagreement {
        n: u128,
        k: u128,
        p: u128,
        kummer: u32,
        legendre: u32,
    },
}

/// Largest m with `p^m <= k`, by integer multiplication only.
pub fn floor_log(p: u128, k: u128) -> u32 {
    assert!(p >= 2 && k >= 1);
    let mut m = 0u32;
    let mut power = p;
    while power <= k {
        m += 1;
        match power.checked_mul(p) {
            Some(next) => power = next,
            None => break,
        }
    }
    m
}

fn kummer_carries(n: u128, k: u128, p: u128) -> u32 {
    // Carries when adding k and n - k in base p.
    let mut a = k;
    let mut b = n - k;
    let mut carry = 0u128;
    let mut carries = 0u32;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        if s >= p {
            carries += 1;
            carry = 1;
        } else {
            carry = 0;
        }
        a /= p;
        b /= p;
    }
    carries
}

fn legendre_factorial_valuation(n: u128, p: u128) -> u128 {
    let mut total = 0u128;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// `v_p(C(n, k))`, checked by both the Kummer and Legendre routes.
pub fn valuation_binomial(n: u128, k: u128, p: u128) -> Result<u32, PadicError> {
    if p < 2 {
        return Err(PadicError::BadPrime(p));
    }
    if k > n {
        return Err(PadicError::BadRange { n, k });
    }
    let kummer = kummer_carries(n, k, p);
    let legendre = legendre_factorial_valuation(n, p)
        - legendre_factorial_valuation(k, p)
        - legendre_factorial_valuation(n - k, p);
    if kummer as u128 != legendre {
        return Err(PadicError::OracleDisagreement {
            n,
            k,
            p,
            kummer,
            legendre: legendre as u32,
        });
    }
    Ok(kummer)
}

/// A single checked valuation, as reported by the sweep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValuationRecord {
    pub p: u64,
    pub k: u64,
    pub t: u64,
    pub m: u32,
    pub valuation: u32,
    pub holds: bool,
}

/// Whether `p^t` divides `C(p^(m+t), k)` with `m = floor_log(p, k)`.
pub fn check_lemma25(p: u128, k: u128, t: u32) -> Result<bool, PadicError> {
    assert!(t >= 1);
    let m = floor_log(p, k);
    let n = p.pow(m + t);
    let v = valuation_binomial(n, k, p)?;
    Ok(v as u128 >= t as u128)
}

/// Full record for one `(p, k, t)` triple.
pub fn lemma25_record(p: u64, k: u64, t: u64) -> Result<ValuationRecord, PadicError> {
    let m = floor_log(p as u128, k as u128);
    let n = (p as u128).pow(m + t as u32);
    let v = valuation_binomial(n, k as u128, p as u128)?;
    Ok(ValuationRecord {
        p,
        k,
        t,
        m,
        valuation: v,
        holds: v as u64 >= t,
    })
}

/// Exhaustive sweep over `k <= k_max`, `1 <= t <= t_max` for one prime.
pub fn lemma25_sweep(p: u64, k_max: u64, t_max: u64) -> Result<Vec<ValuationRecord>, PadicError> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        for t in 1..=t_max {
            out.push(lemma25_record(p, k, t)?);
        }
    }
    Ok(out)
}

/// Primes up to `limit`, by trial division. The sweeps only need tiny ones.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    'outer: for n in 2..=limit {
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                continue 'outer;
            }
            d += 1;
        }
        out.push(n);
    }
    out
}
