//! Integer primitives: smallest-prime-factor sieve, factorization,
//! the classical multiplicative functions, and prime counting.
//!
//! All public inputs are bounded by [`MAX_INPUT`]; anything that can grow
//! past `u64` (products of witness parameters, cross-multiplied identity
//! checks) is carried in `u128`.

use crate::error::{Error, Result};

/// Exclusive upper bound on user-facing integers.
pub const MAX_INPUT: u64 = 1 << 32;

/// Default cap on the number of sieve entries (one `u32` each).
pub const DEFAULT_SIEVE_BUDGET: u64 = 400_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `lcm(a, b)`, or `None` on overflow.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Deterministic primality by trial division; fine for `n < 2^64` at the
/// sizes this crate handles (values stay near `10^10`).
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.0
    }

    /// Factorization of `n^k` from that of `n`.
    pub fn pow(&self, k: u32) -> Factorization {
        Factorization(self.0.iter().map(|&(p, e)| (p, e * k)).collect())
    }

    pub fn value(&self) -> u128 {
        self.0.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    pub fn tau(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn phi(&self) -> u64 {
        self.0.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
    }

    pub fn sigma(&self) -> u64 {
        self.0.iter().map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
    }

    pub fn mu(&self) -> i8 {
        if self.0.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.0.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All divisors in strictly increasing order. Values must fit `u64`.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.0 {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Factor `n >= 1` by trial division alone.
pub fn factorize_trial(mut n: u64) -> Factorization {
    assert!(n >= 1, "factorize_trial(0)");
    let mut out = Vec::new();
    for p in [2u64, 3] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut d = 5u64;
    let mut step = 2;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

/// Smallest-prime-factor table for `2..=limit`, built once and shared
/// read-only between workers.
#[derive(Debug, Clone)]
pub struct SieveTables {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

pub fn build_sieve(limit: u64) -> Result<SieveTables> {
    build_sieve_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

/// Linear sieve. `budget` caps the number of table entries.
pub fn build_sieve_with_budget(limit: u64, budget: u64) -> Result<SieveTables> {
    if limit < 2 {
        return Err(Error::usage(format!("sieve limit must be at least 2, got {limit}")));
    }
    if limit > budget || limit >= MAX_INPUT {
        return Err(Error::SieveBudget {
            limit,
            budget: budget.min(MAX_INPUT - 1),
        });
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si {
                break;
            }
            let j = i * p as usize;
            if j > n {
                break;
            }
            spf[j] = p;
        }
    }
    Ok(SieveTables { limit, spf, primes })
}

impl SieveTables {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Least prime factor of `n` for `2 <= n <= limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if (2..=self.limit).contains(&n) {
            Some(self.spf[n as usize] as u64)
        } else {
            None
        }
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn is_prime(&self, n: u64) -> bool {
        match self.spf(n) {
            Some(p) => p == n,
            None if n < 2 => false,
            None => self.factorize(n).pairs() == [(n, 1)],
        }
    }

    /// Factor any `n >= 1`. Values above the limit fall back to trial
    /// division by the sieved primes (then by odd numbers if the sieve
    /// does not reach `sqrt(n)`).
    pub fn factorize(&self, mut n: u64) -> Factorization {
        assert!(n >= 1, "factorize(0)");
        let mut out: Vec<(u64, u32)> = Vec::new();
        let push = |out: &mut Vec<(u64, u32)>, p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        if n > self.limit {
            for &p in &self.primes {
                let p = p as u64;
                if p * p > n {
                    break;
                }
                while n % p == 0 {
                    n /= p;
                    push(&mut out, p);
                }
                if n <= self.limit {
                    break;
                }
            }
            if n > self.limit {
                // sieve too small for sqrt(n): finish with plain trial division
                let last = *self.primes.last().unwrap() as u64;
                let mut d = if last == 2 { 3 } else { last + 2 };
                while d.saturating_mul(d) <= n {
                    while n % d == 0 {
                        n /= d;
                        push(&mut out, d);
                    }
                    d += 2;
                }
                if n > 1 {
                    push(&mut out, n);
                }
                return Factorization(out);
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            n /= p;
            push(&mut out, p);
        }
        Factorization(out)
    }

    /// Bulk `tau(n)` for every `0 <= n <= limit` (entries 0 and 1 hold 0 and 1).
    pub fn tau_table(&self) -> Vec<u32> {
        let n = self.limit as usize;
        let mut tau = vec![0u32; n + 1];
        // exponent of spf(i) in i, and i with that prime power removed
        let mut exp = vec![0u8; n + 1];
        let mut rest = vec![0u32; n + 1];
        if n >= 1 {
            tau[1] = 1;
        }
        for i in 2..=n {
            let p = self.spf[i] as usize;
            let m = i / p;
            if m > 1 && self.spf[m] as usize == p {
                exp[i] = exp[m] + 1;
                rest[i] = rest[m];
            } else {
                exp[i] = 1;
                rest[i] = m as u32;
            }
            tau[i] = tau[rest[i] as usize] * (exp[i] as u32 + 1);
        }
        tau
    }
}

pub fn divisors(n: u64, tables: &SieveTables) -> Vec<u64> {
    tables.factorize(n).divisors()
}

pub fn tau(n: u64, tables: &SieveTables) -> u64 {
    tables.factorize(n).tau()
}

pub fn phi(n: u64, tables: &SieveTables) -> u64 {
    tables.factorize(n).phi()
}

pub fn sigma(n: u64, tables: &SieveTables) -> u64 {
    tables.factorize(n).sigma()
}

pub fn mu(n: u64, tables: &SieveTables) -> i8 {
    tables.factorize(n).mu()
}

/// The primes `<= x`, ascending.
pub fn primes_up_to(x: u64, tables: &SieveTables) -> Result<&[u32]> {
    if x > tables.limit {
        return Err(Error::BeyondSieve {
            value: x,
            limit: tables.limit,
        });
    }
    let end = tables.primes.partition_point(|&p| p as u64 <= x);
    Ok(&tables.primes[..end])
}

/// `#{p <= x prime : p = d (mod q)}`.
pub fn pi_in_progression(x: u64, q: u64, d: u64, tables: &SieveTables) -> Result<u64> {
    if q == 0 || d >= q {
        return Err(Error::usage(format!("residue {d} is not a class modulo {q}")));
    }
    Ok(primes_up_to(x, tables)?.iter().filter(|&&p| p as u64 % q == d).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    fn trial_phi(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    fn trial_mu(n: u64) -> i8 {
        let mut m = n;
        let mut sign = 1i8;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        sign
    }

    #[test]
    fn spf_small_table() {
        let t = build_sieve(10).unwrap();
        let expect = [(2, 2), (3, 3), (4, 2), (5, 5), (6, 2), (7, 7), (8, 2), (9, 3), (10, 2)];
        for (n, p) in expect {
            assert_eq!(t.spf(n), Some(p), "spf({n})");
        }
        assert_eq!(t.spf(11), None);
        assert_eq!(build_sieve(2).unwrap().spf(2), Some(2));
    }

    #[test]
    fn sieve_ten_million() {
        let t = build_sieve(10_000_000).unwrap();
        assert!(is_prime_trial(9_999_991));
        assert_eq!(t.spf(9_999_991), Some(9_999_991));
        assert_eq!(primes_up_to(1_000_000, &t).unwrap().len(), 78_498);
    }

    #[test]
    fn sieve_rejects_bad_limits() {
        assert!(matches!(build_sieve(1), Err(Error::Usage(_))));
        assert!(matches!(
            build_sieve_with_budget(1_000, 999),
            Err(Error::SieveBudget { limit: 1000, .. })
        ));
    }

    #[test]
    fn spf_matches_trial_division() {
        let t = build_sieve(5_000).unwrap();
        for n in 2..=5_000u64 {
            let least = (2..=n).find(|d| n % d == 0).unwrap();
            assert_eq!(t.spf(n), Some(least));
            assert_eq!(t.is_prime(n), least == n);
        }
    }

    #[test]
    fn multiplicative_functions_small() {
        let t = build_sieve(100).unwrap();
        assert_eq!((tau(1, &t), phi(1, &t), sigma(1, &t), mu(1, &t)), (1, 1, 1, 1));
        assert_eq!((tau(6, &t), phi(6, &t), sigma(6, &t), mu(6, &t)), (4, 2, 12, 1));
        assert_eq!(tau(5 + 1, &t), 4);
        assert_eq!(divisors(1, &t), vec![1]);
        assert_eq!(divisors(12, &t), vec![1, 2, 3, 4, 6, 12]);
        for p in [2u64, 3, 5, 97] {
            assert_eq!(divisors(p, &t), vec![1, p]);
        }
    }

    #[test]
    fn arithmetic_functions_against_definitions() {
        let t = build_sieve(10_000).unwrap();
        for n in 1..=10_000u64 {
            let ds = trial_divisors(n);
            assert_eq!(divisors(n, &t), ds, "divisors({n})");
            assert_eq!(tau(n, &t), ds.len() as u64);
            assert_eq!(sigma(n, &t), ds.iter().sum::<u64>());
            assert_eq!(mu(n, &t), trial_mu(n));
            if n <= 2_000 {
                assert_eq!(phi(n, &t), trial_phi(n), "phi({n})");
            }
        }
    }

    #[test]
    fn phi_on_prime_powers() {
        let t = build_sieve(10_000).unwrap();
        for &p in primes_up_to(100, &t).unwrap() {
            let p = p as u64;
            let mut pk = p;
            let mut k = 1;
            while pk <= 10_000 {
                assert_eq!(phi(pk, &t), pk - pk / p, "phi({p}^{k})");
                pk *= p;
                k += 1;
            }
        }
    }

    #[test]
    fn tau_table_matches_factorization() {
        let t = build_sieve(20_000).unwrap();
        let table = t.tau_table();
        for n in 1..=20_000u64 {
            assert_eq!(table[n as usize] as u64, tau(n, &t), "tau({n})");
        }
    }

    #[test]
    fn primes_and_progressions() {
        let t = build_sieve(10_000).unwrap();
        assert_eq!(primes_up_to(10, &t).unwrap(), &[2, 3, 5, 7]);
        assert_eq!(primes_up_to(2, &t).unwrap(), &[2]);
        assert!(primes_up_to(10_001, &t).is_err());
        assert_eq!(pi_in_progression(10, 1, 0, &t).unwrap(), 4);
        assert_eq!(pi_in_progression(10, 4, 3, &t).unwrap(), 2);
        assert!(pi_in_progression(10, 4, 4, &t).is_err());
        for q in 1..=20u64 {
            for x in [2u64, 3, 10, 97, 1_000, 9_973, 10_000] {
                let total: u64 = (0..q).map(|d| pi_in_progression(x, q, d, &t).unwrap()).sum();
                assert_eq!(total, primes_up_to(x, &t).unwrap().len() as u64);
            }
        }
    }

    #[test]
    fn factorize_beyond_sieve() {
        let t = build_sieve(1_000).unwrap();
        // 999_983 is prime; 10^10 + 19 is prime and needs the odd-number tail
        for n in [
            1_001u64,
            999_983,
            2 * 999_983,
            123_456_789,
            10_000_000_019,
            3_000_000_000 * 3,
        ] {
            assert_eq!(t.factorize(n), factorize_trial(n), "n = {n}");
            assert_eq!(t.factorize(n).value(), n as u128);
        }
        assert!(t.is_prime(10_000_000_019));
    }

    #[test]
    fn wide_products_are_exact() {
        let big = 3_000_000_000u128;
        assert_eq!(big * big, 9_000_000_000_000_000_000u128);
        assert_eq!(lcm(u64::MAX, u64::MAX - 1), None);
    }

    proptest! {
        #[test]
        fn sieve_and_trial_factorizations_agree(n in 1u64..2_000_000) {
            let t = build_sieve(3_000).unwrap();
            prop_assert_eq!(t.factorize(n), factorize_trial(n));
        }

        #[test]
        fn isqrt_is_floor_sqrt(n in any::<u64>()) {
            let r = isqrt(n) as u128;
            prop_assert!(r * r <= n as u128 && (r + 1) * (r + 1) > n as u128);
        }
    }
}
