//! Six-parameter witnesses `(D1, D2, D3, v1, v2, v3)` for ternary
//! representations of a reduced fraction `m/n`.
//!
//! A witness is valid for `m/n` when
//!
//! * `lcm(D1, D2, D3) | n` and `gcd(D1, D2, D3) = 1`,
//! * `v1 v2 v3 | S` where `S = D1 v1 + D2 v2 + D3 v3`,
//! * `gcd(D_i v_i, v_j) = 1` for every ordered pair `i != j`,
//! * `m | S / (v1 v2 v3)`.
//!
//! With `E = lcm(D1, D2, D3)`, `f1 = n/E`, `f2 = S/(m v1 v2 v3)` and
//! `f = f1 f2`, the denominators are `(E/D1) v2 v3 f`, `(E/D2) v1 v3 f`
//! and `(E/D3) v1 v2 f`. The coprimality clause is checked against the
//! exhaustive enumerator for every reduced `m/n` with `n <= 30`.

use std::collections::BTreeSet;

use super::{Fraction, UnitTriple};
use crate::arith::{factorize_trial, gcd, lcm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlpWitness {
    pub d: [u64; 3],
    pub v: [u64; 3],
    lcm: u64,
    f1: u64,
    f2: u64,
}

impl BlpWitness {
    /// Validates `(d, v)` against `target` and fills in the derived values.
    pub fn new(d: [u64; 3], v: [u64; 3], target: Fraction) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidWitness {
            target: target.to_string(),
            reason,
        };
        if d.iter().chain(&v).any(|&x| x == 0) {
            return Err(invalid("parameters must be positive".into()));
        }
        let (m, n) = (target.num(), target.den());
        let e = lcm(d[0], d[1])
            .and_then(|l| lcm(l, d[2]))
            .ok_or(Error::Overflow("lcm of D"))?;
        if n % e != 0 {
            return Err(invalid(format!("lcm(D) = {e} does not divide {n}")));
        }
        if gcd(gcd(d[0], d[1]), d[2]) != 1 {
            return Err(invalid("gcd(D1, D2, D3) != 1".into()));
        }
        let s: u128 = (0..3).map(|i| d[i] as u128 * v[i] as u128).sum();
        let prod: u128 = v.iter().map(|&x| x as u128).product();
        if s % prod != 0 {
            return Err(invalid(format!("v1 v2 v3 = {prod} does not divide {s}")));
        }
        let quotient = s / prod;
        if quotient % m as u128 != 0 {
            return Err(invalid(format!("{m} does not divide {quotient}")));
        }
        for i in 0..3 {
            for j in 0..3 {
                if i != j && gcd_wide(d[i] as u128 * v[i] as u128, v[j] as u128) != 1 {
                    return Err(invalid(format!("gcd(D{0} v{0}, v{1}) != 1", i + 1, j + 1)));
                }
            }
        }
        let f2 = u64::try_from(quotient / m as u128).map_err(|_| Error::Overflow("f2"))?;
        Ok(BlpWitness {
            d,
            v,
            lcm: e,
            f1: n / e,
            f2,
        })
    }

    /// `E = lcm(D1, D2, D3)`.
    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn f1(&self) -> u64 {
        self.f1
    }

    pub fn f2(&self) -> u64 {
        self.f2
    }

    pub fn f(&self) -> u128 {
        self.f1 as u128 * self.f2 as u128
    }

    /// Denominators in parameter order (not sorted).
    pub fn raw_denominators(&self) -> Result<[u64; 3]> {
        let f = self.f();
        let mut out = [0u64; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let value = (self.lcm / self.d[i]) as u128 * self.v[j] as u128;
            let value = value
                .checked_mul(self.v[k] as u128)
                .and_then(|x| x.checked_mul(f))
                .and_then(|x| u64::try_from(x).ok())
                .ok_or(Error::Overflow("witness denominator"))?;
            *slot = value;
        }
        Ok(out)
    }
}

fn gcd_wide(a: u128, b: u128) -> u128 {
    crate::arith::gcd_u128(a, b)
}

/// Expands a witness into its (sorted) triple after re-validating it for `f`.
pub fn witness_to_triple(w: &BlpWitness, f: Fraction) -> Result<UnitTriple> {
    let checked = BlpWitness::new(w.d, w.v, f)?;
    if checked != *w {
        return Err(Error::InvalidWitness {
            target: f.to_string(),
            reason: "derived values belong to a different fraction".into(),
        });
    }
    let [a, b, c] = w.raw_denominators()?;
    let trip = UnitTriple::new(a, b, c);
    if !trip.represents(f)? {
        return Err(Error::NotARepresentation(format!("{trip} for {f}")));
    }
    Ok(trip)
}

/// Every valid witness for `f`, in increasing `(d, v)` order.
///
/// Search: `D` over ordered triples of divisors of `n`. For each index `k`
/// taken to carry the largest `v`, the other two satisfy
/// `v_i v_j <= D1 + D2 + D3` (because `v1 v2 v3 <= S <= (D1+D2+D3) v_k`),
/// and `v_k` runs over the divisors of `D_i v_i + D_j v_j` (it divides `S`).
pub fn blp_witnesses(f: Fraction) -> Result<Vec<BlpWitness>> {
    let (m, n) = (f.num(), f.den());
    let mut found = BTreeSet::new();
    if m > 3 * n {
        return Ok(Vec::new());
    }
    let ds = factorize_trial(n).divisors();
    for &d1 in &ds {
        for &d2 in &ds {
            for &d3 in &ds {
                let d = [d1, d2, d3];
                if gcd(gcd(d1, d2), d3) != 1 || lcm(lcm(d1, d2).unwrap(), d3).map_or(true, |e| n % e != 0) {
                    continue;
                }
                search_v(d, f, &mut found)?;
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn search_v(d: [u64; 3], f: Fraction, found: &mut BTreeSet<BlpWitness>) -> Result<()> {
    let dsum = d.iter().sum::<u64>();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        for vi in 1..=dsum {
            for vj in 1..=dsum / vi {
                if gcd(vi, vj) != 1 {
                    continue;
                }
                let partial = d[i] * vi + d[j] * vj;
                for vk in factorize_trial(partial).divisors() {
                    if vk < vi.max(vj) {
                        continue;
                    }
                    let mut v = [0u64; 3];
                    v[i] = vi;
                    v[j] = vj;
                    v[k] = vk;
                    match BlpWitness::new(d, v, f) {
                        Ok(w) => {
                            found.insert(w);
                        }
                        Err(Error::InvalidWitness { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(())
}
