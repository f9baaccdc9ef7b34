//! Representations of `m/p` (p prime, `gcd(m, p) = 1`, `m >= 4`) split
//! into two families, each parametrized by `(a, b, c, u)` with `c | a + b`
//! and `t = (a + b)/c`:
//!
//! * Type I, `p` divides two denominators:
//!   `m/p = 1/(abu) + 1/(pbcu) + 1/(pacu)`, so `m = (p + t)/(abu)`.
//! * Type II, `p` divides one denominator:
//!   `m/p = 1/(pabu) + 1/(bcu) + 1/(acu)`, so `m = (1 + p t)/(abu)`.
//!
//! Enumerating both families over finite ranges gives `A_3(p)` without
//! scanning every numerator.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{gcd, is_prime_trial, SieveTables};
use crate::egyptian::{a_k_counts_bruteforce, Fraction, UnitTriple};
use crate::error::{Error, Result};

/// Largest prime the structure enumerators accept; keeps `a^2 u m + 1`
/// (at most `16 p^2`) inside `u64`.
pub const MAX_STRUCTURE_PRIME: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionType {
    TypeI,
    TypeII,
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionType::TypeI => "I",
            SolutionType::TypeII => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeWitness {
    pub kind: SolutionType,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub u: u64,
}

impl PrimeWitness {
    pub fn t(&self) -> Option<u64> {
        let s = self.a + self.b;
        (s % self.c == 0).then(|| s / self.c)
    }

    /// The numerator this witness produces over `p`, if integral.
    pub fn numerator(&self, p: u64) -> Option<u64> {
        let t = self.t()? as u128;
        let top = match self.kind {
            SolutionType::TypeI => p as u128 + t,
            SolutionType::TypeII => 1 + p as u128 * t,
        };
        let abu = self.a as u128 * self.b as u128 * self.u as u128;
        (top % abu == 0).then(|| top / abu).and_then(|m| u64::try_from(m).ok())
    }

    /// The three denominators, sorted.
    pub fn expand(&self, p: u64) -> Result<UnitTriple> {
        let (a, b, c, u, p) = (
            self.a as u128,
            self.b as u128,
            self.c as u128,
            self.u as u128,
            p as u128,
        );
        let raw = match self.kind {
            SolutionType::TypeI => [a * b * u, p * b * c * u, p * a * c * u],
            SolutionType::TypeII => [p * a * b * u, b * c * u, a * c * u],
        };
        let [x, y, z] = raw.map(|v| u64::try_from(v).map_err(|_| Error::Overflow("witness expansion")));
        Ok(UnitTriple::new(x?, y?, z?))
    }
}

impl fmt::Display for PrimeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {} {}", self.kind, self.a, self.b, self.c, self.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `m` in `{1, 2, 3}`.
    Trivial,
    Witnessed(PrimeWitness),
}

impl Classification {
    pub fn kind(&self) -> Option<SolutionType> {
        match self {
            Classification::Trivial => None,
            Classification::Witnessed(w) => Some(w.kind),
        }
    }
}

/// Recovers the Type I/II witness behind a representation of `m/p`.
pub fn classify_triple(m: u64, p: u64, trip: UnitTriple) -> Result<Classification> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime(p));
    }
    if gcd(m, p) != 1 {
        return Err(Error::usage(format!("{m}/{p} is not coprime")));
    }
    let f = Fraction::new(m, p)?;
    if !trip.represents(f)? {
        return Err(Error::NotARepresentation(format!("{trip} for {f}")));
    }
    if m <= 3 {
        return Ok(Classification::Trivial);
    }
    let dens = trip.as_array();
    let (hit, miss): (Vec<u64>, Vec<u64>) = dens.iter().partition(|&&x| x % p == 0);
    let fail = |why: &str| Error::Classification(format!("{trip} for {f}: {why}"));
    let (kind, lone, pair) = match (hit.len(), miss.len()) {
        // lone = abu, pair = (pbcu, pacu) / p
        (2, 1) => (SolutionType::TypeI, miss[0], [hit[0] / p, hit[1] / p]),
        // lone = pabu / p, pair = (bcu, acu)
        (1, 2) => (SolutionType::TypeII, hit[0] / p, [miss[0], miss[1]]),
        (k, _) => return Err(fail(&format!("{k} denominators divisible by p"))),
    };
    // gcd(a, b) = 1 forces cu = gcd of the pair
    let cu = gcd(pair[0], pair[1]);
    let (mut a, mut b) = (pair[1] / cu, pair[0] / cu);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if lone % (a * b) != 0 {
        return Err(fail("ab does not divide the lone denominator"));
    }
    let u = lone / (a * b);
    if cu % u != 0 {
        return Err(fail("u does not divide gcd"));
    }
    let w = PrimeWitness {
        kind,
        a,
        b,
        c: cu / u,
        u,
    };
    if w.t().is_none() {
        return Err(fail("c does not divide a + b"));
    }
    if w.numerator(p) != Some(m) || w.expand(p)? != trip {
        return Err(fail("witness does not reproduce the triple"));
    }
    Ok(Classification::Witnessed(w))
}

/// Loop bounds for the Type I enumeration.
///
/// The standard bounds are `b <= 2p + 2` when `a = 1` and
/// `(a - 1)(b - 1) <= p + 1` otherwise (both from `abu <= p + a + b`),
/// with `u` taken over the divisors of `(p + t)/(ab)`. A scale above one
/// multiplies the `a`/`b` bounds and switches `u` to an explicit scan up
/// to `scale (p + a + b)/(ab)`; it exists for bound-sufficiency checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeIBounds {
    scale: u64,
}

impl TypeIBounds {
    pub const STANDARD: TypeIBounds = TypeIBounds { scale: 1 };

    pub fn scaled(scale: u64) -> Self {
        TypeIBounds { scale: scale.max(1) }
    }
}

impl Default for TypeIBounds {
    fn default() -> Self {
        Self::STANDARD
    }
}

fn check_structure_prime(p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::usage(format!("structure enumeration needs p >= 5, got {p}")));
    }
    if p > MAX_STRUCTURE_PRIME {
        return Err(Error::usage(format!("p = {p} exceeds {MAX_STRUCTURE_PRIME}")));
    }
    Ok(())
}

/// Calls `visit(witness, m)` for every Type I witness with `a <= b` within
/// `bounds`. The same `m` is typically reported many times.
pub fn for_each_type_i<F>(p: u64, bounds: TypeIBounds, tables: &SieveTables, mut visit: F) -> Result<()>
where
    F: FnMut(PrimeWitness, u64),
{
    check_structure_prime(p)?;
    let scale = bounds.scale;
    let ab_cap = scale * (p + 1);
    let mut a = 1u64;
    loop {
        if a >= 2 && (a - 1) * (a - 1) > ab_cap {
            break;
        }
        let mut b = a;
        loop {
            if a == 1 {
                if b > scale * (2 * p + 2) {
                    break;
                }
            } else if (a - 1) * (b - 1) > ab_cap {
                break;
            }
            let ab = a * b;
            for c in tables.factorize(a + b).divisors() {
                let t = (a + b) / c;
                let top = p + t;
                if top % ab != 0 {
                    continue;
                }
                let q = top / ab;
                if scale == 1 {
                    for u in tables.factorize(q).divisors() {
                        let w = PrimeWitness {
                            kind: SolutionType::TypeI,
                            a,
                            b,
                            c,
                            u,
                        };
                        visit(w, q / u);
                    }
                } else {
                    for u in 1..=scale * (p + a + b) / ab {
                        if q % u == 0 {
                            let w = PrimeWitness {
                                kind: SolutionType::TypeI,
                                a,
                                b,
                                c,
                                u,
                            };
                            visit(w, q / u);
                        }
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(())
}

/// Calls `visit(witness, m)` for every Type II witness with `a <= b`.
///
/// Every such witness has `p < acum <= 4p`; for fixed `(a, c, u, m)` the
/// identity `acum - (a^2 u m + 1)/t = p` fixes `t`, and `b = ct - a`.
pub fn for_each_type_ii<F>(p: u64, mut visit: F) -> Result<()>
where
    F: FnMut(PrimeWitness, u64),
{
    check_structure_prime(p)?;
    let cap = 4 * p;
    for a in 1..=cap {
        for c in 1..=cap / a {
            let ac = a * c;
            for u in 1..=cap / ac {
                let acu = ac * u;
                let step = a * a * u;
                let first = p / acu + 1;
                let mut excess = acu * first - p;
                let mut tail = step * first + 1;
                for m in first..=cap / acu {
                    if tail % excess == 0 {
                        let t = tail / excess;
                        let ct = c * t;
                        if ct >= 2 * a {
                            let w = PrimeWitness {
                                kind: SolutionType::TypeII,
                                a,
                                b: ct - a,
                                c,
                                u,
                            };
                            debug_assert_eq!(w.numerator(p), Some(m));
                            visit(w, m);
                        }
                    }
                    excess += acu;
                    tail += step;
                }
            }
        }
    }
    Ok(())
}

pub fn type_i_m_set(p: u64, tables: &SieveTables) -> Result<BTreeSet<u64>> {
    type_i_m_set_with(p, TypeIBounds::STANDARD, tables)
}

pub fn type_i_m_set_with(p: u64, bounds: TypeIBounds, tables: &SieveTables) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for_each_type_i(p, bounds, tables, |_, m| {
        out.insert(m);
    })?;
    Ok(out)
}

pub fn type_ii_m_set(p: u64) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for_each_type_ii(p, |_, m| {
        out.insert(m);
    })?;
    Ok(out)
}

/// `(A_3(p), A_3*(p))` from the two families.
///
/// Small primes `p < 5` go through the exhaustive enumerator.
pub fn a3_counts_structure(p: u64, tables: &SieveTables) -> Result<(u64, u64)> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return a_k_counts_bruteforce(p, 3);
    }
    let top = 3 * p as usize;
    let mut seen = vec![false; top + 1];
    seen[1..=3].fill(true);
    let mut mark = |_: PrimeWitness, m: u64| {
        debug_assert!((1..=3 * p).contains(&m));
        seen[m as usize] = true;
    };
    for_each_type_i(p, TypeIBounds::STANDARD, tables, &mut mark)?;
    for_each_type_ii(p, &mut mark)?;
    let coprime = seen
        .iter()
        .enumerate()
        .filter(|&(m, &hit)| hit && m as u64 % p != 0)
        .count() as u64;
    // the remaining representable numerators are p, 2p and 3p
    Ok((coprime + 3, coprime))
}

pub fn a3_structure(p: u64, tables: &SieveTables) -> Result<u64> {
    a3_counts_structure(p, tables).map(|(all, _)| all)
}

/// `A_2(p) = 2 + tau(p + 1)`.
pub fn a2_structure(p: u64, tables: &SieveTables) -> Result<u64> {
    if !tables.is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(2 + tables.factorize(p + 1).tau())
}

/// Every representation of `m/p` reachable from a Type I or Type II witness.
pub fn structure_representations(m: u64, p: u64, tables: &SieveTables) -> Result<Vec<(UnitTriple, PrimeWitness)>> {
    let mut out = BTreeSet::new();
    let mut keep = |w: PrimeWitness, got: u64| {
        if got == m {
            out.insert(w);
        }
    };
    for_each_type_i(p, TypeIBounds::STANDARD, tables, &mut keep)?;
    for_each_type_ii(p, &mut keep)?;
    let mut pairs = out
        .into_iter()
        .map(|w| Ok((w.expand(p)?, w)))
        .collect::<Result<Vec<_>>>()?;
    pairs.sort();
    Ok(pairs)
}
