//! Exhaustive enumeration of unit-fraction sums with one, two or three
//! terms, and the counting functions built on it.
//!
//! These routines are deliberately direct: they are the ground truth the
//! structure-based counters in [`crate::prime_structure`] are checked
//! against.

mod blp;

pub use blp::{blp_witnesses, witness_to_triple, BlpWitness};

use std::fmt;
use std::ops::ControlFlow;

use crate::arith::{factorize_trial, gcd, gcd_u128, is_prime_trial, SieveTables, MAX_INPUT};
use crate::error::{Error, Result};

/// A positive rational `num/den`, always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::usage(format!(
                "{num}/{den}: numerator and denominator must be positive"
            )));
        }
        if num >= MAX_INPUT || den >= MAX_INPUT {
            return Err(Error::usage(format!("{num}/{den}: inputs must be below 2^32")));
        }
        let g = gcd(num, den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Three unit-fraction denominators in nondecreasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitTriple {
    pub m1: u64,
    pub m2: u64,
    pub m3: u64,
}

impl UnitTriple {
    /// Builds the canonical (sorted) triple from denominators in any order.
    pub fn new(a: u64, b: u64, c: u64) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        UnitTriple {
            m1: v[0],
            m2: v[1],
            m3: v[2],
        }
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.m1, self.m2, self.m3]
    }

    /// Exact test of `1/m1 + 1/m2 + 1/m3 = f`, by cross multiplication.
    pub fn represents(&self, f: Fraction) -> Result<bool> {
        let [a, b, c] = self.as_array().map(u128::from);
        if a == 0 {
            return Ok(false);
        }
        let ovf = || Error::Overflow("triple identity check");
        let pair_sum = b
            .checked_mul(c)
            .and_then(|bc| a.checked_mul(c)?.checked_add(bc))
            .and_then(|s| a.checked_mul(b)?.checked_add(s))
            .ok_or_else(ovf)?;
        let lhs = pair_sum.checked_mul(f.den as u128).ok_or_else(ovf)?;
        let rhs = a
            .checked_mul(b)
            .and_then(|ab| ab.checked_mul(c))
            .and_then(|abc| abc.checked_mul(f.num as u128))
            .ok_or_else(ovf)?;
        Ok(lhs == rhs)
    }
}

impl fmt::Display for UnitTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.m1, self.m2, self.m3)
    }
}

/// Number of unit fractions in a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    One,
    Two,
    Three,
}

impl Arity {
    pub fn terms(self) -> u64 {
        match self {
            Arity::One => 1,
            Arity::Two => 2,
            Arity::Three => 3,
        }
    }
}

impl TryFrom<u32> for Arity {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Arity::One),
            2 => Ok(Arity::Two),
            3 => Ok(Arity::Three),
            _ => Err(Error::usage(format!("k must be 1, 2 or 3, got {k}"))),
        }
    }
}

/// All `k`-term representations of `f` as sorted denominator lists,
/// in strictly increasing lexicographic order.
pub fn enumerate_unit_fraction_sums(f: Fraction, k: u32) -> Result<Vec<Vec<u64>>> {
    Ok(match Arity::try_from(k)? {
        Arity::One => unary_representation(f).into_iter().map(|m| vec![m]).collect(),
        Arity::Two => binary_representations(f)?
            .into_iter()
            .map(|(x, y)| vec![x, y])
            .collect(),
        Arity::Three => ternary_representations(f)?
            .into_iter()
            .map(|t| t.as_array().to_vec())
            .collect(),
    })
}

pub fn unary_representation(f: Fraction) -> Option<u64> {
    (f.num == 1).then_some(f.den)
}

/// Pairs `x <= y` with `1/x + 1/y = f`.
///
/// Uses `(m x - n)(m y - n) = n^2`: each divisor `d <= n` of `n^2` with
/// `d = -n (mod m)` and `n^2/d = -n (mod m)` gives one pair.
pub fn binary_representations(f: Fraction) -> Result<Vec<(u64, u64)>> {
    let (m, n) = (f.num as u128, f.den as u128);
    if m > 2 * n {
        return Ok(Vec::new());
    }
    let nn = n * n;
    let mut out = Vec::new();
    for d in factorize_trial(f.den).pow(2).divisors() {
        let d = d as u128;
        if d > n {
            break;
        }
        let e = nn / d;
        if (d + n) % m != 0 || (e + n) % m != 0 {
            continue;
        }
        let x = u64::try_from((d + n) / m).map_err(|_| Error::Overflow("binary denominator"))?;
        let y = u64::try_from((e + n) / m).map_err(|_| Error::Overflow("binary denominator"))?;
        debug_assert_eq!(n * (x as u128 + y as u128), m * x as u128 * y as u128);
        out.push((x, y));
    }
    Ok(out)
}

/// Walks every ternary representation of `f` in lexicographic order.
///
/// `m1` runs over `(n/m, 3n/m]`; for the residual `r = m/n - 1/m1`,
/// `m2` runs over `[max(m1, ceil(1/r)), floor(2/r)]` and `m3` is accepted
/// when `1/(r - 1/m2)` is an integer. A zero residual is skipped: all
/// three terms must be finite.
pub fn for_each_ternary<F>(f: Fraction, mut visit: F) -> Result<()>
where
    F: FnMut(UnitTriple) -> ControlFlow<()>,
{
    let (m, n) = (f.num as u128, f.den as u128);
    if m > 3 * n {
        return Ok(());
    }
    for m1 in (n / m + 1)..=(3 * n / m) {
        let (mut rn, mut rd) = (m * m1 - n, n * m1);
        let g = gcd_u128(rn, rd);
        rn /= g;
        rd /= g;
        let lo = m1.max(rd.div_ceil(rn));
        let hi = 2 * rd / rn;
        for m2 in lo..=hi {
            let gap = rn * m2 - rd;
            if gap == 0 {
                continue;
            }
            let top = rd.checked_mul(m2).ok_or(Error::Overflow("ternary enumeration"))?;
            if top % gap != 0 {
                continue;
            }
            let m3 = u64::try_from(top / gap).map_err(|_| Error::Overflow("ternary denominator"))?;
            let trip = UnitTriple {
                m1: m1 as u64,
                m2: m2 as u64,
                m3,
            };
            if visit(trip).is_break() {
                return Ok(());
            }
        }
    }
    Ok(())
}

pub fn ternary_representations(f: Fraction) -> Result<Vec<UnitTriple>> {
    let mut out = Vec::new();
    for_each_ternary(f, |t| {
        out.push(t);
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn has_ternary_representation(f: Fraction) -> Result<bool> {
    let mut found = false;
    for_each_ternary(f, |_| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

fn is_representable(f: Fraction, arity: Arity) -> Result<bool> {
    Ok(match arity {
        Arity::One => unary_representation(f).is_some(),
        Arity::Two => !binary_representations(f)?.is_empty(),
        Arity::Three => has_ternary_representation(f)?,
    })
}

/// Brute-force counts for one denominator: `(A_k(n), A_k*(n))`, the second
/// restricted to numerators coprime to `n`.
pub fn a_k_counts_bruteforce(n: u64, k: u32) -> Result<(u64, u64)> {
    let arity = Arity::try_from(k)?;
    let (mut all, mut coprime) = (0, 0);
    for a in 1..=arity.terms() * n {
        if is_representable(Fraction::new(a, n)?, arity)? {
            all += 1;
            if gcd(a, n) == 1 {
                coprime += 1;
            }
        }
    }
    Ok((all, coprime))
}

/// `A_2(n)` from the parametrization of all binary sums with denominator
/// dividing `n`.
///
/// Writing `x = g x'`, `y = g y'` with `gcd(x', y') = 1`, the sum
/// `1/x + 1/y = (x' + y')/(g x' y')` has denominator dividing `n` exactly
/// when `x' y' | n` and `g | K = n (x' + y')/(x' y')`; the numerator is
/// then `K/g`. So the representable numerators are the divisors of `K`
/// over all coprime splits `x' y' | n`.
pub fn a2_by_families(n: u64, tables: &SieveTables) -> u64 {
    let fac = tables.factorize(n);
    let prime_powers: Vec<u64> = fac.pairs().iter().map(|&(p, e)| p.pow(e)).collect();
    let mut numerators = std::collections::BTreeSet::new();
    for e in fac.divisors() {
        // coprime splits of e: each full prime power of e goes to x' or y'
        let parts: Vec<u64> = prime_powers.iter().map(|&q| gcd(q, e)).filter(|&g| g > 1).collect();
        for mask in 0u64..(1 << parts.len()) {
            let x: u64 = parts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &q)| q)
                .product();
            let y = e / x;
            if x > y {
                continue;
            }
            let k = n / e * (x + y);
            numerators.extend(tables.factorize(k).divisors());
        }
    }
    numerators.len() as u64
}

/// `A_k(n)`: how many `a >= 1` make `a/n` a sum of `k` unit fractions.
/// Numerators sharing a factor with `n` are included.
pub fn a_k_bruteforce(n: u64, k: u32) -> Result<u64> {
    a_k_counts_bruteforce(n, k).map(|(all, _)| all)
}

/// `A_3*(p)`: the count restricted to `gcd(a, p) = 1`.
pub fn a3_star_bruteforce(p: u64) -> Result<u64> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime(p));
    }
    a_k_counts_bruteforce(p, 3).map(|(_, coprime)| coprime)
}
