//! Invariant sweeps shared by the `verify` subcommand and the tests.
//! Each sweep stops at the first counterexample.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::arith::{build_sieve, gcd, primes_up_to, SieveTables};
use crate::egyptian::{
    a2_by_families, a_k_bruteforce, blp_witnesses, ternary_representations, witness_to_triple, Fraction,
};
use crate::error::{Error, Result};
use crate::prime_structure::{a2_structure, a3_structure, classify_triple, Classification, SolutionType};

/// Brute-force A_2 is only swept up to here; beyond it the binary suite
/// compares the two fast routes.
pub const BINARY_BRUTEFORCE_MAX: u64 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Dichotomy,
    Binary,
    Structure,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Dichotomy => "dichotomy",
            Suite::Binary => "binary",
            Suite::Structure => "structure",
        }
    }

    /// Largest bound accepted without an explicit override.
    pub fn default_max_bound(self) -> u64 {
        match self {
            Suite::Lemma1 => 40,
            Suite::Dichotomy => 200,
            Suite::Binary => 1_000_000,
            Suite::Structure => 400,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma1" => Ok(Suite::Lemma1),
            "dichotomy" => Ok(Suite::Dichotomy),
            "binary" => Ok(Suite::Binary),
            "structure" => Ok(Suite::Structure),
            other => Err(Error::usage(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub bound: u64,
    pub checked: u64,
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} bound={} checked={}",
            self.suite.name(),
            self.bound,
            self.checked
        )?;
        for note in &self.notes {
            write!(f, "\n  {note}")?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, bound: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite,
        bound,
        checked: 0,
        counterexample: None,
        notes: Vec::new(),
    };
    match suite {
        Suite::Lemma1 => lemma1(bound, &mut report)?,
        Suite::Dichotomy => dichotomy(bound, &mut report)?,
        Suite::Binary => binary(bound, &mut report)?,
        Suite::Structure => structure(bound, &mut report)?,
    }
    Ok(report)
}

fn tables_for(bound: u64) -> Result<SieveTables> {
    build_sieve((3 * bound + 8).max(16))
}

fn lemma1(bound: u64, report: &mut SuiteReport) -> Result<()> {
    for n in 1..=bound {
        for m in (1..=3 * n).filter(|&m| gcd(m, n) == 1) {
            let f = Fraction::new(m, n)?;
            let brute: BTreeSet<_> = ternary_representations(f)?.into_iter().collect();
            let image = blp_witnesses(f)?
                .iter()
                .map(|w| witness_to_triple(w, f))
                .collect::<Result<BTreeSet<_>>>()?;
            report.checked += 1;
            if image != brute {
                let missing: Vec<_> = brute.difference(&image).map(|t| t.to_string()).collect();
                let extra: Vec<_> = image.difference(&brute).map(|t| t.to_string()).collect();
                report.counterexample = Some(format!("{f}: missing {missing:?}, extra {extra:?}"));
                return Ok(());
            }
        }
    }
    Ok(())
}

fn dichotomy(bound: u64, report: &mut SuiteReport) -> Result<()> {
    let tables = tables_for(bound)?;
    let (mut type_i, mut type_ii) = (0u64, 0u64);
    for &p in primes_up_to(bound, &tables)?.iter().filter(|&&p| p >= 5) {
        let p = p as u64;
        for m in (4..=3 * p).filter(|m| m % p != 0) {
            for trip in ternary_representations(Fraction::new(m, p)?)? {
                report.checked += 1;
                match classify_triple(m, p, trip) {
                    Ok(Classification::Witnessed(w)) => match w.kind {
                        SolutionType::TypeI => type_i += 1,
                        SolutionType::TypeII => type_ii += 1,
                    },
                    Ok(Classification::Trivial) => unreachable!("m >= 4"),
                    Err(e) => {
                        report.counterexample = Some(format!("m={m} p={p} triple=({trip}): {e}"));
                        return Ok(());
                    }
                }
            }
        }
    }
    report.notes.push(format!("type I triples: {type_i}"));
    report.notes.push(format!("type II triples: {type_ii}"));
    Ok(())
}

fn binary(bound: u64, report: &mut SuiteReport) -> Result<()> {
    let tables = tables_for(bound)?;
    for &p in primes_up_to(bound, &tables)? {
        let p = p as u64;
        let formula = a2_structure(p, &tables)?;
        let families = a2_by_families(p, &tables);
        report.checked += 1;
        if families != formula {
            report.counterexample = Some(format!("p={p}: pair families give {families}, 2+tau(p+1) = {formula}"));
            return Ok(());
        }
        if p <= BINARY_BRUTEFORCE_MAX {
            let brute = a_k_bruteforce(p, 2)?;
            if brute != formula {
                report.counterexample = Some(format!("p={p}: brute force {brute}, 2+tau(p+1) = {formula}"));
                return Ok(());
            }
        }
    }
    report.notes.push(format!(
        "brute force up to {}, pair families up to {bound}",
        bound.min(BINARY_BRUTEFORCE_MAX)
    ));
    Ok(())
}

fn structure(bound: u64, report: &mut SuiteReport) -> Result<()> {
    let tables = tables_for(bound)?;
    for &p in primes_up_to(bound, &tables)?.iter().filter(|&&p| p >= 5) {
        let p = p as u64;
        let fast = a3_structure(p, &tables)?;
        let brute = a_k_bruteforce(p, 3)?;
        report.checked += 1;
        if fast != brute {
            report.counterexample = Some(format!("p={p}: structure {fast}, brute force {brute}"));
            return Ok(());
        }
    }
    Ok(())
}
