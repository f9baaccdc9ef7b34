use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use ternfrac_core::aggregate::{
    binary_constant, format_sig, tau_bilinear_diagnostic, tau_shift_diagnostic, tau_shift_sweep, zeta3_bounds, Method,
    RunOutcome, SeriesConfig, SeriesDriver, BILINEAR_MAX_TERMS,
};
use ternfrac_core::arith::is_prime_trial;
use ternfrac_core::egyptian::{
    a_k_counts_bruteforce, blp_witnesses, enumerate_unit_fraction_sums, ternary_representations, witness_to_triple,
};
use ternfrac_core::prime_structure::{
    a2_structure, a3_counts_structure, classify_triple, structure_representations, MAX_STRUCTURE_PRIME,
};
use ternfrac_core::verify::{run_suite, Suite};
use ternfrac_core::{build_sieve, Arity, Classification, Error, Fraction, UnitTriple};

use crate::{ClassifyArgs, CountArgs, DiagCommand, ReprArgs, SumArgs, VerifyArgs};

/// Largest denominator enumerated exhaustively without `--force`.
const REPR_BRUTE_MAX_DEN: u64 = 10_000;
/// Largest `n` for an exhaustive ternary count without `--force`.
const COUNT_BRUTE_MAX_N: u64 = 2_000;
/// Largest `n` for an exhaustive binary count without `--force`.
const COUNT_BRUTE_MAX_N_BINARY: u64 = 1_000_000;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Usage(_)
            | Error::NotPrime(_)
            | Error::CostGuard { .. }
            | Error::SieveBudget { .. }
            | Error::BeyondSieve { .. }
            | Error::Overflow(_),
        ) => 2,
        Some(Error::NotARepresentation(_) | Error::Classification(_)) => 1,
        _ => 4,
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::Usage(msg.into()).into()
}

fn guard(over: bool, force: bool, what: &'static str, detail: String) -> Result<()> {
    if over && !force {
        return Err(Error::CostGuard { what, detail }.into());
    }
    Ok(())
}

fn found(any: bool) -> ExitCode {
    if any {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime_trial(p) {
        return Err(Error::NotPrime(p).into());
    }
    if p > MAX_STRUCTURE_PRIME {
        return Err(usage(format!(
            "p = {p} is above the structure limit {MAX_STRUCTURE_PRIME}"
        )));
    }
    Ok(())
}

fn render(c: &Classification) -> String {
    match c {
        Classification::Trivial => "trivial".to_string(),
        Classification::Witnessed(w) => w.to_string(),
    }
}

pub fn repr(a: &ReprArgs) -> Result<ExitCode> {
    let arity = Arity::try_from(a.k)?;
    let f = Fraction::new(a.num, a.den)?;
    let mut out = io::stdout().lock();
    let brute_guard = || {
        guard(
            arity == Arity::Three && f.den() > REPR_BRUTE_MAX_DEN,
            a.force,
            "exhaustive enumeration",
            format!("denominator {} is above {REPR_BRUTE_MAX_DEN}", f.den()),
        )
    };
    match a.method.as_str() {
        "brute" | "bruteforce" => {
            brute_guard()?;
            let reps = enumerate_unit_fraction_sums(f, a.k)?;
            for r in &reps {
                let line: Vec<String> = r.iter().map(u64::to_string).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
            Ok(found(!reps.is_empty()))
        }
        "param" => {
            if arity != Arity::Three {
                return Err(usage("--method param needs --k 3"));
            }
            brute_guard()?;
            let mut rows = blp_witnesses(f)?
                .into_iter()
                .map(|w| Ok((witness_to_triple(&w, f)?, w)))
                .collect::<ternfrac_core::Result<Vec<_>>>()?;
            rows.sort();
            for (t, w) in &rows {
                let [d1, d2, d3] = w.d;
                let [v1, v2, v3] = w.v;
                writeln!(out, "{t} | {d1} {d2} {d3} {v1} {v2} {v3}")?;
            }
            Ok(found(!rows.is_empty()))
        }
        "structure" => {
            if arity != Arity::Three {
                return Err(usage("--method structure needs --k 3"));
            }
            let (m, p) = (f.num(), f.den());
            require_prime(p)?;
            if m <= 3 || p < 5 {
                // outside the witness families: list exhaustively, classify each
                brute_guard()?;
                let reps = ternary_representations(f)?;
                for t in &reps {
                    let class = classify_triple(m, p, *t).map_or_else(|_| "-".to_string(), |c| render(&c));
                    writeln!(out, "{t} | {class}")?;
                }
                return Ok(found(!reps.is_empty()));
            }
            let tables = build_sieve(3 * p + 8)?;
            let reps = structure_representations(m, p, &tables)?;
            for (t, w) in &reps {
                writeln!(out, "{t} | {w}")?;
            }
            Ok(found(!reps.is_empty()))
        }
        other => Err(usage(format!("unknown method {other:?} (brute, param, structure)"))),
    }
}

pub fn count(a: &CountArgs) -> Result<ExitCode> {
    let arity = Arity::try_from(a.k)?;
    if a.n == 0 {
        return Err(usage("n must be positive"));
    }
    let (all, coprime) = match a.method.as_str() {
        "brute" | "bruteforce" => {
            let cap = match arity {
                Arity::Three => COUNT_BRUTE_MAX_N,
                _ => COUNT_BRUTE_MAX_N_BINARY,
            };
            guard(
                a.n > cap,
                a.force,
                "exhaustive count",
                format!("n = {} is above {cap}", a.n),
            )?;
            a_k_counts_bruteforce(a.n, a.k)?
        }
        "structure" => {
            require_prime(a.n)?;
            match arity {
                Arity::Three => a3_counts_structure(a.n, &build_sieve(3 * a.n + 8)?)?,
                Arity::Two => {
                    let all = a2_structure(a.n, &build_sieve(a.n + 2)?)?;
                    // the numerators p and 2p are always representable
                    (all, all - 2)
                }
                Arity::One => return Err(usage("--method structure needs --k 2 or 3")),
            }
        }
        other => return Err(usage(format!("unknown method {other:?} (brute, structure)"))),
    };
    let mut out = io::stdout().lock();
    if a.coprime {
        writeln!(out, "{all} {coprime}")?;
    } else {
        writeln!(out, "{all}")?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn classify(a: &ClassifyArgs) -> Result<ExitCode> {
    require_prime(a.p)?;
    let mut out = io::stdout().lock();
    if let [m1, m2, m3] = a.triple[..] {
        let c = classify_triple(a.m, a.p, UnitTriple::new(m1, m2, m3))?;
        writeln!(out, "{}", render(&c))?;
        return Ok(ExitCode::SUCCESS);
    }
    guard(
        a.p > REPR_BRUTE_MAX_DEN,
        a.force,
        "exhaustive enumeration",
        format!("p = {} is above {REPR_BRUTE_MAX_DEN}", a.p),
    )?;
    let reps = ternary_representations(Fraction::new(a.m, a.p)?)?;
    for t in &reps {
        writeln!(out, "{t} | {}", render(&classify_triple(a.m, a.p, *t)?))?;
    }
    Ok(found(!reps.is_empty()))
}

pub fn sum(a: &SumArgs) -> Result<ExitCode> {
    let method: Method = a.method.parse()?;
    let arity = Arity::try_from(a.k)?;
    let config = SeriesConfig::new(a.x_max, a.grid.clone(), method, arity, a.force)?;
    let tables = build_sieve(config.sieve_limit())?;
    let jobs = a
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut driver = SeriesDriver::new(&config, &tables).jobs(jobs);
    if let Some(path) = &a.checkpoint {
        if path.exists() {
            eprintln!("resuming from {}", path.display());
        }
        driver = driver.checkpoint(path);
    }
    if let Some(n) = a.batch_primes {
        driver = driver.batch_primes(n);
    }
    if let Some(n) = a.halt_after_batches {
        driver = driver.halt_after_batches(n);
    }
    match driver.run()? {
        RunOutcome::Complete(series) => {
            let csv = series.to_csv();
            match &a.out {
                Some(path) => fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().lock().write_all(csv.as_bytes())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        RunOutcome::Halted {
            primes_done,
            last_prime,
        } => {
            eprintln!(
                "halted after {primes_done} primes (last {last_prime}); rerun with the same checkpoint to resume"
            );
            Ok(ExitCode::from(3))
        }
    }
}

fn default_bound(suite: Suite) -> u64 {
    match suite {
        Suite::Lemma1 => 30,
        Suite::Dichotomy => 100,
        Suite::Binary => 100_000,
        Suite::Structure => 200,
    }
}

pub fn verify(a: &VerifyArgs) -> Result<ExitCode> {
    let suite: Suite = a.suite.parse()?;
    let bound = a.bound.unwrap_or_else(|| default_bound(suite));
    let cap = suite.default_max_bound();
    guard(
        bound > cap,
        a.force,
        "verification sweep",
        format!("bound {bound} is above {cap}"),
    )?;
    let report = run_suite(suite, bound)?;
    writeln!(io::stdout().lock(), "{report}")?;
    Ok(found(report.passed()))
}

pub fn diag(d: &DiagCommand) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match *d {
        DiagCommand::TauShift { n, t } => {
            let tables = build_sieve(n.max(16))?;
            writeln!(out, "{}", format_sig(tau_shift_diagnostic(n, t, &tables)?, 10))?;
        }
        DiagCommand::Sweep { samples, n_max, seed } => {
            let tables = build_sieve(n_max.max(16))?;
            let s = tau_shift_sweep(samples, n_max, seed, &tables)?;
            writeln!(
                out,
                "samples={} seed={seed} max={} argmax={} mean={}",
                s.samples,
                format_sig(s.max, 10),
                s.argmax,
                format_sig(s.mean, 10)
            )?;
        }
        DiagCommand::Bilinear { a, b, c, d, force } => {
            let top = a
                .checked_mul(b)
                .zip(c.checked_mul(d))
                .and_then(|(x, y)| x.checked_add(y));
            let Some(top) = top else {
                bail!(Error::Overflow("bilinear range"))
            };
            let limit = if force { u64::MAX } else { BILINEAR_MAX_TERMS };
            let tables = build_sieve(top.max(16))?;
            writeln!(
                out,
                "{}",
                format_sig(tau_bilinear_diagnostic([a, b, c, d], limit, &tables)?, 10)
            )?;
        }
        DiagCommand::Constant => {
            let (lo, hi) = zeta3_bounds(1_000_000);
            writeln!(out, "C={}", format_sig(binary_constant(), 16))?;
            writeln!(out, "zeta3_lower={}", format_sig(lo, 16))?;
            writeln!(out, "zeta3_upper={}", format_sig(hi, 16))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
