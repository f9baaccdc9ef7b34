//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use ternfrac_core::aggregate::{binary_constant, compute_series, ratio_report, Method, SeriesConfig, SumSeries};
use ternfrac_core::arith::primes_up_to;
use ternfrac_core::egyptian::{a2_by_families, a_k_bruteforce};
use ternfrac_core::prime_structure::{a3_structure, type_i_m_set, type_i_m_set_with, TypeIBounds};
use ternfrac_core::verify::{run_suite, Suite};
use ternfrac_core::{build_sieve, Arity};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

// (x, S3, S3*) from the exhaustive enumerator, cross-checked by an
// independent rational-arithmetic search.
const S3_GOLDEN: [(u64, u64, u64); 2] = [(10, 38, 26), (100, 748, 673)];

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn oracle_equivalence() -> Outcome {
    let tables = build_sieve(3 * 200 + 8).map_err(err)?;
    let mut checked = 0;
    for &p in primes_up_to(200, &tables).map_err(err)?.iter().filter(|&&p| p >= 5) {
        let p = p as u64;
        let fast = a3_structure(p, &tables).map_err(err)?;
        let brute = a_k_bruteforce(p, 3).map_err(err)?;
        if fast != brute {
            return Err(format!("p={p}: structure {fast}, brute force {brute}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} primes in [5, 200]"))
}

fn suite(s: Suite, bound: u64) -> Outcome {
    let r = run_suite(s, bound).map_err(err)?;
    match &r.counterexample {
        None if r.notes.is_empty() => Ok(format!("bound={bound} checked={}", r.checked)),
        None => Ok(format!("bound={bound} checked={}; {}", r.checked, r.notes.join("; "))),
        Some(c) => Err(c.clone()),
    }
}

fn binary_formula() -> Outcome {
    let detail = suite(Suite::Binary, 100_000)?;
    // the series driver's S2 must agree with the independent pair-family count
    let x = 100_000;
    let tables = build_sieve(x + 2).map_err(err)?;
    let config = SeriesConfig::new(x, Some(vec![x]), Method::Structure, Arity::Two, false).map_err(err)?;
    let s2 = compute_series(&config, &tables).map_err(err)?.rows[0].s2;
    let by_families: u64 = primes_up_to(x, &tables)
        .map_err(err)?
        .iter()
        .map(|&p| a2_by_families(p as u64, &tables))
        .sum();
    if s2 != by_families {
        return Err(format!("S2({x}) = {s2} but pair families sum to {by_families}"));
    }
    Ok(format!("{detail}; S2(1e5)={s2}"))
}

fn binary_constant_check() -> Outcome {
    let x = 1_000_000;
    let tables = build_sieve(x + 2).map_err(err)?;
    let config = SeriesConfig::new(x, Some(vec![10_000, x]), Method::Structure, Arity::Two, false).map_err(err)?;
    let rows = compute_series(&config, &tables).map_err(err)?.rows;
    let c = binary_constant();
    let dev = |i: usize| (rows[i].s2 as f64 / rows[i].x as f64 - c).abs();
    let (small, large) = (dev(0), dev(1));
    let detail = format!("C={c:.9} |S2/x-C| at 1e4: {small:.5}, at 1e6: {large:.5}");
    if large <= 0.25 * c && large < small {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn series(x_max: u64, grid: Vec<u64>, method: Method) -> Result<SumSeries, String> {
    let config = SeriesConfig::new(x_max, Some(grid), method, Arity::Three, false).map_err(err)?;
    let tables = build_sieve(config.sieve_limit()).map_err(err)?;
    compute_series(&config, &tables).map_err(err)
}

fn desk_scale_growth() -> Outcome {
    // (a) golden values, both methods
    for method in [Method::BruteForce, Method::Structure] {
        let s = series(100, vec![10, 100], method)?;
        for (row, &(x, s3, s3_star)) in s.rows.iter().zip(&S3_GOLDEN) {
            if (row.x, row.s3, row.s3_star) != (x, Some(s3), Some(s3_star)) {
                return Err(format!(
                    "{}: row {row:?}, expected S3({x})={s3}, S3*={s3_star}",
                    method.name()
                ));
            }
        }
    }
    // (b), (c) on the default grid
    let s = series(5_000, SeriesConfig::default_grid(5_000), Method::Structure)?;
    for r in ratio_report(&s) {
        let (r3, r5) = (r.r3.ok_or("missing r3")?, r.r5.ok_or("missing r5")?);
        let ln = (r.x as f64).ln();
        if r3 <= 0.0 || (r5 - r3 / (ln * ln)).abs() > 1e-12 * r5.abs() {
            return Err(format!("x={}: r3={r3}, r5={r5}", r.x));
        }
    }
    if s.rows.windows(2).any(|w| w[0].s3 > w[1].s3) {
        return Err("S3 decreases along the grid".into());
    }
    // structure and brute force on every x <= 200
    let grid: Vec<u64> = (3..=200).collect();
    let a = series(200, grid.clone(), Method::Structure)?;
    let b = series(200, grid, Method::BruteForce)?;
    let col = |s: &SumSeries| s.rows.iter().map(|r| (r.s3, r.s3_star)).collect::<Vec<_>>();
    if col(&a) != col(&b) {
        return Err("structure and brute-force S3 columns differ below 200".into());
    }
    Ok(format!(
        "golden x=10,100; {} grid rows to 5000; 198 points <= 200",
        s.rows.len()
    ))
}

fn run_sum(dir: &Path, name: &str, extra: &[&str]) -> Result<(Option<i32>, Vec<u8>), String> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_ternfrac"))
        .args(["sum", "--x-max", "5000", "--method", "structure", "--out"])
        .arg(&out)
        .args(extra)
        .status()
        .map_err(err)?;
    let bytes = if out.exists() {
        fs::read(&out).map_err(err)?
    } else {
        Vec::new()
    };
    Ok((status.code(), bytes))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let (code, reference) = run_sum(dir.path(), "j1.csv", &["--jobs", "1"])?;
    if code != Some(0) || reference.is_empty() {
        return Err(format!("jobs=1 run exited with {code:?}"));
    }
    for jobs in ["2", "8"] {
        let (code, csv) = run_sum(dir.path(), &format!("j{jobs}.csv"), &["--jobs", jobs])?;
        if code != Some(0) || csv != reference {
            return Err(format!("jobs={jobs} output differs (exit {code:?})"));
        }
    }
    let ckpt = dir.path().join("run.ckpt");
    let ckpt_s = ckpt.to_str().ok_or("non-utf8 temp path")?;
    let halt = [
        "--jobs",
        "4",
        "--checkpoint",
        ckpt_s,
        "--batch-primes",
        "40",
        "--halt-after-batches",
        "5",
    ];
    let (code, _) = run_sum(dir.path(), "resumed.csv", &halt)?;
    if code != Some(3) || !ckpt.exists() {
        return Err(format!("interrupted run exited with {code:?}"));
    }
    let (code, csv) = run_sum(dir.path(), "resumed.csv", &["--jobs", "2", "--checkpoint", ckpt_s])?;
    if code != Some(0) || csv != reference {
        return Err(format!("resumed output differs (exit {code:?})"));
    }
    Ok(format!(
        "jobs 1/2/8 and halt+resume identical, {} bytes",
        reference.len()
    ))
}

fn bound_sufficiency() -> Outcome {
    let tables = build_sieve(3 * 100 + 8).map_err(err)?;
    let mut checked = 0;
    for &p in primes_up_to(100, &tables).map_err(err)?.iter().filter(|&&p| p >= 5) {
        let p = p as u64;
        let standard = type_i_m_set(p, &tables).map_err(err)?;
        let doubled = type_i_m_set_with(p, TypeIBounds::scaled(2), &tables).map_err(err)?;
        if standard != doubled {
            let extra: Vec<_> = doubled.difference(&standard).collect();
            return Err(format!("p={p}: doubled bounds add {extra:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} primes in [5, 100]"))
}

fn main() -> ExitCode {
    let criteria: [Check; 8] = [
        ("oracle equivalence, primes 5..200", oracle_equivalence),
        ("six-parameter witnesses, n <= 30", || suite(Suite::Lemma1, 30)),
        ("binary formula", binary_formula),
        ("binary asymptotic constant", binary_constant_check),
        ("dichotomy, primes 5..100", || suite(Suite::Dichotomy, 100)),
        ("desk-scale growth substitute", desk_scale_growth),
        ("determinism of sum", determinism),
        ("type I bound sufficiency", bound_sufficiency),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
