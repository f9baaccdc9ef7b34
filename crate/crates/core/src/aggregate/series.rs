use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::checkpoint::RunCheckpoint;
use super::{binary_constant, ratio_row};
use crate::arith::{primes_up_to, SieveTables};
use crate::egyptian::{a_k_counts_bruteforce, Arity};
use crate::error::{Error, Result};
use crate::prime_structure::a3_counts_structure;

/// Largest `x_max` the brute-force method accepts without `force`.
pub const BRUTEFORCE_MAX_X: u64 = 500;

const DEFAULT_BATCH_PRIMES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Structure,
    BruteForce,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Structure => "structure",
            Method::BruteForce => "bruteforce",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structure" => Ok(Method::Structure),
            "bruteforce" | "brute" => Ok(Method::BruteForce),
            other => Err(Error::usage(format!("unknown method {other:?}"))),
        }
    }
}

/// The semantic part of a `sum` run: anything that changes the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesConfig {
    pub x_max: u64,
    pub grid: Vec<u64>,
    pub method: Method,
    /// `Two` computes only the binary column.
    pub arity: Arity,
}

impl SeriesConfig {
    /// Validates the run parameters. `grid = None` selects the default grid.
    pub fn new(x_max: u64, grid: Option<Vec<u64>>, method: Method, arity: Arity, force: bool) -> Result<Self> {
        if x_max < 3 {
            return Err(Error::usage(format!("x_max must be at least 3, got {x_max}")));
        }
        if arity == Arity::One {
            return Err(Error::usage("sums are defined for k = 2 or k = 3"));
        }
        let grid = grid.unwrap_or_else(|| Self::default_grid(x_max));
        if grid.is_empty() {
            return Err(Error::usage("grid is empty"));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("grid must be strictly ascending"));
        }
        if grid[0] < 3 || *grid.last().unwrap() > x_max {
            return Err(Error::usage(format!("grid points must lie in [3, {x_max}]")));
        }
        if method == Method::BruteForce && arity == Arity::Three && x_max > BRUTEFORCE_MAX_X && !force {
            return Err(Error::CostGuard {
                what: "brute-force sum",
                detail: format!("x_max = {x_max} is above {BRUTEFORCE_MAX_X}"),
            });
        }
        Ok(SeriesConfig {
            x_max,
            grid,
            method,
            arity,
        })
    }

    /// Powers of two from 64 up to `x_max`, then `x_max` itself.
    pub fn default_grid(x_max: u64) -> Vec<u64> {
        let mut grid: Vec<u64> = (6..63).map(|e| 1u64 << e).take_while(|&g| g <= x_max).collect();
        if grid.last() != Some(&x_max) {
            grid.push(x_max);
        }
        grid
    }

    /// Sieve size that keeps every factorization in the hot loops on the
    /// table path.
    pub fn sieve_limit(&self) -> u64 {
        match self.arity {
            Arity::Three => 3 * self.x_max + 8,
            _ => self.x_max + 2,
        }
    }

    /// SHA-256 over a canonical rendering of the semantic fields.
    pub fn digest(&self) -> String {
        let grid: Vec<String> = self.grid.iter().map(u64::to_string).collect();
        let canonical = format!(
            "x_max={};grid={};method={};k={}",
            self.x_max,
            grid.join(","),
            self.method.name(),
            self.arity.terms()
        );
        let hash = Sha256::digest(canonical.as_bytes());
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeCounts {
    pub p: u64,
    pub a2: u64,
    pub a3: Option<u64>,
    pub a3_star: Option<u64>,
}

fn count_prime(p: u64, config: &SeriesConfig, tables: &SieveTables) -> Result<PrimeCounts> {
    let a2 = 2 + tables.factorize(p + 1).tau();
    let (a3, a3_star) = match (config.arity, config.method) {
        (Arity::Three, Method::Structure) => {
            let (all, coprime) = a3_counts_structure(p, tables)?;
            (Some(all), Some(coprime))
        }
        (Arity::Three, Method::BruteForce) => {
            let (all, coprime) = a_k_counts_bruteforce(p, 3)?;
            (Some(all), Some(coprime))
        }
        _ => (None, None),
    };
    Ok(PrimeCounts { p, a2, a3, a3_star })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub x: u64,
    pub pi_x: u64,
    pub s2: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s3: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s3_star: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SumSeries {
    pub rows: Vec<SeriesRow>,
}

impl SumSeries {
    pub const CSV_HEADER: &'static str = "x,pi_x,S2,S3,S3_star,r3,r5,r2";

    pub fn to_csv(&self) -> String {
        let c = binary_constant();
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        let opt_int = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_f = |v: Option<f64>| v.map(|x| format_sig(x, 10)).unwrap_or_default();
        for row in &self.rows {
            let r = ratio_row(row, c);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                row.x,
                row.pi_x,
                row.s2,
                opt_int(row.s3),
                opt_int(row.s3_star),
                opt_f(r.r3),
                opt_f(r.r5),
                format_sig(r.r2, 10)
            );
        }
        out
    }
}

/// Plain decimal rendering of `v` with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Accumulated state between batches; also what a checkpoint stores.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub(crate) struct Progress {
    pub primes_done: u64,
    pub last_prime: u64,
    pub s2: u64,
    pub s3: u64,
    pub s3_star: u64,
    pub rows: Vec<SeriesRow>,
}

impl Progress {
    fn row(&self, x: u64, arity: Arity) -> SeriesRow {
        let three = arity == Arity::Three;
        SeriesRow {
            x,
            pi_x: self.primes_done,
            s2: self.s2,
            s3: three.then_some(self.s3),
            s3_star: three.then_some(self.s3_star),
        }
    }

    fn absorb(&mut self, c: &PrimeCounts, config: &SeriesConfig) {
        while let Some(&g) = config.grid.get(self.rows.len()) {
            if g >= c.p {
                break;
            }
            let row = self.row(g, config.arity);
            self.rows.push(row);
        }
        self.primes_done += 1;
        self.last_prime = c.p;
        self.s2 += c.a2;
        self.s3 += c.a3.unwrap_or(0);
        self.s3_star += c.a3_star.unwrap_or(0);
    }

    fn finish(&mut self, config: &SeriesConfig) {
        while let Some(&g) = config.grid.get(self.rows.len()) {
            let row = self.row(g, config.arity);
            self.rows.push(row);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Complete(SumSeries),
    /// Stopped early on request; the checkpoint holds the progress.
    Halted {
        primes_done: u64,
        last_prime: u64,
    },
}

/// Runs a series computation over contiguous batches of primes, in
/// parallel inside each batch, checkpointing between batches.
///
/// Per-prime counts are integers merged in prime order, so the result is
/// identical for any worker count and any interrupt/resume pattern.
pub struct SeriesDriver<'a> {
    config: &'a SeriesConfig,
    tables: &'a SieveTables,
    jobs: usize,
    checkpoint: Option<PathBuf>,
    batch_primes: usize,
    halt_after_batches: Option<usize>,
}

impl<'a> SeriesDriver<'a> {
    pub fn new(config: &'a SeriesConfig, tables: &'a SieveTables) -> Self {
        SeriesDriver {
            config,
            tables,
            jobs: 1,
            checkpoint: None,
            batch_primes: DEFAULT_BATCH_PRIMES,
            halt_after_batches: None,
        }
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    /// Primes per batch, i.e. checkpoint granularity.
    pub fn batch_primes(mut self, n: usize) -> Self {
        self.batch_primes = n.max(1);
        self
    }

    /// Stop after this many batches of this invocation (simulates an interrupt).
    pub fn halt_after_batches(mut self, n: usize) -> Self {
        self.halt_after_batches = Some(n);
        self
    }

    pub fn run(&self) -> Result<RunOutcome> {
        let config = self.config;
        if config.x_max + 1 > self.tables.limit() {
            return Err(Error::BeyondSieve {
                value: config.x_max + 1,
                limit: self.tables.limit(),
            });
        }
        let primes = primes_up_to(config.x_max, self.tables)?;
        let digest = config.digest();
        let started = Instant::now();

        let (mut progress, prior_ms) = match &self.checkpoint {
            Some(path) if path.exists() => {
                let ckpt = RunCheckpoint::load(path)?;
                ckpt.check_digest(&digest)?;
                let progress = ckpt.progress();
                let done = progress.primes_done as usize;
                let consistent = done <= primes.len()
                    && (done == 0 || primes[done - 1] as u64 == progress.last_prime)
                    && progress.rows.len() <= config.grid.len();
                if !consistent {
                    return Err(Error::Checkpoint(format!(
                        "{} does not match this prime range",
                        path.display()
                    )));
                }
                (progress, ckpt.elapsed_ms)
            }
            _ => (Progress::default(), 0),
        };

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::usage(format!("thread pool: {e}")))?;

        let mut batches = 0usize;
        while (progress.primes_done as usize) < primes.len() {
            if self.halt_after_batches.is_some_and(|h| batches >= h) {
                return Ok(RunOutcome::Halted {
                    primes_done: progress.primes_done,
                    last_prime: progress.last_prime,
                });
            }
            let start = progress.primes_done as usize;
            let batch = &primes[start..(start + self.batch_primes).min(primes.len())];
            let counts: Vec<PrimeCounts> = pool.install(|| {
                batch
                    .par_iter()
                    .map(|&p| count_prime(p as u64, config, self.tables))
                    .collect::<Result<Vec<_>>>()
            })?;
            for c in &counts {
                progress.absorb(c, config);
            }
            batches += 1;
            self.save(&digest, &progress, prior_ms, started)?;
        }
        progress.finish(config);
        self.save(&digest, &progress, prior_ms, started)?;
        Ok(RunOutcome::Complete(SumSeries { rows: progress.rows }))
    }

    fn save(&self, digest: &str, progress: &Progress, prior_ms: u64, started: Instant) -> Result<()> {
        if let Some(path) = &self.checkpoint {
            let elapsed = prior_ms + started.elapsed().as_millis() as u64;
            RunCheckpoint::from_progress(digest, progress, elapsed).save(path)?;
        }
        Ok(())
    }
}

/// Single-threaded, checkpoint-free series computation.
pub fn compute_series(config: &SeriesConfig, tables: &SieveTables) -> Result<SumSeries> {
    match SeriesDriver::new(config, tables).run()? {
        RunOutcome::Complete(series) => Ok(series),
        RunOutcome::Halted { .. } => unreachable!("no halt requested"),
    }
}
