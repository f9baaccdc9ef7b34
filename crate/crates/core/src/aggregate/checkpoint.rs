use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::series::{Progress, SeriesRow};
use crate::error::{Error, Result};

pub const CHECKPOINT_FORMAT: &str = "ternfrac-ckpt-v1";

/// Resumable state of a `sum` run, stored as a TOML document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCheckpoint {
    pub format: String,
    pub digest: String,
    pub last_prime: u64,
    pub primes_done: u64,
    pub s2: u64,
    pub s3: u64,
    pub s3_star: u64,
    /// Wall time spent across all invocations so far.
    pub elapsed_ms: u64,
    pub written_unix: u64,
    #[serde(default)]
    pub rows: Vec<SeriesRow>,
}

impl RunCheckpoint {
    pub(crate) fn from_progress(digest: &str, p: &Progress, elapsed_ms: u64) -> Self {
        let written_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunCheckpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            digest: digest.to_string(),
            last_prime: p.last_prime,
            primes_done: p.primes_done,
            s2: p.s2,
            s3: p.s3,
            s3_star: p.s3_star,
            elapsed_ms,
            written_unix,
            rows: p.rows.clone(),
        }
    }

    pub(crate) fn progress(&self) -> Progress {
        Progress {
            primes_done: self.primes_done,
            last_prime: self.last_prime,
            s2: self.s2,
            s3: self.s3,
            s3_star: self.s3_star,
            rows: self.rows.clone(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let ckpt: RunCheckpoint =
            toml::from_str(&text).map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if ckpt.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "{}: unsupported format {:?} (expected {CHECKPOINT_FORMAT})",
                path.display(),
                ckpt.format
            )));
        }
        Ok(ckpt)
    }

    /// Writes via a sibling temp file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| Error::Checkpoint(e.to_string()))?;
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        fs::write(&tmp, text)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn check_digest(&self, expected: &str) -> Result<()> {
        if self.digest != expected {
            return Err(Error::Checkpoint(format!(
                "configuration digest mismatch: checkpoint has {}, this run is {expected}; \
                 use a different checkpoint path or delete the stale one",
                self.digest
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::{Method, RunOutcome, SeriesConfig, SeriesDriver};
    use crate::arith::build_sieve;
    use crate::egyptian::Arity;

    #[test]
    fn round_trip_and_format_tag() {
        let p = Progress {
            primes_done: 3,
            last_prime: 5,
            s2: 15,
            s3: 30,
            s3_star: 21,
            rows: vec![SeriesRow {
                x: 4,
                pi_x: 2,
                s2: 9,
                s3: Some(12),
                s3_star: None,
            }],
        };
        let ckpt = RunCheckpoint::from_progress("abc", &p, 42);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        ckpt.save(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("format = \"ternfrac-ckpt-v1\""));
        let back = RunCheckpoint::load(&path).unwrap();
        assert_eq!(back, ckpt);
        assert_eq!(back.progress(), p);

        fs::write(&path, text.replace("ternfrac-ckpt-v1", "ternfrac-ckpt-v0")).unwrap();
        assert!(matches!(RunCheckpoint::load(&path), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn resume_is_bit_identical() {
        let t = build_sieve(3_000).unwrap();
        let c = SeriesConfig::new(700, None, Method::Structure, Arity::Three, false).unwrap();
        let whole = crate::aggregate::compute_series(&c, &t).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        let halted = SeriesDriver::new(&c, &t)
            .checkpoint(&path)
            .batch_primes(10)
            .halt_after_batches(4)
            .run()
            .unwrap();
        assert_eq!(
            halted,
            RunOutcome::Halted {
                primes_done: 40,
                last_prime: 173
            }
        );
        let resumed = SeriesDriver::new(&c, &t)
            .checkpoint(&path)
            .jobs(3)
            .batch_primes(7)
            .run()
            .unwrap();
        assert_eq!(resumed, RunOutcome::Complete(whole));
    }

    #[test]
    fn digest_mismatch_is_refused() {
        let t = build_sieve(3_000).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.ckpt");
        let a = SeriesConfig::new(300, None, Method::Structure, Arity::Three, false).unwrap();
        SeriesDriver::new(&a, &t).checkpoint(&path).run().unwrap();
        let b = SeriesConfig::new(400, None, Method::Structure, Arity::Three, false).unwrap();
        let err = SeriesDriver::new(&b, &t).checkpoint(&path).run().unwrap_err();
        assert!(err.to_string().contains("digest mismatch"), "{err}");
    }
}
