//! Ternary and binary Egyptian-fraction representations with exact
//! arithmetic, fast counting for prime denominators, and partial-sum
//! experiments over primes.
//!
//! * [`arith`]: sieve, factorization and multiplicative functions.
//! * [`egyptian`]: exhaustive enumeration (the reference counts) and the
//!   six-parameter witnesses for general denominators.
//! * [`prime_structure`]: the Type I / Type II witness families for prime
//!   denominators and the counters built on them.
//! * [`aggregate`]: sums over primes, ratios, constants, diagnostics,
//!   checkpointed parallel driver.
//! * [`verify`]: invariant sweeps.

pub mod aggregate;
pub mod arith;
pub mod egyptian;
mod error;
pub mod prime_structure;
pub mod verify;

pub use arith::{build_sieve, SieveTables};
pub use egyptian::{Arity, BlpWitness, Fraction, UnitTriple};
pub use error::{Error, Result};
pub use prime_structure::{Classification, PrimeWitness, SolutionType};
