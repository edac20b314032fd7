//! Exact arithmetic for the geometry of the compactified integer spectrum
//! over the field with one element.
//!
//! The crate has five layers:
//!
//! - [`monoid`]: finite pointed monoids, congruences, congruence closure,
//!   quotients, and the "domain" test (embeddability into the multiplicative
//!   monoid of a field). This is the brute-force kernel that everything
//!   symbolic is validated against.
//! - [`cyclo`]: roots of unity as exact fractions in Q/Z, the pointed
//!   submonoids `μ_m ∪ {0}`, and finite-level Galois actions.
//! - [`projline`]: the strong congruence space of the projective line over a
//!   cyclotomic coefficient monoid — point classification `[n, λ]`,
//!   enumeration, the level-change maps and their fibers, Galois orbit
//!   quotients, specialization order, degrees, and residue monoids.
//! - [`ledger`] and [`arith`]: places of Q, valuations, the place-to-point
//!   map induced by a rational number, ramification, exact degree ledgers
//!   (formal sums of `log p` and an archimedean unit), defect sums, and
//!   global sections of the compactified arithmetic curve.
//! - [`factor`]: deterministic integer factorization and multiplicative
//!   orders, the plumbing for everything above.
//!
//! All values are immutable and all operations are pure functions, so the
//! whole API is safe to drive from any number of worker threads.

pub mod arith;
pub mod cyclo;
pub mod error;
pub mod factor;
pub mod ledger;
pub mod monoid;
pub mod projline;

pub use error::{Error, Result};
