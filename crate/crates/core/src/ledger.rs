//! Exact degree bookkeeping.
//!
//! Degrees on the arithmetic curve are real numbers of the form
//! `Σ c_p · log p + c_∞ · 1` with rational coefficients. Floating point
//! would lose the identities this crate checks (the product formula is an
//! exact cancellation of such sums), so a [`DegreeLedger`] stores the
//! coefficients themselves and only evaluates to `f64` on demand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Coefficient type of a ledger. Exact rational; the coefficients that occur
/// in practice are valuations and small products of them, far below overflow.
pub type Coeff = Ratio<i64>;

/// A formal sum `Σ c_p · log p + arch · 1` with rational coefficients.
///
/// Zero coefficients are never stored, so two ledgers are equal as values if
/// and only if they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeLedger {
    primes: BTreeMap<u128, Coeff>,
    arch: Coeff,
}

impl DegreeLedger {
    /// The zero ledger.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The ledger `log p` of a single finite place.
    pub fn log_prime(p: u128) -> Self {
        Self::zero().with_prime(p, Coeff::from_integer(1))
    }

    /// The archimedean unit `1`.
    pub fn arch_unit() -> Self {
        let mut l = Self::zero();
        l.arch = Coeff::from_integer(1);
        l
    }

    /// Ledger of `log n` for a positive integer given by its factorization.
    pub fn from_factorization(factors: &[(u128, u32)]) -> Self {
        let mut l = Self::zero();
        for &(p, e) in factors {
            l.add_prime(p, Coeff::from_integer(e as i64));
        }
        l
    }

    fn with_prime(mut self, p: u128, c: Coeff) -> Self {
        self.add_prime(p, c);
        self
    }

    /// Adds `c · log p` in place.
    pub fn add_prime(&mut self, p: u128, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.primes.entry(p).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            self.primes.remove(&p);
        }
    }

    /// Adds `c · 1` (archimedean unit) in place.
    pub fn add_arch(&mut self, c: Coeff) {
        self.arch += c;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&p, &c) in &other.primes {
            out.add_prime(p, c);
        }
        out.arch += other.arch;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Coeff::from_integer(-1)))
    }

    pub fn scale(&self, k: Coeff) -> Self {
        let mut out = Self::zero();
        if k.is_zero() {
            return out;
        }
        for (&p, &c) in &self.primes {
            out.primes.insert(p, c * k);
        }
        out.arch = self.arch * k;
        out
    }

    /// Coefficient-wise zero test. Exact, no tolerance.
    pub fn is_zero(&self) -> bool {
        self.primes.is_empty() && self.arch.is_zero()
    }

    /// Coefficient of `log p`.
    pub fn prime_coeff(&self, p: u128) -> Coeff {
        self.primes.get(&p).copied().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of the archimedean unit.
    pub fn arch_coeff(&self) -> Coeff {
        self.arch
    }

    /// The finite-place terms, sorted by prime.
    pub fn prime_terms(&self) -> impl Iterator<Item = (u128, Coeff)> + '_ {
        self.primes.iter().map(|(&p, &c)| (p, c))
    }

    /// Evaluates `Σ c_p · ln p + arch` in double precision.
    ///
    /// Summation order is fixed (ascending primes, arch last), so the result
    /// is bit-identical across runs and worker counts.
    pub fn value(&self) -> f64 {
        let mut acc = 0.0;
        for (&p, &c) in &self.primes {
            acc += ratio_to_f64(c) * (p as f64).ln();
        }
        acc + ratio_to_f64(self.arch)
    }
}

fn ratio_to_f64(r: Coeff) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn fmt_coeff(c: Coeff) -> String {
    if c.denom() == &1 {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for DegreeLedger {
    /// Serializes as space-separated `p^c` terms in ascending prime order,
    /// followed by `arch^c` when the archimedean coefficient is non-zero.
    /// The zero ledger prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&p, &c) in &self.primes {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}^{}", p, fmt_coeff(c))?;
            first = false;
        }
        if !self.arch.is_zero() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "arch^{}", fmt_coeff(self.arch))?;
        }
        Ok(())
    }
}

fn parse_coeff(s: &str) -> Result<Coeff> {
    let bad = || Error::invalid(format!("bad ledger coefficient `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ok(Coeff::new(n, d))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok(Coeff::from_integer(n))
    }
}

impl FromStr for DegreeLedger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = DegreeLedger::zero();
        if s == "0" || s.is_empty() {
            return Ok(out);
        }
        for term in s.split_whitespace() {
            let (base, coeff) = term
                .split_once('^')
                .ok_or_else(|| Error::invalid(format!("bad ledger term `{term}`")))?;
            let c = parse_coeff(coeff)?;
            if base == "arch" {
                out.add_arch(c);
            } else {
                let p: u128 = base
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad ledger prime `{base}`")))?;
                out.add_prime(p, c);
            }
        }
        Ok(out)
    }
}

/// Relative agreement of two evaluated ledger quantities, used where a final
/// division leaves the exact world.
pub fn roughly_equal(a: f64, b: f64, rel_tol: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() <= rel_tol * scale
}
