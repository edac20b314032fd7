//! Deterministic integer factorization, primality and multiplicative orders.
//!
//! Inputs are capped at `2^128`; anything larger is an explicit
//! [`Error::MagnitudeLimit`], never a silent wrong answer. Strategy: trial
//! division by sieved primes up to `10^6`, then Brent-cycle rho with a fixed
//! parameter schedule, so the factor order is reproducible run to run.
//!
//! Primality below `3.3 * 10^24` is certified by the 13-base strong
//! pseudoprime test (a proven deterministic set); above that the same bases
//! are combined with a strong Lucas test. The combination is deterministic
//! and has no known counterexample below `2^128`.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_BOUND as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::with_capacity(80_000);
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u32);
                let mut k = p * p;
                while k <= n {
                    composite[k] = true;
                    k += p;
                }
            }
        }
        primes
    })
}

/// `(a + b) mod m` without overflow, for `a, b < m`.
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `(a - b) mod m`, for `a, b < m`.
fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

/// `(a * b) mod m`. Uses the wide product when it fits, binary splitting
/// otherwise.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    let (a, b) = (a % m, b % m);
    if m <= u64::MAX as u128 {
        return (a * b) % m;
    }
    let (mut a, mut b) = (a, b);
    let mut acc: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// `base^exp mod m`.
pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Modular inverse of `a` mod `m` for coprime inputs.
pub fn inv_mod(a: u128, m: u128) -> Result<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::invalid(format!("{a} is not invertible mod {m}")));
    }
    Ok(t0.rem_euclid(m as i128) as u128)
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn strong_probable_prime(n: u128, base: u128) -> bool {
    let b = base % n;
    if b == 0 {
        return true;
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let odd = d >> s;
    let mut x = pow_mod(b, odd, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
fn jacobi(a: i128, n: u128) -> i32 {
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut result = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn integer_sqrt(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = ((n as f64).sqrt() as u128).min(u64::MAX as u128);
    while r.checked_mul(r).map_or(true, |v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |v| v <= n) {
        r += 1;
    }
    r
}

fn is_perfect_square(n: u128) -> bool {
    let r = integer_sqrt(n);
    r * r == n
}

/// Strong Lucas probable prime test with Selfridge parameters (P = 1,
/// Q = (1 - D) / 4, first D in 5, -7, 9, ... with Jacobi symbol -1).
fn strong_lucas_probable_prime(n: u128) -> bool {
    if is_perfect_square(n) {
        return false;
    }
    let mut d: i128 = 5;
    loop {
        match jacobi(d, n) {
            0 => return n == d.unsigned_abs(),
            -1 => break,
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -(d - 2) };
    }
    let q = ((1 - d) / 4).rem_euclid(n as i128) as u128;
    let d_mod = d.rem_euclid(n as i128) as u128;

    let mut index = n + 1;
    let s = index.trailing_zeros();
    index >>= s;

    // Halving mod odd n without overflow: for odd x, (x + n) / 2 equals
    // x/2 + n/2 + 1 in floor arithmetic.
    let halve = |x: u128| if x % 2 == 0 { x / 2 } else { x / 2 + n / 2 + 1 };

    // Binary ladder for (U_k, V_k, Q^k), P = 1:
    //   U_{2k} = U_k V_k           V_{2k} = V_k^2 - 2 Q^k
    //   U_{k+1} = (U_k + V_k)/2    V_{k+1} = (D U_k + V_k)/2
    let (mut u, mut v, mut qk) = (1u128, 1u128, q);
    let bits = 128 - index.leading_zeros();
    for i in (0..bits.saturating_sub(1)).rev() {
        u = mul_mod(u, v, n);
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if (index >> i) & 1 == 1 {
            let nu = halve(add_mod(u, v, n));
            let nv = halve(add_mod(mul_mod(d_mod, u, n), v, n));
            u = nu % n;
            v = nv % n;
            qk = mul_mod(qk, q, n);
        }
    }

    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        if v == 0 {
            return true;
        }
        qk = mul_mod(qk, qk, n);
    }
    false
}

/// Bases proving the strong pseudoprime test deterministic below
/// 3,317,044,064,679,887,385,961,981.
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const MR_PROVEN_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Deterministic primality test for `n < 2^128`. Below the sieve bound it
/// is a binary search in the sieve; above, strong pseudoprime tests.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    if n <= TRIAL_DIVISION_BOUND as u128 {
        return small_primes().binary_search(&(n as u32)).is_ok();
    }
    for &p in MR_BASES.iter() {
        if n % p == 0 {
            return false;
        }
    }
    if !MR_BASES.iter().all(|&b| strong_probable_prime(n, b)) {
        return false;
    }
    if n < MR_PROVEN_BOUND {
        return true;
    }
    strong_lucas_probable_prime(n)
}

/// One Brent cycle-detection pass with curve `x^2 + c`. Returns a proper
/// factor, or `None` when this parameter degenerates.
fn brent_rho_once(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
    let m = 128u128;
    let mut y = 2u128;
    let mut r = 1u128;
    let mut q = 1u128;
    let mut g = 1u128;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0u128;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u128(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u128(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        None
    } else {
        Some(g)
    }
}

/// Deterministic rho driver: fixed parameter schedule `c = 1, 2, 3, ...`.
fn brent_rho(n: u128) -> u128 {
    debug_assert!(n > 1 && !is_prime(n));
    for c in 1u128..n {
        if let Some(d) = brent_rho_once(n, c) {
            return d;
        }
    }
    unreachable!("rho schedule exhausted for composite {n}")
}

/// Complete factorization of `n >= 1` into `(prime, exponent)` pairs sorted
/// by prime.
pub fn factorize_u128(n: u128) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::invalid("cannot factorize 0"));
    }
    if n <= u64::MAX as u128 {
        // Machine-word trial division; u128 division is several times
        // slower and this path covers the overwhelming majority of calls.
        let mut n = n as u64;
        let mut out: Vec<(u128, u32)> = Vec::new();
        for &p in small_primes() {
            let p = p as u64;
            if p * p > n {
                break;
            }
            if n % p == 0 {
                let mut e = 0u32;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p as u128, e));
            }
        }
        if n > 1 {
            if (n as u128) < (TRIAL_DIVISION_BOUND as u128) * (TRIAL_DIVISION_BOUND as u128)
                || is_prime(n as u128)
            {
                out.push((n as u128, 1));
            } else {
                split_with_rho(n as u128, &mut out);
                out.sort_unstable_by_key(|&(p, _)| p);
            }
        }
        return Ok(out);
    }
    let mut n = n;
    let mut out: Vec<(u128, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let trial_sq = (TRIAL_DIVISION_BOUND as u128) * (TRIAL_DIVISION_BOUND as u128);
        if n < trial_sq || is_prime(n) {
            out.push((n, 1));
        } else {
            split_with_rho(n, &mut out);
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    Ok(out)
}

/// Splits a composite with no small factors into primes via rho and
/// appends the grouped result.
fn split_with_rho(n: u128, out: &mut Vec<(u128, u32)>) {
    let mut stack = vec![n];
    let mut found: Vec<u128> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            found.push(m);
            continue;
        }
        let d = brent_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    found.sort_unstable();
    let mut i = 0;
    while i < found.len() {
        let p = found[i];
        let mut e = 0u32;
        while i < found.len() && found[i] == p {
            e += 1;
            i += 1;
        }
        out.push((p, e));
    }
}

/// Factorizes an arbitrary-precision positive integer, enforcing the
/// `2^128` magnitude cap.
pub fn factorize(n: &BigUint) -> Result<Vec<(u128, u32)>> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factorize 0"));
    }
    let v = n.to_u128().ok_or_else(|| {
        Error::MagnitudeLimit(format!(
            "{n} has {} bits; the factorizer accepts < 2^128",
            n.bits()
        ))
    })?;
    factorize_u128(v)
}

/// Euler's totient via factorization.
pub fn euler_phi(n: u64) -> Result<u64> {
    let mut phi: u64 = 1;
    for (p, e) in factorize_u128(n as u128)? {
        let p = p as u64;
        phi *= (p - 1) * p.pow(e - 1);
    }
    Ok(phi)
}

/// Multiplicative order of `x` modulo a prime `p`, by factoring `p - 1` and
/// dividing out prime factors.
pub fn multiplicative_order(x: u128, p: u128) -> Result<u128> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let x = x % p;
    if x == 0 {
        return Err(Error::invalid("order of 0 is undefined"));
    }
    let group = p - 1;
    let mut ord = group;
    for (q, _) in factorize_u128(group)? {
        while ord % q == 0 && pow_mod(x, ord / q, p) == 1 {
            ord /= q;
        }
    }
    debug_assert_eq!(pow_mod(x, ord, p), 1);
    Ok(ord)
}
