//! Places of Q, the place-to-point map induced by a rational number, and
//! the exact defect bookkeeping around it.
//!
//! A non-constant `q = a/b` sends the place at a prime `p` to `[0]`, `[∞]`
//! or `[n]` (with `n` the order of `a·b⁻¹ mod p`), and the archimedean
//! place to `[0]` or `[∞]` by comparing `|q|` with 1. Ramification indices,
//! map degrees and defect numerators are all kept as exact
//! [`DegreeLedger`]s; floating point enters only in the final division of a
//! defect sum.
//!
//! The archimedean ramification index is taken as the ledger of
//! `|log|q||`. The literal value `-log|q|` goes negative once `|q| > 1`,
//! which would make archimedean defects of poles negative for no
//! function-field reason; [`arch_ramification_literal`] still exposes the
//! signed version for comparison, and [`arch_sign_adjusted`] reports when
//! the two differ.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::cyclo::Root;
use crate::error::{Error, Result};
use crate::factor::{factorize, inv_mod, is_prime, mul_mod, multiplicative_order};
use crate::ledger::{roughly_equal, Coeff, DegreeLedger};
use crate::projline::ProjPoint;

/// A reduced non-zero rational `a/b`, the map-inducing "non-constant
/// function". Sign lives on the numerator; `b >= 1` and `gcd(|a|, b) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat {
    num: BigInt,
    den: BigInt,
}

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if num.is_zero() {
            return Err(Error::invalid("the zero rational induces no map"));
        }
        if den.is_zero() {
            return Err(Error::invalid("denominator must be non-zero"));
        }
        let (mut num, mut den) = (num, den);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num_big_gcd(num.magnitude(), den.magnitude());
        let g = BigInt::from_biguint(Sign::Plus, g);
        Ok(Rat {
            num: num / &g,
            den: den / &g,
        })
    }

    pub fn from_i64(num: i64, den: i64) -> Result<Self> {
        if num == 0 {
            return Err(Error::invalid("the zero rational induces no map"));
        }
        if den == 0 {
            return Err(Error::invalid("denominator must be non-zero"));
        }
        let (mut n, mut d) = (num as i128, den as i128);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = crate::factor::gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
        Ok(Rat {
            num: BigInt::from(n / g),
            den: BigInt::from(d / g),
        })
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn abs_numer(&self) -> &BigUint {
        self.num.magnitude()
    }

    pub fn denom_uint(&self) -> &BigUint {
        self.den.magnitude()
    }

    /// `max(|a|, b)`, the height.
    pub fn height(&self) -> BigUint {
        self.abs_numer().max(self.denom_uint()).clone()
    }

    /// Exceptional means archimedean absolute value one; over Q exactly
    /// `1` and `-1`.
    pub fn is_exceptional(&self) -> bool {
        self.num.magnitude() == self.den.magnitude()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    /// `|q| < 1`.
    pub fn abs_below_one(&self) -> bool {
        self.num.magnitude() < self.den.magnitude()
    }

    pub fn recip(&self) -> Result<Rat> {
        Rat::new(self.den.clone(), self.num.clone())
    }

    /// `-q`; reducedness is unaffected by the sign.
    pub fn neg(&self) -> Rat {
        Rat {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }
}

fn num_big_gcd(a: &BigUint, b: &BigUint) -> BigUint {
    use num_integer::Integer;
    a.gcd(b)
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (a, b) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let a: BigInt = a
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad numerator `{a}`")))?;
        let b: BigInt = b
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad denominator `{b}`")))?;
        Rat::new(a, b)
    }
}

/// A place of Q. The trivial place is the generic point of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u128),
    Arch,
    Trivial,
}

impl Place {
    /// Constructs a finite place, certifying primality.
    pub fn finite(p: u128) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(Place::Finite(p))
    }

    /// `deg([p]) = log p`, `deg([∞]) = 1`.
    pub fn degree(&self) -> Result<DegreeLedger> {
        match self {
            Place::Finite(p) => Ok(DegreeLedger::log_prime(*p)),
            Place::Arch => Ok(DegreeLedger::arch_unit()),
            Place::Trivial => Err(Error::invalid("the trivial place has no degree")),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Arch => write!(f, "arch"),
            Place::Trivial => write!(f, "trivial"),
        }
    }
}

fn require_prime(p: u128) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// p-adic valuation of a positive integer.
fn val_uint(n: &BigUint, p: u128) -> u64 {
    debug_assert!(!n.is_zero());
    if let Some(mut small) = n.to_u128() {
        let mut v = 0;
        while small % p == 0 {
            small /= p;
            v += 1;
        }
        return v;
    }
    let p = BigUint::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q) = v_p(a) - v_p(b)`.
pub fn valuation(q: &Rat, p: u128) -> Result<i64> {
    require_prime(p)?;
    Ok(val_uint(q.abs_numer(), p) as i64 - val_uint(q.denom_uint(), p) as i64)
}

/// Residue of a (possibly negative) big integer mod p.
fn residue_mod(n: &BigInt, p: u128) -> u128 {
    let m = match n.magnitude().to_u128() {
        Some(small) => small % p,
        None => (n.magnitude() % BigUint::from(p))
            .to_u128()
            .expect("residue fits"),
    };
    if n.is_negative() && m != 0 {
        p - m
    } else {
        m
    }
}

/// Order of `a·b⁻¹` in the multiplicative group mod `p` for `p ∤ ab`.
pub fn order_of_q_mod(q: &Rat, p: u128) -> Result<u128> {
    require_prime(p)?;
    let a = residue_mod(q.numer(), p);
    let b = residue_mod(q.denom(), p);
    if a == 0 || b == 0 {
        return Err(Error::invalid(format!("{p} divides the numerator or denominator")));
    }
    multiplicative_order(mul_mod(a, inv_mod(b, p)?, p), p)
}

fn require_non_exceptional(q: &Rat) -> Result<()> {
    if q.is_exceptional() {
        return Err(Error::Exceptional(format!(
            "{q} has archimedean absolute value 1 and induces no map"
        )));
    }
    Ok(())
}

/// The image point of a place under the map induced by `q`.
///
/// Finite `p`: `[0]` when `p | a`, `[∞]` when `p | b`, else `[n]` with `n`
/// the order of `a·b⁻¹` mod `p`. Archimedean: `[0]` when `|q| < 1`, `[∞]`
/// when `|q| > 1`. Trivial: the generic point.
pub fn place_map(q: &Rat, place: &Place) -> Result<ProjPoint> {
    require_non_exceptional(q)?;
    match place {
        Place::Trivial => Ok(ProjPoint::Generic),
        Place::Arch => Ok(if q.abs_below_one() {
            ProjPoint::Zero
        } else {
            ProjPoint::Infinity
        }),
        Place::Finite(p) => {
            require_prime(*p)?;
            if residue_mod(q.numer(), *p) == 0 {
                return Ok(ProjPoint::Zero);
            }
            if residue_mod(q.denom(), *p) == 0 {
                return Ok(ProjPoint::Infinity);
            }
            let n = order_of_q_mod(q, *p)?;
            let n = n
                .to_u64()
                .ok_or_else(|| Error::MagnitudeLimit("image index exceeds u64".into()))?;
            Ok(ProjPoint::Pt {
                n,
                lambda: Root::one(),
            })
        }
    }
}

/// Ramification index: a plain integer at finite places, an exact ledger
/// (of value `|log|q||`) at the archimedean place.
#[derive(Debug, Clone, PartialEq)]
pub enum Ramification {
    Finite(u64),
    Arch(DegreeLedger),
}

impl Ramification {
    pub fn value(&self) -> f64 {
        match self {
            Ramification::Finite(e) => *e as f64,
            Ramification::Arch(l) => l.value(),
        }
    }
}

impl fmt::Display for Ramification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ramification::Finite(e) => write!(f, "{e}"),
            Ramification::Arch(l) => write!(f, "{l}"),
        }
    }
}

const POW_BIT_LIMIT: u64 = 1 << 27;

/// `v_p(a^n - b^n)` by direct valuation of the big integer.
fn val_of_power_difference(q: &Rat, p: u128, n: u64) -> Result<u64> {
    let bits = q.height().bits().max(1);
    if n.saturating_mul(bits) > POW_BIT_LIMIT {
        return Err(Error::MagnitudeLimit(format!(
            "a^n - b^n would need about {} bits",
            n.saturating_mul(bits)
        )));
    }
    let an: BigInt = Pow::pow(q.numer(), n);
    let bn: BigInt = Pow::pow(q.denom(), n);
    let diff = an - bn;
    debug_assert!(!diff.is_zero());
    Ok(val_uint(diff.magnitude(), p))
}

/// Ledger of `log n` for a positive big integer.
pub fn integer_log_ledger(n: &BigUint) -> Result<DegreeLedger> {
    Ok(DegreeLedger::from_factorization(&factorize(n)?))
}

/// The ramification index of `q` at a place.
///
/// Finite `p`: `v_p(a)`, `v_p(b)` or `v_p(a^n - b^n)` according to the
/// image point. Archimedean: the exact ledger of `|log|q||`, that is
/// `ledger(max(|a|, b)) - ledger(min(|a|, b))`.
pub fn ramification(q: &Rat, place: &Place) -> Result<Ramification> {
    require_non_exceptional(q)?;
    match place {
        Place::Trivial => Err(Error::invalid(
            "the trivial place has no ramification index",
        )),
        Place::Arch => {
            let hi = integer_log_ledger(q.abs_numer().max(q.denom_uint()))?;
            let lo = integer_log_ledger(q.abs_numer().min(q.denom_uint()))?;
            Ok(Ramification::Arch(hi.sub(&lo)))
        }
        Place::Finite(p) => {
            let e = match place_map(q, place)? {
                ProjPoint::Zero => val_uint(q.abs_numer(), *p),
                ProjPoint::Infinity => val_uint(q.denom_uint(), *p),
                ProjPoint::Pt { n, .. } => val_of_power_difference(q, *p, n)?,
                ProjPoint::Generic => unreachable!("finite places never map to the generic point"),
            };
            Ok(Ramification::Finite(e))
        }
    }
}

/// The literal signed archimedean index `-log|q|` as a ledger:
/// `ledger(b) - ledger(|a|)`. Negative for `|q| > 1`.
pub fn arch_ramification_literal(q: &Rat) -> Result<DegreeLedger> {
    require_non_exceptional(q)?;
    Ok(integer_log_ledger(q.denom_uint())?.sub(&integer_log_ledger(q.abs_numer())?))
}

/// Whether the absolute-value reading of the archimedean index differs
/// from the literal signed one (exactly when `|q| > 1`).
pub fn arch_sign_adjusted(q: &Rat) -> bool {
    !q.abs_below_one()
}

/// A place together with its image point, ramification and defect
/// numerator `(e - 1) · deg(place)`.
#[derive(Debug, Clone)]
pub struct RamifiedPlace {
    pub place: Place,
    pub image: ProjPoint,
    pub ram: Ramification,
    pub defect_numerator: DegreeLedger,
}

/// Computes image, ramification and defect numerator at one place.
pub fn ramified_place(q: &Rat, place: &Place) -> Result<RamifiedPlace> {
    let image = place_map(q, place)?;
    let ram = ramification(q, place)?;
    let defect_numerator = match &ram {
        Ramification::Finite(e) => {
            DegreeLedger::log_prime(match place {
                Place::Finite(p) => *p,
                _ => unreachable!("finite ramification only at finite places"),
            })
            .scale(Coeff::from_integer(*e as i64 - 1))
        }
        Ramification::Arch(l) => l.sub(&DegreeLedger::arch_unit()),
    };
    Ok(RamifiedPlace {
        place: *place,
        image,
        ram,
        defect_numerator,
    })
}

/// `deg(φ_q)`: the degree of the divisor of zeros, summed literally over
/// the places where `v_x(q) > 0`. Coefficient-wise this equals the
/// factorization ledger of `max(|a|, b)`.
pub fn map_degree(q: &Rat) -> Result<DegreeLedger> {
    require_non_exceptional(q)?;
    // Finite zeros: primes dividing the numerator.
    let mut total = integer_log_ledger(q.abs_numer())?;
    // Archimedean zero when |q| < 1, contributing -log|q| = log(b/|a|),
    // expressed exactly in prime coordinates.
    if q.abs_below_one() {
        let arch = integer_log_ledger(q.denom_uint())?.sub(&integer_log_ledger(q.abs_numer())?);
        total = total.add(&arch);
    }
    Ok(total)
}

/// Verifies the product formula for `q`: the rational identity
/// `Π p^{v_p(q)} = |a|/b` reconstructed from the factorizations, and the
/// exact vanishing of the full ledger `Σ_x v_x(q) · deg([x])`.
pub fn product_formula_check(q: &Rat) -> Result<bool> {
    let num_factors = factorize(q.abs_numer())?;
    let den_factors = factorize(q.denom_uint())?;

    // Route 1: rebuild |a| and b from the factorizations.
    if !rebuild_matches(&num_factors, q.abs_numer())
        || !rebuild_matches(&den_factors, q.denom_uint())
    {
        return Ok(false);
    }

    // Route 2: the finite-place valuations plus the archimedean valuation
    // -log|q| = log b - log|a| (expressed in prime coordinates) must
    // cancel exactly, coefficient by coefficient.
    let mut total = DegreeLedger::zero();
    for &(p, e) in &num_factors {
        total.add_prime(p, Coeff::from_integer(e as i64));
    }
    for &(p, e) in &den_factors {
        total.add_prime(p, Coeff::from_integer(-(e as i64)));
    }
    for &(p, e) in &den_factors {
        total.add_prime(p, Coeff::from_integer(e as i64));
    }
    for &(p, e) in &num_factors {
        total.add_prime(p, Coeff::from_integer(-(e as i64)));
    }
    Ok(total.is_zero())
}

fn rebuild_matches(factors: &[(u128, u32)], expected: &BigUint) -> bool {
    if let Some(target) = expected.to_u128() {
        let mut acc: u128 = 1;
        for &(p, e) in factors {
            for _ in 0..e {
                match acc.checked_mul(p) {
                    Some(v) => acc = v,
                    None => return false,
                }
            }
        }
        return acc == target;
    }
    let mut acc = BigUint::one();
    for &(p, e) in factors {
        acc *= BigUint::from(p).pow(e);
    }
    &acc == expected
}

/// The set `X(q)` of places whose image point has degree one — image in
/// `{[0], [∞], [1], [2]}` — as finite places in ascending order followed
/// by the archimedean place.
///
/// Finite members: primes of `a` and of `b`, primes of `a - b` away from
/// `ab` (the `[1]` fiber), and primes of `a + b` away from `ab(a - b)`
/// (the `[2]` fiber; excluding `a - b` makes the order exactly 2, and
/// p = 2 cannot satisfy it since `2 | a + b` forces `2 | a - b`).
pub fn x_of(q: &Rat) -> Result<Vec<Place>> {
    require_non_exceptional(q)?;
    let mut primes: BTreeSet<u128> = BTreeSet::new();
    for (p, _) in factorize(q.abs_numer())? {
        primes.insert(p);
    }
    for (p, _) in factorize(q.denom_uint())? {
        primes.insert(p);
    }
    let diff = (q.numer() - q.denom()).magnitude().clone();
    let sum = (q.numer() + q.denom()).magnitude().clone();
    debug_assert!(!diff.is_zero() && !sum.is_zero());
    for (p, _) in factorize(&diff)? {
        // Coprime to ab automatically; order is exactly 1.
        primes.insert(p);
    }
    for (p, _) in factorize(&sum)? {
        // Order exactly 2 requires p ∤ a - b.
        if val_uint(&diff, p) == 0 {
            primes.insert(p);
        }
    }
    let mut out: Vec<Place> = primes.into_iter().map(Place::Finite).collect();
    out.push(Place::Arch);
    Ok(out)
}

/// A defect sum `S(q)` with its exact numerator and degree ledgers.
/// `value` is the per-place evaluation, `closed_form_value` the
/// independent closed-form one; construction fails if they disagree
/// beyond 1e-9 relative.
#[derive(Debug, Clone)]
pub struct DefectSum {
    pub numerator: DegreeLedger,
    pub degree: DegreeLedger,
    pub value: f64,
    pub closed_form_value: f64,
}

/// Relative tolerance for the two defect-sum routes.
pub const DEFECT_REL_TOL: f64 = 1e-9;

/// `S(q) = Σ_{x ∈ X(q)} (e_x - 1) deg(x) / deg(φ_q)`, computed by
/// per-place iteration and cross-checked against the closed form read off
/// the factorizations of `a`, `b`, `a - b`, `a + b` and the archimedean
/// term.
pub fn defect_sum(q: &Rat) -> Result<DefectSum> {
    require_non_exceptional(q)?;

    // Route A: iterate the places of X(q).
    let mut numerator = DegreeLedger::zero();
    for place in x_of(q)? {
        numerator = numerator.add(&ramified_place(q, &place)?.defect_numerator);
    }

    // Route B: closed form.
    let mut closed = DegreeLedger::zero();
    let num_factors = factorize(q.abs_numer())?;
    let den_factors = factorize(q.denom_uint())?;
    let diff = (q.numer() - q.denom()).magnitude().clone();
    let sum = (q.numer() + q.denom()).magnitude().clone();
    for factors in [&num_factors, &den_factors] {
        for &(p, e) in factors {
            closed.add_prime(p, Coeff::from_integer(e as i64 - 1));
        }
    }
    for (p, e) in factorize(&diff)? {
        closed.add_prime(p, Coeff::from_integer(e as i64 - 1));
    }
    for (p, e) in factorize(&sum)? {
        if val_uint(&diff, p) == 0 {
            closed.add_prime(p, Coeff::from_integer(e as i64 - 1));
        }
    }
    let hi = DegreeLedger::from_factorization(&factorize(q.abs_numer().max(q.denom_uint()))?);
    let lo = DegreeLedger::from_factorization(&factorize(q.abs_numer().min(q.denom_uint()))?);
    closed = closed.add(&hi.sub(&lo)).sub(&DegreeLedger::arch_unit());

    debug_assert_eq!(numerator, closed, "defect routes disagree exactly for {q}");

    let degree = map_degree(q)?;
    let deg_value = degree.value();
    let value = numerator.value() / deg_value;
    let closed_form_value = closed.value() / deg_value;
    if !roughly_equal(value, closed_form_value, DEFECT_REL_TOL) {
        return Err(Error::Invariant(format!(
            "defect-sum routes disagree for {q}: {value} vs {closed_form_value}"
        )));
    }
    Ok(DefectSum {
        numerator,
        degree,
        value,
        closed_form_value,
    })
}

/// A congruence on the coordinate monoid of the affine chart: either the
/// zero locus `⟨T ∼ 0⟩` or a cyclic relation `⟨T^n ∼ 1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineCongruence {
    ZeroRelation,
    CyclicRelation(u64),
}

impl AffineCongruence {
    /// The corresponding point in the chart around zero.
    pub fn as_point(&self) -> ProjPoint {
        match self {
            AffineCongruence::ZeroRelation => ProjPoint::Zero,
            AffineCongruence::CyclicRelation(n) => ProjPoint::f1_label(*n),
        }
    }

    /// The corresponding point when this congruence was computed on the
    /// chart around infinity, where the zero relation reads `T⁻¹ ∼ 0`.
    pub fn as_point_from_inverse_chart(&self) -> ProjPoint {
        match self {
            AffineCongruence::ZeroRelation => ProjPoint::Infinity,
            AffineCongruence::CyclicRelation(n) => ProjPoint::f1_label(*n),
        }
    }
}

impl fmt::Display for AffineCongruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineCongruence::ZeroRelation => write!(f, "<T ~ 0>"),
            AffineCongruence::CyclicRelation(n) => write!(f, "<T^{n} ~ 1>"),
        }
    }
}

/// The strong congruence that a prime of `Z[q]` pulls back to on the
/// coordinate monoid: `⟨T ∼ 0⟩` when `p | a`, else `⟨T^n ∼ 1⟩` with `n`
/// the order of `a·b⁻¹` mod p. Primes dividing `b` are not primes of
/// `Z[q]`; they live on the inverse chart.
pub fn strong_congruence_of_prime(q: &Rat, p: u128) -> Result<AffineCongruence> {
    require_non_exceptional(q)?;
    require_prime(p)?;
    if residue_mod(q.denom(), p) == 0 {
        return Err(Error::WrongChart(format!(
            "{p} divides the denominator of {q}; use the inverse chart"
        )));
    }
    if residue_mod(q.numer(), p) == 0 {
        return Ok(AffineCongruence::ZeroRelation);
    }
    let n = order_of_q_mod(q, p)?
        .to_u64()
        .ok_or_else(|| Error::MagnitudeLimit("order exceeds u64".into()))?;
    Ok(AffineCongruence::CyclicRelation(n))
}

/// Same computation on the chart around infinity, where `T⁻¹ ↦ 1/q`:
/// `⟨T⁻¹ ∼ 0⟩` (image `[∞]`) when `p | b`.
pub fn strong_congruence_inverse_chart(q: &Rat, p: u128) -> Result<AffineCongruence> {
    strong_congruence_of_prime(&q.recip()?, p)
}

/// Checks that `T ↦ a·b⁻¹ mod p` embeds `μ_n ∪ {0}` into the residue
/// field at `p`, with `n` taken from the fast-path order: the `n` powers
/// must be pairwise distinct, non-zero, and close up at `x^n = 1`.
///
/// Distinctness of `x^0, ..., x^(n-1)` is equivalent to no power before
/// the n-th returning to 1 (a repeat `x^i = x^j` cancels to an earlier 1),
/// so one walk suffices.
pub fn residue_embedding_check(q: &Rat, p: u128) -> Result<bool> {
    require_non_exceptional(q)?;
    require_prime(p)?;
    let a = residue_mod(q.numer(), p);
    let b = residue_mod(q.denom(), p);
    if a == 0 || b == 0 {
        return Err(Error::invalid(format!(
            "{p} divides the numerator or denominator of {q}"
        )));
    }
    let x = mul_mod(a, inv_mod(b, p)?, p);
    let n = multiplicative_order(x, p)?;
    let mut acc: u128 = 1;
    for step in 1..=n {
        acc = mul_mod(acc, x, p);
        if acc == 0 || (acc == 1 && step < n) {
            return Ok(false);
        }
    }
    Ok(acc == 1)
}

/// Sections of the structure sheaf over the complement of a finite set of
/// excluded places: `v_p(λ) >= 0` away from the excluded finite places,
/// and `|λ| <= 1` unless the archimedean place is excluded.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    excluded_finite: BTreeSet<u128>,
    exclude_arch: bool,
}

impl SectionSpace {
    /// `excluded` lists the places removed from the open set. The trivial
    /// place is the generic point and cannot be removed.
    pub fn new(excluded: &[Place]) -> Result<Self> {
        let mut excluded_finite = BTreeSet::new();
        let mut exclude_arch = false;
        for place in excluded {
            match place {
                Place::Finite(p) => {
                    require_prime(*p)?;
                    excluded_finite.insert(*p);
                }
                Place::Arch => exclude_arch = true,
                Place::Trivial => {
                    return Err(Error::invalid(
                        "open sets are complements of non-generic places; cannot exclude the trivial place",
                    ))
                }
            }
        }
        Ok(SectionSpace {
            excluded_finite,
            exclude_arch,
        })
    }

    /// Membership: the denominator may only contain excluded primes, and
    /// the archimedean condition applies unless excluded. Zero always
    /// belongs.
    pub fn contains(&self, value: &BigRational) -> bool {
        if value.is_zero() {
            return true;
        }
        if !self.exclude_arch && value.numer().magnitude() > value.denom().magnitude() {
            return false;
        }
        let mut den = value.denom().magnitude().clone();
        for &p in &self.excluded_finite {
            let p = BigUint::from(p);
            loop {
                let (q, r) = num_integer::Integer::div_rem(&den, &p);
                if !r.is_zero() {
                    break;
                }
                den = q;
            }
        }
        den.is_one()
    }

    /// All members of height up to `height` (`|num| <= height` and
    /// `den <= height`), in ascending numeric order.
    pub fn enumerate(&self, height: u64) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = vec![BigRational::zero()];
        for den in 1..=height.max(1) {
            for num in 1..=height.max(1) {
                if num_integer::gcd(num, den) != 1 {
                    continue;
                }
                for signed in [BigInt::from(num), -BigInt::from(num)] {
                    let candidate = BigRational::new(signed, BigInt::from(den));
                    if self.contains(&candidate) {
                        out.push(candidate);
                    }
                }
            }
        }
        out.sort();
        out
    }
}
