//! The strong congruence space of the projective line over a cyclotomic
//! coefficient monoid.
//!
//! Every point other than the generic one is `[0]`, `[∞]`, or a congruence
//! `[n, λ] = ⟨T^n ∼ λ⟩` with `λ` a unit of the coefficient monoid `F` such
//! that the quotient embeds in a field. Pairs `(n, λ)` are the complete
//! normal form, so points are stored as data; congruence semantics live in
//! the symbolic containment rule and in finite quotients built on demand.
//!
//! Validity of `[n, λ]` has two routes that must agree: the normative one
//! builds the finite quotient and runs the domain test from
//! [`crate::monoid`]; the fast path reduces to a gcd. With `λ = s^a` for the
//! canonical generator `s` of `μ_m`, the quotient's unit group is abelian
//! with presentation `⟨s, t | s^m = 1, t^n = s^a⟩` of order `m·n`, which is
//! cyclic — equivalently a domain — exactly when `gcd(m, n, a) = 1`.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::cyclo::{ord_rel, CycloMonoid, GaloisLevel, Root};
use crate::error::{Error, Result};
use crate::factor::euler_phi;
use crate::ledger::{Coeff, DegreeLedger};
use crate::monoid::{FiniteMonoid, LaurentMonoid};

/// A point of the strong congruence space of the projective line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    /// The trivial congruence; dense in the whole space.
    Generic,
    /// `[0] = ⟨T ∼ 0⟩` in the chart around zero.
    Zero,
    /// `[∞] = ⟨0 ∼ T⁻¹⟩` in the chart around infinity.
    Infinity,
    /// `[n, λ] = ⟨T^n ∼ λ⟩`.
    Pt { n: u64, lambda: Root },
}

impl ProjPoint {
    pub fn pt(n: u64, lambda: Root) -> Self {
        ProjPoint::Pt { n, lambda }
    }

    /// The classical label `[n]` over `F_1` (with `[0]` the zero point).
    pub fn f1_label(n: u64) -> Self {
        if n == 0 {
            ProjPoint::Zero
        } else {
            ProjPoint::Pt {
                n,
                lambda: Root::one(),
            }
        }
    }

    /// The geometric point `[ζ]` of the line over the full cyclotomic
    /// monoid (`[0]` when the root is zero).
    pub fn geometric(zeta: Root) -> Self {
        if zeta.is_zero() {
            ProjPoint::Zero
        } else {
            ProjPoint::Pt { n: 1, lambda: zeta }
        }
    }

    pub fn is_special(&self) -> bool {
        matches!(
            self,
            ProjPoint::Generic | ProjPoint::Zero | ProjPoint::Infinity
        )
    }
}

impl fmt::Display for ProjPoint {
    /// `generic`, `[0]`, `[inf]`, `[n]` (when `λ = 1`) or `[n,k/m]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Generic => write!(f, "generic"),
            ProjPoint::Zero => write!(f, "[0]"),
            ProjPoint::Infinity => write!(f, "[inf]"),
            ProjPoint::Pt { n, lambda } => {
                if lambda.is_one() {
                    write!(f, "[{n}]")
                } else {
                    write!(f, "[{n},{lambda}]")
                }
            }
        }
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "generic" => return Ok(ProjPoint::Generic),
            "[0]" => return Ok(ProjPoint::Zero),
            "[inf]" | "[infty]" | "[oo]" => return Ok(ProjPoint::Infinity),
            _ => {}
        }
        let inner = s
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::invalid(format!("bad point `{s}`")))?;
        match inner.split_once(',') {
            None => {
                let n: u64 = inner
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad point index `{inner}`")))?;
                if n == 0 {
                    return Ok(ProjPoint::Zero);
                }
                Ok(ProjPoint::Pt {
                    n,
                    lambda: Root::one(),
                })
            }
            Some((n, lambda)) => {
                let n: u64 = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad point index `{n}`")))?;
                if n == 0 {
                    return Err(Error::invalid("point index must be positive"));
                }
                let lambda: Root = lambda.trim().parse()?;
                if lambda.is_zero() {
                    return Err(Error::invalid("point coefficient must be a unit"));
                }
                Ok(ProjPoint::Pt { n, lambda })
            }
        }
    }
}

/// An enumeration window: coefficient monoid plus an explicit bound on the
/// congruence exponent. No implicit truncation anywhere.
#[derive(Debug, Clone, Copy)]
pub struct PointUniverse {
    pub coefficients: CycloMonoid,
    pub bound: u64,
}

impl PointUniverse {
    pub fn new(coefficients: CycloMonoid, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::invalid("enumeration bound must be at least 1"));
        }
        Ok(PointUniverse {
            coefficients,
            bound,
        })
    }
}

fn require_unit_in(monoid: &CycloMonoid, lambda: &Root) -> Result<()> {
    if lambda.is_zero() {
        return Err(Error::invalid("coefficient must be a unit, not zero"));
    }
    if !monoid.contains(lambda) {
        return Err(Error::invalid(format!("{lambda} does not lie in {monoid}")));
    }
    Ok(())
}

fn gcd2(a: u64, b: u64) -> u64 {
    crate::factor::gcd_u128(a as u128, b as u128) as u64
}

/// Whether `⟨T^n ∼ λ⟩` is a point: the gcd fast path.
pub fn is_valid_point(monoid: &CycloMonoid, n: u64, lambda: &Root) -> Result<bool> {
    require_unit_in(monoid, lambda)?;
    if n == 0 {
        return Err(Error::invalid("point index must be positive"));
    }
    match monoid.level() {
        None => Ok(n == 1),
        Some(m) => {
            let a = monoid.log_generator(lambda)?;
            Ok(gcd2(gcd2(m, n), a) == 1)
        }
    }
}

/// Whether `⟨T^n ∼ λ⟩` is a point: the normative route. Builds the finite
/// quotient `{μ·T^j} ∪ {0}`, requires it to be a domain, and checks that
/// the coefficients embed into it.
pub fn is_valid_point_via_quotient(monoid: &CycloMonoid, n: u64, lambda: &Root) -> Result<bool> {
    require_unit_in(monoid, lambda)?;
    if n == 0 {
        return Err(Error::invalid("point index must be positive"));
    }
    if monoid.level().is_none() {
        // No finite quotient exists; the normal form forces n = 1 directly.
        return Ok(n == 1);
    }
    let q = LaurentMonoid::laurent(*monoid).cyclic_quotient(n, lambda)?;
    let mut images: Vec<usize> = monoid
        .unit_roots()?
        .iter()
        .map(|z| q.constant(z))
        .collect::<Result<_>>()?;
    images.push(q.monoid().zero());
    images.sort_unstable();
    let distinct = images.windows(2).all(|w| w[0] != w[1]);
    Ok(distinct && q.monoid().is_domain())
}

/// The stricter no-root condition: no divisor `d > 1` of `n` admits
/// `θ ∈ F` with `θ^d = λ`. Kept for comparison only — it rejects points
/// such as `[n, 1]` for every `n > 1` (take `θ = 1`), so it is not the
/// classification criterion; [`is_valid_point`] is.
pub fn strict_root_condition(monoid: &CycloMonoid, n: u64, lambda: &Root) -> Result<bool> {
    require_unit_in(monoid, lambda)?;
    let m = monoid
        .level()
        .ok_or_else(|| Error::Unsupported("comparison predicate needs a finite level".into()))?;
    let a = monoid.log_generator(lambda)?;
    for d in 2..=n {
        if n % d != 0 {
            continue;
        }
        // θ^d = λ solvable in μ_m iff gcd(d, m) divides a.
        if a % gcd2(d, m) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All points with exponent up to the bound: the generic point, `[0]`,
/// `[∞]`, then valid `[n, λ]` sorted by `n` and canonical coefficient
/// order.
pub fn enumerate_points(universe: &PointUniverse) -> Result<Vec<ProjPoint>> {
    let monoid = &universe.coefficients;
    if monoid.level().is_none() {
        return Err(Error::invalid(
            "cannot enumerate over the infinite level; bound the root order instead",
        ));
    }
    let mut out = vec![ProjPoint::Generic, ProjPoint::Zero, ProjPoint::Infinity];
    let roots = monoid.unit_roots()?;
    for n in 1..=universe.bound {
        for lambda in &roots {
            if is_valid_point(monoid, n, lambda)? {
                out.push(ProjPoint::Pt {
                    n,
                    lambda: lambda.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn check_point_over(monoid: &CycloMonoid, p: &ProjPoint) -> Result<()> {
    if let ProjPoint::Pt { n, lambda } = p {
        if !is_valid_point(monoid, *n, lambda)? {
            return Err(Error::invalid(format!(
                "{p} is not a point of the line over {monoid}"
            )));
        }
    }
    Ok(())
}

/// The level-change map from the line over the full cyclotomic monoid to
/// the line over `F`: fixes the special points and sends `[ζ]` to
/// `[w, ζ^w]` with `w` the relative order of `ζ` over `F`.
pub fn phi_map(monoid: &CycloMonoid, p: &ProjPoint) -> Result<ProjPoint> {
    match p {
        ProjPoint::Generic | ProjPoint::Zero | ProjPoint::Infinity => Ok(p.clone()),
        ProjPoint::Pt { n, lambda } => {
            if *n != 1 {
                return Err(Error::invalid(
                    "source point must lie over the full cyclotomic monoid (n = 1)",
                ));
            }
            let w = ord_rel(lambda, monoid)?
                .to_u64()
                .ok_or_else(|| Error::MagnitudeLimit("relative order exceeds u64".into()))?;
            let image = ProjPoint::Pt {
                n: w,
                lambda: lambda.pow(w),
            };
            debug_assert!(check_point_over(monoid, &image).is_ok());
            Ok(image)
        }
    }
}

/// The map down to the line over `F_1`: `[m', λ] ↦ [m' · ord(λ)]`,
/// special points fixed.
pub fn psi_map(monoid: &CycloMonoid, p: &ProjPoint) -> Result<ProjPoint> {
    check_point_over(monoid, p)?;
    match p {
        ProjPoint::Generic | ProjPoint::Zero | ProjPoint::Infinity => Ok(p.clone()),
        ProjPoint::Pt { n, lambda } => {
            let h = lambda.order_u64()?;
            let target = n
                .checked_mul(h)
                .ok_or_else(|| Error::MagnitudeLimit("image index exceeds u64".into()))?;
            Ok(ProjPoint::Pt {
                n: target,
                lambda: Root::one(),
            })
        }
    }
}

/// The exact fiber of [`phi_map`] over a point of the line over `F`:
/// `{[ζ] | ord_F(ζ) = n, ζ^n = λ}`, canonically ordered.
pub fn fiber_phi(monoid: &CycloMonoid, target: &ProjPoint) -> Result<Vec<ProjPoint>> {
    check_point_over(monoid, target)?;
    match target {
        ProjPoint::Generic | ProjPoint::Zero | ProjPoint::Infinity => Ok(vec![target.clone()]),
        ProjPoint::Pt { n, lambda } => {
            let (k, h) = crate::monoid::root_to_u64_pair(lambda)?;
            let mut out = Vec::new();
            for j in 0..*n {
                // The n-th roots of λ = k/h are (k + j·h)/(n·h).
                let num = k as u128 + j as u128 * h as u128;
                let den = *n as u128 * h as u128;
                let zeta = Root::new(num.into(), den.into())?;
                debug_assert_eq!(zeta.pow(*n), *lambda);
                if ord_rel(&zeta, monoid)? == (*n).into() {
                    out.push(ProjPoint::Pt { n: 1, lambda: zeta });
                }
            }
            out.sort();
            Ok(out)
        }
    }
}

/// Specialization: `y` lies in the closure of `{x}`.
///
/// With opens `U_{a,b} = {c | (a,b) ∉ c}` this is containment of
/// congruences, `c_x ⊆ c_y`; on classified points the symbolic rule is
/// `⟨T^n ∼ λ⟩ ⊆ ⟨T^N ∼ Λ⟩  iff  N | n and Λ^(n/N) = λ`.
/// The generic point is dense; `[0]` and `[∞]` are closed.
pub fn specializes(monoid: &CycloMonoid, x: &ProjPoint, y: &ProjPoint) -> Result<bool> {
    check_point_over(monoid, x)?;
    check_point_over(monoid, y)?;
    Ok(match (x, y) {
        (ProjPoint::Generic, _) => true,
        (_, ProjPoint::Generic) => false,
        (ProjPoint::Zero, ProjPoint::Zero) => true,
        (ProjPoint::Infinity, ProjPoint::Infinity) => true,
        (ProjPoint::Zero, _) | (_, ProjPoint::Zero) => false,
        (ProjPoint::Infinity, _) | (_, ProjPoint::Infinity) => false,
        (
            ProjPoint::Pt { n, lambda },
            ProjPoint::Pt {
                n: n_coarse,
                lambda: lambda_coarse,
            },
        ) => n % n_coarse == 0 && lambda_coarse.pow(n / n_coarse) == *lambda,
    })
}

/// Specialization checked inside a finite quotient instead of symbolically:
/// `c_x ⊆ c_y` iff the generating pair of `c_x` collapses in the quotient
/// by `c_y`.
pub fn specializes_via_quotient(
    monoid: &CycloMonoid,
    x: &ProjPoint,
    y: &ProjPoint,
) -> Result<bool> {
    check_point_over(monoid, x)?;
    check_point_over(monoid, y)?;
    match (x, y) {
        (
            ProjPoint::Pt { n, lambda },
            ProjPoint::Pt {
                n: n_coarse,
                lambda: lambda_coarse,
            },
        ) => {
            let q = LaurentMonoid::laurent(*monoid).cyclic_quotient(*n_coarse, lambda_coarse)?;
            Ok(q.t_power(*n as i64) == q.constant(lambda)?)
        }
        _ => specializes(monoid, x, y),
    }
}

/// Degree of a point of the line over `F_1`: `φ(n)` for `[n]`, `1` for
/// `[0]` and `[∞]`, as a constant ledger.
pub fn point_degree(p: &ProjPoint) -> Result<DegreeLedger> {
    match p {
        ProjPoint::Generic => Err(Error::invalid("the generic point has no degree")),
        ProjPoint::Zero | ProjPoint::Infinity => Ok(DegreeLedger::arch_unit()),
        ProjPoint::Pt { n, lambda } => {
            if !lambda.is_one() {
                return Err(Error::invalid(
                    "degrees are defined for points over F1 (unit coefficient 1)",
                ));
            }
            let phi = euler_phi(*n)?;
            Ok(DegreeLedger::arch_unit().scale(Coeff::from_integer(phi as i64)))
        }
    }
}

/// The residue pointed group at a non-generic point, as a finite monoid:
/// the coefficients themselves at `[0]` and `[∞]`, and the cyclic quotient
/// (a copy of `μ_{m·n} ∪ {0}` when the point is valid) at `[n, λ]`.
pub fn residue_monoid(monoid: &CycloMonoid, p: &ProjPoint) -> Result<FiniteMonoid> {
    let level = monoid.level().ok_or_else(|| {
        Error::Unsupported("residue monoids are finite only at finite level".into())
    })?;
    check_point_over(monoid, p)?;
    match p {
        ProjPoint::Generic => Err(Error::Unsupported(
            "the residue monoid at the generic point is infinite".into(),
        )),
        ProjPoint::Zero | ProjPoint::Infinity => FiniteMonoid::cyclic_with_zero(level),
        ProjPoint::Pt { n, lambda } => Ok(LaurentMonoid::laurent(*monoid)
            .cyclic_quotient(*n, lambda)?
            .into_monoid()),
    }
}

/// Location of a point inside the underlying projective line (the image of
/// the null-ideal projection): `[0]` sits at the closed point of the zero
/// chart, `[∞]` at the closed point of the infinity chart, everything else
/// over the generic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum P1Point {
    GenericOfP1,
    ZeroIdealPoint,
    InfinityIdealPoint,
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::GenericOfP1 => write!(f, "generic-of-P1"),
            P1Point::ZeroIdealPoint => write!(f, "zero-ideal-point"),
            P1Point::InfinityIdealPoint => write!(f, "infinity-ideal-point"),
        }
    }
}

pub fn null_ideal_point(p: &ProjPoint) -> P1Point {
    match p {
        ProjPoint::Zero => P1Point::ZeroIdealPoint,
        ProjPoint::Infinity => P1Point::InfinityIdealPoint,
        ProjPoint::Generic | ProjPoint::Pt { .. } => P1Point::GenericOfP1,
    }
}

/// One orbit of the finite-level Galois action with its image point.
#[derive(Debug, Clone)]
pub struct OrbitEntry {
    /// Canonically sorted orbit of points over the full cyclotomic monoid.
    pub orbit: Vec<ProjPoint>,
    /// Image under the level-change map to the fixed submonoid's line.
    pub image: ProjPoint,
}

/// Outcome of quotienting the level-`N` slice of the line by a subgroup of
/// units and comparing with the line over the fixed submonoid.
#[derive(Debug, Clone)]
pub struct GaloisQuotientReport {
    pub modulus: u64,
    pub fixed: CycloMonoid,
    pub entries: Vec<OrbitEntry>,
    /// Image points hit by more than one orbit (empty iff injective).
    pub collisions: Vec<ProjPoint>,
    /// Reachable points of the target line that no orbit hits (empty iff
    /// surjective onto the reachable set).
    pub missed: Vec<ProjPoint>,
}

impl GaloisQuotientReport {
    pub fn is_injective(&self) -> bool {
        self.collisions.is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        self.missed.is_empty()
    }

    pub fn is_bijection(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Computes the orbit space of the Galois action on `{[ζ] | ord(ζ) | N}`
/// together with the special points, maps every orbit through the
/// level-change map to the fixed submonoid's line, and audits whether the
/// induced map is a bijection onto the points reachable at this level.
/// `audit_bound` caps the exponent of target points examined for the
/// surjectivity audit (pass the modulus for the full picture).
pub fn galois_quotient(gamma: &GaloisLevel, audit_bound: u64) -> Result<GaloisQuotientReport> {
    let modulus = gamma.modulus();
    let fixed = gamma.fixed_submonoid();

    // Universe: one point per root of order dividing N, plus specials.
    let mut roots: Vec<Root> = Vec::new();
    for d in 1..=modulus {
        if modulus % d != 0 {
            continue;
        }
        for k in 0..d {
            if (k == 0 && d == 1) || crate::factor::gcd_u128(k as u128, d as u128) == 1 {
                roots.push(Root::from_u64(k, d)?);
            }
        }
    }
    roots.sort();

    let mut entries: Vec<OrbitEntry> = Vec::new();
    for special in [ProjPoint::Generic, ProjPoint::Zero, ProjPoint::Infinity] {
        entries.push(OrbitEntry {
            orbit: vec![special.clone()],
            image: phi_map(&fixed, &special)?,
        });
    }
    let mut consumed: Vec<Root> = Vec::new();
    for z in &roots {
        if consumed.binary_search(z).is_ok() {
            continue;
        }
        let orbit_roots = gamma.orbit(z)?;
        for w in &orbit_roots {
            if let Err(pos) = consumed.binary_search(w) {
                consumed.insert(pos, w.clone());
            }
        }
        let orbit: Vec<ProjPoint> = orbit_roots
            .iter()
            .cloned()
            .map(|zeta| ProjPoint::Pt { n: 1, lambda: zeta })
            .collect();
        let image = phi_map(&fixed, &orbit[0])?;
        // The image must be constant on the orbit; check rather than trust.
        for member in &orbit[1..] {
            let other = phi_map(&fixed, member)?;
            if other != image {
                return Err(Error::Invariant(format!(
                    "orbit of {z} maps to both {image} and {other}"
                )));
            }
        }
        entries.push(OrbitEntry { orbit, image });
    }

    // Injectivity audit.
    let mut images: Vec<ProjPoint> = entries.iter().map(|e| e.image.clone()).collect();
    images.sort();
    let mut collisions: Vec<ProjPoint> = Vec::new();
    for pair in images.windows(2) {
        if pair[0] == pair[1] && collisions.last() != Some(&pair[0]) {
            collisions.push(pair[0].clone());
        }
    }

    // Surjectivity audit over the reachable points of the target line:
    // a target point is reachable when its fiber meets the universe.
    let mut missed: Vec<ProjPoint> = Vec::new();
    let universe = PointUniverse::new(fixed, audit_bound.max(1))?;
    for target in enumerate_points(&universe)? {
        let reachable = fiber_phi(&fixed, &target)?.iter().any(|q| match q {
            ProjPoint::Pt { lambda, .. } => lambda
                .order_u64()
                .map(|o| modulus % o == 0)
                .unwrap_or(false),
            _ => true,
        });
        if reachable && images.binary_search(&target).is_err() {
            missed.push(target);
        }
    }

    Ok(GaloisQuotientReport {
        modulus,
        fixed,
        entries,
        collisions,
        missed,
    })
}
