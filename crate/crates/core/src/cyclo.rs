//! Exact arithmetic in the group of roots of unity with zero adjoined.
//!
//! A root of unity `e^{2πi k/n}` is stored additively as the reduced
//! fraction `k/n` in Q/Z, so equality, orders and Galois actions are exact —
//! no complex floating point anywhere. [`CycloMonoid`] names the pointed
//! submonoids `μ_m ∪ {0}` (finite level `m`) and the full group
//! (infinite level); [`GaloisLevel`] is a subgroup of the units mod `N`
//! acting on roots of order dividing `N` by exponentiation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::factor::gcd_u128;

/// A root of unity, or the absorbing zero.
///
/// The nonzero variant keeps `0 <= num < den` with `gcd(num, den) = 1`
/// (and `den = 1` exactly for the identity `1 = e^0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Root {
    Zero,
    Unity { num: BigUint, den: BigUint },
}

impl Root {
    pub fn zero() -> Self {
        Root::Zero
    }

    /// The identity `1`, stored as `0/1`.
    pub fn one() -> Self {
        Root::Unity {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    /// `e^{2πi num/den}`, reduced. `den = 0` is rejected.
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::invalid("root denominator must be positive"));
        }
        let num = num % &den;
        let g = num.gcd(&den);
        Ok(Root::Unity {
            num: &num / &g,
            den: &den / &g,
        })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Self::new(BigUint::from(num), BigUint::from(den))
    }

    /// `-1`, the primitive square root of unity.
    pub fn minus_one() -> Self {
        Root::from_u64(1, 2).expect("1/2 is a valid fraction")
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Root::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Root::Unity { num, .. } if num.is_zero())
    }

    /// Multiplicative order; equals the reduced denominator. Errors on zero.
    pub fn order(&self) -> Result<BigUint> {
        match self {
            Root::Zero => Err(Error::invalid("the zero element has no multiplicative order")),
            Root::Unity { den, .. } => Ok(den.clone()),
        }
    }

    pub fn order_u64(&self) -> Result<u64> {
        self.order()?
            .to_u64()
            .ok_or_else(|| Error::MagnitudeLimit("root order exceeds u64".into()))
    }

    /// Product of two roots: addition of fractions mod 1.
    pub fn mul(&self, other: &Root) -> Root {
        match (self, other) {
            (Root::Zero, _) | (_, Root::Zero) => Root::Zero,
            (
                Root::Unity { num: k1, den: n1 },
                Root::Unity { num: k2, den: n2 },
            ) => {
                let num = k1 * n2 + k2 * n1;
                let den = n1 * n2;
                Root::new(num, den).expect("denominator positive")
            }
        }
    }

    /// `self^e` for a non-negative exponent. `0^0 = 1` (empty product).
    pub fn pow(&self, e: u64) -> Root {
        match self {
            Root::Zero => {
                if e == 0 {
                    Root::one()
                } else {
                    Root::Zero
                }
            }
            Root::Unity { num, den } => {
                Root::new(num * BigUint::from(e), den.clone()).expect("denominator positive")
            }
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<Root> {
        match self {
            Root::Zero => Err(Error::invalid("zero has no inverse")),
            Root::Unity { num, den } => {
                if num.is_zero() {
                    Ok(self.clone())
                } else {
                    Root::new(den - num, den.clone())
                }
            }
        }
    }
}

/// Canonical ordering: zero first, then by (denominator, numerator). Used
/// for deterministic orbit and fiber output.
impl Ord for Root {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Root::Zero, Root::Zero) => Ordering::Equal,
            (Root::Zero, _) => Ordering::Less,
            (_, Root::Zero) => Ordering::Greater,
            (
                Root::Unity { num: k1, den: n1 },
                Root::Unity { num: k2, den: n2 },
            ) => n1.cmp(n2).then_with(|| k1.cmp(k2)),
        }
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Zero => write!(f, "0"),
            Root::Unity { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Accepts the canonical `k/n` form plus the aliases `0`, `1` and `-1`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Root::Zero),
            "1" => Ok(Root::one()),
            "-1" => Ok(Root::minus_one()),
            s => {
                let (k, n) = s
                    .split_once('/')
                    .ok_or_else(|| Error::invalid(format!("bad root `{s}`, expected k/n")))?;
                let k: BigUint = k
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad root numerator `{k}`")))?;
                let n: BigUint = n
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad root denominator `{n}`")))?;
                Root::new(k, n)
            }
        }
    }
}

/// A pointed submonoid of the roots of unity: `μ_m ∪ {0}` at finite level
/// `m`, or the whole group with zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloMonoid {
    Finite { level: u64 },
    Infinite,
}

impl CycloMonoid {
    pub fn finite(level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::invalid("level must be positive"));
        }
        Ok(CycloMonoid::Finite { level })
    }

    /// `F_1 = {0, 1}`.
    pub fn f1() -> Self {
        CycloMonoid::Finite { level: 1 }
    }

    /// `F_{1^2} = {0, 1, -1}`.
    pub fn f1_squared() -> Self {
        CycloMonoid::Finite { level: 2 }
    }

    pub fn infinite() -> Self {
        CycloMonoid::Infinite
    }

    pub fn level(&self) -> Option<u64> {
        match self {
            CycloMonoid::Finite { level } => Some(*level),
            CycloMonoid::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CycloMonoid::Finite { .. })
    }

    /// Membership: `k/n ∈ μ_m ∪ {0}` iff `n | m`.
    pub fn contains(&self, z: &Root) -> bool {
        match (self, z) {
            (_, Root::Zero) => true,
            (CycloMonoid::Infinite, _) => true,
            (CycloMonoid::Finite { level }, Root::Unity { den, .. }) => {
                (BigUint::from(*level) % den).is_zero()
            }
        }
    }

    /// The canonical generator `1/m` of the unit group at finite level.
    pub fn generator(&self) -> Result<Root> {
        let m = self
            .level()
            .ok_or_else(|| Error::Unsupported("no canonical generator at infinite level".into()))?;
        Root::from_u64(1 % m.max(1), m)
    }

    /// All `m` unit roots at finite level, in canonical order.
    pub fn unit_roots(&self) -> Result<Vec<Root>> {
        let m = self
            .level()
            .ok_or_else(|| Error::Unsupported("cannot enumerate infinite level".into()))?;
        let mut out: Vec<Root> = (0..m)
            .map(|a| Root::from_u64(a, m).expect("level positive"))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Exponent `a` with `λ = g^a` for the canonical generator `g = 1/m`.
    pub fn log_generator(&self, lambda: &Root) -> Result<u64> {
        let m = self
            .level()
            .ok_or_else(|| Error::Unsupported("no discrete log at infinite level".into()))?;
        match lambda {
            Root::Zero => Err(Error::invalid("zero is not a unit")),
            Root::Unity { num, den } => {
                let den = den
                    .to_u64()
                    .ok_or_else(|| Error::invalid("root order exceeds u64"))?;
                if m % den != 0 {
                    return Err(Error::invalid(format!(
                        "{lambda} does not lie in level {m}"
                    )));
                }
                let num = num.to_u64().expect("num < den <= u64::MAX");
                Ok(num * (m / den))
            }
        }
    }
}

impl fmt::Display for CycloMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycloMonoid::Finite { level: 1 } => write!(f, "F1"),
            CycloMonoid::Finite { level } => write!(f, "F1^{level}"),
            CycloMonoid::Infinite => write!(f, "F1^inf"),
        }
    }
}

/// Relative order `min{ w >= 1 | z^w ∈ F }`.
///
/// Closed form: with `z` of order `n` and `F` of level `m`, the answer is
/// `n / gcd(n, m)` (reducedness of `z` makes `gcd(n, m·k) = gcd(n, m)`).
/// The direct-search equivalent is kept as a test oracle.
pub fn ord_rel(z: &Root, monoid: &CycloMonoid) -> Result<BigUint> {
    if z.is_zero() {
        return Err(Error::invalid("relative order of zero is undefined"));
    }
    match monoid {
        CycloMonoid::Infinite => Ok(BigUint::one()),
        CycloMonoid::Finite { level } => {
            let n = z.order()?;
            let g = n.gcd(&BigUint::from(*level));
            Ok(n / g)
        }
    }
}

/// A subgroup of the multiplicative units mod `N`, acting on the roots of
/// order dividing `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisLevel {
    modulus: u64,
    members: Vec<u64>,
}

impl GaloisLevel {
    /// Validates closure under multiplication, presence of 1 and coprimality.
    pub fn new(modulus: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if modulus == 1 {
            // The unit group mod 1 is trivial; its identity is represented
            // as the residue 1 so the action stays an exponentiation.
            return Ok(GaloisLevel {
                modulus,
                members: vec![1],
            });
        }
        let mut set: Vec<u64> = members.into_iter().map(|g| g % modulus).collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::invalid("a subgroup needs at least the identity"));
        }
        for &g in &set {
            if gcd_u128(g as u128, modulus as u128) != 1 {
                return Err(Error::invalid(format!(
                    "{g} is not a unit mod {modulus}"
                )));
            }
        }
        if !set.contains(&1) {
            return Err(Error::invalid("subgroup must contain 1"));
        }
        for &a in &set {
            for &b in &set {
                let prod = mul_u64_mod(a, b, modulus);
                if set.binary_search(&prod).is_err() {
                    return Err(Error::invalid(format!(
                        "not closed under multiplication: {a}*{b} = {prod} mod {modulus} missing"
                    )));
                }
            }
        }
        Ok(GaloisLevel {
            modulus,
            members: set,
        })
    }

    /// The full unit group mod `N`.
    pub fn full(modulus: u64) -> Result<Self> {
        if modulus <= 1 {
            return GaloisLevel::new(modulus, [1]);
        }
        GaloisLevel::new(
            modulus,
            (1..modulus).filter(|&g| gcd_u128(g as u128, modulus as u128) == 1),
        )
    }

    /// The trivial subgroup `{1}`.
    pub fn trivial(modulus: u64) -> Result<Self> {
        GaloisLevel::new(modulus, [1])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// The cyclotomic action: `g · z = z^g`, for any unit residue `g` and
    /// any root of order dividing the modulus. Zero is fixed.
    pub fn act(&self, g: u64, z: &Root) -> Result<Root> {
        if self.modulus > 1 && gcd_u128(g as u128, self.modulus as u128) != 1 {
            return Err(Error::invalid(format!(
                "{g} is not a unit mod {}",
                self.modulus
            )));
        }
        if let Root::Unity { den, .. } = z {
            if !(BigUint::from(self.modulus) % den).is_zero() {
                return Err(Error::invalid(format!(
                    "order of {z} does not divide the level modulus {}",
                    self.modulus
                )));
            }
        }
        Ok(z.pow(g))
    }

    /// The orbit `{ g · z | g ∈ Γ }`, canonically sorted.
    pub fn orbit(&self, z: &Root) -> Result<Vec<Root>> {
        let mut out = Vec::with_capacity(self.members.len());
        for &g in &self.members {
            out.push(self.act(g, z)?);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// The pointed submonoid of roots (of order dividing the modulus) fixed
    /// by every member.
    ///
    /// A primitive n-th root `k/n` is fixed by `g` iff `n | k(g-1)`, and
    /// since `k` is invertible mod `n` this is `n | g - 1`. The fixed set is
    /// therefore `μ_L ∪ {0}` with `L = gcd(N, g_1 - 1, g_2 - 1, ...)`; the
    /// returned level is that `L` (the lcm of the orders of fixed roots).
    pub fn fixed_submonoid(&self) -> CycloMonoid {
        let mut level = self.modulus;
        for &g in &self.members {
            level = gcd_u128(level as u128, (g - 1) as u128) as u64;
            if level == 1 {
                break;
            }
        }
        CycloMonoid::Finite {
            level: level.max(1),
        }
    }

    /// Every subgroup of the unit group mod `N`, sorted by (size, members).
    pub fn all_subgroups(modulus: u64) -> Result<Vec<GaloisLevel>> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if modulus == 1 {
            return Ok(vec![GaloisLevel::trivial(1)?]);
        }
        let units: Vec<u64> = (1..modulus)
            .filter(|&g| gcd_u128(g as u128, modulus as u128) == 1)
            .collect();
        let close = |gens: &[u64]| -> Vec<u64> {
            let mut set: Vec<u64> = vec![1];
            let mut frontier: Vec<u64> = vec![1];
            while let Some(x) = frontier.pop() {
                for &g in gens {
                    let y = mul_u64_mod(x, g, modulus);
                    if !set.contains(&y) {
                        set.push(y);
                        frontier.push(y);
                    }
                }
            }
            set.sort_unstable();
            set
        };
        let mut seen: Vec<Vec<u64>> = vec![vec![1]];
        let mut frontier: Vec<Vec<u64>> = vec![vec![1]];
        while let Some(h) = frontier.pop() {
            for &g in &units {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let bigger = close(&gens);
                if !seen.contains(&bigger) {
                    seen.push(bigger.clone());
                    frontier.push(bigger);
                }
            }
        }
        seen.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        seen.into_iter()
            .map(|members| GaloisLevel::new(modulus, members))
            .collect()
    }
}

fn mul_u64_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(k: u64, n: u64) -> Root {
        Root::from_u64(k, n).unwrap()
    }

    #[test]
    fn roots_reduce_on_construction() {
        assert_eq!(r(2, 6), r(1, 3));
        assert_eq!(r(6, 6), Root::one());
        assert_eq!(r(7, 6), r(1, 6));
    }

    #[test]
    fn orders() {
        assert_eq!(Root::one().order_u64().unwrap(), 1);
        assert_eq!(r(1, 6).order_u64().unwrap(), 6);
        assert_eq!(r(5, 6).order_u64().unwrap(), 6);
        assert!(Root::Zero.order().is_err());
    }

    #[test]
    fn multiplication_is_fraction_addition() {
        assert_eq!(r(1, 6).mul(&r(1, 6)), r(1, 3));
        assert_eq!(r(1, 2).mul(&r(1, 2)), Root::one());
        assert_eq!(r(1, 3).mul(&Root::Zero), Root::Zero);
    }

    #[test]
    fn inverse_and_pow() {
        assert_eq!(r(1, 5).inverse().unwrap(), r(4, 5));
        assert_eq!(r(1, 5).mul(&r(1, 5).inverse().unwrap()), Root::one());
        assert_eq!(r(1, 6).pow(3), r(1, 2));
        assert_eq!(Root::Zero.pow(5), Root::Zero);
        assert_eq!(Root::Zero.pow(0), Root::one());
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(r(5, 6).to_string(), "5/6");
        assert_eq!(Root::Zero.to_string(), "0");
        assert_eq!("5/6".parse::<Root>().unwrap(), r(5, 6));
        assert_eq!("-1".parse::<Root>().unwrap(), r(1, 2));
        assert_eq!("1".parse::<Root>().unwrap(), Root::one());
        assert_eq!("0".parse::<Root>().unwrap(), Root::Zero);
    }

    #[test]
    fn membership_by_divisibility() {
        let f2 = CycloMonoid::f1_squared();
        assert!(f2.contains(&Root::one()));
        assert!(f2.contains(&Root::minus_one()));
        assert!(!f2.contains(&r(1, 3)));
        assert!(f2.contains(&Root::Zero));
        assert!(CycloMonoid::infinite().contains(&r(17, 97)));
    }

    #[test]
    fn ord_rel_examples() {
        // Already inside: 1.
        assert_eq!(ord_rel(&Root::minus_one(), &CycloMonoid::f1_squared()).unwrap(), BigUint::one());
        // 1/6 relative to F1: 6.
        assert_eq!(ord_rel(&r(1, 6), &CycloMonoid::f1()).unwrap(), BigUint::from(6u8));
        // 1/6 relative to F1^2: 3, since 3 * (1/6) = 1/2.
        assert_eq!(
            ord_rel(&r(1, 6), &CycloMonoid::f1_squared()).unwrap(),
            BigUint::from(3u8)
        );
        assert!(ord_rel(&Root::Zero, &CycloMonoid::f1()).is_err());
    }

    #[test]
    fn galois_action_examples() {
        let g6 = GaloisLevel::full(6).unwrap();
        assert_eq!(g6.act(1, &r(1, 6)).unwrap(), r(1, 6));
        assert_eq!(g6.act(5, &r(1, 6)).unwrap(), r(5, 6));
        assert_eq!(g6.act(5, &Root::Zero).unwrap(), Root::Zero);
        // order incompatible with modulus
        assert!(g6.act(5, &r(1, 4)).is_err());
        // non-unit residue
        assert!(g6.act(2, &r(1, 6)).is_err());
    }

    #[test]
    fn orbits() {
        let triv = GaloisLevel::trivial(5).unwrap();
        assert_eq!(triv.orbit(&r(2, 5)).unwrap(), vec![r(2, 5)]);
        let full = GaloisLevel::full(5).unwrap();
        assert_eq!(
            full.orbit(&r(1, 5)).unwrap(),
            vec![r(1, 5), r(2, 5), r(3, 5), r(4, 5)]
        );
        assert_eq!(full.orbit(&Root::one()).unwrap(), vec![Root::one()]);
    }

    #[test]
    fn fixed_submonoid_examples() {
        // Trivial subgroup fixes everything.
        assert_eq!(
            GaloisLevel::trivial(12).unwrap().fixed_submonoid().level(),
            Some(12)
        );
        // Full unit group at even modulus fixes exactly {1, -1}.
        for n in [4u64, 6, 8, 12, 60] {
            assert_eq!(
                GaloisLevel::full(n).unwrap().fixed_submonoid().level(),
                Some(2),
                "modulus {n}"
            );
        }
        // At odd modulus -1 has no representative among the order-dividing
        // roots, so only 1 remains.
        assert_eq!(GaloisLevel::full(5).unwrap().fixed_submonoid().level(), Some(1));
        // {1, 5} mod 12: exactly the roots of order dividing 4.
        let gamma = GaloisLevel::new(12, [1, 5]).unwrap();
        assert_eq!(gamma.fixed_submonoid().level(), Some(4));
    }

    #[test]
    fn fixed_submonoid_matches_exhaustive_definition() {
        for n in 1..=60u64 {
            for gamma in GaloisLevel::all_subgroups(n).unwrap() {
                let level = gamma.fixed_submonoid().level().unwrap();
                // Exhaustive oracle over all roots of order dividing n.
                for d in 1..=n {
                    if n % d != 0 {
                        continue;
                    }
                    for k in 0..d {
                        if gcd_u128(k as u128, d as u128) != 1 && !(k == 0 && d == 1) {
                            continue;
                        }
                        let z = r(k, d);
                        let fixed = gamma
                            .members()
                            .iter()
                            .all(|&g| gamma.act(g, &z).unwrap() == z);
                        let in_level = level % z.order_u64().unwrap() == 0;
                        assert_eq!(fixed, in_level, "N={n} z={z} level={level}");
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_validation_rejects_junk() {
        assert!(GaloisLevel::new(12, [1, 2]).is_err()); // 2 not a unit
        assert!(GaloisLevel::new(12, [1, 5, 7]).is_err()); // not closed (5*7=35=11)
        assert!(GaloisLevel::new(12, [5]).is_err()); // missing 1
        assert!(GaloisLevel::new(12, [1, 5, 7, 11]).is_ok());
    }

    #[test]
    fn all_subgroups_of_u8() {
        // U(8) = {1,3,5,7} ≅ Z/2 x Z/2 has 5 subgroups.
        let subs = GaloisLevel::all_subgroups(8).unwrap();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs.first().unwrap().members(), &[1]);
        assert_eq!(subs.last().unwrap().members(), &[1, 3, 5, 7]);
    }

    #[test]
    fn canonical_root_ordering() {
        let mut v = vec![r(5, 6), r(1, 2), Root::Zero, r(1, 6), Root::one()];
        v.sort();
        assert_eq!(v, vec![Root::Zero, Root::one(), r(1, 2), r(1, 6), r(5, 6)]);
    }
}
