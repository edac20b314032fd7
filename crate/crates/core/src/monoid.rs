//! Finite pointed monoids, congruences and quotients.
//!
//! Everything symbolic in this crate (point classification, specialization,
//! residue monoids) is validated against brute force computations in this
//! module: build the finite monoid, close the congruence, inspect the
//! quotient. A pointed monoid here is commutative, with an absorbing `0` and
//! a neutral `1`, held as an explicit multiplication table over dense
//! element ids.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::cyclo::{CycloMonoid, Root};
use crate::error::{Error, Result};

/// A finite commutative pointed monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    labels: Vec<String>,
    table: Vec<u32>,
    zero: u32,
    one: u32,
}

impl FiniteMonoid {
    /// Builds a monoid from an explicit table, checking all axioms:
    /// associativity, commutativity, absorbing zero, neutral one. The
    /// associativity check is cubic; intended for small hand-made monoids.
    pub fn from_table(labels: Vec<String>, table: Vec<u32>, zero: u32, one: u32) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::invalid(format!(
                "table has {} entries for {} elements",
                table.len(),
                n
            )));
        }
        if zero as usize >= n || one as usize >= n {
            return Err(Error::invalid("distinguished elements out of range"));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::invalid("duplicate element labels"));
            }
        }
        let m = FiniteMonoid {
            labels,
            table,
            zero,
            one,
        };
        for a in 0..n {
            if m.mul(a, m.zero()) != m.zero() || m.mul(a, m.one()) != a {
                return Err(Error::invalid("zero must absorb and one must be neutral"));
            }
            for b in 0..n {
                if m.mul(a, b) != m.mul(b, a) {
                    return Err(Error::invalid("multiplication must be commutative"));
                }
                for c in 0..n {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(Error::invalid("multiplication must be associative"));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Internal constructor for tables that are associative by construction.
    fn from_parts(labels: Vec<String>, table: Vec<u32>, zero: u32, one: u32) -> Self {
        debug_assert_eq!(table.len(), labels.len() * labels.len());
        FiniteMonoid {
            labels,
            table,
            zero,
            one,
        }
    }

    /// The cyclic group of order `n` with zero adjoined, `μ_n ∪ {0}`.
    /// Element 0 is zero; element `1 + k` is `g^k` for a generator `g`.
    pub fn cyclic_with_zero(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("group order must be positive"));
        }
        let n = usize::try_from(n).map_err(|_| Error::MagnitudeLimit("order too large".into()))?;
        let size = n + 1;
        let mut labels = Vec::with_capacity(size);
        labels.push("0".to_string());
        for k in 0..n {
            labels.push(if k == 0 {
                "1".to_string()
            } else {
                format!("g^{k}")
            });
        }
        let mut table = vec![0u32; size * size];
        for i in 0..size {
            for j in 0..size {
                table[i * size + j] = if i == 0 || j == 0 {
                    0
                } else {
                    1 + (((i - 1) + (j - 1)) % n) as u32
                };
            }
        }
        Ok(FiniteMonoid::from_parts(labels, table, 0, 1))
    }

    /// Direct product of cyclic groups of the given orders, with one zero
    /// adjoined.
    pub fn product_of_cyclics_with_zero(orders: &[u64]) -> Result<Self> {
        if orders.iter().any(|&o| o == 0) {
            return Err(Error::invalid("group orders must be positive"));
        }
        let total: u64 = orders.iter().product();
        let total = usize::try_from(total)
            .map_err(|_| Error::MagnitudeLimit("product order too large".into()))?;
        let size = total + 1;
        let decode = |mut idx: usize| -> Vec<usize> {
            let mut exps = Vec::with_capacity(orders.len());
            for &o in orders {
                exps.push(idx % o as usize);
                idx /= o as usize;
            }
            exps
        };
        let encode = |exps: &[usize]| -> usize {
            let mut idx = 0usize;
            for (&e, &o) in exps.iter().zip(orders).rev() {
                idx = idx * o as usize + e;
            }
            idx
        };
        let mut labels = vec!["0".to_string()];
        for idx in 0..total {
            let exps = decode(idx);
            labels.push(format!(
                "({})",
                exps.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ));
        }
        let mut table = vec![0u32; size * size];
        for i in 0..total {
            for j in 0..total {
                let (ei, ej) = (decode(i), decode(j));
                let sum: Vec<usize> = ei
                    .iter()
                    .zip(&ej)
                    .zip(orders)
                    .map(|((&a, &b), &o)| (a + b) % o as usize)
                    .collect();
                table[(i + 1) * size + (j + 1)] = (encode(&sum) + 1) as u32;
            }
        }
        Ok(FiniteMonoid::from_parts(labels, table, 0, 1))
    }

    /// The chain `{0, 1, T, ..., T^(k-1)}` with `T^i T^j = 0` once the
    /// exponent reaches `k`. The smallest carrier on which `T -> 0` is a
    /// morphism.
    pub fn nilpotent_with_zero(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("chain length must be positive"));
        }
        let k = usize::try_from(k).map_err(|_| Error::MagnitudeLimit("chain too long".into()))?;
        let size = k + 1;
        let mut labels = vec!["0".to_string()];
        for i in 0..k {
            labels.push(if i == 0 {
                "1".to_string()
            } else {
                format!("T^{i}")
            });
        }
        let mut table = vec![0u32; size * size];
        for i in 0..k {
            for j in 0..k {
                let e = i + j;
                table[(i + 1) * size + (j + 1)] = if e < k { (e + 1) as u32 } else { 0 };
            }
        }
        Ok(FiniteMonoid::from_parts(labels, table, 0, 1))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> usize {
        self.zero as usize
    }

    pub fn one(&self) -> usize {
        self.one as usize
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b] as usize
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Invertible elements.
    pub fn units(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&u| (0..self.size()).any(|v| self.mul(u, v) == self.one()))
            .collect()
    }

    /// Multiplicative order of a unit; `None` when no power returns to one.
    pub fn element_order(&self, a: usize) -> Option<u64> {
        let mut acc = a;
        for k in 1..=self.size() as u64 {
            if acc == self.one() {
                return Some(k);
            }
            acc = self.mul(acc, a);
        }
        None
    }

    /// `ab = ac` implies `a = 0` or `b = c`.
    pub fn is_integral(&self) -> bool {
        let n = self.size();
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            if a == self.zero() {
                continue;
            }
            for b in 0..n {
                let p = self.mul(a, b);
                if seen[p] == a {
                    return false;
                }
                seen[p] = a;
            }
            // reset marker per row via the `a` stamp; nothing to clear
        }
        true
    }

    /// Exponent of the unit group: lcm of the orders of all units.
    pub fn unit_group_exponent(&self) -> u64 {
        let mut e: u64 = 1;
        for u in self.units() {
            if let Some(o) = self.element_order(u) {
                e = e.lcm(&o);
            }
        }
        e
    }

    /// Whether this monoid embeds into the multiplicative monoid of a field:
    /// integral, and every element has at most `n` n-th roots.
    ///
    /// The root count only needs checking for `n` up to the exponent of the
    /// unit group: in a finite integral pointed monoid every nonzero element
    /// is invertible, so power maps repeat with that period.
    pub fn is_domain(&self) -> bool {
        if !self.is_integral() {
            return false;
        }
        let size = self.size();
        let exponent = self.unit_group_exponent();
        let mut powers: Vec<usize> = (0..size).collect(); // x^1 after first step
        let mut counts = vec![0u32; size];
        for n in 1..=exponent {
            if n > 1 {
                for (x, p) in powers.iter_mut().enumerate() {
                    *p = self.mul(*p, x);
                }
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &p in &powers {
                counts[p] += 1;
                if counts[p] as u64 > n {
                    return false;
                }
            }
        }
        true
    }
}

/// A multiplicatively stable equivalence relation on a finite monoid,
/// stored as its partition. `reps[i]` is the minimal element id in the
/// class of `i`, which makes representatives canonical and congruence
/// equality structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    reps: Vec<u32>,
}

impl Congruence {
    /// The trivial congruence (identity partition) on `size` elements.
    pub fn trivial(size: usize) -> Self {
        Congruence {
            reps: (0..size as u32).collect(),
        }
    }

    fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.parent.len();
        let mut min_of_root = vec![u32::MAX; n];
        for i in 0..n {
            let r = uf.find(i);
            min_of_root[r] = min_of_root[r].min(i as u32);
        }
        let reps = (0..n).map(|i| min_of_root[uf.find(i)]).collect();
        Congruence { reps }
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.reps[a] == self.reps[b]
    }

    pub fn class_rep(&self, a: usize) -> usize {
        self.reps[a] as usize
    }

    pub fn num_classes(&self) -> usize {
        let mut reps: Vec<u32> = self.reps.clone();
        reps.sort_unstable();
        reps.dedup();
        reps.len()
    }

    /// The classes, each sorted, ordered by their minimal element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut by_rep: Vec<(u32, Vec<usize>)> = Vec::new();
        for (i, &r) in self.reps.iter().enumerate() {
            match by_rep.iter_mut().find(|(rep, _)| *rep == r) {
                Some((_, class)) => class.push(i),
                None => by_rep.push((r, vec![i])),
            }
        }
        by_rep.sort_by_key(|(r, _)| *r);
        by_rep.into_iter().map(|(_, c)| c).collect()
    }

    /// Partition refinement: every class of `self` lies inside a class of
    /// `coarser`. This is containment of congruences as pair sets.
    pub fn is_contained_in(&self, coarser: &Congruence) -> bool {
        self.size() == coarser.size()
            && (0..self.size()).all(|i| coarser.related(i, self.class_rep(i)))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the merge was non-trivial.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Smaller root id wins, keeping representatives deterministic.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Smallest congruence containing the generator pairs: alternate union-find
/// merging with multiplicative saturation until fixpoint. The partition only
/// coarsens, so at most `size` passes run.
pub fn congruence_closure(m: &FiniteMonoid, generators: &[(usize, usize)]) -> Result<Congruence> {
    let n = m.size();
    for &(a, b) in generators {
        if a >= n || b >= n {
            return Err(Error::invalid(format!(
                "generator pair ({a}, {b}) out of range for {n} elements"
            )));
        }
    }
    let mut uf = UnionFind::new(n);
    for &(a, b) in generators {
        uf.union(a, b);
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let r = uf.find(x);
            if r == x {
                continue;
            }
            for c in 0..n {
                changed |= uf.union(m.mul(c, x), m.mul(c, r));
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Congruence::from_union_find(&mut uf))
}

/// The quotient monoid, one element per congruence class. The induced table
/// is verified to be well defined; a conflict means `c` was not actually a
/// congruence on `m`.
pub fn quotient(m: &FiniteMonoid, c: &Congruence) -> Result<FiniteMonoid> {
    Ok(quotient_with_projection(m, c)?.0)
}

/// Quotient plus the projection map from element ids to class ids.
pub fn quotient_with_projection(
    m: &FiniteMonoid,
    c: &Congruence,
) -> Result<(FiniteMonoid, Vec<usize>)> {
    if c.size() != m.size() {
        return Err(Error::invalid(format!(
            "congruence on {} elements applied to a monoid with {}",
            c.size(),
            m.size()
        )));
    }
    let n = m.size();
    let mut reps: Vec<usize> = (0..n).map(|i| c.class_rep(i)).collect();
    reps.sort_unstable();
    reps.dedup();
    let class_index = |rep: usize| reps.binary_search(&rep).expect("rep present");
    let k = reps.len();
    let mut table = vec![0u32; k * k];
    for (i, &ra) in reps.iter().enumerate() {
        for (j, &rb) in reps.iter().enumerate() {
            table[i * k + j] = class_index(c.class_rep(m.mul(ra, rb))) as u32;
        }
    }
    // Well-definedness: the product of classes must not depend on chosen
    // representatives.
    for a in 0..n {
        for b in 0..n {
            let via_elements = class_index(c.class_rep(m.mul(a, b)));
            let via_reps =
                table[class_index(c.class_rep(a)) * k + class_index(c.class_rep(b))] as usize;
            if via_elements != via_reps {
                return Err(Error::Invariant(format!(
                    "relation is not a congruence: product of classes of {} and {} is ambiguous",
                    m.label(a),
                    m.label(b)
                )));
            }
        }
    }
    let labels: Vec<String> = reps.iter().map(|&r| m.label(r).to_string()).collect();
    let zero = class_index(c.class_rep(m.zero())) as u32;
    let one = class_index(c.class_rep(m.one())) as u32;
    let projection: Vec<usize> = (0..n).map(|i| class_index(c.class_rep(i))).collect();
    Ok((FiniteMonoid::from_parts(labels, table, zero, one), projection))
}

/// A morphism of finite pointed monoids, given by the image of each element.
pub struct MonoidHom<'a> {
    pub domain: &'a FiniteMonoid,
    pub codomain: &'a FiniteMonoid,
    image: Vec<usize>,
}

impl<'a> MonoidHom<'a> {
    /// Validates that the map preserves zero, one and all products.
    pub fn new(
        domain: &'a FiniteMonoid,
        codomain: &'a FiniteMonoid,
        image: Vec<usize>,
    ) -> Result<Self> {
        if image.len() != domain.size() {
            return Err(Error::invalid("image list must cover the domain"));
        }
        if image.iter().any(|&y| y >= codomain.size()) {
            return Err(Error::invalid("image element out of range"));
        }
        if image[domain.zero()] != codomain.zero() || image[domain.one()] != codomain.one() {
            return Err(Error::invalid("map must preserve zero and one"));
        }
        for a in 0..domain.size() {
            for b in 0..domain.size() {
                if image[domain.mul(a, b)] != codomain.mul(image[a], image[b]) {
                    return Err(Error::invalid(format!(
                        "map is not multiplicative at ({}, {})",
                        domain.label(a),
                        domain.label(b)
                    )));
                }
            }
        }
        Ok(MonoidHom {
            domain,
            codomain,
            image,
        })
    }

    pub fn apply(&self, a: usize) -> usize {
        self.image[a]
    }

    /// `congker(f)`: the pullback of the trivial congruence, i.e. pairs with
    /// equal image.
    pub fn congruence_kernel(&self) -> Congruence {
        self.pullback(&Congruence::trivial(self.codomain.size()))
            .expect("trivial congruence has matching size")
    }

    /// `{(x, y) | (f(x), f(y)) ∈ d}`.
    pub fn pullback(&self, d: &Congruence) -> Result<Congruence> {
        if d.size() != self.codomain.size() {
            return Err(Error::invalid(
                "congruence size does not match the codomain",
            ));
        }
        let n = self.domain.size();
        let mut uf = UnionFind::new(n);
        // Group domain elements by the class representative of their image.
        let mut first_with_rep: Vec<Option<usize>> = vec![None; self.codomain.size()];
        for x in 0..n {
            let rep = d.class_rep(self.image[x]);
            match first_with_rep[rep] {
                Some(prev) => {
                    uf.union(prev, x);
                }
                None => first_with_rep[rep] = Some(x),
            }
        }
        Ok(Congruence::from_union_find(&mut uf))
    }
}

/// Exponent range of a monomial algebra over a cyclotomic coefficient
/// monoid: polynomial (`T^k`, `k >= 0`) or Laurent (`T^k`, any `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentRange {
    NonNegative,
    AllIntegers,
}

/// The symbolic monoid `F[T]` or `F[T^±]`: nonzero elements are canonical
/// pairs `(λ, k)` with `λ` a unit of `F`. There is no element enumeration;
/// brute-force work happens on finite quotients built on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaurentMonoid {
    pub coefficients: CycloMonoid,
    pub exponents: ExponentRange,
}

impl LaurentMonoid {
    pub fn polynomial(coefficients: CycloMonoid) -> Self {
        LaurentMonoid {
            coefficients,
            exponents: ExponentRange::NonNegative,
        }
    }

    pub fn laurent(coefficients: CycloMonoid) -> Self {
        LaurentMonoid {
            coefficients,
            exponents: ExponentRange::AllIntegers,
        }
    }

    /// Canonical-form product: coefficients multiply, exponents add.
    pub fn mul(&self, x: &(Root, i64), y: &(Root, i64)) -> Result<(Root, i64)> {
        for (lambda, k) in [x, y] {
            if lambda.is_zero() {
                return Err(Error::invalid("canonical forms are nonzero"));
            }
            if !self.coefficients.contains(lambda) {
                return Err(Error::invalid(format!("{lambda} is not a coefficient")));
            }
            if matches!(self.exponents, ExponentRange::NonNegative) && *k < 0 {
                return Err(Error::invalid("negative exponent in a polynomial monoid"));
            }
        }
        Ok((x.0.mul(&y.0), x.1 + y.1))
    }

    /// The finite quotient by `T^n ∼ λ`, with elements `μ · T^j`
    /// (`μ ∈ μ_m`, `0 <= j < n`) plus zero. Since `λ` is a unit the
    /// quotient does not depend on the exponent range.
    pub fn cyclic_quotient(&self, n: u64, lambda: &Root) -> Result<CyclicQuotient> {
        let level = self
            .coefficients
            .level()
            .ok_or_else(|| Error::Unsupported("finite quotients need a finite level".into()))?;
        if n == 0 {
            return Err(Error::invalid("relation exponent must be positive"));
        }
        if lambda.is_zero() || !self.coefficients.contains(lambda) {
            return Err(Error::invalid(format!(
                "{lambda} is not a unit coefficient at level {level}"
            )));
        }
        let twist = self.coefficients.log_generator(lambda)?;
        let m = level as usize;
        let nn = n as usize;
        let size = m
            .checked_mul(nn)
            .and_then(|s| s.checked_add(1))
            .ok_or_else(|| Error::MagnitudeLimit("quotient too large".into()))?;
        let mut labels = Vec::with_capacity(size);
        labels.push("0".to_string());
        for i in 0..m {
            for j in 0..nn {
                let base = if i == 0 {
                    "1".to_string()
                } else {
                    format!("s^{i}")
                };
                labels.push(if j == 0 {
                    base
                } else if i == 0 {
                    format!("T^{j}")
                } else {
                    format!("{base}*T^{j}")
                });
            }
        }
        let id = |i: usize, j: usize| 1 + i * nn + j;
        let mut table = vec![0u32; size * size];
        for i1 in 0..m {
            for j1 in 0..nn {
                for i2 in 0..m {
                    for j2 in 0..nn {
                        let jsum = j1 + j2;
                        let carry = jsum / nn;
                        let coeff = (i1 + i2 + twist as usize * carry) % m;
                        table[id(i1, j1) * size + id(i2, j2)] = id(coeff, jsum % nn) as u32;
                    }
                }
            }
        }
        let monoid = FiniteMonoid::from_parts(labels, table, 0, 1);
        Ok(CyclicQuotient {
            monoid,
            level,
            period: n,
            twist,
        })
    }
}

/// The finite monoid `F[T^±] / ⟨T^n ∼ λ⟩` together with its coordinates:
/// element ids encode `s^i · T^j` with `s` the canonical coefficient
/// generator.
#[derive(Debug, Clone)]
pub struct CyclicQuotient {
    monoid: FiniteMonoid,
    level: u64,
    period: u64,
    twist: u64,
}

impl CyclicQuotient {
    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn into_monoid(self) -> FiniteMonoid {
        self.monoid
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Id of `s^i · T^j` (exponents taken mod their periods).
    pub fn element(&self, coeff_exp: u64, t_exp: u64) -> usize {
        let i = (coeff_exp % self.level) as usize;
        let j = (t_exp % self.period) as usize;
        1 + i * self.period as usize + j
    }

    /// Normal form of `T^k` for any integer `k`: reduce by
    /// `T^n = s^twist`.
    pub fn t_power(&self, k: i64) -> usize {
        let n = self.period as i64;
        let carry = k.div_euclid(n);
        let j = k.rem_euclid(n) as u64;
        let m = self.level as i64;
        let coeff = (self.twist as i64 * carry).rem_euclid(m) as u64;
        self.element(coeff, j)
    }

    /// Id of a constant coefficient.
    pub fn constant(&self, lambda: &Root) -> Result<usize> {
        if lambda.is_zero() {
            return Ok(self.monoid.zero());
        }
        let f = CycloMonoid::finite(self.level)?;
        Ok(self.element(f.log_generator(lambda)?, 0))
    }

    /// Id of a canonical Laurent form `λ · T^k`.
    pub fn class_of(&self, x: &(Root, i64)) -> Result<usize> {
        if x.0.is_zero() {
            return Ok(self.monoid.zero());
        }
        let f = CycloMonoid::finite(self.level)?;
        let c = f.log_generator(&x.0)?;
        let t = self.t_power(x.1);
        // t already folds the twist; add the explicit coefficient.
        let (ti, tj) = self.coords(t);
        Ok(self.element(c + ti, tj))
    }

    fn coords(&self, id: usize) -> (u64, u64) {
        debug_assert!(id > 0);
        let idx = id - 1;
        (
            (idx / self.period as usize) as u64,
            (idx % self.period as usize) as u64,
        )
    }
}

/// Converts a root's canonical `k/n` data into a `(numerator, denominator)`
/// pair of machine integers when small enough.
pub fn root_to_u64_pair(z: &Root) -> Result<(u64, u64)> {
    match z {
        Root::Zero => Err(Error::invalid("zero has no fraction form")),
        Root::Unity { num, den } => {
            let (Some(k), Some(n)) = (num.to_u64(), den.to_u64()) else {
                return Err(Error::MagnitudeLimit("root order exceeds u64".into()));
            };
            Ok((k, n))
        }
    }
}
