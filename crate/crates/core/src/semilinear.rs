//! Semilinear sets over `Z^k`: membership, union, affine images, the 1-D
//! eventually-periodic normal form, and the powers-of-two refutation
//! certificate.
//!
//! A linear set is `u + N·v_1 + … + N·v_m`; a semilinear set is a finite
//! union of those. Parikh images live in `N^k`, but affine images (such as
//! the coordinate-difference map used to refute semilinearity claims) may
//! leave `N^k`, so vectors are `Z^k` throughout and each consumer states its
//! own positivity requirement.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::{format_vector, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemilinearError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no sound finite search bound for this period set (dimension {dim})")]
    UnboundedSearch { dim: usize },
    #[error("set has members outside N (e.g. {example}); a normal form over N was requested")]
    NegativePart { example: String },
    #[error("cannot parse semilinear text: {0}")]
    Parse(String),
}

/// `u + N·v_1 + … + N·v_m`. Zero periods are dropped at construction.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearSet<T> {
    dimension: usize,
    base: Vec<T>,
    periods: Vec<Vec<T>>,
}

impl<T: Scalar> LinearSet<T> {
    pub fn new(base: Vec<T>, periods: Vec<Vec<T>>) -> Result<Self, SemilinearError> {
        let dimension = base.len();
        let mut kept = Vec::new();
        for p in periods {
            if p.len() != dimension {
                return Err(SemilinearError::DimensionMismatch {
                    expected: dimension,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_zero()) && !kept.contains(&p) {
                kept.push(p);
            }
        }
        Ok(LinearSet {
            dimension,
            base,
            periods: kept,
        })
    }

    pub fn point(base: Vec<T>) -> Self {
        let dimension = base.len();
        LinearSet {
            dimension,
            base,
            periods: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn periods(&self) -> &[Vec<T>] {
        &self.periods
    }

    pub fn is_finite(&self) -> bool {
        self.periods.is_empty()
    }
}

/// Finite union of linear sets of one common dimension.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SemilinearSet<T> {
    dimension: usize,
    components: Vec<LinearSet<T>>,
}

impl<T: Scalar> SemilinearSet<T> {
    pub fn new(dimension: usize, components: Vec<LinearSet<T>>) -> Result<Self, SemilinearError> {
        for c in &components {
            if c.dimension() != dimension {
                return Err(SemilinearError::DimensionMismatch {
                    expected: dimension,
                    got: c.dimension(),
                });
            }
        }
        let mut dedup: Vec<LinearSet<T>> = Vec::new();
        for c in components {
            if !dedup.contains(&c) {
                dedup.push(c);
            }
        }
        Ok(SemilinearSet {
            dimension,
            components: dedup,
        })
    }

    pub fn empty(dimension: usize) -> Self {
        SemilinearSet {
            dimension,
            components: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn components(&self) -> &[LinearSet<T>] {
        &self.components
    }

    pub fn is_empty_set(&self) -> bool {
        self.components.is_empty()
    }

    pub fn union(&self, other: &SemilinearSet<T>) -> Result<SemilinearSet<T>, SemilinearError> {
        if self.dimension != other.dimension {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        SemilinearSet::new(self.dimension, components)
    }

    /// Image under `x ↦ M·x + c` (vectors as columns here): each component
    /// maps to base `M·u + c` with periods `M·v_j`, dropping zero images.
    pub fn affine_image(
        &self,
        m: &Matrix<T>,
        c: &[T],
    ) -> Result<SemilinearSet<T>, SemilinearError> {
        if m.cols() != self.dimension || c.len() != m.rows() {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension,
                got: m.cols(),
            });
        }
        let apply = |v: &[T], add: Option<&[T]>| -> Vec<T> {
            (0..m.rows())
                .map(|i| {
                    let mut acc = add.map_or_else(T::zero, |a| a[i].clone());
                    for (j, x) in v.iter().enumerate() {
                        acc = acc + m.at(i, j).clone() * x.clone();
                    }
                    acc
                })
                .collect()
        };
        let components = self
            .components
            .iter()
            .map(|comp| {
                LinearSet::new(
                    apply(comp.base(), Some(c)),
                    comp.periods().iter().map(|p| apply(p, None)).collect(),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        SemilinearSet::new(m.rows(), components)
    }

    /// Decides `x ∈ S` by bounded search over period multiplicities.
    ///
    /// The search needs a linear functional `f` with `f(v) ≥ 1` on every
    /// period of a component: then any solution satisfies
    /// `Σ n_i·f(v_i) = f(x−u)`, so `f(x−u)` bounds the whole search. The
    /// all-ones functional covers the Parikh case (componentwise nonnegative
    /// periods); in low dimension all sign patterns are tried. In dimension 1
    /// a mixed-sign period set generates every multiple of the gcd, which is
    /// decided by a residue check instead. Anything else is rejected with an
    /// explicit error rather than risking an unsound bound.
    pub fn member(&self, x: &[T]) -> Result<bool, SemilinearError> {
        if x.len() != self.dimension {
            return Err(SemilinearError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        for comp in &self.components {
            if linear_member(comp, x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// All members with coordinate-sum ≤ `bound`, for sets whose bases and
    /// periods are componentwise nonnegative (Parikh images).
    pub fn enumerate_nonnegative(&self, bound: u64) -> Result<BTreeSet<Vec<T>>, SemilinearError> {
        let limit = T::from(i32::try_from(bound).expect("bound too large"));
        let mut out = BTreeSet::new();
        for comp in &self.components {
            if comp
                .base()
                .iter()
                .chain(comp.periods().iter().flatten())
                .any(|x| x < &T::zero())
            {
                return Err(SemilinearError::UnboundedSearch {
                    dim: self.dimension,
                });
            }
            let mut stack = vec![(comp.base().to_vec(), 0usize)];
            while let Some((point, next)) = stack.pop() {
                let total = point.iter().fold(T::zero(), |a, b| a + b.clone());
                if total > limit {
                    continue;
                }
                out.insert(point.clone());
                for (i, period) in comp.periods().iter().enumerate().skip(next) {
                    let bumped: Vec<T> = point
                        .iter()
                        .zip(period)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect();
                    stack.push((bumped, i));
                }
            }
        }
        Ok(out)
    }
}

fn linear_member<T: Scalar>(comp: &LinearSet<T>, x: &[T]) -> Result<bool, SemilinearError> {
    let remaining: Vec<T> = x
        .iter()
        .zip(comp.base())
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    if comp.periods().is_empty() {
        return Ok(remaining.iter().all(Zero::is_zero));
    }
    if let Some(f) = positive_functional(comp.dimension(), comp.periods()) {
        let budget = dot(&f, &remaining);
        if budget < T::zero() {
            return Ok(false);
        }
        return Ok(search(comp.periods(), &f, remaining, budget));
    }
    if comp.dimension() == 1 {
        // Mixed-sign periods in dimension 1 generate every multiple of the
        // gcd with nonnegative coefficients (pair a positive and a negative
        // period to shift any Bezout combination into N).
        let g = comp
            .periods()
            .iter()
            .fold(T::zero(), |acc, p| acc.gcd(&p[0]));
        return Ok(remaining[0].is_multiple_of(&g));
    }
    Err(SemilinearError::UnboundedSearch {
        dim: comp.dimension(),
    })
}

fn dot<T: Scalar>(f: &[T], v: &[T]) -> T {
    f.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Finds a ±1-vector functional strictly positive on every period, trying
/// the all-ones vector first and then, in low dimension, all sign patterns.
fn positive_functional<T: Scalar>(dim: usize, periods: &[Vec<T>]) -> Option<Vec<T>> {
    let ones = vec![T::one(); dim];
    let positive = |f: &[T]| periods.iter().all(|p| dot(f, p) >= T::one());
    if positive(&ones) {
        return Some(ones);
    }
    if dim <= 12 {
        for mask in 1u32..(1 << dim) {
            let f: Vec<T> = (0..dim)
                .map(|i| {
                    if mask & (1 << i) == 0 {
                        T::one()
                    } else {
                        T::zero() - T::one()
                    }
                })
                .collect();
            if positive(&f) {
                return Some(f);
            }
        }
    }
    None
}

fn search<T: Scalar>(periods: &[Vec<T>], f: &[T], remaining: Vec<T>, budget: T) -> bool {
    if remaining.iter().all(Zero::is_zero) {
        return true;
    }
    if periods.is_empty() || budget <= T::zero() {
        return false;
    }
    let period = &periods[0];
    let cost = dot(f, period);
    let mut point = remaining.clone();
    let mut left = budget.clone();
    loop {
        if search(&periods[1..], f, point.clone(), left.clone()) {
            return true;
        }
        left = left - cost.clone();
        if left < T::zero() {
            return false;
        }
        for (slot, p) in point.iter_mut().zip(period) {
            *slot = slot.clone() - p.clone();
        }
    }
}

/// One-dimensional normal form: members are exactly
/// `sporadic ∪ {x ≥ threshold | x mod period ∈ residues}`; `period = 0`
/// means the set is finite and `residues` is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EventuallyPeriodicSet<T> {
    threshold: T,
    period: T,
    sporadic: BTreeSet<T>,
    residues: BTreeSet<T>,
}

impl<T: Scalar> EventuallyPeriodicSet<T> {
    pub fn threshold(&self) -> &T {
        &self.threshold
    }

    pub fn period(&self) -> &T {
        &self.period
    }

    pub fn sporadic(&self) -> &BTreeSet<T> {
        &self.sporadic
    }

    pub fn residues(&self) -> &BTreeSet<T> {
        &self.residues
    }

    pub fn contains(&self, x: &T) -> bool {
        if self.sporadic.contains(x) {
            return true;
        }
        if self.period.is_zero() || x < &self.threshold {
            return false;
        }
        self.residues.contains(&x.mod_floor(&self.period))
    }
}

/// Normal form of a 1-D semilinear subset of `N`.
///
/// The overall period is the lcm of every nonzero period. Per component with
/// periods `g·a_1, …, g·a_r` (`g` their gcd), the representable multiples of
/// `g` beyond the Frobenius gap are found by a direct knapsack scan: once
/// `a_min` consecutive multiples are representable, all larger ones are.
pub fn one_dim_normal_form<T: Scalar>(
    set: &SemilinearSet<T>,
) -> Result<EventuallyPeriodicSet<T>, SemilinearError> {
    if set.dimension() != 1 {
        return Err(SemilinearError::DimensionMismatch {
            expected: 1,
            got: set.dimension(),
        });
    }
    for comp in set.components() {
        let neg_base = comp.base()[0] < T::zero();
        let neg_period = comp.periods().iter().find(|p| p[0] < T::zero());
        if neg_base || neg_period.is_some() {
            let example = if neg_base {
                comp.base()[0].clone()
            } else {
                comp.base()[0].clone() + neg_period.unwrap()[0].clone()
            };
            return Err(SemilinearError::NegativePart {
                example: example.to_string(),
            });
        }
    }

    let period = set
        .components()
        .iter()
        .flat_map(|c| c.periods())
        .fold(T::zero(), |acc, p| {
            if acc.is_zero() {
                p[0].clone()
            } else {
                acc.lcm(&p[0])
            }
        });

    // Tail start per periodic component: base + g·t0, where t0 begins the
    // all-representable tail of the numerical semigroup of the periods.
    let mut threshold = T::zero();
    for comp in set.components() {
        let t = if comp.periods().is_empty() {
            comp.base()[0].clone() + T::one()
        } else {
            let g = comp
                .periods()
                .iter()
                .fold(T::zero(), |acc, p| acc.gcd(&p[0]));
            let gens: Vec<u64> = comp
                .periods()
                .iter()
                .map(|p| scalar_to_u64(&p[0].clone().div_floor(&g)))
                .collect();
            let t0 = numerical_semigroup_tail(&gens);
            comp.base()[0].clone() + g * T::from(i32::try_from(t0).unwrap())
        };
        if t > threshold {
            threshold = t;
        }
    }

    // Sporadic members below the threshold, by bounded DFS (periods ≥ 0).
    let mut sporadic = BTreeSet::new();
    for comp in set.components() {
        let mut stack = vec![comp.base()[0].clone()];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if x >= threshold || !seen.insert(x.clone()) {
                continue;
            }
            for p in comp.periods() {
                stack.push(x.clone() + p[0].clone());
            }
            sporadic.insert(x);
        }
    }

    // Residues mod the global period: a periodic component contributes the
    // full coset base + gZ (its gcd divides the global period).
    let mut residues = BTreeSet::new();
    if !period.is_zero() {
        for comp in set.components() {
            if comp.periods().is_empty() {
                continue;
            }
            let g = comp
                .periods()
                .iter()
                .fold(T::zero(), |acc, p| acc.gcd(&p[0]));
            let mut r = comp.base()[0].mod_floor(&period);
            let start = r.clone();
            loop {
                residues.insert(r.clone());
                r = (r + g.clone()).mod_floor(&period);
                if r == start {
                    break;
                }
            }
        }
    }

    Ok(EventuallyPeriodicSet {
        threshold,
        period,
        sporadic,
        residues,
    })
}

fn scalar_to_u64<T: Scalar>(x: &T) -> u64 {
    let mut n = 0u64;
    let mut v = x.clone();
    let step = T::from(1);
    while v > T::zero() {
        n += 1;
        v = v - step.clone();
        assert!(n < 1_000_000, "scalar too large for desk-scale conversion");
    }
    n
}

/// Smallest `t0` such that every `t ≥ t0` is representable as a nonnegative
/// combination of `gens` (overall gcd 1). Knapsack scan over a window,
/// doubled until a run of `min(gens)` consecutive representables shows up.
fn numerical_semigroup_tail(gens: &[u64]) -> u64 {
    let amin = *gens.iter().min().unwrap() as usize;
    if amin == 1 {
        return 0;
    }
    let amax = *gens.iter().max().unwrap() as usize;
    let mut window = amin * amax + amin + 1;
    loop {
        let mut reachable = vec![false; window + 1];
        reachable[0] = true;
        for t in 1..=window {
            for &g in gens {
                let g = g as usize;
                if t >= g && reachable[t - g] {
                    reachable[t] = true;
                    break;
                }
            }
        }
        // First index starting a run of amin consecutive hits; all larger
        // values follow by adding the smallest generator.
        let mut run = 0usize;
        for (t, &ok) in reachable.iter().enumerate() {
            run = if ok { run + 1 } else { 0 };
            if run == amin {
                return (t + 1 - amin) as u64;
            }
        }
        window *= 2;
        assert!(window < 1 << 24, "no representable tail found; gcd not 1?");
    }
}

/// Outcome of testing whether a 1-D semilinear set could equal `{2^n | n ∈ N}`.
///
/// Every 1-D semilinear set is refuted one way or the other: an infinite
/// component yields a member triple `u, u+v, u+2v` that cannot consist of
/// powers of two (if `u = 2^{k0}` and `u+v = 2^{k1}` then
/// `u+2v = 2^{k0}(2^{k1+1-k0} − 1)`, a power only when `v = 0`); a set with
/// only finite components cannot be the infinite set of powers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PowersOfTwoCertificate<T> {
    /// All components are finite; the listed members are the whole set.
    Finite { members: Vec<T> },
    /// `u, u+v, u+2v` are all members and `non_power` is one of them that is
    /// not a power of two.
    Witness {
        u: T,
        v: T,
        members: [T; 3],
        non_power: T,
    },
}

pub fn is_power_of_two<T: Scalar>(x: &T) -> bool {
    if x <= &T::zero() {
        return false;
    }
    let two = T::from(2);
    let mut v = x.clone();
    while v.is_even() {
        v = v.div_floor(&two);
    }
    v.is_one()
}

/// Decides that a 1-D semilinear set is not `{2^n | n ∈ N}`, with a
/// verifiable certificate. Total on 1-D inputs.
pub fn powers_of_two_conflict<T: Scalar>(
    set: &SemilinearSet<T>,
) -> Result<PowersOfTwoCertificate<T>, SemilinearError> {
    if set.dimension() != 1 {
        return Err(SemilinearError::DimensionMismatch {
            expected: 1,
            got: set.dimension(),
        });
    }
    for comp in set.components() {
        if let Some(period) = comp.periods().first() {
            let u = comp.base()[0].clone();
            let v = period[0].clone();
            let members = [
                u.clone(),
                u.clone() + v.clone(),
                u.clone() + v.clone() + v.clone(),
            ];
            let non_power = members
                .iter()
                .find(|m| !is_power_of_two(*m))
                .expect("u, u+v, u+2v cannot all be powers of two when v != 0")
                .clone();
            return Ok(PowersOfTwoCertificate::Witness {
                u,
                v,
                members,
                non_power,
            });
        }
    }
    let mut members: Vec<T> = set
        .components()
        .iter()
        .map(|c| c.base()[0].clone())
        .collect();
    members.sort();
    members.dedup();
    Ok(PowersOfTwoCertificate::Finite { members })
}

/// Text format: one component per line, `base (u1,…,uk) periods (v…) (v…)`.
pub fn format_semilinear<T: Scalar>(set: &SemilinearSet<T>) -> String {
    let mut out = String::new();
    for comp in set.components() {
        out.push_str("base ");
        out.push_str(&format_vector(comp.base()));
        out.push_str(" periods");
        for p in comp.periods() {
            out.push(' ');
            out.push_str(&format_vector(p));
        }
        out.push('\n');
    }
    out
}

pub fn parse_semilinear<T: Scalar>(text: &str) -> Result<SemilinearSet<T>, SemilinearError> {
    let mut components = Vec::new();
    let mut dimension = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("base")
            .ok_or_else(|| SemilinearError::Parse(format!("expected `base`, got `{line}`")))?;
        let (base_text, periods_text) = match rest.split_once("periods") {
            Some((b, p)) => (b, p),
            None => (rest, ""),
        };
        let base = parse_vector::<T>(base_text.trim())?;
        let dim = base.len();
        if *dimension.get_or_insert(dim) != dim {
            return Err(SemilinearError::Parse(
                "components of unequal dimension".into(),
            ));
        }
        let mut periods = Vec::new();
        for chunk in split_vectors(periods_text) {
            periods.push(parse_vector::<T>(&chunk)?);
        }
        components.push(LinearSet::new(base, periods)?);
    }
    let dim = dimension.ok_or_else(|| SemilinearError::Parse("no components".into()))?;
    SemilinearSet::new(dim, components)
}

pub fn parse_vector<T: Scalar>(text: &str) -> Result<Vec<T>, SemilinearError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| SemilinearError::Parse(format!("expected `(…)`, got `{text}`")))?;
    if inner.trim().is_empty() {
        return Err(SemilinearError::Parse("empty vector".into()));
    }
    inner
        .split(',')
        .map(|part| {
            let part = part.trim();
            let n: i64 = part
                .parse()
                .map_err(|_| SemilinearError::Parse(format!("bad integer `{part}`")))?;
            Ok(T::from(i32::try_from(n).map_err(|_| {
                SemilinearError::Parse(format!("integer out of range `{part}`"))
            })?))
        })
        .collect()
}

fn split_vectors(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
                if depth == 0 {
                    out.push(current.trim().to_string());
                    current.clear();
                }
            }
            _ => {
                if depth > 0 {
                    current.push(ch);
                }
            }
        }
    }
    out
}

impl<T: Scalar> fmt::Display for SemilinearSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_semilinear(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::Int;

    fn iv(xs: &[i32]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    fn lin(base: &[i32], periods: &[&[i32]]) -> LinearSet<Int> {
        LinearSet::new(iv(base), periods.iter().map(|p| iv(p)).collect()).unwrap()
    }

    fn sl(components: Vec<LinearSet<Int>>) -> SemilinearSet<Int> {
        let dim = components[0].dimension();
        SemilinearSet::new(dim, components).unwrap()
    }

    #[test]
    fn member_examples() {
        let diag = sl(vec![lin(&[0, 0], &[&[1, 1]])]);
        assert!(diag.member(&iv(&[0, 0])).unwrap());
        assert!(diag.member(&iv(&[3, 3])).unwrap());
        assert!(!diag.member(&iv(&[3, 2])).unwrap());

        let point = sl(vec![lin(&[2, 5], &[])]);
        assert!(point.member(&iv(&[2, 5])).unwrap());
        assert!(!point.member(&iv(&[2, 4])).unwrap());
    }

    #[test]
    fn member_dimension_mismatch() {
        let diag = sl(vec![lin(&[0, 0], &[&[1, 1]])]);
        assert!(matches!(
            diag.member(&iv(&[1])),
            Err(SemilinearError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn member_agrees_with_bounded_brute_force() {
        let mut rng = SplitMix64::new(0xbf);
        for _ in 0..150 {
            let dim = 1 + rng.below(4) as usize;
            let nperiods = rng.below(3) as usize;
            let base: Vec<Int> = (0..dim).map(|_| Int::from(rng.below(6) as i64)).collect();
            let periods: Vec<Vec<Int>> = (0..nperiods)
                .map(|_| (0..dim).map(|_| Int::from(rng.below(6) as i64)).collect())
                .collect();
            let comp = LinearSet::new(base.clone(), periods).unwrap();
            let set = SemilinearSet::new(dim, vec![comp.clone()]).unwrap();

            // Brute-force enumeration of all n_i ≤ 6 combinations; complete
            // for every vector whose coordinates stay below the smallest
            // period coordinate sum times 7, so probe only inside that disc.
            let mut members = BTreeSet::new();
            let nper = comp.periods().len();
            let mut counters = vec![0u64; nper];
            'outer: loop {
                let mut point = base.clone();
                for (n, p) in counters.iter().zip(comp.periods()) {
                    for (slot, x) in point.iter_mut().zip(p) {
                        *slot = slot.clone() + Int::from(*n) * x.clone();
                    }
                }
                members.insert(point);
                let mut i = 0;
                loop {
                    if i == nper {
                        break 'outer;
                    }
                    counters[i] += 1;
                    if counters[i] <= 6 {
                        break;
                    }
                    counters[i] = 0;
                    i += 1;
                }
            }
            for point in &members {
                assert!(set.member(point).unwrap(), "{point:?} not in {set:?}");
            }
            // Probes close to the base: every kept period has coordinate
            // sum ≥ 1, so any member with offset-sum ≤ 6 uses multiplicities
            // ≤ 6 and the brute table is complete there. Compare exactly.
            for _ in 0..20 {
                let probe: Vec<Int> = base
                    .iter()
                    .map(|b| b.clone() + Int::from(rng.below(3) as i64))
                    .collect();
                let offset_sum: Int = probe
                    .iter()
                    .zip(&base)
                    .map(|(p, b)| p.clone() - b.clone())
                    .fold(Int::from(0), |a, b| a + b);
                if offset_sum <= Int::from(6) {
                    assert_eq!(
                        set.member(&probe).unwrap(),
                        members.contains(&probe),
                        "{probe:?} vs brute force on {set:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn member_mixed_sign_one_dim() {
        // Periods {3, -2}: gcd 1, so every integer is a member.
        let set = sl(vec![lin(&[5], &[&[3], &[-2]])]);
        for x in -10..10 {
            assert!(set.member(&[Int::from(x)]).unwrap());
        }
        // Periods {4, -2}: exactly the even offsets from 1 are members.
        let set = sl(vec![lin(&[1], &[&[4], &[-2]])]);
        assert!(set.member(&[Int::from(3)]).unwrap());
        assert!(set.member(&[Int::from(-7)]).unwrap());
        assert!(!set.member(&[Int::from(2)]).unwrap());
    }

    #[test]
    fn member_unbounded_rejected() {
        // Dimension 2 with opposite periods admits no sound finite bound.
        let set = sl(vec![lin(&[0, 0], &[&[1, -1], &[-1, 1]])]);
        assert!(matches!(
            set.member(&iv(&[5, -5])),
            Err(SemilinearError::UnboundedSearch { dim: 2 })
        ));
    }

    #[test]
    fn affine_image_identity_and_difference() {
        let set = sl(vec![lin(&[1, 2], &[&[1, 1]])]);
        let id = Matrix::<Int>::identity(2);
        let same = set.affine_image(&id, &iv(&[0, 0])).unwrap();
        assert_eq!(same, set);

        // Difference map (x, y) ↦ x − y collapses the diagonal period.
        let diff = Matrix::<Int>::from_i32_rows(&[&[1, -1]]);
        let image = set.affine_image(&diff, &iv(&[0])).unwrap();
        assert_eq!(image.components().len(), 1);
        assert_eq!(image.components()[0].base(), &iv(&[-1])[..]);
        assert!(image.components()[0].periods().is_empty());
    }

    #[test]
    fn affine_image_soundness_randomized() {
        let mut rng = SplitMix64::new(0xaff);
        let m = Matrix::<Int>::from_i32_rows(&[&[0, 0, 1, -1]]);
        for _ in 0..100 {
            let base: Vec<Int> = (0..4).map(|_| Int::from(rng.below(4) as i64)).collect();
            let p: Vec<Int> = (0..4).map(|_| Int::from(rng.below(3) as i64)).collect();
            let set =
                SemilinearSet::new(4, vec![LinearSet::new(base.clone(), vec![p.clone()]).unwrap()])
                    .unwrap();
            let image = set.affine_image(&m, &iv(&[0])).unwrap();
            for n in 0..4i32 {
                let point: Vec<Int> = base
                    .iter()
                    .zip(&p)
                    .map(|(b, q)| b.clone() + Int::from(n) * q.clone())
                    .collect();
                assert!(set.member(&point).unwrap());
                let mapped = vec![point[2].clone() - point[3].clone()];
                assert!(image.member(&mapped).unwrap());
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        // {5}: finite.
        let nf = one_dim_normal_form(&sl(vec![lin(&[5], &[])])).unwrap();
        assert!(nf.period().is_zero());
        assert!(nf.residues().is_empty());
        assert!(nf.contains(&Int::from(5)));
        assert!(!nf.contains(&Int::from(6)));

        // {1 + 2N}: period 2, residue 1.
        let nf = one_dim_normal_form(&sl(vec![lin(&[1], &[&[2]])])).unwrap();
        assert_eq!(nf.period(), &Int::from(2));
        assert_eq!(nf.residues().iter().cloned().collect::<Vec<_>>(), iv(&[1]));

        // {3N} ∪ {1 + 3N}: period 3, residues {0, 1}. Frozen from brute
        // membership up to 30.
        let set = sl(vec![lin(&[0], &[&[3]]), lin(&[1], &[&[3]])]);
        let nf = one_dim_normal_form(&set).unwrap();
        assert_eq!(nf.period(), &Int::from(3));
        assert_eq!(
            nf.residues().iter().cloned().collect::<Vec<_>>(),
            iv(&[0, 1])
        );
        for x in 0..=30i32 {
            let expected = x % 3 == 0 || x % 3 == 1;
            assert_eq!(nf.contains(&Int::from(x)), expected, "x = {x}");
        }
    }

    #[test]
    fn normal_form_union_of_even_and_odd_is_all() {
        let set = sl(vec![lin(&[0], &[&[2]]), lin(&[1], &[&[2]])]);
        let nf = one_dim_normal_form(&set).unwrap();
        for x in 0..40i32 {
            assert!(nf.contains(&Int::from(x)));
        }
    }

    #[test]
    fn normal_form_agreement_with_member() {
        let mut rng = SplitMix64::new(0x9f);
        for _ in 0..150 {
            let ncomp = 1 + rng.below(3) as usize;
            let comps: Vec<LinearSet<Int>> = (0..ncomp)
                .map(|_| {
                    let base = Int::from(rng.below(12) as i64);
                    let nper = rng.below(3) as usize;
                    let periods: Vec<Vec<Int>> = (0..nper)
                        .map(|_| vec![Int::from(rng.below(7) as i64)])
                        .collect();
                    LinearSet::new(vec![base], periods).unwrap()
                })
                .collect();
            let set = SemilinearSet::new(1, comps).unwrap();
            let nf = one_dim_normal_form(&set).unwrap();
            let limit = nf.threshold().clone() + Int::from(3) * nf.period().clone();
            let mut x = Int::from(0);
            while x <= limit {
                assert_eq!(
                    nf.contains(&x),
                    set.member(&[x.clone()]).unwrap(),
                    "x = {x} in {set:?}"
                );
                x = x + Int::from(1);
            }
        }
    }

    #[test]
    fn normal_form_rejects_negative_part() {
        let set = sl(vec![lin(&[-2], &[&[3]])]);
        assert!(matches!(
            one_dim_normal_form(&set),
            Err(SemilinearError::NegativePart { .. })
        ));
        let mixed = sl(vec![lin(&[4], &[&[-3]])]);
        assert!(matches!(
            one_dim_normal_form(&mixed),
            Err(SemilinearError::NegativePart { .. })
        ));
    }

    #[test]
    fn powers_of_two_finite_certificate() {
        let set = sl(vec![lin(&[1], &[]), lin(&[2], &[]), lin(&[4], &[])]);
        match powers_of_two_conflict(&set).unwrap() {
            PowersOfTwoCertificate::Finite { members } => {
                assert_eq!(members, iv(&[1, 2, 4]));
            }
            other => panic!("expected finite certificate, got {other:?}"),
        }
    }

    #[test]
    fn powers_of_two_witness_certificate() {
        let set = sl(vec![lin(&[2], &[&[2]])]);
        match powers_of_two_conflict(&set).unwrap() {
            PowersOfTwoCertificate::Witness {
                members, non_power, ..
            } => {
                assert_eq!(members, [Int::from(2), Int::from(4), Int::from(6)]);
                assert_eq!(non_power, Int::from(6));
                for m in &members {
                    assert!(set.member(&[m.clone()]).unwrap());
                }
                assert!(!is_power_of_two(&non_power));
            }
            other => panic!("expected witness certificate, got {other:?}"),
        }
    }

    #[test]
    fn powers_of_two_total_on_random_sets() {
        let mut rng = SplitMix64::new(0x2a);
        for _ in 0..300 {
            let ncomp = 1 + rng.below(3) as usize;
            let comps: Vec<LinearSet<Int>> = (0..ncomp)
                .map(|_| {
                    let base = Int::from(rng.below(16) as i64);
                    let nper = rng.below(3) as usize;
                    let periods: Vec<Vec<Int>> = (0..nper)
                        .map(|_| vec![Int::from(rng.below(5) as i64)])
                        .collect();
                    LinearSet::new(vec![base], periods).unwrap()
                })
                .collect();
            let set = SemilinearSet::new(1, comps).unwrap();
            match powers_of_two_conflict(&set).unwrap() {
                PowersOfTwoCertificate::Finite { members } => {
                    assert!(set.components().iter().all(LinearSet::is_finite));
                    for m in &members {
                        assert!(set.member(&[m.clone()]).unwrap());
                    }
                }
                PowersOfTwoCertificate::Witness {
                    members, non_power, ..
                } => {
                    for m in &members {
                        assert!(set.member(&[m.clone()]).unwrap());
                    }
                    assert!(!is_power_of_two(&non_power));
                    assert!(members.contains(&non_power));
                }
            }
        }
    }

    #[test]
    fn is_power_of_two_small_values() {
        let powers: Vec<i32> = vec![1, 2, 4, 8, 16, 1024];
        for p in powers {
            assert!(is_power_of_two(&Int::from(p)), "{p}");
        }
        for np in [0, -1, -2, 3, 6, 12, 1023] {
            assert!(!is_power_of_two(&Int::from(np)), "{np}");
        }
    }

    #[test]
    fn text_format_round_trip() {
        let set = sl(vec![lin(&[0, 0, 1, 0], &[&[1, 1, 0, 0], &[1, 1, 1, 0]])]);
        let text = format_semilinear(&set);
        assert_eq!(
            text,
            "base (0, 0, 1, 0) periods (1, 1, 0, 0) (1, 1, 1, 0)\n"
        );
        let parsed: SemilinearSet<Int> = parse_semilinear(&text).unwrap();
        assert_eq!(parsed, set);
    }

    #[test]
    fn generic_over_i64() {
        let comp = LinearSet::<i64>::new(vec![1], vec![vec![2]]).unwrap();
        let set = SemilinearSet::new(1, vec![comp]).unwrap();
        assert!(set.member(&[7]).unwrap());
        assert!(!set.member(&[4]).unwrap());
    }
}
