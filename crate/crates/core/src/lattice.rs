//! The lattice `Π_n` of set partitions of `{1, .., n}` ordered by
//! refinement, together with the point-configuration model used for
//! diagonals, multiplicities and ε-neighbourhood classification, and the
//! discrepancy recursion `δ_α = F(α) - sum_{β<α} δ_β`.
//!
//! Elements of the ground set are 0-based internally and printed 1-based.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ground sets differ: {0} vs {1}")]
    GroundSetMismatch(usize, usize),
    #[error("invalid blocks: {0}")]
    InvalidBlocks(String),
    #[error("no value supplied for {0}")]
    MissingValue(SetPartition),
    #[error("inadmissible schedule for this configuration: maximal candidates {0:?}")]
    InadmissibleSchedule(Vec<SetPartition>),
    #[error("epsilon schedule violates {0}")]
    InvalidSchedule(String),
}

/// A set partition stored as its restricted growth string: `labels[a]` is
/// the index of the block containing `a`, blocks numbered by first
/// appearance. This is the canonical form (blocks sorted by minimum).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    labels: Vec<usize>,
}

impl SetPartition {
    /// Relabels arbitrary block labels into canonical form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    /// Builds a partition of `{0, .., n-1}` from explicit blocks.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, LatticeError> {
        let mut labels = vec![usize::MAX; n];
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(LatticeError::InvalidBlocks("empty block".into()));
            }
            for &a in block {
                if a >= n {
                    return Err(LatticeError::InvalidBlocks(format!(
                        "element {} outside ground set",
                        a + 1
                    )));
                }
                if labels[a] != usize::MAX {
                    return Err(LatticeError::InvalidBlocks(format!(
                        "element {} repeated",
                        a + 1
                    )));
                }
                labels[a] = i;
            }
        }
        if let Some(a) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(LatticeError::InvalidBlocks(format!(
                "element {} not covered",
                a + 1
            )));
        }
        Ok(Self::from_labels(&labels))
    }

    /// `0_Λ`: all singletons.
    pub fn discrete(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
        }
    }

    /// `Λ`: a single block.
    pub fn indiscrete(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// `n - #blocks`; zero at `0_Λ`, `n - 1` at `Λ`.
    pub fn rank(&self) -> usize {
        self.n() - self.num_blocks()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (a, &l) in self.labels.iter().enumerate() {
            out[l].push(a);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    fn check(&self, other: &Self) -> Result<(), LatticeError> {
        if self.n() != other.n() {
            return Err(LatticeError::GroundSetMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// `self ≤ other`: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool, LatticeError> {
        self.check(other)?;
        Ok(self.refines(other))
    }

    fn refines(&self, other: &Self) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        for (a, &l) in self.labels.iter().enumerate() {
            let target = other.labels[a];
            if image[l] == usize::MAX {
                image[l] = target;
            } else if image[l] != target {
                return false;
            }
        }
        true
    }

    /// Strict refinement.
    pub fn lt(&self, other: &Self) -> Result<bool, LatticeError> {
        Ok(self != other && self.leq(other)?)
    }

    /// Blockwise intersections.
    pub fn meet(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check(other)?;
        let n_other = other.num_blocks().max(1);
        let pairs: Vec<usize> = self
            .labels
            .iter()
            .zip(&other.labels)
            .map(|(a, b)| a * n_other + b)
            .collect();
        Ok(Self::from_labels(&pairs))
    }

    /// Transitive closure of the union of the two equivalence relations.
    pub fn join(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check(other)?;
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for labels in [&self.labels, &other.labels] {
            let mut first: HashMap<usize, usize> = HashMap::new();
            for (a, &l) in labels.iter().enumerate() {
                let root = *first.entry(l).or_insert(a);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, root));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|a| find(&mut parent, a)).collect();
        Ok(Self::from_labels(&roots))
    }

    /// `α! = prod |α_i|!`.
    pub fn alpha_factorial(&self) -> u64 {
        self.block_sizes().into_iter().map(factorial).product()
    }
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, a) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", a + 1)?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Parses `"1,2|3"` (1-based elements, blocks separated by `|`); the
/// ground set is `1..=max element`.
impl FromStr for SetPartition {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::discrete(0));
        }
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let block = part
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(LatticeError::InvalidBlocks(format!("bad element {t:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
        }
        let n = blocks.iter().flatten().max().map_or(0, |m| m + 1);
        Self::from_blocks(n, &blocks)
    }
}

static PARTITION_CACHE: Lazy<Mutex<HashMap<usize, Arc<Vec<SetPartition>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Every partition of an `n`-set, by restricted growth strings in
/// lexicographic order. Cached per `n`.
pub fn all_partitions(n: usize) -> Arc<Vec<SetPartition>> {
    if let Some(hit) = PARTITION_CACHE.lock().expect("cache lock").get(&n) {
        return Arc::clone(hit);
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(rgs: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            out.push(SetPartition {
                labels: rgs.clone(),
            });
            return;
        }
        for v in 0..=max + 1 {
            rgs[i] = v;
            go(rgs, i + 1, max.max(v), out);
        }
    }
    if n == 0 {
        out.push(SetPartition::discrete(0));
    } else {
        go(&mut rgs, 1, 0, &mut out);
    }
    let shared = Arc::new(out);
    PARTITION_CACHE
        .lock()
        .expect("cache lock")
        .entry(n)
        .or_insert_with(|| Arc::clone(&shared));
    shared
}

/// The interval `[0_Λ, α]`, sorted by rank (then canonically).
pub fn interval_below(alpha: &SetPartition) -> Vec<SetPartition> {
    let mut v: Vec<SetPartition> = all_partitions(alpha.n())
        .iter()
        .filter(|b| b.refines(alpha))
        .cloned()
        .collect();
    v.sort_by(|a, b| a.rank().cmp(&b.rank()).then_with(|| a.cmp(b)));
    v
}

/// `sum_{α ∈ Π_n} prod_i t(|α_i|)`.
pub fn partition_sum<V, F>(n: usize, t: F) -> V
where
    V: Clone + std::ops::Mul<Output = V> + std::ops::Add<Output = V> + One + Zero,
    F: Fn(usize) -> V,
{
    all_partitions(n)
        .iter()
        .map(|a| {
            a.block_sizes()
                .into_iter()
                .fold(V::one(), |acc, k| acc * t(k))
        })
        .fold(V::zero(), |acc, v| acc + v)
}

pub type Point = [BigRational; 3];

/// A labelled tuple `(x_1, .., x_n)` of points in `Q^3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointConfig {
    points: Vec<Point>,
}

impl PointConfig {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn from_ints(points: &[[i64; 3]]) -> Self {
        Self {
            points: points
                .iter()
                .map(|p| p.map(|c| BigRational::from_integer(BigInt::from(c))))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// The partition of indices by equal points.
    pub fn coincidence_partition(&self) -> SetPartition {
        let mut seen: Vec<&Point> = Vec::new();
        let labels: Vec<usize> = self
            .points
            .iter()
            .map(|p| {
                seen.iter().position(|q| *q == p).unwrap_or_else(|| {
                    seen.push(p);
                    seen.len() - 1
                })
            })
            .collect();
        SetPartition::from_labels(&labels)
    }
}

fn check_config(alpha: &SetPartition, x: &PointConfig) -> Result<(), LatticeError> {
    if alpha.n() != x.n() {
        return Err(LatticeError::GroundSetMismatch(alpha.n(), x.n()));
    }
    Ok(())
}

/// `m_α(x)`: permutations of the ground set fixing `x` and mapping every
/// block of `α` onto itself.
///
/// Such a permutation acts independently inside each block and may only
/// permute indices carrying equal points, so the count is
/// `prod_blocks prod_{distinct points} (multiplicity)!`.
pub fn multiplicity(alpha: &SetPartition, x: &PointConfig) -> Result<u64, LatticeError> {
    check_config(alpha, x)?;
    let mut total = 1u64;
    for block in alpha.blocks() {
        let mut counts: BTreeMap<&Point, usize> = BTreeMap::new();
        for &a in &block {
            *counts.entry(&x.points[a]).or_default() += 1;
        }
        total *= counts.values().map(|&c| factorial(c)).product::<u64>();
    }
    Ok(total)
}

/// Rearranges `v` into the next lexicographic permutation; false when `v`
/// was the last one.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The fibre of the blockwise symmetrization through `x`: all
/// configurations obtained by permuting coordinates within each block.
pub fn symmetrization_fiber(
    alpha: &SetPartition,
    x: &PointConfig,
) -> Result<Vec<PointConfig>, LatticeError> {
    check_config(alpha, x)?;
    let mut fiber = vec![x.points.clone()];
    for block in alpha.blocks() {
        let mut values: Vec<Point> = block.iter().map(|&a| x.points[a].clone()).collect();
        values.sort();
        let mut arrangements = Vec::new();
        loop {
            arrangements.push(values.clone());
            if !next_permutation(&mut values) {
                break;
            }
        }
        let block = &block;
        fiber = fiber
            .into_iter()
            .flat_map(|base| {
                arrangements.iter().map(move |arr| {
                    let mut y = base.clone();
                    for (&a, p) in block.iter().zip(arr) {
                        y[a] = p.clone();
                    }
                    y
                })
            })
            .collect();
    }
    Ok(fiber.into_iter().map(PointConfig::new).collect())
}

/// `sum_{y in fibre(x)} m_α(y)`, which equals `α!`.
pub fn fiber_multiplicity_sum(alpha: &SetPartition, x: &PointConfig) -> Result<u64, LatticeError> {
    symmetrization_fiber(alpha, x)?
        .iter()
        .map(|y| multiplicity(alpha, y))
        .sum()
}

/// Membership of `x` in `Δ_{(α,β)}`: some pair related by the coarser of
/// the two partitions and not by `α ∧ β` has equal points. For
/// incomparable pairs this is `Δ_{(α,α∧β)} ∪ Δ_{(β,α∧β)}`.
pub fn in_discrepancy_set(
    a: &SetPartition,
    b: &SetPartition,
    x: &PointConfig,
) -> Result<bool, LatticeError> {
    a.check(b)?;
    check_config(a, x)?;
    let m = a.meet(b)?;
    let n = a.n();
    for i in 0..n {
        for j in i + 1..n {
            if m.same_block(i, j) || x.points[i] != x.points[j] {
                continue;
            }
            if a.same_block(i, j) || b.same_block(i, j) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Squared Euclidean distance from `x` to the strict diagonal
/// `Δ_α = {a ~ b ⇒ x_a = x_b}`: the sum of squared deviations from each
/// block's centroid.
pub fn strict_diagonal_distance_sq(
    alpha: &SetPartition,
    x: &PointConfig,
) -> Result<BigRational, LatticeError> {
    check_config(alpha, x)?;
    let mut total = BigRational::zero();
    for block in alpha.blocks() {
        if block.len() < 2 {
            continue;
        }
        let size = BigRational::from_integer(BigInt::from(block.len()));
        for axis in 0..3 {
            let mean = block
                .iter()
                .fold(BigRational::zero(), |acc, &a| acc + &x.points[a][axis])
                / &size;
            for &a in &block {
                let d = &x.points[a][axis] - &mean;
                total += &d * &d;
            }
        }
    }
    Ok(total)
}

/// Radii `ε(β)` of the diagonal neighbourhoods, stored squared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonSchedule {
    n: usize,
    c: BigRational,
    ratio: BigRational,
    eps_sq: BTreeMap<SetPartition, BigRational>,
}

/// Upper bound `c` for the default schedule, relative to a unit minimum gap
/// between distinct cluster centres.
pub fn default_c() -> BigRational {
    BigRational::new(1.into(), 8.into())
}

/// Ratio `R` for the default schedule.
pub fn default_ratio() -> BigRational {
    BigRational::from_integer(16.into())
}

impl EpsilonSchedule {
    /// `ε(β) = c · (2R)^{-|β|}` with `|β|` the block count (at least 1), so
    /// `ε(Λ) = c / 2R < c` and every strict relation `α > β` gives
    /// `ε(α) / ε(β) ≥ 2R > R`.
    pub fn geometric(n: usize, c: BigRational, ratio: BigRational) -> Self {
        let step = BigRational::from_integer(2.into()) * &ratio;
        let step_sq = &step * &step;
        let c_sq = &c * &c;
        let eps_sq = all_partitions(n)
            .iter()
            .map(|b| {
                let depth = b.num_blocks().max(1);
                (b.clone(), &c_sq / num_traits::pow(step_sq.clone(), depth))
            })
            .collect();
        Self {
            n,
            c,
            ratio,
            eps_sq,
        }
    }

    pub fn default_for(n: usize) -> Self {
        Self::geometric(n, default_c(), default_ratio())
    }

    /// A schedule from explicit squared radii, validated.
    pub fn from_squared(
        n: usize,
        c: BigRational,
        ratio: BigRational,
        eps_sq: BTreeMap<SetPartition, BigRational>,
    ) -> Result<Self, LatticeError> {
        let s = Self {
            n,
            c,
            ratio,
            eps_sq,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps_sq(&self, beta: &SetPartition) -> &BigRational {
        &self.eps_sq[beta]
    }

    /// Checks `0 < ε < c` everywhere and `ε(α) > R ε(β)` for `α > β`.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let c_sq = &self.c * &self.c;
        let r_sq = &self.ratio * &self.ratio;
        let parts = all_partitions(self.n);
        for b in parts.iter() {
            let e = self
                .eps_sq
                .get(b)
                .ok_or_else(|| LatticeError::InvalidSchedule(format!("missing ε({b})")))?;
            if *e <= BigRational::zero() || *e >= c_sq {
                return Err(LatticeError::InvalidSchedule(format!("0 < ε({b}) < c")));
            }
        }
        for a in parts.iter() {
            for b in parts.iter() {
                if a != b && b.refines(a) && self.eps_sq[a] <= &r_sq * &self.eps_sq[b] {
                    return Err(LatticeError::InvalidSchedule(format!("ε({a}) > R ε({b})")));
                }
            }
        }
        Ok(())
    }

    fn in_neighbourhood(&self, beta: &SetPartition, x: &PointConfig) -> Result<bool, LatticeError> {
        Ok(strict_diagonal_distance_sq(beta, x)? < self.eps_sq[beta])
    }
}

/// `x ∈ Q^α_{β,ε}` by the set-theoretic definition:
/// `x ∈ Δ_{β,ε}` and `x ∉ Δ_{γ',ε}` for every `α ≥ γ' > β`.
pub fn in_q_set(
    alpha: &SetPartition,
    beta: &SetPartition,
    x: &PointConfig,
    eps: &EpsilonSchedule,
) -> Result<bool, LatticeError> {
    if !beta.leq(alpha)? || !eps.in_neighbourhood(beta, x)? {
        return Ok(false);
    }
    for gamma in interval_below(alpha) {
        if gamma != *beta && beta.refines(&gamma) && eps.in_neighbourhood(&gamma, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique `β ≤ α` with `x ∈ Q^α_{β,ε}`: the maximum of the candidates
/// `{γ ≤ α : dist(x, Δ_γ) < ε(γ)}`.
pub fn classify_q_set(
    alpha: &SetPartition,
    x: &PointConfig,
    eps: &EpsilonSchedule,
) -> Result<SetPartition, LatticeError> {
    check_config(alpha, x)?;
    if eps.n() != alpha.n() {
        return Err(LatticeError::GroundSetMismatch(alpha.n(), eps.n()));
    }
    let mut candidates = Vec::new();
    for gamma in interval_below(alpha) {
        if eps.in_neighbourhood(&gamma, x)? {
            candidates.push(gamma);
        }
    }
    let maximal: Vec<SetPartition> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d != *c && c.refines(d)))
        .cloned()
        .collect();
    match maximal.as_slice() {
        [only] => Ok(only.clone()),
        _ => Err(LatticeError::InadmissibleSchedule(maximal)),
    }
}

/// Values the discrepancy recursion can run over.
pub trait GroupValue: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
}

impl GroupValue for i64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl GroupValue for BigInt {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

impl GroupValue for BigRational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
}

/// Series of one common order form a group; mixing orders panics.
impl GroupValue for TruncatedSeries {
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
            .expect("series values share one truncation order")
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
            .expect("series values share one truncation order")
    }
}

/// `δ_β = F(β) - sum_{γ < β} δ_γ` for every `β ≤ α`.
pub fn delta_transform<V: GroupValue>(
    alpha: &SetPartition,
    f: &BTreeMap<SetPartition, V>,
) -> Result<BTreeMap<SetPartition, V>, LatticeError> {
    let interval = interval_below(alpha);
    let mut delta: BTreeMap<SetPartition, V> = BTreeMap::new();
    for beta in &interval {
        let mut value = f
            .get(beta)
            .ok_or_else(|| LatticeError::MissingValue(beta.clone()))?
            .clone();
        for (gamma, d) in &delta {
            if gamma.rank() < beta.rank() && gamma.refines(beta) {
                value = value.minus(d);
            }
        }
        delta.insert(beta.clone(), value);
    }
    Ok(delta)
}

/// `F(β) = sum_{γ ≤ β} δ_γ` for every `β ≤ α`; inverse of
/// [`delta_transform`].
pub fn summation_transform<V: GroupValue>(
    alpha: &SetPartition,
    delta: &BTreeMap<SetPartition, V>,
) -> Result<BTreeMap<SetPartition, V>, LatticeError> {
    let interval = interval_below(alpha);
    let mut f = BTreeMap::new();
    for beta in &interval {
        let mut value = delta
            .get(beta)
            .ok_or_else(|| LatticeError::MissingValue(beta.clone()))?
            .clone();
        for gamma in &interval {
            if gamma.rank() < beta.rank() && gamma.refines(beta) {
                let d = delta
                    .get(gamma)
                    .ok_or_else(|| LatticeError::MissingValue(gamma.clone()))?;
                value = value.plus(d);
            }
        }
        f.insert(beta.clone(), value);
    }
    Ok(f)
}

/// Möbius function `μ(a, b)` by the recursion from the top of the
/// interval: `μ(b, b) = 1`, `μ(a, b) = -sum_{a < z ≤ b} μ(z, b)`.
pub fn mobius(a: &SetPartition, b: &SetPartition) -> Result<BigInt, LatticeError> {
    if !a.leq(b)? {
        return Ok(BigInt::zero());
    }
    let mut interval: Vec<SetPartition> = interval_below(b)
        .into_iter()
        .filter(|z| a.refines(z))
        .collect();
    interval.reverse();
    let mut mu: BTreeMap<SetPartition, BigInt> = BTreeMap::new();
    for z in &interval {
        let value = if z == b {
            BigInt::one()
        } else {
            -mu.iter()
                .filter(|(w, _)| z.refines(w) && *w != z)
                .fold(BigInt::zero(), |acc, (_, m)| acc + m)
        };
        mu.insert(z.clone(), value);
    }
    Ok(mu.remove(a).expect("a lies in its own interval"))
}

/// Builds the multiplicative data `F(β) = prod_i G(|β_i|)` with
/// `G(k) = sum_{γ ∈ Π_k} prod_j t(|γ_j|)`, runs the discrepancy recursion on
/// `Π_n`, and checks that `δ_α = prod_i δ_{[α_i]}` for every `α`, where
/// `δ_{[k]}` is the top discrepancy of the same construction on `Π_k`.
pub fn multiplicative_delta_property<F>(t: F, n: usize) -> bool
where
    F: Fn(usize) -> BigInt,
{
    let g: Vec<BigInt> = (0..=n).map(|k| partition_sum(k, &t)).collect();
    let build = |m: usize| -> BTreeMap<SetPartition, BigInt> {
        all_partitions(m)
            .iter()
            .map(|b| {
                let v = b
                    .block_sizes()
                    .into_iter()
                    .fold(BigInt::one(), |acc, k| acc * &g[k]);
                (b.clone(), v)
            })
            .collect()
    };
    let top_delta: Vec<BigInt> = (0..=n)
        .map(|k| {
            if k == 0 {
                return BigInt::one();
            }
            let top = SetPartition::indiscrete(k);
            delta_transform(&top, &build(k)).expect("complete data")[&top].clone()
        })
        .collect();
    let delta = delta_transform(&SetPartition::indiscrete(n), &build(n)).expect("complete data");
    delta.iter().all(|(alpha, d)| {
        let product = alpha
            .block_sizes()
            .into_iter()
            .fold(BigInt::one(), |acc, k| acc * &top_delta[k]);
        *d == product
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn pt(v: i64) -> [i64; 3] {
        [v, 0, 0]
    }

    #[test]
    fn parse_and_display() {
        let a = p("3|1,2");
        assert_eq!(a.to_string(), "{{1,2},{3}}");
        assert_eq!(a.labels(), &[0, 0, 1]);
        assert!("1,1".parse::<SetPartition>().is_err());
        assert!("1|3".parse::<SetPartition>().is_err());
        assert!(SetPartition::from_blocks(2, &[vec![0], vec![]]).is_err());
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn order_examples() {
        for beta in all_partitions(4).iter() {
            assert!(SetPartition::discrete(4).leq(beta).unwrap());
            assert!(beta.leq(&SetPartition::indiscrete(4)).unwrap());
        }
        assert!(p("1|2|3").leq(&p("1,2|3")).unwrap());
        assert!(!p("1,2|3").leq(&p("1|2|3")).unwrap());
        assert!(!p("1,2|3").leq(&p("1,3|2")).unwrap());
        assert_eq!(
            p("1,2").leq(&p("1,2,3")).unwrap_err(),
            LatticeError::GroundSetMismatch(2, 3)
        );
    }

    #[test]
    fn meet_and_join_examples() {
        let a = p("1,2|3,4");
        assert_eq!(a.meet(&a).unwrap(), a);
        assert_eq!(SetPartition::indiscrete(4).meet(&a).unwrap(), a);
        assert_eq!(a.meet(&p("1,3|2,4")).unwrap(), SetPartition::discrete(4));
        assert_eq!(SetPartition::discrete(4).join(&a).unwrap(), a);
        assert_eq!(
            p("1,2|3").join(&p("2,3|1")).unwrap(),
            SetPartition::indiscrete(3)
        );
        assert!(a.join(&p("1,2")).is_err());
    }

    #[test]
    fn alpha_factorials() {
        assert_eq!(SetPartition::discrete(5).alpha_factorial(), 1);
        assert_eq!(SetPartition::indiscrete(3).alpha_factorial(), 6);
        assert_eq!(p("1,2|3,4,5").alpha_factorial(), 12);
    }

    #[test]
    fn multiplicity_examples() {
        let top = SetPartition::indiscrete(2);
        let same = PointConfig::from_ints(&[pt(1), pt(1)]);
        let apart = PointConfig::from_ints(&[pt(1), pt(2)]);
        assert_eq!(multiplicity(&top, &same).unwrap(), 2);
        assert_eq!(multiplicity(&top, &apart).unwrap(), 1);
        assert_eq!(multiplicity(&SetPartition::discrete(2), &same).unwrap(), 1);
    }

    #[test]
    fn fiber_examples() {
        let top = SetPartition::indiscrete(2);
        let same = PointConfig::from_ints(&[pt(1), pt(1)]);
        let apart = PointConfig::from_ints(&[pt(1), pt(2)]);
        assert_eq!(symmetrization_fiber(&top, &same).unwrap().len(), 1);
        assert_eq!(fiber_multiplicity_sum(&top, &same).unwrap(), 2);
        assert_eq!(symmetrization_fiber(&top, &apart).unwrap().len(), 2);
        assert_eq!(fiber_multiplicity_sum(&top, &apart).unwrap(), 2);
        let bottom = SetPartition::discrete(2);
        assert_eq!(
            symmetrization_fiber(&bottom, &same).unwrap(),
            vec![same.clone()]
        );
        assert_eq!(fiber_multiplicity_sum(&bottom, &same).unwrap(), 1);
    }

    #[test]
    fn discrepancy_set_examples() {
        let bottom = SetPartition::discrete(2);
        let top = SetPartition::indiscrete(2);
        let same = PointConfig::from_ints(&[pt(1), pt(1)]);
        let apart = PointConfig::from_ints(&[pt(1), pt(2)]);
        assert!(in_discrepancy_set(&bottom, &top, &same).unwrap());
        assert!(!in_discrepancy_set(&bottom, &top, &apart).unwrap());
        assert!(!in_discrepancy_set(&top, &top, &same).unwrap());
        // incomparable: {1,2}|{3} vs {1}|{2,3}, meet is discrete
        let x = PointConfig::from_ints(&[pt(0), pt(5), pt(5)]);
        assert!(in_discrepancy_set(&p("1,2|3"), &p("1|2,3"), &x).unwrap());
        let y = PointConfig::from_ints(&[pt(0), pt(5), pt(7)]);
        assert!(!in_discrepancy_set(&p("1,2|3"), &p("1|2,3"), &y).unwrap());
    }

    #[test]
    fn distance_examples() {
        let x = PointConfig::from_ints(&[[0, 0, 0], [2, 0, 0]]);
        let two = BigRational::from_integer(2.into());
        assert_eq!(
            strict_diagonal_distance_sq(&SetPartition::indiscrete(2), &x).unwrap(),
            two
        );
        assert!(strict_diagonal_distance_sq(&SetPartition::discrete(2), &x)
            .unwrap()
            .is_zero());
        let on = PointConfig::from_ints(&[[3, 1, 4], [3, 1, 4]]);
        assert!(
            strict_diagonal_distance_sq(&SetPartition::indiscrete(2), &on)
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn default_schedule_is_admissible() {
        for n in 0..=4 {
            EpsilonSchedule::default_for(n).validate().unwrap();
        }
    }

    #[test]
    fn bad_schedule_is_rejected() {
        let c = BigRational::one();
        let ratio = BigRational::from_integer(4.into());
        let flat: BTreeMap<_, _> = all_partitions(2)
            .iter()
            .map(|b| (b.clone(), BigRational::new(1.into(), 100.into())))
            .collect();
        assert!(EpsilonSchedule::from_squared(2, c, ratio, flat).is_err());
    }

    #[test]
    fn classification_examples() {
        let eps = EpsilonSchedule::default_for(3);
        let top = SetPartition::indiscrete(3);
        let far = PointConfig::from_ints(&[pt(0), pt(10), pt(20)]);
        assert_eq!(
            classify_q_set(&top, &far, &eps).unwrap(),
            SetPartition::discrete(3)
        );
        let on = PointConfig::from_ints(&[pt(4), pt(4), pt(4)]);
        assert_eq!(classify_q_set(&top, &on, &eps).unwrap(), top);

        // ε({1,2}|{3})^2 = c^2 / 32^4; pick δ^2/2 well inside it.
        let delta = BigRational::new(1.into(), BigInt::from(8 * 32 * 32 * 4));
        let zero = BigRational::zero();
        let x = PointConfig::new(vec![
            [zero.clone(), zero.clone(), zero.clone()],
            [delta, zero.clone(), zero.clone()],
            [BigRational::from_integer(10.into()), zero.clone(), zero],
        ]);
        assert_eq!(classify_q_set(&top, &x, &eps).unwrap(), p("1,2|3"));
        assert!(in_q_set(&top, &p("1,2|3"), &x, &eps).unwrap());
        assert!(!in_q_set(&top, &SetPartition::discrete(3), &x, &eps).unwrap());
    }

    #[test]
    fn ambiguous_classification_is_reported() {
        // Rank-one radii wider than the top radius: all three two-block
        // partitions are candidates and none dominates.
        let x = PointConfig::from_ints(&[pt(0), pt(1), pt(2)]);
        let eps_sq = all_partitions(3)
            .iter()
            .map(|b| {
                let v = match b.rank() {
                    0 => BigRational::new(1.into(), 1000.into()),
                    1 => BigRational::from_integer(5.into()),
                    _ => BigRational::new(1.into(), 10.into()),
                };
                (b.clone(), v)
            })
            .collect();
        let loose = EpsilonSchedule {
            n: 3,
            c: BigRational::from_integer(10.into()),
            ratio: BigRational::one(),
            eps_sq,
        };
        assert!(loose.validate().is_err());
        let err = classify_q_set(&SetPartition::indiscrete(3), &x, &loose).unwrap_err();
        assert!(matches!(err, LatticeError::InadmissibleSchedule(ref m) if m.len() == 3));

        // a huge geometric schedule swallows the configuration into Λ
        let wide = EpsilonSchedule::geometric(
            3,
            BigRational::from_integer(100.into()),
            BigRational::from_integer(2.into()),
        );
        assert_eq!(
            classify_q_set(&SetPartition::indiscrete(3), &x, &wide).unwrap(),
            SetPartition::indiscrete(3)
        );
    }

    #[test]
    fn delta_transform_examples() {
        let top = SetPartition::indiscrete(2);
        let f: BTreeMap<_, _> = all_partitions(2)
            .iter()
            .map(|b| (b.clone(), 7i64))
            .collect();
        let d = delta_transform(&top, &f).unwrap();
        assert_eq!(d[&SetPartition::discrete(2)], 7);
        assert_eq!(d[&top], 0);

        let mut missing = f.clone();
        missing.remove(&top);
        assert_eq!(
            delta_transform(&top, &missing).unwrap_err(),
            LatticeError::MissingValue(top.clone())
        );
    }

    #[test]
    fn point_mass_gives_mobius() {
        for n in 1..=6 {
            let bottom = SetPartition::discrete(n);
            let top = SetPartition::indiscrete(n);
            let f: BTreeMap<_, _> = all_partitions(n)
                .iter()
                .map(|b| {
                    (
                        b.clone(),
                        if *b == bottom {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        },
                    )
                })
                .collect();
            let d = delta_transform(&top, &f).unwrap();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let closed = BigInt::from(sign * factorial(n - 1) as i64);
            assert_eq!(d[&top], closed);
            assert_eq!(mobius(&bottom, &top).unwrap(), closed);
        }
    }

    #[test]
    fn zeta_on_pi3() {
        // F ≡ 1 on Π_3: δ(0) = 1 and every other δ vanishes.
        let top = SetPartition::indiscrete(3);
        let f: BTreeMap<_, _> = all_partitions(3)
            .iter()
            .map(|b| (b.clone(), BigInt::one()))
            .collect();
        let d = delta_transform(&top, &f).unwrap();
        for (beta, v) in &d {
            let want = if *beta == SetPartition::discrete(3) {
                1
            } else {
                0
            };
            assert_eq!(*v, BigInt::from(want));
            let via_mobius = all_partitions(3)
                .iter()
                .filter(|g| g.leq(beta).unwrap())
                .fold(BigInt::zero(), |acc, g| {
                    acc + mobius(g, beta).unwrap() * &f[g]
                });
            assert_eq!(*v, via_mobius);
        }
    }

    #[test]
    fn multiplicative_examples() {
        let t = |k: usize| BigInt::from([0, 3, -2, 5, 7][k]);
        assert!(multiplicative_delta_property(t, 2));
        assert!(multiplicative_delta_property(t, 4));
        let degenerate = |k: usize| {
            if k == 1 {
                BigInt::from(2)
            } else {
                BigInt::zero()
            }
        };
        assert!(multiplicative_delta_property(degenerate, 4));
    }

    #[test]
    fn partition_sum_small() {
        // with t ≡ 1 the sum counts partitions
        assert_eq!(
            partition_sum::<BigInt, _>(5, |_| BigInt::one()),
            BigInt::from(52)
        );
    }
}
