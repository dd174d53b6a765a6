//! Zero-dimensional DT series `M(-q)^{c_3(T ⊗ K)}` and the algebraic
//! checks around them: multiplicativity over disjoint unions, recovery by
//! `m`-th roots, and the exponential-formula decomposition of the
//! coefficients over set-partition lattices.
//!
//! The discrepancy degrees `t_k` are identified with the top-diagonal terms
//! through the exponential formula `n! f_n = sum_{α ∈ Π_n} prod t_{|α_i|}`.
//! That identification is structural: nothing here constructs the geometric
//! cycles themselves.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chern::{self, ChernError, ChernNumbers, ThreefoldSpec};
use crate::cobordism;
use crate::exec::Execution;
use crate::lattice::{self, SetPartition};
use crate::macmahon;
use crate::series::{SeriesError, TruncatedSeries};

pub const DEFAULT_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DtError {
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("not an honest threefold (Chern numbers {0}); use dt_rational_power")]
    NotIntegral(Box<ChernNumbers>),
    #[error("coefficient q^{index} of the DT series is not an integer: {value}")]
    NonIntegralCoefficient { index: usize, value: BigRational },
    #[error("discrepancy degree t_{k} = {value} is not an integer")]
    NonIntegralDiscrepancy { k: usize, value: BigRational },
    #[error("exponent {0} does not fit in a machine integer")]
    ExponentOverflow(BigInt),
}

/// `DT_{X,0}(q)` truncated at some order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtSeries {
    pub series: TruncatedSeries,
    pub exponent: BigInt,
    pub chern: ChernNumbers,
    pub source: ThreefoldSpec,
}

impl DtSeries {
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.series.to_integers().expect("DT series are integral")
    }
}

fn integral_exponent(c: &ChernNumbers) -> Result<BigInt, DtError> {
    if !c.is_integral() {
        return Err(DtError::NotIntegral(Box::new(c.clone())));
    }
    let k = chern::twist_exponent(c);
    debug_assert!(k.is_integer());
    Ok(k.to_integer())
}

/// `M(-q)^K` for an integer `K`.
pub fn macmahon_power(exponent: &BigInt, order: usize) -> TruncatedSeries {
    macmahon::macmahon_neg(order)
        .big_pow(exponent)
        .expect("M(-q) is a unit")
}

pub fn dt_series(spec: &ThreefoldSpec, order: usize) -> Result<DtSeries, DtError> {
    let chern = spec.resolve()?;
    let exponent = integral_exponent(&chern)?;
    let series = macmahon_power(&exponent, order);
    if let Some((index, value)) = series
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| !c.is_integer())
    {
        return Err(DtError::NonIntegralCoefficient {
            index,
            value: value.clone(),
        });
    }
    Ok(DtSeries {
        series,
        exponent,
        chern,
        source: spec.clone(),
    })
}

/// `M(-q)^r` for the rational exponent `r = c_3(T ⊗ K)` of a formal
/// cobordism combination, as `exp(r log M(-q))`. Coefficients are rational.
pub fn dt_rational_power(spec: &ThreefoldSpec, order: usize) -> Result<TruncatedSeries, DtError> {
    let chern = spec.resolve()?;
    let r = chern::twist_exponent(&chern);
    let log = macmahon::macmahon_neg(order).log1()?;
    Ok(log.scale(&r).exp0()?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativityReport {
    pub union: TruncatedSeries,
    pub product: TruncatedSeries,
}

impl MultiplicativityReport {
    pub fn holds(&self) -> bool {
        self.union == self.product
    }
}

/// `DT_{A ⊔ B} = DT_A · DT_B`.
pub fn verify_multiplicativity(
    a: &ThreefoldSpec,
    b: &ThreefoldSpec,
    order: usize,
) -> Result<MultiplicativityReport, DtError> {
    let union = ThreefoldSpec::DisjointUnion(vec![a.clone(), b.clone()]);
    let union = dt_series(&union, order)?.series;
    let product = dt_series(a, order)?
        .series
        .mul(&dt_series(b, order)?.series)?;
    Ok(MultiplicativityReport { union, product })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub m: u32,
    pub root: TruncatedSeries,
    pub expected: TruncatedSeries,
    pub integral: bool,
}

impl RootReport {
    pub fn holds(&self) -> bool {
        self.integral && self.root == self.expected
    }
}

/// Raises the DT series to the `m`-th power and takes the unique root with
/// constant term 1 back.
pub fn verify_root_argument(
    spec: &ThreefoldSpec,
    m: u32,
    order: usize,
) -> Result<RootReport, DtError> {
    let dt = dt_series(spec, order)?;
    let power = dt.series.int_pow(i64::from(m))?;
    let root = power.root_m(m)?;
    Ok(RootReport {
        m,
        root: root.root,
        expected: dt.series,
        integral: root.integral,
    })
}

/// The closing argument run through the cobordism basis: with
/// `m X ~ sum m_i Y_i`, form `prod DT_{Y_i}^{m_i}` and extract its `m`-th root.
pub fn verify_cobordism_root(spec: &ThreefoldSpec, order: usize) -> Result<RootReport, DtError> {
    let dt = dt_series(spec, order)?;
    let decomposition = cobordism::decompose(&dt.chern);
    let mut power = TruncatedSeries::one(order);
    for (gen, mi) in cobordism::generator_chern()
        .iter()
        .zip(decomposition.integer_multiples())
    {
        let gen_dt = dt_series(&ThreefoldSpec::Explicit(gen.clone()), order)?;
        power = power.mul(&gen_dt.series.big_pow(&mi)?)?;
    }
    let m = u32::try_from(&decomposition.denominator)
        .map_err(|_| DtError::ExponentOverflow(decomposition.denominator.clone()))?;
    let root = power.root_m(m)?;
    Ok(RootReport {
        m,
        root: root.root,
        expected: dt.series,
        integral: root.integral,
    })
}

/// `t_1..=t_{n_max}` with `t_k = k! [q^k] log DT_X(q)`, the unique sequence
/// satisfying `n! f_n = sum_{α ∈ Π_n} prod t_{|α_i|}`.
pub fn discrepancy_degrees(spec: &ThreefoldSpec, n_max: usize) -> Result<Vec<BigInt>, DtError> {
    let dt = dt_series(spec, n_max)?;
    let log = dt.series.log1()?;
    (1..=n_max)
        .map(|k| {
            let v = log.coeff(k) * BigRational::from_integer(BigInt::from(lattice::factorial(k)));
            if v.is_integer() {
                Ok(v.to_integer())
            } else {
                Err(DtError::NonIntegralDiscrepancy { k, value: v })
            }
        })
        .collect()
}

/// `f_0..=f_{n_max}` rebuilt from `t_1..` by summing over each lattice:
/// the per-partition weights `prod t_{|α_i|}` are pushed through the
/// lattice summation transform and the top value divided by `n!`.
pub fn exponential_formula_coefficients(t: &[BigInt], n_max: usize) -> Vec<BigRational> {
    assert!(t.len() >= n_max, "need t_1..t_{n_max}");
    let mut out = vec![BigRational::one()];
    for n in 1..=n_max {
        let top = SetPartition::indiscrete(n);
        let weights: BTreeMap<SetPartition, BigInt> = lattice::all_partitions(n)
            .iter()
            .map(|a| {
                let w = a
                    .block_sizes()
                    .into_iter()
                    .fold(BigInt::one(), |acc, k| acc * &t[k - 1]);
                (a.clone(), w)
            })
            .collect();
        let sums = lattice::summation_transform(&top, &weights).expect("complete weights");
        out.push(BigRational::new(
            sums[&top].clone(),
            BigInt::from(lattice::factorial(n)),
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityEntry {
    pub spec: ThreefoldSpec,
    pub exponent: BigInt,
    pub t: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    /// `λ_k = t_k / K`, taken from the first spec with `K ≠ 0`.
    pub lambdas: Vec<Option<BigRational>>,
    /// `k! ℓ_k` from the MacMahon logarithm.
    pub expected_lambdas: Vec<BigRational>,
    pub entries: Vec<UniversalityEntry>,
    /// First `(spec index, k)` where `t_k ≠ λ_k K`.
    pub violation: Option<(usize, usize)>,
}

impl UniversalityReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
            && self
                .lambdas
                .iter()
                .zip(&self.expected_lambdas)
                .all(|(l, e)| l.as_ref().is_none_or(|l| l == e))
    }
}

/// Checks that `t_k = λ_k · K` with `λ_k` independent of the threefold.
pub fn verify_universality(
    specs: &[ThreefoldSpec],
    n_max: usize,
) -> Result<UniversalityReport, DtError> {
    verify_universality_with(specs, n_max, Execution::default())
}

pub fn verify_universality_with(
    specs: &[ThreefoldSpec],
    n_max: usize,
    exec: Execution,
) -> Result<UniversalityReport, DtError> {
    let entries = exec
        .map(specs, |spec| -> Result<UniversalityEntry, DtError> {
            let exponent = integral_exponent(&spec.resolve()?)?;
            let t = discrepancy_degrees(spec, n_max)?;
            Ok(UniversalityEntry {
                spec: spec.clone(),
                exponent,
                t,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let reference = entries.iter().find(|e| !e.exponent.is_zero());
    let lambdas: Vec<Option<BigRational>> = (0..n_max)
        .map(|i| reference.map(|e| BigRational::new(e.t[i].clone(), e.exponent.clone())))
        .collect();
    let expected_lambdas: Vec<BigRational> = macmahon::log_macmahon_neg_closed_form(n_max)
        .into_iter()
        .enumerate()
        .map(|(i, l)| l * BigRational::from_integer(BigInt::from(lattice::factorial(i + 1))))
        .collect();

    let mut violation = None;
    'outer: for (si, e) in entries.iter().enumerate() {
        let k = BigRational::from_integer(e.exponent.clone());
        for (i, (lambda, t)) in lambdas.iter().zip(&e.t).enumerate() {
            let predicted = match lambda {
                Some(l) => l * &k,
                None => BigRational::zero(),
            };
            if BigRational::from_integer(t.clone()) != predicted {
                violation = Some((si, i + 1));
                break 'outer;
            }
        }
    }
    Ok(UniversalityReport {
        lambdas,
        expected_lambdas,
        entries,
        violation,
    })
}

/// The four threefolds used throughout: `P^3`, `P^2 × P^1`, `(P^1)^3` and
/// the quintic.
pub fn catalog() -> Vec<ThreefoldSpec> {
    chern::BuiltinThreefold::ALL
        .into_iter()
        .map(ThreefoldSpec::Builtin)
        .collect()
}
