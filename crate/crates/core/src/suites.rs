//! Invariant suites driven by `dtzero verify`.
//!
//! Every check reports the first counterexample it meets. Sweeps that are
//! embarrassingly parallel (exhaustive configuration enumeration, random
//! triples, random point clouds) go through [`Execution`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chern::{self, ChernNumbers};
use crate::cobordism;
use crate::dt_engine;
use crate::exec::Execution;
use crate::lattice::{self, EpsilonSchedule, PointConfig, SetPartition};
use crate::macmahon;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Macmahon,
    Lattice,
    Cobordism,
    Universality,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] =
        ["macmahon", "lattice", "cobordism", "universality", "all"];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "macmahon" => Suite::Macmahon,
            "lattice" => Suite::Lattice,
            "cobordism" => Suite::Cobordism,
            "universality" => Suite::Universality,
            "all" => Suite::All,
            _ => {
                return Err(format!(
                    "unknown suite {s:?}; expected one of {:?}",
                    Self::NAMES
                ))
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Size parameter; `None` selects each suite's default.
    pub max_n: Option<usize>,
    pub exec: Execution,
    pub seed: u64,
    /// Corrupts one product-formula coefficient in the MacMahon suite.
    pub inject_fault: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            max_n: None,
            exec: Execution::default(),
            seed: 0x5eed,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    /// `Err` carries the first counterexample.
    pub outcome: Result<(), String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Ok(()) => write!(f, "PASS {}: {}", self.suite, self.name),
            Err(e) => write!(f, "FAIL {}: {}: {}", self.suite, self.name, e),
        }
    }
}

fn check(suite: &'static str, name: impl Into<String>, outcome: Result<(), String>) -> CheckResult {
    CheckResult {
        suite,
        name: name.into(),
        outcome,
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<CheckResult> {
    match suite {
        Suite::Macmahon => macmahon_suite(opts),
        Suite::Lattice => lattice_suite(opts),
        Suite::Cobordism => cobordism_suite(opts),
        Suite::Universality => universality_suite(opts),
        Suite::All => [
            Suite::Macmahon,
            Suite::Lattice,
            Suite::Cobordism,
            Suite::Universality,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, opts))
        .collect(),
    }
}

// ---------------------------------------------------------------- macmahon

/// Compares `[q^k] M(q)` with the enumeration oracle for `k ≤ max_n`.
pub fn macmahon_oracle_check(
    max_n: usize,
    exec: Execution,
    inject_fault: bool,
) -> Result<(), String> {
    let product = macmahon::macmahon_series(max_n);
    let counts: Vec<Result<u64, String>> = {
        let ks: Vec<usize> = (0..=max_n).collect();
        exec.map(&ks, |&k| {
            macmahon::count_plane_partitions_with(
                k,
                max_n.max(macmahon::DEFAULT_ORACLE_BOUND),
                Execution::Sequential,
            )
            .map_err(|e| e.to_string())
        })
    };
    let faulty = max_n.min(3);
    for (k, count) in counts.into_iter().enumerate() {
        let count = count?;
        let mut coeff = product.coeff(k).to_integer();
        if inject_fault && k == faulty {
            coeff += 1;
        }
        if coeff != BigInt::from(count) {
            return Err(format!(
                "coefficient q^{k}: product formula {coeff} != enumeration {count}"
            ));
        }
    }
    Ok(())
}

fn macmahon_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let n = opts.max_n.unwrap_or(15);
    let positivity = macmahon::macmahon_series(n)
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| **c <= BigRational::zero())
        .map_or(Ok(()), |(k, c)| Err(format!("q^{k} has coefficient {c}")));
    vec![
        check(
            "macmahon",
            format!("product formula equals plane-partition count, n <= {n}"),
            macmahon_oracle_check(n, opts.exec, opts.inject_fault),
        ),
        check("macmahon", "coefficients positive", positivity),
        check(
            "macmahon",
            format!("log M(-q) matches (-1)^k sigma_2(k)/k, k <= {n}"),
            macmahon::log_macmahon_neg_coeffs(n)
                .map(|_| ())
                .map_err(|e| e.to_string()),
        ),
    ]
}

// ----------------------------------------------------------------- lattice

/// Bell numbers via the Bell triangle.
pub fn bell_numbers(max: usize) -> Vec<u64> {
    let mut out = vec![1u64];
    let mut row = vec![1u64];
    for _ in 0..max {
        let mut next = vec![*row.last().expect("nonempty")];
        for v in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + v);
        }
        out.push(next[0]);
        row = next;
    }
    out
}

/// All `3^n` configurations with points drawn from three fixed points.
pub fn three_point_configs(n: usize) -> Vec<PointConfig> {
    let base = [[0, 0, 0], [1, 0, 0], [0, 2, -1]];
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let pts: Vec<[i64; 3]> = (0..n)
                .map(|_| {
                    let p = base[code % 3];
                    code /= 3;
                    p
                })
                .collect();
            PointConfig::from_ints(&pts)
        })
        .collect()
}

/// `sum_{fibre} m_α = α!` for every `α ∈ Π_n` and every three-point
/// configuration.
pub fn fiber_identity_sweep(n: usize, exec: Execution) -> Result<(), String> {
    let parts = lattice::all_partitions(n);
    let configs = three_point_configs(n);
    exec.find_map_first(&configs, |x| {
        parts.iter().find_map(|alpha| {
            let sum = lattice::fiber_multiplicity_sum(alpha, x).expect("sizes agree");
            (sum != alpha.alpha_factorial()).then(|| {
                format!(
                    "α = {alpha}, x = {:?}: fibre sum {sum} != α! = {}",
                    x.points(),
                    alpha.alpha_factorial()
                )
            })
        })
    })
    .map_or(Ok(()), Err)
}

/// Meet/join idempotent, commutative, associative and absorptive on `Π_n`.
pub fn lattice_axiom_sweep(n: usize, exec: Execution) -> Result<(), String> {
    let parts = lattice::all_partitions(n);
    exec.find_map_first(&parts, |a| {
        let m = |x: &SetPartition, y: &SetPartition| x.meet(y).expect("same n");
        let j = |x: &SetPartition, y: &SetPartition| x.join(y).expect("same n");
        if m(a, a) != *a || j(a, a) != *a {
            return Some(format!("idempotence fails at {a}"));
        }
        for b in parts.iter() {
            if m(a, b) != m(b, a) || j(a, b) != j(b, a) {
                return Some(format!("commutativity fails at {a}, {b}"));
            }
            if m(a, &j(a, b)) != *a || j(a, &m(a, b)) != *a {
                return Some(format!("absorption fails at {a}, {b}"));
            }
            let meet = m(a, b);
            if !meet.leq(a).expect("same n") || !meet.leq(b).expect("same n") {
                return Some(format!("meet {meet} not below {a}, {b}"));
            }
            for c in parts.iter() {
                if m(&m(a, b), c) != m(a, &m(b, c)) || j(&j(a, b), c) != j(a, &j(b, c)) {
                    return Some(format!("associativity fails at {a}, {b}, {c}"));
                }
            }
        }
        None
    })
    .map_or(Ok(()), Err)
}

fn random_group_values(rng: &mut ChaCha8Rng, n: usize) -> BTreeMap<SetPartition, BigRational> {
    lattice::all_partitions(n)
        .iter()
        .map(|b| {
            (
                b.clone(),
                BigRational::new(rng.gen_range(-50..=50).into(), rng.gen_range(1..=7).into()),
            )
        })
        .collect()
}

/// `summation ∘ delta` and `delta ∘ summation` are identities.
pub fn delta_inverse_check(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = SetPartition::indiscrete(n);
    for trial in 0..5 {
        let f = random_group_values(&mut rng, n);
        let back = lattice::summation_transform(
            &top,
            &lattice::delta_transform(&top, &f).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        if back != f {
            return Err(format!("n = {n}, trial {trial}: summation(delta(F)) != F"));
        }
        let again = lattice::delta_transform(
            &top,
            &lattice::summation_transform(&top, &f).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        if again != f {
            return Err(format!("n = {n}, trial {trial}: delta(summation(F)) != F"));
        }
    }
    Ok(())
}

/// `δ_{1̂}` of the point mass at `0̂` equals `(-1)^{n-1} (n-1)!`.
pub fn mobius_check(n: usize) -> Result<(), String> {
    let bottom = SetPartition::discrete(n);
    let top = SetPartition::indiscrete(n);
    let f: BTreeMap<SetPartition, BigInt> = lattice::all_partitions(n)
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
    let d = lattice::delta_transform(&top, &f).map_err(|e| e.to_string())?;
    let sign: i64 = if n % 2 == 1 { 1 } else { -1 };
    let closed = BigInt::from(sign) * BigInt::from(lattice::factorial(n.saturating_sub(1)));
    if d[&top] != closed {
        return Err(format!(
            "n = {n}: δ(1̂) = {} but (-1)^(n-1)(n-1)! = {closed}",
            d[&top]
        ));
    }
    Ok(())
}

/// Random configuration clustered around distinct integer centres, with
/// offsets at the scales of the schedule's radii so that configurations
/// land near the neighbourhood boundaries.
pub fn random_near_diagonal_config(
    rng: &mut ChaCha8Rng,
    n: usize,
    eps: &EpsilonSchedule,
) -> PointConfig {
    let parts = lattice::all_partitions(n);
    let clusters = parts.choose(rng).expect("nonempty lattice").clone();
    let mut centres: Vec<[i64; 3]> = Vec::new();
    while centres.len() < clusters.num_blocks() {
        let c = [
            rng.gen_range(0..4),
            rng.gen_range(0..4),
            rng.gen_range(0..4),
        ];
        if !centres.contains(&c) {
            centres.push(c);
        }
    }
    // radii on the lattice, as plain rationals (sqrt-free: use ε^2 scaled
    // by random squares so offsets stay rational)
    let levels: Vec<BigRational> = parts.iter().map(|b| eps.eps_sq(b).clone()).collect();
    let points = (0..n)
        .map(|a| {
            let centre = centres[clusters.labels()[a]];
            let scale_sq = if rng.gen_bool(0.3) {
                BigRational::zero()
            } else {
                levels.choose(rng).expect("nonempty").clone()
            };
            // offset = s * v / 4 with v integer in [-4, 4]^3 and s a rational
            // upper bound of sqrt(scale_sq) within a factor of 2
            let s = rational_sqrt_bound(&scale_sq);
            std::array::from_fn(|axis| {
                let v = BigRational::from_integer(rng.gen_range(-4i64..=4).into());
                BigRational::from_integer(centre[axis].into())
                    + &s * v / BigRational::from_integer(4.into())
            })
        })
        .collect();
    PointConfig::new(points)
}

/// A rational `s` with `s^2 ≥ x` and `s^2 < 4x` (for `x > 0`).
fn rational_sqrt_bound(x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let two = BigRational::from_integer(2.into());
    let mut s = BigRational::one();
    while &s * &s < *x {
        s *= &two;
    }
    while (&s / &two) * (&s / &two) >= *x {
        s /= &two;
    }
    s
}

/// Random configurations: exactly one `β` per configuration, and
/// `x ∈ Δ_{β₁,ε}` forces the classification `β₂ ≥ β₁`.
pub fn q_set_sweep(max_n: usize, samples: usize, seed: u64, exec: Execution) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let schedules: Vec<EpsilonSchedule> = (0..=max_n).map(EpsilonSchedule::default_for).collect();
    let cases: Vec<(SetPartition, PointConfig)> = (0..samples)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let parts = lattice::all_partitions(n);
            let alpha = if rng.gen_bool(0.5) {
                SetPartition::indiscrete(n)
            } else {
                parts.choose(&mut rng).expect("nonempty").clone()
            };
            (
                alpha,
                random_near_diagonal_config(&mut rng, n, &schedules[n]),
            )
        })
        .collect();
    exec.find_map_first(&cases, |(alpha, x)| {
        let eps = &schedules[alpha.n()];
        let below = lattice::interval_below(alpha);
        let members: Vec<&SetPartition> = below
            .iter()
            .filter(|b| lattice::in_q_set(alpha, b, x, eps).expect("sizes agree"))
            .collect();
        if members.len() != 1 {
            return Some(format!(
                "α = {alpha}, x = {:?}: {} Q-sets contain x",
                x.points(),
                members.len()
            ));
        }
        let beta2 = match lattice::classify_q_set(alpha, x, eps) {
            Ok(b) => b,
            Err(e) => return Some(format!("α = {alpha}, x = {:?}: {e}", x.points())),
        };
        if beta2 != *members[0] {
            return Some(format!(
                "α = {alpha}: classifier {beta2} disagrees with definition {}",
                members[0]
            ));
        }
        for beta1 in &below {
            let d = lattice::strict_diagonal_distance_sq(beta1, x).expect("sizes agree");
            if d < *eps.eps_sq(beta1) && !beta1.leq(&beta2).expect("same n") {
                return Some(format!(
                    "α = {alpha}: x ∈ Δ_({beta1},ε) but classified {beta2}"
                ));
            }
        }
        None
    })
    .map_or(Ok(()), Err)
}

fn lattice_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let n = opts.max_n.unwrap_or(5);
    let bell = bell_numbers(n);
    let bell_check = (0..=n)
        .find(|&k| lattice::all_partitions(k).len() as u64 != bell[k])
        .map_or(Ok(()), |k| {
            Err(format!(
                "|Π_{k}| = {} != Bell {}",
                lattice::all_partitions(k).len(),
                bell[k]
            ))
        });
    let axioms = (1..=n.min(5)).try_for_each(|k| lattice_axiom_sweep(k, opts.exec));
    let fibres = (1..=n).try_for_each(|k| fiber_identity_sweep(k, opts.exec));
    let inverse = (1..=n.min(6)).try_for_each(|k| delta_inverse_check(k, opts.seed ^ k as u64));
    let mobius = (1..=n.min(6)).try_for_each(mobius_check);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let prod = (0..10).try_for_each(|trial| {
        let t: Vec<BigInt> = (0..=4)
            .map(|_| BigInt::from(rng.gen_range(-9..=9)))
            .collect();
        if lattice::multiplicative_delta_property(|k| t[k].clone(), n.min(4)) {
            Ok(())
        } else {
            Err(format!("trial {trial}: t = {t:?}"))
        }
    });
    let qsets = q_set_sweep(n.min(4), 500, opts.seed, opts.exec);
    vec![
        check(
            "lattice",
            format!("|Π_n| equals Bell numbers, n <= {n}"),
            bell_check,
        ),
        check("lattice", "meet/join lattice axioms", axioms),
        check(
            "lattice",
            format!("fibre multiplicity sum equals α!, n <= {n}"),
            fibres,
        ),
        check("lattice", "delta transform inverts summation", inverse),
        check("lattice", "μ(0̂,1̂) = (-1)^(n-1)(n-1)!", mobius),
        check(
            "lattice",
            "discrepancy of multiplicative data is multiplicative",
            prod,
        ),
        check("lattice", "Q-set classification is a partition", qsets),
    ]
}

// --------------------------------------------------------------- cobordism

pub fn random_chern_triples(count: usize, seed: u64) -> Vec<ChernNumbers> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            ChernNumbers::new(
                rng.gen_range(-10_000..=10_000),
                rng.gen_range(-10_000..=10_000),
                rng.gen_range(-10_000..=10_000),
            )
        })
        .collect()
}

/// Exponent identity, reconstruction and linearity over random triples.
pub fn exponent_identity_sweep(triples: &[ChernNumbers], exec: Execution) -> Result<(), String> {
    exec.find_map_first(triples, |c| {
        let id = cobordism::verify_exponent_identity(c);
        if !id.holds() {
            return Some(format!(
                "{c}: m K = {} but sum m_i K_i = {}",
                id.lhs, id.rhs
            ));
        }
        if id.decomposition.reconstruct() != *c {
            return Some(format!(
                "{c}: decomposition {} does not reconstruct",
                id.decomposition
            ));
        }
        None
    })
    .map_or(Ok(()), Err)
}

fn cobordism_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let det = cobordism::determinant3(&cobordism::generator_matrix());
    let det_check = if det == BigInt::from(192) {
        Ok(())
    } else {
        Err(format!("determinant {det}"))
    };
    let quintic = cobordism::decompose(&chern::BuiltinThreefold::Quintic.chern());
    let want = [-150, 400, -250].map(|v| BigRational::from_integer(v.into()));
    let quintic_check = if quintic.coefficients == want && quintic.denominator == BigInt::one() {
        Ok(())
    } else {
        Err(format!("quintic decomposes as {quintic}"))
    };
    let count = opts.max_n.map_or(1000, |n| n.max(1) * 200);
    let triples = random_chern_triples(count, opts.seed);
    let linear = triples.windows(2).find_map(|w| {
        let sum = cobordism::decompose(&w[0].add(&w[1]));
        let (a, b) = (cobordism::decompose(&w[0]), cobordism::decompose(&w[1]));
        let ok = (0..3).all(|i| sum.coefficients[i] == &a.coefficients[i] + &b.coefficients[i]);
        (!ok).then(|| format!("decompose not additive at {} + {}", w[0], w[1]))
    });
    vec![
        check("cobordism", "generator determinant is 192", det_check),
        check(
            "cobordism",
            "quintic = -150 Y1 + 400 Y2 - 250 Y3",
            quintic_check,
        ),
        check(
            "cobordism",
            format!("exponent identity on {count} random triples"),
            exponent_identity_sweep(&triples, opts.exec),
        ),
        check(
            "cobordism",
            "decompose is linear",
            linear.map_or(Ok(()), Err),
        ),
    ]
}

// ------------------------------------------------------------ universality

fn universality_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let n = opts.max_n.unwrap_or(7);
    let specs = dt_engine::catalog();
    let universality = dt_engine::verify_universality_with(&specs, n, opts.exec)
        .map_err(|e| e.to_string())
        .and_then(|rep| {
            if rep.holds() {
                Ok(())
            } else if let Some((si, k)) = rep.violation {
                Err(format!("t_{k} of {} is not λ_{k} K", rep.entries[si].spec))
            } else {
                Err(format!(
                    "λ = {:?} differs from k! l_k = {:?}",
                    rep.lambdas, rep.expected_lambdas
                ))
            }
        });
    let reconstruction = specs.iter().try_for_each(|spec| {
        let m = n.min(7);
        let t = dt_engine::discrepancy_degrees(spec, m).map_err(|e| e.to_string())?;
        let f = dt_engine::exponential_formula_coefficients(&t, m);
        let dt = dt_engine::dt_series(spec, m).map_err(|e| e.to_string())?;
        match f.iter().zip(dt.series.coeffs()).position(|(a, b)| a != b) {
            None => Ok(()),
            Some(k) => Err(format!(
                "{spec}: q^{k} rebuilt as {} but DT gives {}",
                f[k],
                dt.series.coeff(k)
            )),
        }
    });
    let multiplicativity = specs.iter().enumerate().try_for_each(|(i, a)| {
        specs[i..].iter().try_for_each(|b| {
            let rep = dt_engine::verify_multiplicativity(a, b, 20).map_err(|e| e.to_string())?;
            if rep.holds() {
                Ok(())
            } else {
                Err(format!("{a} ⊔ {b}"))
            }
        })
    });
    let roots = specs.iter().try_for_each(|spec| {
        [2u32, 3, 5].into_iter().try_for_each(|m| {
            let rep = dt_engine::verify_root_argument(spec, m, 15).map_err(|e| e.to_string())?;
            if rep.holds() {
                Ok(())
            } else {
                Err(format!("{spec}, m = {m}"))
            }
        })?;
        let rep = dt_engine::verify_cobordism_root(spec, 15).map_err(|e| e.to_string())?;
        if rep.holds() {
            Ok(())
        } else {
            Err(format!("{spec} via cobordism basis"))
        }
    });
    vec![
        check(
            "universality",
            format!("t_k = λ_k K across the catalog, k <= {n}"),
            universality,
        ),
        check(
            "universality",
            "exponential formula rebuilds DT coefficients",
            reconstruction,
        ),
        check(
            "universality",
            "DT of disjoint unions multiplies",
            multiplicativity,
        ),
        check(
            "universality",
            "m-th roots recover integral DT series",
            roots,
        ),
    ]
}
