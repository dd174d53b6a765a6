//! Chern numbers of threefolds.
//!
//! Everything here is computed symbolically in small truncated polynomial
//! rings: total Chern classes are expanded, split into graded pieces and
//! "integrated" by reading off the coefficient of the top monomial. The
//! twist exponent `c_3(T ⊗ K)` is obtained by expanding `prod (a_i - c_1)`
//! over Chern roots and rewriting it in elementary symmetric polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use thiserror::Error;

use crate::poly::{self, Poly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("dimensions {0:?} must be positive and sum to 3")]
    InvalidProductDims(Vec<u32>),
    #[error("hypersurface degree must be positive, got {0}")]
    InvalidDegree(i64),
    #[error("unknown builtin threefold {0:?}")]
    UnknownBuiltin(String),
    #[error("monomial {0:?} is not a degree-3 Chern monomial")]
    UnexpectedMonomial(Vec<u32>),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `(c_1^3, c_1 c_2, c_3)` evaluated on the fundamental class.
///
/// Fields are rational so that formal cobordism combinations such as
/// `1/2 · X` can be represented; see [`ChernNumbers::is_integral`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernNumbers {
    pub c111: BigRational,
    pub c12: BigRational,
    pub c3: BigRational,
}

impl ChernNumbers {
    pub fn new(c111: i64, c12: i64, c3: i64) -> Self {
        Self {
            c111: rat(c111),
            c12: rat(c12),
            c3: rat(c3),
        }
    }

    pub fn from_rationals(c111: BigRational, c12: BigRational, c3: BigRational) -> Self {
        Self { c111, c12, c3 }
    }

    pub fn empty() -> Self {
        Self::new(0, 0, 0)
    }

    /// True when all three numbers are integers, as for an honest manifold.
    pub fn is_integral(&self) -> bool {
        self.c111.is_integer() && self.c12.is_integer() && self.c3.is_integer()
    }

    pub fn as_array(&self) -> [&BigRational; 3] {
        [&self.c111, &self.c12, &self.c3]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            c111: &self.c111 + &other.c111,
            c12: &self.c12 + &other.c12,
            c3: &self.c3 + &other.c3,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            c111: &self.c111 * r,
            c12: &self.c12 * r,
            c3: &self.c3 * r,
        }
    }

    /// For compact complex threefolds `c_1 c_2 / 24 = χ(O_X)` is an integer.
    /// Returns a diagnostic when an integral triple violates this; rational
    /// cobordism combinations are allowed to.
    pub fn todd_warning(&self) -> Option<String> {
        if !self.is_integral() {
            return None;
        }
        let c12 = self.c12.to_integer();
        (c12.clone() % BigInt::from(24) != BigInt::zero())
            .then(|| format!("c1c2 = {c12} is not divisible by 24; not the Chern data of a compact complex threefold"))
    }

    /// Value of the Chern monomial `c_1^i c_2^j c_3^k` with `i + 2j + 3k = 3`.
    pub fn monomial(&self, exps: &[u32]) -> Result<&BigRational, ChernError> {
        match exps {
            [3, 0, 0] => Ok(&self.c111),
            [1, 1, 0] => Ok(&self.c12),
            [0, 0, 1] => Ok(&self.c3),
            _ => Err(ChernError::UnexpectedMonomial(exps.to_vec())),
        }
    }
}

impl fmt::Display for ChernNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c111, self.c12, self.c3)
    }
}

/// `c_3(T ⊗ K)` as a polynomial in `c_1, c_2, c_3` (keys are exponent
/// vectors of `c_1^i c_2^j c_3^k`).
///
/// The tangent bundle has Chern roots `a_1, a_2, a_3` and `c_1(K) = -c_1`,
/// so the twisted bundle has roots `a_i - c_1` and top Chern class
/// `prod (a_i - (a_1 + a_2 + a_3))`.
pub fn twist_polynomial() -> &'static BTreeMap<Vec<u32>, BigRational> {
    static TWIST: Lazy<BTreeMap<Vec<u32>, BigRational>> = Lazy::new(|| {
        let ring = Ring::free(3);
        let c1 = poly::elementary_symmetric(&ring, 1);
        let top = (0..3).fold(Poly::one(&ring), |acc, i| {
            acc.mul(&Poly::var(&ring, i).sub(&c1))
        });
        poly::to_elementary(&top).expect("the twisted top Chern class is symmetric in the roots")
    });
    &TWIST
}

/// `c_3(T_X ⊗ K_X)·[X]`.
pub fn twist_exponent(c: &ChernNumbers) -> BigRational {
    twist_polynomial()
        .iter()
        .map(|(exps, coeff)| coeff * c.monomial(exps).expect("degree-3 expansion"))
        .fold(BigRational::zero(), |acc, v| acc + v)
}

fn integrate_top(total: &Poly, functional: impl Fn(&[u32]) -> BigRational) -> ChernNumbers {
    let c1 = total.homogeneous(1);
    let c2 = total.homogeneous(2);
    let c3 = total.homogeneous(3);
    let eval = |p: &Poly| {
        p.terms()
            .map(|(exps, coeff)| coeff * functional(exps))
            .fold(BigRational::zero(), |acc, v| acc + v)
    };
    ChernNumbers {
        c111: eval(&c1.pow(3)),
        c12: eval(&c1.mul(&c2)),
        c3: eval(&c3),
    }
}

/// Chern numbers of `P^{d_1} × .. × P^{d_k}` with `sum d_i = 3`, from
/// `prod (1 + h_i)^{d_i + 1}` in `prod Q[h_i]/(h_i^{d_i + 1})`.
pub fn chern_of_projective_space_product(dims: &[u32]) -> Result<ChernNumbers, ChernError> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().sum::<u32>() != 3 {
        return Err(ChernError::InvalidProductDims(dims.to_vec()));
    }
    let ring = Ring::new(dims.to_vec(), vec![1; dims.len()]);
    let total = dims
        .iter()
        .enumerate()
        .fold(Poly::one(&ring), |acc, (i, &d)| {
            acc.mul(&Poly::one(&ring).add(&Poly::var(&ring, i)).pow(d + 1))
        });
    let point = dims.to_vec();
    Ok(integrate_top(&total, |exps| {
        if exps == point.as_slice() {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }))
}

/// Chern numbers of a smooth degree-`d` hypersurface in `P^4`:
/// `c(X) = (1 + h)^5 / (1 + d h)` mod `h^4`, with `∫_X h^3 = d`.
pub fn chern_of_hypersurface(degree: i64) -> Result<ChernNumbers, ChernError> {
    if degree < 1 {
        return Err(ChernError::InvalidDegree(degree));
    }
    let ring = Ring::new(vec![3], vec![1]);
    let h = Poly::var(&ring, 0);
    let one = Poly::one(&ring);
    let normal = one.add(&h.scale(&rat(degree)));
    let total = one.add(&h).pow(5).mul(&normal.inverse_unipotent(3));
    Ok(integrate_top(&total, |exps| {
        if exps == [3] {
            rat(degree)
        } else {
            BigRational::zero()
        }
    }))
}

/// Chern numbers of a surface: `c_1^2` and `c_2` (the Euler number).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SurfaceChern {
    pub c11: i64,
    pub c2: i64,
}

/// Chern numbers of `S × C` for a surface `S` and a curve of genus `g`,
/// from `c(S × C) = c(S) c(C)` with `c(C) = 1 + (2 - 2g) p`.
pub fn chern_of_surface_times_curve(surface: &SurfaceChern, genus: u32) -> ChernNumbers {
    // generators: u = c_1(S) (deg 1), v = c_2(S) (deg 2), p = point of C (deg 1)
    let ring = Ring::new(vec![u32::MAX, u32::MAX, 1], vec![1, 2, 1]);
    let u = Poly::var(&ring, 0);
    let v = Poly::var(&ring, 1);
    let p = Poly::var(&ring, 2);
    let euler_c = rat(2 - 2 * i64::from(genus));
    let cs = Poly::one(&ring).add(&u).add(&v);
    let cc = Poly::one(&ring).add(&p.scale(&euler_c));
    let total = cs.mul(&cc);
    let (c11, c2) = (rat(surface.c11), rat(surface.c2));
    integrate_top(&total, |exps| match exps {
        [2, 0, 1] => c11.clone(),
        [0, 1, 1] => c2.clone(),
        _ => BigRational::zero(),
    })
}

pub fn chern_disjoint_union(a: &ChernNumbers, b: &ChernNumbers) -> ChernNumbers {
    a.add(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BuiltinThreefold {
    P3,
    P2xP1,
    P1xP1xP1,
    Quintic,
}

impl BuiltinThreefold {
    pub const ALL: [BuiltinThreefold; 4] = [Self::P3, Self::P2xP1, Self::P1xP1xP1, Self::Quintic];

    pub fn name(self) -> &'static str {
        match self {
            Self::P3 => "P3",
            Self::P2xP1 => "P2xP1",
            Self::P1xP1xP1 => "P1xP1xP1",
            Self::Quintic => "quintic",
        }
    }

    pub fn chern(self) -> ChernNumbers {
        match self {
            Self::P3 => chern_of_projective_space_product(&[3]),
            Self::P2xP1 => chern_of_projective_space_product(&[2, 1]),
            Self::P1xP1xP1 => chern_of_projective_space_product(&[1, 1, 1]),
            Self::Quintic => chern_of_hypersurface(5),
        }
        .expect("builtin data is valid")
    }
}

impl FromStr for BuiltinThreefold {
    type Err = ChernError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| ChernError::UnknownBuiltin(s.to_string()))
    }
}

impl fmt::Display for BuiltinThreefold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A threefold, or a formal combination of threefolds, that resolves to
/// Chern numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreefoldSpec {
    Builtin(BuiltinThreefold),
    Explicit(ChernNumbers),
    Product {
        surface: SurfaceChern,
        curve_genus: u32,
    },
    Hypersurface {
        degree: i64,
    },
    DisjointUnion(Vec<ThreefoldSpec>),
    Scaled {
        factor: BigRational,
        spec: Box<ThreefoldSpec>,
    },
}

impl ThreefoldSpec {
    pub fn resolve(&self) -> Result<ChernNumbers, ChernError> {
        match self {
            Self::Builtin(b) => Ok(b.chern()),
            Self::Explicit(c) => Ok(c.clone()),
            Self::Product {
                surface,
                curve_genus,
            } => Ok(chern_of_surface_times_curve(surface, *curve_genus)),
            Self::Hypersurface { degree } => chern_of_hypersurface(*degree),
            Self::DisjointUnion(parts) => parts.iter().try_fold(ChernNumbers::empty(), |acc, p| {
                Ok(chern_disjoint_union(&acc, &p.resolve()?))
            }),
            Self::Scaled { factor, spec } => Ok(spec.resolve()?.scale(factor)),
        }
    }
}

impl fmt::Display for ThreefoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Builtin(b) => write!(f, "{b}"),
            Self::Explicit(c) => write!(f, "chern{c}"),
            Self::Product {
                surface,
                curve_genus,
            } => {
                write!(
                    f,
                    "S(c1^2={}, c2={}) x C(g={curve_genus})",
                    surface.c11, surface.c2
                )
            }
            Self::Hypersurface { degree } => write!(f, "X_{degree} in P4"),
            Self::DisjointUnion(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Self::Scaled { factor, spec } => write!(f, "{factor}*{spec}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_expansion_is_c3_minus_c1c2() {
        let t = twist_polynomial();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&vec![0, 0, 1]], rat(1));
        assert_eq!(t[&vec![1, 1, 0]], rat(-1));
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist_exponent(&ChernNumbers::new(64, 24, 4)), rat(-20));
        assert_eq!(twist_exponent(&ChernNumbers::new(0, 0, -200)), rat(-200));
        assert_eq!(twist_exponent(&ChernNumbers::new(48, 24, 8)), rat(-16));
    }

    #[test]
    fn projective_products() {
        assert_eq!(
            chern_of_projective_space_product(&[3]).unwrap(),
            ChernNumbers::new(64, 24, 4)
        );
        assert_eq!(
            chern_of_projective_space_product(&[2, 1]).unwrap(),
            ChernNumbers::new(54, 24, 6)
        );
        assert_eq!(
            chern_of_projective_space_product(&[1, 2]).unwrap(),
            ChernNumbers::new(54, 24, 6)
        );
        assert_eq!(
            chern_of_projective_space_product(&[1, 1, 1]).unwrap(),
            ChernNumbers::new(48, 24, 8)
        );
        assert!(chern_of_projective_space_product(&[2, 2]).is_err());
        assert!(chern_of_projective_space_product(&[3, 0]).is_err());
        assert!(chern_of_projective_space_product(&[]).is_err());
    }

    #[test]
    fn hypersurfaces() {
        assert_eq!(
            chern_of_hypersurface(5).unwrap(),
            ChernNumbers::new(0, 0, -200)
        );
        assert_eq!(
            chern_of_hypersurface(1).unwrap(),
            chern_of_projective_space_product(&[3]).unwrap()
        );
        // quadric: c = 1 + 3h + 4h^2 + 2h^3, ∫h^3 = 2
        assert_eq!(
            chern_of_hypersurface(2).unwrap(),
            ChernNumbers::new(54, 24, 4)
        );
        // cubic: c = 1 + 2h + 4h^2 - 2h^3, ∫h^3 = 3; b_3 = 10 gives χ = -6
        assert_eq!(
            chern_of_hypersurface(3).unwrap(),
            ChernNumbers::new(24, 24, -6)
        );
        assert_eq!(
            chern_of_hypersurface(0).unwrap_err(),
            ChernError::InvalidDegree(0)
        );
    }

    #[test]
    fn surface_times_curve() {
        // P^2 x P^1 through the product constructor
        let p2 = SurfaceChern { c11: 9, c2: 3 };
        assert_eq!(
            chern_of_surface_times_curve(&p2, 0),
            ChernNumbers::new(54, 24, 6)
        );
        // P^1 x P^1 x P^1
        let q = SurfaceChern { c11: 8, c2: 4 };
        assert_eq!(
            chern_of_surface_times_curve(&q, 0),
            ChernNumbers::new(48, 24, 8)
        );
        // K3 x elliptic curve is Calabi-Yau with c3 = 0
        let k3 = SurfaceChern { c11: 0, c2: 24 };
        assert_eq!(
            chern_of_surface_times_curve(&k3, 1),
            ChernNumbers::new(0, 0, 0)
        );
        // c3 is multiplicative in Euler characteristics
        let c = chern_of_surface_times_curve(&p2, 3);
        assert_eq!(c.c3, rat(3 * (2 - 6)));
    }

    #[test]
    fn disjoint_union_adds() {
        let a = ChernNumbers::new(64, 24, 4);
        let b = ChernNumbers::new(54, 24, 6);
        assert_eq!(chern_disjoint_union(&a, &b), ChernNumbers::new(118, 48, 10));
        assert_eq!(chern_disjoint_union(&a, &ChernNumbers::empty()), a);
        assert_eq!(
            twist_exponent(&chern_disjoint_union(&a, &b)),
            twist_exponent(&a) + twist_exponent(&b)
        );
    }

    #[test]
    fn spec_resolution() {
        let u = ThreefoldSpec::DisjointUnion(vec![
            ThreefoldSpec::Builtin(BuiltinThreefold::P3),
            ThreefoldSpec::Hypersurface { degree: 5 },
        ]);
        assert_eq!(u.resolve().unwrap(), ChernNumbers::new(64, 24, -196));
        let half = ThreefoldSpec::Scaled {
            factor: BigRational::new(1.into(), 2.into()),
            spec: Box::new(ThreefoldSpec::Builtin(BuiltinThreefold::P2xP1)),
        };
        let c = half.resolve().unwrap();
        assert!(c.is_integral());
        let third = ThreefoldSpec::Scaled {
            factor: BigRational::new(1.into(), 3.into()),
            spec: Box::new(ThreefoldSpec::Builtin(BuiltinThreefold::P3)),
        };
        assert!(!third.resolve().unwrap().is_integral());
        assert!(ThreefoldSpec::Hypersurface { degree: -1 }
            .resolve()
            .is_err());
        assert_eq!(
            "quintic".parse::<BuiltinThreefold>().unwrap(),
            BuiltinThreefold::Quintic
        );
        assert!("P4".parse::<BuiltinThreefold>().is_err());
    }

    #[test]
    fn todd_divisibility_warning() {
        assert!(ChernNumbers::new(64, 24, 4).todd_warning().is_none());
        assert!(ChernNumbers::new(1, 2, 3).todd_warning().is_some());
    }
}
