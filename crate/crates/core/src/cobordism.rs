//! Rational cobordism classes of threefolds over the basis
//! `Y_1 = P^3`, `Y_2 = P^2 × P^1`, `Y_3 = (P^1)^3`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::chern::{self, ChernNumbers};

/// Dimension vectors of the three generators, in basis order.
pub const GENERATOR_DIMS: [&[u32]; 3] = [&[3], &[2, 1], &[1, 1, 1]];

static GENERATORS: Lazy<[ChernNumbers; 3]> = Lazy::new(|| {
    GENERATOR_DIMS.map(|dims| {
        chern::chern_of_projective_space_product(dims).expect("generator dimensions sum to 3")
    })
});

/// Columns of the inverse generator matrix.
static INVERSE: Lazy<[[BigRational; 3]; 3]> = Lazy::new(|| {
    let a: Vec<Vec<BigRational>> = generator_matrix()
        .iter()
        .map(|row| row.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    std::array::from_fn(|col| {
        let unit: Vec<BigRational> = (0..3)
            .map(|r| {
                if r == col {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let x = solve_exact(&a, &unit).expect("generator matrix is invertible");
        [x[0].clone(), x[1].clone(), x[2].clone()]
    })
});

/// Chern numbers of the generators.
pub fn generator_chern() -> [ChernNumbers; 3] {
    GENERATORS.clone()
}

/// Rows are `(c_1^3, c_1 c_2, c_3)`, columns are `Y_1, Y_2, Y_3`.
pub fn generator_matrix() -> [[BigInt; 3]; 3] {
    let gens = &*GENERATORS;
    std::array::from_fn(|row| std::array::from_fn(|col| gens[col].as_array()[row].to_integer()))
}

/// Cofactor expansion along the first row.
pub fn determinant3(m: &[[BigInt; 3]; 3]) -> BigInt {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    &m[0][0] * minor(1, 2, 1, 2) - &m[0][1] * minor(1, 2, 0, 2) + &m[0][2] * minor(1, 2, 0, 1)
}

/// Solves `a x = b` exactly by Gauss-Jordan elimination. `None` if `a` is
/// singular.
pub fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "square system expected");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            let pivot_row = aug[col].clone();
            for (v, p) in aug[r].iter_mut().zip(&pivot_row).skip(col) {
                *v -= &factor * p;
            }
        }
    }
    Some(
        aug.into_iter()
            .map(|mut r| r.pop().expect("augmented column"))
            .collect(),
    )
}

/// `X ~ r_1 Y_1 + r_2 Y_2 + r_3 Y_3` with `m` the least common denominator
/// of the `r_i`, so that `m X ~ m_1 Y_1 + m_2 Y_2 + m_3 Y_3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismDecomposition {
    pub coefficients: [BigRational; 3],
    pub denominator: BigInt,
}

impl CobordismDecomposition {
    /// The integers `m_i = m r_i`.
    pub fn integer_multiples(&self) -> [BigInt; 3] {
        self.coefficients
            .each_ref()
            .map(|r| (r * BigRational::from_integer(self.denominator.clone())).to_integer())
    }

    /// `sum r_i C(Y_i)`.
    pub fn reconstruct(&self) -> ChernNumbers {
        GENERATORS
            .iter()
            .zip(&self.coefficients)
            .fold(ChernNumbers::empty(), |acc, (g, r)| acc.add(&g.scale(r)))
    }
}

impl fmt::Display for CobordismDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coefficients;
        write!(f, "({a}, {b}, {c}), m = {}", self.denominator)
    }
}

pub fn decompose(c: &ChernNumbers) -> CobordismDecomposition {
    let b = c.as_array();
    let x: [BigRational; 3] = std::array::from_fn(|i| {
        (0..3).fold(BigRational::zero(), |acc, col| {
            acc + &INVERSE[col][i] * b[col]
        })
    });
    let denominator = x
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
        .abs();
    CobordismDecomposition {
        coefficients: x,
        denominator,
    }
}

/// Both sides of `m c_3(T_X ⊗ K_X) = sum m_i c_3(T_{Y_i} ⊗ K_{Y_i})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentIdentity {
    pub decomposition: CobordismDecomposition,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl ExponentIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn verify_exponent_identity(c: &ChernNumbers) -> ExponentIdentity {
    let decomposition = decompose(c);
    let m = BigRational::from_integer(decomposition.denominator.clone());
    let lhs = &m * chern::twist_exponent(c);
    let rhs = GENERATORS
        .iter()
        .zip(decomposition.integer_multiples())
        .map(|(g, mi)| BigRational::from_integer(mi) * chern::twist_exponent(g))
        .fold(BigRational::zero(), |acc, v| acc + v);
    ExponentIdentity {
        decomposition,
        lhs,
        rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn matrix_and_determinant() {
        let m = generator_matrix();
        let as_i64: Vec<Vec<i64>> = m
            .iter()
            .map(|row| row.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect();
        assert_eq!(
            as_i64,
            vec![vec![64, 54, 48], vec![24, 24, 24], vec![4, 6, 8]]
        );
        assert_eq!(determinant3(&m), BigInt::from(192));
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(&ChernNumbers::new(64, 24, 4));
        assert_eq!(d.coefficients, [r(1), r(0), r(0)]);
        assert_eq!(d.denominator, BigInt::one());

        let d = decompose(&ChernNumbers::new(118, 48, 10));
        assert_eq!(d.coefficients, [r(1), r(1), r(0)]);

        let d = decompose(&ChernNumbers::new(0, 0, -200));
        assert_eq!(d.coefficients, [r(-150), r(400), r(-250)]);
        assert_eq!(d.denominator, BigInt::one());
        assert_eq!(d.reconstruct(), ChernNumbers::new(0, 0, -200));
    }

    #[test]
    fn fractional_decomposition_reports_lcm() {
        // (1,0,0) in Chern coordinates is not an integral combination
        let d = decompose(&ChernNumbers::new(1, 0, 0));
        assert!(d.denominator > BigInt::one());
        assert_eq!(d.reconstruct(), ChernNumbers::new(1, 0, 0));
        for (mi, ri) in d.integer_multiples().iter().zip(&d.coefficients) {
            assert_eq!(
                BigRational::from_integer(mi.clone()),
                ri * BigRational::from_integer(d.denominator.clone())
            );
        }
    }

    #[test]
    fn exponent_identity_on_quintic() {
        let id = verify_exponent_identity(&ChernNumbers::new(0, 0, -200));
        assert!(id.holds());
        assert_eq!(id.lhs, r(-200));
        for g in generator_chern() {
            assert!(verify_exponent_identity(&g).holds());
        }
    }

    #[test]
    fn singular_systems_are_detected() {
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        assert!(solve_exact(&a, &[r(1), r(2)]).is_none());
    }
}
