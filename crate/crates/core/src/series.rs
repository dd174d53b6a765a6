//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` carries the coefficients of
//! `q^0..=q^N`. Every operation is exact and returns a fresh value; mixing
//! series of different orders is an error rather than a silent re-truncation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("constant term must be 1, found {0}")]
    ConstantTermNotOne(BigRational),
    #[error("constant term must be 0, found {0}")]
    ConstantTermNotZero(BigRational),
    #[error("root index must be positive")]
    ZeroRootIndex,
}

/// A power series `c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

/// Result of [`TruncatedSeries::root_m`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub root: TruncatedSeries,
    /// Whether every coefficient of `root` is an integer.
    pub integral: bool,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl TruncatedSeries {
    /// Builds a series from exactly `order + 1` coefficients.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a truncated series has at least one coefficient"
        );
        Self { coeffs }
    }

    /// Builds a series from integer coefficients.
    pub fn from_ints<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Pads (with zeros) or truncates `coeffs` to the given order.
    pub fn with_order(coeffs: &[BigRational], order: usize) -> Self {
        let mut c: Vec<BigRational> = coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, BigRational::zero());
        Self { coeffs: c }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigRational::one())
    }

    /// `c q^k`, or zero when `k > order`.
    pub fn monomial(order: usize, k: usize, c: BigRational) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, or `None` if any coefficient is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// The substitution `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let inv0 = a0.recip();
        let n = self.order();
        let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
        b.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            b.push(-(acc * &inv0));
        }
        Ok(Self { coeffs: b })
    }

    /// `self^e` by square-and-multiply; negative exponents go through
    /// [`inverse`](Self::inverse).
    pub fn int_pow(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_unsigned(e.unsigned_abs()))
    }

    /// `self^e` for a big-integer exponent.
    pub fn big_pow(&self, e: &BigInt) -> Result<Self, SeriesError> {
        let base = if e.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut exp = e.abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        let two = BigInt::from(2);
        while !exp.is_zero() {
            if exp.is_odd() {
                acc = acc.mul_unchecked(&sq);
            }
            exp /= &two;
            if !exp.is_zero() {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.order());
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        acc
    }

    /// `log(self)` for a series with constant term 1.
    ///
    /// Uses the recurrence from `a * b' = a'` with `b = log a`:
    /// `k b_k = k a_k - sum_{j=1}^{k-1} j b_j a_{k-j}`.
    pub fn log1(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne(self.coeffs[0].clone()));
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut b = vec![BigRational::zero(); n + 1];
        for k in 1..=n {
            let mut acc = &a[k] * rat(k as i64);
            for j in 1..k {
                if !b[j].is_zero() && !a[k - j].is_zero() {
                    acc -= &b[j] * &a[k - j] * rat(j as i64);
                }
            }
            b[k] = acc / rat(k as i64);
        }
        Ok(Self { coeffs: b })
    }

    /// `exp(self)` for a series with constant term 0.
    ///
    /// Uses `b' = a' b`: `k b_k = sum_{j=1}^{k} j a_j b_{k-j}`.
    pub fn exp0(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ConstantTermNotZero(self.coeffs[0].clone()));
        }
        let n = self.order();
        let a = &self.coeffs;
        let mut b = vec![BigRational::zero(); n + 1];
        b[0] = BigRational::one();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !a[j].is_zero() && !b[k - j].is_zero() {
                    acc += &a[j] * &b[k - j] * rat(j as i64);
                }
            }
            b[k] = acc / rat(k as i64);
        }
        Ok(Self { coeffs: b })
    }

    /// The unique `b` with `b_0 = 1` and `b^m = self`.
    ///
    /// `b = a^{1/m}` satisfies `m a b' = a' b`, which is triangular in the
    /// unknown coefficients:
    /// `m k b_k = sum_{j=1}^{k} (j - m (k - j)) a_j b_{k-j}` (with `a_0 = 1`).
    pub fn root_m(&self, m: u32) -> Result<Root, SeriesError> {
        if m == 0 {
            return Err(SeriesError::ZeroRootIndex);
        }
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne(self.coeffs[0].clone()));
        }
        let n = self.order();
        let a = &self.coeffs;
        let m = i64::from(m);
        let mut b = vec![BigRational::zero(); n + 1];
        b[0] = BigRational::one();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if a[j].is_zero() || b[k - j].is_zero() {
                    continue;
                }
                let w = j as i64 - m * (k - j) as i64;
                acc += &a[j] * &b[k - j] * rat(w);
            }
            b[k] = acc / rat(m * k as i64);
        }
        let root = Self { coeffs: b };
        let integral = root.is_integral();
        Ok(Root { root, integral })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => f.write_str("q")?,
                1 => write!(f, "{a}*q")?,
                _ if a.is_one() => write!(f, "q^{k}")?,
                _ => write!(f, "{a}*q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_ints(c.iter().copied())
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert_eq!(s(&[1, 1, 0]).add(&s(&[1, -1, 0])).unwrap(), s(&[2, 0, 0]));
        let x = s(&[3, -2, 7]);
        assert_eq!(TruncatedSeries::zero(2).add(&x).unwrap(), x);
        assert_eq!(s(&[1, 0, 3]).add(&s(&[0, 2, 1])).unwrap(), s(&[1, 2, 4]));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let err = s(&[1, 1]).add(&s(&[1, 1, 1])).unwrap_err();
        assert_eq!(err, SeriesError::OrderMismatch { left: 1, right: 2 });
        assert!(s(&[1]).mul(&s(&[1, 1])).is_err());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(
            s(&[1, 1, 0, 0]).mul(&s(&[1, -1, 0, 0])).unwrap(),
            s(&[1, 0, -1, 0])
        );
        let x = s(&[2, 5, -1]);
        assert_eq!(x.mul(&TruncatedSeries::one(2)).unwrap(), x);
        let t = s(&[1, 1, 1]);
        assert_eq!(t.mul(&t).unwrap(), s(&[1, 2, 3]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(s(&[1, -1, 0, 0, 0]).inverse().unwrap(), s(&[1, 1, 1, 1, 1]));
        assert_eq!(s(&[1]).inverse().unwrap(), s(&[1]));
        assert_eq!(
            s(&[1, 1, 0, 0, 0]).inverse().unwrap(),
            s(&[1, -1, 1, -1, 1])
        );
        assert_eq!(s(&[0, 1]).inverse().unwrap_err(), SeriesError::NotAUnit);
        let half = s(&[2, 0]).inverse().unwrap();
        assert_eq!(half.coeff(0), &r(1, 2));
    }

    #[test]
    fn int_pow_examples() {
        assert_eq!(s(&[1, 1, 0]).int_pow(0).unwrap(), s(&[1, 0, 0]));
        assert_eq!(s(&[1, -1, 0, 0]).int_pow(-1).unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(s(&[1, 1, 0, 0, 0]).int_pow(3).unwrap(), s(&[1, 3, 3, 1, 0]));
        assert_eq!(s(&[0, 1]).int_pow(-2).unwrap_err(), SeriesError::NotAUnit);
        assert_eq!(
            s(&[1, 1, 0, 0]).big_pow(&BigInt::from(-3)).unwrap(),
            s(&[1, 1, 0, 0]).int_pow(-3).unwrap()
        );
    }

    #[test]
    fn log_examples() {
        assert_eq!(
            TruncatedSeries::one(4).log1().unwrap(),
            TruncatedSeries::zero(4)
        );
        let l = s(&[1, -1, 0, 0, 0]).log1().unwrap();
        let want: Vec<BigRational> = vec![r(0, 1), r(-1, 1), r(-1, 2), r(-1, 3), r(-1, 4)];
        assert_eq!(l.coeffs(), &want[..]);
        assert!(matches!(
            s(&[2, 1]).log1(),
            Err(SeriesError::ConstantTermNotOne(_))
        ));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            TruncatedSeries::zero(3).exp0().unwrap(),
            TruncatedSeries::one(3)
        );
        let e = s(&[0, 1, 0, 0, 0]).exp0().unwrap();
        let want: Vec<BigRational> = vec![r(1, 1), r(1, 1), r(1, 2), r(1, 6), r(1, 24)];
        assert_eq!(e.coeffs(), &want[..]);
        assert!(matches!(
            s(&[1, 1]).exp0(),
            Err(SeriesError::ConstantTermNotZero(_))
        ));
    }

    #[test]
    fn root_examples() {
        let sq = s(&[1, 1, 0, 0]).int_pow(2).unwrap();
        let root = sq.root_m(2).unwrap();
        assert_eq!(root.root, s(&[1, 1, 0, 0]));
        assert!(root.integral);

        let x = s(&[1, 4, -2, 9]);
        assert_eq!(x.root_m(1).unwrap().root, x);

        // sqrt(1 + q) has fractional coefficients
        let r2 = s(&[1, 1, 0]).root_m(2).unwrap();
        assert!(!r2.integral);
        assert_eq!(r2.root.coeff(1), &r(1, 2));
        assert_eq!(r2.root.coeff(2), &r(-1, 8));

        assert_eq!(x.root_m(0).unwrap_err(), SeriesError::ZeroRootIndex);
        assert!(s(&[2, 1]).root_m(2).is_err());
    }

    #[test]
    fn negate_variable_is_involution() {
        let x = s(&[1, 2, 3, 4]);
        assert_eq!(x.negate_variable(), s(&[1, -2, 3, -4]));
        assert_eq!(x.negate_variable().negate_variable(), x);
    }

    #[test]
    fn display() {
        assert_eq!(s(&[1, -1, 3]).to_string(), "1 - q + 3*q^2 + O(q^3)");
        assert_eq!(TruncatedSeries::zero(1).to_string(), "0 + O(q^2)");
    }
}
