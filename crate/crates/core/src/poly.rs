//! Truncated multivariate polynomials with exact rational coefficients.
//!
//! Used as a model of small cohomology rings: each generator carries a
//! (complex) degree and an optional nilpotency cap, so `Q[h]/(h^4)` is the
//! ring with one generator of degree 1 and cap 3.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Generator degrees and caps: monomials with `exp[i] > caps[i]` vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    caps: Vec<u32>,
    weights: Vec<u32>,
}

impl Ring {
    pub fn new(caps: Vec<u32>, weights: Vec<u32>) -> Self {
        assert_eq!(caps.len(), weights.len());
        Self { caps, weights }
    }

    /// `n` degree-one generators with no truncation.
    pub fn free(n: usize) -> Self {
        Self::new(vec![u32::MAX; n], vec![1; n])
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    fn admits(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    fn degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Self {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, c: BigRational) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(vec![0; ring.nvars()], c);
        p
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, BigRational::from_integer(BigInt::from(c)))
    }

    /// The `i`-th generator.
    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        let mut p = Self::zero(ring);
        p.add_term(exps, BigRational::one());
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() || !self.ring.admits(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Lexicographically largest monomial.
    pub fn leading(&self) -> Option<(&[u32], &BigRational)> {
        self.terms
            .iter()
            .next_back()
            .map(|(k, v)| (k.as_slice(), v))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let exps: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(exps, va * vb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// The weighted-degree `d` component.
    pub fn homogeneous(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            if self.ring.degree(k) == d {
                out.add_term(k.clone(), v.clone());
            }
        }
        out
    }

    /// Inverse of a polynomial with constant term 1 in a ring where every
    /// generator is nilpotent: `sum_k (1 - p)^k` up to `max_degree`.
    pub fn inverse_unipotent(&self, max_degree: u32) -> Self {
        let one = Self::one(&self.ring);
        assert_eq!(self.coeff(&vec![0; self.ring.nvars()]), BigRational::one());
        let nil = one.sub(self);
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..max_degree {
            power = power.mul(&nil);
            acc = acc.add(&power);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, v) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{v}")?;
            for (i, e) in k.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// `e_k(x_0, .., x_{n-1})` in the free ring on `n` generators.
pub fn elementary_symmetric(ring: &Ring, k: usize) -> Poly {
    let n = ring.nvars();
    let mut out = Poly::zero(ring);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let exps = (0..n).map(|i| (mask >> i) & 1).collect();
        out.add_term(exps, BigRational::one());
    }
    out
}

/// Rewrites a symmetric polynomial as a polynomial in the elementary
/// symmetric polynomials. Keys of the result are exponent vectors
/// `(i_1, .., i_n)` standing for `e_1^{i_1} .. e_n^{i_n}`.
///
/// Returns `None` if the input is not symmetric.
pub fn to_elementary(p: &Poly) -> Option<BTreeMap<Vec<u32>, BigRational>> {
    let ring = p.ring().clone();
    let n = ring.nvars();
    let es: Vec<Poly> = (1..=n).map(|k| elementary_symmetric(&ring, k)).collect();
    let mut rest = p.clone();
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    while let Some((lead, c)) = rest.leading() {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        let key: Vec<u32> = (0..n)
            .map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0))
            .collect();
        let c = c.clone();
        let mut term = Poly::constant(&ring, c.clone());
        for (e, &k) in es.iter().zip(&key) {
            term = term.mul(&e.pow(k));
        }
        let before = rest.leading().map(|(l, _)| l.to_vec());
        rest = rest.sub(&term);
        if rest.leading().map(|(l, _)| l.to_vec()) == before {
            return None;
        }
        *out.entry(key).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, v| !v.is_zero());
    Some(out)
}
