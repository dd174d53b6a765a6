//! The MacMahon function `M(q) = prod_{n>=1} (1 - q^n)^{-n}` and a
//! brute-force plane-partition counter that does not use it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exec::Execution;
use crate::series::TruncatedSeries;

/// Largest `n` the enumeration oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_BOUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacmahonError {
    #[error("oracle limit exceeded: n = {n} > bound {bound}")]
    OracleLimitExceeded { n: usize, bound: usize },
    #[error("log M(-q) coefficient {k}: series log gives {series}, closed form gives {closed}")]
    LogClosedFormMismatch {
        k: usize,
        series: Box<BigRational>,
        closed: Box<BigRational>,
    },
}

/// `M(q)` truncated at order `n`. Built by dividing by `(1 - q^j)` exactly
/// `j` times for each `j`, which is a strided prefix sum on integers.
pub fn macmahon_series(order: usize) -> TruncatedSeries {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::from(1);
    for j in 1..=order {
        for _ in 0..j {
            for k in j..=order {
                let prev = c[k - j].clone();
                c[k] += prev;
            }
        }
    }
    TruncatedSeries::from_ints(c)
}

/// `M(-q)` truncated at order `n`.
pub fn macmahon_neg(order: usize) -> TruncatedSeries {
    macmahon_series(order).negate_variable()
}

/// A plane partition stored as rows of positive heights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePartition {
    rows: Vec<Vec<u32>>,
}

impl PlanePartition {
    /// Accepts rows that are weakly decreasing along rows and columns with
    /// positive entries; trailing empty rows are dropped.
    pub fn from_rows(mut rows: Vec<Vec<u32>>) -> Option<Self> {
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() || row.contains(&0) {
                return None;
            }
            if row.windows(2).any(|w| w[0] < w[1]) {
                return None;
            }
            if i > 0 {
                let above = &rows[i - 1];
                if row.len() > above.len() || row.iter().zip(above).any(|(h, a)| h > a) {
                    return None;
                }
            }
        }
        Some(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Height at cell `(i, j)`, zero outside the support.
    pub fn height(&self, i: usize, j: usize) -> u32 {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .copied()
            .unwrap_or(0)
    }

    pub fn size(&self) -> u64 {
        self.rows.iter().flatten().map(|&h| u64::from(h)).sum()
    }
}

/// Calls `visit` with every weakly decreasing positive row bounded
/// pointwise by `cap` and with sum at most `budget`.
fn for_each_row(cap: &[u32], budget: u32, visit: &mut dyn FnMut(&[u32], u32)) {
    fn go(
        cap: &[u32],
        row: &mut Vec<u32>,
        used: u32,
        budget: u32,
        visit: &mut dyn FnMut(&[u32], u32),
    ) {
        let i = row.len();
        if i > 0 {
            visit(row, used);
        }
        if i == cap.len() {
            return;
        }
        let mut max = cap[i].min(budget - used);
        if let Some(&last) = row.last() {
            max = max.min(last);
        }
        for v in 1..=max {
            row.push(v);
            go(cap, row, used + v, budget, visit);
            row.pop();
        }
    }
    go(cap, &mut Vec::new(), 0, budget, visit);
}

fn count_below(prev: &[u32], remaining: u32) -> u64 {
    if remaining == 0 {
        return 1;
    }
    let mut total = 0;
    for_each_row(prev, remaining, &mut |row, used| {
        total += count_below(row, remaining - used);
    });
    total
}

fn first_rows(n: u32) -> Vec<(Vec<u32>, u32)> {
    let mut rows = Vec::new();
    let cap = vec![n; n as usize];
    for_each_row(&cap, n, &mut |row, used| rows.push((row.to_vec(), used)));
    rows
}

/// Number of plane partitions of `n` by exhaustive enumeration, with the
/// default bound and execution mode.
pub fn count_plane_partitions(n: usize) -> Result<u64, MacmahonError> {
    count_plane_partitions_with(n, DEFAULT_ORACLE_BOUND, Execution::default())
}

/// Enumerates height arrays row by row, each row dominated by the one above
/// and pruned by the remaining weight. Work is split over the first row.
pub fn count_plane_partitions_with(
    n: usize,
    bound: usize,
    exec: Execution,
) -> Result<u64, MacmahonError> {
    if n > bound {
        return Err(MacmahonError::OracleLimitExceeded { n, bound });
    }
    if n == 0 {
        return Ok(1);
    }
    let n = n as u32;
    let starts = first_rows(n);
    Ok(exec.sum_u64(&starts, |(row, used)| count_below(row, n - used)))
}

/// All plane partitions of `n`, in a deterministic order. Only sensible for
/// small `n`.
pub fn plane_partitions(n: usize) -> Vec<PlanePartition> {
    fn extend(rows: &mut Vec<Vec<u32>>, remaining: u32, out: &mut Vec<PlanePartition>) {
        if remaining == 0 {
            out.push(PlanePartition { rows: rows.clone() });
            return;
        }
        let cap = rows
            .last()
            .cloned()
            .unwrap_or_else(|| vec![remaining; remaining as usize]);
        let mut next = Vec::new();
        for_each_row(&cap, remaining, &mut |row, used| {
            next.push((row.to_vec(), used))
        });
        for (row, used) in next {
            rows.push(row);
            extend(rows, remaining - used, out);
            rows.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), n as u32, &mut out);
    out
}

/// `sigma_2(k)`, the sum of squares of the divisors of `k`.
pub fn sigma2(k: u64) -> u64 {
    (1..=k)
        .filter(|d| k.is_multiple_of(*d))
        .map(|d| d * d)
        .sum()
}

/// Closed form `(-1)^k sigma_2(k) / k` for `[q^k] log M(-q)`, `k = 1..=order`.
pub fn log_macmahon_neg_closed_form(order: usize) -> Vec<BigRational> {
    (1..=order as u64)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            BigRational::new(
                BigInt::from(sign) * BigInt::from(sigma2(k)),
                BigInt::from(k),
            )
        })
        .collect()
}

/// `l_1..=l_order` with `l_k = [q^k] log M(-q)`, computed as a series
/// logarithm and checked against the divisor-sum closed form.
pub fn log_macmahon_neg_coeffs(order: usize) -> Result<Vec<BigRational>, MacmahonError> {
    let log = macmahon_neg(order)
        .log1()
        .expect("M(-q) has constant term 1");
    let closed = log_macmahon_neg_closed_form(order);
    for (k, want) in closed.iter().enumerate().map(|(i, c)| (i + 1, c)) {
        if log.coeff(k) != want {
            return Err(MacmahonError::LogClosedFormMismatch {
                k,
                series: Box::new(log.coeff(k).clone()),
                closed: Box::new(want.clone()),
            });
        }
    }
    Ok(log.coeffs()[1..].to_vec())
}
