//! Exact restricted-partition counts.
//!
//! `p_n(N, M)` counts partitions of `n` with every part at most `N` and at
//! most `M` parts. It is the coefficient of `q^n` in the Gaussian polynomial
//!
//! ```text
//! G(N, M; q) = prod_{j=M+1}^{M+N} (1 - q^j) / prod_{j=1}^{N} (1 - q^j)
//! ```
//!
//! Two independent engines are provided: [`gaussian_poly_coeffs`] builds the
//! whole truncated coefficient table, and [`RecurrenceCounter`] evaluates
//! `p_n(N,M) = p_n(N,M-1) + p_{n-M}(N-1,M)` top-down with a memo table.
//! Unrestricted counts come from Euler's pentagonal-number recurrence.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on elementary big-integer operations for one table.
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

/// Default cap on memo entries held by a [`RecurrenceCounter`].
pub const DEFAULT_MEMO_BUDGET: usize = 20_000_000;

/// The counting problem `p_n(N, M)`: target sum, largest allowed part,
/// largest allowed number of parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionBounds {
    pub n: u64,
    pub max_part: u64,
    pub max_len: u64,
}

impl PartitionBounds {
    pub fn new(n: u64, max_part: u64, max_len: u64) -> Self {
        Self { n, max_part, max_len }
    }

    /// `N * M`, the area of the bounding box (saturating).
    pub fn area(&self) -> u128 {
        u128::from(self.max_part) * u128::from(self.max_len)
    }

    /// Same count with the roles of part size and length exchanged.
    pub fn conjugate(&self) -> Self {
        Self::new(self.n, self.max_len, self.max_part)
    }

    /// `(NM - n, M, N)`, the complement inside the box. `None` if `n > NM`.
    pub fn complement(&self) -> Option<Self> {
        let area = u64::try_from(self.area()).ok()?;
        area.checked_sub(self.n)
            .map(|m| Self::new(m, self.max_len, self.max_part))
    }
}

impl fmt::Display for PartitionBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p_{}({}, {})", self.n, self.max_part, self.max_len)
    }
}

/// An exact, nonnegative partition count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn one() -> Self {
        Self(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Natural logarithm, accurate to double precision. `-inf` for zero.
    pub fn ln(&self) -> f64 {
        big_ln(&self.0)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn big_ln(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    // keep the top 64 bits as mantissa
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficients `p_k(N, M)` for `k = 0..=max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub max_part: u64,
    pub max_len: u64,
    pub max_degree: u64,
    coeffs: Vec<BigUint>,
}

impl CoeffTable {
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// `p_k(N, M)`, zero beyond the stored degree.
    pub fn get(&self, k: u64) -> BigUint {
        usize::try_from(k)
            .ok()
            .and_then(|i| self.coeffs.get(i))
            .cloned()
            .unwrap_or_default()
    }

    pub fn into_coeffs(self) -> Vec<BigUint> {
        self.coeffs
    }
}

fn to_index(v: u64, what: &'static str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::ResourceLimit {
        what,
        needed: u128::from(v),
        budget: usize::MAX as u128,
    })
}

/// Truncated Gaussian polynomial `G(N, M; q) mod q^{max_degree+1}`.
pub fn gaussian_poly_coeffs(max_part: u64, max_len: u64, max_degree: u64) -> Result<CoeffTable> {
    gaussian_poly_coeffs_with_budget(max_part, max_len, max_degree, DEFAULT_WORK_BUDGET)
}

pub fn gaussian_poly_coeffs_with_budget(
    max_part: u64,
    max_len: u64,
    max_degree: u64,
    budget: u128,
) -> Result<CoeffTable> {
    // p_n(N, M) = p_n(M, N); the division loop runs over the smaller side.
    let (small, large) = if max_part <= max_len {
        (max_part, max_len)
    } else {
        (max_len, max_part)
    };
    let cap = u128::from(max_degree).min(u128::from(small) * u128::from(large)) as u64;
    let needed = (u128::from(small) * u128::from(cap)).max(u128::from(max_degree));
    if needed > budget {
        return Err(Error::ResourceLimit {
            what: "gaussian polynomial table",
            needed,
            budget,
        });
    }
    let len = to_index(max_degree, "table length")? + 1;
    let cap = to_index(cap, "table degree")?;

    let mut coeffs = vec![BigUint::zero(); len];
    coeffs[0] = BigUint::one();
    let active = &mut coeffs[..=cap];
    for j in 1..=small {
        let j = to_index(j, "part size")?;
        // divide by (1 - q^j): running prefix sum with stride j
        for k in j..active.len() {
            let (lo, hi) = active.split_at_mut(k);
            hi[0] += &lo[k - j];
        }
        // multiply by (1 - q^{M+j}); every stage stays a series with
        // nonnegative coefficients, so a failed subtraction is a bug
        let shift = to_index(large, "length bound")?.saturating_add(j);
        if shift < active.len() {
            for k in (shift..active.len()).rev() {
                let (lo, hi) = active.split_at_mut(k);
                assert!(
                    hi[0] >= lo[k - shift],
                    "negative coefficient at q^{k} after multiplying by 1 - q^{shift}"
                );
                hi[0] -= &lo[k - shift];
            }
        }
    }
    Ok(CoeffTable {
        max_part,
        max_len,
        max_degree,
        coeffs,
    })
}

/// Trivial answers shared by every engine. `None` means real work is needed.
fn trivial_count(b: &PartitionBounds) -> Option<BigUint> {
    if b.n == 0 {
        Some(BigUint::one())
    } else if b.max_part == 0 || b.max_len == 0 || u128::from(b.n) > b.area() {
        Some(BigUint::zero())
    } else if u128::from(b.n) == b.area() {
        Some(BigUint::one())
    } else {
        None
    }
}

/// `p_n(N, M)` from the truncated Gaussian polynomial.
pub fn count_exact(b: PartitionBounds) -> Result<BigCount> {
    count_exact_with_budget(b, DEFAULT_WORK_BUDGET)
}

pub fn count_exact_with_budget(b: PartitionBounds, budget: u128) -> Result<BigCount> {
    if let Some(v) = trivial_count(&b) {
        return Ok(BigCount(v));
    }
    // parts larger than n and more than n parts are never used
    let table = gaussian_poly_coeffs_with_budget(b.max_part.min(b.n), b.max_len.min(b.n), b.n, budget)?;
    Ok(BigCount(table.get(b.n)))
}

/// `p_n(N)`: part size at most `N`, any number of parts.
pub fn count_part_bounded(n: u64, max_part: u64) -> Result<BigCount> {
    count_exact(PartitionBounds::new(n, max_part, n))
}

/// Memoized evaluation of `p_n(N,M) = p_n(N,M-1) + p_{n-M}(N-1,M)`.
#[derive(Debug)]
pub struct RecurrenceCounter {
    memo: HashMap<(u64, u64, u64), BigUint>,
    budget: usize,
}

impl Default for RecurrenceCounter {
    fn default() -> Self {
        Self::with_budget(DEFAULT_MEMO_BUDGET)
    }
}

enum Lookup {
    Known(BigUint),
    Pending((u64, u64, u64)),
}

impl RecurrenceCounter {
    pub fn with_budget(budget: usize) -> Self {
        Self {
            memo: HashMap::new(),
            budget,
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn normalize(n: u64, max_part: u64, max_len: u64) -> std::result::Result<BigUint, (u64, u64, u64)> {
        match trivial_count(&PartitionBounds::new(n, max_part, max_len)) {
            Some(v) => Ok(v),
            None => Err((n, max_part.min(n), max_len.min(n))),
        }
    }

    fn lookup(&self, n: u64, max_part: u64, max_len: u64) -> Lookup {
        match Self::normalize(n, max_part, max_len) {
            Ok(v) => Lookup::Known(v),
            Err(key) => match self.memo.get(&key) {
                Some(v) => Lookup::Known(v.clone()),
                None => Lookup::Pending(key),
            },
        }
    }

    pub fn count(&mut self, b: PartitionBounds) -> Result<BigCount> {
        let root = match self.lookup(b.n, b.max_part, b.max_len) {
            Lookup::Known(v) => return Ok(BigCount(v)),
            Lookup::Pending(key) => key,
        };
        // explicit stack: the recursion depth reaches N + M
        let mut stack = vec![root];
        while let Some(&(n, big_n, big_m)) = stack.last() {
            if self.memo.contains_key(&(n, big_n, big_m)) {
                stack.pop();
                continue;
            }
            let shorter = self.lookup(n, big_n, big_m - 1);
            let lowered = if n >= big_m {
                self.lookup(n - big_m, big_n - 1, big_m)
            } else {
                Lookup::Known(BigUint::zero())
            };
            match (shorter, lowered) {
                (Lookup::Known(a), Lookup::Known(c)) => {
                    if self.memo.len() >= self.budget {
                        return Err(Error::ResourceLimit {
                            what: "recurrence memo entries",
                            needed: self.memo.len() as u128 + 1,
                            budget: self.budget as u128,
                        });
                    }
                    self.memo.insert((n, big_n, big_m), a + c);
                    stack.pop();
                }
                (a, c) => {
                    if let Lookup::Pending(key) = a {
                        stack.push(key);
                    }
                    if let Lookup::Pending(key) = c {
                        stack.push(key);
                    }
                }
            }
        }
        Ok(BigCount(self.memo[&root].clone()))
    }
}

/// `p_n(N, M)` from the recurrence alone, with a fresh memo table.
pub fn count_via_recurrence(b: PartitionBounds) -> Result<BigCount> {
    RecurrenceCounter::default().count(b)
}

/// Unrestricted `p_n` via Euler's pentagonal-number recurrence.
pub fn count_unrestricted(n: u64) -> Result<BigCount> {
    let table = unrestricted_table(n)?;
    Ok(BigCount(table.into_iter().next_back().unwrap_or_else(BigUint::one)))
}

/// `p_0 ..= p_n`.
pub fn unrestricted_table(n: u64) -> Result<Vec<BigUint>> {
    let needed = (n as f64).powf(1.5) as u128;
    if needed > DEFAULT_WORK_BUDGET {
        return Err(Error::ResourceLimit {
            what: "pentagonal recurrence",
            needed,
            budget: DEFAULT_WORK_BUDGET,
        });
    }
    let len = to_index(n, "table length")? + 1;
    let mut p: Vec<BigUint> = Vec::with_capacity(len);
    p.push(BigUint::one());
    for m in 1..len {
        let mut acc = BigInt::zero();
        for k in 1usize.. {
            let first = k * (3 * k - 1) / 2;
            if first > m {
                break;
            }
            let mut term = BigInt::from(p[m - first].clone());
            let second = k * (3 * k + 1) / 2;
            if second <= m {
                term += BigInt::from(p[m - second].clone());
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let value = acc
            .to_biguint()
            .expect("pentagonal recurrence produced a negative count");
        p.push(value);
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force enumeration of partitions with parts <= N and length <= M.
    fn enumerate(n: u64, max_part: u64, max_len: u64) -> u64 {
        fn go(rest: u64, cap: u64, slots: u64) -> u64 {
            if rest == 0 {
                return 1;
            }
            if slots == 0 {
                return 0;
            }
            (1..=cap.min(rest)).map(|part| go(rest - part, part, slots - 1)).sum()
        }
        go(n, max_part, max_len)
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn enumeration_oracle_sanity() {
        assert_eq!(enumerate(4, 3, 3), 3);
        assert_eq!(enumerate(5, 3, 3), 3);
        assert_eq!(enumerate(6, 6, 6), 11);
        let box33: Vec<u64> = (0..=9).map(|k| enumerate(k, 3, 3)).collect();
        assert_eq!(box33, vec![1, 1, 2, 3, 3, 3, 3, 2, 1, 1]);
    }

    #[test]
    fn small_tables() {
        let t = gaussian_poly_coeffs(1, 1, 1).unwrap();
        assert_eq!(t.coeffs(), &[big(1), big(1)]);
        let t = gaussian_poly_coeffs(3, 3, 9).unwrap();
        let want: Vec<BigUint> = [1, 1, 2, 3, 3, 3, 3, 2, 1, 1].into_iter().map(big).collect();
        assert_eq!(t.coeffs(), want.as_slice());
        let t = gaussian_poly_coeffs(2, 0, 5).unwrap();
        assert_eq!(t.coeffs(), &[big(1), big(0), big(0), big(0), big(0), big(0)]);
        let t = gaussian_poly_coeffs(0, 4, 2).unwrap();
        assert_eq!(t.coeffs(), &[big(1), big(0), big(0)]);
    }

    #[test]
    fn table_padding_beyond_area() {
        let t = gaussian_poly_coeffs(2, 3, 10).unwrap();
        assert_eq!(t.coeffs().len(), 11);
        assert!(t.coeffs()[7..].iter().all(Zero::is_zero));
        assert_eq!(t.get(6), big(1));
        assert_eq!(t.get(1_000), big(0));
    }

    #[test]
    fn tables_match_enumeration() {
        for n_part in 0..=6 {
            for n_len in 0..=6 {
                let area = n_part * n_len;
                let t = gaussian_poly_coeffs(n_part, n_len, area + 2).unwrap();
                for k in 0..=area + 2 {
                    assert_eq!(t.get(k), big(enumerate(k, n_part, n_len)), "k={k} N={n_part} M={n_len}");
                }
            }
        }
    }

    #[test]
    fn count_exact_examples() {
        assert_eq!(count_exact(PartitionBounds::new(0, 7, 3)).unwrap(), BigCount::one());
        assert_eq!(count_exact(PartitionBounds::new(4, 3, 3)).unwrap(), BigCount::from(3));
        assert_eq!(count_exact(PartitionBounds::new(9, 3, 3)).unwrap(), BigCount::one());
        assert_eq!(count_exact(PartitionBounds::new(10, 3, 3)).unwrap(), BigCount::zero());
        assert_eq!(count_exact(PartitionBounds::new(5, 0, 9)).unwrap(), BigCount::zero());
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(count_via_recurrence(PartitionBounds::new(4, 3, 3)).unwrap(), BigCount::from(3));
        assert_eq!(count_via_recurrence(PartitionBounds::new(5, 3, 3)).unwrap(), BigCount::from(3));
        assert_eq!(count_via_recurrence(PartitionBounds::new(10, 3, 3)).unwrap(), BigCount::zero());
        assert_eq!(count_via_recurrence(PartitionBounds::new(0, 0, 0)).unwrap(), BigCount::one());
    }

    #[test]
    fn part_bounded_examples() {
        assert_eq!(count_part_bounded(5, 1).unwrap(), BigCount::from(1));
        assert_eq!(count_part_bounded(5, 2).unwrap(), BigCount::from(3));
        assert_eq!(count_part_bounded(6, 6).unwrap(), BigCount::from(11));
    }

    #[test]
    fn unrestricted_examples() {
        assert_eq!(count_unrestricted(0).unwrap(), BigCount::one());
        assert_eq!(count_unrestricted(6).unwrap(), BigCount::from(11));
        let p100 = count_unrestricted(100).unwrap();
        assert_eq!(p100, BigCount::from(190_569_292));
        assert_eq!(p100, count_part_bounded(100, 100).unwrap());
        assert_eq!(p100, count_via_recurrence(PartitionBounds::new(100, 100, 100)).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let err = gaussian_poly_coeffs_with_budget(100, 100, 1000, 10_000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
        let mut counter = RecurrenceCounter::with_budget(10);
        let err = counter.count(PartitionBounds::new(50, 10, 10)).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn recurrence_handles_deep_instances() {
        // the dependency chain is N + M long
        let mut counter = RecurrenceCounter::default();
        let got = counter.count(PartitionBounds::new(300, 300, 300)).unwrap();
        assert_eq!(got, count_unrestricted(300).unwrap());
    }

    #[test]
    fn big_ln_matches_float() {
        assert_eq!(BigCount::zero().ln(), f64::NEG_INFINITY);
        assert!((BigCount::from(190_569_292).ln() - 190_569_292f64.ln()).abs() < 1e-14);
        let huge = BigCount(BigUint::one() << 5000u32);
        assert!((huge.ln() - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let huge3 = BigCount(BigUint::from(3u32).pow(3000));
        assert!((huge3.ln() - 3000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
