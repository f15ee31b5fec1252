//! Exact diagram counts.
//!
//! `c(n, k)` is the number of `n x n` diagrams with `k` components and
//! `cbar(n, k) = c(n, k) / (n!)^2`. The normalised counts are computed three
//! independent ways: a recurrence in `n`, a sum over partitions of `n`, and
//! coefficient extraction from `(-ln(1 - x) - x)^k / k!`.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::series::SeriesQ;
use crate::error::Result;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Number of derangements, `!n = n * !(n - 1) + (-1)^n`, `!0 = 1`.
pub fn subfactorial(n: usize) -> BigInt {
    let mut d = BigInt::one();
    for i in 1..=n {
        d = d * BigInt::from(i) + if i % 2 == 0 { 1 } else { -1 };
    }
    d
}

/// All valid `n x n` diagrams: `n! * !n`.
pub fn count_links(n: usize) -> BigInt {
    factorial(n) * subfactorial(n)
}

/// One-component diagrams: `n! (n-1)!`.
pub fn count_knots(n: usize) -> BigInt {
    if n < 2 {
        return BigInt::zero();
    }
    factorial(n) * factorial(n - 1)
}

/// `cbar(n, 1) = 1/n` for `n >= 2`.
pub fn cbar_knots(n: usize) -> BigRational {
    if n < 2 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::one(), BigInt::from(n))
}

/// `cbar(n) = sum_{i=0..n} (-1)^i / i!`.
pub fn cbar_links(n: usize) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for i in 1..=n {
        term = -term / BigInt::from(i);
        sum += &term;
    }
    sum
}

/// Normalised counts `cbar(n, k)` for `0 <= n <= n_max`, `0 <= k <= k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    n_max: usize,
    k_max: usize,
    cbar: Vec<Vec<BigRational>>,
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// True when every possible component count (`k <= n/2`) is tabulated.
    pub fn is_complete(&self) -> bool {
        self.k_max >= self.n_max / 2
    }

    pub fn cbar(&self, n: usize, k: usize) -> &BigRational {
        &self.cbar[n][k]
    }

    /// `c(n, k) = (n!)^2 cbar(n, k)`. Panics if that is not an integer,
    /// which would mean the table is wrong.
    pub fn c(&self, n: usize, k: usize) -> BigInt {
        let f = factorial(n);
        let scaled = &self.cbar[n][k] * BigRational::from_integer(&f * &f);
        assert!(scaled.is_integer(), "c({n},{k}) is not integral");
        scaled.to_integer()
    }

    /// Sum of `c(n, k)` over the tabulated `k`.
    pub fn row_sum(&self, n: usize) -> BigInt {
        (0..=self.k_max).map(|k| self.c(n, k)).sum()
    }

    /// Mean component count `sum_k k c(n,k) / c(n)` over the tabulated `k`.
    pub fn mean_components(&self, n: usize) -> BigRational {
        self.raw_moment(n, 1)
    }

    pub fn variance_components(&self, n: usize) -> BigRational {
        let m1 = self.raw_moment(n, 1);
        self.raw_moment(n, 2) - &m1 * &m1
    }

    fn raw_moment(&self, n: usize, power: u32) -> BigRational {
        let total: BigRational = self.cbar[n].iter().cloned().sum();
        let weighted: BigRational = self.cbar[n]
            .iter()
            .enumerate()
            .map(|(k, c)| c * BigInt::from(k).pow(power))
            .sum();
        weighted / total
    }

    /// Long-form CSV: `n,k,c_nk,cbar_num,cbar_den` for `n >= 2`, `k >= 1`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,k,c_nk,cbar_num,cbar_den")?;
        for n in 2..=self.n_max {
            for k in 1..=self.k_max {
                let cb = &self.cbar[n][k];
                writeln!(w, "{n},{k},{},{},{}", self.c(n, k), cb.numer(), cb.denom())?;
            }
        }
        Ok(())
    }

    /// Per-n summary CSV: `n,c_n,ev_num,ev_den,var_num,var_den`, with the
    /// moments taken from the table rows.
    pub fn write_summary_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,c_n,ev_num,ev_den,var_num,var_den")?;
        for n in 2..=self.n_max {
            let ev = self.mean_components(n);
            let var = self.variance_components(n);
            writeln!(
                w,
                "{n},{},{},{},{},{}",
                self.row_sum(n),
                ev.numer(),
                ev.denom(),
                var.numer(),
                var.denom()
            )?;
        }
        Ok(())
    }
}

/// Builds the table from `cbar(n, 1) = 1/n` and
/// `cbar(n, k) = (1/n) sum_{i=1..n-2} cbar(i, k-1)`, keeping running prefix
/// sums of the previous column.
pub fn cbar_table_recurrence(n_max: usize, k_max: usize) -> CountTable {
    let mut cbar = vec![vec![BigRational::zero(); k_max + 1]; n_max + 1];
    cbar[0][0] = BigRational::one();
    for (n, row) in cbar.iter_mut().enumerate().skip(2) {
        if k_max >= 1 {
            row[1] = cbar_knots(n);
        }
    }
    for k in 2..=k_max {
        // prefix = sum_{i=1..n-2} cbar(i, k-1)
        let mut prefix = BigRational::zero();
        for n in 2..=n_max {
            if n >= 3 {
                prefix += &cbar[n - 2][k - 1];
            }
            if !prefix.is_zero() {
                cbar[n][k] = &prefix / BigInt::from(n);
            }
        }
    }
    CountTable { n_max, k_max, cbar }
}

/// `cbar(n, k)` as a sum over partitions of `n` into exactly `k` parts, each
/// at least 2. A partition with `e_i` parts equal to `i` contributes
/// `1 / (prod i^{e_i} * prod e_i!)`.
pub fn cbar_partition(n: usize, k: usize) -> BigRational {
    fn walk(
        remaining: usize,
        parts_left: usize,
        max_part: usize,
        parts: &mut Vec<usize>,
        sum: &mut BigRational,
    ) {
        if parts_left == 0 {
            if remaining == 0 {
                *sum += partition_weight(parts);
            }
            return;
        }
        if remaining < 2 * parts_left {
            return;
        }
        let hi = max_part.min(remaining - 2 * (parts_left - 1));
        for part in (2..=hi).rev() {
            parts.push(part);
            walk(remaining - part, parts_left - 1, part, parts, sum);
            parts.pop();
        }
    }

    if n == 0 && k == 0 {
        return BigRational::one();
    }
    let mut sum = BigRational::zero();
    if k == 0 {
        return sum;
    }
    walk(n, k, n, &mut Vec::with_capacity(k), &mut sum);
    sum
}

/// Parts arrive in non-increasing order, so equal parts are adjacent.
fn partition_weight(parts: &[usize]) -> BigRational {
    let mut denom = BigInt::one();
    let mut run = 0usize;
    for (i, &p) in parts.iter().enumerate() {
        denom *= BigInt::from(p);
        run = if i > 0 && parts[i - 1] == p {
            run + 1
        } else {
            1
        };
        denom *= BigInt::from(run);
    }
    BigRational::new(BigInt::one(), denom)
}

/// `(-ln(1 - x) - x)^k / k!` truncated at `order`.
pub fn component_series(k: usize, order: usize) -> SeriesQ {
    let h = SeriesQ::log_tail(order).pow(k as u32);
    h.scale(&BigRational::new(BigInt::one(), factorial(k)))
}

/// `cbar(n, k)` read off the generating function for fixed `k`.
pub fn cbar_series(n: usize, k: usize) -> Result<BigRational> {
    component_series(k, n + 1).coeff(n).cloned()
}

/// `(1 - x)^{-1} e^{-x}` truncated at `order`; its coefficients are `cbar(n)`.
pub fn total_series(order: usize) -> SeriesQ {
    &SeriesQ::geometric(order) * &SeriesQ::exp_neg(order)
}

/// Same table as [`cbar_table_recurrence`], filled column by column from the
/// generating functions.
pub fn cbar_table_series(n_max: usize, k_max: usize) -> CountTable {
    let order = n_max + 1;
    let mut cbar = vec![vec![BigRational::zero(); k_max + 1]; n_max + 1];
    let tail = SeriesQ::log_tail(order);
    let mut power = SeriesQ::one(order);
    let mut k_factorial = BigInt::one();
    for k in 0..=k_max {
        if k > 0 {
            power = &power * &tail;
            k_factorial *= BigInt::from(k);
        }
        for (n, row) in cbar.iter_mut().enumerate() {
            let c = power.coeff(n).expect("order covers n_max");
            row[k] = c / &k_factorial;
        }
    }
    CountTable { n_max, k_max, cbar }
}

/// Reduced-fraction check used by the integrality invariant.
pub fn is_integral_count(cbar: &BigRational, n: usize) -> bool {
    let f = factorial(n);
    (&f * &f * cbar.numer()).is_multiple_of(cbar.denom()) && !cbar.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: u64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn subfactorials() {
        assert_eq!(subfactorial(0), int(1));
        assert_eq!(subfactorial(1), int(0));
        assert_eq!(subfactorial(4), int(9));
        assert_eq!(subfactorial(6), int(265));
    }

    #[test]
    fn closed_form_counts() {
        assert_eq!(count_links(4), int(216));
        assert_eq!(count_links(6), int(190_800));
        assert_eq!(count_links(7), int(9_344_160));
        assert_eq!(count_knots(7), int(3_628_800));
        assert_eq!(count_knots(2), int(2));
    }

    #[test]
    fn recurrence_reproduces_small_table_entries() {
        let t = cbar_table_recurrence(7, 3);
        assert_eq!(t.cbar(4, 2), &q(1, 8));
        assert_eq!(t.c(4, 2), int(72));
        assert_eq!(t.cbar(6, 3), &q(1, 48));
        assert_eq!(t.c(6, 3), int(10_800));
        assert_eq!(t.c(7, 2), int(4_656_960));
        assert_eq!(t.c(5, 2), int(2400));
        assert_eq!(t.row_sum(7), count_links(7));
    }

    #[test]
    fn partition_sum_examples() {
        assert_eq!(cbar_partition(5, 2), q(1, 6));
        assert_eq!(cbar_partition(7, 4), BigRational::zero());
        assert_eq!(cbar_partition(6, 3), q(1, 48));
        assert_eq!(cbar_partition(4, 1), q(1, 4));
    }

    #[test]
    fn series_examples() {
        assert_eq!(total_series(5).coeff(4).unwrap(), &q(3, 8));
        assert_eq!(cbar_series(6, 3).unwrap(), q(1, 48));
        assert_eq!(cbar_series(0, 0).unwrap(), BigRational::one());
        for n in 1..8 {
            assert_eq!(cbar_series(n, 0).unwrap(), BigRational::zero());
        }
    }

    #[test]
    fn csv_exports() {
        let t = cbar_table_recurrence(4, 2);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,k,c_nk,cbar_num,cbar_den\n"));
        assert!(text.contains("\n4,2,72,1,8\n"));

        let mut buf = Vec::new();
        t.write_summary_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\n4,216,4,3,2,9\n"), "{text}");
    }
}
