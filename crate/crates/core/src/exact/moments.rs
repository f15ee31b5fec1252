//! Exact moments of the component count and of the closing-knot size, the
//! `cbar(n, k)` upper bound, and a rigorous bracket for `1/e`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::counts::{cbar_links, factorial};

/// Generalised harmonic numbers `H(n, m) = sum_{i=1..n} 1/i^m` for
/// `m in {1, 2}` and `0 <= n <= n_max`.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    h1: Vec<BigRational>,
    h2: Vec<BigRational>,
}

impl HarmonicTable {
    pub fn new(n_max: usize) -> Self {
        let mut h1 = Vec::with_capacity(n_max + 1);
        let mut h2 = Vec::with_capacity(n_max + 1);
        h1.push(BigRational::zero());
        h2.push(BigRational::zero());
        for i in 1..=n_max {
            let inv = BigRational::new(BigInt::one(), BigInt::from(i));
            let next1 = &h1[i - 1] + &inv;
            let next2 = &h2[i - 1] + &inv * &inv;
            h1.push(next1);
            h2.push(next2);
        }
        HarmonicTable { h1, h2 }
    }

    pub fn h(&self, n: usize, m: u32) -> &BigRational {
        match m {
            1 => &self.h1[n],
            2 => &self.h2[n],
            _ => panic!("only m = 1 and m = 2 are tabulated"),
        }
    }
}

/// `(-1)^i / i!` for `0 <= i <= n`.
fn alternating_inverse_factorials(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut term = BigRational::one();
    out.push(term.clone());
    for i in 1..=n {
        term = -term / BigInt::from(i);
        out.push(term.clone());
    }
    out
}

/// Mean number of components of a uniform `n x n` diagram:
/// `(1/cbar(n)) sum_{i=0..n-1} (-1)^i (H_{n-i} - 1) / i!`.
pub fn expected_components(n: usize) -> BigRational {
    assert!(n >= 2, "grid size must be at least 2");
    let h = HarmonicTable::new(n);
    let signs = alternating_inverse_factorials(n);
    let one = BigRational::one();
    let sum: BigRational = (0..n).map(|i| (h.h(n - i, 1) - &one) * &signs[i]).sum();
    sum / cbar_links(n)
}

/// Second factorial moment `E[k(k-1)]`:
/// `(1/cbar(n)) sum_{i=0..n} (-1)^i (H_{n-i}^2 - H_{n-i,2} + 2i H_{n-i} + i(i-1)) / i!`.
pub fn factorial_moment2_components(n: usize) -> BigRational {
    assert!(n >= 2, "grid size must be at least 2");
    let h = HarmonicTable::new(n);
    let signs = alternating_inverse_factorials(n);
    let sum: BigRational = (0..=n)
        .map(|i| {
            let h1 = h.h(n - i, 1);
            let term = h1 * h1 - h.h(n - i, 2)
                + h1 * BigInt::from(2 * i)
                + BigRational::from_integer(BigInt::from(i * i) - BigInt::from(i));
            term * &signs[i]
        })
        .sum();
    sum / cbar_links(n)
}

/// `Var(k) = E[k(k-1)] + E[k] - E[k]^2`.
pub fn variance_components(n: usize) -> BigRational {
    let ev = expected_components(n);
    factorial_moment2_components(n) + &ev - &ev * &ev
}

/// Distribution of the closing-knot size on an `n x n` grid: uniform on
/// `2..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSizeDistribution {
    pub n: usize,
    /// `(s, p_s)` for `s = 2..=n`.
    pub p: Vec<(usize, BigRational)>,
    pub ev: BigRational,
    pub var: BigRational,
}

impl KnotSizeDistribution {
    /// Raw moment `(1/(n-1)) sum_{i=2..n} i^k`.
    pub fn moment(&self, k: u32) -> BigRational {
        let sum: BigInt = (2..=self.n).map(|i| BigInt::from(i).pow(k)).sum();
        BigRational::new(sum, BigInt::from(self.n - 1))
    }
}

pub fn knot_size_distribution(n: usize) -> KnotSizeDistribution {
    assert!(n >= 2, "grid size must be at least 2");
    let p_s = BigRational::new(BigInt::one(), BigInt::from(n - 1));
    let p = (2..=n).map(|s| (s, p_s.clone())).collect();
    let nn = BigInt::from(n);
    let ev = BigRational::new(&nn + BigInt::from(2), BigInt::from(2));
    let var = BigRational::new(&nn * &nn - BigInt::from(2) * &nn, BigInt::from(12));
    KnotSizeDistribution { n, p, ev, var }
}

/// Slack in `cbar(n, k) <= (log2 n)^{k-1} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundMargin {
    /// Floating-point value of the margin.
    pub value: f64,
    /// Exact margin, when `log2 n` is rational (`k = 1` or `n` a power of 2).
    pub exact: Option<BigRational>,
    /// The margin is provably nonnegative: it stays `>= 0` with `log2 n`
    /// replaced by a rational lower bound below it by a relative `2^-40`,
    /// far beyond the error of the `f64` logarithm.
    pub certified: bool,
}

pub fn bound_margin(n: usize, k: usize, cbar_nk: &BigRational) -> BoundMargin {
    assert!(n >= 2 && k >= 1);
    let n_q = BigRational::from_integer(BigInt::from(n));
    let exact_log = if n.is_power_of_two() {
        Some(BigRational::from_integer(BigInt::from(n.trailing_zeros())))
    } else {
        None
    };
    let pow = |base: &BigRational| -> BigRational {
        (0..k - 1).fold(BigRational::one(), |acc, _| acc * base)
    };

    let exact = if k == 1 {
        Some(BigRational::one() / &n_q - cbar_nk)
    } else {
        exact_log.as_ref().map(|l| pow(l) / &n_q - cbar_nk)
    };

    let log2 = (n as f64).log2();
    let value = log2.powi(k as i32 - 1) / n as f64 - cbar_nk.to_f64().unwrap_or(f64::NAN);

    let certified = match &exact {
        Some(m) => *m >= BigRational::zero(),
        None => {
            let shrink =
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
            let lower = BigRational::from_float(log2).expect("finite logarithm") * shrink;
            pow(&lower) / &n_q - cbar_nk >= BigRational::zero()
        }
    };

    BoundMargin {
        value: exact.as_ref().and_then(|m| m.to_f64()).unwrap_or(value),
        exact,
        certified,
    }
}

/// Rational interval containing `1/e`, from `e` bracketed between
/// `sum_{i<=m} 1/i!` and that sum plus `1/(m! m)`.
pub fn inverse_e_bracket(m: usize) -> (BigRational, BigRational) {
    assert!(m >= 1);
    let mut e_lo = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..=m {
        if i > 0 {
            term /= BigInt::from(i);
        }
        e_lo += &term;
    }
    let e_hi = &e_lo + BigRational::new(BigInt::one(), factorial(m) * BigInt::from(m));
    (e_hi.recip(), e_lo.recip())
}

/// Decimal expansion of `q` rounded half away from zero to `digits` places.
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q < &BigRational::zero();
    let abs = if neg { -q } else { q.clone() };
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let int_part = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    s
}
