//! Truncated power series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GridError, Result};

/// `sum_{i <= order} c_i x^i`, exact through `x^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesQ {
    coeffs: Vec<BigRational>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl SeriesQ {
    pub fn zero(order: usize) -> Self {
        SeriesQ {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Series with the given leading coefficients; order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least one coefficient"
        );
        SeriesQ { coeffs }
    }

    /// `1 / (1 - x) = 1 + x + x^2 + ...`
    pub fn geometric(order: usize) -> Self {
        SeriesQ {
            coeffs: vec![BigRational::one(); order + 1],
        }
    }

    /// `exp(-x) = sum (-1)^i x^i / i!`
    pub fn exp_neg(order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = BigRational::one();
        for i in 0..=order {
            if i > 0 {
                term = -term / BigInt::from(i);
            }
            coeffs.push(term.clone());
        }
        SeriesQ { coeffs }
    }

    /// `-ln(1 - x) - x = x^2/2 + x^3/3 + ...`
    pub fn log_tail(order: usize) -> Self {
        let mut s = Self::zero(order);
        for i in 2..=order {
            s.coeffs[i] = q(1, i as i64);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^n`; refuses to read past the truncation order.
    pub fn coeff(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or(GridError::TruncationTooSmall {
            requested: n,
            order: self.order(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal derivative; one order of accuracy is lost.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        SeriesQ {
            coeffs: (1..=self.order())
                .map(|i| &self.coeffs[i] * BigInt::from(i))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term; gains one order.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigRational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigInt::from(i + 1));
        }
        SeriesQ { coeffs }
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(GridError::DegenerateDesign);
        }
        let inv0 = c0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                acc += &self.coeffs[i] * &out[n - i];
            }
            out.push(-acc * &inv0);
        }
        Ok(SeriesQ { coeffs: out })
    }

    /// Logarithm of a series with constant term 1.
    pub fn ln(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(GridError::DegenerateDesign);
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        let quotient = &self.derivative() * &self.inverse()?;
        Ok(quotient.integral())
    }

    /// Exponential of a series with zero constant term, via
    /// `n e_n = sum_{k=1..n} k f_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(GridError::DegenerateDesign);
        }
        let mut out: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        out.push(BigRational::one());
        for n in 1..=self.order() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * BigInt::from(k) * &out[n - k];
                }
            }
            out.push(acc / BigInt::from(n));
        }
        Ok(SeriesQ { coeffs: out })
    }
}

impl Add for &SeriesQ {
    type Output = SeriesQ;

    fn add(self, rhs: &SeriesQ) -> SeriesQ {
        let order = self.order().min(rhs.order());
        SeriesQ {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &rhs.coeffs[i])
                .collect(),
        }
    }
}

impl Sub for &SeriesQ {
    type Output = SeriesQ;

    fn sub(self, rhs: &SeriesQ) -> SeriesQ {
        self + &(-rhs)
    }
}

impl Neg for &SeriesQ {
    type Output = SeriesQ;

    fn neg(self) -> SeriesQ {
        SeriesQ {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &SeriesQ {
    type Output = SeriesQ;

    /// Cauchy product truncated to the smaller order.
    fn mul(self, rhs: &SeriesQ) -> SeriesQ {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        SeriesQ { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_is_enforced() {
        let s = SeriesQ::geometric(5);
        assert!(s.coeff(5).is_ok());
        assert_eq!(
            s.coeff(6),
            Err(GridError::TruncationTooSmall {
                requested: 6,
                order: 5
            })
        );
        let p = &SeriesQ::geometric(3) * &SeriesQ::geometric(8);
        assert_eq!(p.order(), 3);
    }

    #[test]
    fn geometric_times_one_minus_x_is_one() {
        let one_minus_x = SeriesQ::from_coeffs(vec![q(1, 1), q(-1, 1), q(0, 1), q(0, 1)]);
        assert_eq!(&SeriesQ::geometric(3) * &one_minus_x, SeriesQ::one(3));
        assert_eq!(one_minus_x.inverse().unwrap(), SeriesQ::geometric(3));
    }

    #[test]
    fn exp_and_ln_are_inverse() {
        let f = SeriesQ::log_tail(12);
        let e = f.exp().unwrap();
        assert_eq!(e.ln().unwrap(), f);
        // exp(-ln(1-x) - x) = exp(-x) / (1-x)
        assert_eq!(e, &SeriesQ::geometric(12) * &SeriesQ::exp_neg(12));
    }

    #[test]
    fn ln_of_geometric() {
        // ln(1/(1-x)) = sum x^i / i
        let l = SeriesQ::geometric(6).ln().unwrap();
        for i in 1..=6 {
            assert_eq!(l.coeff(i).unwrap(), &q(1, i as i64));
        }
        assert!(SeriesQ::log_tail(4).ln().is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let f = SeriesQ::log_tail(10);
        let cube = &(&f * &f) * &f;
        assert_eq!(f.pow(3), cube);
        assert_eq!(f.pow(0), SeriesQ::one(10));
    }
}
