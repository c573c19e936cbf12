//! Rank generating functions with exact integer coefficients.

use std::fmt;

use crate::{Error, Result};

/// A polynomial in `q` with nonnegative integer coefficients, used as the rank
/// generating function of a graded poset: the coefficient of `q^r` counts
/// elements of rank `r`.
///
/// Coefficients are `u128` and every arithmetic operation is overflow-checked;
/// the quantities verified here stay far below that limit, so an overflow is a
/// bug and panics rather than wrapping.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RankPolynomial {
    /// `coeffs[r]` is the coefficient of `q^r`; the last entry is nonzero
    /// unless the polynomial is zero (empty vector).
    coeffs: Vec<u128>,
}

impl RankPolynomial {
    pub fn zero() -> Self {
        RankPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RankPolynomial { coeffs: vec![1] }
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        RankPolynomial { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<u128>) -> Self {
        let mut p = RankPolynomial { coeffs };
        p.normalize();
        p
    }

    /// Tallies an iterator of ranks into a polynomial.
    pub fn from_ranks<I: IntoIterator<Item = usize>>(ranks: I) -> Self {
        let mut coeffs: Vec<u128> = Vec::new();
        for r in ranks {
            if r >= coeffs.len() {
                coeffs.resize(r + 1, 0);
            }
            coeffs[r] = coeffs[r].checked_add(1).expect("rank multiplicity overflow");
        }
        Self::from_coeffs(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u128 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Value at `q = 1`, i.e. the total element count.
    pub fn eval_one(&self) -> u128 {
        self.coeffs
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .expect("rank polynomial evaluation overflow")
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = vec![0u128; self.coeffs.len().max(other.coeffs.len())];
        for (r, c) in coeffs.iter_mut().enumerate() {
            *c = self
                .coeff(r)
                .checked_add(other.coeff(r))
                .expect("rank polynomial coefficient overflow");
        }
        Self::from_coeffs(coeffs)
    }

    /// Coefficient-wise subtraction; errors if any coefficient would go
    /// negative (these polynomials count things).
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut coeffs = vec![0u128; self.coeffs.len().max(other.coeffs.len())];
        for (r, c) in coeffs.iter_mut().enumerate() {
            *c = self
                .coeff(r)
                .checked_sub(other.coeff(r))
                .ok_or(Error::NegativeRank(r))?;
        }
        Ok(Self::from_coeffs(coeffs))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).expect("rank polynomial coefficient overflow");
                coeffs[i + j] = coeffs[i + j]
                    .checked_add(term)
                    .expect("rank polynomial coefficient overflow");
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `q^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0u128; self.coeffs.len() + k];
        coeffs[k..].copy_from_slice(&self.coeffs);
        RankPolynomial { coeffs }
    }
}

impl fmt::Display for RankPolynomial {
    /// Renders like `1 + 2q + 2q^2 + q^4`; zero coefficients are skipped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (r, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "q")?,
                (1, c) => write!(f, "{c}q")?,
                (r, 1) => write!(f, "q^{r}")?,
                (r, c) => write!(f, "{c}q^{r}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RankPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RankPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_convention() {
        let p = RankPolynomial::from_coeffs(vec![1, 2, 2, 2, 1]);
        assert_eq!(p.to_string(), "1 + 2q + 2q^2 + 2q^3 + q^4");
        assert_eq!(RankPolynomial::zero().to_string(), "0");
        assert_eq!(RankPolynomial::one().to_string(), "1");
        assert_eq!(RankPolynomial::monomial(3).to_string(), "q^3");
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RankPolynomial::from_coeffs(vec![1, 0, 0]);
        assert_eq!(p.coeffs(), &[1]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(RankPolynomial::zero().degree(), None);
    }

    #[test]
    fn product_of_binomials() {
        // (1+q)^2 (1+q^2) = 1 + 2q + 2q^2 + 2q^3 + q^4
        let one_plus_q = RankPolynomial::from_coeffs(vec![1, 1]);
        let one_plus_q2 = RankPolynomial::from_coeffs(vec![1, 0, 1]);
        let p = one_plus_q.pow(2).mul(&one_plus_q2);
        assert_eq!(p.coeffs(), &[1, 2, 2, 2, 1]);
        assert_eq!(p.eval_one(), 8);
    }

    #[test]
    fn from_ranks_tallies() {
        let p = RankPolynomial::from_ranks(vec![0, 1, 1, 4]);
        assert_eq!(p.coeffs(), &[1, 2, 0, 0, 1]);
    }

    #[test]
    fn sub_detects_negative_coefficients() {
        let a = RankPolynomial::from_coeffs(vec![1, 1]);
        let b = RankPolynomial::from_coeffs(vec![0, 2]);
        assert!(a.sub(&b).is_err());
        let c = RankPolynomial::from_coeffs(vec![1, 2]);
        assert_eq!(c.sub(&a).unwrap().coeffs(), &[0, 1]);
    }

    #[test]
    fn shift_is_monomial_multiplication() {
        let p = RankPolynomial::from_coeffs(vec![1, 2]);
        assert_eq!(p.shifted(2).coeffs(), &[0, 0, 1, 2]);
        assert_eq!(p.shifted(2), p.mul(&RankPolynomial::monomial(2)));
    }
}
