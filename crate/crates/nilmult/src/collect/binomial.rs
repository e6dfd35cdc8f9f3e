//! Integer polynomials in the binomial basis `C(α,1), C(α,2), ...`.
//!
//! Collection of a power `(x_1...x_r)^α` gives each basic commutator an
//! exponent that is such a polynomial in α, with integer coefficients and
//! degree bounded by the commutator's weight. `extract` recovers the
//! coefficients from sampled values and refuses inputs that do not fit the
//! claimed form.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `C(alpha, j)` for any integer alpha, exact.
pub fn binomial(alpha: &BigInt, j: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..j {
        num *= alpha - BigInt::from(i);
    }
    let mut den = BigInt::one();
    for i in 1..=j {
        den *= BigInt::from(i);
    }
    num / den
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BinomialError {
    #[error("need values at every alpha in 0..={degree}")]
    MissingSamples { degree: u32 },
    #[error("value at alpha=0 must vanish in the binomial basis")]
    NonzeroAtOrigin,
    #[error("values do not fit a degree-{degree} binomial polynomial (witness alpha={alpha})")]
    FormViolation { degree: u32, alpha: i64 },
}

/// Coefficients `a_1..a_d` of `f(α) = a_1 C(α,1) + ... + a_d C(α,d)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BinomialPolynomial {
    coeffs: Vec<BigInt>,
}

impl BinomialPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        BinomialPolynomial { coeffs }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree_bound(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// True degree: index of the last nonzero coefficient.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|i| i as u32 + 1)
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, alpha: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (j, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc += a * binomial(alpha, j as u32 + 1);
            }
        }
        acc
    }

    /// Recovers the coefficients from exact values at `alpha = 0..=degree`
    /// (forward differences), then verifies every provided sample.
    ///
    /// Values at further alphas act as consistency witnesses: if the data
    /// needs degree above `degree`, or f(0) != 0, the claimed form is
    /// violated and the extraction fails.
    pub fn extract(values: &[(i64, BigInt)], degree: u32) -> Result<Self, BinomialError> {
        let mut at = std::collections::BTreeMap::new();
        for (alpha, v) in values {
            at.insert(*alpha, v.clone());
        }
        for alpha in 0..=degree as i64 {
            if !at.contains_key(&alpha) {
                return Err(BinomialError::MissingSamples { degree });
            }
        }
        if !at[&0].is_zero() {
            return Err(BinomialError::NonzeroAtOrigin);
        }
        // Forward differences at 0: a_j = Δ^j f(0).
        let mut row: Vec<BigInt> = (0..=degree as i64).map(|a| at[&a].clone()).collect();
        let mut coeffs = Vec::with_capacity(degree as usize);
        for _ in 1..=degree {
            row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
            coeffs.push(row[0].clone());
        }
        let poly = BinomialPolynomial::new(coeffs);
        for (alpha, v) in &at {
            if &poly.eval(&BigInt::from(*alpha)) != v {
                return Err(BinomialError::FormViolation {
                    degree,
                    alpha: *alpha,
                });
            }
        }
        Ok(poly)
    }
}

impl std::fmt::Display for BinomialPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.is_one() {
                write!(f, "C(a,{})", j + 1)?;
            } else {
                write!(f, "{}*C(a,{})", a, j + 1)?;
            }
        }
        Ok(())
    }
}
