//! Converting a unit series back into Hall-basis exponents.
//!
//! For an element with no basis exponents below weight w, the degree-w
//! component of `series - 1` equals the integer combination of the Lie
//! monomials of the weight-w basic commutators given by their exponents.
//! Those Lie monomials are linearly independent, so the exponents are the
//! unique solution of a small exact linear system, solved here with a
//! once-per-stratum Gauss-Jordan factorization over the rationals and
//! re-verified in exact integers on every call.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::magnus::Mono;

pub struct StratumSolver {
    /// Basis ranks of this stratum, ascending.
    pub ranks: Vec<usize>,
    /// Sparse Lie expansion per stratum member, aligned with `ranks`.
    columns: Vec<BTreeMap<Mono, BigInt>>,
    /// For each unknown j: the linear functional producing e_j, as pairs
    /// (monomial, rational weight) applied to the right-hand side.
    functionals: Vec<Vec<(Mono, BigRational)>>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum StripError {
    #[error("degree-{weight} component is not an integer combination of basic commutators")]
    NotIntegral { weight: u32 },
    #[error("degree-{weight} component is outside the span of basic commutators")]
    Inconsistent { weight: u32 },
    #[error("Lie expansions of the weight-{weight} stratum are not independent")]
    RankDeficient { weight: u32 },
}

impl StratumSolver {
    pub fn build(
        weight: u32,
        ranks: Vec<usize>,
        columns: Vec<BTreeMap<Mono, BigInt>>,
    ) -> Result<Self, StripError> {
        let t = ranks.len();
        assert_eq!(t, columns.len());

        // All monomials that appear in any column, in a fixed order.
        let mut monos: Vec<Mono> = columns
            .iter()
            .flat_map(|c| c.keys().copied())
            .collect();
        monos.sort_unstable();
        monos.dedup();

        // Gauss-Jordan over Q on rows indexed by monomials, tracking each
        // reduced row as a combination of original equations.
        struct Row {
            coeffs: Vec<BigRational>,
            lambda: Vec<(Mono, BigRational)>,
            pivot: usize,
        }
        let mut pivot_rows: Vec<Row> = Vec::with_capacity(t);
        let mut used_cols = vec![false; t];

        for &m in &monos {
            if pivot_rows.len() == t {
                break;
            }
            let mut coeffs: Vec<BigRational> = columns
                .iter()
                .map(|c| {
                    c.get(&m)
                        .map(|v| BigRational::from(v.clone()))
                        .unwrap_or_else(BigRational::zero)
                })
                .collect();
            let mut lambda: Vec<(Mono, BigRational)> = vec![(m, BigRational::one())];
            for row in &pivot_rows {
                let factor = coeffs[row.pivot].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..t {
                    let delta = &factor * &row.coeffs[j];
                    coeffs[j] -= delta;
                }
                for (lm, lc) in &row.lambda {
                    lambda.push((*lm, -(&factor * lc)));
                }
            }
            let Some(pivot) = (0..t).find(|&j| !used_cols[j] && !coeffs[j].is_zero()) else {
                continue;
            };
            let inv = coeffs[pivot].clone();
            for c in &mut coeffs {
                *c = &*c / &inv;
            }
            for (_, lc) in &mut lambda {
                *lc = &*lc / &inv;
            }
            // Eliminate this column from earlier rows to reach RREF.
            let new_row = Row {
                coeffs,
                lambda,
                pivot,
            };
            for row in &mut pivot_rows {
                let factor = row.coeffs[pivot].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..t {
                    let delta = &factor * &new_row.coeffs[j];
                    row.coeffs[j] -= delta;
                }
                for (lm, lc) in &new_row.lambda {
                    row.lambda.push((*lm, -(&factor * lc)));
                }
            }
            used_cols[pivot] = true;
            pivot_rows.push(new_row);
        }

        if pivot_rows.len() != t {
            return Err(StripError::RankDeficient { weight });
        }

        // In RREF with t pivots over t unknowns, row with pivot column j
        // reads e_j = lambda_j(v).
        let mut functionals: Vec<Vec<(Mono, BigRational)>> = vec![Vec::new(); t];
        for row in pivot_rows {
            let mut lambda = row.lambda;
            // Merge duplicate monomials.
            lambda.sort_by_key(|(m, _)| *m);
            let mut merged: Vec<(Mono, BigRational)> = Vec::new();
            for (m, c) in lambda {
                match merged.last_mut() {
                    Some((lm, lc)) if *lm == m => *lc += c,
                    _ => merged.push((m, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            functionals[row.pivot] = merged;
        }

        Ok(StratumSolver {
            ranks,
            columns,
            functionals,
        })
    }

    /// Solves for the stratum exponents given the homogeneous component `v`,
    /// checking integrality and re-verifying the full system exactly.
    pub fn solve(
        &self,
        weight: u32,
        v: &BTreeMap<Mono, BigInt>,
    ) -> Result<Vec<BigInt>, StripError> {
        let t = self.ranks.len();
        let mut exps = Vec::with_capacity(t);
        for lambda in &self.functionals {
            let mut acc = BigRational::zero();
            for (m, c) in lambda {
                if let Some(val) = v.get(m) {
                    acc += c * BigRational::from(val.clone());
                }
            }
            if !acc.is_integer() {
                return Err(StripError::NotIntegral { weight });
            }
            exps.push(acc.to_integer());
        }
        // Exact residual check over the integers.
        let mut residual: BTreeMap<Mono, BigInt> = v.clone();
        for (e, col) in exps.iter().zip(&self.columns) {
            if e.is_zero() {
                continue;
            }
            for (m, c) in col {
                let entry = residual.entry(*m).or_insert_with(BigInt::zero);
                *entry -= e * c;
                if entry.is_zero() {
                    residual.remove(m);
                }
            }
        }
        if !residual.is_empty() {
            return Err(StripError::Inconsistent { weight });
        }
        Ok(exps)
    }
}
