//! Mechanical verification of the two power-expansion identities behind the
//! exponent bound: the collected form of a power of a product, and the
//! expansion of a commutator with one argument raised to a power.
//!
//! Both verifiers work inside N(r, k) with the generators as arguments,
//! extract each residual exponent as a binomial polynomial in the power, and
//! report the full coefficient tables together with every structural check.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::binomial::{BinomialError, BinomialPolynomial};
use super::{CollectError, FreeNilpotentGroup};
use crate::words::{OuterTemplate, TemplateError, Word};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("expansion lemma requires r < k (got r={r}, k={k})")]
    HypothesisViolated { r: u32, k: u32 },
    #[error("position must satisfy 1 <= i <= r (got i={i}, r={r})")]
    BadPosition { i: u32, r: u32 },
    #[error("alpha_max={alpha_max} cannot pin coefficients up to degree {need}")]
    InsufficientAlphaRange { alpha_max: i64, need: u32 },
    #[error("need r >= 2 and k >= 2 (got r={r}, k={k})")]
    BadParameters { r: u32, k: u32 },
    #[error("template has weight {got}, expected {expected}")]
    TemplateWeight { expected: usize, got: usize },
    #[error(transparent)]
    Collect(#[from] CollectError),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// Extracted binomial polynomial for one basic commutator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoefficientRow {
    /// 1-based rank in the Hall order.
    pub rank: usize,
    pub commutator: String,
    pub weight: u32,
    /// Binomial degree allowed for this row.
    pub degree: u32,
    /// Coefficients a_1..a_degree, decimal strings.
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Lemma22Report {
    pub r: u32,
    pub k: u32,
    pub alpha_max: i64,
    pub rows: Vec<CoefficientRow>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Lemma23Report {
    pub r: u32,
    pub k: u32,
    pub position: u32,
    pub alpha_max: i64,
    pub template: String,
    pub rows: Vec<Lemma23Row>,
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Lemma23Row {
    pub rank: usize,
    pub commutator: String,
    pub weight: u32,
    /// Allowed binomial degree: weight - (r - 1).
    pub degree: u32,
    /// The truncation index weight - r + 1; always at most k here.
    pub k_index: u32,
    pub coefficients: Vec<String>,
}

fn coeff_strings(p: &BinomialPolynomial) -> Vec<String> {
    p.coefficients().iter().map(|c| c.to_string()).collect()
}

/// Collects `(x_1 ... x_r)^alpha` for alpha = 0..=alpha_max and extracts the
/// binomial polynomial of every basic commutator of weight at least two.
///
/// Checks: the generator block is `x_1^alpha ... x_r^alpha` (the identity
/// permutation, with exponent exactly alpha), each extracted polynomial has
/// integer coefficients, vanishes at zero, and round-trips every sampled
/// alpha at degree bounded by the commutator's weight.
pub fn verify_lemma22(r: u32, k: u32, alpha_max: i64) -> Result<Lemma22Report, VerifyError> {
    if r < 2 || k < 2 {
        return Err(VerifyError::BadParameters { r, k });
    }
    if alpha_max < k as i64 {
        return Err(VerifyError::InsufficientAlphaRange {
            alpha_max,
            need: k,
        });
    }
    let group = FreeNilpotentGroup::new(r, k)?;
    let mut base = Word::identity();
    for i in 1..=r {
        base = base.concat(&Word::generator(i));
    }
    let base_nf = group.normal_form(&base)?;

    let mut failures: Vec<String> = Vec::new();
    let mut per_alpha = Vec::new();
    for alpha in 0..=alpha_max {
        let nf = group.power(&base_nf, &BigInt::from(alpha))?;
        // Cross-check against direct collection of the power word while the
        // word stays small.
        if alpha <= 3 {
            let direct = group.normal_form(&base.pow(alpha))?;
            if direct != nf {
                failures.push(format!(
                    "power({alpha}) disagrees with collecting the explicit word"
                ));
            }
        }
        for i in 1..=r {
            let leaf = group.basis().leaf_rank(i);
            if nf.exponent(leaf) != BigInt::from(alpha) {
                failures.push(format!(
                    "alpha={alpha}: generator x{i} exponent {} instead of {alpha}",
                    nf.exponent(leaf)
                ));
            }
        }
        per_alpha.push(nf);
    }

    let mut rows = Vec::new();
    for rank in 0..group.basis().len() {
        let weight = group.basis().weight(rank);
        if weight < 2 {
            continue;
        }
        let values: Vec<(i64, BigInt)> = per_alpha
            .iter()
            .enumerate()
            .map(|(alpha, nf)| (alpha as i64, nf.exponent(rank)))
            .collect();
        match BinomialPolynomial::extract(&values, weight) {
            Ok(poly) => rows.push(CoefficientRow {
                rank: rank + 1,
                commutator: group.basis().notation(rank),
                weight,
                degree: weight,
                coefficients: coeff_strings(&poly),
            }),
            Err(err) => failures.push(format!(
                "{}: {err}",
                group.basis().notation(rank)
            )),
        }
    }

    Ok(Lemma22Report {
        r,
        k,
        alpha_max,
        passed: failures.is_empty(),
        rows,
        failures,
    })
}

/// Verifies the expansion of `t(x_1,..,x_i^alpha,..,x_r)` against
/// `t(x_1,..,x_r)^alpha` times a residual of basic commutators, for the
/// left-normed default or an arbitrary outer template `t` of weight r.
///
/// Checks, for every alpha in 0..=alpha_max: the residual is supported on
/// basic commutators of weight strictly greater than r that involve every
/// argument, and each residual exponent is a binomial polynomial of degree
/// at most weight - (r - 1).
pub fn verify_lemma23(
    r: u32,
    k: u32,
    position: u32,
    alpha_max: i64,
    template: Option<&OuterTemplate>,
) -> Result<Lemma23Report, VerifyError> {
    if r < 2 || k < 2 {
        return Err(VerifyError::BadParameters { r, k });
    }
    if r >= k {
        return Err(VerifyError::HypothesisViolated { r, k });
    }
    if position < 1 || position > r {
        return Err(VerifyError::BadPosition { i: position, r });
    }
    let default_template;
    let template = match template {
        Some(t) => t,
        None => {
            default_template = OuterTemplate::left_normed(r);
            &default_template
        }
    };
    template.validate()?;
    if template.weight() != r as usize {
        return Err(VerifyError::TemplateWeight {
            expected: r as usize,
            got: template.weight(),
        });
    }
    let max_degree = k - (r - 1);
    if alpha_max < max_degree as i64 {
        return Err(VerifyError::InsufficientAlphaRange {
            alpha_max,
            need: max_degree,
        });
    }

    let group = FreeNilpotentGroup::new(r, k)?;
    let args: Vec<Word> = (1..=r).map(Word::generator).collect();
    let base = template.instantiate(&args)?;
    let base_nf = group.normal_form(&base)?;
    let full_support = r;

    let mut failures = Vec::new();
    let mut residuals = Vec::new();
    for alpha in 0..=alpha_max {
        let mut powered_args = args.clone();
        powered_args[(position - 1) as usize] = Word::generator(position).pow(alpha);
        let lhs = group.normal_form(&template.instantiate(&powered_args)?)?;
        let rhs_base = group.power(&base_nf, &BigInt::from(alpha))?;
        let residual = group.multiply(&group.inverse(&rhs_base)?, &lhs)?;
        for (rank, exp) in residual.factors() {
            if exp.is_zero() {
                continue;
            }
            let weight = group.basis().weight(rank);
            if weight <= r {
                failures.push(format!(
                    "alpha={alpha}: residual {} has weight {weight} <= r",
                    group.basis().notation(rank)
                ));
            }
            if group.basis().support_size(rank) != full_support {
                failures.push(format!(
                    "alpha={alpha}: residual {} misses an argument",
                    group.basis().notation(rank)
                ));
            }
        }
        if alpha == 0 && !residual.is_identity() {
            failures.push("alpha=0: both sides must be the identity".to_string());
        }
        residuals.push(residual);
    }

    let mut touched: Vec<usize> = residuals
        .iter()
        .flat_map(|d| d.factors().map(|(r, _)| r))
        .collect();
    touched.sort_unstable();
    touched.dedup();

    let mut rows = Vec::new();
    for rank in touched {
        let weight = group.basis().weight(rank);
        let degree = weight.saturating_sub(r - 1);
        let values: Vec<(i64, BigInt)> = residuals
            .iter()
            .enumerate()
            .map(|(alpha, d)| (alpha as i64, d.exponent(rank)))
            .collect();
        match BinomialPolynomial::extract(&values, degree) {
            Ok(poly) => rows.push(Lemma23Row {
                rank: rank + 1,
                commutator: group.basis().notation(rank),
                weight,
                degree,
                k_index: weight - r + 1,
                coefficients: coeff_strings(&poly),
            }),
            Err(err @ BinomialError::FormViolation { .. })
            | Err(err @ BinomialError::NonzeroAtOrigin)
            | Err(err @ BinomialError::MissingSamples { .. }) => failures.push(format!(
                "{}: {err}",
                group.basis().notation(rank)
            )),
        }
    }

    Ok(Lemma23Report {
        r,
        k,
        position,
        alpha_max,
        template: template.to_string(),
        passed: failures.is_empty(),
        rows,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_template;

    #[test]
    fn power_expansion_rank2_class2() {
        let report = verify_lemma22(2, 2, 10).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert_eq!(row.commutator, "[x2,x1]");
        // f = C(alpha, 2)
        assert_eq!(row.coefficients, vec!["0", "1"]);
    }

    #[test]
    fn power_expansion_rank2_class3_degrees() {
        let report = verify_lemma22(2, 3, 10).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        for row in &report.rows {
            assert!(row.degree <= 3);
            assert_eq!(row.coefficients.len(), row.weight as usize);
        }
        let named: Vec<&str> = report.rows.iter().map(|r| r.commutator.as_str()).collect();
        assert!(named.contains(&"[[x2,x1],x1]"));
        assert!(named.contains(&"[[x2,x1],x2]"));
    }

    #[test]
    fn power_expansion_three_generators_class2() {
        let report = verify_lemma22(3, 2, 5).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert_eq!(row.coefficients, vec!["0", "1"], "{}", row.commutator);
        }
    }

    #[test]
    fn commutator_power_expansion_smallest_case() {
        // [x1^alpha, x2] = [x1,x2]^alpha * residual, residual on
        // [[x2,x1],x1] with exponent -C(alpha,2).
        let report = verify_lemma23(2, 3, 1, 8, None).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        let row = report
            .rows
            .iter()
            .find(|r| r.commutator == "[[x2,x1],x1]")
            .expect("residual row");
        assert_eq!(row.degree, 2);
        assert_eq!(row.k_index, 2);
        // [x1^a, x2] = [x1,x2]^a [[x2,x1],x1]^(-C(a,2)): hand expansion via
        // [xy,z] = [x,z][x,z,y][y,z] at x = y = x1, z = x2, class 3.
        assert_eq!(row.coefficients, vec!["0", "-1"]);
    }

    #[test]
    fn commutator_power_alpha_zero_is_identity() {
        let report = verify_lemma23(2, 3, 1, 3, None).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn commutator_power_residual_weights_in_range() {
        let report = verify_lemma23(2, 4, 2, 8, None).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        for row in &report.rows {
            assert!(row.weight == 3 || row.weight == 4, "{}", row.commutator);
        }
    }

    #[test]
    fn non_left_normed_outer_template() {
        let t = parse_template("[1,[2,3]]").unwrap();
        let report = verify_lemma23(3, 5, 2, 8, Some(&t)).unwrap();
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(report.template, "[1,[2,3]]");
    }

    #[test]
    fn hypothesis_r_below_k_is_enforced() {
        assert!(matches!(
            verify_lemma23(3, 3, 1, 8, None),
            Err(VerifyError::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn full_grid_for_both_lemmas() {
        for r in 2..=3u32 {
            for k in 2..=5u32 {
                let report = verify_lemma22(r, k, 12).unwrap();
                assert!(report.passed, "r={r} k={k}: {:?}", report.failures);
                if r < k {
                    for i in 1..=r {
                        let report = verify_lemma23(r, k, i, 8, None).unwrap();
                        assert!(report.passed, "r={r} k={k} i={i}: {:?}", report.failures);
                    }
                }
            }
        }
    }
}
