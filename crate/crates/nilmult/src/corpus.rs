//! The built-in verification corpus and its runner.
//!
//! The corpus covers every abelian p-group of order up to 64, the classical
//! 2-group families up to order 32, the order-27 extraspecial groups, the
//! two smallest Heisenberg groups, and a handful of nilpotent direct
//! products across primes. Each group gets one [`VerificationRecord`];
//! groups over the caps are reported as skipped, never dropped silently.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{verify_group, verify_nilpotent, BoundsError, VerificationRecord, VerifyCaps};
use crate::group::families::parse_group_spec;
use crate::group::{FiniteGroup, GroupError};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorpusConfig {
    /// Groups with larger order are reported as skipped.
    pub max_order: usize,
    pub caps: VerifyCaps,
    /// When set, replaces the built-in corpus (one group spec per entry).
    pub specs: Option<Vec<String>>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_order: crate::group::homology::DEFAULT_HOMOLOGY_CAP,
            caps: VerifyCaps::default(),
            specs: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CorpusSummary {
    pub total: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorpusReport {
    pub version: String,
    pub max_order: usize,
    pub caps: VerifyCaps,
    pub records: Vec<VerificationRecord>,
    pub summary: CorpusSummary,
}

/// Partitions of n, each sorted descending.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// The built-in corpus, as group specs.
pub fn default_corpus_specs(max_abelian_order: usize) -> Vec<String> {
    let mut specs = Vec::new();
    // All abelian p-groups of order <= max_abelian_order.
    for p in crate::padic::primes_up_to(max_abelian_order as u64) {
        let mut a = 1u32;
        while (p as u128).pow(a) <= max_abelian_order as u128 {
            for partition in partitions(a) {
                let orders: Vec<String> = partition
                    .iter()
                    .map(|&e| (p.pow(e)).to_string())
                    .collect();
                specs.push(format!("abelian:{}", orders.join(",")));
            }
            a += 1;
        }
    }
    // Classical 2-group families up to order 32.
    for order in [8usize, 16, 32] {
        specs.push(format!("dihedral:{order}"));
        specs.push(format!("quaternion:{order}"));
        if order >= 16 {
            specs.push(format!("semidihedral:{order}"));
        }
    }
    specs.push("modular:2,4".into());
    specs.push("modular:2,5".into());
    // Order 27 and 125.
    specs.push("heisenberg:3".into());
    specs.push("heisenberg:5".into());
    specs.push("extraspecial-:3".into());
    // Nilpotent non-p-groups built across primes.
    specs.push("cyclic:6".into());
    specs.push("product:dihedral:8+cyclic:3".into());
    specs.push("product:quaternion:8+cyclic:5".into());
    specs.push("product:dihedral:16+cyclic:3".into());
    specs.push("product:modular:2,4+cyclic:3".into());
    specs.push("product:heisenberg:3+cyclic:2".into());
    specs
}

fn record_for(g: &FiniteGroup, config: &CorpusConfig) -> Result<VerificationRecord, BoundsError> {
    if g.order() > config.max_order {
        return Ok(skip(g, format!("size: order {} above max order {}", g.order(), config.max_order)));
    }
    if g.is_p_group().is_some() {
        verify_group(g, &config.caps)
    } else if g.nilpotency_class().is_some() {
        verify_nilpotent(g, &config.caps)
    } else {
        Ok(skip(g, "not nilpotent: no bound applies".into()))
    }
}

fn skip(g: &FiniteGroup, reason: String) -> VerificationRecord {
    VerificationRecord {
        group: g.label().to_string(),
        order: g.order(),
        kind: "skipped".into(),
        skip_reason: Some(reason),
        p: g.is_p_group(),
        e: None,
        exponent: g.exponent(),
        class: g.nilpotency_class(),
        m: None,
        multiplier_invariants: vec![],
        multiplier_exponent: 0,
        bound: String::new(),
        bound_divides: true,
        jones_bound: None,
        jones_divides: None,
        ellis_bound: None,
        ellis_divides: None,
        moravec_bound: None,
        moravec_divides: None,
        corollary_applicable: false,
        corollary_holds: true,
    }
}

/// A record passes when every divisibility that applies to it holds.
pub fn record_passes(r: &VerificationRecord) -> bool {
    r.bound_divides
        && r.jones_divides.unwrap_or(true)
        && r.ellis_divides.unwrap_or(true)
        && r.moravec_divides.unwrap_or(true)
        && (!r.corollary_applicable || r.corollary_holds)
}

/// Runs the corpus; records are merged deterministically by label.
pub fn run_corpus(config: &CorpusConfig) -> Result<CorpusReport, BoundsError> {
    let specs = match &config.specs {
        Some(s) => s.clone(),
        None => default_corpus_specs(64),
    };
    let groups: Result<Vec<FiniteGroup>, GroupError> =
        specs.iter().map(|s| parse_group_spec(s)).collect();
    let groups = groups?;
    let mut records: Vec<VerificationRecord> = groups
        .par_iter()
        .map(|g| record_for(g, config))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|a, b| a.group.cmp(&b.group));

    let skipped = records.iter().filter(|r| r.kind == "skipped").count();
    let failures: Vec<String> = records
        .iter()
        .filter(|r| r.kind != "skipped" && !record_passes(r))
        .map(|r| r.group.clone())
        .collect();
    let summary = CorpusSummary {
        total: records.len(),
        passed: records.len() - skipped - failures.len(),
        skipped,
        failed: failures.len(),
        failures,
    };
    Ok(CorpusReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        max_order: config.max_order,
        caps: config.caps,
        records,
        summary,
    })
}

/// Parses a corpus file: one spec per line, blank lines and `#` comments
/// ignored.
pub fn parse_corpus_file(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(3).len(), 3);
        assert_eq!(partitions(6).len(), 11);
    }

    #[test]
    fn default_specs_parse_and_cover_the_families() {
        let specs = default_corpus_specs(64);
        // 2^6: 11 partitions; 2^5: 7; ...; plus odd primes and families.
        assert!(specs.iter().any(|s| s == "abelian:64"));
        assert!(specs.iter().any(|s| s == "abelian:2,2"));
        assert!(specs.iter().any(|s| s == "heisenberg:5"));
        assert!(specs.iter().any(|s| s == "semidihedral:32"));
        for s in &specs {
            parse_group_spec(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
        // No duplicates.
        let mut sorted = specs.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), specs.len());
    }

    #[test]
    fn empty_corpus_gives_empty_report() {
        let config = CorpusConfig {
            specs: Some(vec![]),
            ..Default::default()
        };
        let report = run_corpus(&config).unwrap();
        assert_eq!(report.summary.total, 0);
        assert_eq!(report.summary.failed, 0);
    }

    #[test]
    fn small_corpus_with_mixed_kinds() {
        let config = CorpusConfig {
            specs: Some(vec![
                "cyclic:4".into(),
                "dihedral:8".into(),
                "cyclic:6".into(),
                "product:dihedral:8+cyclic:3".into(),
                "abelian:3,3".into(),
            ]),
            ..Default::default()
        };
        let report = run_corpus(&config).unwrap();
        assert_eq!(report.summary.total, 5);
        assert_eq!(report.summary.failed, 0, "{:?}", report.summary.failures);
        assert_eq!(report.summary.skipped, 0);
        // Deterministic order.
        let labels: Vec<&str> = report.records.iter().map(|r| r.group.as_str()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);
    }

    #[test]
    fn oversized_groups_are_skipped_not_dropped() {
        let config = CorpusConfig {
            max_order: 10,
            specs: Some(vec!["dihedral:16".into(), "cyclic:4".into()]),
            ..Default::default()
        };
        let report = run_corpus(&config).unwrap();
        assert_eq!(report.summary.total, 2);
        assert_eq!(report.summary.skipped, 1);
        let skipped = report
            .records
            .iter()
            .find(|r| r.kind == "skipped")
            .unwrap();
        assert!(skipped.skip_reason.as_ref().unwrap().contains("size"));
    }

    #[test]
    fn corpus_file_parsing() {
        let text = "# comment\n\ncyclic:4\n  dihedral:8  \n";
        assert_eq!(parse_corpus_file(text), vec!["cyclic:4", "dihedral:8"]);
    }
}
