//! `nilmult`: exact commutator calculus and multiplier bound verification
//! from the command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.

use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nilmult::bounds::{improvement_conditions, profile, VerifyCaps};
use nilmult::collect::verify::{verify_lemma22, verify_lemma23};
use nilmult::collect::FreeNilpotentGroup;
use nilmult::corpus::{parse_corpus_file, run_corpus, CorpusConfig};
use nilmult::group::families::{parse_group_spec, parse_table_file};
use nilmult::group::homology::schur_multiplier_capped;
use nilmult::group::FiniteGroup;
use nilmult::hall::{BasisRow, HallBasis, DEFAULT_GENERATE_CAP};
use nilmult::padic::{lemma25_sweep, ValuationRecord};
use nilmult::words::{parse_template, parse_word};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "nilmult", version, about = "Commutator calculus and multiplier exponent bounds, exactly")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the ordered Hall basis of basic commutators.
    Hall {
        #[arg(long)]
        generators: u32,
        #[arg(long = "max-weight")]
        max_weight: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Refuse to generate more than this many commutators.
        #[arg(long, default_value_t = DEFAULT_GENERATE_CAP)]
        cap: u64,
    },
    /// Collect a word into its normal form in the free nilpotent group.
    Collect {
        #[arg(long)]
        generators: u32,
        #[arg(long)]
        class: u32,
        /// Word syntax: x1, x2^-1, juxtaposition, [u,v], (u)^n.
        #[arg(long)]
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the mechanical verifications.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Sweep the binomial divisibility check over k and t for one prime.
    Lemma25 {
        #[arg(long)]
        p: u64,
        #[arg(long = "k-max")]
        k_max: u64,
        #[arg(long = "t-max")]
        t_max: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compute the Schur multiplier of a finite group.
    Multiplier {
        /// Group spec such as dihedral:16, abelian:4,2, heisenberg:3,
        /// product:dihedral:8+cyclic:3.
        #[arg(long, conflicts_with = "table")]
        group: Option<String>,
        /// Multiplication table file (line 1: order; then the table rows).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Homology cap override (also via NILMULT_MAX_ORDER).
        #[arg(long = "max-order")]
        max_order: Option<usize>,
    },
    /// Evaluate the exponent bounds for given p, e, k.
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Verify the collected form of (x1...xr)^alpha and extract every
    /// binomial coefficient table.
    Lemma22 {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        class: u32,
        #[arg(long = "alpha-max", default_value_t = 12)]
        alpha_max: i64,
        #[arg(long)]
        json: bool,
    },
    /// Verify the expansion of an outer commutator with one argument raised
    /// to a power.
    Lemma23 {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        class: u32,
        /// Which argument carries the power (1-based).
        #[arg(long, default_value_t = 1)]
        position: u32,
        #[arg(long = "alpha-max", default_value_t = 8)]
        alpha_max: i64,
        /// Outer template such as [1,[2,3]]; defaults to left-normed.
        #[arg(long)]
        template: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run the divisibility checks over the whole corpus.
    Corpus {
        #[arg(long = "max-order")]
        max_order: Option<usize>,
        /// Write the full JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Read group specs from a file instead of the built-in corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn env_max_order() -> Option<usize> {
    std::env::var("NILMULT_MAX_ORDER").ok()?.parse().ok()
}

fn caps_with(max_order: Option<usize>) -> VerifyCaps {
    let mut caps = VerifyCaps::default();
    if let Some(mo) = max_order.or_else(env_max_order) {
        caps.homology_max_order = mo;
    }
    caps
}

#[derive(Serialize)]
struct HallReport {
    version: String,
    generators: u32,
    max_weight: u32,
    cap: u64,
    count: usize,
    rows: Vec<BasisRow>,
}

#[derive(Serialize)]
struct CollectReport {
    version: String,
    generators: u32,
    class: u32,
    word: String,
    normal_form: Vec<CollectFactor>,
    display: String,
}

#[derive(Serialize)]
struct CollectFactor {
    rank: usize,
    commutator: String,
    exponent: String,
}

#[derive(Serialize)]
struct Lemma25Report {
    version: String,
    p: u64,
    k_max: u64,
    t_max: u64,
    passed: bool,
    records: Vec<ValuationRecord>,
}

#[derive(Serialize)]
struct MultiplierReport {
    version: String,
    caps: VerifyCaps,
    group: String,
    order: usize,
    exponent: u64,
    class: Option<u32>,
    p: Option<u64>,
    multiplier_invariants: Vec<u64>,
    multiplier_exponent: u64,
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Hall {
            generators,
            max_weight,
            format,
            cap,
        } => {
            let basis = HallBasis::generate_capped(generators, max_weight, cap)?;
            let report = HallReport {
                version: VERSION.into(),
                generators,
                max_weight,
                cap,
                count: basis.len(),
                rows: basis.rows(),
            };
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                Format::Text => {
                    println!("rank  weight  commutator");
                    for row in &report.rows {
                        println!("{:<5} {:<7} {}", row.rank, row.weight, row.commutator);
                    }
                }
            }
            Ok(0)
        }
        Cmd::Collect {
            generators,
            class,
            word,
            json,
        } => {
            let w = parse_word(&word).map_err(|e| anyhow!("bad word {word:?}: {e}"))?;
            let group = FreeNilpotentGroup::new(generators, class)?;
            let nf = group.normal_form(&w)?;
            let report = CollectReport {
                version: VERSION.into(),
                generators,
                class,
                word: word.clone(),
                normal_form: nf
                    .factors()
                    .map(|(rank, exp)| CollectFactor {
                        rank: rank + 1,
                        commutator: group.basis().notation(rank),
                        exponent: exp.to_string(),
                    })
                    .collect(),
                display: group.display_element(&nf),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{}", report.display);
            }
            Ok(0)
        }
        Cmd::Verify { what } => verify(what),
        Cmd::Lemma25 {
            p,
            k_max,
            t_max,
            json,
        } => {
            let records = lemma25_sweep(p, k_max, t_max)?;
            let passed = records.iter().all(|r| r.holds);
            let report = Lemma25Report {
                version: VERSION.into(),
                p,
                k_max,
                t_max,
                passed,
                records,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("p     k     t     m     v_p   holds");
                for r in &report.records {
                    println!(
                        "{:<5} {:<5} {:<5} {:<5} {:<5} {}",
                        r.p, r.k, r.t, r.m, r.valuation, r.holds
                    );
                }
                println!(
                    "{}: p^t | C(p^(m+t), k) for all k <= {k_max}, t <= {t_max}",
                    if passed { "pass" } else { "FAIL" }
                );
            }
            Ok(if passed { 0 } else { 1 })
        }
        Cmd::Multiplier {
            group,
            table,
            json,
            max_order,
        } => {
            let g = load_group(group.as_deref(), table.as_deref())?;
            let caps = caps_with(max_order);
            let multiplier = schur_multiplier_capped(&g, caps.homology_max_order)?;
            let report = MultiplierReport {
                version: VERSION.into(),
                caps,
                group: g.label().to_string(),
                order: g.order(),
                exponent: g.exponent(),
                class: g.nilpotency_class(),
                p: g.is_p_group(),
                multiplier_invariants: multiplier.factors().to_vec(),
                multiplier_exponent: multiplier.exponent(),
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("group: {}", report.group);
                println!("order: {}", report.order);
                println!("exponent: {}", report.exponent);
                match report.class {
                    Some(k) => println!("class: {k}"),
                    None => println!("class: not nilpotent"),
                }
                println!("multiplier: {multiplier}");
                println!("multiplier exponent: {}", report.multiplier_exponent);
            }
            Ok(0)
        }
        Cmd::Bounds { p, e, k, json } => {
            if k >= 2 {
                let report = improvement_conditions(p, e, k);
                if json {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                } else {
                    print_profile(&report.profile);
                    println!("comparisons (printed condition vs exact inequality):");
                    for row in &report.rows {
                        println!(
                            "  vs {:<8} condition={:<5} smaller={:<5}{}",
                            row.against,
                            row.printed_condition,
                            row.strictly_smaller,
                            if row.discrepancy { "  [discrepancy]" } else { "" }
                        );
                    }
                }
            } else {
                let prof = profile(p, e, k);
                if json {
                    println!("{}", serde_json::to_string_pretty(&prof)?);
                } else {
                    print_profile(&prof);
                }
            }
            Ok(0)
        }
    }
}

fn print_profile(prof: &nilmult::bounds::BoundProfile) {
    println!(
        "p = {}, e = {}, k = {}, m = floor(log_p k) = {}",
        prof.p, prof.e, prof.k, prof.m
    );
    println!("main bound    p^(e + m(k-1)) = {}", prof.main_bound);
    match &prof.jones_bound {
        Some(b) => println!("jones bound   exp(G)^(k-1)   = {b}"),
        None => println!("jones bound   n/a (k < 2)"),
    }
    println!("ellis bound   exp(G)^ceil(k/2) = {}", prof.ellis_bound);
    match &prof.moravec_bound {
        Some(b) => println!("moravec bound exp(G)^(2 floor(log2 k)) = {b}"),
        None => println!("moravec bound n/a (k < 2)"),
    }
}

fn verify(what: VerifyCmd) -> Result<i32> {
    match what {
        VerifyCmd::Lemma22 {
            r,
            class,
            alpha_max,
            json,
        } => {
            let report = verify_lemma22(r, class, alpha_max)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "(x1...x{r})^a in the free class-{class} group, a = 0..{alpha_max}:"
                );
                println!("rank  weight  commutator            f(a) coefficients (binomial basis)");
                for row in &report.rows {
                    println!(
                        "{:<5} {:<7} {:<21} [{}]",
                        row.rank,
                        row.weight,
                        row.commutator,
                        row.coefficients.join(", ")
                    );
                }
                print_failures(report.passed, &report.failures);
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        VerifyCmd::Lemma23 {
            r,
            class,
            position,
            alpha_max,
            template,
            json,
        } => {
            let template = template
                .map(|t| parse_template(&t).map_err(|e| anyhow!("bad template: {e}")))
                .transpose()?;
            let report = verify_lemma23(r, class, position, alpha_max, template.as_ref())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!(
                    "{} with x{position}^a, class {class}, a = 0..{alpha_max}: residual table",
                    report.template
                );
                println!("rank  weight  k_i  commutator            f(a) coefficients");
                for row in &report.rows {
                    println!(
                        "{:<5} {:<7} {:<4} {:<21} [{}]",
                        row.rank,
                        row.weight,
                        row.k_index,
                        row.commutator,
                        row.coefficients.join(", ")
                    );
                }
                print_failures(report.passed, &report.failures);
            }
            Ok(if report.passed { 0 } else { 1 })
        }
        VerifyCmd::Corpus {
            max_order,
            json,
            corpus,
        } => {
            let mut config = CorpusConfig::default();
            config.caps = caps_with(None);
            if let Some(mo) = max_order {
                config.max_order = mo;
            }
            if let Some(path) = corpus {
                let text = std::fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?;
                config.specs = Some(parse_corpus_file(&text));
            }
            let report = run_corpus(&config)?;
            if let Some(path) = json {
                std::fs::write(&path, serde_json::to_string_pretty(&report)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            println!("group                                    order  kind       exp(M)  bound  ok");
            for rec in &report.records {
                let ok = if rec.kind == "skipped" {
                    "skip"
                } else if nilmult::corpus::record_passes(rec) {
                    "ok"
                } else {
                    "FAIL"
                };
                println!(
                    "{:<40} {:<6} {:<10} {:<7} {:<6} {}",
                    rec.group, rec.order, rec.kind, rec.multiplier_exponent, rec.bound, ok
                );
            }
            let s = &report.summary;
            println!(
                "total {} / passed {} / skipped {} / failed {}",
                s.total, s.passed, s.skipped, s.failed
            );
            for f in &s.failures {
                println!("failure witness: {f}");
            }
            Ok(if s.failed == 0 { 0 } else { 1 })
        }
    }
}

fn print_failures(passed: bool, failures: &[String]) {
    if passed {
        println!("pass");
    } else {
        for f in failures {
            println!("FAIL: {f}");
        }
    }
}

fn load_group(spec: Option<&str>, table: Option<&std::path::Path>) -> Result<FiniteGroup> {
    match (spec, table) {
        (Some(s), None) => Ok(parse_group_spec(s)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "table".into());
            Ok(parse_table_file(&text, label)?)
        }
        _ => Err(anyhow!("provide exactly one of --group or --table")),
    }
}
