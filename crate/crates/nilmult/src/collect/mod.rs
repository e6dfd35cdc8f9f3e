//! Exact arithmetic in free nilpotent groups via the collection process.
//!
//! [`FreeNilpotentGroup`] fixes a generator count n and class bound k and
//! owns the Hall basis of weight <= k. Elements are canonical exponent
//! vectors over that basis. Two independent routes produce them:
//!
//! * the collection process, rewriting positive words letter by letter
//!   (`collect_positive_letters`), and
//! * the truncated series model (`magnus`), which also powers
//!   multiplication, inversion, and powers of normal forms.
//!
//! Negative letters are handled by splitting a word into maximal sign runs,
//! collecting each run's positive core, and folding the runs together with
//! group multiplication and inversion.

pub mod binomial;
pub mod magnus;
pub mod oracle;
mod strip;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hall::{HallBasis, HallError, Node};
use crate::words::Word;
use magnus::{lie_bracket, lie_generator, Mono, Series};
use strip::{StratumSolver, StripError};

/// Default cap on the Hall basis size of a collection context.
pub const DEFAULT_BASIS_CAP: u64 = 5000;

/// Positive runs at most this long are collected letter by letter; longer
/// runs route through the series backend, whose cost is polynomial in the
/// run length instead of in the size of the resulting exponents.
const LETTER_RUN_LIMIT: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CollectError {
    #[error("word uses generator x{index} but the group has only {n} generators")]
    GeneratorOutOfRange { index: u32, n: u32 },
    #[error("elements belong to N({got_n},{got_k}), expected N({n},{k})")]
    ContextMismatch { n: u32, k: u32, got_n: u32, got_k: u32 },
    #[error(transparent)]
    Basis(#[from] HallError),
    #[error("parameters out of range: need 1 <= n <= 15 and 1 <= k <= 12")]
    BadParameters,
    #[error("internal inconsistency while collecting: {0}")]
    Internal(#[from] StripError),
}

/// Normal form in the free nilpotent group N(n, k): exponents over the Hall
/// basis, absent keys meaning exponent zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NilpotentElement {
    n: u32,
    k: u32,
    exps: BTreeMap<usize, BigInt>,
}

impl NilpotentElement {
    pub fn is_identity(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, rank: usize) -> BigInt {
        self.exps.get(&rank).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonzero exponents in ascending rank order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.exps.iter().map(|(&r, e)| (r, e))
    }

    pub fn context(&self) -> (u32, u32) {
        (self.n, self.k)
    }
}

/// The free nilpotent group N(n, k) = F/γ_{k+1}(F) on n generators.
pub struct FreeNilpotentGroup {
    basis: HallBasis,
    n: u32,
    k: u32,
    /// Lie expansion of each basic commutator, eager (cheap).
    lie: Vec<(u32, BTreeMap<Mono, BigInt>)>,
    /// Group series of each basic commutator, built on first use.
    series: Vec<OnceLock<Series>>,
    /// Per-weight solvers for reading exponents off a series.
    solvers: Vec<OnceLock<Result<StratumSolver, StripError>>>,
}

impl FreeNilpotentGroup {
    pub fn new(n: u32, k: u32) -> Result<Self, CollectError> {
        Self::new_capped(n, k, DEFAULT_BASIS_CAP)
    }

    pub fn new_capped(n: u32, k: u32, basis_cap: u64) -> Result<Self, CollectError> {
        if n < 1 || k < 1 || n > magnus::MAX_GENERATORS || k > magnus::MAX_CLASS {
            return Err(CollectError::BadParameters);
        }
        let basis = HallBasis::generate_capped(n, k, basis_cap)?;
        let mut lie: Vec<(u32, BTreeMap<Mono, BigInt>)> = Vec::with_capacity(basis.len());
        for r in 0..basis.len() {
            let expansion = match basis.entry(r).node {
                Node::Leaf(g) => lie_generator(g.index()),
                Node::Bracket { left, right } => lie_bracket(&lie[left], &lie[right]),
            };
            lie.push(expansion);
        }
        let series = (0..basis.len()).map(|_| OnceLock::new()).collect();
        let solvers = (0..=k as usize).map(|_| OnceLock::new()).collect();
        Ok(FreeNilpotentGroup {
            basis,
            n,
            k,
            lie,
            series,
            solvers,
        })
    }

    pub fn generator_count(&self) -> u32 {
        self.n
    }

    pub fn class(&self) -> u32 {
        self.k
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn identity(&self) -> NilpotentElement {
        NilpotentElement {
            n: self.n,
            k: self.k,
            exps: BTreeMap::new(),
        }
    }

    /// The image of generator `x_i`.
    pub fn generator(&self, i: u32) -> Result<NilpotentElement, CollectError> {
        if i < 1 || i > self.n {
            return Err(CollectError::GeneratorOutOfRange { index: i, n: self.n });
        }
        let mut exps = BTreeMap::new();
        exps.insert(self.basis.leaf_rank(i), BigInt::one());
        Ok(NilpotentElement {
            n: self.n,
            k: self.k,
            exps,
        })
    }

    /// The basis element `c_rank` as a group element.
    pub fn basis_element(&self, rank: usize) -> NilpotentElement {
        let mut exps = BTreeMap::new();
        exps.insert(rank, BigInt::one());
        NilpotentElement {
            n: self.n,
            k: self.k,
            exps,
        }
    }

    fn check_context(&self, e: &NilpotentElement) -> Result<(), CollectError> {
        if (e.n, e.k) != (self.n, self.k) {
            return Err(CollectError::ContextMismatch {
                n: self.n,
                k: self.k,
                got_n: e.n,
                got_k: e.k,
            });
        }
        Ok(())
    }

    fn element(&self, exps: BTreeMap<usize, BigInt>) -> NilpotentElement {
        NilpotentElement {
            n: self.n,
            k: self.k,
            exps,
        }
    }

    // ----- series backend -------------------------------------------------

    /// Series of one basic commutator, as a group element.
    fn basis_series(&self, rank: usize) -> &Series {
        self.series[rank].get_or_init(|| match self.basis.entry(rank).node {
            Node::Leaf(g) => Series::generator(self.n, self.k, g.index()),
            Node::Bracket { left, right } => {
                Series::commutator(self.basis_series(left), self.basis_series(right))
            }
        })
    }

    /// Series of a whole normal form.
    pub fn series_of(&self, e: &NilpotentElement) -> Series {
        let mut acc = Series::one(self.n, self.k);
        for (rank, exp) in &e.exps {
            acc = acc.mul(&self.basis_series(*rank).pow(exp));
        }
        acc
    }

    /// Series of a free-group word.
    pub fn series_of_word(&self, w: &Word) -> Result<Series, CollectError> {
        if w.max_generator() > self.n {
            return Err(CollectError::GeneratorOutOfRange {
                index: w.max_generator(),
                n: self.n,
            });
        }
        let mut acc = Series::one(self.n, self.k);
        for l in w.letters() {
            let g = Series::generator(self.n, self.k, l.gen.index());
            let g = if l.inverse { g.inverse() } else { g };
            acc = acc.mul(&g);
        }
        Ok(acc)
    }

    fn solver(&self, w: u32) -> Result<&StratumSolver, CollectError> {
        self.solvers[w as usize]
            .get_or_init(|| {
                let ranks: Vec<usize> = self.basis.stratum(w).collect();
                let columns: Vec<BTreeMap<Mono, BigInt>> =
                    ranks.iter().map(|&r| self.lie[r].1.clone()).collect();
                StratumSolver::build(w, ranks, columns)
            })
            .as_ref()
            .map_err(|e| CollectError::Internal(e.clone()))
    }

    /// Reads the exponent vector off a unit series by stripping one weight
    /// stratum at a time.
    pub fn strip_series(&self, series: &Series) -> Result<NilpotentElement, CollectError> {
        let mut g = series.clone();
        let mut exps: BTreeMap<usize, BigInt> = BTreeMap::new();
        for w in 1..=self.k {
            let stratum: Vec<usize> = self.basis.stratum(w).collect();
            let v = g.homogeneous(w).clone();
            if stratum.is_empty() {
                if !v.is_empty() {
                    return Err(CollectError::Internal(StripError::Inconsistent { weight: w }));
                }
                continue;
            }
            if v.is_empty() {
                continue;
            }
            let solver = self.solver(w)?;
            let stratum_exps = solver.solve(w, &v)?;
            let mut head = Series::one(self.n, self.k);
            for (rank, e) in solver.ranks.iter().zip(&stratum_exps) {
                if e.is_zero() {
                    continue;
                }
                head = head.mul(&self.basis_series(*rank).pow(e));
                exps.insert(*rank, e.clone());
            }
            g = head.inverse().mul(&g);
        }
        if !g.is_one() {
            return Err(CollectError::Internal(StripError::Inconsistent {
                weight: self.k,
            }));
        }
        Ok(self.element(exps))
    }

    // ----- collection process ---------------------------------------------

    /// Hall collection of a positive word, given as 1-based generator
    /// indices. Rewrites `v·u -> u·v·[v,u]` on unit letters, always moving
    /// the leftmost occurrence of the smallest uncollected basis element, so
    /// every created commutator is again basic; weight overflow truncates to
    /// the identity.
    pub fn collect_positive_letters(
        &self,
        gens: &[u32],
    ) -> Result<NilpotentElement, CollectError> {
        for &g in gens {
            if g < 1 || g > self.n {
                return Err(CollectError::GeneratorOutOfRange { index: g, n: self.n });
            }
        }
        let mut word: Vec<usize> = gens.iter().map(|&g| self.basis.leaf_rank(g)).collect();
        let mut tally: BTreeMap<usize, BigInt> = BTreeMap::new();
        while !word.is_empty() {
            let r = *word.iter().min().unwrap();
            loop {
                let Some(j) = word.iter().position(|&x| x == r) else {
                    break;
                };
                let mut pos = j;
                while pos > 0 {
                    let v = word[pos - 1];
                    debug_assert!(v > r, "marching letter must be the stage minimum");
                    word[pos - 1] = r;
                    word[pos] = v;
                    if self.basis.weight(v) + self.basis.weight(r) <= self.k {
                        let c = self
                            .basis
                            .bracket_rank(v, r)
                            .expect("collection creates only basic commutators");
                        word.insert(pos + 1, c);
                    }
                    pos -= 1;
                }
                word.remove(0);
                let entry = tally.entry(r).or_insert_with(BigInt::zero);
                *entry += 1;
            }
        }
        tally.retain(|_, e| !e.is_zero());
        Ok(self.element(tally))
    }

    /// Canonical normal form of a word in N(n, k).
    ///
    /// The word is split into maximal sign runs; each positive core is
    /// collected (letter collection for short runs, the series route for
    /// long ones), negative runs are folded in as inverses per
    /// `u^-1 v^-1 = (v u)^-1`, and the pieces are multiplied together.
    pub fn normal_form(&self, w: &Word) -> Result<NilpotentElement, CollectError> {
        if w.max_generator() > self.n {
            return Err(CollectError::GeneratorOutOfRange {
                index: w.max_generator(),
                n: self.n,
            });
        }
        let mut acc = self.identity();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let inverse = letters[i].inverse;
            let mut j = i;
            while j < letters.len() && letters[j].inverse == inverse {
                j += 1;
            }
            let mut gens: Vec<u32> = letters[i..j].iter().map(|l| l.gen.index()).collect();
            if inverse {
                gens.reverse();
            }
            let run = if gens.len() <= LETTER_RUN_LIMIT {
                self.collect_positive_letters(&gens)?
            } else {
                let mut s = Series::one(self.n, self.k);
                for &g in &gens {
                    s = s.mul(&Series::generator(self.n, self.k, g));
                }
                self.strip_series(&s)?
            };
            let run = if inverse { self.inverse(&run)? } else { run };
            acc = self.multiply(&acc, &run)?;
            i = j;
        }
        Ok(acc)
    }

    /// Normal form computed purely through the series model; used to
    /// cross-check the collection route.
    pub fn normal_form_via_series(&self, w: &Word) -> Result<NilpotentElement, CollectError> {
        let s = self.series_of_word(w)?;
        self.strip_series(&s)
    }

    // ----- group operations -----------------------------------------------

    pub fn multiply(
        &self,
        a: &NilpotentElement,
        b: &NilpotentElement,
    ) -> Result<NilpotentElement, CollectError> {
        self.check_context(a)?;
        self.check_context(b)?;
        if a.is_identity() {
            return Ok(b.clone());
        }
        if b.is_identity() {
            return Ok(a.clone());
        }
        let s = self.series_of(a).mul(&self.series_of(b));
        self.strip_series(&s)
    }

    pub fn inverse(&self, a: &NilpotentElement) -> Result<NilpotentElement, CollectError> {
        self.check_context(a)?;
        if a.is_identity() {
            return Ok(a.clone());
        }
        let s = self.series_of(a).inverse();
        self.strip_series(&s)
    }

    /// `a^e` for any integer e; negative exponents go through the inverse.
    pub fn power(
        &self,
        a: &NilpotentElement,
        e: &BigInt,
    ) -> Result<NilpotentElement, CollectError> {
        self.check_context(a)?;
        if e.is_zero() || a.is_identity() {
            return Ok(self.identity());
        }
        let s = self.series_of(a).pow(e);
        self.strip_series(&s)
    }

    pub fn commutator(
        &self,
        a: &NilpotentElement,
        b: &NilpotentElement,
    ) -> Result<NilpotentElement, CollectError> {
        let ai = self.inverse(a)?;
        let bi = self.inverse(b)?;
        let left = self.multiply(&ai, &bi)?;
        let right = self.multiply(a, b)?;
        self.multiply(&left, &right)
    }

    /// Product-of-powers rendering such as `x1^2 x2 [x2,x1]^3`.
    pub fn display_element(&self, e: &NilpotentElement) -> String {
        if e.is_identity() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (rank, exp) in &e.exps {
            if !out.is_empty() {
                out.push(' ');
            }
            let name = self.basis.notation(*rank);
            if exp.is_one() {
                out.push_str(&name);
            } else {
                let _ = write!(out, "{name}^{exp}");
            }
        }
        out
    }
}
