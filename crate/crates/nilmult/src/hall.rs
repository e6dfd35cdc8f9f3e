//! Hall basic commutators: generation, ordering, and counting oracles.
//!
//! Basic commutators of weight one are the generators, ordered by index.
//! A pair `[c_i, c_j]` of weight n is basic when `c_i > c_j` and, if
//! `c_i = [c_s, c_t]`, also `c_j >= c_t`. Weight strata are ordered
//! weight-first, then lexicographically on `(left, right)` within a stratum.
//! With that order, the basic commutators of weight at most k are the normal
//! form alphabet of the free nilpotent group of class k.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{Generator, Word};

/// Default cap on the number of basic commutators a single `generate` call
/// may produce.
pub const DEFAULT_GENERATE_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HallError {
    #[error("basis for n={n}, max_weight={max_weight} has {predicted} elements, above the cap {cap}")]
    CapExceeded {
        n: u32,
        max_weight: u32,
        predicted: u64,
        cap: u64,
    },
    #[error("need at least one generator and weight at least one")]
    BadParameters,
}

/// Structure of one basic commutator: a generator leaf or a bracket of two
/// earlier basis elements, referenced by rank.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Node {
    Leaf(Generator),
    /// Bracket `[left, right]` of two earlier basic commutators, by 0-based rank.
    Bracket { left: usize, right: usize },
}

/// One basic commutator inside a [`HallBasis`].
#[derive(Clone, Debug)]
pub struct BasicCommutator {
    pub node: Node,
    pub weight: u32,
    /// Bitmask of the generators appearing (bit i-1 for generator i).
    pub support: u64,
}

/// The ordered list of all basic commutators of weight at most `max_weight`
/// on generators `x1..xn`.
///
/// Ranks are 0-based positions in the global order; they are contiguous and
/// strictly increasing along the order of the definition.
pub struct HallBasis {
    n: u32,
    max_weight: u32,
    entries: Vec<BasicCommutator>,
    /// Start index of each weight stratum; `strata[w]` is the first rank of
    /// weight w+1, with a final sentinel equal to `entries.len()`.
    strata: Vec<usize>,
    /// Lookup from `(left_rank, right_rank)` to the rank of the bracket.
    pairs: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    /// Generates all basic commutators of weight `<= max_weight` on `n`
    /// generators, in ascending order, guarded by `cap`.
    pub fn generate_capped(n: u32, max_weight: u32, cap: u64) -> Result<Self, HallError> {
        if n < 1 || max_weight < 1 {
            return Err(HallError::BadParameters);
        }
        let predicted: u64 = (1..=max_weight).map(|w| witt_count(n, w)).sum();
        if predicted > cap {
            return Err(HallError::CapExceeded {
                n,
                max_weight,
                predicted,
                cap,
            });
        }

        let mut entries: Vec<BasicCommutator> = Vec::with_capacity(predicted as usize);
        let mut strata: Vec<usize> = vec![0];
        for g in 1..=n {
            entries.push(BasicCommutator {
                node: Node::Leaf(Generator::new(g)),
                weight: 1,
                support: 1u64 << (g - 1),
            });
        }
        strata.push(entries.len());

        let mut pairs = HashMap::new();
        for w in 2..=max_weight {
            let mut stratum: Vec<(usize, usize)> = Vec::new();
            // Candidate pairs (c_i, c_j) with wt(c_i) + wt(c_j) = w.
            for wi in 1..w {
                let wj = w - wi;
                let (i_lo, i_hi) = (strata[(wi - 1) as usize], strata[wi as usize]);
                let (j_lo, j_hi) = (strata[(wj - 1) as usize], strata[wj as usize]);
                for i in i_lo..i_hi {
                    for j in j_lo..j_hi {
                        // c_i > c_j, by rank.
                        if i <= j {
                            continue;
                        }
                        // If c_i = [c_s, c_t] then c_j >= c_t.
                        if let Node::Bracket { right: t, .. } = entries[i].node {
                            if j < t {
                                continue;
                            }
                        }
                        stratum.push((i, j));
                    }
                }
            }
            // Lexicographic on (left, right); ranks of lower strata are final,
            // so comparing ranks is the definition's order.
            stratum.sort_unstable();
            for (i, j) in stratum {
                let rank = entries.len();
                entries.push(BasicCommutator {
                    node: Node::Bracket { left: i, right: j },
                    weight: w,
                    support: entries[i].support | entries[j].support,
                });
                pairs.insert((i, j), rank);
            }
            strata.push(entries.len());
        }

        Ok(HallBasis {
            n,
            max_weight,
            entries,
            strata,
            pairs,
        })
    }

    /// `generate_capped` with the default cap.
    pub fn generate(n: u32, max_weight: u32) -> Result<Self, HallError> {
        Self::generate_capped(n, max_weight, DEFAULT_GENERATE_CAP)
    }

    pub fn generator_count(&self) -> u32 {
        self.n
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, rank: usize) -> &BasicCommutator {
        &self.entries[rank]
    }

    pub fn weight(&self, rank: usize) -> u32 {
        self.entries[rank].weight
    }

    pub fn entries(&self) -> &[BasicCommutator] {
        &self.entries
    }

    /// Ranks `lo..hi` of the stratum of exactly weight `w`.
    pub fn stratum(&self, w: u32) -> std::ops::Range<usize> {
        assert!(w >= 1 && w <= self.max_weight);
        self.strata[(w - 1) as usize]..self.strata[w as usize]
    }

    /// Rank of the basic commutator `[left, right]`, if that pair is basic
    /// and within the weight bound.
    pub fn bracket_rank(&self, left: usize, right: usize) -> Option<usize> {
        self.pairs.get(&(left, right)).copied()
    }

    /// Rank of the weight-one leaf for generator `g` (1-based).
    pub fn leaf_rank(&self, g: u32) -> usize {
        assert!(g >= 1 && g <= self.n);
        (g - 1) as usize
    }

    /// Whether the bracket `(left, right)` satisfies the basic-commutator
    /// conditions, independent of how the basis was generated.
    pub fn is_basic_pair(&self, left: usize, right: usize) -> bool {
        if left <= right {
            return false;
        }
        match self.entries[left].node {
            Node::Leaf(_) => true,
            Node::Bracket { right: t, .. } => right >= t,
        }
    }

    /// Structural comparison per the definition: weight first, leaves by
    /// generator index, equal-weight brackets lexicographically by
    /// `(left, right)`.
    pub fn cmp_structural(&self, a: usize, b: usize) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let (ea, eb) = (&self.entries[a], &self.entries[b]);
        match ea.weight.cmp(&eb.weight) {
            Ordering::Equal => {}
            o => return o,
        }
        match (ea.node, eb.node) {
            (Node::Leaf(ga), Node::Leaf(gb)) => ga.index().cmp(&gb.index()),
            (Node::Bracket { left: la, right: ra }, Node::Bracket { left: lb, right: rb }) => {
                match self.cmp_structural(la, lb) {
                    Ordering::Equal => self.cmp_structural(ra, rb),
                    o => o,
                }
            }
            // Strata are disjoint by weight, so a leaf never ties with a
            // bracket of equal weight.
            (Node::Leaf(_), Node::Bracket { .. }) => Ordering::Less,
            (Node::Bracket { .. }, Node::Leaf(_)) => Ordering::Greater,
        }
    }

    /// The free-group word obtained by expanding every bracket.
    pub fn word(&self, rank: usize) -> Word {
        match self.entries[rank].node {
            Node::Leaf(g) => Word::generator(g.index()),
            Node::Bracket { left, right } => {
                Word::commutator(&self.word(left), &self.word(right))
            }
        }
    }

    /// Bracket expression such as `[[x2,x1],x1]`.
    pub fn notation(&self, rank: usize) -> String {
        match self.entries[rank].node {
            Node::Leaf(g) => g.to_string(),
            Node::Bracket { left, right } => {
                format!("[{},{}]", self.notation(left), self.notation(right))
            }
        }
    }

    /// Number of distinct generators appearing in the commutator.
    pub fn support_size(&self, rank: usize) -> u32 {
        self.entries[rank].support.count_ones()
    }
}

impl fmt::Debug for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HallBasis(n={}, max_weight={}, len={})",
            self.n,
            self.max_weight,
            self.entries.len()
        )
    }
}

/// A row of the `nilmult hall` listing.
#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct BasisRow {
    pub rank: usize,
    pub weight: u32,
    pub commutator: String,
}

impl HallBasis {
    pub fn rows(&self) -> Vec<BasisRow> {
        (0..self.len())
            .map(|r| BasisRow {
                rank: r + 1,
                weight: self.weight(r),
                commutator: self.notation(r),
            })
            .collect()
    }
}

/// Moebius function, by trial factorization. Only used on tiny arguments.
fn moebius(mut n: u64) -> i64 {
    let mut primes = 0;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of basic commutators of weight exactly `w` on `n` generators:
/// the necklace count `(1/w) * sum_{d | w} mu(d) n^{w/d}`.
pub fn witt_count(n: u32, w: u32) -> u64 {
    assert!(n >= 1 && w >= 1);
    let mut total: i128 = 0;
    for d in 1..=w {
        if w % d == 0 {
            let mu = moebius(d as u64) as i128;
            if mu != 0 {
                total += mu * (n as i128).pow(w / d);
            }
        }
    }
    debug_assert!(total >= 0 && total % (w as i128) == 0);
    (total / w as i128) as u64
}

/// Number of weight-`w` basic commutators on generators `x1..xi` in which
/// every one of the `i` generators appears at least once.
pub fn count_on_exactly(i: u32, w: u32) -> u64 {
    assert!(i >= 1 && w >= 1);
    if i > w {
        // A weight-w commutator touches at most w distinct generators.
        return 0;
    }
    static MEMO: std::sync::Mutex<Option<HashMap<(u32, u32), u64>>> =
        std::sync::Mutex::new(None);
    if let Some(&hit) = MEMO.lock().unwrap().get_or_insert_default().get(&(i, w)) {
        return hit;
    }
    let basis = HallBasis::generate(i, w).expect("within cap for counting");
    let full: u64 = if i == 64 { u64::MAX } else { (1u64 << i) - 1 };
    let count = basis
        .stratum(w)
        .filter(|&r| basis.entries[r].support == full)
        .count() as u64;
    MEMO.lock().unwrap().get_or_insert_default().insert((i, w), count);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn notations(basis: &HallBasis) -> Vec<String> {
        (0..basis.len()).map(|r| basis.notation(r)).collect()
    }

    #[test]
    fn weight_one_is_the_generators_in_order() {
        let b = HallBasis::generate(2, 1).unwrap();
        assert_eq!(notations(&b), vec!["x1", "x2"]);
    }

    #[test]
    fn two_generators_up_to_weight_three() {
        let b = HallBasis::generate(2, 3).unwrap();
        assert_eq!(
            notations(&b),
            vec!["x1", "x2", "[x2,x1]", "[[x2,x1],x1]", "[[x2,x1],x2]"]
        );
    }

    #[test]
    fn three_generators_weight_two_stratum() {
        let b = HallBasis::generate(3, 2).unwrap();
        let stratum: Vec<String> = b.stratum(2).map(|r| b.notation(r)).collect();
        assert_eq!(stratum, vec!["[x2,x1]", "[x3,x1]", "[x3,x2]"]);
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_count(2, 2), 1);
        assert_eq!(witt_count(2, 5), 6);
        assert_eq!(witt_count(1, 2), 0);
        assert_eq!(witt_count(3, 3), 8);
    }

    #[test]
    fn stratum_sizes_match_witt_counts() {
        for n in 1..=4u32 {
            let b = HallBasis::generate(n, 8).unwrap();
            for w in 1..=8u32 {
                assert_eq!(
                    b.stratum(w).len() as u64,
                    witt_count(n, w),
                    "n={n}, w={w}"
                );
            }
        }
    }

    #[test]
    fn count_on_exactly_examples() {
        assert_eq!(count_on_exactly(2, 2), 1);
        assert_eq!(count_on_exactly(3, 3), 2);
        assert_eq!(count_on_exactly(1, 2), 0);
    }

    #[test]
    fn witt_decomposes_over_support_sizes() {
        // witt(i, w) = sum_j C(i, j) * count_on_exactly(j, w)
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            let mut r = 1u64;
            for j in 0..k {
                r = r * (n - j) / (j + 1);
            }
            r
        }
        for i in 1..=4u32 {
            for w in 1..=8u32 {
                let total: u64 = (1..=i.min(w))
                    .map(|j| binom(i as u64, j as u64) * count_on_exactly(j, w))
                    .sum();
                assert_eq!(total, witt_count(i, w), "i={i}, w={w}");
            }
        }
    }

    #[test]
    fn structural_order_agrees_with_rank_order() {
        let b = HallBasis::generate(4, 6).unwrap();
        // Comparator coincides with the (strict, total) integer order on
        // ranks, hence is itself a strict total order.
        for a in 0..b.len() {
            assert_eq!(b.cmp_structural(a, a), std::cmp::Ordering::Equal);
        }
        for a in 0..b.len() {
            for c in (a + 1)..b.len() {
                assert_eq!(b.cmp_structural(a, c), std::cmp::Ordering::Less, "{a} {c}");
                assert_eq!(b.cmp_structural(c, a), std::cmp::Ordering::Greater);
            }
        }
    }

    #[test]
    fn every_entry_satisfies_the_basic_conditions() {
        let b = HallBasis::generate(4, 6).unwrap();
        for r in 0..b.len() {
            match b.entry(r).node {
                Node::Leaf(_) => assert_eq!(b.weight(r), 1),
                Node::Bracket { left, right } => {
                    assert_eq!(b.weight(r), b.weight(left) + b.weight(right));
                    assert!(b.is_basic_pair(left, right), "rank {r}");
                }
            }
        }
    }

    #[test]
    fn cap_guard_refuses_oversized_requests() {
        let err = HallBasis::generate_capped(4, 8, 100).unwrap_err();
        assert!(matches!(err, HallError::CapExceeded { .. }));
    }

    #[test]
    fn bracket_rank_lookup() {
        let b = HallBasis::generate(2, 3).unwrap();
        let c = b.bracket_rank(1, 0).unwrap(); // [x2,x1]
        assert_eq!(b.notation(c), "[x2,x1]");
        assert_eq!(b.bracket_rank(c, 0), Some(3)); // [[x2,x1],x1]
        assert_eq!(b.bracket_rank(0, 1), None); // [x1,x2] is not basic
    }
}
