//! Sparse elimination over Z/p^l.
//!
//! Invariant factors of huge integer matrices whose torsion is bounded by a
//! known annihilator (here: |G| kills the homology of a finite group) can be
//! read off prime by prime, working mod p^l with l one more than the
//! p-valuation of the bound. Entries are machine words, valuations replace
//! absolute values, and the minimal-valuation pivot rule makes the
//! divisibility chain automatic.

use std::collections::BTreeMap;

/// The ring Z/p^exp with valuation bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct LocalRing {
    pub p: u64,
    pub exp: u32,
    pub modulus: u64,
}

impl LocalRing {
    pub fn new(p: u64, exp: u32) -> Self {
        assert!(p >= 2 && exp >= 1);
        let modulus = p.checked_pow(exp).expect("modulus fits in u64");
        assert!(modulus <= u32::MAX as u64, "keep p^exp within u32 range");
        LocalRing { p, exp, modulus }
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    /// Valuation of x, with `exp` standing in for infinity at x = 0.
    pub fn val(&self, x: u64) -> u32 {
        if x == 0 {
            return self.exp;
        }
        let mut v = 0;
        let mut x = x;
        while x % self.p == 0 {
            v += 1;
            x /= self.p;
        }
        v
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    /// Inverse of a unit (x coprime to p), by extended Euclid on the modulus.
    pub fn inv_unit(&self, x: u64) -> u64 {
        let m = self.modulus as i64;
        let (mut r0, mut r1) = (m, (x % self.modulus) as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert!(r0 == 1 || r0 == -1, "not a unit mod p^l");
        let s = if r0 == 1 { s0 } else { -s0 };
        s.rem_euclid(m) as u64
    }

    /// Exact quotient a / b when val(a) >= val(b): unit(a)/unit(b) * p^(va-vb).
    pub fn div_exact(&self, a: u64, b: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        let va = self.val(a);
        let vb = self.val(b);
        debug_assert!(va >= vb);
        let pa = self.p.pow(va);
        let pb = self.p.pow(vb);
        let ua = (a / pa) % self.modulus;
        let ub = (b / pb) % self.modulus;
        self.mul(self.mul(ua, self.inv_unit(ub)), (pa / pb) % self.modulus)
    }
}

/// Sparse vector over Z/p^l: (index, value) pairs, sorted, nonzero.
pub type SparseVec = Vec<(usize, u64)>;

fn sub_scaled(ring: &LocalRing, a: &SparseVec, b: &SparseVec, factor: u64) -> SparseVec {
    // a - factor * b
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = ring.neg(ring.mul(factor, b[j].1));
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = ring.sub(a[i].1, ring.mul(factor, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Streaming echelon over Z/p^l: one pivot vector per lead index, with the
/// valuation-aware swap rule. The module spanned by everything fed in is
/// preserved exactly.
pub struct LocalEchelon {
    ring: LocalRing,
    pivots: BTreeMap<usize, SparseVec>,
}

impl LocalEchelon {
    pub fn new(ring: LocalRing) -> Self {
        LocalEchelon {
            ring,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn add_vector(&mut self, mut v: SparseVec) {
        let ring = self.ring;
        loop {
            let Some(&(lead, a)) = v.first() else {
                return;
            };
            match self.pivots.get_mut(&lead) {
                None => {
                    self.pivots.insert(lead, v);
                    return;
                }
                Some(piv) => {
                    let b = piv[0].1;
                    if ring.val(b) <= ring.val(a) {
                        let factor = ring.div_exact(a, b);
                        v = sub_scaled(&ring, &v, piv, factor);
                    } else {
                        // Incoming vector has the better (smaller) valuation:
                        // it becomes the pivot, the old pivot re-enters.
                        std::mem::swap(piv, &mut v);
                    }
                }
            }
        }
    }

    pub fn into_pivots(self) -> Vec<SparseVec> {
        self.pivots.into_values().collect()
    }
}

/// Rank of a streamed set of vectors over the prime field F_q (q prime):
/// the same echelon with l = 1.
pub struct FieldRank {
    inner: LocalEchelon,
}

impl FieldRank {
    pub fn new(q: u64) -> Self {
        FieldRank {
            inner: LocalEchelon::new(LocalRing::new(q, 1)),
        }
    }

    pub fn ring(&self) -> LocalRing {
        self.inner.ring()
    }

    pub fn add_vector(&mut self, v: SparseVec) {
        self.inner.add_vector(v);
    }

    pub fn rank(&self) -> usize {
        self.inner.pivot_count()
    }
}

/// Invariant-factor valuations of a sparse matrix over Z/p^l, by global
/// minimal-valuation pivoting with Markowitz fill control through a lazy
/// candidate heap. Returns the nondecreasing list of pivot valuations below
/// l; valuations >= l are indistinguishable from zero entries and are not
/// reported.
///
/// Pivoting order: valuation first (which makes the divisibility chain
/// automatic over a local ring), then the classical fill estimate
/// `(row_nnz - 1) * (col_nnz - 1)`, then (row, col) for determinism.
pub fn local_snf_valuations(ring: LocalRing, columns: Vec<SparseVec>, rows: usize) -> Vec<u32> {
    SparseSnf::new(ring, columns, rows).run()
}

/// Rank of a sparse matrix over the prime field F_q, via the streaming
/// echelon.
pub fn sparse_rank(q: u64, columns: impl IntoIterator<Item = SparseVec>, rows: usize) -> usize {
    let mut ech = FastEchelon::new(LocalRing::new(q, 1), rows);
    for c in columns {
        ech.add_column(c);
    }
    ech.pivot_count()
}

/// Streaming column echelon over Z/p^l tuned for very sparse columns.
///
/// Dependent columns reduce to nothing without being stored, and the basis
/// is kept fully inter-reduced: when a new pivot is installed, its lead row
/// is eliminated from every existing pivot tail (valuations permitting).
/// Tails therefore reference almost no pivot rows, reduction cascades stay
/// short, and the accumulated basis stays thin. Column span is preserved
/// exactly.
pub struct FastEchelon {
    ring: LocalRing,
    rows: usize,
    /// Pivot column per lead row; entries sorted by row, first entry the lead.
    pivots: Vec<Option<Box<[(u32, u64)]>>>,
    /// Lead rows of pivots whose tail may reference a given row (stale ok).
    holders: Vec<Vec<u32>>,
    count: usize,
    /// Dense scratch for the column being reduced.
    scratch: Vec<u64>,
    /// Candidate rows of the scratch (lazy, may hold stale zeros).
    agenda: std::collections::BinaryHeap<std::cmp::Reverse<u32>>,
    stats: EchelonStats,
}

impl FastEchelon {
    pub fn new(ring: LocalRing, rows: usize) -> Self {
        FastEchelon {
            ring,
            rows,
            pivots: vec![None; rows],
            holders: vec![Vec::new(); rows],
            count: 0,
            scratch: vec![0; rows],
            agenda: std::collections::BinaryHeap::new(),
            stats: EchelonStats::default(),
        }
    }

    pub fn pivot_count(&self) -> usize {
        self.count
    }

    pub fn into_pivots(self) -> Vec<SparseVec> {
        self.pivots
            .into_iter()
            .flatten()
            .map(|p| p.iter().map(|&(r, v)| (r as usize, v)).collect())
            .collect()
    }

    pub fn add_column(&mut self, col: SparseVec) {
        self.stats.columns += 1;
        let mut stack: Vec<Box<[(u32, u64)]>> =
            vec![col.into_iter().map(|(r, v)| (r as u32, v)).collect()];
        while let Some(vec) = stack.pop() {
            if let Some(displaced) = self.reduce_and_install(&vec) {
                stack.push(displaced);
            }
        }
    }

    /// Reduces one vector fully against the pivots, then installs the
    /// residue at its lead: at a free row directly, or displacing an
    /// existing pivot when the residue carries a strictly better valuation
    /// there (the displaced pivot is returned for re-processing).
    fn reduce_and_install(&mut self, vec: &[(u32, u64)]) -> Option<Box<[(u32, u64)]>> {
        let ring = self.ring;
        debug_assert!(self.agenda.is_empty());
        for &(r, v) in vec {
            if v != 0 {
                self.scratch[r as usize] = ring.add(self.scratch[r as usize], v);
                self.agenda.push(std::cmp::Reverse(r));
            }
        }
        // First row that cannot be eliminated: a pivotless row, or a pivot
        // row where our valuation is strictly smaller. Reduction continues
        // past it either way, so the eventual residue is fully reduced.
        let mut lead: Option<u32> = None;
        while let Some(std::cmp::Reverse(r)) = self.agenda.pop() {
            let a = self.scratch[r as usize];
            if a == 0 || lead.is_some_and(|l| l == r) {
                continue;
            }
            let Some(piv) = &self.pivots[r as usize] else {
                if lead.is_none() {
                    lead = Some(r);
                }
                continue;
            };
            let lead_val = piv[0].1;
            if ring.val(a) >= ring.val(lead_val) {
                self.stats.reductions += 1;
                self.stats.writes += piv.len() as u64;
                let factor = ring.div_exact(a, lead_val);
                for &(rr, vv) in piv.iter() {
                    let x = ring.sub(self.scratch[rr as usize], ring.mul(factor, vv));
                    self.scratch[rr as usize] = x;
                    if rr != r && x != 0 {
                        self.agenda.push(std::cmp::Reverse(rr));
                    }
                }
                debug_assert_eq!(self.scratch[r as usize], 0);
            } else if lead.is_none() {
                lead = Some(r);
            }
            // Otherwise the entry stays in the tail of the eventual pivot.
        }
        let Some(r0) = lead else {
            return None; // dependent column, nothing survives
        };
        let residue = self.extract_from(r0);
        debug_assert_eq!(residue[0].0, r0);
        let displaced = self.pivots[r0 as usize].replace(residue);
        if displaced.is_some() {
            self.stats.swaps += 1;
        } else {
            self.count += 1;
            self.stats.installs += 1;
        }
        self.index_tail(r0);
        self.clean_tails(r0);
        displaced
    }

    /// Registers the tail rows of the pivot at `lead` in the holder index.
    fn index_tail(&mut self, lead: u32) {
        let piv = self.pivots[lead as usize].as_ref().unwrap();
        for i in 1..piv.len() {
            self.holders[piv[i].0 as usize].push(lead);
        }
    }

    /// Eliminates row `r0` from every pivot tail that references it, using
    /// the fresh pivot at r0. Skips entries whose valuation is below the
    /// new lead's (those stay as rare tail pollution).
    fn clean_tails(&mut self, r0: u32) {
        let ring = self.ring;
        let holder_list = std::mem::take(&mut self.holders[r0 as usize]);
        let newpiv = self.pivots[r0 as usize].clone().unwrap();
        let newlead_val = newpiv[0].1;
        for lead in holder_list {
            if lead == r0 {
                continue;
            }
            let Some(piv) = self.pivots[lead as usize].as_ref() else {
                continue;
            };
            let Ok(pos) = piv.binary_search_by_key(&r0, |&(row, _)| row) else {
                continue;
            };
            let a = piv[pos].1;
            if a == 0 || ring.val(a) < ring.val(newlead_val) {
                if a != 0 {
                    // Cannot eliminate exactly; keep the reference alive.
                    self.holders[r0 as usize].push(lead);
                }
                continue;
            }
            self.stats.clean_merges += 1;
            let factor = ring.div_exact(a, newlead_val);
            // piv - factor * newpiv, merged.
            let piv = self.pivots[lead as usize].take().unwrap();
            let mut merged: Vec<(u32, u64)> = Vec::with_capacity(piv.len() + newpiv.len());
            let mut i = 0;
            let mut k = 0;
            while i < piv.len() || k < newpiv.len() {
                if k >= newpiv.len() || (i < piv.len() && piv[i].0 < newpiv[k].0) {
                    merged.push(piv[i]);
                    i += 1;
                } else if i >= piv.len() || newpiv[k].0 < piv[i].0 {
                    let v = ring.neg(ring.mul(factor, newpiv[k].1));
                    if v != 0 {
                        merged.push((newpiv[k].0, v));
                        self.holders[newpiv[k].0 as usize].push(lead);
                    }
                    k += 1;
                } else {
                    let v = ring.sub(piv[i].1, ring.mul(factor, newpiv[k].1));
                    if v != 0 {
                        merged.push((piv[i].0, v));
                    }
                    i += 1;
                    k += 1;
                }
            }
            debug_assert_eq!(merged[0].0, lead, "lead entry must survive cleaning");
            self.pivots[lead as usize] = Some(merged.into_boxed_slice());
        }
    }

    /// Drains the scratch from row `from` upward into a sorted sparse
    /// column, zeroing it. Rows below `from` are already zero.
    fn extract_from(&mut self, from: u32) -> Box<[(u32, u64)]> {
        self.agenda.clear();
        let mut out: Vec<(u32, u64)> = Vec::new();
        for r in from as usize..self.rows {
            if self.scratch[r] != 0 {
                out.push((r as u32, self.scratch[r]));
                self.scratch[r] = 0;
            }
        }
        out.into_boxed_slice()
    }
}

type Candidate = std::cmp::Reverse<(u32, u64, u32, u32)>; // (val, cost, row, col)

struct SparseSnf {
    ring: LocalRing,
    /// Live columns; a dead column is empty. Entries sorted by row.
    cols: Vec<Vec<(u32, u64)>>,
    /// Columns that may hold an entry in each row (stale allowed).
    row_cols: Vec<Vec<u32>>,
    /// Exact per-row counts of live entries.
    row_nnz: Vec<u32>,
    heap: std::collections::BinaryHeap<Candidate>,
}

impl SparseSnf {
    fn new(ring: LocalRing, columns: Vec<SparseVec>, rows: usize) -> Self {
        let cols: Vec<Vec<(u32, u64)>> = columns
            .into_iter()
            .map(|c| c.into_iter().map(|(r, v)| (r as u32, v)).collect())
            .collect();
        let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); rows];
        let mut row_nnz = vec![0u32; rows];
        let mut heap = std::collections::BinaryHeap::with_capacity(
            cols.iter().map(|c| c.len()).sum::<usize>() + 16,
        );
        for (j, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                row_cols[r as usize].push(j as u32);
                row_nnz[r as usize] += 1;
                heap.push(std::cmp::Reverse((ring.val(v), 0, r, j as u32)));
            }
        }
        SparseSnf {
            ring,
            cols,
            row_cols,
            row_nnz,
            heap,
        }
    }

    fn entry(&self, r: u32, j: u32) -> Option<u64> {
        let col = &self.cols[j as usize];
        col.binary_search_by_key(&r, |&(row, _)| row)
            .ok()
            .map(|i| col[i].1)
    }

    fn run(mut self) -> Vec<u32> {
        let mut out = Vec::new();
        let debug_stats = std::env::var("NILMULT_SNF_STATS").is_ok();
        let mut pops = 0u64;
        while let Some(std::cmp::Reverse((val, cost, r, j))) = self.heap.pop() {
            pops += 1;
            if debug_stats && pops % 1_000_000 == 0 {
                let nnz: usize = self.cols.iter().map(|c| c.len()).sum();
                eprintln!(
                    "snf stats: pops={pops} pivots={} heap={} nnz={nnz}",
                    out.len(),
                    self.heap.len()
                );
            }
            // Validate lazily: the entry must still exist with this
            // valuation, and the fill estimate must not have grown.
            let Some(v) = self.entry(r, j) else { continue };
            if self.ring.val(v) != val {
                continue;
            }
            let cur_cost = (self.row_nnz[r as usize] as u64 - 1)
                * (self.cols[j as usize].len() as u64 - 1);
            if cur_cost > cost {
                self.heap.push(std::cmp::Reverse((val, cur_cost, r, j)));
                continue;
            }
            out.push(val);
            self.eliminate(r, j, v);
        }
        out.sort_unstable();
        out
    }

    /// Clears pivot row r via column operations against the pivot column,
    /// then drops the pivot column (clearing it afterwards would be row
    /// operations that touch nothing else).
    fn eliminate(&mut self, r: u32, j: u32, pivot_value: u64) {
        let ring = self.ring;
        let pivot_col = std::mem::take(&mut self.cols[j as usize]);
        for &(pr, _) in &pivot_col {
            self.row_nnz[pr as usize] -= 1;
        }
        let holders = std::mem::take(&mut self.row_cols[r as usize]);
        for out_j in holders {
            if out_j == j || self.cols[out_j as usize].is_empty() {
                continue;
            }
            let Some(a) = self.entry(r, out_j) else {
                continue;
            };
            let factor = ring.div_exact(a, pivot_value);
            self.column_sub(out_j, &pivot_col, factor);
            debug_assert!(self.entry(r, out_j).is_none());
        }
        debug_assert_eq!(self.row_nnz[r as usize], 0);
    }

    /// cols[dst] -= factor * pivot, maintaining indexes and candidates.
    fn column_sub(&mut self, dst: u32, pivot: &[(u32, u64)], factor: u64) {
        let ring = self.ring;
        let old = std::mem::take(&mut self.cols[dst as usize]);
        let mut merged = Vec::with_capacity(old.len() + pivot.len());
        let mut i = 0;
        let mut k = 0;
        while i < old.len() || k < pivot.len() {
            if k >= pivot.len() || (i < old.len() && old[i].0 < pivot[k].0) {
                merged.push(old[i]);
                i += 1;
            } else if i >= old.len() || pivot[k].0 < old[i].0 {
                let v = ring.neg(ring.mul(factor, pivot[k].1));
                if v != 0 {
                    let r = pivot[k].0;
                    merged.push((r, v));
                    self.row_nnz[r as usize] += 1;
                    self.row_cols[r as usize].push(dst);
                    self.heap
                        .push(std::cmp::Reverse((ring.val(v), 0, r, dst)));
                }
                k += 1;
            } else {
                let r = old[i].0;
                let v = ring.sub(old[i].1, ring.mul(factor, pivot[k].1));
                if v == 0 {
                    self.row_nnz[r as usize] -= 1;
                } else {
                    merged.push((r, v));
                    if v != old[i].1 {
                        self.heap
                            .push(std::cmp::Reverse((ring.val(v), 0, r, dst)));
                    }
                }
                i += 1;
                k += 1;
            }
        }
        self.cols[dst as usize] = merged;
    }
}

/// Dense matrix over Z/p^l with tracked column transform, for kernel
/// computations: after `diagonalize`, `a_original * v = u * diag` for some
/// row-invertible u, and the kernel of the original matrix is spanned by
/// the columns of `v` scaled per diagonal valuation.
pub struct DenseLocal {
    pub ring: LocalRing,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<u64>,
    /// Column transform, cols x cols.
    pub v: Vec<u64>,
    /// Its inverse, maintained alongside.
    pub vinv: Vec<u64>,
}

impl DenseLocal {
    pub fn new(ring: LocalRing, rows: usize, cols: usize) -> Self {
        let mut v = vec![0u64; cols * cols];
        for i in 0..cols {
            v[i * cols + i] = 1;
        }
        DenseLocal {
            ring,
            rows,
            cols,
            a: vec![0u64; rows * cols],
            vinv: v.clone(),
            v,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.a[i * self.cols + j] = x % self.ring.modulus;
    }

    fn at(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    fn col_sub(&mut self, dst: usize, src: usize, factor: u64) {
        if factor == 0 {
            return;
        }
        for i in 0..self.rows {
            let x = self.ring.sub(self.at(i, dst), self.ring.mul(factor, self.at(i, src)));
            self.a[i * self.cols + dst] = x;
        }
        for i in 0..self.cols {
            let x = self.ring.sub(
                self.v[i * self.cols + dst],
                self.ring.mul(factor, self.v[i * self.cols + src]),
            );
            self.v[i * self.cols + dst] = x;
        }
        // v <- v * E with E[src][dst] = -factor, so vinv <- E^-1 * vinv:
        // row src of vinv gains factor * row dst.
        for j in 0..self.cols {
            let x = self.ring.add(
                self.vinv[src * self.cols + j],
                self.ring.mul(factor, self.vinv[dst * self.cols + j]),
            );
            self.vinv[src * self.cols + j] = x;
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + a, i * self.cols + b);
        }
        for i in 0..self.cols {
            self.v.swap(i * self.cols + a, i * self.cols + b);
        }
        for j in 0..self.cols {
            self.vinv.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn row_sub(&mut self, dst: usize, src: usize, factor: u64) {
        if factor == 0 {
            return;
        }
        for j in 0..self.cols {
            let x = self.ring.sub(self.at(dst, j), self.ring.mul(factor, self.at(src, j)));
            self.a[dst * self.cols + j] = x;
        }
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Diagonalizes in place. Returns the per-column valuations of the
    /// diagonal: `result[j] = val(d_j)` for j < rank-extent, `exp` for
    /// columns whose diagonal is zero mod p^l (free directions).
    pub fn diagonalize(&mut self) -> Vec<u32> {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            // Minimal-valuation pivot in the trailing block.
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    let x = self.at(i, j);
                    if x != 0 {
                        let v = self.ring.val(x);
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                            if v == 0 {
                                break;
                            }
                        }
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            let Some((_, pi, pj)) = best else {
                break;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            let pivot = self.at(t, t);
            for j in (t + 1)..self.cols {
                let x = self.at(t, j);
                if x != 0 {
                    let factor = self.ring.div_exact(x, pivot);
                    self.col_sub(j, t, factor);
                }
            }
            for i in (t + 1)..self.rows {
                let x = self.at(i, t);
                if x != 0 {
                    let factor = self.ring.div_exact(x, pivot);
                    self.row_sub(i, t, factor);
                }
            }
            t += 1;
        }
        (0..self.cols)
            .map(|j| {
                if j < n {
                    self.ring.val(self.at(j, j))
                } else {
                    self.ring.exp
                }
            })
            .collect()
    }

    /// Column j of the transform.
    pub fn transform_column(&self, j: usize) -> Vec<u64> {
        (0..self.cols).map(|i| self.v[i * self.cols + j]).collect()
    }

    /// `vinv * b`, expressing a vector in transform coordinates.
    pub fn transform_solve(&self, b: &[(usize, u64)]) -> Vec<u64> {
        let mut y = vec![0u64; self.cols];
        for &(idx, val) in b {
            if val == 0 {
                continue;
            }
            for i in 0..self.cols {
                let w = self.vinv[i * self.cols + idx];
                if w != 0 {
                    y[i] = self.ring.add(y[i], self.ring.mul(w, val));
                }
            }
        }
        y
    }
}


/// Run-time counters for tuning the echelon; enabled by the caller.
#[derive(Default, Debug, Clone, Copy)]
pub struct EchelonStats {
    pub columns: u64,
    pub reductions: u64,
    pub writes: u64,
    pub installs: u64,
    pub swaps: u64,
    pub clean_merges: u64,
    pub tail_mass: u64,
}

impl FastEchelon {
    pub fn stats(&self) -> EchelonStats {
        let mut s = self.stats;
        s.tail_mass = self
            .pivots
            .iter()
            .flatten()
            .map(|p| p.len() as u64)
            .sum();
        s
    }
}
