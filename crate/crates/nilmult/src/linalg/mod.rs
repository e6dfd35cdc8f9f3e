//! Exact integer linear algebra: Smith normal form over Z and the local
//! (mod p^l) elimination used by the homology and cohomology engines.

pub mod local;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row-major. Sizes here are small; the large sparse
/// work lives in [`local`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Smith normal form computation: the full diagonal (with the
/// divisibility chain, including any ones and trailing zeros) and, when
/// requested, unimodular transforms with `u * a * v = diag`.
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// The invariant factors larger than one.
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| d.abs() > BigInt::one())
            .cloned()
            .collect()
    }
}

/// Classical Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form(a: &IntMatrix, want_transforms: bool) -> SnfResult {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut u = if want_transforms {
        Some(IntMatrix::identity(rows))
    } else {
        None
    };
    let mut v = if want_transforms {
        Some(IntMatrix::identity(cols))
    } else {
        None
    };

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Minimal absolute value nonzero pivot in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| m[(i, j)].abs() < m[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        swap_rows(&mut m, u.as_mut(), t, pi);
        swap_cols(&mut m, v.as_mut(), t, pj);

        // Clear row and column t; restart if a remainder survives.
        loop {
            let mut dirty = false;
            for i in (t + 1)..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[(i, t)], &m[(t, t)]);
                add_row_multiple(&mut m, u.as_mut(), i, t, &-q);
                if !m[(i, t)].is_zero() {
                    // Remainder smaller than the pivot: promote it.
                    swap_rows(&mut m, u.as_mut(), t, i);
                    dirty = true;
                }
            }
            for j in (t + 1)..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[(t, j)], &m[(t, t)]);
                add_col_multiple(&mut m, v.as_mut(), j, t, &-q);
                if !m[(t, j)].is_zero() {
                    swap_cols(&mut m, v.as_mut(), t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility fixup: every remaining entry must be divisible by the
        // pivot; if not, fold the offending row in and redo this pivot.
        let mut offender = None;
        'scan: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(&m[(i, j)] % &m[(t, t)]).is_zero() {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            add_row_multiple(&mut m, u.as_mut(), t, i, &BigInt::one());
            continue;
        }

        if m[(t, t)].is_negative() {
            negate_row(&mut m, u.as_mut(), t);
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..n).map(|i| m[(i, i)].clone()).collect();
    SnfResult {
        diagonal,
        transforms: u.zip(v),
    }
}

/// Quotient rounding to nearest, which keeps remainders at most half the
/// divisor during elimination.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(m: &mut IntMatrix, u: Option<&mut IntMatrix>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            let tmp = u[(a, j)].clone();
            u[(a, j)] = u[(b, j)].clone();
            u[(b, j)] = tmp;
        }
    }
}

fn swap_cols(m: &mut IntMatrix, v: Option<&mut IntMatrix>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let tmp = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = tmp;
    }
    if let Some(v) = v {
        for i in 0..v.rows {
            let tmp = v[(i, a)].clone();
            v[(i, a)] = v[(i, b)].clone();
            v[(i, b)] = tmp;
        }
    }
}

/// row[i] += q * row[t]
fn add_row_multiple(m: &mut IntMatrix, u: Option<&mut IntMatrix>, i: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols {
        let delta = q * &m[(t, j)];
        m[(i, j)] += delta;
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            let delta = q * &u[(t, j)];
            u[(i, j)] += delta;
        }
    }
}

/// col[j] += q * col[t]
fn add_col_multiple(m: &mut IntMatrix, v: Option<&mut IntMatrix>, j: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows {
        let delta = q * &m[(i, t)];
        m[(i, j)] += delta;
    }
    if let Some(v) = v {
        for i in 0..v.rows {
            let delta = q * &v[(i, t)];
            v[(i, j)] += delta;
        }
    }
}

fn negate_row(m: &mut IntMatrix, u: Option<&mut IntMatrix>, t: usize) {
    for j in 0..m.cols {
        let x = -m[(t, j)].clone();
        m[(t, j)] = x;
    }
    if let Some(u) = u {
        for j in 0..u.cols {
            let x = -u[(t, j)].clone();
            u[(t, j)] = x;
        }
    }
}

/// Streaming integer column echelon: keeps one pivot column per lead row,
/// reducing each incoming column by repeated Euclidean steps. The column
/// span over Z is preserved exactly, so the Smith normal form of the
/// accumulated pivot columns equals that of the full stream.
pub struct IntColumnEchelon {
    rows: usize,
    /// Pivot columns keyed by lead row; entries sorted by row.
    pivots: std::collections::BTreeMap<usize, Vec<(usize, BigInt)>>,
}

impl IntColumnEchelon {
    pub fn new(rows: usize) -> Self {
        IntColumnEchelon {
            rows,
            pivots: Default::default(),
        }
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn add_column(&mut self, mut col: Vec<(usize, BigInt)>) {
        loop {
            col.retain(|(_, v)| !v.is_zero());
            col.sort_by_key(|(r, _)| *r);
            let Some(&(lead, _)) = col.first() else {
                return;
            };
            match self.pivots.get_mut(&lead) {
                None => {
                    self.pivots.insert(lead, col);
                    return;
                }
                Some(piv) => {
                    // Euclid on the two lead entries until one vanishes.
                    let a = col[0].1.clone();
                    let b = piv[0].1.clone();
                    if b.abs() <= a.abs() {
                        let q = div_nearest(&a, &b);
                        col = sub_scaled(col, piv, &q);
                    } else {
                        // Swap roles: the incoming column becomes the pivot.
                        std::mem::swap(piv, &mut col);
                        // The previous pivot continues as the incoming one.
                    }
                }
            }
        }
    }

    /// The accumulated pivot columns as a dense matrix (row-compressed to
    /// the pivot rows would also do, but these stay small).
    pub fn into_matrix(self) -> IntMatrix {
        let cols: Vec<Vec<(usize, BigInt)>> = self.pivots.into_values().collect();
        let mut m = IntMatrix::zero(self.rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (r, v) in col {
                m[(*r, j)] = v.clone();
            }
        }
        m
    }
}

fn sub_scaled(
    col: Vec<(usize, BigInt)>,
    piv: &[(usize, BigInt)],
    q: &BigInt,
) -> Vec<(usize, BigInt)> {
    // col - q * piv, both sorted by row.
    let mut out = Vec::with_capacity(col.len() + piv.len());
    let mut i = 0;
    let mut j = 0;
    while i < col.len() || j < piv.len() {
        if j >= piv.len() || (i < col.len() && col[i].0 < piv[j].0) {
            out.push(col[i].clone());
            i += 1;
        } else if i >= col.len() || piv[j].0 < col[i].0 {
            out.push((piv[j].0, -(q * &piv[j].1)));
            j += 1;
        } else {
            let v = &col[i].1 - q * &piv[j].1;
            if !v.is_zero() {
                out.push((col[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn snf_diag(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows(rows);
        smith_normal_form(&m, false)
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(snf_diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf_diag(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
        assert_eq!(snf_diag(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn snf_divisibility_chain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..5);
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-20..20)).collect())
                .collect();
            let d = snf_diag(&rows);
            for w in d.windows(2) {
                if w[0] != 0 {
                    assert_eq!(w[1] % w[0], 0, "chain broken in {d:?}");
                }
                if w[0] == 0 {
                    assert_eq!(w[1], 0);
                }
            }
        }
    }

    #[test]
    fn snf_transforms_reconstruct_diagonal() {
        let a = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let res = smith_normal_form(&a, true);
        let (u, v) = res.transforms.unwrap();
        let prod = u.mul(&a).mul(&v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    res.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(prod[(i, j)], want, "at ({i},{j})");
            }
        }
    }

    #[test]
    fn snf_invariant_under_unimodular_scrambles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let base = IntMatrix::from_rows(&[vec![4i64, 2, 0], vec![2, 8, 6], vec![0, 6, 12]]);
        let want = smith_normal_form(&base, false).diagonal;
        for _ in 0..20 {
            let mut m = base.clone();
            for _ in 0..12 {
                let a = rng.gen_range(0..3);
                let b = rng.gen_range(0..3);
                let q = BigInt::from(rng.gen_range(-3..=3i64));
                if a != b {
                    if rng.gen_bool(0.5) {
                        add_row_multiple(&mut m, None, a, b, &q);
                    } else {
                        add_col_multiple(&mut m, None, a, b, &q);
                    }
                }
            }
            assert_eq!(smith_normal_form(&m, false).diagonal, want);
        }
    }

    #[test]
    fn echelon_preserves_smith_invariants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let rows = rng.gen_range(2..6);
            let cols = rng.gen_range(2..10);
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-9..9)).collect())
                .collect();
            let full = IntMatrix::from_rows(&dense);
            let want = smith_normal_form(&full, false).nontrivial();

            let mut ech = IntColumnEchelon::new(rows);
            for j in 0..cols {
                let col: Vec<(usize, BigInt)> = (0..rows)
                    .map(|i| (i, BigInt::from(dense[i][j])))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                ech.add_column(col);
            }
            let got = smith_normal_form(&ech.into_matrix(), false).nontrivial();
            assert_eq!(got, want);
        }
    }
}
