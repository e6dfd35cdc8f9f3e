//! Second cohomology with coefficients in Z/m (trivial action), computed
//! head-on from the 2-cocycle condition. This is the independent oracle the
//! homology engine is checked against through universal coefficients.
//!
//! Normalized cochains vanish whenever an argument is the identity, so the
//! variables are the pairs of non-identity elements. The cocycle equations
//! `f(x,y) + f(xy,z) = f(y,z) + f(x,yz)` are solved prime power by prime
//! power; the coboundaries of the indicator 1-cochains span the subgroup to
//! quotient out.

use std::collections::BTreeMap;

use super::{AbelianInvariants, FiniteGroup, GroupError};
use crate::linalg::local::{local_snf_valuations, DenseLocal, LocalEchelon, LocalRing, SparseVec};

/// Default cap on the group order for the cocycle engine.
pub const DEFAULT_COCYCLE_CAP: usize = 64;

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// H^2(G, Z_m) with trivial action, as invariant factors.
pub fn cocycle_h2_capped(
    g: &FiniteGroup,
    m: u64,
    cap: usize,
) -> Result<AbelianInvariants, GroupError> {
    if g.order() > cap {
        return Err(GroupError::CapExceeded {
            order: g.order(),
            cap,
        });
    }
    if g.order() == 1 || m == 1 {
        return Ok(AbelianInvariants::trivial());
    }
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, a) in factorize(m) {
        let vals = prime_part(g, p, a)?;
        if !vals.is_empty() {
            by_prime.insert(p, vals);
        }
    }
    Ok(AbelianInvariants::from_prime_parts(&by_prime))
}

pub fn cocycle_h2(g: &FiniteGroup, m: u64) -> Result<AbelianInvariants, GroupError> {
    cocycle_h2_capped(g, m, DEFAULT_COCYCLE_CAP)
}

/// Valuations of the p-part invariants of H^2(G, Z_{p^a}).
fn prime_part(g: &FiniteGroup, p: u64, a: u32) -> Result<Vec<u32>, GroupError> {
    let n = g.order();
    let n1 = n - 1;
    let nvars = n1 * n1;
    let ring = LocalRing::new(p, a);
    let var = |x: usize, y: usize| (x - 1) * n1 + (y - 1);

    // Row echelon of the cocycle system.
    let mut ech = LocalEchelon::new(ring);
    for x in 1..n {
        for y in 1..n {
            for z in 1..n {
                // f(x,y) + f(xy,z) - f(y,z) - f(x,yz) = 0, identity slots
                // dropping out.
                let mut terms: Vec<(usize, i64)> = vec![(var(x, y), 1), (var(y, z), -1)];
                let xy = g.mul(x, y);
                if xy != 0 {
                    terms.push((var(xy, z), 1));
                }
                let yz = g.mul(y, z);
                if yz != 0 {
                    terms.push((var(x, yz), -1));
                }
                terms.sort_by_key(|(i, _)| *i);
                let mut merged: Vec<(usize, u64)> = Vec::with_capacity(terms.len());
                for (i, c) in terms {
                    let c = ring.reduce_i64(c);
                    match merged.last_mut() {
                        Some((j, acc)) if *j == i => *acc = ring.add(*acc, c),
                        _ => merged.push((i, c)),
                    }
                }
                merged.retain(|&(_, c)| c != 0);
                if !merged.is_empty() {
                    ech.add_vector(merged);
                }
            }
        }
    }
    let rows: Vec<SparseVec> = ech.into_pivots();

    // Diagonalize with a column transform to get the solution module: the
    // cocycles are spanned by v-columns scaled by p^(a - val(d_j)), each of
    // order p^val(d_j) (free columns count as val = a).
    let nrows = rows.len();
    let mut dense = DenseLocal::new(ring, nrows, nvars);
    for (i, row) in rows.iter().enumerate() {
        for &(j, x) in row {
            dense.set(i, j, x);
        }
    }
    let diag_vals = dense.diagonalize();

    // Generators of Z^2 with their orders p^omega.
    let gen_cols: Vec<(usize, u32)> = diag_vals
        .iter()
        .enumerate()
        .filter_map(|(j, &v)| (v >= 1).then_some((j, v)))
        .collect();
    if gen_cols.is_empty() {
        return Ok(vec![]);
    }

    // Coboundary coordinates: delta c_x (u,v) = [u=x] + [v=x] - [uv=x].
    // Work mod p^(a+1) for the quotient so that full-order factors p^a stay
    // visible; the generator-order relations make any lift choice harmless.
    let qring = LocalRing::new(p, a + 1);
    let mut quotient_cols: Vec<Vec<(usize, u64)>> = vec![Vec::new(); gen_cols.len()];
    // Order relations p^omega_t * G_t.
    for (t, &(_, omega)) in gen_cols.iter().enumerate() {
        quotient_cols[t].push((t, qring.p.pow(omega)));
    }
    let mut next_row = gen_cols.len();
    for x in 1..n {
        let mut beta: Vec<(usize, u64)> = Vec::new();
        for u in 1..n {
            for v in 1..n {
                let mut c: i64 = 0;
                if u == x {
                    c += 1;
                }
                if v == x {
                    c += 1;
                }
                if g.mul(u, v) == x {
                    c -= 1;
                }
                let c = ring.reduce_i64(c);
                if c != 0 {
                    beta.push((var(u, v), c));
                }
            }
        }
        let y = dense.transform_solve(&beta);
        // beta must lie in the solution module: y_j divisible by
        // p^(a - val_j) for every column.
        for (t, &(j, omega)) in gen_cols.iter().enumerate() {
            let need = a - omega;
            let val = ring.val(y[j]);
            if val < need {
                return Err(GroupError::Internal(format!(
                    "coboundary escapes the cocycle module (p={p}, x={x})"
                )));
            }
            let coord = y[j] / ring.p.pow(need);
            let coord = coord % qring.modulus;
            if coord != 0 {
                quotient_cols[t].push((next_row, coord));
            }
        }
        // Columns j with val 0 carry order-1 generators; consistency there
        // means y_j ≡ 0 mod p^a, which the solve above guarantees only for
        // genuine cocycles - assert it.
        for (j, &v) in diag_vals.iter().enumerate() {
            if v == 0 && ring.val(y[j]) < a {
                return Err(GroupError::Internal(format!(
                    "coboundary fails the rank-part consistency (p={p}, x={x})"
                )));
            }
        }
        next_row += 1;
    }

    // Invariants of the quotient: SNF of the stacked relation matrix over
    // Z/p^(a+1); report valuations >= 1 (and < a+1, which holds since the
    // order relations bound everything by p^a).
    let vals = local_snf_valuations(qring, quotient_cols, next_row);
    Ok(vals.into_iter().filter(|&v| v >= 1).collect())
}
