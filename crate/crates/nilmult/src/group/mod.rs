//! Finite groups as multiplication tables: validation, structure analysis,
//! and the multiplier engines built on top.

pub mod abelian;
pub mod cocycle;
pub mod families;
pub mod homology;

use std::collections::BTreeSet;

use thiserror::Error;

pub use abelian::AbelianInvariants;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is not a Latin square (row/column {0})")]
    NotLatinSquare(usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("table is not associative (witness ({0}, {1}, {2}))")]
    NotAssociative(usize, usize, usize),
    #[error("invalid parameter for {family}: {reason}")]
    BadParameter { family: &'static str, reason: String },
    #[error("order {order} exceeds the cap {cap}; raise the cap to force the computation")]
    CapExceeded { order: usize, cap: usize },
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("group is not a p-group")]
    NotPGroup,
    #[error("elements of prime-power order do not form a subgroup")]
    NotSubgroup,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("bad table file: {0}")]
    BadTableFile(String),
    #[error("rank certificate failed; try a different coefficient prime")]
    RankCertificate,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// A finite group given by its full multiplication table.
///
/// `table[i * order + j]` is the product of elements i and j. The identity
/// is element 0 (enforced by renumbering on construction).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u16>,
    inverse: Vec<u16>,
}

impl FiniteGroup {
    /// Validates a table and builds the group. The identity may sit at any
    /// index; elements are renumbered so it becomes 0.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<u16>) -> Result<Self, GroupError> {
        if order == 0 || table.len() != order * order {
            return Err(GroupError::BadTableFile(format!(
                "expected {order}x{order} entries",
            )));
        }
        if order > u16::MAX as usize {
            return Err(GroupError::BadTableFile("order too large".into()));
        }
        for (i, &v) in table.iter().enumerate() {
            if v as usize >= order {
                return Err(GroupError::BadTableFile(format!(
                    "entry {v} out of range at position {i}"
                )));
            }
        }
        // Latin square.
        for i in 0..order {
            let mut row = vec![false; order];
            let mut col = vec![false; order];
            for j in 0..order {
                let r = table[i * order + j] as usize;
                let c = table[j * order + i] as usize;
                if row[r] || col[c] {
                    return Err(GroupError::NotLatinSquare(i));
                }
                row[r] = true;
                col[c] = true;
            }
        }
        // Identity.
        let identity = (0..order)
            .find(|&e| {
                (0..order).all(|j| {
                    table[e * order + j] as usize == j && table[j * order + e] as usize == j
                })
            })
            .ok_or(GroupError::NoIdentity)?;
        // Renumber so the identity is 0.
        let table = if identity != 0 {
            let mut perm: Vec<u16> = (0..order as u16).collect();
            perm.swap(0, identity);
            // perm maps new index -> old index; old -> new is the same swap.
            let mut new_table = vec![0u16; order * order];
            for i in 0..order {
                for j in 0..order {
                    let old = table[perm[i] as usize * order + perm[j] as usize];
                    let new = if old as usize == 0 {
                        identity as u16
                    } else if old as usize == identity {
                        0
                    } else {
                        old
                    };
                    new_table[i * order + j] = new;
                }
            }
            new_table
        } else {
            table
        };
        // Inverses.
        let mut inverse = vec![u16::MAX; order];
        for i in 0..order {
            for j in 0..order {
                if table[i * order + j] == 0 {
                    if table[j * order + i] != 0 {
                        return Err(GroupError::NoInverse(i));
                    }
                    inverse[i] = j as u16;
                }
            }
        }
        if inverse.iter().any(|&v| v == u16::MAX) {
            return Err(GroupError::NoInverse(0));
        }
        let g = FiniteGroup {
            label: label.into(),
            order,
            table,
            inverse,
        };
        g.check_associativity()?;
        Ok(g)
    }

    /// Exhaustive associativity check up to order 128; beyond that, the
    /// generator-based variant (associativity on a generating set implies it
    /// everywhere once the table is a Latin square with identity).
    fn check_associativity(&self) -> Result<(), GroupError> {
        let n = self.order;
        if n <= 128 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
            return Ok(());
        }
        let gens = self.generating_set();
        for &g in &gens {
            for b in 0..n {
                let gb = self.mul(g, b);
                for c in 0..n {
                    if self.mul(gb, c) != self.mul(g, self.mul(b, c)) {
                        return Err(GroupError::NotAssociative(g, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut closed = vec![false; self.order];
        closed[0] = true;
        let mut size = 1;
        while size < self.order {
            let next = (0..self.order).find(|&x| !closed[x]).unwrap();
            gens.push(next);
            // close under multiplication
            let mut frontier = vec![next];
            closed[next] = true;
            size += 1;
            while let Some(x) = frontier.pop() {
                for y in 0..self.order {
                    if closed[y] {
                        let for_new = [self.mul(x, y), self.mul(y, x)];
                        for z in for_new {
                            if !closed[z] {
                                closed[z] = true;
                                size += 1;
                                frontier.push(z);
                            }
                        }
                    }
                }
            }
        }
        gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn table(&self) -> &[u16] {
        &self.table
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = 0usize;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut n = 1u64;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        let mut e = 1u64;
        for a in 0..self.order {
            e = num_integer::lcm(e, self.element_order(a));
        }
        e
    }

    /// Some(p) when the order is a power of the prime p (trivial group: None).
    pub fn is_p_group(&self) -> Option<u64> {
        let mut n = self.order as u64;
        if n == 1 {
            return None;
        }
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                return (n == 1).then_some(p);
            }
            p += 1;
        }
        Some(n)
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Subgroup generated by a set, as a sorted element list.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut frontier: Vec<usize> = vec![0];
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                frontier.push(s);
            }
        }
        let mut members: Vec<usize> = frontier.clone();
        while let Some(x) = frontier.pop() {
            let mut pending = Vec::new();
            for &y in &members {
                for z in [self.mul(x, y), self.mul(y, x), self.inv(x)] {
                    if !in_set[z] {
                        in_set[z] = true;
                        pending.push(z);
                    }
                }
            }
            for z in pending {
                members.push(z);
                frontier.push(z);
            }
        }
        members.sort_unstable();
        members
    }

    /// Derived subgroup [G, G].
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = BTreeSet::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(
                    self.mul(self.inv(a), self.inv(b)),
                    self.mul(a, b),
                );
                comms.insert(c);
            }
        }
        let seed: Vec<usize> = comms.into_iter().collect();
        self.closure(&seed)
    }

    /// Lower central series G = γ1 ⊇ γ2 ⊇ ..., stopping at stabilization.
    pub fn lower_central_series(&self) -> Vec<Vec<usize>> {
        let mut series = vec![(0..self.order).collect::<Vec<_>>()];
        loop {
            let prev = series.last().unwrap();
            let mut comms = BTreeSet::new();
            for &a in prev {
                for b in 0..self.order {
                    let c = self.mul(
                        self.mul(self.inv(a), self.inv(b)),
                        self.mul(a, b),
                    );
                    comms.insert(c);
                }
            }
            let seed: Vec<usize> = comms.into_iter().collect();
            let next = self.closure(&seed);
            if &next == prev {
                // Stabilized (nontrivially unless next == {0}).
                if next.len() > 1 {
                    series.push(next);
                }
                break;
            }
            let done = next.len() == 1;
            series.push(next);
            if done {
                break;
            }
        }
        series
    }

    /// Nilpotency class: number of strictly descending steps of the lower
    /// central series before it reaches the trivial subgroup. None when the
    /// series stabilizes above the identity.
    pub fn nilpotency_class(&self) -> Option<u32> {
        let series = self.lower_central_series();
        let last = series.last().unwrap();
        if last.len() != 1 {
            return None;
        }
        Some(series.len() as u32 - 1)
    }

    /// Quotient by a normal subgroup, given as a sorted element list.
    pub fn quotient(&self, normal: &[usize]) -> Result<FiniteGroup, GroupError> {
        let in_n = {
            let mut v = vec![false; self.order];
            for &x in normal {
                v[x] = true;
            }
            v
        };
        // Normality check.
        for &x in normal {
            for g in 0..self.order {
                let conj = self.mul(self.mul(self.inv(g), x), g);
                if !in_n[conj] {
                    return Err(GroupError::NotSubgroup);
                }
            }
        }
        // Cosets by representative: coset_of[x] = smallest element of xN.
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            for &n in normal {
                let y = self.mul(x, n);
                coset_of[y] = idx;
            }
            reps.push(x);
        }
        let m = reps.len();
        let mut table = vec![0u16; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * m + j] = coset_of[self.mul(a, b)] as u16;
            }
        }
        FiniteGroup::from_table(format!("{}/N", self.label), m, table)
    }

    /// Abelianization G/[G,G] as invariant factors.
    pub fn abelianization(&self) -> Result<AbelianInvariants, GroupError> {
        let derived = self.derived_subgroup();
        let q = self.quotient(&derived)?;
        abelian::invariants_of_abelian_table(&q)
    }

    /// For a nilpotent group, the Sylow p-subgroup is exactly the set of
    /// elements of p-power order; errors if that set is not closed.
    pub fn sylow_subgroup(&self, p: u64) -> Result<FiniteGroup, GroupError> {
        let members: Vec<usize> = (0..self.order)
            .filter(|&x| {
                let mut o = self.element_order(x);
                while o % p == 0 {
                    o /= p;
                }
                o == 1
            })
            .collect();
        self.subgroup_from_members(&members, format!("{}_sylow{}", self.label, p))
    }

    fn subgroup_from_members(
        &self,
        members: &[usize],
        label: String,
    ) -> Result<FiniteGroup, GroupError> {
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in members.iter().enumerate() {
            index[x] = i;
        }
        let m = members.len();
        let mut table = vec![0u16; m * m];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                let prod = self.mul(a, b);
                if index[prod] == usize::MAX {
                    return Err(GroupError::NotSubgroup);
                }
                table[i * m + j] = index[prod] as u16;
            }
        }
        FiniteGroup::from_table(label, m, table)
    }

    /// Prime factorization of the order.
    pub fn order_primes(&self) -> Vec<(u64, u32)> {
        let mut n = self.order as u64;
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

    /// Sylow decomposition of a nilpotent group.
    pub fn sylow_decomposition(&self) -> Result<Vec<(u64, FiniteGroup)>, GroupError> {
        if self.nilpotency_class().is_none() {
            return Err(GroupError::NotNilpotent);
        }
        let mut out = Vec::new();
        for (p, _) in self.order_primes() {
            out.push((p, self.sylow_subgroup(p)?));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn cyclic_structure() {
        let g = cyclic(8).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 8);
        assert_eq!(g.nilpotency_class(), Some(1));
        assert_eq!(g.is_p_group(), Some(2));
    }

    #[test]
    fn dihedral_structure() {
        let d8 = dihedral(8).unwrap();
        assert_eq!(d8.exponent(), 4);
        assert_eq!(d8.nilpotency_class(), Some(2));
        let d16 = dihedral(16).unwrap();
        assert_eq!(d16.exponent(), 8);
        assert_eq!(d16.nilpotency_class(), Some(3));
        // class(dihedral(2^n)) = n-1 for n >= 3
        let d32 = dihedral(32).unwrap();
        assert_eq!(d32.nilpotency_class(), Some(4));
    }

    #[test]
    fn quaternion_structure() {
        let q8 = generalized_quaternion(8).unwrap();
        assert_eq!(q8.exponent(), 4);
        assert_eq!(q8.nilpotency_class(), Some(2));
        // Unique involution.
        let involutions = (0..q8.order())
            .filter(|&x| x != 0 && q8.element_order(x) == 2)
            .count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn heisenberg_structure() {
        let h3 = heisenberg(3).unwrap();
        assert_eq!(h3.order(), 27);
        assert_eq!(h3.exponent(), 3);
        assert_eq!(h3.nilpotency_class(), Some(2));
        assert_eq!(h3.is_p_group(), Some(3));
        let h5 = heisenberg(5).unwrap();
        assert_eq!(h5.order(), 125);
        assert_eq!(h5.exponent(), 5);
        assert_eq!(h5.nilpotency_class(), Some(2));
    }

    #[test]
    fn exponent_divides_order() {
        for g in [
            cyclic(12).unwrap(),
            dihedral(16).unwrap(),
            generalized_quaternion(16).unwrap(),
            semidihedral(16).unwrap(),
            modular_group(2, 4).unwrap(),
            heisenberg(3).unwrap(),
        ] {
            assert_eq!(g.order() as u64 % g.exponent(), 0, "{}", g.label());
        }
    }

    #[test]
    fn symmetric_group_is_not_nilpotent() {
        // S3 as the dihedral group of order 6.
        let s3 = dihedral(6).unwrap();
        assert_eq!(s3.nilpotency_class(), None);
    }

    #[test]
    fn derived_subgroup_of_dihedral8() {
        let d = dihedral(8).unwrap();
        assert_eq!(d.derived_subgroup().len(), 2);
        let ab = d.abelianization().unwrap();
        assert_eq!(ab.factors(), &[2, 2]);
    }

    #[test]
    fn sylow_decomposition_of_direct_product() {
        let g = direct_product(&dihedral(8).unwrap(), &cyclic(3).unwrap());
        let sylows = g.sylow_decomposition().unwrap();
        assert_eq!(sylows.len(), 2);
        assert_eq!(sylows[0].0, 2);
        assert_eq!(sylows[0].1.order(), 8);
        assert_eq!(sylows[1].0, 3);
        assert_eq!(sylows[1].1.order(), 3);
    }

    #[test]
    fn sylow_of_non_nilpotent_fails() {
        let s3 = dihedral(6).unwrap();
        assert_eq!(
            s3.sylow_decomposition().unwrap_err(),
            GroupError::NotNilpotent
        );
    }

    #[test]
    fn quotient_requires_normality() {
        let s3 = dihedral(6).unwrap();
        // A reflection generates a non-normal order-2 subgroup.
        let refl = (0..6).find(|&x| x != 0 && s3.element_order(x) == 2).unwrap();
        let sub = s3.closure(&[refl]);
        assert_eq!(sub.len(), 2);
        assert!(s3.quotient(&sub).is_err());
    }

    #[test]
    fn bad_tables_are_rejected() {
        // Not a Latin square.
        let t = vec![0u16, 0, 0, 0];
        assert!(matches!(
            FiniteGroup::from_table("bad", 2, t),
            Err(GroupError::NotLatinSquare(_))
        ));
        // Latin square without identity/associativity: the row-shifted
        // "subtraction" table x*y = x - y mod 3.
        let t = vec![0u16, 2, 1, 1, 0, 2, 2, 1, 0];
        assert!(FiniteGroup::from_table("sub3", 3, t).is_err());
    }
}
