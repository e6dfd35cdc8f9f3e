//! Finite abelian groups as invariant-factor lists, and the closed forms
//! for their multipliers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError};
use crate::hall::count_on_exactly;

/// A finite abelian group as its invariant factors `d_1 | d_2 | ... | d_s`,
/// ascending, each at least 2. The trivial group is the empty list.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianInvariants {
    factors: Vec<u64>,
}

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

impl AbelianInvariants {
    pub fn trivial() -> Self {
        AbelianInvariants { factors: vec![] }
    }

    /// Canonicalizes an arbitrary list of cyclic orders into the invariant
    /// factor chain: split into prime powers, then zip the largest together.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in orders {
            assert!(n >= 1, "cyclic order must be positive");
            for (p, e) in factorize(n) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        Self::from_prime_parts(&by_prime)
    }

    /// Builds the chain from per-prime exponent multisets.
    pub fn from_prime_parts(by_prime: &BTreeMap<u64, Vec<u32>>) -> Self {
        let mut sorted: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        let mut chain_len = 0;
        for (&p, exps) in by_prime {
            let mut e: Vec<u32> = exps.iter().copied().filter(|&e| e > 0).collect();
            e.sort_unstable_by(|a, b| b.cmp(a)); // descending
            chain_len = chain_len.max(e.len());
            sorted.insert(p, e);
        }
        // factor #0 is the largest; build descending then reverse.
        let mut factors = Vec::with_capacity(chain_len);
        for i in 0..chain_len {
            let mut d = 1u64;
            for (p, e) in &sorted {
                if let Some(&exp) = e.get(i) {
                    d *= p.pow(exp);
                }
            }
            factors.push(d);
        }
        factors.reverse();
        AbelianInvariants { factors }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of the group: the largest invariant factor, or 1.
    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&d| d as u128).product()
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        let mut orders = self.factors.clone();
        orders.extend_from_slice(&other.factors);
        Self::from_cyclic_orders(&orders)
    }

    /// `Ext(A, Z_m)`, which for finite A equals `⊕ Z_gcd(d_i, m)`.
    pub fn ext_with_cyclic(&self, m: u64) -> AbelianInvariants {
        let orders: Vec<u64> = self
            .factors
            .iter()
            .map(|&d| num_integer::gcd(d, m))
            .collect();
        Self::from_cyclic_orders(&orders)
    }

    /// `Hom(A, Z_m) = ⊕ Z_gcd(d_i, m)` for finite A.
    pub fn hom_with_cyclic(&self, m: u64) -> AbelianInvariants {
        self.ext_with_cyclic(m)
    }

    /// The classical closed form for the Schur multiplier of an abelian
    /// group: the direct sum of `Z_gcd(d_i, d_j)` over pairs i < j
    /// (equivalently the exterior square).
    pub fn schur_multiplier_closed_form(&self) -> AbelianInvariants {
        let mut orders = Vec::new();
        for i in 0..self.factors.len() {
            for j in (i + 1)..self.factors.len() {
                orders.push(num_integer::gcd(self.factors[i], self.factors[j]));
            }
        }
        Self::from_cyclic_orders(&orders)
    }

    /// Closed form for the c-step multiplier of a finite abelian group.
    ///
    /// Writing the group as `Z_{n_1} ⊕ ... ⊕ Z_{n_s}` with `n_{i+1} | n_i`
    /// (largest first), the multiplier is `⊕_{i=2}^{s} Z_{n_i}^{b_i}` where
    /// `b_i = χ_{c+1}(i) − χ_{c+1}(i−1)` and `χ_w(i)` counts the basic
    /// commutators of weight w on i generators,
    /// `χ_w(i) = Σ_j C(i,j)·count_on_exactly(j, w)`.
    pub fn nilpotent_multiplier(&self, c: u32) -> AbelianInvariants {
        assert!(c >= 1);
        let s = self.factors.len();
        if s <= 1 {
            return AbelianInvariants::trivial();
        }
        let descending: Vec<u64> = self.factors.iter().rev().copied().collect();
        let chi = |i: u32| -> u64 {
            (1..=i)
                .map(|j| binom(i as u64, j as u64) * count_on_exactly(j, c + 1))
                .sum()
        };
        let mut orders = Vec::new();
        for i in 2..=s as u32 {
            let b = chi(i) - chi(i - 1);
            for _ in 0..b {
                orders.push(descending[(i - 1) as usize]);
            }
        }
        Self::from_cyclic_orders(&orders)
    }
}

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

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Invariant factors of an abelian multiplication-table group, by counting
/// solutions of `x^(p^j) = e`: the counts determine the partition of each
/// p-primary component uniquely.
pub fn invariants_of_abelian_table(g: &FiniteGroup) -> Result<AbelianInvariants, GroupError> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    if g.order() == 1 {
        return Ok(AbelianInvariants::trivial());
    }
    let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, a) in g.order_primes() {
        // mu[j] = log_p #{x : x^(p^j) = e}
        let mut mu = vec![0u32; a as usize + 1];
        for j in 1..=a {
            let pj = p.pow(j);
            let count = (0..g.order()).filter(|&x| g.pow(x, pj) == 0).count() as u64;
            let mut c = count;
            let mut log = 0u32;
            while c % p == 0 {
                c /= p;
                log += 1;
            }
            if c != 1 {
                return Err(GroupError::Internal(format!(
                    "solution count {count} for x^{p}^{j} is not a power of {p}"
                )));
            }
            mu[j as usize] = log;
        }
        // Conjugate partition: lambda'_j = mu_j - mu_{j-1}.
        let lambda_conj: Vec<u32> = (1..=a as usize)
            .map(|j| mu[j] - mu[j - 1])
            .collect();
        // lambda_i = #{j : lambda'_j >= i}, descending.
        let max_part = lambda_conj.first().copied().unwrap_or(0);
        let lambda: Vec<u32> = (1..=max_part)
            .map(|i| lambda_conj.iter().filter(|&&l| l >= i).count() as u32)
            .collect();
        by_prime.insert(p, lambda);
    }
    Ok(AbelianInvariants::from_prime_parts(&by_prime))
}

#[cfg(test)]
mod tests {
    use super::super::families::{abelian_group, cyclic, direct_product};
    use super::*;

    #[test]
    fn canonicalization() {
        let a = AbelianInvariants::from_cyclic_orders(&[6, 4]);
        assert_eq!(a.factors(), &[2, 12]);
        let b = AbelianInvariants::from_cyclic_orders(&[2, 2, 1]);
        assert_eq!(b.factors(), &[2, 2]);
        assert_eq!(AbelianInvariants::from_cyclic_orders(&[1]).factors(), &[] as &[u64]);
    }

    #[test]
    fn exponent_and_order() {
        let a = AbelianInvariants::from_cyclic_orders(&[4, 2]);
        assert_eq!(a.exponent(), 4);
        assert_eq!(a.order(), 8);
        assert_eq!(AbelianInvariants::trivial().exponent(), 1);
    }

    #[test]
    fn schur_closed_form_examples() {
        // Z2 x Z2 -> Z2
        let a = AbelianInvariants::from_cyclic_orders(&[2, 2]);
        assert_eq!(a.schur_multiplier_closed_form().factors(), &[2]);
        // Z4 x Z2 -> Z2
        let a = AbelianInvariants::from_cyclic_orders(&[4, 2]);
        assert_eq!(a.schur_multiplier_closed_form().factors(), &[2]);
        // Z3^3 -> Z3^3
        let a = AbelianInvariants::from_cyclic_orders(&[3, 3, 3]);
        assert_eq!(a.schur_multiplier_closed_form().factors(), &[3, 3, 3]);
        // Cyclic -> trivial
        let a = AbelianInvariants::from_cyclic_orders(&[8]);
        assert!(a.schur_multiplier_closed_form().is_trivial());
    }

    #[test]
    fn nilpotent_multiplier_examples() {
        // (Z2 x Z2, c=1) -> Z2
        let a = AbelianInvariants::from_cyclic_orders(&[2, 2]);
        assert_eq!(a.nilpotent_multiplier(1).factors(), &[2]);
        // (Z_p, any c) -> trivial
        let a = AbelianInvariants::from_cyclic_orders(&[5]);
        for c in 1..=6 {
            assert!(a.nilpotent_multiplier(c).is_trivial());
        }
        // (Z3 x Z3, c=2) -> Z3 x Z3
        let a = AbelianInvariants::from_cyclic_orders(&[3, 3]);
        assert_eq!(a.nilpotent_multiplier(2).factors(), &[3, 3]);
        // (Z4 x Z2, c=2) -> Z2 x Z2
        let a = AbelianInvariants::from_cyclic_orders(&[4, 2]);
        assert_eq!(a.nilpotent_multiplier(2).factors(), &[2, 2]);
    }

    #[test]
    fn nilpotent_multiplier_at_c1_is_schur() {
        for factors in [
            vec![2u64, 4, 8],
            vec![3, 9],
            vec![2, 2, 2, 2],
            vec![6, 12],
            vec![5],
        ] {
            let a = AbelianInvariants::from_cyclic_orders(&factors);
            assert_eq!(
                a.nilpotent_multiplier(1),
                a.schur_multiplier_closed_form(),
                "{factors:?}"
            );
        }
    }

    #[test]
    fn counting_invariants_from_tables() {
        let g = abelian_group(&[4, 2]).unwrap();
        assert_eq!(
            invariants_of_abelian_table(&g).unwrap().factors(),
            &[2, 4]
        );
        let g = direct_product(&cyclic(6).unwrap(), &cyclic(4).unwrap());
        assert_eq!(
            invariants_of_abelian_table(&g).unwrap().factors(),
            &[2, 12]
        );
        let g = cyclic(7).unwrap();
        assert_eq!(invariants_of_abelian_table(&g).unwrap().factors(), &[7]);
    }

    #[test]
    fn counting_rejects_nonabelian() {
        let g = super::super::families::dihedral(8).unwrap();
        assert_eq!(
            invariants_of_abelian_table(&g).unwrap_err(),
            GroupError::NotAbelian
        );
    }

    #[test]
    fn ext_and_hom() {
        let a = AbelianInvariants::from_cyclic_orders(&[4, 2]);
        assert_eq!(a.ext_with_cyclic(2).factors(), &[2, 2]);
        assert_eq!(a.ext_with_cyclic(3).factors(), &[] as &[u64]);
    }
}
