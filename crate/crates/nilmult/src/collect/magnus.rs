//! Truncated power series over the free associative ring, the backend for
//! exact arithmetic in free nilpotent groups.
//!
//! Sending each generator `x_i` to `1 + X_i` embeds the free group into the
//! units of `Z<X_1..X_n>` truncated beyond degree k, and a word maps to 1
//! exactly when it lies in the (k+1)-st lower central term. Equality of
//! truncated series is therefore equality in the free nilpotent group of
//! class k, which is what makes this a trustworthy engine: every operation
//! below is plain polynomial arithmetic with arbitrary-precision integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Maximum truncation degree supported by the packed monomial encoding.
pub const MAX_CLASS: u32 = 12;
/// Maximum generator count supported by the packed monomial encoding.
pub const MAX_GENERATORS: u32 = 15;

/// A noncommutative monomial of degree `d` is packed into a `u64` as `d`
/// little-endian nibbles, each holding `generator_index - 1`.
pub type Mono = u64;

pub fn mono_concat(a: Mono, deg_a: u32, b: Mono) -> Mono {
    a | (b << (4 * deg_a))
}

pub fn mono_digits(m: Mono, deg: u32) -> Vec<u32> {
    (0..deg).map(|i| ((m >> (4 * i)) & 0xf) as u32 + 1).collect()
}

/// A polynomial of degree at most `k` over `Z<X_1..X_n>`, stored by
/// homogeneous component.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    n: u32,
    k: u32,
    comps: Vec<BTreeMap<Mono, BigInt>>,
}

impl Series {
    fn zero(n: u32, k: u32) -> Self {
        assert!(n >= 1 && n <= MAX_GENERATORS && k >= 1 && k <= MAX_CLASS);
        Series {
            n,
            k,
            comps: vec![BTreeMap::new(); (k + 1) as usize],
        }
    }

    pub fn one(n: u32, k: u32) -> Self {
        let mut s = Self::zero(n, k);
        s.comps[0].insert(0, BigInt::one());
        s
    }

    /// The image `1 + X_i` of generator `x_i` (1-based).
    pub fn generator(n: u32, k: u32, i: u32) -> Self {
        assert!(i >= 1 && i <= n);
        let mut s = Self::one(n, k);
        s.comps[1].insert((i - 1) as Mono, BigInt::one());
        s
    }

    pub fn class(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> u32 {
        self.n
    }

    pub fn is_one(&self) -> bool {
        self.comps[0].get(&0).is_some_and(|c| c.is_one())
            && self.comps[0].len() == 1
            && self.comps[1..].iter().all(|c| c.is_empty())
    }

    pub fn constant_term(&self) -> BigInt {
        self.comps[0].get(&0).cloned().unwrap_or_else(BigInt::zero)
    }

    /// The homogeneous degree-`w` component.
    pub fn homogeneous(&self, w: u32) -> &BTreeMap<Mono, BigInt> {
        &self.comps[w as usize]
    }

    fn insert_term(&mut self, deg: u32, mono: Mono, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.comps[deg as usize].entry(mono) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        assert_eq!((self.n, self.k), (other.n, other.k), "series context mismatch");
        let mut out = Series::zero(self.n, self.k);
        for da in 0..=self.k {
            if self.comps[da as usize].is_empty() {
                continue;
            }
            for db in 0..=(self.k - da) {
                if other.comps[db as usize].is_empty() {
                    continue;
                }
                for (&ma, ca) in &self.comps[da as usize] {
                    for (&mb, cb) in &other.comps[db as usize] {
                        out.insert_term(da + db, mono_concat(ma, da, mb), ca * cb);
                    }
                }
            }
        }
        out
    }

    fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for d in 0..=self.k {
            for (&m, c) in &other.comps[d as usize] {
                out.insert_term(d, m, c.clone());
            }
        }
        out
    }

    fn negate(&self) -> Series {
        let mut out = self.clone();
        for comp in &mut out.comps {
            for c in comp.values_mut() {
                *c = -&*c;
            }
        }
        out
    }

    /// Strictly positive-degree part, i.e. `self - constant`.
    fn nil_part(&self) -> Series {
        let mut out = self.clone();
        out.comps[0].clear();
        out
    }

    /// Exact inverse of a series with constant term 1, via the finite
    /// geometric series of its nilpotent part.
    pub fn inverse(&self) -> Series {
        assert!(self.constant_term().is_one(), "series must have constant term 1");
        let minus_nil = self.nil_part().negate();
        // 1 + N'(1 + N'(1 + ...)) with N' = -N.
        let one = Series::one(self.n, self.k);
        let mut acc = one.clone();
        for _ in 0..self.k {
            acc = one.add(&minus_nil.mul(&acc));
        }
        acc
    }

    /// `self^e` for any integer e, exact. For constant term 1 this is the
    /// binomial series of the nilpotent part, which terminates at degree k.
    pub fn pow(&self, e: &BigInt) -> Series {
        assert!(self.constant_term().is_one(), "series must have constant term 1");
        let nil = self.nil_part();
        let mut out = Series::one(self.n, self.k);
        let mut nil_power = Series::one(self.n, self.k);
        let mut coeff = BigInt::one();
        for l in 1..=self.k {
            nil_power = nil_power.mul(&nil);
            if nil_power.comps.iter().all(|c| c.is_empty()) {
                break;
            }
            // C(e, l) = C(e, l-1) * (e - l + 1) / l, exact at every step.
            coeff = &coeff * (e - BigInt::from(l - 1));
            coeff = &coeff / BigInt::from(l);
            if coeff.is_zero() {
                // e is a nonnegative integer smaller than l; all later
                // binomials vanish too.
                break;
            }
            let mut term = nil_power.clone();
            for comp in &mut term.comps {
                for c in comp.values_mut() {
                    *c = &*c * &coeff;
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Group commutator of two unit series.
    pub fn commutator(a: &Series, b: &Series) -> Series {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Total number of stored terms, a cheap size probe.
    pub fn term_count(&self) -> usize {
        self.comps.iter().map(|c| c.len()).sum()
    }
}

/// Homogeneous Lie monomial of a bracket tree: `[a, b] = ab - ba` applied
/// recursively. Returns the degree and the map monomial -> coefficient.
pub fn lie_bracket(
    a: &(u32, BTreeMap<Mono, BigInt>),
    b: &(u32, BTreeMap<Mono, BigInt>),
) -> (u32, BTreeMap<Mono, BigInt>) {
    let (da, ma) = a;
    let (db, mb) = b;
    let mut out: BTreeMap<Mono, BigInt> = BTreeMap::new();
    let mut add = |m: Mono, c: BigInt| {
        use std::collections::btree_map::Entry;
        match out.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    };
    for (&x, cx) in ma {
        for (&y, cy) in mb {
            add(mono_concat(x, *da, y), cx * cy);
            add(mono_concat(y, *db, x), -(cx * cy));
        }
    }
    (da + db, out)
}

/// The degree-1 Lie monomial of generator `i` (1-based).
pub fn lie_generator(i: u32) -> (u32, BTreeMap<Mono, BigInt>) {
    let mut m = BTreeMap::new();
    m.insert((i - 1) as Mono, BigInt::one());
    (1, m)
}

pub fn coeff_abs_bound(m: &BTreeMap<Mono, BigInt>) -> BigInt {
    m.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Series {
        Series::generator(2, 3, i)
    }

    #[test]
    fn inverse_is_exact() {
        let a = x(1).mul(&x(2)).mul(&x(1).inverse());
        assert!(a.mul(&a.inverse()).is_one());
        assert!(a.inverse().mul(&a).is_one());
    }

    #[test]
    fn pow_agrees_with_repeated_multiplication() {
        let a = x(1).mul(&x(2));
        let mut acc = Series::one(2, 3);
        for e in 0..8 {
            assert_eq!(a.pow(&BigInt::from(e)), acc);
            acc = acc.mul(&a);
        }
    }

    #[test]
    fn pow_negative_is_inverse_power() {
        let a = x(1).mul(&x(2)).mul(&x(1));
        let direct = a.pow(&BigInt::from(-3));
        let via_inverse = a.inverse().pow(&BigInt::from(3));
        assert_eq!(direct, via_inverse);
    }

    #[test]
    fn class_k_kills_weight_k_plus_one_commutators() {
        // [[x1,x2],x1] nested once more dies at k = 3.
        let c2 = Series::commutator(&x(1), &x(2));
        let c3 = Series::commutator(&c2, &x(1));
        let c4 = Series::commutator(&c3, &x(2));
        assert!(!c3.is_one());
        assert!(c4.is_one());
    }

    #[test]
    fn commutator_bottom_degree_is_the_lie_bracket() {
        let c = Series::commutator(&x(2), &x(1));
        let (deg, lie) = lie_bracket(&lie_generator(2), &lie_generator(1));
        assert_eq!(deg, 2);
        assert_eq!(c.homogeneous(2), &lie);
        assert!(c.homogeneous(1).is_empty());
    }
}
