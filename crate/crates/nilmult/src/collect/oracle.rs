//! Randomized soundness oracle for collected normal forms.
//!
//! Upper unitriangular integer matrices of size (k+1) form a group of
//! nilpotency class k, so any identity that holds in N(n, k) must hold
//! under every substitution of the generators by such matrices. The oracle
//! draws random substitutions and compares the word against the expansion
//! of its claimed normal form. Disagreement refutes the normal form;
//! agreement over many trials is strong evidence, independent of both
//! symbolic engines.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FreeNilpotentGroup, NilpotentElement};
use crate::hall::Node;
use crate::words::Word;

/// Dense square matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMat {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMat { dim, entries }
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.dim + j]
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        let d = self.dim;
        let mut out = IntMat {
            dim: d,
            entries: vec![BigInt::zero(); d * d],
        };
        for i in 0..d {
            for l in 0..d {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.at(l, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    fn sub_identity(&self) -> IntMat {
        let mut n = self.clone();
        for i in 0..self.dim {
            *n.at_mut(i, i) -= BigInt::one();
        }
        n
    }

    fn is_nilpotent_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Inverse of a unitriangular matrix, by the finite geometric series of
    /// its strictly-triangular part.
    pub fn unitriangular_inverse(&self) -> IntMat {
        let n = self.sub_identity();
        let mut acc = IntMat::identity(self.dim);
        let mut pow = IntMat::identity(self.dim);
        let mut sign = false;
        loop {
            pow = pow.mul(&n);
            if pow.is_nilpotent_zero() {
                break;
            }
            sign = !sign;
            for (a, p) in acc.entries.iter_mut().zip(&pow.entries) {
                if sign {
                    *a -= p;
                } else {
                    *a += p;
                }
            }
        }
        acc
    }

    /// `self^e` for a unitriangular matrix and any integer e, via the
    /// binomial expansion of `(I + N)^e`.
    pub fn unitriangular_pow(&self, e: &BigInt) -> IntMat {
        let n = self.sub_identity();
        let mut acc = IntMat::identity(self.dim);
        let mut pow = IntMat::identity(self.dim);
        let mut coeff = BigInt::one();
        for l in 1..=(self.dim as u32) {
            pow = pow.mul(&n);
            if pow.is_nilpotent_zero() {
                break;
            }
            coeff = &coeff * (e - BigInt::from(l - 1));
            coeff = &coeff / BigInt::from(l);
            if coeff.is_zero() {
                break;
            }
            for (a, p) in acc.entries.iter_mut().zip(&pow.entries) {
                *a += &coeff * p;
            }
        }
        acc
    }
}

fn random_unitriangular(rng: &mut impl Rng, dim: usize) -> IntMat {
    let mut m = IntMat::identity(dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            *m.at_mut(i, j) = BigInt::from(rng.gen_range(-9..=9i32));
        }
    }
    m
}

fn eval_word(w: &Word, gens: &[IntMat], dim: usize) -> IntMat {
    let mut acc = IntMat::identity(dim);
    for l in w.letters() {
        let m = &gens[(l.gen.index() - 1) as usize];
        let m = if l.inverse {
            m.unitriangular_inverse()
        } else {
            m.clone()
        };
        acc = acc.mul(&m);
    }
    acc
}

fn eval_normal_form(
    group: &FreeNilpotentGroup,
    nf: &NilpotentElement,
    gens: &[IntMat],
    dim: usize,
) -> IntMat {
    // Matrices of the basic commutators, built bottom-up along the basis.
    let basis = group.basis();
    let mut mats: Vec<Option<IntMat>> = vec![None; basis.len()];
    let mat_of = |rank: usize, mats: &mut Vec<Option<IntMat>>| -> IntMat {
        // Ranks reference strictly earlier ranks, so a simple forward pass
        // fills everything a normal form can touch.
        if let Some(m) = &mats[rank] {
            return m.clone();
        }
        let mut order: Vec<usize> = vec![rank];
        let mut i = 0;
        while i < order.len() {
            if let Node::Bracket { left, right } = basis.entry(order[i]).node {
                if mats[left].is_none() {
                    order.push(left);
                }
                if mats[right].is_none() {
                    order.push(right);
                }
            }
            i += 1;
        }
        order.sort_unstable();
        for &r in &order {
            if mats[r].is_some() {
                continue;
            }
            let m = match basis.entry(r).node {
                Node::Leaf(g) => gens[(g.index() - 1) as usize].clone(),
                Node::Bracket { left, right } => {
                    let a = mats[left].as_ref().unwrap();
                    let b = mats[right].as_ref().unwrap();
                    a.unitriangular_inverse()
                        .mul(&b.unitriangular_inverse())
                        .mul(a)
                        .mul(b)
                }
            };
            mats[r] = Some(m);
        }
        mats[rank].as_ref().unwrap().clone()
    };

    let mut acc = IntMat::identity(dim);
    for (rank, exp) in nf.factors() {
        let m = mat_of(rank, &mut mats);
        acc = acc.mul(&m.unitriangular_pow(exp));
    }
    acc
}

/// Tests `w = nf` in N(n, k) under `trials` random unitriangular
/// substitutions of size (k+1); false on the first disagreement.
pub fn matrix_oracle(
    group: &FreeNilpotentGroup,
    w: &Word,
    nf: &NilpotentElement,
    trials: u32,
    seed: u64,
) -> bool {
    let dim = group.class() as usize + 1;
    let n = group.generator_count() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let gens: Vec<IntMat> = (0..n).map(|_| random_unitriangular(&mut rng, dim)).collect();
        let lhs = eval_word(w, &gens, dim);
        let rhs = eval_normal_form(group, nf, &gens, dim);
        if lhs != rhs {
            return false;
        }
    }
    true
}
