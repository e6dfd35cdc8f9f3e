//! Property-based invariants over randomized inputs.

use num_bigint::BigInt;
use proptest::prelude::*;

use nilmult::collect::binomial::BinomialPolynomial;
use nilmult::collect::FreeNilpotentGroup;
use nilmult::words::{Generator, Letter, Word};

fn letters(max_gen: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=max_gen, any::<bool>()).prop_map(|(g, inv)| Letter::new(Generator::new(g), inv)),
        0..=max_len,
    )
}

proptest! {
    #[test]
    fn reduce_is_idempotent(raw in letters(4, 64)) {
        let once = Word::reduce(raw.clone());
        let twice = Word::reduce(once.letters().iter().copied());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn word_times_inverse_cancels(raw in letters(4, 64)) {
        let w = Word::reduce(raw);
        prop_assert!(w.concat(&w.inverse()).is_identity());
        prop_assert!(w.inverse().concat(&w).is_identity());
    }

    #[test]
    fn commutator_in_derived_form(a in letters(3, 10), b in letters(3, 10)) {
        // [u, v] = u^-1 v^-1 u v literally.
        let u = Word::reduce(a);
        let v = Word::reduce(b);
        let direct = u.inverse().concat(&v.inverse()).concat(&u).concat(&v);
        prop_assert_eq!(Word::commutator(&u, &v), direct);
    }

    #[test]
    fn binomial_extraction_roundtrips(
        coeffs in prop::collection::vec(-100i64..100, 1..=6)
    ) {
        let poly = BinomialPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect());
        let d = coeffs.len() as u32;
        let values: Vec<(i64, BigInt)> =
            (0..=(d as i64 + 3)).map(|a| (a, poly.eval(&BigInt::from(a)))).collect();
        let back = BinomialPolynomial::extract(&values, d).unwrap();
        prop_assert_eq!(poly, back);
    }
}

/// Large randomized sweeps with a fixed seed so failures are reproducible:
/// free reduction cancels 1000 random words of length <= 64, and the normal
/// form is a homomorphism on 1000 random word pairs.
#[test]
fn thousand_word_cancellation() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x77);
    for _ in 0..1000 {
        let len = rng.gen_range(0..=64usize);
        let w = Word::reduce((0..len).map(|_| {
            Letter::new(Generator::new(rng.gen_range(1..=4)), rng.gen_bool(0.5))
        }));
        assert!(w.concat(&w.inverse()).is_identity());
    }
}

#[test]
fn thousand_pair_homomorphism() {
    use rand::{Rng, SeedableRng};
    let contexts: Vec<FreeNilpotentGroup> = [(2u32, 3u32), (3, 3), (2, 5), (3, 4), (3, 5)]
        .iter()
        .map(|&(n, k)| FreeNilpotentGroup::new(n, k).unwrap())
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1111);
    for i in 0..1000 {
        let group = &contexts[i % contexts.len()];
        let n = group.generator_count();
        let mut word = |rng: &mut rand_chacha::ChaCha8Rng| {
            let len = rng.gen_range(0..=12usize);
            Word::reduce((0..len).map(|_| {
                Letter::new(Generator::new(rng.gen_range(1..=n)), rng.gen_bool(0.5))
            }))
        };
        let u = word(&mut rng);
        let v = word(&mut rng);
        let lhs = group.normal_form(&u.concat(&v)).unwrap();
        let rhs = group
            .multiply(&group.normal_form(&u).unwrap(), &group.normal_form(&v).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs, "u={u}, v={v} in N({n},{})", group.class());
    }
}
