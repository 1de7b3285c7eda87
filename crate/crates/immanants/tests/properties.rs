//! Randomized property tests for the structural invariants: partition
//! resource accounting, polynomial ring laws, order-independence of the
//! character recursion, and the extended character against its brute-force
//! concatenation oracle.

use immanants::characters::{
    character, character_on_product, enumerate_bst, theta_product, CharacterCache,
};
use immanants::partition::{tetromino_number, two_core, two_core_with, Partition, SkewShape};
use immanants::poly::Poly2;
use immanants::{rat, ratio};
use num::BigInt;
use proptest::prelude::*;

/// A random partition with parts <= 6 and at most `max_len` rows.
fn arb_partition(max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=6, 0..=max_len).prop_map(Partition::new)
}

/// A random partition of exactly `n`, built by consuming part picks.
fn partition_of(n: usize, picks: &[usize]) -> Partition {
    let mut parts = Vec::new();
    let mut left = n;
    let mut i = 0;
    while left > 0 {
        let p = picks.get(i).copied().unwrap_or(1).min(left).max(1);
        parts.push(p);
        left -= p;
        i += 1;
    }
    Partition::new(parts)
}

fn arb_poly() -> impl Strategy<Value = Poly2> {
    prop::collection::vec(((-9i64..=9), 0u32..=3, 0u32..=3), 0..=4).prop_map(|terms| {
        let mut p = Poly2::zero();
        for (c, a, b) in terms {
            p += &Poly2::monomial(rat(c), a, b);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_resource_accounting(lambda in arb_partition(6)) {
        let stats = two_core(&lambda);
        prop_assert_eq!(2 * stats.d + stats.z, lambda.size());
        prop_assert_eq!(stats.z, stats.w * (stats.w + 1) / 2);
        prop_assert!(stats.staircase.is_staircase());
        prop_assert_eq!(stats.peel_certificate.len(), stats.d);
    }

    #[test]
    fn two_core_is_confluent(lambda in arb_partition(6), picks in prop::collection::vec(0usize..1000, 0..32)) {
        let reference = two_core(&lambda);
        let mut i = 0;
        let scrambled = two_core_with(&lambda, |choices| {
            let pick = picks.get(i).copied().unwrap_or(0) % choices;
            i += 1;
            pick
        });
        prop_assert_eq!(scrambled.d, reference.d);
        prop_assert_eq!(scrambled.staircase, reference.staircase);
    }

    #[test]
    fn poly_ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Poly2::one(), p.clone());
        // Evaluation is a ring homomorphism.
        let (x, y) = (ratio(3, 2), rat(-2));
        prop_assert_eq!((&p * &q).eval(&x, &y), p.eval(&x, &y) * q.eval(&x, &y));
        prop_assert_eq!((&p + &q).eval(&x, &y), p.eval(&x, &y) + q.eval(&x, &y));
    }

    #[test]
    fn character_is_order_independent(
        lambda_picks in prop::collection::vec(1usize..=5, 1..=8),
        rho_picks in prop::collection::vec(1usize..=5, 1..=8),
    ) {
        let n = 7;
        let lambda = partition_of(n, &lambda_picks);
        let rho = partition_of(n, &rho_picks);
        let via_recursion = character(&lambda, &rho).unwrap();
        // Brute force: peel the parts of rho in ascending and in descending
        // order via full border-strip-tableau enumeration.
        let shape = SkewShape::straight(lambda.clone());
        let mut asc: Vec<usize> = rho.parts().to_vec();
        asc.reverse();
        let desc: Vec<usize> = rho.parts().to_vec();
        for kappa in [asc, desc] {
            let total: i64 = enumerate_bst(&shape, &kappa)
                .unwrap()
                .iter()
                .map(|t| t.height_sign())
                .sum();
            prop_assert_eq!(BigInt::from(total), via_recursion.clone());
        }
    }

    #[test]
    fn extended_character_matches_concatenation_oracle(lambda in arb_partition(5)) {
        let (s_max, _) = tetromino_number(&lambda);
        for s in 0..=s_max {
            let product = theta_product(&lambda, s).unwrap();
            let extended = character_on_product(&lambda, &product).unwrap();
            let mut cache = CharacterCache::new();
            let mut oracle = BigInt::from(0);
            for concat in product.concatenations() {
                oracle += cache.chi(&lambda, &concat).unwrap();
            }
            prop_assert_eq!(extended, oracle);
        }
    }
}
