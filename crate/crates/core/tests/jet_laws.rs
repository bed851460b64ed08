use proptest::prelude::*;

use germlin::fixtures::{random_nonresonant_diagonal, random_tangent_identity, rng};
use germlin::io::{germ_from_json, germ_to_json};
use germlin::jet::{germ_compose, germ_inverse, germ_iterate, project, GermJet};
use germlin::rings::ExactComplex;

/// Seeded germ `A∘(z + N(z))` with `A` a random nonresonant diagonal.
fn germ(seed: u64, n: usize, m: usize) -> GermJet<ExactComplex> {
    let mut r = rng(seed);
    let a = random_nonresonant_diagonal(&mut r, n);
    random_tangent_identity(&mut r, n, m, 0.35).left_linear(&a).unwrap()
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), 2usize..=if n == 3 { 6 } else { 8 }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_is_two_sided((n, m) in dims(), seed in any::<u64>()) {
        let f = germ(seed, n, m);
        let g = germ_inverse(&f).unwrap();
        prop_assert!(germ_compose(&f, &g).unwrap().is_identity());
        prop_assert!(germ_compose(&g, &f).unwrap().is_identity());
        prop_assert_eq!(germ_inverse(&g).unwrap(), f);
    }

    #[test]
    fn composition_is_associative((n, m) in dims(), s in any::<[u64; 3]>()) {
        let (f, g, h) = (germ(s[0], n, m), germ(s[1], n, m), germ(s[2], n, m));
        let left = germ_compose(&germ_compose(&f, &g).unwrap(), &h).unwrap();
        let right = germ_compose(&f, &germ_compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn iteration_is_a_homomorphism((n, m) in dims(), seed in any::<u64>(), a in 1u64..4, b in 1u64..4) {
        let f = germ(seed, n, m.min(6));
        let lhs = germ_iterate(&f, a + b).unwrap();
        let rhs = germ_compose(&germ_iterate(&f, a).unwrap(), &germ_iterate(&f, b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_commutes_with_composition((n, m) in dims(), s in any::<[u64; 2]>(), k in 1usize..8) {
        let k = k.min(m);
        let (f, g) = (germ(s[0], n, m), germ(s[1], n, m));
        let full = project(&germ_compose(&f, &g).unwrap(), k).unwrap();
        let cut = germ_compose(&project(&f, k).unwrap(), &project(&g, k).unwrap()).unwrap();
        prop_assert_eq!(full, cut);
    }

    #[test]
    fn germ_files_round_trip((n, m) in dims(), seed in any::<u64>()) {
        let f = germ(seed, n, m);
        let back = germ_from_json(&germ_to_json(&f)).unwrap().into_exact().unwrap();
        prop_assert_eq!(back, f);
    }
}
