use proptest::prelude::*;

use germlin::centralizer::verify_commute;
use germlin::fixtures::{quadratic_family, random_family, random_nonresonant_diagonal, rng};
use germlin::jet::MultiIndex;
use germlin::linearizer::{family_linearize, linearize, Status};
use germlin::rings::{ExactComplex, ParamPoly, Ring};

fn r(p: i64, q: i64) -> ExactComplex {
    ExactComplex::from_ratio(p, q)
}

#[test]
fn quadratic_family_closed_forms() {
    let fam = family_linearize(&quadratic_family(2, 4), 4).unwrap();
    let h = &fam.h_t.components()[0];
    assert_eq!(h.coeff(&MultiIndex::new(vec![2])), ParamPoly::monomial(r(-1, 2), 1));
    assert_eq!(h.coeff(&MultiIndex::new(vec![3])), ParamPoly::monomial(r(1, 3), 2));
    assert_eq!(fam.d0, 1);
    assert!(fam.violations().is_empty());
}

#[test]
fn specializing_t_agrees_with_the_pointwise_solver() {
    // h_t∘f_t = A∘h_t at t = t₀ means h_{t₀}⁻¹ linearizes f_{t₀} in the other orientation.
    let mut g = rng(11);
    let a = random_nonresonant_diagonal(&mut g, 2);
    let f = random_family(&mut g, &a, 5, 2);
    let fam = family_linearize(&f, 5).unwrap();
    for t0 in [r(0, 1), r(1, 1), r(-2, 3), ExactComplex::i()] {
        let ft = f.map_coeffs(|p| p.eval(&t0));
        let ht = fam.h_t.map_coeffs(|p| p.eval(&t0));
        let res = linearize(&ft, 5, &[]).unwrap();
        assert_eq!(res.status, Status::Linearized);
        assert_eq!(res.h, ht.inverse().unwrap());
    }
}

#[test]
fn constant_families_reduce_to_the_centralizer_at_the_linear_part() {
    let a = random_nonresonant_diagonal(&mut rng(2), 2);
    let f = germlin::jet::GermJet::linear(&a.map(germlin::rings::embed_constant), 4).unwrap();
    let fam = family_linearize(&f, 4).unwrap();
    let h0 = fam.h_t.map_coeffs(|p| p.eval(&ExactComplex::zero()));
    assert!(verify_commute(&h0, &a, 4).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn parameter_degree_is_bounded(seed in any::<u64>(), n in 1usize..=2, d0 in 1usize..=2, m in 2usize..=6) {
        let mut g = rng(seed);
        let a = random_nonresonant_diagonal(&mut g, n);
        let fam = family_linearize(&random_family(&mut g, &a, m, d0), m).unwrap();
        prop_assert_eq!(fam.d0, d0);
        prop_assert!(fam.violations().is_empty());
        for (i, deg) in &fam.degree_report {
            prop_assert!(*deg <= d0 * (i.degree() - 1));
        }
    }
}
