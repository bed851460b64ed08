//! Seeded generators for the germs, matrices and spectra used across the test suites.
//!
//! Everything is derived from a `ChaCha8Rng` so a seed pins the whole fixture set.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::centralizer::OracleKind;
use crate::error::Result;
use crate::io::{germ_to_json, matrix_to_json};
use crate::jet::{GermJet, MultiIndex, ScalarJet};
use crate::linalg::Matrix;
use crate::rings::{ExactComplex, ParamPoly, Ring};
use crate::smalldivisors::{golden_theta, silver_theta};
use crate::spectrum::{EigenSpec, Theta};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational, occasionally Gaussian: `(a + bi)/q` with `|a|, |b| ≤ 3`, `q ≤ 3`.
pub fn small_scalar(rng: &mut impl Rng) -> ExactComplex {
    let q = rng.gen_range(1..=3);
    let re = ExactComplex::from_ratio(rng.gen_range(-3..=3), q);
    if rng.gen_bool(0.25) {
        re + &(ExactComplex::i() * &ExactComplex::from_ratio(rng.gen_range(-3..=3), q))
    } else {
        re
    }
}

/// `z + (nonlinear terms)`, each coefficient nonzero with probability `density`.
pub fn random_tangent_identity(rng: &mut impl Rng, n: usize, m: usize, density: f64) -> GermJet<ExactComplex> {
    let mut comps = GermJet::<ExactComplex>::identity(n, m).components().to_vec();
    for comp in comps.iter_mut() {
        let space = comp.space().clone();
        for idx in space.degree_range(2).start..space.len() {
            if rng.gen_bool(density) {
                comp.add_term(space.monomial(idx), &small_scalar(rng)).expect("in range");
            }
        }
    }
    GermJet::new(comps).expect("valid germ")
}

/// Diagonal matrix of distinct signed primes; no product of two or more of them equals another.
pub fn random_nonresonant_diagonal(rng: &mut impl Rng, n: usize) -> Matrix<ExactComplex> {
    let mut primes = [2i64, 3, 5, 7, 11];
    primes.shuffle(rng);
    let d: Vec<ExactComplex> = primes[..n]
        .iter()
        .map(|&p| {
            let s = if rng.gen_bool(0.3) { -p } else { p };
            if rng.gen_bool(0.3) {
                ExactComplex::from_ratio(1, s)
            } else {
                ExactComplex::from_i64(s)
            }
        })
        .collect();
    Matrix::diagonal(&d)
}

/// `h∘A∘h⁻¹`.
pub fn conjugate(a: &Matrix<ExactComplex>, h: &GermJet<ExactComplex>) -> Result<GermJet<ExactComplex>> {
    h.compose(&GermJet::linear(a, h.order())?)?.compose(&h.inverse()?)
}

/// `(4z₁ + z₂², 2z₂)`: the `z₂²` term in the first coordinate is resonant.
pub fn obstruction_germ(m: usize) -> GermJet<ExactComplex> {
    let a = Matrix::diagonal(&[ExactComplex::from_i64(4), ExactComplex::from_i64(2)]);
    let mut comps = GermJet::linear(&a, m).expect("square").components().to_vec();
    comps[0].add_term(&MultiIndex::new(vec![0, 2]), &ExactComplex::one()).expect("in range");
    GermJet::new(comps).expect("valid germ")
}

/// `−z + z²`, whose second iterate is not the identity.
pub fn flip_germ(m: usize) -> GermJet<ExactComplex> {
    let t = [(MultiIndex::new(vec![1]), ExactComplex::from_i64(-1)), (MultiIndex::new(vec![2]), ExactComplex::one())];
    GermJet::new(vec![ScalarJet::from_terms(1, m, t).expect("valid jet")]).expect("valid germ")
}

/// The one-parameter family `λz + tz²`.
pub fn quadratic_family(lambda: i64, m: usize) -> GermJet<ParamPoly<ExactComplex>> {
    crate::potential::quadratic_family(lambda).lift(m)
}

/// `Az + Σ p_i(t) z^i` with `deg_t p_i ≤ d0` and at least one coefficient of degree exactly `d0`.
pub fn random_family(rng: &mut impl Rng, a: &Matrix<ExactComplex>, m: usize, d0: usize) -> GermJet<ParamPoly<ExactComplex>> {
    let n = a.rows();
    let lin = GermJet::linear(&a.map(crate::rings::embed_constant), m).expect("square");
    let mut comps = lin.components().to_vec();
    for comp in comps.iter_mut() {
        let space = comp.space().clone();
        for idx in space.degree_range(2).start..space.len() {
            if rng.gen_bool(0.5) {
                let p = ParamPoly::new((0..=d0).map(|_| small_scalar(rng)).collect());
                comp.add_term(space.monomial(idx), &p).expect("in range");
            }
        }
    }
    // pin the leading coefficient so deg_t is exactly d0
    let i = MultiIndex::unit(n, 0).add(&MultiIndex::unit(n, n - 1));
    let mut c = comps[0].coeff(&i).coeffs().to_vec();
    c.resize(d0 + 1, ExactComplex::zero());
    c[d0] = ExactComplex::one();
    comps[0].set_coeff(&i, ParamPoly::new(c)).expect("in range");
    GermJet::new(comps).expect("valid germ")
}

/// `diag(i, −i)`, of order 4.
pub fn quarter_turn() -> Matrix<ExactComplex> {
    Matrix::diagonal(&[ExactComplex::i(), -ExactComplex::i()])
}

/// `h∘A∘h⁻¹` with `A = diag(i, −i)` and a random `h`; of finite order 4 at every jet order.
pub fn finite_order_conjugate(rng: &mut impl Rng, m: usize) -> GermJet<ExactComplex> {
    let h = random_tangent_identity(rng, 2, m, 0.4);
    conjugate(&quarter_turn(), &h).expect("invertible")
}

pub fn elliptic_matrix() -> Matrix<ExactComplex> {
    OracleKind::Elliptic(ExactComplex::from_i64(2)).matrix().expect("λ ≠ 0")
}

pub fn jordan_matrix() -> Matrix<ExactComplex> {
    OracleKind::Jordan2.matrix().expect("square")
}

/// Torsion-free symbolic spectra `(μ^{b₁}, μ^{b₂})` with irrational `θ`.
pub fn torsion_free_specs(bits: usize) -> Vec<EigenSpec> {
    let mut out = Vec::new();
    for theta in [golden_theta(bits), silver_theta(bits)] {
        for b in [[1, -1], [1, 2], [2, -3], [1, 0]] {
            out.push(EigenSpec::symbolic(1, vec![0, 0], b.to_vec(), Some(theta.clone())).expect("valid spec"));
        }
    }
    out
}

/// Spectra with a nontrivial torsion part.
pub fn torsion_specs(bits: usize) -> Vec<EigenSpec> {
    vec![
        EigenSpec::symbolic(3, vec![1, 2], vec![1, -1], Some(golden_theta(bits))).expect("valid spec"),
        EigenSpec::symbolic(4, vec![1, 3], vec![0, 0], None).expect("valid spec"),
        EigenSpec::symbolic(1, vec![0, 0], vec![1, -1], Some(Theta::rational(1, 5))).expect("valid spec"),
    ]
}

/// Named fixture files, deterministic in `seed`.
pub fn fixture_set(seed: u64, m: usize, bits: usize) -> Result<Vec<(String, Value)>> {
    let mut r = rng(seed);
    let m = m.max(2);
    let mut out = vec![
        ("jordan2.json".to_string(), matrix_to_json(&jordan_matrix())),
        ("elliptic.json".to_string(), matrix_to_json(&elliptic_matrix())),
        ("quarter_turn.json".to_string(), matrix_to_json(&quarter_turn())),
        ("resonant.json".to_string(), germ_to_json(&obstruction_germ(m))),
        ("flip.json".to_string(), germ_to_json(&flip_germ(m))),
        ("quadratic_family.json".to_string(), germ_to_json(&quadratic_family(2, m))),
        ("golden_spec.json".to_string(), EigenSpec::symbolic(1, vec![0, 0], vec![1, -1], Some(golden_theta(bits)))?.to_json()),
    ];
    for k in 0..3 {
        let a = random_nonresonant_diagonal(&mut r, 2);
        let h = random_tangent_identity(&mut r, 2, m, 0.4);
        out.push((format!("conjugate_{k}.json"), germ_to_json(&conjugate(&a, &h)?)));
        out.push((format!("conjugate_{k}_h.json"), germ_to_json(&h)));
    }
    out.push(("finite_order.json".to_string(), germ_to_json(&finite_order_conjugate(&mut r, m))));
    Ok(out)
}
