//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any criterion fails.

use std::cmp::Ordering;
use std::time::Instant;

use rand::Rng;

use germlin::centralizer::{
    centralizer_basis, centralizer_oracle, difference_equation_solvable, scalar_difference_matrix, verify_commute, OracleKind,
};
use germlin::fixtures::{
    conjugate, elliptic_matrix, finite_order_conjugate, flip_germ, jordan_matrix, obstruction_germ, quadratic_family,
    quarter_turn, random_family, random_nonresonant_diagonal, random_tangent_identity, rng, small_scalar,
    torsion_free_specs, torsion_specs,
};
use germlin::jet::{binomial, GermJet, MultiIndex};
use germlin::linalg::{null_space, Matrix};
use germlin::linearizer::{
    average_linearization, family_linearize, finite_order_test, linearize, normalization_family, FiniteOrderVerdict, Status,
};
use germlin::potential::{bernstein_check, growth_experiment, random_points, CompactSet};
use germlin::rings::real::{self, BigFloat};
use germlin::rings::{ExactComplex, ParamPoly, Ring};
use germlin::smalldivisors::{base_reduction_check, bruno_check, golden_theta, liouville_theta, profile, BrunoVerdict};
use germlin::spectrum::{resonances, EigenSpec};

type Outcome = (bool, String);

fn c(v: i64) -> ExactComplex {
    ExactComplex::from_i64(v)
}

fn random_invertible(r: &mut impl Rng, n: usize) -> Matrix<ExactComplex> {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| c(r.gen_range(-2..=2))).collect()).collect();
        let a = Matrix::from_rows(rows).unwrap();
        if a.inverse().is_ok() {
            return a;
        }
    }
}

fn jet_laws() -> Outcome {
    let mut r = rng(1);
    let mut failures = 0;
    for k in 0..200 {
        let n = 1 + k % 3;
        let m = r.gen_range(2..=8);
        let density = 0.3;
        let f = random_tangent_identity(&mut r, n, m, density).left_linear(&random_invertible(&mut r, n)).unwrap();
        let g = random_tangent_identity(&mut r, n, m, density).left_linear(&random_invertible(&mut r, n)).unwrap();
        let h = random_tangent_identity(&mut r, n, m, density);
        let fi = f.inverse().unwrap();
        let inv_ok = f.compose(&fi).unwrap().is_identity() && fi.compose(&f).unwrap().is_identity();
        let assoc_ok = f.compose(&g).unwrap().compose(&h).unwrap() == f.compose(&g.compose(&h).unwrap()).unwrap();
        let (a, b) = (r.gen_range(1..=2u64), r.gen_range(1..=2u64));
        let iter_ok = f.iterate(a + b).unwrap() == f.iterate(a).unwrap().compose(&f.iterate(b).unwrap()).unwrap();
        failures += usize::from(!(inv_ok && assoc_ok && iter_ok));
    }
    (failures == 0, format!("200 germs, n <= 3, m <= 8, {failures} failures"))
}

fn centralizer_oracles() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 2..=8 {
        let e = centralizer_basis(&elliptic_matrix(), m).unwrap();
        let eo = centralizer_oracle(&OracleKind::Elliptic(c(2)), m).unwrap();
        if !(e.same_span(&eo) && e.delta == 2 * ((m - 1) / 2)) {
            ok = false;
            notes.push(format!("elliptic m={m}: delta {}", e.delta));
        }
        let j = centralizer_basis(&jordan_matrix(), m).unwrap();
        let jo = centralizer_oracle(&OracleKind::Jordan2, m).unwrap();
        if !(j.same_span(&jo) && j.delta == m - 1) {
            ok = false;
            notes.push(format!("jordan m={m}: null space delta {} vs closed form {}", j.delta, m - 1));
        }
    }
    (ok, if ok { "elliptic and Jordan spans match for m = 2..8".into() } else { notes.join("; ") })
}

fn difference_operator() -> Outcome {
    let mut shape_ok = true;
    let mut solvable = Vec::new();
    for d in 2..=8usize {
        let l = scalar_difference_matrix(&jordan_matrix(), d).unwrap();
        shape_ok &= l.is_lower_triangular_strict();
        for col in 0..=d {
            for row in col + 1..=d {
                shape_ok &= l.get(row, col) == &c(binomial(d - col, row - col) as i64);
            }
        }
        let ker = null_space(&l);
        let mut z2 = vec![c(0); d + 1];
        z2[d] = c(1);
        shape_ok &= ker.len() == 1 && ker[0] == z2;
        // ψ(z₂) homogeneous of degree d is a multiple of z₂^d
        if difference_equation_solvable(&jordan_matrix(), d, &z2).unwrap() {
            solvable.push(d);
        }
    }
    let ok = shape_ok && solvable.is_empty();
    let detail = format!(
        "triangular binomial matrix and kernel span(z2^n): {}; psi = z2^n solvable for n in {:?} (phi = z1 z2^(n-1))",
        if shape_ok { "yes" } else { "no" },
        solvable
    );
    (ok, detail)
}

fn round_trip() -> Outcome {
    let mut r = rng(4);
    let mut failures = 0;
    for k in 0..100 {
        let n = 1 + k % 3;
        let m = r.gen_range(2..=if n == 3 { 5 } else { 6 });
        let a = random_nonresonant_diagonal(&mut r, n);
        let h = random_tangent_identity(&mut r, n, m, 0.4);
        let f = conjugate(&a, &h).unwrap();
        let res = linearize(&f, m, &[]).unwrap();
        failures += usize::from(!(res.status == Status::Linearized && res.free_slots.is_empty() && res.h == h));
    }
    (failures == 0, format!("100 conjugates, {failures} failures"))
}

fn obstruction() -> Outcome {
    let f = obstruction_germ(4);
    let total = resonances(&EigenSpec::from_diagonal(f.linear_part()).unwrap(), 4).unwrap().len();
    let mut r = rng(5);
    let mut ok = true;
    for trial in 0..5 {
        let s: Vec<ExactComplex> = if trial == 0 { vec![] } else { (0..total).map(|_| small_scalar(&mut r)).collect() };
        let res = linearize(&f, 4, &s).unwrap();
        ok &= res.status == Status::Obstructed
            && res.obstruction.as_ref().is_some_and(|o| o.monomial == MultiIndex::new(vec![0, 2]) && o.coordinate == 0 && o.value == c(1));
    }
    (ok, "slot ((0,2),1) with value 1 for s = 0 and 4 random s".into())
}

fn coset() -> Outcome {
    let a = elliptic_matrix();
    let m = 6;
    let total = resonances(&EigenSpec::from_diagonal(&a).unwrap(), m).unwrap().len();
    let mut r = rng(6);
    let mut failures = 0;
    for _ in 0..10 {
        let f = conjugate(&a, &random_tangent_identity(&mut r, 2, m, 0.4)).unwrap();
        let s1: Vec<_> = (0..total).map(|_| small_scalar(&mut r)).collect();
        let s2: Vec<_> = (0..total).map(|_| small_scalar(&mut r)).collect();
        let h1 = normalization_family(&f, m, &s1).unwrap();
        let h2 = normalization_family(&f, m, &s2).unwrap();
        let g = h1.inverse().unwrap().compose(&h2).unwrap();
        failures += usize::from(!verify_commute(&g, &a, m).unwrap());
    }
    (failures == 0, format!("A = diag(2, 1/2), m = {m}, 10 pairs (s1, s2), {failures} failures"))
}

fn degree_bound() -> Outcome {
    let mut r = rng(7);
    let mut violations = 0;
    for k in 0..50 {
        let n = 1 + k % 2;
        let d0 = 1 + (k / 2) % 2;
        let m = r.gen_range(2..=if n == 1 { 8 } else { 6 });
        let a = random_nonresonant_diagonal(&mut r, n);
        let fam = family_linearize(&random_family(&mut r, &a, m, d0), m).unwrap();
        violations += fam.violations().len();
    }
    let fam = family_linearize(&quadratic_family(2, 3), 3).unwrap();
    let h2 = fam.h_t.components()[0].coeff(&MultiIndex::new(vec![2]));
    let fixture_ok = h2 == ParamPoly::monomial(ExactComplex::from_ratio(-1, 2), 1);
    (violations == 0 && fixture_ok, format!("50 families, {violations} violations; h2 = -t/2: {fixture_ok}"))
}

fn averaging() -> Outcome {
    let a = quarter_turn();
    let mut r = rng(8);
    let mut failures = 0;
    for _ in 0..10 {
        let f = conjugate(&a, &random_tangent_identity(&mut r, 2, 5, 0.5)).unwrap();
        let k0 = average_linearization(&f, 4, &GermJet::identity(2, 5), 5).unwrap();
        failures += usize::from(k0.compose(&f).unwrap() != k0.left_linear(&a).unwrap());
    }
    (failures == 0, format!("A = diag(i, -i), order 5, 10 germs, {failures} failures"))
}

fn finite_order() -> Outcome {
    let flip_ok = matches!(finite_order_test(&flip_germ(4), 4).unwrap(), FiniteOrderVerdict::NotLinearizable { q: 2, .. });
    let mut r = rng(9);
    let mut witnesses = 0;
    for _ in 0..5 {
        let f = finite_order_conjugate(&mut r, 6);
        if let FiniteOrderVerdict::LinearizableWitness { linearizer, .. } = finite_order_test(&f, 6).unwrap() {
            witnesses += usize::from(linearizer.compose(&f).unwrap() == linearizer.left_linear(f.linear_part()).unwrap());
        }
    }
    (flip_ok && witnesses == 5, format!("-z + z^2 not linearizable: {flip_ok}; verified witnesses {witnesses}/5"))
}

fn small_divisors() -> Outcome {
    let bits = 256;
    let tol = real::pow2(-200, bits);
    let mut notes = Vec::new();
    let mut specs = torsion_free_specs(bits);
    specs.extend(torsion_specs(bits));
    for (k, spec) in specs.iter().enumerate() {
        let base = profile(spec, 30, bits).unwrap();
        for w in base.table.windows(2) {
            if let (Some(a), Some(b)) = (&w[0].value, &w[1].value) {
                if real::cmp(b, a) == Ordering::Greater {
                    notes.push(format!("spec {k}: not monotone at m={}", w[1].m));
                }
            }
        }
        for q in 2..=5u64 {
            let pq = profile(&spec.power(q), 30, bits).unwrap();
            for (eq, e1) in pq.table.iter().zip(&base.table) {
                let holds = match (&eq.value, &e1.value) {
                    (None, _) => true,
                    (Some(_), None) => false,
                    (Some(x), Some(y)) => {
                        let bound: BigFloat = real::add(&real::mul(&real::from_i64(q as i64, bits), y, bits), &tol, bits);
                        real::cmp(x, &bound) != Ordering::Greater
                    }
                };
                if !holds {
                    notes.push(format!("spec {k}: torsion inequality fails at q={q}, m={}", eq.m));
                }
            }
        }
    }
    for (k, spec) in torsion_free_specs(bits).iter().enumerate() {
        for m in 2..=10 {
            if !base_reduction_check(spec, m, bits).unwrap().holds {
                notes.push(format!("torsion-free spec {k}: base reduction fails at m={m}"));
            }
        }
    }
    let ok = notes.is_empty();
    (ok, if ok { format!("{} specs, q <= 5, m <= 30, 256 bits", specs.len()) } else { notes.join("; ") })
}

fn bruno() -> Outcome {
    let g = bruno_check(&golden_theta(256), 20, 100.0, 256).unwrap();
    let l = bruno_check(&liouville_theta(5, 512), 20, 100.0, 512).unwrap();
    let g_ok = matches!(g.verdict, BrunoVerdict::ConvergedAtCutoff { .. });
    let l_ok = matches!(l.verdict, BrunoVerdict::ExceededBound { .. });
    let sum = |r: &germlin::smalldivisors::BrunoReport| real::to_f64(r.partial_sums.last().unwrap());
    let detail = format!(
        "golden K=20: {:?} (B = {:.4}); Liouville 5 terms: {:?} (B = {:.4}, bound 100)",
        g.verdict,
        sum(&g),
        l.verdict,
        sum(&l)
    );
    (g_ok && l_ok, detail)
}

fn bernstein() -> Outcome {
    let bits = 128;
    let disk = CompactSet::unit_disk();
    let mut extremal_ok = true;
    for n in 0..=10usize {
        let mut p = vec![c(0); n + 1];
        p[n] = c(1);
        let rep = bernstein_check(&p, &disk, &random_points(&disk, 50, 3.0, n as u64, bits), bits);
        let ratio = real::to_f64(rep.max_ratio.as_ref().unwrap());
        extremal_ok &= rep.passed() && (ratio - 1.0).abs() < 1e-20;
    }
    let mut r = rng(12);
    let mut violations = 0;
    let mut points = 0;
    for k in 0..10 {
        let deg = r.gen_range(0..=20);
        let p: Vec<ExactComplex> = (0..=deg).map(|_| small_scalar(&mut r)).collect();
        let set = if k % 2 == 0 { disk.clone() } else { "segment:-1,1".parse().unwrap() };
        let rep = bernstein_check(&p, &set, &random_points(&set, 100, 3.0, k, bits), bits);
        violations += rep.violations.len();
        points += rep.points;
    }
    let exp = growth_experiment(&quadratic_family(2, 12), 12, &disk, &"disk:0,2".parse().unwrap(), bits).unwrap();
    let ok = extremal_ok && violations == 0 && exp.violations() == 0;
    (
        ok,
        format!(
            "z^n equality: {extremal_ok}; {points} random points, {violations} violations; growth transfer to m = 12: {} violations",
            exp.violations()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("jet-algebra laws", jet_laws),
        ("centralizer oracles", centralizer_oracles),
        ("shift-difference operator", difference_operator),
        ("linearizer round trip", round_trip),
        ("obstruction fixture", obstruction),
        ("coset invariant", coset),
        ("parameter degree bound", degree_bound),
        ("averaging", averaging),
        ("finite-order test", finite_order),
        ("small divisors", small_divisors),
        ("Bruno classifier", bruno),
        ("Bernstein and growth transfer", bernstein),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = check();
        println!("criterion {:>2} {}: {name}: {detail} [{:.1}s]", k + 1, if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
        if !ok {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
