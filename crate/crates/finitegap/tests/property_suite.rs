//! Randomized invariants of the algebra layer plus a seeded sweep of the
//! wave-function solvers.

use num_complex::Complex64;
use proptest::prelude::*;

use finitegap::curve::{sigma_image, tau_image, ProjPoint};
use finitegap::exponential::ExponentialCore;
use finitegap::poly::Poly;
use finitegap::rational::{RationalDifferential, RationalFunction};
use finitegap::sampling::InstanceSampler;
use finitegap::tolerances::Tolerances;
use finitegap::{solve_dirac, solve_schrodinger};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, lo..hi).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Distinct pole locations, pairwise separated and away from the origin.
fn separated_poles(max_n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex_in(-2.0, 2.0), 1..=max_n).prop_filter(
        "poles must be separated and away from 0",
        |ps| {
            ps.iter().all(|p| p.norm() > 0.3)
                && ps
                    .iter()
                    .enumerate()
                    .all(|(i, p)| ps[..i].iter().all(|q| (p - q).norm() > 0.3))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_residue_of_rational_differentials_vanishes(
        poles in separated_poles(3),
        mults in prop::collection::vec(1usize..=3, 3),
        coeffs in prop::collection::vec(complex_in(-1.5, 1.5), 1..=6),
    ) {
        let den: Vec<(Complex64, usize)> = poles
            .iter()
            .zip(&mults)
            .map(|(&p, &m)| (p, m))
            .collect();
        let f = RationalFunction::new(Poly::new(coeffs), den.clone());
        let diff = RationalDifferential::new(f.clone());
        let mut scale = diff.residue_at_infinity().norm();
        for &(p, _) in &den {
            scale += f.residue_at(p).norm();
        }
        let total = diff.total_residue();
        prop_assert!(
            total.norm() <= 1e-9 * scale.max(1.0),
            "total residue {total} at scale {scale}"
        );
    }

    #[test]
    fn taylor_jets_reconstruct_nearby_values(
        poles in separated_poles(2),
        coeffs in prop::collection::vec(complex_in(-1.5, 1.5), 1..=4),
        center in complex_in(-2.0, 2.0),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        prop_assume!(poles.iter().all(|p| (center - p).norm() > 0.4));
        let den: Vec<(Complex64, usize)> = poles.iter().map(|&p| (p, 2)).collect();
        let f = RationalFunction::new(Poly::new(coeffs), den);
        let jet = f.taylor_jet(center, 8).unwrap();
        let mu = Complex64::from_polar(0.01, angle);
        let mut acc = c(0.0, 0.0);
        let mut mu_pow = c(1.0, 0.0);
        for &jk in &jet {
            acc += jk * mu_pow;
            mu_pow *= mu;
        }
        let direct = f.eval(center + mu).unwrap();
        prop_assert!(
            (acc - direct).norm() <= 1e-8 * direct.norm().max(1.0),
            "jet sum {acc} vs direct {direct}"
        );
    }

    #[test]
    fn polynomial_division_reconstructs(
        pc in prop::collection::vec(complex_in(-2.0, 2.0), 1..=7),
        dc in prop::collection::vec(complex_in(-2.0, 2.0), 2..=4),
    ) {
        prop_assume!(dc.last().unwrap().norm() > 0.2);
        let p = Poly::new(pc);
        let d = Poly::new(dc);
        prop_assume!(d.degree().is_some());
        let (q, r) = p.divmod(&d);
        if let Some(rd) = r.degree() {
            prop_assert!(rd < d.degree().unwrap());
        }
        let back = q.mul(&d).add(&r);
        let scale: f64 = p.coeffs().iter().map(|x| x.norm()).fold(1.0, f64::max);
        for k in 0..back.coeffs().len().max(p.coeffs().len()) {
            prop_assert!((back.coeff(k) - p.coeff(k)).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn root_finding_recovers_separated_roots(roots in separated_poles(4)) {
        let den: Vec<(Complex64, usize)> = roots.iter().map(|&r| (r, 1)).collect();
        let p = Poly::from_roots(&den);
        let mut found = p.roots();
        prop_assert_eq!(found.len(), roots.len());
        let mut expected = roots.clone();
        // greedy matching: both sets are pairwise separated by > 0.3
        for f in &mut found {
            let (i, _) = expected
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - *f).norm().partial_cmp(&(b.1 - *f).norm()).unwrap())
                .unwrap();
            prop_assert!((expected[i] - *f).norm() < 1e-7);
            expected.remove(i);
            *f = c(1e9, 1e9); // consumed
        }
    }

    #[test]
    fn sigma_pairing_of_exponentials_is_unity(
        alpha in complex_in(-1.2, 1.2),
        beta in complex_in(-1.2, 1.2),
        x in -1.0..1.0f64,
        y in -1.0..1.0f64,
        lambda in complex_in(-2.0, 2.0),
    ) {
        prop_assume!(lambda.norm() > 0.3);
        let core = ExponentialCore::new(alpha, beta, x, y);
        let product = core.eval(lambda).unwrap() * core.eval(-lambda).unwrap();
        prop_assert!((product - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tau_pairing_of_exponentials_is_unity(
        alpha in complex_in(-1.2, 1.2),
        t in 0.4..1.8f64,
        x in -1.0..1.0f64,
        y in -1.0..1.0f64,
        lambda in complex_in(-2.0, 2.0),
    ) {
        prop_assume!(lambda.norm() > 0.3 && alpha.norm() > 0.1);
        // the reality coupling ties β to α and the circle radius √t
        let beta = -alpha.conj() * t;
        let core = ExponentialCore::new(alpha, beta, x, y);
        let image = t / lambda.conj();
        let product = core.eval(lambda).unwrap() * core.eval(image).unwrap().conj();
        prop_assert!(
            (product - c(1.0, 0.0)).norm() < 1e-12,
            "pairing product {product}"
        );
    }

    #[test]
    fn involutions_are_self_inverse(p in complex_in(-2.0, 2.0), t in 0.3..2.0f64) {
        prop_assume!(p.norm() > 1e-6);
        let q = ProjPoint::Finite(p);
        prop_assert_eq!(sigma_image(sigma_image(q)), q);
        match tau_image(t, tau_image(t, q)) {
            ProjPoint::Finite(back) => prop_assert!((back - p).norm() < 1e-12),
            ProjPoint::Infinity => prop_assert!(false, "finite point escaped to infinity"),
        }
    }
}

#[test]
fn genus_adds_over_classes_for_sampled_specs() {
    let mut sampler = InstanceSampler::new(2024);
    for _ in 0..20 {
        let (spec, ..) = sampler.spec_and_divisors();
        let total: usize = spec.classes.iter().map(|cl| cl.delta()).sum();
        assert_eq!(spec.arithmetic_genus(), total);
    }
}

#[test]
fn seeded_instances_solve_with_small_residuals() {
    let tol = Tolerances::default();
    let mut sampler = InstanceSampler::new(123);
    for case in 0..10 {
        let (spec, div_s, div_d) = sampler.spec_and_divisors();
        let (x, y) = (0.3, -0.45);

        let schrod = solve_schrodinger(&spec, &div_s, x, y, &tol)
            .unwrap_or_else(|e| panic!("case {case}: schrodinger solve failed: {e}"));
        let descent = schrod.descent_residual().unwrap();
        assert!(descent < 1e-10, "case {case}: descent residual {descent:e}");

        let dirac = solve_dirac(&spec, &div_d, x, y, &tol)
            .unwrap_or_else(|e| panic!("case {case}: dirac solve failed: {e}"));
        let descent2 = dirac.descent_residual().unwrap();
        assert!(descent2 < 1e-10, "case {case}: dirac descent residual {descent2:e}");

        let mut avoid: Vec<Complex64> = vec![c(0.0, 0.0)];
        avoid.extend(spec.support().iter().map(|&(w, _)| w));
        avoid.extend(div_s.entries().iter().map(|&(p, _)| p));
        avoid.extend(div_d.entries().iter().map(|&(p, _)| p));
        for lambda in sampler.lambda_samples(5, &avoid, 0.15) {
            let r1 = schrod.operator_residual(lambda).unwrap();
            assert!(r1 < 1e-8, "case {case}: operator residual {r1:e} at {lambda}");
            let r2 = dirac.equation_residual(lambda).unwrap();
            assert!(r2 < 1e-8, "case {case}: dirac residual {r2:e} at {lambda}");
        }
    }
}
