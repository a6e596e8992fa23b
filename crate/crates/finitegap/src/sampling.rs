//! Seeded random generation of admissible configurations, used by the
//! integration suites to sweep many instances reproducibly.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve::{CurveSpec, GluingClass, PoleDivisor, ProjPoint};
use crate::rr::RrDivisor;

const BOX_HALF_WIDTH: f64 = 2.0;
const MIN_SEPARATION: f64 = 0.1;
const MIN_RADIUS: f64 = 0.25;
const MAX_ATTEMPTS: usize = 100_000;

pub struct InstanceSampler {
    rng: ChaCha8Rng,
}

impl InstanceSampler {
    pub fn new(seed: u64) -> Self {
        InstanceSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn box_point(&mut self) -> Complex64 {
        Complex64::new(
            self.rng.gen_range(-BOX_HALF_WIDTH..BOX_HALF_WIDTH),
            self.rng.gen_range(-BOX_HALF_WIDTH..BOX_HALF_WIDTH),
        )
    }

    /// Point in the sampling box at least `min_dist` away from everything in
    /// `avoid` (pass the origin explicitly if it must be avoided).
    fn separated_point(&mut self, avoid: &[Complex64], min_dist: f64) -> Complex64 {
        for _ in 0..MAX_ATTEMPTS {
            let z = self.box_point();
            if avoid.iter().all(|&a| (z - a).norm() >= min_dist) {
                return z;
            }
        }
        panic!("could not place a point {min_dist} away from {} others", avoid.len());
    }

    /// Nonzero coefficient with magnitude in [0.6, 1.4] and uniform phase.
    fn coefficient(&mut self) -> Complex64 {
        let mag = self.rng.gen_range(0.6..1.4);
        let phase = self.rng.gen_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(mag, phase)
    }

    /// Partition of the class multiplicity total into member multiplicities
    /// (each ≤ 3, lone members need ≥ 2 so the class actually glues).
    fn member_multiplicities(&mut self, total: usize) -> Vec<usize> {
        let options: &[&[usize]] = match total {
            2 => &[&[1, 1], &[2]],
            3 => &[&[1, 1, 1], &[2, 1], &[3]],
            4 => &[&[1, 1, 1, 1], &[2, 1, 1], &[2, 2], &[3, 1]],
            _ => panic!("unsupported class multiplicity total {total}"),
        };
        options[self.rng.gen_range(0..options.len())].to_vec()
    }

    fn classes(&mut self) -> Vec<GluingClass> {
        let n_classes = self.rng.gen_range(1..=3usize);
        let mut budget = self.rng.gen_range(n_classes..=4usize.max(n_classes));
        let mut placed: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        let mut classes = Vec::new();
        for remaining in (1..=n_classes).rev() {
            let delta_max = (budget - (remaining - 1)).min(3);
            let delta = self.rng.gen_range(1..=delta_max);
            budget -= delta;
            let mults = self.member_multiplicities(delta + 1);
            let members: Vec<(Complex64, usize)> = mults
                .into_iter()
                .map(|m| {
                    let z = loop {
                        let z = self.separated_point(&placed, MIN_SEPARATION);
                        if z.norm() >= MIN_RADIUS {
                            break z;
                        }
                    };
                    placed.push(z);
                    (z, m)
                })
                .collect();
            classes.push(GluingClass::new(members).expect("sampled class is admissible"));
        }
        classes
    }

    /// A random spectral configuration together with pole divisors of the two
    /// degrees the wave-function constructions need (p_a and p_a + 1).
    pub fn spec_and_divisors(&mut self) -> (CurveSpec, PoleDivisor, PoleDivisor) {
        let classes = self.classes();
        let spec = CurveSpec::plain(self.coefficient(), self.coefficient(), classes);
        let genus = spec.arithmetic_genus();
        let schrodinger = self.pole_divisor(&spec, genus);
        let dirac = self.pole_divisor(&spec, genus + 1);
        (spec, schrodinger, dirac)
    }

    fn pole_divisor(&mut self, spec: &CurveSpec, degree: usize) -> PoleDivisor {
        let mut avoid: Vec<Complex64> = vec![Complex64::new(0.0, 0.0)];
        avoid.extend(spec.support().iter().map(|&(w, _)| w));
        let mut points = Vec::new();
        for _ in 0..degree {
            let z = loop {
                let z = self.separated_point(&avoid, MIN_SEPARATION);
                if z.norm() >= MIN_RADIUS {
                    break z;
                }
            };
            avoid.push(z);
            points.push(z);
        }
        PoleDivisor::simple(&points).expect("sampled divisor is admissible")
    }

    /// A random configuration plus a divisor for the dimension-count reports:
    /// total degree ≤ 6, entry multiplicities ≤ 2, the point at infinity
    /// allowed (and the origin too — only the gluing support is off limits).
    pub fn rr_instance(&mut self) -> (CurveSpec, RrDivisor) {
        let classes = self.classes();
        let spec = CurveSpec::plain(self.coefficient(), self.coefficient(), classes);
        let mut avoid: Vec<Complex64> = spec.support().iter().map(|&(w, _)| w).collect();
        let target: usize = self.rng.gen_range(0..=6);
        let mut divisor: RrDivisor = Vec::new();
        let mut degree = 0;
        let mut infinity_used = false;
        while degree < target {
            let mult = 1 + usize::from(self.rng.gen_bool(0.3) && degree + 2 <= target);
            if !infinity_used && self.rng.gen_bool(0.2) {
                divisor.push((ProjPoint::Infinity, mult));
                infinity_used = true;
            } else {
                let z = self.separated_point(&avoid, MIN_SEPARATION);
                avoid.push(z);
                divisor.push((ProjPoint::Finite(z), mult));
            }
            degree += mult;
        }
        (spec, divisor)
    }

    /// Evaluation points for residual sweeps, kept away from the listed
    /// special points.
    pub fn lambda_samples(
        &mut self,
        n: usize,
        avoid: &[Complex64],
        min_dist: f64,
    ) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.separated_point(avoid, min_dist));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::validate;
    use crate::rr::divisor_degree;
    use crate::tolerances::Tolerances;

    #[test]
    fn sampled_specs_pass_validation() {
        let tol = Tolerances::default();
        let mut sampler = InstanceSampler::new(7);
        for _ in 0..20 {
            let (spec, div_s, div_d) = sampler.spec_and_divisors();
            let genus = spec.arithmetic_genus();
            assert!((1..=4).contains(&genus));
            assert_eq!(div_s.degree(), genus);
            assert_eq!(div_d.degree(), genus + 1);
            assert!(validate(&spec, Some(&div_s), &tol).violations.is_empty());
            assert!(validate(&spec, Some(&div_d), &tol).violations.is_empty());
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let (a, ..) = InstanceSampler::new(42).spec_and_divisors();
        let (b, ..) = InstanceSampler::new(42).spec_and_divisors();
        assert_eq!(a.alpha, b.alpha);
        assert_eq!(a.classes.len(), b.classes.len());
        for (ca, cb) in a.classes.iter().zip(&b.classes) {
            assert_eq!(ca.members(), cb.members());
        }
    }

    #[test]
    fn rr_instances_stay_within_budget() {
        let mut sampler = InstanceSampler::new(11);
        for _ in 0..30 {
            let (spec, divisor) = sampler.rr_instance();
            assert!(divisor_degree(&divisor) <= 6);
            assert!(spec.arithmetic_genus() <= 4);
            for &(p, m) in &divisor {
                assert!(m <= 2);
                if let ProjPoint::Finite(z) = p {
                    for &(w, _) in &spec.support() {
                        assert!((z - w).norm() >= MIN_SEPARATION);
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_samples_respect_exclusions() {
        let mut sampler = InstanceSampler::new(3);
        let avoid = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)];
        let samples = sampler.lambda_samples(50, &avoid, 0.2);
        assert_eq!(samples.len(), 50);
        for z in samples {
            for &a in &avoid {
                assert!((z - a).norm() >= 0.2);
            }
        }
    }
}
