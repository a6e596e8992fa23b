use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::curve::{CurveSpec, PoleDivisor};
use crate::error::{FgError, FgResult};
use crate::exponential::ExponentialCore;
use crate::gluing::{descent_matrix, descent_violation};
use crate::grid::Grid;
use crate::linalg::solve_square;
use crate::poly::Poly;
use crate::rational::RationalFunction;
use crate::tolerances::Tolerances;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn basis_element(power: i64, q_roots: &[(Complex64, usize)]) -> RationalFunction {
    if power >= 0 {
        RationalFunction::monomial_over(power as usize, q_roots)
    } else {
        let mut roots = q_roots.to_vec();
        roots.push((c(0.0, 0.0), (-power) as usize));
        RationalFunction::monomial_over(0, &roots)
    }
}

fn descent_columns(
    core: &ExponentialCore,
    spec: &CurveSpec,
    q_roots: &[(Complex64, usize)],
    powers: &[i64],
) -> FgResult<DMatrix<Complex64>> {
    let basis: Vec<RationalFunction> = powers
        .iter()
        .map(|&p| basis_element(p, q_roots))
        .collect();
    descent_matrix(core, &spec.classes, &basis)
}

/// Spinor wave data of the first-order system at one plane point:
/// ψ₁ = E·P₁/q, ψ₂ = E·P₂/q over a common divisor q of degree g+1, with
///   P₁ monic of degree g+1, P₁(0) = 0   (coefficients a₁ … a_g),
///   P₂ of degree ≤ g,      P₂(0) = q(0) (coefficients b₁ … b_g).
/// Both coefficient systems share the same gluing matrix.
#[derive(Debug, Clone)]
pub struct DiracSolution {
    pub spec: CurveSpec,
    pub divisor: PoleDivisor,
    pub x: f64,
    pub y: f64,
    /// a₁ … a_g (empty for g = 0, where P₁ = λ).
    pub coeffs_a: Vec<Complex64>,
    /// b₁ … b_g (empty for g = 0, where P₂ = q(0)).
    pub coeffs_b: Vec<Complex64>,
    pub grad_z_a: Vec<Complex64>,
    pub grad_zbar_a: Vec<Complex64>,
    pub grad_z_b: Vec<Complex64>,
    pub grad_zbar_b: Vec<Complex64>,
    pub condition: f64,
}

/// Pointwise coefficients of the reconstructed system
/// ∂ψ₂ + Uψ₁ = 0, −∂̄ψ₁ + Vψ₂ = 0, plus the end diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DiracSample {
    pub x: f64,
    pub y: f64,
    pub u_coeff: Complex64,
    pub v_coeff: Complex64,
    pub xi1_plus: Complex64,
    pub xi2_minus: Complex64,
}

pub fn solve_dirac(
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    x: f64,
    y: f64,
    tol: &Tolerances,
) -> FgResult<DiracSolution> {
    let g = spec.arithmetic_genus();
    if divisor.degree() != g + 1 {
        return Err(FgError::InvalidRequest {
            reason: format!(
                "first-order construction needs deg(divisor) = p_a + 1 = {}, got {}",
                g + 1,
                divisor.degree()
            ),
        });
    }
    let q_roots = divisor.entries().to_vec();
    let core = ExponentialCore::new(spec.alpha, spec.beta, x, y);

    if g == 0 {
        return Ok(DiracSolution {
            spec: spec.clone(),
            divisor: divisor.clone(),
            x,
            y,
            coeffs_a: Vec::new(),
            coeffs_b: Vec::new(),
            grad_z_a: Vec::new(),
            grad_zbar_a: Vec::new(),
            grad_z_b: Vec::new(),
            grad_zbar_b: Vec::new(),
            condition: 1.0,
        });
    }

    let q0 = Poly::from_roots(&q_roots).eval(c(0.0, 0.0));

    // Shared columns λ^m/q for m = 0..g+1. The unknown block is m = 1..g;
    // the two right-hand sides come from the pinned ends of each numerator.
    let all_powers: Vec<i64> = (0..=g as i64 + 1).collect();
    let cols = descent_columns(&core, spec, &q_roots, &all_powers)?;
    debug_assert_eq!(cols.nrows(), g);
    let m = cols.columns(1, g).into_owned();
    let rhs1 = -cols.column(g + 1).into_owned();
    let rhs2 = -cols.column(0).into_owned() * q0;

    let (a, condition) = solve_square(&m, &rhs1, tol.condition_cutoff)?;
    let (b, _) = solve_square(&m, &rhs2, tol.condition_cutoff)?;

    // Derivative systems: z multiplies a section λ^m/q by αλ, z̄ by β/λ.
    // Columns below are indexed by the *derived* powers: dz covers m+1 for
    // m = 0..g+1, dzb covers m−1 for the same sources.
    let dz_powers: Vec<i64> = (1..=g as i64 + 2).collect();
    let dz_cols = descent_columns(&core, spec, &q_roots, &dz_powers)? * spec.alpha;
    let dzb_powers: Vec<i64> = (-1..=g as i64).collect();
    let dzb_cols = descent_columns(&core, spec, &q_roots, &dzb_powers)? * spec.beta;

    let dm_z = dz_cols.columns(1, g).into_owned();
    let dm_zb = dzb_cols.columns(1, g).into_owned();
    let drhs1_z = -dz_cols.column(g + 1).into_owned();
    let drhs1_zb = -dzb_cols.column(g + 1).into_owned();
    let drhs2_z = -dz_cols.column(0).into_owned() * q0;
    let drhs2_zb = -dzb_cols.column(0).into_owned() * q0;

    let rhs = &drhs1_z - &dm_z * &a;
    let (grad_z_a, _) = solve_square(&m, &rhs, tol.condition_cutoff)?;
    let rhs = &drhs1_zb - &dm_zb * &a;
    let (grad_zbar_a, _) = solve_square(&m, &rhs, tol.condition_cutoff)?;
    let rhs = &drhs2_z - &dm_z * &b;
    let (grad_z_b, _) = solve_square(&m, &rhs, tol.condition_cutoff)?;
    let rhs = &drhs2_zb - &dm_zb * &b;
    let (grad_zbar_b, _) = solve_square(&m, &rhs, tol.condition_cutoff)?;

    Ok(DiracSolution {
        spec: spec.clone(),
        divisor: divisor.clone(),
        x,
        y,
        coeffs_a: a.iter().copied().collect(),
        coeffs_b: b.iter().copied().collect(),
        grad_z_a: grad_z_a.iter().copied().collect(),
        grad_zbar_a: grad_zbar_a.iter().copied().collect(),
        grad_z_b: grad_z_b.iter().copied().collect(),
        grad_zbar_b: grad_zbar_b.iter().copied().collect(),
        condition,
    })
}

impl DiracSolution {
    fn genus(&self) -> usize {
        self.spec.arithmetic_genus()
    }

    fn q_roots(&self) -> Vec<(Complex64, usize)> {
        self.divisor.entries().to_vec()
    }

    pub fn q0(&self) -> Complex64 {
        Poly::from_roots(&self.q_roots()).eval(c(0.0, 0.0))
    }

    /// P₁(λ) = λ^{g+1} + a_gλ^g + … + a₁λ (no constant term).
    pub fn numerator_one(&self) -> Poly {
        let g = self.genus();
        let mut coeffs = vec![c(0.0, 0.0); g + 2];
        for (k, &ak) in self.coeffs_a.iter().enumerate() {
            coeffs[k + 1] = ak;
        }
        coeffs[g + 1] = c(1.0, 0.0);
        Poly::new(coeffs)
    }

    /// P₂(λ) = q(0) + b₁λ + … + b_gλ^g.
    pub fn numerator_two(&self) -> Poly {
        let g = self.genus();
        let mut coeffs = vec![c(0.0, 0.0); g + 1];
        coeffs[0] = self.q0();
        for (k, &bk) in self.coeffs_b.iter().enumerate() {
            coeffs[k + 1] = bk;
        }
        Poly::new(coeffs)
    }

    pub fn prefactor_one(&self) -> RationalFunction {
        RationalFunction::new(self.numerator_one(), self.q_roots())
    }

    pub fn prefactor_two(&self) -> RationalFunction {
        RationalFunction::new(self.numerator_two(), self.q_roots())
    }

    pub fn core(&self) -> ExponentialCore {
        ExponentialCore::new(self.spec.alpha, self.spec.beta, self.x, self.y)
    }

    pub fn psi1(&self, lambda: Complex64) -> FgResult<Complex64> {
        Ok(self.core().eval(lambda)? * self.prefactor_one().eval(lambda)?)
    }

    pub fn psi2(&self, lambda: Complex64) -> FgResult<Complex64> {
        Ok(self.core().eval(lambda)? * self.prefactor_two().eval(lambda)?)
    }

    /// U = −α·(λ^g coefficient of P₂); for g = 0 that coefficient is q(0).
    pub fn u_coeff(&self) -> Complex64 {
        let g = self.genus();
        let top = if g == 0 { self.q0() } else { self.coeffs_b[g - 1] };
        -self.spec.alpha * top
    }

    /// V = β·R₁'(0) = β·a₁/q(0); for g = 0 the λ-coefficient of P₁ is 1.
    pub fn v_coeff(&self) -> Complex64 {
        let a1 = if self.genus() == 0 {
            c(1.0, 0.0)
        } else {
            self.coeffs_a[0]
        };
        self.spec.beta * a1 / self.q0()
    }

    /// Subleading correction of ψ₁ at the plus end:
    /// ξ₁⁺ = αβz̄ + α(a_g + Σ nⱼpⱼ).
    pub fn xi1_plus(&self) -> Complex64 {
        let g = self.genus();
        let ag = if g == 0 {
            c(0.0, 0.0)
        } else {
            self.coeffs_a[g - 1]
        };
        let pole_sum: Complex64 = self
            .divisor
            .entries()
            .iter()
            .map(|&(p, n)| p * c(n as f64, 0.0))
            .sum();
        self.spec.alpha * self.spec.beta * self.core().zbar() + self.spec.alpha * (ag + pole_sum)
    }

    /// Subleading correction of ψ₂ at the minus end:
    /// ξ₂⁻ = αβz + β·(R₂'(0)/R₂(0)·q-normalized) = αβz + β(b₁/q(0) − q'(0)/q(0)).
    pub fn xi2_minus(&self) -> Complex64 {
        let qp = Poly::from_roots(&self.q_roots())
            .derivative()
            .eval(c(0.0, 0.0));
        let b1 = if self.genus() == 0 {
            c(0.0, 0.0)
        } else {
            self.coeffs_b[0]
        };
        let q0 = self.q0();
        self.spec.alpha * self.spec.beta * self.z()
            + self.spec.beta * (b1 / q0 - qp / q0)
    }

    fn z(&self) -> Complex64 {
        c(self.x, self.y)
    }

    pub fn sample(&self) -> DiracSample {
        DiracSample {
            x: self.x,
            y: self.y,
            u_coeff: self.u_coeff(),
            v_coeff: self.v_coeff(),
            xi1_plus: self.xi1_plus(),
            xi2_minus: self.xi2_minus(),
        }
    }

    fn min_distance_to_singular_set(&self, lambda: Complex64) -> f64 {
        let mut d = lambda.norm();
        for &(p, _) in self.divisor.entries() {
            d = d.min((lambda - p).norm());
        }
        d
    }

    /// Relative residual of both first-order equations at one spectral point.
    pub fn equation_residual(&self, lambda: Complex64) -> FgResult<f64> {
        let dist = self.min_distance_to_singular_set(lambda);
        if dist < 1e-3 {
            return Err(FgError::SampleTooClose {
                lambda,
                distance: dist,
            });
        }
        let alpha = self.spec.alpha;
        let beta = self.spec.beta;
        let e = self.core().eval(lambda)?;
        let r1 = self.prefactor_one().eval(lambda)?;
        let r2 = self.prefactor_two().eval(lambda)?;
        let g = self.genus();
        let grad_rational = |grad: &[Complex64]| -> RationalFunction {
            let mut coeffs = vec![c(0.0, 0.0); g + 1];
            for (k, &v) in grad.iter().enumerate() {
                coeffs[k + 1] = v;
            }
            RationalFunction::new(Poly::new(coeffs), self.q_roots())
        };
        let (r1_zb, r2_z) = if g == 0 {
            (c(0.0, 0.0), c(0.0, 0.0))
        } else {
            (
                grad_rational(&self.grad_zbar_a).eval(lambda)?,
                grad_rational(&self.grad_z_b).eval(lambda)?,
            )
        };
        let psi1 = e * r1;
        let psi2 = e * r2;
        // ∂ψ₂ + Uψ₁ and −∂̄ψ₁ + Vψ₂
        let dz_psi2 = e * (alpha * lambda * r2 + r2_z);
        let dzb_psi1 = e * (beta / lambda * r1 + r1_zb);
        let u = self.u_coeff();
        let v = self.v_coeff();
        let eq1 = dz_psi2 + u * psi1;
        let eq2 = -dzb_psi1 + v * psi2;
        let scale1 = dz_psi2.norm().max((u * psi1).norm()).max(1e-300);
        let scale2 = dzb_psi1.norm().max((v * psi2).norm()).max(1e-300);
        Ok((eq1.norm() / scale1).max(eq2.norm() / scale2))
    }

    /// Worst gluing violation over both spinor components.
    pub fn descent_residual(&self) -> FgResult<f64> {
        let core = self.core();
        let d1 = descent_violation(&core, &self.spec.classes, &self.prefactor_one())?;
        let d2 = descent_violation(&core, &self.spec.classes, &self.prefactor_two())?;
        Ok(d1.max(d2))
    }
}

pub fn dirac_field(
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    grid: &Grid,
    tol: &Tolerances,
) -> Vec<FgResult<DiracSample>> {
    grid.nodes()
        .par_iter()
        .map(|&(x, y)| Ok(solve_dirac(spec, divisor, x, y, tol)?.sample()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::GluingClass;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// α = 1, β = −c²: ψ₁ = λ/(λ−c)·E, ψ₂ = c/(c−λ)·E, U = V = c.
    #[test]
    fn constant_family_reproduces_both_potentials() {
        for cc in [0.5, 1.0, 2.0] {
            let spec = CurveSpec::plain(z(1.0, 0.0), z(-cc * cc, 0.0), vec![]);
            let divisor = PoleDivisor::simple(&[z(cc, 0.0)]).unwrap();
            let sol = solve_dirac(&spec, &divisor, 0.3, -0.7, &Tolerances::default()).unwrap();
            assert!((sol.u_coeff() - z(cc, 0.0)).norm() < 1e-14);
            assert!((sol.v_coeff() - z(cc, 0.0)).norm() < 1e-14);
            let lam = z(0.9, 1.1);
            let e = sol.core().eval(lam).unwrap();
            let want1 = lam / (lam - cc) * e;
            let want2 = cc / (cc - lam) * e;
            assert!((sol.psi1(lam).unwrap() - want1).norm() < 1e-13 * want1.norm());
            assert!((sol.psi2(lam).unwrap() - want2).norm() < 1e-13 * want2.norm());
        }
    }

    fn tau_fixture() -> (CurveSpec, PoleDivisor) {
        let t = 1.0;
        let w = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        let class = GluingClass::simple(&[w, w.conj()]).unwrap();
        let alpha = z(1.0, 0.0);
        let spec = CurveSpec {
            alpha,
            beta: -alpha.conj() * t,
            classes: vec![class],
            sigma: false,
            tau: Some(t),
        };
        let p = z(1.3, 0.4);
        let divisor = PoleDivisor::simple(&[p, z(1.0, 0.0) / p.conj()]).unwrap();
        (spec, divisor)
    }

    // Frozen from an independent 30-digit evaluation of the 1×1 system
    // d = G(w₁,1) − G(w₂,1), a₁ = −(G(w₁,2) − G(w₂,2))/d,
    // b₁ = −q(0)(G(w₁,0) − G(w₂,0))/d with G(λ,m) = E·λ^m/q.
    #[test]
    fn glued_pair_on_unit_circle_matches_direct_solve() {
        let (spec, divisor) = tau_fixture();
        let sol = solve_dirac(&spec, &divisor, 0.37, -0.59, &Tolerances::default()).unwrap();
        let want_a1 = z(-1.0779588353802841, -0.7348010322297062);
        let want_b1 = z(-0.8597340854996751, 0.3040904971930029);
        assert!((sol.coeffs_a[0] - want_a1).norm() < 1e-12, "a1 = {}", sol.coeffs_a[0]);
        assert!((sol.coeffs_b[0] - want_b1).norm() < 1e-12, "b1 = {}", sol.coeffs_b[0]);
        let want_u = z(0.8597340854996751, -0.3040904971930029);
        let want_v = z(1.3045784279193131, 0.0017126435221379);
        assert!((sol.u_coeff() - want_u).norm() < 1e-12);
        assert!((sol.v_coeff() - want_v).norm() < 1e-12);
    }

    #[test]
    fn equations_hold_across_spectrum() {
        let (spec, divisor) = tau_fixture();
        let sol = solve_dirac(&spec, &divisor, 0.37, -0.59, &Tolerances::default()).unwrap();
        for lam in [z(0.9, 0.2), z(-0.6, 1.4), z(2.3, -0.5), z(0.2, -0.1)] {
            let res = sol.equation_residual(lam).unwrap();
            assert!(res < 1e-9, "residual {res} at {lam}");
        }
        assert!(sol.descent_residual().unwrap() < 1e-12);
    }

    #[test]
    fn coefficient_gradients_match_finite_differences() {
        let (spec, divisor) = tau_fixture();
        let tol = Tolerances::default();
        let h = 1e-5;
        let sol = solve_dirac(&spec, &divisor, 0.37, -0.59, &tol).unwrap();
        let xp = solve_dirac(&spec, &divisor, 0.37 + h, -0.59, &tol).unwrap();
        let xm = solve_dirac(&spec, &divisor, 0.37 - h, -0.59, &tol).unwrap();
        let yp = solve_dirac(&spec, &divisor, 0.37, -0.59 + h, &tol).unwrap();
        let ym = solve_dirac(&spec, &divisor, 0.37, -0.59 - h, &tol).unwrap();
        let fd = |vp: Complex64, vm: Complex64| (vp - vm) / c(2.0 * h, 0.0);
        let ax = fd(xp.coeffs_a[0], xm.coeffs_a[0]);
        let ay = fd(yp.coeffs_a[0], ym.coeffs_a[0]);
        let dz_fd = (ax - c(0.0, 1.0) * ay) / c(2.0, 0.0);
        let dzb_fd = (ax + c(0.0, 1.0) * ay) / c(2.0, 0.0);
        assert!((sol.grad_z_a[0] - dz_fd).norm() < 1e-6);
        assert!((sol.grad_zbar_a[0] - dzb_fd).norm() < 1e-6);
        let bx = fd(xp.coeffs_b[0], xm.coeffs_b[0]);
        let by = fd(yp.coeffs_b[0], ym.coeffs_b[0]);
        let dzb_fd_b = (bx + c(0.0, 1.0) * by) / c(2.0, 0.0);
        assert!((sol.grad_zbar_b[0] - dzb_fd_b).norm() < 1e-6);
    }

    #[test]
    fn wrong_divisor_degree_is_an_invalid_request() {
        let (spec, _) = tau_fixture();
        let short = PoleDivisor::simple(&[z(1.3, 0.4)]).unwrap();
        assert!(matches!(
            solve_dirac(&spec, &short, 0.0, 0.0, &Tolerances::default()),
            Err(FgError::InvalidRequest { .. })
        ));
    }
}
