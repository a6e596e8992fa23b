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

/// λ^power / q(λ) as a rational function; power −1 puts an extra simple
/// factor λ into the denominator (q never vanishes at 0).
fn basis_element(power: i64, q_roots: &[(Complex64, usize)]) -> RationalFunction {
    if power >= 0 {
        RationalFunction::monomial_over(power as usize, q_roots)
    } else {
        assert_eq!(power, -1);
        let mut roots = q_roots.to_vec();
        roots.push((c(0.0, 0.0), 1));
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

/// Wave-function data of the second-order operator at one plane point:
/// ψ = E·P/q with P monic of degree g, plus the z/z̄ gradients of the
/// numerator coefficients (obtained analytically from the same jet systems).
#[derive(Debug, Clone)]
pub struct SchrodingerSolution {
    pub spec: CurveSpec,
    pub divisor: PoleDivisor,
    pub x: f64,
    pub y: f64,
    /// a₀ … a_{g−1}; the λ^g coefficient is 1.
    pub coeffs: Vec<Complex64>,
    pub grad_z: Vec<Complex64>,
    pub grad_zbar: Vec<Complex64>,
    pub grad_zzbar: Vec<Complex64>,
    pub condition: f64,
}

/// Pointwise field values of the reconstructed operator
/// ∂∂̄ + A·∂̄ + u (plus the diagnostics ξ and c).
#[derive(Debug, Clone, Copy)]
pub struct PotentialSample {
    pub x: f64,
    pub y: f64,
    pub u: Complex64,
    pub big_a: Complex64,
    pub xi: Complex64,
    pub c_value: Complex64,
}

pub fn solve_schrodinger(
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    x: f64,
    y: f64,
    tol: &Tolerances,
) -> FgResult<SchrodingerSolution> {
    let g = spec.arithmetic_genus();
    if divisor.degree() != g {
        return Err(FgError::InvalidRequest {
            reason: format!(
                "second-order construction needs deg(divisor) = p_a = {g}, got {}",
                divisor.degree()
            ),
        });
    }
    let q_roots = divisor.entries().to_vec();
    let core = ExponentialCore::new(spec.alpha, spec.beta, x, y);

    if g == 0 {
        return Ok(SchrodingerSolution {
            spec: spec.clone(),
            divisor: divisor.clone(),
            x,
            y,
            coeffs: Vec::new(),
            grad_z: Vec::new(),
            grad_zbar: Vec::new(),
            grad_zzbar: Vec::new(),
            condition: 1.0,
        });
    }

    // Columns for λ^m/q, m = 0..g, conditions stacked over the classes.
    let all_powers: Vec<i64> = (0..=g as i64).collect();
    let cols = descent_columns(&core, spec, &q_roots, &all_powers)?;
    debug_assert_eq!(cols.nrows(), g);
    let m = cols.columns(0, g).into_owned();
    let b = -cols.column(g).into_owned();
    let (a, condition) = solve_square(&m, &b, tol.condition_cutoff)?;

    // z-derivative multiplies every section by αλ, z̄-derivative by β/λ, so
    // the derivative systems reuse shifted monomial columns.
    let dz_powers: Vec<i64> = (1..=g as i64 + 1).collect();
    let dz_cols = descent_columns(&core, spec, &q_roots, &dz_powers)? * spec.alpha;
    let dzb_powers: Vec<i64> = (-1..=g as i64 - 1).collect();
    let dzb_cols = descent_columns(&core, spec, &q_roots, &dzb_powers)? * spec.beta;

    let dm = dz_cols.columns(0, g).into_owned();
    let db = -dz_cols.column(g).into_owned();
    let dbm = dzb_cols.columns(0, g).into_owned();
    let dbb = -dzb_cols.column(g).into_owned();

    let rhs_z = &db - &dm * &a;
    let (grad_z, _) = solve_square(&m, &rhs_z, tol.condition_cutoff)?;
    let rhs_zbar = &dbb - &dbm * &a;
    let (grad_zbar, _) = solve_square(&m, &rhs_zbar, tol.condition_cutoff)?;

    // ∂∂̄ of any section column is αβ times the column itself, hence
    // M·∂∂̄a = αβ(b − M·a) − ∂̄M·∂a − ∂M·∂̄a.
    let ab = spec.alpha * spec.beta;
    let rhs_mixed = (&b - &m * &a) * ab - &dbm * &grad_z - &dm * &grad_zbar;
    let (grad_zzbar, _) = solve_square(&m, &rhs_mixed, tol.condition_cutoff)?;

    Ok(SchrodingerSolution {
        spec: spec.clone(),
        divisor: divisor.clone(),
        x,
        y,
        coeffs: a.iter().copied().collect(),
        grad_z: grad_z.iter().copied().collect(),
        grad_zbar: grad_zbar.iter().copied().collect(),
        grad_zzbar: grad_zzbar.iter().copied().collect(),
        condition,
    })
}

impl SchrodingerSolution {
    fn genus(&self) -> usize {
        self.spec.arithmetic_genus()
    }

    fn q_roots(&self) -> Vec<(Complex64, usize)> {
        self.divisor.entries().to_vec()
    }

    /// Monic numerator P(λ) = λ^g + a_{g−1}λ^{g−1} + … + a₀.
    pub fn numerator(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(c(1.0, 0.0));
        Poly::new(coeffs)
    }

    pub fn prefactor(&self) -> RationalFunction {
        RationalFunction::new(self.numerator(), self.q_roots())
    }

    fn gradient_rational(&self, grad: &[Complex64]) -> RationalFunction {
        RationalFunction::new(Poly::new(grad.to_vec()), self.q_roots())
    }

    pub fn core(&self) -> ExponentialCore {
        ExponentialCore::new(self.spec.alpha, self.spec.beta, self.x, self.y)
    }

    pub fn psi(&self, lambda: Complex64) -> FgResult<Complex64> {
        let e = self.core().eval(lambda)?;
        Ok(e * self.prefactor().eval(lambda)?)
    }

    /// Subleading exponential correction at the plus end:
    /// ψ ~ e^{αλz}λ^g/q·(… ) with ξ = αβz̄ + α(a_{g−1} + Σ nⱼpⱼ).
    pub fn xi(&self) -> Complex64 {
        let g = self.genus();
        let tail = if g == 0 {
            c(0.0, 0.0)
        } else {
            self.coeffs[g - 1]
        };
        let pole_sum: Complex64 = self
            .divisor
            .entries()
            .iter()
            .map(|&(p, n)| p * c(n as f64, 0.0))
            .sum();
        self.spec.alpha * self.spec.beta * self.core().zbar()
            + self.spec.alpha * (tail + pole_sum)
    }

    /// Value of the prefactor at the minus end, c = R(0) = P(0)/q(0).
    pub fn c_value(&self) -> Complex64 {
        let q0 = Poly::from_roots(&self.q_roots()).eval(c(0.0, 0.0));
        self.numerator().eval(c(0.0, 0.0)) / q0
    }

    /// Scalar potential u = −∂̄ξ = −αβ − α·∂̄a_{g−1}.
    pub fn u(&self) -> Complex64 {
        let base = -self.spec.alpha * self.spec.beta;
        match self.genus() {
            0 => base,
            g => base - self.spec.alpha * self.grad_zbar[g - 1],
        }
    }

    /// First-order coefficient A = −∂ log c = −(∂a₀)/a₀.
    pub fn big_a(&self) -> FgResult<Complex64> {
        if self.genus() == 0 {
            return Ok(c(0.0, 0.0));
        }
        let a0 = self.coeffs[0];
        if a0.norm() < 1e-250 {
            return Err(FgError::DegenerateConfig {
                reason: "prefactor vanishes at λ = 0; log-derivative blows up".to_string(),
            });
        }
        Ok(-self.grad_z[0] / a0)
    }

    /// z and z̄ derivatives of log c, for cross-checking.
    pub fn log_c_gradients(&self) -> FgResult<(Complex64, Complex64)> {
        if self.genus() == 0 {
            return Ok((c(0.0, 0.0), c(0.0, 0.0)));
        }
        let a0 = self.coeffs[0];
        if a0.norm() < 1e-250 {
            return Err(FgError::DegenerateConfig {
                reason: "prefactor vanishes at λ = 0".to_string(),
            });
        }
        Ok((self.grad_z[0] / a0, self.grad_zbar[0] / a0))
    }

    pub fn sample(&self) -> FgResult<PotentialSample> {
        Ok(PotentialSample {
            x: self.x,
            y: self.y,
            u: self.u(),
            big_a: self.big_a()?,
            xi: self.xi(),
            c_value: self.c_value(),
        })
    }

    fn min_distance_to_singular_set(&self, lambda: Complex64) -> f64 {
        let mut d = lambda.norm();
        for &(p, _) in self.divisor.entries() {
            d = d.min((lambda - p).norm());
        }
        d
    }

    /// Relative size of (∂∂̄ + A∂̄ + u)ψ at one spectral point.
    pub fn operator_residual(&self, lambda: Complex64) -> FgResult<f64> {
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
        let r = self.prefactor().eval(lambda)?;
        let (rz, rzb, rzzb) = if self.genus() == 0 {
            (c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
        } else {
            (
                self.gradient_rational(&self.grad_z).eval(lambda)?,
                self.gradient_rational(&self.grad_zbar).eval(lambda)?,
                self.gradient_rational(&self.grad_zzbar).eval(lambda)?,
            )
        };
        let psi = e * r;
        let dzb_psi = e * (beta / lambda * r + rzb);
        let dzdzb_psi =
            e * (alpha * beta * r + beta / lambda * rz + alpha * lambda * rzb + rzzb);
        let u = self.u();
        let big_a = self.big_a()?;
        let residual = dzdzb_psi + big_a * dzb_psi + u * psi;
        let scale = dzdzb_psi
            .norm()
            .max((big_a * dzb_psi).norm())
            .max((u * psi).norm())
            .max(1e-300);
        Ok(residual.norm() / scale)
    }

    /// Worst violation of the gluing conditions by the solved wave.
    pub fn descent_residual(&self) -> FgResult<f64> {
        descent_violation(&self.core(), &self.spec.classes, &self.prefactor())
    }
}

/// Evaluate the potential fields over a grid in parallel. Each node carries
/// its own result so isolated failures (blow-up points of the divisor flow)
/// don't poison the rest of the field.
pub fn potential_field(
    spec: &CurveSpec,
    divisor: &PoleDivisor,
    grid: &Grid,
    tol: &Tolerances,
) -> Vec<FgResult<PotentialSample>> {
    grid.nodes()
        .par_iter()
        .map(|&(x, y)| solve_schrodinger(spec, divisor, x, y, tol)?.sample())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::GluingClass;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn double_point_fixture() -> (CurveSpec, PoleDivisor) {
        let class = GluingClass::new(vec![(z(1.2, -0.7), 2)]).unwrap();
        let spec = CurveSpec::plain(z(0.8, 0.3), z(1.1, -0.4), vec![class]);
        let divisor = PoleDivisor::simple(&[z(0.5, 0.9)]).unwrap();
        (spec, divisor)
    }

    // Frozen from an independent 30-digit evaluation of the closed-form
    // solution a₀ = (p − Wq(q−p)) / (W(q−p) − 1), W = αz − βz̄/q².
    #[test]
    fn double_point_solution_matches_closed_form() {
        let (spec, divisor) = double_point_fixture();
        let sol = solve_schrodinger(&spec, &divisor, 0.4, -0.3, &Tolerances::default()).unwrap();
        let expect = z(-1.3273800448975483, -0.3477582694246918);
        assert!(
            (sol.coeffs[0] - expect).norm() < 1e-12,
            "a0 = {}",
            sol.coeffs[0]
        );
        let xi = sol.xi();
        assert!((xi - z(-0.4305765550906311, 0.4975793709909820)).norm() < 1e-12);
        let cv = sol.c_value();
        assert!((cv - z(0.9213891178594310, -0.9629838732975921)).norm() < 1e-12);
        let u = sol.u();
        assert!(
            (u - z(-1.3920362629029862, -0.4336943663451837)).norm() < 1e-11,
            "u = {u}"
        );
        let big_a = sol.big_a().unwrap();
        assert!(
            (big_a - z(-0.6869267471295141, 0.0963963074056935)).norm() < 1e-11,
            "A = {big_a}"
        );
    }

    // Frozen from the same independent evaluation: two simple points glued,
    // a₀ = −(G₁(w₁) − G₁(w₂)) / (G₀(w₁) − G₀(w₂)) with Gₘ = E·λ^m/q.
    #[test]
    fn pair_class_solution_matches_closed_form() {
        let class = GluingClass::simple(&[z(1.1, 0.0), z(-1.1, 0.0)]).unwrap();
        let spec = CurveSpec::plain(z(1.0, 0.0), z(1.0, 0.0), vec![class]);
        let divisor = PoleDivisor::simple(&[z(0.6, 0.8)]).unwrap();
        let sol = solve_schrodinger(&spec, &divisor, 0.25, 0.4, &Tolerances::default()).unwrap();
        let expect = z(-1.0406182784660125, -0.3958662989175883);
        assert!((sol.coeffs[0] - expect).norm() < 1e-12);
    }

    #[test]
    fn trivial_curve_has_constant_potential_and_no_drift() {
        let spec = CurveSpec::plain(z(0.9, -0.2), z(1.3, 0.5), vec![]);
        let divisor = PoleDivisor::new(vec![]).unwrap();
        let sol = solve_schrodinger(&spec, &divisor, 0.7, -1.1, &Tolerances::default()).unwrap();
        assert!((sol.u() + spec.alpha * spec.beta).norm() < 1e-15);
        assert!(sol.big_a().unwrap().norm() == 0.0);
        assert!((sol.c_value() - z(1.0, 0.0)).norm() < 1e-15);
        let res = sol.operator_residual(z(0.8, 0.6)).unwrap();
        assert!(res < 1e-13, "residual {res}");
    }

    #[test]
    fn operator_annihilates_wave_across_spectrum() {
        let (spec, divisor) = double_point_fixture();
        let sol = solve_schrodinger(&spec, &divisor, 0.4, -0.3, &Tolerances::default()).unwrap();
        for lam in [z(0.9, 0.1), z(-0.4, 1.3), z(2.1, -0.8), z(0.05, -1.9)] {
            let res = sol.operator_residual(lam).unwrap();
            assert!(res < 1e-9, "residual {res} at λ = {lam}");
        }
        assert!(sol.descent_residual().unwrap() < 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let (spec, divisor) = double_point_fixture();
        let tol = Tolerances::default();
        let h = 1e-5;
        let sol = solve_schrodinger(&spec, &divisor, 0.4, -0.3, &tol).unwrap();
        let xp = solve_schrodinger(&spec, &divisor, 0.4 + h, -0.3, &tol).unwrap();
        let xm = solve_schrodinger(&spec, &divisor, 0.4 - h, -0.3, &tol).unwrap();
        let yp = solve_schrodinger(&spec, &divisor, 0.4, -0.3 + h, &tol).unwrap();
        let ym = solve_schrodinger(&spec, &divisor, 0.4, -0.3 - h, &tol).unwrap();
        // ∂ = (∂x − i∂y)/2, ∂̄ = (∂x + i∂y)/2 on the coefficient a₀.
        let ax = (xp.coeffs[0] - xm.coeffs[0]) / c(2.0 * h, 0.0);
        let ay = (yp.coeffs[0] - ym.coeffs[0]) / c(2.0 * h, 0.0);
        let dz_fd = (ax - c(0.0, 1.0) * ay) / c(2.0, 0.0);
        let dzb_fd = (ax + c(0.0, 1.0) * ay) / c(2.0, 0.0);
        assert!((sol.grad_z[0] - dz_fd).norm() < 1e-7);
        assert!((sol.grad_zbar[0] - dzb_fd).norm() < 1e-7);
    }

    #[test]
    fn sample_too_close_to_divisor_pole_is_refused() {
        let (spec, divisor) = double_point_fixture();
        let sol = solve_schrodinger(&spec, &divisor, 0.4, -0.3, &Tolerances::default()).unwrap();
        let err = sol.operator_residual(z(0.5001, 0.9)).unwrap_err();
        assert!(matches!(err, FgError::SampleTooClose { .. }));
    }
}
