//! One-dimensional degenerations: gluing data on the spectral w-line with a
//! single simple pole produce the classical rational and one-soliton
//! potentials of the stationary Schrödinger operator ∂²ₓ + u. The whole
//! pipeline (descent row, linear solve, differentiated systems, residual
//! check) mirrors the two-dimensional construction in miniature and with
//! purely real arithmetic, which makes it a useful independent cross-check.

use num_complex::Complex64;

use crate::error::{FgError, FgResult};

/// The two admissible singular configurations on the w-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OneDFamily {
    /// One point of multiplicity two at w = 0 (a cusp-type condition): the
    /// first w-jet of the wave function must vanish there.
    DoublePoint { p: f64 },
    /// Two simple points w = ±q identified (a node-type condition): the wave
    /// function takes equal values at them.
    Pair { q: f64, p: f64 },
}

impl OneDFamily {
    pub fn pole(&self) -> f64 {
        match *self {
            OneDFamily::DoublePoint { p } => p,
            OneDFamily::Pair { p, .. } => p,
        }
    }

    fn validate(&self) -> FgResult<()> {
        match *self {
            OneDFamily::DoublePoint { p } => {
                if p.abs() < 1e-9 {
                    return Err(FgError::DegenerateConfig {
                        reason: "double-point family needs the pole away from w = 0".to_string(),
                    });
                }
                if !p.is_finite() {
                    return Err(FgError::InvalidRequest {
                        reason: "pole position must be finite".to_string(),
                    });
                }
            }
            OneDFamily::Pair { q, p } => {
                if !(q.is_finite() && p.is_finite()) {
                    return Err(FgError::InvalidRequest {
                        reason: "pair parameters must be finite".to_string(),
                    });
                }
                if q.abs() < 1e-9 {
                    return Err(FgError::DegenerateConfig {
                        reason: "pair family needs q away from 0 (points ±q must be distinct)"
                            .to_string(),
                    });
                }
                if (q - p).abs() < 1e-9 * (1.0 + q.abs())
                    || (q + p).abs() < 1e-9 * (1.0 + q.abs())
                {
                    return Err(FgError::DegenerateConfig {
                        reason: "pole collides with one of the glued points ±q".to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The descent functional applied to e^{wx} wʲ/(w−p): a jet evaluation
    /// for the double point, a difference of values for the pair.
    fn functional(&self, x: f64, j: usize) -> f64 {
        match *self {
            OneDFamily::DoublePoint { p } => match j {
                0 => -x / p - 1.0 / (p * p),
                1 => -1.0 / p,
                _ => 0.0,
            },
            OneDFamily::Pair { q, p } => {
                let qj = q.powi(j as i32);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (q * x).exp() * qj / (q - p) + sign * (-q * x).exp() * qj / (q + p)
            }
        }
    }
}

/// Wave function data at a single position x: ψ(w) = e^{wx}(w + a)/(w − p)
/// with the descent coefficient a and its first two x-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct OneDSolution {
    pub family: OneDFamily,
    pub x: f64,
    pub a: f64,
    pub a_x: f64,
    pub a_xx: f64,
}

/// Solve the one-dimensional descent condition at position x.
pub fn solve_oned(family: OneDFamily, x: f64) -> FgResult<OneDSolution> {
    family.validate()?;
    if !x.is_finite() {
        return Err(FgError::InvalidRequest {
            reason: "position x must be finite".to_string(),
        });
    }
    let l0 = family.functional(x, 0);
    let l1 = family.functional(x, 1);
    let l2 = family.functional(x, 2);
    let l3 = family.functional(x, 3);
    let scale = 1.0 + l1.abs() + l2.abs();
    if l0.abs() < 1e-12 * scale {
        return Err(FgError::DegeneratePosition {
            x,
            reason: "descent condition is singular here (blow-up locus of the potential)"
                .to_string(),
        });
    }
    // Differentiating L[e^{wx}(w + a)/(w−p)] = 0 in x multiplies the basis
    // elements by w, shifting j by one; the chain of 1×1 systems below is the
    // product rule applied to L₀·a = −L₁.
    let a = -l1 / l0;
    let a_x = (-l2 - l1 * a) / l0;
    let a_xx = (-l3 - 2.0 * l1 * a_x - l2 * a) / l0;
    Ok(OneDSolution {
        family,
        x,
        a,
        a_x,
        a_xx,
    })
}

impl OneDSolution {
    /// Potential of the operator ∂²ₓ + u with eigenvalue w².
    pub fn u(&self) -> f64 {
        -2.0 * self.a_x
    }

    /// Subleading coefficient of ψ e^{−wx} at w → ∞.
    pub fn xi(&self) -> f64 {
        self.a + self.family.pole()
    }

    pub fn psi(&self, w: f64) -> FgResult<f64> {
        let p = self.family.pole();
        if (w - p).abs() < 1e-9 * (1.0 + p.abs()) {
            return Err(FgError::EvaluationAtPole {
                lambda: Complex64::new(w, 0.0),
                pole: Complex64::new(p, 0.0),
            });
        }
        Ok((w * self.x).exp() * (w + self.a) / (w - p))
    }

    /// |ψ″ + (u − w²)ψ| relative to the size of the participating terms.
    pub fn residual_1d(&self, w: f64) -> FgResult<f64> {
        let p = self.family.pole();
        let dist = (w - p).abs();
        if dist < 1e-3 {
            return Err(FgError::SampleTooClose {
                lambda: Complex64::new(w, 0.0),
                distance: dist,
            });
        }
        let e = (w * self.x).exp();
        let psi = e * (w + self.a) / (w - p);
        let psi_xx = e * (w * w * (w + self.a) + 2.0 * w * self.a_x + self.a_xx) / (w - p);
        let u = self.u();
        let residual = (psi_xx + (u - w * w) * psi).abs();
        let scale = psi_xx
            .abs()
            .max((w * w * psi).abs())
            .max((u * psi).abs())
            .max(1e-300);
        Ok(residual / scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_point_matches_rational_closed_form() {
        let fam = OneDFamily::DoublePoint { p: 1.0 };
        assert!((solve_oned(fam, 0.0).unwrap().a - (-1.0)).abs() < 1e-14);
        assert!((solve_oned(fam, 1.0).unwrap().a - (-0.5)).abs() < 1e-14);
        let fam = OneDFamily::DoublePoint { p: 0.7 };
        for &x in &[-0.6, 0.3, 1.9] {
            let sol = solve_oned(fam, x).unwrap();
            let expected_a = -0.7 / (1.0 + 0.7 * x);
            assert!((sol.a - expected_a).abs() < 1e-13);
            let expected_u = -2.0 / (x + 1.0 / 0.7).powi(2);
            assert!((sol.u() - expected_u).abs() < 1e-12);
        }
    }

    #[test]
    fn pair_matches_frozen_values() {
        let fam = OneDFamily::Pair { q: 1.3, p: 0.4 };
        let sol = solve_oned(fam, 0.55).unwrap();
        assert!((sol.a - (-1.0076384560781874)).abs() < 1e-12);
        assert!((sol.u() - 1.3493294836647336).abs() < 1e-12);
    }

    #[test]
    fn pair_potential_is_a_sech_squared_profile() {
        let q = 1.1;
        let p = 0.35;
        let fam = OneDFamily::Pair { q, p };
        let phi = 0.5 * ((q + p) / (q - p)).ln();
        for &x in &[-1.2, -0.3, 0.0, 0.7, 2.4] {
            let sol = solve_oned(fam, x).unwrap();
            let expected = 2.0 * q * q / (q * x + phi).cosh().powi(2);
            assert!(
                (sol.u() - expected).abs() < 1e-12,
                "x = {x}: {} vs {expected}",
                sol.u()
            );
        }
    }

    #[test]
    fn operator_residual_vanishes_for_both_families() {
        let cases = [
            OneDFamily::DoublePoint { p: 0.8 },
            OneDFamily::Pair { q: 1.3, p: 0.4 },
        ];
        for fam in cases {
            for &x in &[-0.9, 0.15, 1.1] {
                let sol = solve_oned(fam, x).unwrap();
                for &w in &[-2.3, -0.45, 1.7, 3.2] {
                    let r = sol.residual_1d(w).unwrap();
                    assert!(r < 1e-12, "{fam:?} x={x} w={w}: residual {r:e}");
                }
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let fam = OneDFamily::Pair { q: 0.9, p: -0.5 };
        let x = 0.4;
        let h = 1e-5;
        let sol = solve_oned(fam, x).unwrap();
        let ap = solve_oned(fam, x + h).unwrap().a;
        let am = solve_oned(fam, x - h).unwrap().a;
        let fd1 = (ap - am) / (2.0 * h);
        let fd2 = (ap - 2.0 * sol.a + am) / (h * h);
        assert!((sol.a_x - fd1).abs() < 1e-8);
        assert!((sol.a_xx - fd2).abs() < 1e-5);
    }

    #[test]
    fn blow_up_position_is_reported() {
        let fam = OneDFamily::DoublePoint { p: 1.0 };
        assert!(matches!(
            solve_oned(fam, -1.0),
            Err(FgError::DegeneratePosition { .. })
        ));
    }

    #[test]
    fn pair_approaches_double_point_as_q_shrinks() {
        let p = 0.85;
        let x = 0.6;
        let double = solve_oned(OneDFamily::DoublePoint { p }, x).unwrap();
        let pair = solve_oned(OneDFamily::Pair { q: 1e-4, p }, x).unwrap();
        assert!((pair.a - double.a).abs() < 1e-6);
        assert!((pair.u() - double.u()).abs() < 1e-6);
    }

    #[test]
    fn double_point_approaches_inverse_square_as_pole_grows() {
        let x = 0.7;
        let sol = solve_oned(OneDFamily::DoublePoint { p: 1e6 }, x).unwrap();
        assert!((sol.u() - (-2.0 / (x * x))).abs() < 1e-4);
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(solve_oned(OneDFamily::DoublePoint { p: 0.0 }, 0.3).is_err());
        assert!(solve_oned(OneDFamily::Pair { q: 0.0, p: 0.4 }, 0.3).is_err());
        assert!(solve_oned(OneDFamily::Pair { q: 0.7, p: 0.7 }, 0.3).is_err());
        assert!(solve_oned(OneDFamily::Pair { q: 0.7, p: -0.7 }, 0.3).is_err());
    }

    #[test]
    fn xi_is_the_subleading_expansion_coefficient() {
        let sol = solve_oned(OneDFamily::Pair { q: 1.2, p: 0.3 }, 0.8).unwrap();
        // (w + a)/(w − p) = 1 + (a + p)/w + O(w⁻²)
        let w = 1e7;
        let rational = (w + sol.a) / (w - 0.3);
        assert!(((rational - 1.0) * w - sol.xi()).abs() < 1e-4);
    }
}
