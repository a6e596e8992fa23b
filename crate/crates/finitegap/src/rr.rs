use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::{CurveSpec, ProjPoint};
use crate::error::{FgError, FgResult};
use crate::linalg::rank_with_floor;
use crate::poly::Poly;
use crate::rational::RationalFunction;
use crate::tolerances::Tolerances;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Divisor on the singular curve for dimension counts; finite points and ∞
/// both allowed (contrary to the wave-function divisors, 0 and ∞ are
/// legitimate here).
pub type RrDivisor = Vec<(ProjPoint, usize)>;

pub fn divisor_degree(divisor: &RrDivisor) -> usize {
    divisor.iter().map(|&(_, m)| m).sum()
}

fn check_divisor(spec: &CurveSpec, divisor: &RrDivisor, tol: &Tolerances) -> FgResult<()> {
    for (i, &(p, m)) in divisor.iter().enumerate() {
        if m == 0 {
            return Err(FgError::InvalidRequest {
                reason: "divisor entry with multiplicity 0".to_string(),
            });
        }
        for &(q, _) in &divisor[..i] {
            let same = match (p, q) {
                (ProjPoint::Infinity, ProjPoint::Infinity) => true,
                (ProjPoint::Finite(a), ProjPoint::Finite(b)) => {
                    (a - b).norm() <= tol.coincidence
                }
                _ => false,
            };
            if same {
                return Err(FgError::DegenerateConfig {
                    reason: "repeated point in the divisor (merge multiplicities instead)"
                        .to_string(),
                });
            }
        }
        if let ProjPoint::Finite(p) = p {
            for &(w, _) in &spec.support() {
                if (p - w).norm() <= tol.coincidence * (1.0 + w.norm()) {
                    return Err(FgError::DegenerateConfig {
                        reason: format!("divisor point {p} collides with gluing point {w}"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Basis of the ambient space of rational functions with poles bounded by
/// the divisor: the constant 1, then (λ−p)^{−j} per finite entry, then λ^j
/// for a pole at ∞.
fn ambient_basis(divisor: &RrDivisor) -> Vec<RationalFunction> {
    let mut basis = vec![RationalFunction::from_poly(Poly::one())];
    for &(p, m) in divisor {
        match p {
            ProjPoint::Finite(p) => {
                for j in 1..=m {
                    basis.push(RationalFunction::new(Poly::one(), vec![(p, j)]));
                }
            }
            ProjPoint::Infinity => {
                for j in 1..=m {
                    basis.push(RationalFunction::from_poly(Poly::monomial(j, c(1.0, 0.0))));
                }
            }
        }
    }
    basis
}

/// Descent conditions on plain rational functions (no exponential weight):
/// value agreement across the members of every class and vanishing λ-jets of
/// orders 1…n−1 at each member. The second return value is the magnitude of
/// the raw jets before any cancellation, the reference scale for deciding
/// which rows are genuinely zero.
fn descent_rows(
    spec: &CurveSpec,
    basis: &[RationalFunction],
) -> FgResult<(DMatrix<Complex64>, f64)> {
    let total_rows: usize = spec.classes.iter().map(|cl| cl.delta()).sum();
    let mut out = DMatrix::zeros(total_rows, basis.len());
    let mut scale = 0.0_f64;
    let mut row0 = 0;
    for class in &spec.classes {
        let members = class.members();
        for (col, h) in basis.iter().enumerate() {
            let jets: Vec<Vec<Complex64>> = members
                .iter()
                .map(|&(w, m)| h.taylor_jet(w, m.max(1)))
                .collect::<FgResult<_>>()?;
            for jet in &jets {
                for v in jet {
                    scale = scale.max(v.norm());
                }
            }
            let mut row = row0;
            for j in 1..members.len() {
                out[(row, col)] = jets[0][0] - jets[j][0];
                row += 1;
            }
            for (i, &(_, m)) in members.iter().enumerate() {
                for k in 1..m {
                    out[(row, col)] = jets[i][k];
                    row += 1;
                }
            }
        }
        row0 += class.delta();
    }
    Ok((out, scale))
}

/// dim L(D): rational functions on the singular curve with poles bounded by
/// D — the ambient space cut by the descent conditions.
pub fn function_space_dim(
    spec: &CurveSpec,
    divisor: &RrDivisor,
    tol: &Tolerances,
) -> FgResult<usize> {
    check_divisor(spec, divisor, tol)?;
    let basis = ambient_basis(divisor);
    let (rows, scale) = descent_rows(spec, &basis)?;
    Ok(basis.len() - rank_with_floor(&rows, tol.certificate_rank, scale))
}

/// Numerator monomial basis for differentials N/∏(λ−w)^{n} dλ with poles
/// only at the gluing support, each bounded by the member multiplicity.
/// deg N ≤ T₁ − 2 keeps both ends regular.
fn differential_ambient(spec: &CurveSpec) -> (Vec<(Complex64, usize)>, usize) {
    let support: Vec<(Complex64, usize)> = spec.support();
    let t1: usize = support.iter().map(|&(_, m)| m).sum();
    let ncols = t1.saturating_sub(1); // deg ≤ T₁ − 2 ⟹ T₁ − 1 monomials
    (support, ncols)
}

/// Rows cutting the regular (dualizing) differentials out of the ambient
/// family: the residues of a differential must sum to zero over each class.
/// Because the total residue of every basis differential already vanishes,
/// the rows of this matrix sum to zero analytically — the returned scale
/// (largest Σ|residue| before cancellation) lets rank decisions see that.
fn residue_sum_rows(
    spec: &CurveSpec,
    support: &[(Complex64, usize)],
    ncols: usize,
) -> (DMatrix<Complex64>, f64) {
    let mut out = DMatrix::zeros(spec.classes.len(), ncols);
    let mut scale = 0.0_f64;
    for i in 0..ncols {
        let b = RationalFunction::monomial_over(i, support);
        for (r, class) in spec.classes.iter().enumerate() {
            let mut sum = c(0.0, 0.0);
            let mut magnitude = 0.0_f64;
            for &(w, _) in class.members() {
                let res = b.residue_at(w);
                sum += res;
                magnitude += res.norm();
            }
            out[(r, i)] = sum;
            scale = scale.max(magnitude);
        }
    }
    (out, scale)
}

/// dim of the space of regular differentials; equals the arithmetic genus
/// for every admissible configuration.
pub fn regular_differential_dim(spec: &CurveSpec, tol: &Tolerances) -> FgResult<usize> {
    let (support, ncols) = differential_ambient(spec);
    if ncols == 0 {
        return Ok(0);
    }
    let (rows, scale) = residue_sum_rows(spec, &support, ncols);
    Ok(ncols - rank_with_floor(&rows, tol.certificate_rank, scale))
}

#[derive(Debug, Clone, Copy)]
pub struct RrReport {
    pub degree: usize,
    pub p_a: usize,
    pub dim_l: usize,
    pub dim_omega: usize,
    /// dim L(D) − dim Ω(D) − (deg D + 1 − p_a); zero in exact arithmetic and
    /// computed purely with integers here.
    pub identity_residual: i64,
}

/// dim Ω(D): regular differentials additionally vanishing on D (to the
/// divisor's multiplicities, including at ∞).
fn constrained_differential_dim(
    spec: &CurveSpec,
    divisor: &RrDivisor,
    tol: &Tolerances,
) -> FgResult<usize> {
    let (support, ncols) = differential_ambient(spec);
    if ncols == 0 {
        return Ok(0);
    }
    let (residue_rows, residue_scale) = residue_sum_rows(spec, &support, ncols);
    let extra: usize = divisor_degree(divisor);
    let mut rows = DMatrix::zeros(residue_rows.nrows() + extra, ncols);
    rows.view_mut((0, 0), (residue_rows.nrows(), ncols))
        .copy_from(&residue_rows);
    let mut row = residue_rows.nrows();
    for &(p, m) in divisor {
        match p {
            ProjPoint::Finite(p) => {
                for i in 0..ncols {
                    let b = RationalFunction::monomial_over(i, &support);
                    let jet = b.taylor_jet(p, m)?;
                    for (k, &jk) in jet.iter().enumerate() {
                        rows[(row + k, i)] = jk;
                    }
                }
                row += m;
            }
            ProjPoint::Infinity => {
                // Zero of order ≥ m at ∞ for the differential f dλ means
                // f = O(λ^{−2−m}); kill the coefficients of λ^{−2}…λ^{−1−m}.
                for i in 0..ncols {
                    let b = RationalFunction::monomial_over(i, &support);
                    let t1: usize = support.iter().map(|&(_, mm)| mm).sum();
                    let count = t1 + m; // reaches down to λ^{−(1+m)} from λ^{top}
                    let (top, coeffs) = b.laurent_at_infinity(count.max(1));
                    for k in 0..m {
                        let order = -2 - k as i64;
                        let idx = top - order;
                        let val = if idx >= 0 && (idx as usize) < coeffs.len() {
                            coeffs[idx as usize]
                        } else {
                            c(0.0, 0.0)
                        };
                        rows[(row + k, i)] = val;
                    }
                }
                row += m;
            }
        }
    }
    Ok(ncols - rank_with_floor(&rows, tol.certificate_rank, residue_scale))
}

/// Both dimensions plus the index identity
/// dim L(D) − dim Ω(D) = deg D + 1 − p_a, evaluated exactly in integers.
pub fn rr_report(spec: &CurveSpec, divisor: &RrDivisor, tol: &Tolerances) -> FgResult<RrReport> {
    check_divisor(spec, divisor, tol)?;
    let degree = divisor_degree(divisor);
    let p_a = spec.arithmetic_genus();
    let dim_l = function_space_dim(spec, divisor, tol)?;
    let dim_omega = constrained_differential_dim(spec, divisor, tol)?;
    let identity_residual =
        dim_l as i64 - dim_omega as i64 - (degree as i64 + 1 - p_a as i64);
    Ok(RrReport {
        degree,
        p_a,
        dim_l,
        dim_omega,
        identity_residual,
    })
}
