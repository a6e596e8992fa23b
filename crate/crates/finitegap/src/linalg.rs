use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FgError, FgResult};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// SVD of the matrix after padding with zero rows so the factorization always
/// carries a full right factor (required for rank/nullspace of wide systems).
fn padded_svd(m: &DMatrix<Complex64>) -> nalgebra::SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn> {
    let work = if m.nrows() < m.ncols() {
        let mut padded = DMatrix::zeros(m.ncols(), m.ncols());
        padded.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
        padded
    } else {
        m.clone()
    };
    nalgebra::SVD::new(work, true, true)
}

/// Solve a square system, rejecting it as numerically singular when the
/// condition number exceeds `cutoff`. Returns the solution and the condition
/// number actually observed.
pub fn solve_square(
    m: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
    cutoff: f64,
) -> FgResult<(DVector<Complex64>, f64)> {
    assert_eq!(m.nrows(), m.ncols(), "square solve on a non-square matrix");
    if m.nrows() == 0 {
        return Ok((DVector::zeros(0), 1.0));
    }
    let svd = nalgebra::SVD::new(m.clone(), true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() || condition > cutoff {
        return Err(FgError::NonGenericDivisor {
            condition,
            cutoff,
        });
    }
    let x = svd
        .solve(rhs, 0.0)
        .map_err(|_| FgError::NonGenericDivisor {
            condition,
            cutoff,
        })?;
    Ok((x, condition))
}

/// Minimum-norm least-squares solution and the residual 2-norm ‖Mx − b‖.
pub fn least_squares(
    m: &DMatrix<Complex64>,
    rhs: &DVector<Complex64>,
) -> (DVector<Complex64>, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (DVector::zeros(m.ncols()), rhs.norm());
    }
    let svd = padded_svd(m);
    let mut padded_rhs = DVector::zeros(svd.u.as_ref().unwrap().nrows());
    padded_rhs.rows_mut(0, rhs.nrows()).copy_from(rhs);
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    let eps = 1e-14 * smax.max(1e-300);
    let x = svd.solve(&padded_rhs, eps).expect("SVD solve after padding");
    let residual = (m * &x - rhs).norm();
    (x, residual)
}

/// Numerical rank against a relative singular-value threshold.
pub fn rank(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    rank_with_floor(m, rel_tol, 0.0)
}

/// Rank with the cutoff measured against max(σ_max, floor). The floor matters
/// when the matrix consists of analytically-zero quantities computed with
/// cancellation: σ_max is then pure noise and a relative cutoff against it
/// would report full rank. Callers pass the pre-cancellation magnitude.
pub fn rank_with_floor(m: &DMatrix<Complex64>, rel_tol: f64, floor: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = padded_svd(m);
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    let reference = smax.max(floor);
    if reference == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * reference)
        .count()
}

/// Orthonormal basis of the (numerical) nullspace {x : Mx ≈ 0}.
pub fn nullspace(m: &DMatrix<Complex64>, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..n)
            .map(|j| DVector::from_fn(n, |i, _| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
    }
    let svd = padded_svd(m);
    let v_t = svd.v_t.as_ref().expect("SVD with right factor");
    let smax = svd
        .singular_values
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max);
    let threshold = rel_tol * smax.max(1e-300);
    let mut basis = Vec::new();
    for i in 0..v_t.nrows() {
        let s = svd.singular_values.get(i).copied().unwrap_or(0.0);
        if s <= threshold {
            // A = U Σ Vᴴ: the nullspace is spanned by the columns of V past
            // the rank, i.e. the conjugated rows of Vᴴ.
            let row = v_t.row(i);
            basis.push(DVector::from_fn(n, |j, _| row[j].conj()));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_solve_recovers_known_vector() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 1.0), c(0.0, 2.0), c(-1.0, 0.5), c(3.0, 0.0)],
        );
        let x = DVector::from_vec(vec![c(0.7, -0.2), c(1.5, 0.3)]);
        let b = &m * &x;
        let (got, cond) = solve_square(&m, &b, 1e12).unwrap();
        assert!((got - x).norm() < 1e-12);
        assert!(cond >= 1.0 && cond < 100.0);
    }

    #[test]
    fn singular_system_is_rejected() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
        );
        let b = DVector::from_vec(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        assert!(matches!(
            solve_square(&m, &b, 1e12),
            Err(FgError::NonGenericDivisor { .. })
        ));
    }

    #[test]
    fn nullspace_vectors_annihilate_wide_matrix() {
        // 2×4 complex matrix: nullspace must have dimension 2.
        let m = DMatrix::from_row_slice(
            2,
            4,
            &[
                c(1.0, 0.5),
                c(0.0, -1.0),
                c(2.0, 0.0),
                c(-1.0, 1.0),
                c(0.3, 0.0),
                c(1.0, 1.0),
                c(0.0, 0.0),
                c(2.0, -0.5),
            ],
        );
        let basis = nullspace(&m, 1e-12);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.0, 1.0),
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(0.0, 2.0),
                c(2.0, 2.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        assert_eq!(rank(&m, 1e-12), 2);
    }

    #[test]
    fn least_squares_handles_inconsistent_rows() {
        // Overdetermined: best fit of [1; 1; 1] ≈ x·[1; 1; 0]ᵗ + …
        let m = DMatrix::from_row_slice(3, 1, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let b = DVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        let (x, res) = least_squares(&m, &b);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((res - 1.0).abs() < 1e-12);
    }
}
