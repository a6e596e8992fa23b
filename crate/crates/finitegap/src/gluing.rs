use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::curve::GluingClass;
use crate::error::FgResult;
use crate::exponential::ExponentialCore;
use crate::rational::RationalFunction;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Taylor coefficients of the product E(λ)·h(λ) at a point — the convolution
/// of the two jets. All gluing conditions are expressed through these.
pub fn product_jet(
    core: &ExponentialCore,
    h: &RationalFunction,
    at: Complex64,
    count: usize,
) -> FgResult<Vec<Complex64>> {
    let e = core.taylor_jet(at, count)?;
    let r = h.taylor_jet(at, count)?;
    let mut out = vec![c0(); count];
    for k in 0..count {
        let mut acc = c0();
        for m in 0..=k {
            acc += e[m] * r[k - m];
        }
        out[k] = acc;
    }
    Ok(out)
}

/// Number of linear conditions a class imposes: value matching across
/// members plus vanishing jets of orders 1…n−1 at each member. Equals δ.
pub fn rows_for_class(class: &GluingClass) -> usize {
    class.delta()
}

/// Evaluate the descent conditions of one class against a family of sections
/// E·hⱼ, one matrix column per hⱼ. Row order: value differences
/// (member 0 vs member j, j = 1…), then jet rows per member in member order.
fn class_rows(
    core: &ExponentialCore,
    class: &GluingClass,
    basis: &[RationalFunction],
    out: &mut DMatrix<Complex64>,
    first_row: usize,
) -> FgResult<()> {
    let members = class.members();
    for (col, h) in basis.iter().enumerate() {
        let jets: Vec<Vec<Complex64>> = members
            .iter()
            .map(|&(w, m)| product_jet(core, h, w, m.max(1)))
            .collect::<FgResult<_>>()?;
        let mut row = first_row;
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
    Ok(())
}

/// Full descent matrix for the given section basis: one column per basis
/// element, Σ δ_i rows stacked class by class.
pub fn descent_matrix(
    core: &ExponentialCore,
    classes: &[GluingClass],
    basis: &[RationalFunction],
) -> FgResult<DMatrix<Complex64>> {
    let total_rows: usize = classes.iter().map(rows_for_class).sum();
    let mut out = DMatrix::zeros(total_rows, basis.len());
    let mut row = 0;
    for class in classes {
        class_rows(core, class, basis, &mut out, row)?;
        row += rows_for_class(class);
    }
    Ok(out)
}

/// Worst relative violation of the descent conditions by the section E·f.
/// Value rows are scaled by the larger member value, jet rows by the largest
/// jet coefficient of E·f at that member — both O(1) measures of the local
/// section size.
pub fn descent_violation(
    core: &ExponentialCore,
    classes: &[GluingClass],
    f: &RationalFunction,
) -> FgResult<f64> {
    let mut worst: f64 = 0.0;
    for class in classes {
        let members = class.members();
        let jets: Vec<Vec<Complex64>> = members
            .iter()
            .map(|&(w, m)| product_jet(core, f, w, m.max(1)))
            .collect::<FgResult<_>>()?;
        let value_scale = jets
            .iter()
            .map(|j| j[0].norm())
            .fold(0.0_f64, f64::max)
            .max(1e-300);
        for j in 1..members.len() {
            worst = worst.max((jets[0][0] - jets[j][0]).norm() / value_scale);
        }
        for (i, &(_, m)) in members.iter().enumerate() {
            let local_scale = jets[i]
                .iter()
                .map(|v| v.norm())
                .fold(0.0_f64, f64::max)
                .max(value_scale);
            for k in 1..m {
                worst = worst.max(jets[i][k].norm() / local_scale);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_jet_is_jet_of_product() {
        let core = ExponentialCore::new(c(0.8, 0.3), c(1.1, -0.4), 0.4, -0.3);
        let h = RationalFunction::new(
            Poly::new(vec![c(0.2, 0.0), c(1.0, 0.0)]),
            vec![(c(0.5, 0.9), 1)],
        );
        let at = c(1.2, -0.7);
        let jets = product_jet(&core, &h, at, 3).unwrap();
        // value
        let direct = core.eval(at).unwrap() * h.eval(at).unwrap();
        assert!((jets[0] - direct).norm() < 1e-13 * direct.norm());
        // first coefficient vs central difference of the product
        let step = 1e-6;
        let f = |l: Complex64| core.eval(l).unwrap() * h.eval(l).unwrap();
        let fd = (f(at + c(step, 0.0)) - f(at - c(step, 0.0))) / c(2.0 * step, 0.0);
        assert!((jets[1] - fd).norm() < 1e-7 * fd.norm());
    }

    #[test]
    fn descent_matrix_shape_counts_class_conditions() {
        let core = ExponentialCore::new(c(1.0, 0.0), c(1.0, 0.0), 0.1, 0.2);
        let classes = vec![
            GluingClass::new(vec![(c(1.0, 0.5), 2)]).unwrap(), // δ = 1
            GluingClass::new(vec![(c(-1.0, 0.3), 1), (c(0.7, -1.1), 2)]).unwrap(), // δ = 2
        ];
        let basis = vec![
            RationalFunction::monomial_over(0, &[(c(0.4, 0.2), 1)]),
            RationalFunction::monomial_over(1, &[(c(0.4, 0.2), 1)]),
            RationalFunction::monomial_over(2, &[(c(0.4, 0.2), 1)]),
        ];
        let m = descent_matrix(&core, &classes, &basis).unwrap();
        assert_eq!(m.nrows(), 3);
        assert_eq!(m.ncols(), 3);
    }
}
