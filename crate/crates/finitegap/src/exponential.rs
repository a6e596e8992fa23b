use num_complex::Complex64;

use crate::error::{FgError, FgResult};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The exponential weight E(λ) = exp(αλz + (β/λ)z̄) at a fixed plane point
/// z = x + iy. Carries essential singularities at the two marked ends and is
/// holomorphic elsewhere; Taylor jets at any λ₀ ≠ 0 come from composing the
/// exponent's shifted series with the exponential.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialCore {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub z: Complex64,
}

impl ExponentialCore {
    pub fn new(alpha: Complex64, beta: Complex64, x: f64, y: f64) -> Self {
        ExponentialCore {
            alpha,
            beta,
            z: c(x, y),
        }
    }

    pub fn zbar(&self) -> Complex64 {
        self.z.conj()
    }

    pub fn eval(&self, lambda: Complex64) -> FgResult<Complex64> {
        if lambda.norm() < 1e-12 {
            return Err(FgError::EvaluationAtPole {
                lambda,
                pole: c(0.0, 0.0),
            });
        }
        Ok((self.alpha * lambda * self.z + self.beta / lambda * self.zbar()).exp())
    }

    /// First `count` Taylor coefficients of E at λ₀ ≠ 0.
    pub fn taylor_jet(&self, lambda0: Complex64, count: usize) -> FgResult<Vec<Complex64>> {
        if lambda0.norm() < 1e-12 {
            return Err(FgError::EvaluationAtPole {
                lambda: lambda0,
                pole: c(0.0, 0.0),
            });
        }
        if count == 0 {
            return Ok(Vec::new());
        }
        // Exponent s(λ₀+μ) = s₀ + Σ_{k≥1} s_k μ^k with
        //   s₁ = αz − βz̄/λ₀²,  s_k = (−1)^k βz̄ / λ₀^{k+1}  (k ≥ 2).
        let zb = self.zbar();
        let mut s = vec![c(0.0, 0.0); count];
        if count > 1 {
            s[1] = self.alpha * self.z - self.beta * zb / (lambda0 * lambda0);
        }
        let mut inv_pow = lambda0.powu(3).finv(); // 1/λ₀³
        let mut sign = 1.0;
        for k in 2..count {
            s[k] = self.beta * zb * inv_pow * c(sign, 0.0);
            inv_pow /= lambda0;
            sign = -sign;
        }
        // exp of a series with zero constant term: h₀ = 1,
        // h_n = (1/n) Σ_{k=1}^{n} k s_k h_{n−k}.
        let mut h = vec![c(0.0, 0.0); count];
        h[0] = c(1.0, 0.0);
        for n in 1..count {
            let mut acc = c(0.0, 0.0);
            for k in 1..=n {
                acc += c(k as f64, 0.0) * s[k] * h[n - k];
            }
            h[n] = acc / c(n as f64, 0.0);
        }
        let e0 = (self.alpha * lambda0 * self.z + self.beta / lambda0 * zb).exp();
        for hk in &mut h {
            *hk *= e0;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matches_finite_differences() {
        let core = ExponentialCore::new(c(0.8, 0.3), c(1.1, -0.4), 0.4, -0.3);
        let lam0 = c(1.2, -0.7);
        let jets = core.taylor_jet(lam0, 4).unwrap();
        assert!((jets[0] - core.eval(lam0).unwrap()).norm() < 1e-14);
        // first derivative via central difference
        let h = 1e-6;
        let fd1 = (core.eval(lam0 + c(h, 0.0)).unwrap() - core.eval(lam0 - c(h, 0.0)).unwrap())
            / c(2.0 * h, 0.0);
        assert!((jets[1] - fd1).norm() < 1e-8 * fd1.norm().max(1.0));
        // second derivative / 2 — wider step: the second difference loses
        // ~eps/h² to roundoff, so h = 1e−4 balances it against truncation
        let h2 = 1e-4;
        let fd2 = (core.eval(lam0 + c(h2, 0.0)).unwrap()
            - core.eval(lam0).unwrap() * c(2.0, 0.0)
            + core.eval(lam0 - c(h2, 0.0)).unwrap())
            / c(h2 * h2, 0.0);
        assert!((jets[2] - fd2 / c(2.0, 0.0)).norm() < 1e-6 * fd2.norm().max(1.0));
    }

    #[test]
    fn sign_pattern_of_exponent_tail() {
        // For α = 0 the jet must reduce to exp(βz̄/λ) whose derivative at λ₀
        // is −βz̄/λ₀² times the value.
        let core = ExponentialCore::new(c(0.0, 0.0), c(0.7, 0.2), 1.0, 2.0);
        let lam0 = c(0.9, 0.4);
        let jets = core.taylor_jet(lam0, 2).unwrap();
        let expect = -core.beta * core.zbar() / (lam0 * lam0) * jets[0];
        assert!((jets[1] - expect).norm() < 1e-13 * expect.norm().max(1.0));
    }

    #[test]
    fn evaluation_at_zero_is_refused() {
        let core = ExponentialCore::new(c(1.0, 0.0), c(1.0, 0.0), 0.1, 0.2);
        assert!(matches!(
            core.eval(c(0.0, 0.0)),
            Err(FgError::EvaluationAtPole { .. })
        ));
    }
}
