use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense univariate polynomial over ℂ, coefficients in ascending order.
///
/// The zero polynomial is represented by an empty coefficient vector; all
/// constructors trim trailing (near-)zero leading coefficients were they to
/// appear exactly, but never round stored values.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(c(1.0, 0.0))
    }

    pub fn constant(value: Complex64) -> Self {
        Poly::new(vec![value])
    }

    /// c·λ^k
    pub fn monomial(k: usize, value: Complex64) -> Self {
        let mut coeffs = vec![c(0.0, 0.0); k + 1];
        coeffs[k] = value;
        Poly::new(coeffs)
    }

    /// Monic polynomial ∏ (λ − rᵢ)^{mᵢ}.
    pub fn from_roots(roots: &[(Complex64, usize)]) -> Self {
        let mut p = Poly::one();
        for &(r, m) in roots {
            let factor = Poly::new(vec![-r, c(1.0, 0.0)]);
            for _ in 0..m {
                p = p.mul(&factor);
            }
        }
        p
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.norm() == 0.0 {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| c(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_else(|| c(0.0, 0.0))
    }

    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for &ck in self.coeffs.iter().rev() {
            acc = acc * lambda + ck;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| ck * c(k as f64, 0.0))
            .collect();
        Poly::new(coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::new(coeffs)
    }

    pub fn scale(&self, factor: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&ck| ck * factor).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![c(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(coeffs)
    }

    /// Coefficients of p(λ₀ + μ) as a polynomial in μ (Taylor shift).
    pub fn shift(&self, lambda0: Complex64) -> Poly {
        // Synthetic division by (λ − λ₀), repeated: after pass k the trailing
        // entry holds the μ^k coefficient.
        let mut work = self.coeffs.clone();
        let n = work.len();
        let mut out = vec![c(0.0, 0.0); n];
        for k in 0..n {
            let mut carry = c(0.0, 0.0);
            for j in (k..n).rev() {
                let v = work[j] + carry * lambda0;
                carry = v;
                work[j] = v;
            }
            out[k] = work[k];
            // Entries above index k now hold the quotient for the next pass.
        }
        Poly::new(out)
    }

    /// Quotient and remainder of self / divisor.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len();
        if self.coeffs.len() < dd {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![c(0.0, 0.0); rem.len() - dd + 1];
        let lead = divisor.leading();
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd - 1] / lead;
            quot[k] = q;
            for j in 0..dd {
                rem[k + j] -= q * divisor.coeffs[j];
            }
        }
        rem.truncate(dd - 1);
        (Poly::new(quot), Poly::new(rem))
    }

    /// All complex roots (with multiplicity, listed individually), by the
    /// Durand–Kerner simultaneous iteration. Adequate for the small degrees
    /// this crate produces; multiple roots come back as tight clusters.
    pub fn roots(&self) -> Vec<Complex64> {
        let deg = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(d) => d,
        };
        let lead = self.leading();
        let monic: Vec<Complex64> = self.coeffs.iter().map(|&ck| ck / lead).collect();
        // Radius bound: 1 + max |aᵢ| keeps all roots inside the start circle.
        let radius = 1.0
            + monic[..deg]
                .iter()
                .map(|a| a.norm())
                .fold(0.0_f64, f64::max);
        let seed = c(0.4, 0.9);
        let mut zs: Vec<Complex64> = (0..deg)
            .map(|k| seed.powu(k as u32 + 1) / seed.norm().powi(k as i32 + 1) * radius * 0.7)
            .collect();
        // Slightly de-symmetrize the start points.
        for (k, z) in zs.iter_mut().enumerate() {
            *z += c(1e-3 * (k as f64 + 1.0), 2e-3);
        }
        let eval_monic = |z: Complex64| -> Complex64 {
            let mut acc = c(1.0, 0.0);
            for &ck in monic[..deg].iter().rev() {
                acc = acc * z + ck;
            }
            acc
        };
        for _ in 0..400 {
            let mut moved = 0.0_f64;
            for i in 0..deg {
                let zi = zs[i];
                let mut denom = c(1.0, 0.0);
                for j in 0..deg {
                    if j != i {
                        denom *= zi - zs[j];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = c(1e-300, 0.0);
                }
                let step = eval_monic(zi) / denom;
                zs[i] = zi - step;
                moved = moved.max(step.norm());
            }
            if moved < 1e-14 * (1.0 + radius) {
                break;
            }
        }
        zs
    }
}
