use num_complex::Complex64;

use crate::error::{FgError, FgResult};
use crate::poly::Poly;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Truncated product of two power series.
fn series_mul(a: &[Complex64], b: &[Complex64], count: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); count];
    for (i, &ai) in a.iter().enumerate().take(count) {
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= count {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Truncated reciprocal of a power series with nonzero constant term.
fn series_inverse(a: &[Complex64], count: usize) -> Vec<Complex64> {
    let a0 = a.first().copied().unwrap_or_else(|| c(0.0, 0.0));
    debug_assert!(a0.norm() > 0.0, "series reciprocal needs a unit");
    let mut out = vec![c(0.0, 0.0); count];
    out[0] = c(1.0, 0.0) / a0;
    for n in 1..count {
        let mut acc = c(0.0, 0.0);
        for k in 1..=n {
            let ak = a.get(k).copied().unwrap_or_else(|| c(0.0, 0.0));
            acc += ak * out[n - k];
        }
        out[n] = -acc / a0;
    }
    out
}

/// Rational function with a factored denominator ∏ (λ − rᵢ)^{mᵢ}.
///
/// Keeping the denominator factored makes local expansions exact series
/// operations: Taylor jets away from poles, Laurent windows at poles and at
/// λ = ∞, residues. Coinciding roots passed to the constructor are merged.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    num: Poly,
    den_roots: Vec<(Complex64, usize)>,
}

impl RationalFunction {
    pub fn new(num: Poly, den_roots: Vec<(Complex64, usize)>) -> Self {
        let mut merged: Vec<(Complex64, usize)> = Vec::new();
        for (r, m) in den_roots {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(s, _)| (*s - r).norm() < 1e-13) {
                Some((_, existing)) => *existing += m,
                None => merged.push((r, m)),
            }
        }
        RationalFunction {
            num,
            den_roots: merged,
        }
    }

    pub fn from_poly(num: Poly) -> Self {
        RationalFunction {
            num,
            den_roots: Vec::new(),
        }
    }

    /// λ^power / ∏ (λ − rᵢ)^{mᵢ}
    pub fn monomial_over(power: usize, den_roots: &[(Complex64, usize)]) -> Self {
        RationalFunction::new(Poly::monomial(power, c(1.0, 0.0)), den_roots.to_vec())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn den_roots(&self) -> &[(Complex64, usize)] {
        &self.den_roots
    }

    pub fn den_poly(&self) -> Poly {
        Poly::from_roots(&self.den_roots)
    }

    pub fn num_degree(&self) -> usize {
        self.num.degree().unwrap_or(0)
    }

    pub fn den_degree(&self) -> usize {
        self.den_roots.iter().map(|&(_, m)| m).sum()
    }

    /// Multiplicity of λ₀ as a denominator root (0 if it is none).
    pub fn den_multiplicity_at(&self, lambda0: Complex64) -> usize {
        self.den_roots
            .iter()
            .find(|(r, _)| (*r - lambda0).norm() < 1e-10 * (1.0 + lambda0.norm()))
            .map(|&(_, m)| m)
            .unwrap_or(0)
    }

    fn nearest_pole(&self, lambda: Complex64) -> Option<(Complex64, f64)> {
        self.den_roots
            .iter()
            .map(|&(r, _)| (r, (r - lambda).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    pub fn eval(&self, lambda: Complex64) -> FgResult<Complex64> {
        if let Some((pole, dist)) = self.nearest_pole(lambda) {
            if dist < 1e-12 * (1.0 + lambda.norm()) {
                return Err(FgError::EvaluationAtPole { lambda, pole });
            }
        }
        let mut den = c(1.0, 0.0);
        for &(r, m) in &self.den_roots {
            den *= (lambda - r).powu(m as u32);
        }
        Ok(self.num.eval(lambda) / den)
    }

    pub fn derivative(&self) -> RationalFunction {
        // Logarithmic differentiation against the factored denominator:
        // f'/f = N'/N − Σ mᵢ/(λ−rᵢ), cleared over ∏(λ−rᵢ)^{mᵢ+1} so the
        // common ∏(λ−rᵢ)^{mᵢ−1} factor never enters the numerator.
        let squarefree: Vec<(Complex64, usize)> =
            self.den_roots.iter().map(|&(r, _)| (r, 1)).collect();
        let l = Poly::from_roots(&squarefree);
        let mut weighted_cofactors = Poly::zero();
        for (i, &(_, m)) in self.den_roots.iter().enumerate() {
            let mut reduced = squarefree.clone();
            reduced[i].1 = 0;
            let cofactor = Poly::from_roots(&reduced);
            weighted_cofactors = weighted_cofactors.add(&cofactor.scale(c(m as f64, 0.0)));
        }
        let num = self
            .num
            .derivative()
            .mul(&l)
            .sub(&self.num.mul(&weighted_cofactors));
        let den = self
            .den_roots
            .iter()
            .map(|&(r, m)| (r, m + 1))
            .collect::<Vec<_>>();
        RationalFunction::new(num, den)
    }

    /// First `count` Taylor coefficients at a regular point λ₀.
    pub fn taylor_jet(&self, lambda0: Complex64, count: usize) -> FgResult<Vec<Complex64>> {
        if let Some((pole, dist)) = self.nearest_pole(lambda0) {
            if dist < 1e-12 * (1.0 + lambda0.norm()) {
                return Err(FgError::EvaluationAtPole {
                    lambda: lambda0,
                    pole,
                });
            }
        }
        let num_series: Vec<Complex64> = self.num.shift(lambda0).coeffs().to_vec();
        let den_series: Vec<Complex64> = self.den_poly().shift(lambda0).coeffs().to_vec();
        let inv = series_inverse(&den_series, count);
        Ok(series_mul(&num_series, &inv, count))
    }

    /// Laurent window at λ₀: returns (start, coeffs) with
    /// f = Σ_k coeffs[k] · (λ−λ₀)^{start + k}. `start = −m` when λ₀ is a
    /// denominator root of multiplicity m (leading coefficients may still be
    /// numerically zero if the numerator vanishes there), 0 otherwise.
    pub fn laurent_jet(&self, lambda0: Complex64, count: usize) -> (i64, Vec<Complex64>) {
        let m = self.den_multiplicity_at(lambda0);
        if m == 0 {
            let coeffs = self
                .taylor_jet(lambda0, count)
                .expect("regular point has a Taylor expansion");
            return (0, coeffs);
        }
        let reduced: Vec<(Complex64, usize)> = self
            .den_roots
            .iter()
            .filter(|(r, _)| (*r - lambda0).norm() >= 1e-10 * (1.0 + lambda0.norm()))
            .cloned()
            .collect();
        let cleared = RationalFunction::new(self.num.clone(), reduced);
        let coeffs = cleared
            .taylor_jet(lambda0, count)
            .expect("cleared form is regular at the pole");
        (-(m as i64), coeffs)
    }

    /// Laurent window at λ = ∞: returns (top, coeffs) with
    /// f = Σ_k coeffs[k] · λ^{top − k}.
    pub fn laurent_at_infinity(&self, count: usize) -> (i64, Vec<Complex64>) {
        if self.num.is_zero() {
            return (0, vec![c(0.0, 0.0); count]);
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den_degree() as i64;
        // In μ = 1/λ: f = μ^{dd−dn} · rev(num)(μ) / rev(den)(μ), and rev(den)
        // has unit constant term because the denominator is monic.
        let mut rev_num: Vec<Complex64> = self.num.coeffs().to_vec();
        rev_num.reverse();
        let mut rev_den: Vec<Complex64> = self.den_poly().coeffs().to_vec();
        rev_den.reverse();
        let inv = series_inverse(&rev_den, count);
        let series = series_mul(&rev_num, &inv, count);
        (dn - dd, series)
    }

    /// True if f stays bounded as λ → ∞.
    pub fn bounded_at_infinity(&self) -> bool {
        self.num.is_zero() || self.num.degree().unwrap() <= self.den_degree()
    }

    pub fn residue_at(&self, pole: Complex64) -> Complex64 {
        let m = self.den_multiplicity_at(pole);
        if m == 0 {
            return c(0.0, 0.0);
        }
        let (start, coeffs) = self.laurent_jet(pole, m);
        // Coefficient of (λ−λ₀)^{−1} sits at index −1 − start.
        let idx = (-1 - start) as usize;
        coeffs.get(idx).copied().unwrap_or_else(|| c(0.0, 0.0))
    }

    /// Residue of f·dλ at λ = ∞, i.e. −[λ^{−1}] f.
    pub fn residue_at_infinity(&self) -> Complex64 {
        let (top, coeffs) = {
            let (top, _) = self.laurent_at_infinity(1);
            let count = (top + 2).max(1) as usize;
            self.laurent_at_infinity(count)
        };
        if top < -1 {
            return c(0.0, 0.0);
        }
        let idx = (top + 1) as usize;
        -coeffs.get(idx).copied().unwrap_or_else(|| c(0.0, 0.0))
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFunction {
        RationalFunction::new(self.num.mul(p), self.den_roots.clone())
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        let mut roots = self.den_roots.clone();
        roots.extend_from_slice(&other.den_roots);
        RationalFunction::new(self.num.mul(&other.num), roots)
    }

    pub fn scale(&self, factor: Complex64) -> RationalFunction {
        RationalFunction::new(self.num.scale(factor), self.den_roots.clone())
    }

    /// Sum with another rational function (denominators combined exactly by
    /// taking the union of factored roots with max multiplicity).
    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        let mut union: Vec<(Complex64, usize)> = self.den_roots.clone();
        for &(r, m) in &other.den_roots {
            match union.iter_mut().find(|(s, _)| (*s - r).norm() < 1e-13) {
                Some((_, existing)) => *existing = (*existing).max(m),
                None => union.push((r, m)),
            }
        }
        let cofactor = |own: &[(Complex64, usize)]| -> Poly {
            let extra: Vec<(Complex64, usize)> = union
                .iter()
                .map(|&(r, m)| {
                    let have = own
                        .iter()
                        .find(|(s, _)| (*s - r).norm() < 1e-13)
                        .map(|&(_, mm)| mm)
                        .unwrap_or(0);
                    (r, m - have)
                })
                .collect();
            Poly::from_roots(&extra)
        };
        let num = self
            .num
            .mul(&cofactor(&self.den_roots))
            .add(&other.num.mul(&cofactor(&other.den_roots)));
        RationalFunction::new(num, union)
    }
}

/// Marked ends of the completed curve in the fixed normalization:
/// `PlusEnd` is λ = ∞ (local parameter k₊ = αλ), `MinusEnd` is λ = 0
/// (local parameter k₋ = β/λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveEnd {
    PlusEnd,
    MinusEnd,
}

/// Principal part of a differential at a marked end, expressed in the local
/// parameter k of that end: ω = Σ_{j≤order} coeff[j] · k^j dk^{−1} + regular,
/// listed as coeffs[0] = c_order, …, coeffs[order−1] = c_1. The c_1 entry is
/// exactly the residue at the end.
#[derive(Debug, Clone)]
pub struct PrincipalPart {
    pub order: usize,
    pub coeffs: Vec<Complex64>,
}

impl PrincipalPart {
    pub fn leading(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or_else(|| c(0.0, 0.0))
    }

    pub fn residue(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_else(|| c(0.0, 0.0))
    }
}

/// Differential ω = f(λ) dλ on the rational curve.
#[derive(Debug, Clone)]
pub struct RationalDifferential {
    pub f: RationalFunction,
}

impl RationalDifferential {
    pub fn new(f: RationalFunction) -> Self {
        RationalDifferential { f }
    }

    pub fn residue_at(&self, pole: Complex64) -> Complex64 {
        self.f.residue_at(pole)
    }

    pub fn residue_at_infinity(&self) -> Complex64 {
        self.f.residue_at_infinity()
    }

    /// Sum of residues over every pole including λ = ∞; identically zero in
    /// exact arithmetic, so the magnitude measures rounding.
    pub fn total_residue(&self) -> Complex64 {
        let mut acc = self.residue_at_infinity();
        for &(r, _) in self.f.den_roots() {
            acc += self.f.residue_at(r);
        }
        acc
    }

    /// Principal part at a marked end in the end's own parameter, up to
    /// k^order dk^{−1}. Fails with `PoleOrderExceeded` if the differential has
    /// a deeper pole there (relative threshold `tol` against the retained
    /// coefficients).
    pub fn principal_part(
        &self,
        end: CurveEnd,
        alpha: Complex64,
        beta: Complex64,
        order: usize,
        tol: f64,
    ) -> FgResult<PrincipalPart> {
        match end {
            CurveEnd::PlusEnd => {
                // ω near λ=∞: f = Σ a_j λ^j  ⟹  c_m = −a_{m−2} · α^{1−m}.
                let (top, coeffs) = self.f.laurent_at_infinity(32);
                let a = |j: i64| -> Complex64 {
                    if j > top {
                        return c(0.0, 0.0);
                    }
                    let idx = (top - j) as usize;
                    coeffs.get(idx).copied().unwrap_or_else(|| c(0.0, 0.0))
                };
                let scale: f64 = (0..order as i64 + 4)
                    .map(|s| a(top - s).norm())
                    .fold(0.0, f64::max)
                    .max(1e-300);
                if top + 2 > order as i64 {
                    for j in (order as i64 - 1)..=top {
                        if a(j).norm() > tol * scale {
                            return Err(FgError::PoleOrderExceeded {
                                location: "plus end (λ = ∞)".to_string(),
                                actual: (j + 2) as usize,
                                allowed: order,
                            });
                        }
                    }
                }
                let cs = (1..=order)
                    .rev()
                    .map(|m| -a(m as i64 - 2) * alpha.powi(1 - m as i32))
                    .collect();
                Ok(PrincipalPart { order, coeffs: cs })
            }
            CurveEnd::MinusEnd => {
                // ω near λ=0: f = Σ b_j λ^j  ⟹  c_m = b_{−m} · β^{1−m}.
                let (start, coeffs) = self.f.laurent_jet(c(0.0, 0.0), 32);
                let b = |j: i64| -> Complex64 {
                    if j < start {
                        return c(0.0, 0.0);
                    }
                    let idx = (j - start) as usize;
                    coeffs.get(idx).copied().unwrap_or_else(|| c(0.0, 0.0))
                };
                let scale: f64 = (0..order as i64 + 4)
                    .map(|s| b(start + s).norm())
                    .fold(0.0, f64::max)
                    .max(1e-300);
                if start < -(order as i64) {
                    for j in start..-(order as i64) {
                        if b(j).norm() > tol * scale {
                            return Err(FgError::PoleOrderExceeded {
                                location: "minus end (λ = 0)".to_string(),
                                actual: (-j) as usize,
                                allowed: order,
                            });
                        }
                    }
                }
                let cs = (1..=order)
                    .rev()
                    .map(|m| b(-(m as i64)) * beta.powi(1 - m as i32))
                    .collect();
                Ok(PrincipalPart { order, coeffs: cs })
            }
        }
    }
}
