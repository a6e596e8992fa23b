use num_complex::Complex64;

use crate::error::{FgError, FgResult};
use crate::tolerances::Tolerances;

/// Point of the completed rational curve ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjPoint {
    Finite(Complex64),
    Infinity,
}

impl ProjPoint {
    pub fn finite(re: f64, im: f64) -> Self {
        ProjPoint::Finite(Complex64::new(re, im))
    }
}

/// Holomorphic involution λ ↦ −λ (fixes 0 and ∞, swaps the sheets of k²).
pub fn sigma_image(p: ProjPoint) -> ProjPoint {
    match p {
        ProjPoint::Finite(z) => ProjPoint::Finite(-z),
        ProjPoint::Infinity => ProjPoint::Infinity,
    }
}

/// Antiholomorphic involution λ ↦ t/λ̄ (fixes the circle |λ|² = t when t > 0,
/// exchanges 0 and ∞).
pub fn tau_image(t: f64, p: ProjPoint) -> ProjPoint {
    match p {
        ProjPoint::Finite(z) => {
            if z.norm() == 0.0 {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(Complex64::new(t, 0.0) / z.conj())
            }
        }
        ProjPoint::Infinity => ProjPoint::Finite(Complex64::new(0.0, 0.0)),
    }
}

/// One gluing class: a set of finite points identified to a single curve
/// point, each carrying the order to which functions must agree there
/// (multiplicity 1 = value matching only; multiplicity n additionally pins
/// the λ-jets of orders 1…n−1).
#[derive(Debug, Clone)]
pub struct GluingClass {
    members: Vec<(Complex64, usize)>,
}

impl GluingClass {
    pub fn new(members: Vec<(Complex64, usize)>) -> FgResult<Self> {
        if members.is_empty() {
            return Err(FgError::InvalidRequest {
                reason: "gluing class has no members".to_string(),
            });
        }
        if members.iter().any(|&(_, m)| m == 0) {
            return Err(FgError::InvalidRequest {
                reason: "gluing class member with multiplicity 0".to_string(),
            });
        }
        let total: usize = members.iter().map(|&(_, m)| m).sum();
        if total < 2 {
            return Err(FgError::InvalidRequest {
                reason: "gluing class must carry total multiplicity ≥ 2".to_string(),
            });
        }
        let tol = Tolerances::default().coincidence;
        for (i, &(a, _)) in members.iter().enumerate() {
            if a.norm() <= tol {
                return Err(FgError::DegenerateConfig {
                    reason: format!("gluing point {a} coincides with the marked point λ = 0"),
                });
            }
            for &(b, _) in &members[..i] {
                if (a - b).norm() <= tol {
                    return Err(FgError::DegenerateConfig {
                        reason: format!("gluing points {a} and {b} coincide"),
                    });
                }
            }
        }
        Ok(GluingClass { members })
    }

    pub fn simple(points: &[Complex64]) -> FgResult<Self> {
        GluingClass::new(points.iter().map(|&p| (p, 1)).collect())
    }

    pub fn members(&self) -> &[(Complex64, usize)] {
        &self.members
    }

    pub fn total_multiplicity(&self) -> usize {
        self.members.iter().map(|&(_, m)| m).sum()
    }

    /// Contribution δ = (Σ multiplicities) − 1 to the arithmetic genus; also
    /// the number of linear conditions the class imposes.
    pub fn delta(&self) -> usize {
        self.total_multiplicity() - 1
    }
}

/// Spectral data of the curve: the exponential weights at the two marked
/// ends plus the gluing classes, with optional symmetry declarations.
#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub classes: Vec<GluingClass>,
    /// Declares the holomorphic symmetry λ ↦ −λ.
    pub sigma: bool,
    /// Declares the antiholomorphic symmetry λ ↦ t/λ̄ with this t.
    pub tau: Option<f64>,
}

impl CurveSpec {
    pub fn plain(alpha: Complex64, beta: Complex64, classes: Vec<GluingClass>) -> Self {
        CurveSpec {
            alpha,
            beta,
            classes,
            sigma: false,
            tau: None,
        }
    }

    pub fn arithmetic_genus(&self) -> usize {
        self.classes.iter().map(|c| c.delta()).sum()
    }

    /// All gluing points across every class.
    pub fn support(&self) -> Vec<(Complex64, usize)> {
        self.classes
            .iter()
            .flat_map(|c| c.members().iter().copied())
            .collect()
    }
}

/// Pole divisor of the wave-function prefactor: finite points away from 0
/// with multiplicities.
#[derive(Debug, Clone)]
pub struct PoleDivisor {
    entries: Vec<(Complex64, usize)>,
}

impl PoleDivisor {
    pub fn new(entries: Vec<(Complex64, usize)>) -> FgResult<Self> {
        let tol = Tolerances::default().coincidence;
        for (i, &(a, m)) in entries.iter().enumerate() {
            if m == 0 {
                return Err(FgError::InvalidRequest {
                    reason: "divisor entry with multiplicity 0".to_string(),
                });
            }
            if a.norm() <= tol {
                return Err(FgError::DegenerateConfig {
                    reason: "divisor point at the marked point λ = 0".to_string(),
                });
            }
            for &(b, _) in &entries[..i] {
                if (a - b).norm() <= tol {
                    return Err(FgError::DegenerateConfig {
                        reason: format!("divisor points {a} and {b} coincide"),
                    });
                }
            }
        }
        Ok(PoleDivisor { entries })
    }

    pub fn simple(points: &[Complex64]) -> FgResult<Self> {
        PoleDivisor::new(points.iter().map(|&p| (p, 1)).collect())
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }
}

/// Outcome of admissibility checking: empty = admissible.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check a spectral-data/divisor pair against every structural rule:
/// nondegenerate weights, disjoint supports, divisor placement, degree
/// bookkeeping, and the declared symmetries.
pub fn validate(
    spec: &CurveSpec,
    divisor: Option<&PoleDivisor>,
    tol: &Tolerances,
) -> ValidationReport {
    let mut violations = Vec::new();
    let coin = tol.coincidence;

    for (name, v) in [("alpha", spec.alpha), ("beta", spec.beta)] {
        if !v.re.is_finite() || !v.im.is_finite() {
            violations.push(format!("{name} is not finite"));
        } else if v.norm() <= coin {
            violations.push(format!("{name} must be nonzero"));
        }
    }

    let support = spec.support();
    for (i, &(a, _)) in support.iter().enumerate() {
        for &(b, _) in &support[..i] {
            if (a - b).norm() <= coin {
                violations.push(format!(
                    "gluing point {a} appears in more than one class (or twice in one)"
                ));
            }
        }
    }

    if spec.sigma && !spec.classes.is_empty() {
        violations.push(
            "σ-symmetry with nonempty gluing support is impossible on a rational curve: \
             λ ↦ −λ fixes only the two marked points, so no singular support is σ-stable"
                .to_string(),
        );
    }

    if let Some(t) = spec.tau {
        let expected_beta = -spec.alpha.conj() * t;
        let scale = spec.alpha.norm().max(spec.beta.norm()).max(1e-300);
        if (spec.beta - expected_beta).norm() > 1e-9 * scale {
            violations.push(format!(
                "τ-symmetry with t = {t} requires beta = −conj(alpha)·t; got beta = {}",
                spec.beta
            ));
        }
        for &(w, _) in &support {
            if (w.norm_sqr() - t).abs() > 1e-9 * (1.0 + t.abs()) {
                violations.push(format!(
                    "gluing point {w} is not fixed by τ: |λ|² = {} differs from t = {t}",
                    w.norm_sqr()
                ));
            }
        }
        if let Some(div) = divisor {
            for &(p, m) in div.entries() {
                let image = Complex64::new(t, 0.0) / p.conj();
                let hit = div
                    .entries()
                    .iter()
                    .any(|&(q, mq)| (q - image).norm() <= 1e-9 * (1.0 + image.norm()) && mq == m);
                if !hit {
                    violations.push(format!(
                        "divisor is not τ-invariant: image {image} of {p} is missing"
                    ));
                }
            }
        }
    }

    if let Some(div) = divisor {
        let g = spec.arithmetic_genus();
        let deg = div.degree();
        if deg != g && deg != g + 1 {
            violations.push(format!(
                "divisor degree {deg} matches neither p_a = {g} (second-order operator) \
                 nor p_a + 1 = {} (first-order system)",
                g + 1
            ));
        }
        for &(p, _) in div.entries() {
            for &(w, _) in &support {
                if (p - w).norm() <= 10.0 * coin {
                    violations.push(format!(
                        "divisor point {p} collides with gluing point {w}"
                    ));
                }
            }
        }
    }

    ValidationReport { violations }
}
