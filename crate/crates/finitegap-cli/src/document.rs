//! JSON document schema for configuration files and divisor arguments.

use num_complex::Complex64;
use serde::Deserialize;

use finitegap::{
    CurveSpec, FgResult, GluingClass, Grid, PoleDivisor, ProjPoint, RrDivisor, Tolerances,
};

fn default_multiplicity() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub lambda: [f64; 2],
    #[serde(default = "default_multiplicity")]
    pub multiplicity: usize,
}

impl PointEntry {
    fn value(&self) -> Complex64 {
        Complex64::new(self.lambda[0], self.lambda[1])
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub points: Vec<PointEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceEntry {
    pub residual: Option<f64>,
    pub certificate_rank: Option<f64>,
    pub condition_cutoff: Option<f64>,
    pub coincidence: Option<f64>,
    pub descent: Option<f64>,
}

/// Root schema of a configuration document.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    #[serde(default)]
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub poles: Vec<PointEntry>,
    #[serde(default)]
    pub sigma: bool,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub grid: Option<GridEntry>,
    #[serde(default)]
    pub tolerances: Option<ToleranceEntry>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl SpecDocument {
    pub fn parse(raw: &str) -> Result<Self, String> {
        serde_json::from_str(raw).map_err(|e| format!("configuration document: {e}"))
    }

    pub fn curve_spec(&self) -> FgResult<CurveSpec> {
        let mut classes = Vec::with_capacity(self.classes.len());
        for entry in &self.classes {
            let members = entry
                .points
                .iter()
                .map(|p| (p.value(), p.multiplicity))
                .collect();
            classes.push(GluingClass::new(members)?);
        }
        Ok(CurveSpec {
            alpha: Complex64::new(self.alpha[0], self.alpha[1]),
            beta: Complex64::new(self.beta[0], self.beta[1]),
            classes,
            sigma: self.sigma,
            tau: self.tau,
        })
    }

    pub fn pole_divisor(&self) -> FgResult<PoleDivisor> {
        PoleDivisor::new(
            self.poles
                .iter()
                .map(|p| (p.value(), p.multiplicity))
                .collect(),
        )
    }

    pub fn grid(&self) -> Grid {
        match &self.grid {
            Some(g) => Grid {
                x_min: g.x_min,
                x_max: g.x_max,
                y_min: g.y_min,
                y_max: g.y_max,
                nx: g.nx,
                ny: g.ny,
            },
            None => Grid::default(),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(t) = &self.tolerances {
            if let Some(v) = t.residual {
                tol.residual = v;
            }
            if let Some(v) = t.certificate_rank {
                tol.certificate_rank = v;
            }
            if let Some(v) = t.condition_cutoff {
                tol.condition_cutoff = v;
            }
            if let Some(v) = t.coincidence {
                tol.coincidence = v;
            }
            if let Some(v) = t.descent {
                tol.descent = v;
            }
        }
        tol
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Divisor entries for the dimension-count command; `{"inf": true}` puts
/// multiplicity at the point at infinity.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RrEntryDoc {
    Infinite {
        inf: bool,
        #[serde(default = "default_multiplicity")]
        multiplicity: usize,
    },
    Finite {
        lambda: [f64; 2],
        #[serde(default = "default_multiplicity")]
        multiplicity: usize,
    },
}

pub fn parse_rr_divisor(raw: &str) -> Result<RrDivisor, String> {
    let entries: Vec<RrEntryDoc> =
        serde_json::from_str(raw).map_err(|e| format!("divisor argument: {e}"))?;
    let mut out = RrDivisor::new();
    for entry in entries {
        match entry {
            RrEntryDoc::Infinite { inf, multiplicity } => {
                if !inf {
                    return Err("divisor argument: \"inf\" must be true when present".to_string());
                }
                out.push((ProjPoint::Infinity, multiplicity));
            }
            RrEntryDoc::Finite {
                lambda,
                multiplicity,
            } => {
                out.push((
                    ProjPoint::Finite(Complex64::new(lambda[0], lambda[1])),
                    multiplicity,
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_parses_with_defaults() {
        let doc = SpecDocument::parse(r#"{"alpha": [1.0, 0.0], "beta": [0.5, -0.25]}"#).unwrap();
        assert!(doc.classes.is_empty());
        assert!(!doc.sigma);
        let spec = doc.curve_spec().unwrap();
        assert_eq!(spec.arithmetic_genus(), 0);
        let grid = doc.grid();
        assert_eq!((grid.nx, grid.ny), (21, 21));
        assert_eq!(doc.seed(), 0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(SpecDocument::parse(r#"{"alpha": [1, 0], "beta": [1, 0], "bogus": 3}"#).is_err());
    }

    #[test]
    fn class_and_pole_entries_convert() {
        let doc = SpecDocument::parse(
            r#"{
                "alpha": [1.0, 0.0],
                "beta": [1.0, 0.0],
                "classes": [{"points": [
                    {"lambda": [1.2, -0.7], "multiplicity": 2}
                ]}],
                "poles": [{"lambda": [0.5, 0.9]}],
                "tolerances": {"residual": 1e-6}
            }"#,
        )
        .unwrap();
        let spec = doc.curve_spec().unwrap();
        assert_eq!(spec.arithmetic_genus(), 1);
        assert_eq!(doc.pole_divisor().unwrap().degree(), 1);
        let tol = doc.tolerances();
        assert_eq!(tol.residual, 1e-6);
        assert_eq!(tol.descent, Tolerances::default().descent);
    }

    #[test]
    fn rr_divisor_accepts_infinity_entries() {
        let div =
            parse_rr_divisor(r#"[{"lambda": [0.5, 0.5]}, {"inf": true, "multiplicity": 2}]"#)
                .unwrap();
        assert_eq!(div.len(), 2);
        assert!(matches!(div[1], (ProjPoint::Infinity, 2)));
    }

    #[test]
    fn rr_divisor_rejects_garbage() {
        assert!(parse_rr_divisor(r#"[{"nonsense": 1}]"#).is_err());
    }
}
