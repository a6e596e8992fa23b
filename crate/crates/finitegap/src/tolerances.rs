/// Numerical thresholds used across validation, solving and verification.
///
/// Every check in the crate routes through one of these knobs so a caller can
/// tighten or relax them coherently in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative bound for operator / equation residuals.
    pub residual: f64,
    /// Relative singular-value cutoff for rank decisions and certificate
    /// feasibility.
    pub certificate_rank: f64,
    /// Condition-number cutoff beyond which a gluing system is rejected.
    pub condition_cutoff: f64,
    /// Absolute distance under which two marked points count as coinciding.
    pub coincidence: f64,
    /// Relative bound for gluing (descent) conditions of a solved wave.
    pub descent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-8,
            certificate_rank: 1e-10,
            condition_cutoff: 1e12,
            coincidence: 1e-9,
            descent: 1e-10,
        }
    }
}
