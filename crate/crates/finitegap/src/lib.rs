//! Finite-gap constructions on singular rational spectral curves.
//!
//! A configuration here is a rational curve (the λ-sphere) with finitely many
//! points glued into singular classes, two marked points ∞₊ (λ = ∞) and ∞₋
//! (λ = 0), and exponential weights attached to the marked points. Wave
//! functions are rational in λ apart from the weight e^{αλz + (β/λ)z̄}; the
//! gluing conditions descend them to the singular curve and pin them down up
//! to finitely many coefficients that a small linear system determines at
//! each point (x, y) of the physical plane.
//!
//! From one such solve the crate extracts:
//!
//! * two-dimensional Schrödinger data — a potential u and magnetic term A
//!   with (∂∂̄ + A∂̄ + u)ψ = 0 ([`solve_schrodinger`]),
//! * Dirac data — a two-component spinor with potential coefficients U, V
//!   ([`solve_dirac`]),
//! * certificate differentials whose principal parts and residues witness
//!   symmetry constraints on the potentials ([`find_certificate`]),
//! * dimension counts for function and differential spaces on the singular
//!   curve, with the index identity checked exactly ([`rr_report`]),
//! * one-dimensional degenerations recovering the classical rational and
//!   soliton potentials ([`solve_oned`]).
//!
//! Everything is verified numerically: descent violations, operator
//! residuals, residue sums, and principal parts all come with computable
//! relative measures and configurable [`Tolerances`].

pub mod certificates;
pub mod curve;
pub mod dirac;
pub mod error;
pub mod exponential;
pub mod gluing;
pub mod grid;
pub mod linalg;
pub mod oned;
pub mod poly;
pub mod rational;
pub mod rr;
pub mod sampling;
pub mod schrodinger;
pub mod tolerances;

pub use certificates::{
    assert_consequences, find_certificate, sigma_pairing_total_residue,
    tau_pairing_total_residue, verify_certificate, Certificate, CertificateCheck,
    CertificateKind, CertificateOutcome, ConsequenceReport, VerificationReport,
};
pub use curve::{
    sigma_image, tau_image, validate, CurveSpec, GluingClass, PoleDivisor, ProjPoint,
    ValidationReport,
};
pub use dirac::{dirac_field, solve_dirac, DiracSample, DiracSolution};
pub use error::{FgError, FgResult};
pub use exponential::ExponentialCore;
pub use grid::Grid;
pub use oned::{solve_oned, OneDFamily, OneDSolution};
pub use poly::Poly;
pub use rational::{CurveEnd, PrincipalPart, RationalDifferential, RationalFunction};
pub use rr::{
    divisor_degree, function_space_dim, regular_differential_dim, rr_report, RrDivisor, RrReport,
};
pub use sampling::InstanceSampler;
pub use schrodinger::{potential_field, solve_schrodinger, PotentialSample, SchrodingerSolution};
pub use tolerances::Tolerances;
