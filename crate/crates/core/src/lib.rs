//! Explicit calibrations for the thermal insulation functional.
//!
//! The crate evaluates the closed-form radial potentials and energies of the
//! problem posed around the unit ball, builds the piecewise calibration
//! fields that certify minimality, checks the calibration axioms on grids,
//! and provides brute-force baselines that cross-check every criterion
//! without using the calibration machinery.
//!
//! Module map:
//!
//! * [`potentials`]: `Γ`, the Robin trace `δ(R)`, the radial profile and the
//!   interface curve `ρ`;
//! * [`energy`]: one-dimensional and radial energies, critical radii;
//! * [`fields`]: the calibration constructions as evaluable objects;
//! * [`verifier`]: grid certification of the axioms;
//! * [`oracle`]: independent brute-force searches;
//! * [`export`]: CSV/JSON emission shared by the CLI and the web demo.

pub mod energy;
pub mod error;
pub mod export;
pub mod fields;
pub mod oracle;
pub mod phase;
pub mod potentials;
pub mod verifier;

mod grid;

pub use energy::{Competitor1D, EnergyBreakdown, RadialProfile, ThermalParams};
pub use error::{CalxError, Result};
pub use fields::{Field, PiecewiseField};
pub use potentials::Dimension;
pub use verifier::{verify_all, VerificationReport, VerifyConfig};
