//! Analysis and design of collective rhythms in networks of coupled
//! fast-slow mixed-feedback oscillators
//!
//! ```text
//! x_j' = -x_j - y_j + S(alpha x_j + beta sum_k A_jk x_k)
//! y_j' = eps (x_j - y_j)
//! ```
//!
//! The origin loses stability through a Hopf bifurcation driven by the
//! leading eigenvalue of `A`; the emerging rhythm is shaped by the leading
//! eigenvector. The crate covers the spectral map between `A` and the
//! linearization, critical parameter values, the normal-form coefficient,
//! simulation, measurement of rhythmic profiles and inverse design of `A`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod complex;
pub mod criticality;
pub mod design;
pub mod error;
pub mod extract;
pub mod hopf;
pub mod jacobian;
pub mod manifest;
pub mod pipeline;
pub mod simulate;
pub mod spectral;

pub use error::{Error, Result};
pub use jacobian::{AssociatedPair, ModelParams, SigmoidSpec};
pub use spectral::{AdjacencySpec, EigenTriple, LeadingInfo, LeadingKind, SpectralTolerances, Spectrum};
pub use criticality::{CriticalParam, CriticalPoint};
pub use hopf::{CommonProfile, Criticality, HopfReport, RhythmicProfile};
pub use simulate::{InitialCondition, SimConfig, TimeSeries};
pub use extract::{ExtractionConfig, MeasuredRhythm};
pub use design::{DesignMode, DesignTarget, DesignValidation};
pub use manifest::RunManifest;
pub use pipeline::{Hold, VerifyConfig, VerifyReport};
