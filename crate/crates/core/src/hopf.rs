//! Normal-form coefficient `b` of the Hopf bifurcation, criticality class,
//! and the rhythmic profile predicted by the leading eigenvector.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{self, serde_c64, serde_cvec, CVector};
use crate::criticality::{CriticalAnalysis, CriticalPoint};
use crate::error::{Error, Result};
use crate::jacobian::ModelParams;
use crate::spectral::{biorthogonal_pair, AdjacencySpec, Spectrum};

pub const DEFAULT_B_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criticality {
    Supercritical,
    Subcritical,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CommonProfile {
    Full,
    Proportional,
    Switching,
    Shifting,
    General,
}

/// Amplitudes and phases `sigma_j e^{i phi_j}` of `x_j ~ sigma_j cos(omega t + phi_j)`.
/// In relative form the reference (largest, lowest index on ties) entry is `1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhythmicProfile {
    #[serde(with = "serde_cvec")]
    pub entries: CVector,
    pub reference_index: usize,
    pub relative: bool,
}

impl RhythmicProfile {
    /// Relative profile of arbitrary complex amplitudes.
    pub fn relative_from(z: &[Complex64]) -> Self {
        let reference_index = complex::dominant_index(z, 1e-12);
        let entries = complex::gauge_fix(z);
        RhythmicProfile {
            entries,
            reference_index,
            relative: true,
        }
    }

    /// Builds a relative profile from amplitudes and phases (radians).
    pub fn from_polar(amplitudes: &[f64], phases: &[f64]) -> Self {
        let z: CVector = amplitudes
            .iter()
            .zip(phases)
            .map(|(&r, &t)| Complex64::from_polar(r, t))
            .collect();
        Self::relative_from(&z)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    /// Phases in `(-pi, pi]`; positive means the node leads the reference.
    pub fn phases(&self) -> Vec<f64> {
        self.entries.iter().map(|z| complex::wrap_angle(z.arg())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfReport {
    pub b: f64,
    pub criticality: Criticality,
    pub omega: f64,
    pub period: f64,
    pub predicted_profile: RhythmicProfile,
    pub profile_class: CommonProfile,
    /// `eps / (eps + nu_1^+)`: relative amplitude and phase of `y_j` against `x_j`.
    #[serde(with = "serde_c64")]
    pub y_modulation: Complex64,
}

fn c_factor(nu: Complex64, eps: f64) -> Complex64 {
    1.0 - nu + eps / (eps - nu)
}

/// Normal-form coefficient `b` for the leading pair at a critical point.
///
/// `v_x` is the left eigenvector of `mu1`, `w_x` the conjugate of its right
/// eigenvector, rescaled so the lifted pair satisfies `conj(v)^t w = 2`.
pub fn lyapunov_b(
    p_at_critical: &ModelParams,
    crit: &CriticalPoint,
    spec: &Spectrum,
) -> Result<f64> {
    let eps = p_at_critical.eps;
    let nu = Complex64::new(0.0, crit.omega);
    let pair = biorthogonal_pair(spec, crit.mu1, nu, eps)?;
    let cubic: CVector = pair.w_x.iter().map(|w| w * w * w.conj()).collect();
    let ip = complex::inner(&pair.v_x, &cubic);
    let c = c_factor(nu, eps);
    Ok(c.norm_sqr() * p_at_critical.sigmoid.s3_at_zero() * (c * ip).re / 16.0)
}

/// Closed form of `b` for a modulus-homogeneous leading eigenvector with
/// `|w_j| = 1`.
pub fn lyapunov_b_homogeneous(eps: f64, omega: f64, s3_at_zero: f64) -> f64 {
    let nu = Complex64::new(0.0, omega);
    let c = c_factor(nu, eps);
    let d2 = (eps - nu).powi(2);
    c.norm_sqr() * s3_at_zero * (c * d2 / (d2 - eps)).re / 8.0
}

pub fn classify(b: f64) -> Criticality {
    classify_with_tol(b, DEFAULT_B_TOL)
}

pub fn classify_with_tol(b: f64, b_tol: f64) -> Criticality {
    if b < -b_tol {
        Criticality::Supercritical
    } else if b > b_tol {
        Criticality::Subcritical
    } else {
        Criticality::Degenerate
    }
}

/// Relative profile of the leading right eigenvector and the period `2 pi / omega`.
pub fn predict_profile(w1: &[Complex64], omega: f64) -> (RhythmicProfile, f64) {
    (RhythmicProfile::relative_from(w1), 2.0 * PI / omega)
}

pub fn predict_y_modulation(eps: f64, nu_plus: Complex64) -> Result<Complex64> {
    let d = eps + nu_plus;
    if d.norm() == 0.0 {
        return Err(Error::SingularInput("y modulation undefined at nu = -eps".into()));
    }
    Ok(eps / d)
}

fn phase_near(theta: f64, target: f64, tol: f64) -> bool {
    complex::wrap_angle(theta - target).abs() <= tol
}

/// Most specific common class: Full, then Switching, Proportional, Shifting.
pub fn classify_common_profile_with(
    profile: &RhythmicProfile,
    amp_tol: f64,
    phase_tol: f64,
) -> CommonProfile {
    let unit = profile.amplitudes().iter().all(|r| (r - 1.0).abs() <= amp_tol);
    let phases = profile.phases();
    let in_phase = phases.iter().all(|&t| phase_near(t, 0.0, phase_tol));
    let binary = phases
        .iter()
        .all(|&t| phase_near(t, 0.0, phase_tol) || phase_near(t, PI, phase_tol));
    match (unit, in_phase, binary) {
        (true, true, _) => CommonProfile::Full,
        (true, false, true) => CommonProfile::Switching,
        (false, true, _) => CommonProfile::Proportional,
        (true, false, false) => CommonProfile::Shifting,
        _ => CommonProfile::General,
    }
}

pub fn classify_common_profile(profile: &RhythmicProfile, tol: f64) -> CommonProfile {
    classify_common_profile_with(profile, tol, tol)
}

/// Hopf report for a certified critical point of `a`.
pub fn predict(a: &AdjacencySpec, analysis: &CriticalAnalysis) -> Result<HopfReport> {
    predict_with(analysis, &analysis.point.params(), a.tol.modulus_homog_tol)
}

/// As [`predict`], with an explicit parameter set (for a custom sigmoid).
pub fn predict_with(
    analysis: &CriticalAnalysis,
    p_at_critical: &ModelParams,
    class_tol: f64,
) -> Result<HopfReport> {
    let point = &analysis.point;
    if !point.is_certified() {
        return Err(Error::PreconditionViolation(format!(
            "critical point is not certified (transversality {:e}, dominance margin {:?})",
            point.transversality, point.dominance_margin
        )));
    }
    let b = lyapunov_b(p_at_critical, point, &analysis.spectrum)?;
    let (predicted_profile, period) = predict_profile(&analysis.leading.w1, point.omega);
    let profile_class = classify_common_profile(&predicted_profile, class_tol.max(1e-9));
    let y_modulation = predict_y_modulation(point.eps, Complex64::new(0.0, point.omega))?;
    Ok(HopfReport {
        b,
        criticality: classify(b),
        omega: point.omega,
        period,
        predicted_profile,
        profile_class,
        y_modulation,
    })
}
