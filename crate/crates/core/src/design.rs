//! Inverse design: adjacency matrices whose leading eigenvector realizes a
//! target relative rhythmic profile.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{self, CVector, Cplx};
use crate::error::{Error, Result};
use crate::extract::hausdorff;
use crate::hopf::{predict_profile, RhythmicProfile};
use crate::spectral::{classify_leading, eigendecompose, AdjacencySpec, LeadingInfo, LeadingKind};

const REAL_TOL: f64 = 1e-12;
const MAX_CONDITION: f64 = 1e8;
/// Coupling gain assumed when a desired period fixes `Im(mu1)`.
pub const DEFAULT_PERIOD_BETA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignTarget {
    pub profile: CVector,
    pub leading_eigenvalue: Complex64,
    pub secondary_eigenvalues: Vec<f64>,
    pub desired_period: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TargetJson {
    profile: Vec<Cplx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu1: Option<Cplx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    secondary: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<f64>,
}

fn is_real_profile(w: &[Complex64]) -> bool {
    w.iter().all(|z| z.im.abs() <= REAL_TOL)
}

impl DesignTarget {
    /// Target with default eigenvalues: `mu1 = 1` and secondaries `0` for a
    /// real profile; otherwise `mu1 = 1 + i`, or `u = v` with
    /// `v = 2 pi / (0.5 T)` when a period `T` is requested.
    pub fn new(profile: CVector, desired_period: Option<f64>) -> Result<Self> {
        let n = profile.len();
        let real = is_real_profile(&profile);
        let leading_eigenvalue = if real {
            Complex64::new(1.0, 0.0)
        } else {
            match desired_period {
                Some(t) => {
                    let v = 2.0 * PI / (DEFAULT_PERIOD_BETA * t);
                    Complex64::new(v, v)
                }
                None => Complex64::new(1.0, 1.0),
            }
        };
        let k = if real { 1 } else { 2 };
        let t = DesignTarget {
            secondary_eigenvalues: vec![0.0; n.saturating_sub(k)],
            profile,
            leading_eigenvalue,
            desired_period,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn with_eigenvalues(profile: CVector, mu1: Complex64, secondary: Vec<f64>) -> Result<Self> {
        let t = DesignTarget {
            profile,
            leading_eigenvalue: mu1,
            secondary_eigenvalues: secondary,
            desired_period: None,
        };
        t.validate()?;
        Ok(t)
    }

    /// Unit-amplitude target with the given phases (radians).
    pub fn from_phases(phases: &[f64], mu1: Complex64) -> Result<Self> {
        let profile: CVector = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let k = phases.len().saturating_sub(2);
        Self::with_eigenvalues(profile, mu1, vec![0.0; k])
    }

    /// Real target from signed amplitudes.
    pub fn from_signed_amplitudes(rho: &[f64], mu1: f64) -> Result<Self> {
        let profile: CVector = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        let k = rho.len().saturating_sub(1);
        Self::with_eigenvalues(profile, Complex64::new(mu1, 0.0), vec![0.0; k])
    }

    pub fn n(&self) -> usize {
        self.profile.len()
    }

    pub fn is_real(&self) -> bool {
        is_real_profile(&self.profile)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidInput("empty target profile".into()));
        }
        if self.profile.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("target profile must be finite".into()));
        }
        if (self.profile[0] - 1.0).norm() > REAL_TOL {
            return Err(Error::InvalidInput(format!(
                "first profile entry must be 1, got {}",
                self.profile[0]
            )));
        }
        if let Some(z) = self.profile.iter().find(|z| z.norm() > 1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "relative amplitudes must not exceed 1, got |{z}|"
            )));
        }
        let mu1 = self.leading_eigenvalue;
        if !(mu1.re > 0.0) {
            return Err(Error::InvalidInput(format!("Re(mu1) must be positive, got {mu1}")));
        }
        let real = self.is_real();
        if !real && !(mu1.im > 0.0) {
            return Err(Error::InvalidInput(
                "a non-real profile needs Im(mu1) > 0".into(),
            ));
        }
        let expected = if mu1.im == 0.0 { n - 1 } else { n.saturating_sub(2) };
        if self.secondary_eigenvalues.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.secondary_eigenvalues.len(),
            });
        }
        if let Some(m) = self
            .secondary_eigenvalues
            .iter()
            .find(|&&m| !(m < mu1.re) || !m.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "secondary eigenvalue {m} must lie below Re(mu1) = {}",
                mu1.re
            )));
        }
        if let Some(t) = self.desired_period {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidInput(format!("period must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: TargetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let profile: CVector = j.profile.into_iter().map(Complex64::from).collect();
        if profile.is_empty() {
            return Err(Error::InvalidInput("empty target profile".into()));
        }
        let n = profile.len();
        let mut t = DesignTarget {
            leading_eigenvalue: Complex64::new(1.0, 0.0),
            secondary_eigenvalues: Vec::new(),
            desired_period: j.period,
            profile,
        };
        t.leading_eigenvalue = match j.mu1 {
            Some(m) => m.into(),
            None => DesignTarget::new(t.profile.clone(), j.period)?.leading_eigenvalue,
        };
        let k = if t.leading_eigenvalue.im == 0.0 { n - 1 } else { n.saturating_sub(2) };
        t.secondary_eigenvalues = j.secondary.unwrap_or_else(|| vec![0.0; k]);
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = TargetJson {
            profile: self.profile.iter().map(|&z| z.into()).collect(),
            mu1: Some(self.leading_eigenvalue.into()),
            secondary: Some(self.secondary_eigenvalues.clone()),
            period: self.desired_period,
        };
        serde_json::to_value(j).expect("target serializes")
    }

    pub fn relative_profile(&self) -> RhythmicProfile {
        RhythmicProfile::relative_from(&self.profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMode {
    Amplitude,
    Phase,
    General,
}

impl std::str::FromStr for DesignMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(DesignMode::Amplitude),
            "phase" => Ok(DesignMode::Phase),
            "general" => Ok(DesignMode::General),
            _ => Err(Error::InvalidInput(format!("unknown design mode {s:?}"))),
        }
    }
}

impl DesignMode {
    /// Amplitude for real targets, Phase for unit-amplitude complex targets,
    /// General otherwise.
    pub fn auto(target: &DesignTarget) -> Self {
        if target.is_real() {
            DesignMode::Amplitude
        } else if target.profile.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-9)
            && target.profile.get(1).is_some_and(|z| z.im.abs() > REAL_TOL)
        {
            DesignMode::Phase
        } else {
            DesignMode::General
        }
    }
}

pub fn design(target: &DesignTarget, mode: DesignMode) -> Result<AdjacencySpec> {
    match mode {
        DesignMode::Amplitude => design_amplitude_star(target),
        DesignMode::Phase => design_phase_core(target),
        DesignMode::General => design_general(target),
    }
}

fn check_residual(a: &DMatrix<f64>, w: &[Complex64], mu: Complex64, tol: f64) -> Result<()> {
    let n = w.len();
    let r = (0..n)
        .map(|i| ((0..n).map(|k| w[k] * a[(i, k)]).sum::<Complex64>() - mu * w[i]).norm())
        .fold(0.0, f64::max);
    if r > tol * a.amax().max(1.0) {
        return Err(Error::NumericalFailure(format!(
            "designed matrix misses A w = mu w by {r:e}"
        )));
    }
    Ok(())
}

/// Star matrix with first column `(mu1, w_j (mu1 - mu_j))` and diagonal
/// `(mu1, mu_2, ..)`, for in-phase/anti-phase targets.
pub fn design_amplitude_star(target: &DesignTarget) -> Result<AdjacencySpec> {
    target.validate()?;
    if !target.is_real() {
        return Err(Error::PreconditionViolation(
            "amplitude design needs every phase in {0, pi}".into(),
        ));
    }
    let mu1 = target.leading_eigenvalue;
    if mu1.im != 0.0 {
        return Err(Error::PreconditionViolation(
            "amplitude design needs a real leading eigenvalue".into(),
        ));
    }
    let n = target.n();
    let w: Vec<f64> = target.profile.iter().map(|z| z.re).collect();
    let mut a = DMatrix::zeros(n, n);
    a[(0, 0)] = mu1.re;
    for j in 1..n {
        let mj = target.secondary_eigenvalues[j - 1];
        a[(j, 0)] = w[j] * (mu1.re - mj);
        a[(j, j)] = mj;
    }
    check_residual(&a, &target.profile, mu1, 1e-12)?;
    AdjacencySpec::new(a)
}

/// Two-node-core star for equal-amplitude targets with `theta_2` not in `{0, pi}`.
pub fn design_phase_core(target: &DesignTarget) -> Result<AdjacencySpec> {
    target.validate()?;
    let n = target.n();
    if n < 2 {
        return Err(Error::PreconditionViolation("phase design needs at least two nodes".into()));
    }
    if let Some(z) = target.profile.iter().find(|z| (z.norm() - 1.0).abs() > 1e-9) {
        return Err(Error::PreconditionViolation(format!(
            "phase design needs unit amplitudes, got |{z}|"
        )));
    }
    let w = &target.profile;
    let w2 = w[1];
    if w2.im.abs() <= REAL_TOL {
        return Err(Error::PreconditionViolation(
            "phase design needs theta_2 outside {0, pi}".into(),
        ));
    }
    let mu1 = target.leading_eigenvalue;
    if !(mu1.re > 0.0 && mu1.im > 0.0) {
        return Err(Error::PreconditionViolation(format!(
            "phase design needs Re(mu1), Im(mu1) > 0, got {mu1}"
        )));
    }
    let im2 = w2.im;
    let mut a = DMatrix::zeros(n, n);
    a[(0, 0)] = (mu1.conj() * w2).im / im2;
    a[(0, 1)] = mu1.im / im2;
    a[(1, 0)] = w2.norm_sqr() * mu1.conj().im / im2;
    a[(1, 1)] = (mu1 * w2).im / im2;
    for j in 2..n {
        let mj = target.secondary_eigenvalues[j - 2];
        a[(j, 0)] = ((mu1.conj() - mj) * w2 * w[j].conj()).im / im2;
        a[(j, 1)] = ((mu1 - mj) * w[j]).im / im2;
        a[(j, j)] = mj;
    }
    check_residual(&a, w, mu1, 1e-10)?;
    AdjacencySpec::new(a)
}

fn condition_number(q: &DMatrix<Complex64>) -> f64 {
    let sv = q.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Builds `Q` with the target (and its conjugate) in the leading columns and
/// canonical vectors for every index not in `skip`.
fn basis(w: &[Complex64], skip: &[usize], complex_case: bool) -> DMatrix<Complex64> {
    let n = w.len();
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n {
        q[(i, 0)] = w[i];
        if complex_case {
            q[(i, 1)] = w[i].conj();
        }
    }
    let first = if complex_case { 2 } else { 1 };
    for (col, e) in (first..).zip((0..n).filter(|e| !skip.contains(e))) {
        q[(e, col)] = Complex64::new(1.0, 0.0);
    }
    q
}

/// `A = Q D Q^{-1}` with canonical completion vectors; the skipped indices
/// default to `(w, e_2, ..)` or `(w, conj(w), e_3, ..)` and are permuted in index order when
/// that basis is ill-conditioned.
pub fn design_general(target: &DesignTarget) -> Result<AdjacencySpec> {
    target.validate()?;
    let n = target.n();
    let mu1 = target.leading_eigenvalue;
    let w = &target.profile;
    let complex_case = mu1.im != 0.0;
    if complex_case && n < 2 {
        return Err(Error::PreconditionViolation("complex design needs at least two nodes".into()));
    }
    if !complex_case && !target.is_real() {
        return Err(Error::PreconditionViolation(
            "a non-real target needs a non-real leading eigenvalue".into(),
        ));
    }

    let candidates: Vec<Vec<usize>> = if complex_case {
        let mut c = vec![vec![0, 1]];
        for i in 0..n {
            for j in i + 1..n {
                if (i, j) != (0, 1) {
                    c.push(vec![i, j]);
                }
            }
        }
        c
    } else {
        (0..n).map(|i| vec![i]).collect()
    };
    let mut best = f64::INFINITY;
    let mut chosen = None;
    for skip in &candidates {
        let q = basis(w, skip, complex_case);
        let cond = condition_number(&q);
        if cond <= MAX_CONDITION {
            chosen = Some(q);
            break;
        }
        best = best.min(cond);
    }
    let q = chosen.ok_or(Error::IllConditionedBasis(best))?;

    let mut d = vec![mu1];
    if complex_case {
        d.push(mu1.conj());
    }
    d.extend(target.secondary_eigenvalues.iter().map(|&m| Complex64::new(m, 0.0)));
    let qinv = q
        .clone()
        .try_inverse()
        .ok_or(Error::IllConditionedBasis(f64::INFINITY))?;
    let mut qd = q.clone();
    for (c, dc) in d.iter().enumerate() {
        for r in 0..n {
            qd[(r, c)] *= dc;
        }
    }
    let ac = qd * qinv;
    let scale = ac.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let im = ac.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if im > 1e-10 * scale {
        return Err(Error::NumericalFailure(format!(
            "designed matrix has imaginary residual {im:e}"
        )));
    }
    let a = DMatrix::from_fn(n, n, |i, j| ac[(i, j)].re);
    check_residual(&a, w, mu1, 1e-10)?;
    let spec = AdjacencySpec::new(a)?;
    let info = classify_leading(&eigendecompose(&spec)?, &spec.tol);
    if info.kind == LeadingKind::NotStrictlyLeading {
        return Err(Error::NumericalFailure(format!(
            "designed matrix lost its strictly leading eigenvalue ({:?})",
            info.violation
        )));
    }
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignValidation {
    pub leading: LeadingInfo,
    pub assumption_holds: bool,
    pub predicted_profile: RhythmicProfile,
    /// Hausdorff distance between the leading-eigenvector profile and the target.
    pub profile_distance: f64,
    pub profile_matches: bool,
    /// `Re(mu1)` minus the largest other real part.
    pub spectral_gap: f64,
    pub pass: bool,
}

/// Re-derives the leading structure of `a` and compares its profile with the target.
pub fn validate_design(a: &AdjacencySpec, target: &DesignTarget) -> Result<DesignValidation> {
    let spec = eigendecompose(a)?;
    let leading = classify_leading(&spec, &a.tol);
    let (predicted_profile, _) = predict_profile(&leading.w1, 1.0);
    let profile_distance = if predicted_profile.len() == target.n() {
        hausdorff(&predicted_profile, &target.relative_profile())?
    } else {
        f64::INFINITY
    };
    let assumption_holds = leading.is_leading();
    let profile_matches = profile_distance <= 1e-8;
    Ok(DesignValidation {
        spectral_gap: leading.re_gap,
        assumption_holds,
        pass: assumption_holds && profile_matches,
        predicted_profile,
        profile_distance,
        profile_matches,
        leading,
    })
}

/// Relative profile of a designed matrix through its leading eigenvector.
pub fn designed_profile(a: &AdjacencySpec) -> Result<RhythmicProfile> {
    let spec = eigendecompose(a)?;
    let info = classify_leading(&spec, &a.tol);
    Ok(RhythmicProfile::relative_from(&complex::gauge_fix(&info.w1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn star_examples() {
        let t = DesignTarget::with_eigenvalues(vec![c(1.0, 0.0), c(0.5, 0.0)], c(1.0, 0.0), vec![0.0]).unwrap();
        let a = design_amplitude_star(&t).unwrap();
        assert_eq!(a.entries(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.5, 0.0]));

        let t = DesignTarget::from_signed_amplitudes(&[1.0, 0.5, -0.25], 1.0).unwrap();
        let a = design_amplitude_star(&t).unwrap();
        let m = a.entries();
        assert_eq!((m[(0, 0)], m[(1, 0)], m[(2, 0)]), (1.0, 0.5, -0.25));
        assert_eq!((m[(1, 1)], m[(2, 2)]), (0.0, 0.0));
        assert!(validate_design(&a, &t).unwrap().pass);

        let t = DesignTarget::with_eigenvalues(vec![c(1.0, 0.0)], c(2.5, 0.0), vec![]).unwrap();
        assert_eq!(design_amplitude_star(&t).unwrap().entries()[(0, 0)], 2.5);
    }

    #[test]
    fn phase_core_two_nodes() {
        let t = DesignTarget::from_phases(&[0.0, PI / 2.0], c(1.0, 1.0)).unwrap();
        let a = design_phase_core(&t).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]);
        assert!((a.entries() - want).amax() < 1e-12);
        let s = eigendecompose(&a).unwrap();
        assert!((s.triples[0].value - c(1.0, 1.0)).norm() < 1e-12);
        let w = &s.triples[0].right;
        assert!((w[1] / w[0] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn phase_core_three_nodes() {
        let t = DesignTarget::from_phases(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0], c(1.0, 1.0)).unwrap();
        let a = design_phase_core(&t).unwrap();
        let v = validate_design(&a, &t).unwrap();
        assert!(v.pass, "{v:?}");
        assert_eq!(v.leading.kind, LeadingKind::ComplexLeading);
    }

    #[test]
    fn phase_core_rejects_real_second_entry() {
        let t = DesignTarget::from_phases(&[0.0, PI, PI / 2.0], c(1.0, 1.0)).unwrap();
        assert!(matches!(design_phase_core(&t), Err(Error::PreconditionViolation(_))));
        let t = DesignTarget::from_signed_amplitudes(&[1.0, 0.5, -0.25], 1.0).unwrap();
        assert!(matches!(design_phase_core(&t), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn amplitude_rejects_complex_target() {
        let t = DesignTarget::from_phases(&[0.0, 1.0], c(1.0, 1.0)).unwrap();
        assert!(matches!(design_amplitude_star(&t), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn general_matches_explicit_constructions() {
        let t = DesignTarget::with_eigenvalues(
            vec![c(1.0, 0.0), c(0.5, 0.0), c(-0.25, 0.0), c(-1.0, 0.0)],
            c(1.2, 0.0),
            vec![0.1, -0.3, 0.5],
        )
        .unwrap();
        let g = design_general(&t).unwrap();
        let s = design_amplitude_star(&t).unwrap();
        assert!((g.entries() - s.entries()).amax() <= 1e-14);

        let t = DesignTarget::from_phases(&[0.0, 1.1], c(0.7, 1.3)).unwrap();
        let g = design_general(&t).unwrap();
        let p = design_phase_core(&t).unwrap();
        assert!((g.entries() - p.entries()).amax() <= 1e-10);
    }

    #[test]
    fn general_mixed_target_and_row_sums() {
        let profile = vec![c(1.0, 0.0), Complex64::from_polar(0.6, 1.0), Complex64::from_polar(0.3, -2.0)];
        let t = DesignTarget::with_eigenvalues(profile, c(1.0, 0.8), vec![-0.2]).unwrap();
        let a = design_general(&t).unwrap();
        assert!(validate_design(&a, &t).unwrap().pass);

        let t = DesignTarget::from_signed_amplitudes(&[1.0; 4], 1.5).unwrap();
        let a = design_general(&t).unwrap();
        for r in a.entries().row_iter() {
            assert!((r.sum() - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn general_permutes_completion_on_zero_pivot() {
        // second entry real, so the default (0, 1) basis is singular
        let profile = vec![c(1.0, 0.0), c(-1.0, 0.0), Complex64::from_polar(1.0, 2.0)];
        let t = DesignTarget::with_eigenvalues(profile, c(1.0, 1.0), vec![0.0]).unwrap();
        let a = design_general(&t).unwrap();
        assert!(validate_design(&a, &t).unwrap().pass);
    }

    #[test]
    fn broken_matrix_fails_validation() {
        let t = DesignTarget::from_signed_amplitudes(&[1.0, 0.5], 1.0).unwrap();
        let a = AdjacencySpec::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = validate_design(&a, &t).unwrap();
        assert!(!v.pass);
        assert_eq!(v.leading.kind, LeadingKind::NotStrictlyLeading);
    }

    #[test]
    fn target_json() {
        let t = DesignTarget::from_json_str(
            r#"{"profile":[{"re":1,"im":0},{"re":0.5,"im":0},{"re":-0.25,"im":0}]}"#,
        )
        .unwrap();
        assert_eq!(t.leading_eigenvalue, c(1.0, 0.0));
        assert_eq!(t.secondary_eigenvalues, vec![0.0, 0.0]);
        let t = DesignTarget::from_json_str(
            r#"{"profile":[{"re":1,"im":0},{"re":0,"im":1}],"mu1":{"re":2,"im":0.5},"secondary":[]}"#,
        )
        .unwrap();
        assert_eq!(t.leading_eigenvalue, c(2.0, 0.5));
        let t = DesignTarget::from_json_str(r#"{"profile":[{"re":1,"im":0},{"re":0,"im":1}],"period":20}"#).unwrap();
        assert!((DEFAULT_PERIOD_BETA * t.leading_eigenvalue.im - 2.0 * PI / 20.0).abs() < 1e-15);
        let back = DesignTarget::from_json_str(&t.to_json_value().to_string()).unwrap();
        assert_eq!(back, t);
        assert!(DesignTarget::from_json_str(r#"{"profile":[{"re":0.5,"im":0}]}"#).is_err());
        assert!(DesignTarget::from_json_str(r#"{"profile":[{"re":1,"im":0},{"re":2,"im":0}]}"#).is_err());
        assert!(DesignTarget::from_json_str("not json").is_err());
    }

    proptest! {
        #[test]
        fn amplitude_designs_validate(rho in proptest::collection::vec(-1.0f64..1.0, 1..8), mu1 in 0.2f64..3.0) {
            let mut r = vec![1.0];
            r.extend(rho);
            let t = DesignTarget::from_signed_amplitudes(&r, mu1).unwrap();
            let a = design_amplitude_star(&t).unwrap();
            let v = validate_design(&a, &t).unwrap();
            prop_assert!(v.pass);
            prop_assert!(v.spectral_gap >= mu1 - 1e-8);
        }

        #[test]
        fn phase_designs_validate(th in proptest::collection::vec(0.0f64..2.0 * PI, 1..7), u in 0.2f64..2.0, v in 0.2f64..2.0, c0 in 0.3f64..3.0) {
            let mut phases = vec![0.0, 0.3 + th[0] % 2.5];
            phases.extend(th.iter().skip(1));
            let t = DesignTarget::from_phases(&phases, c(u, v)).unwrap();
            let a = design_phase_core(&t).unwrap();
            let val = validate_design(&a, &t).unwrap();
            prop_assert!(val.pass, "{:?}", val);
            prop_assert!(val.spectral_gap >= u - 1e-8);

            let scaled = DesignTarget::from_phases(&phases, c(u * c0, v * c0)).unwrap();
            let b = design_phase_core(&scaled).unwrap();
            prop_assert!((b.entries() - a.entries() * c0).amax() <= 1e-9 * c0.max(1.0) * a.entries().amax().max(1.0));
        }
    }
}
