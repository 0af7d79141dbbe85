//! Period, amplitude and phase measurement from steady-state time series.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::CVector;
use crate::error::{Error, Result};
use crate::hopf::{classify_common_profile_with, CommonProfile, RhythmicProfile};
use crate::simulate::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Leading fraction of the record discarded as transient.
    pub transient_fraction: f64,
    pub min_periods: usize,
    /// Reference half peak-to-peak amplitude below which the run is quiescent.
    pub amp_floor: f64,
    pub phase_tol: f64,
    pub amp_tol: f64,
    /// Largest relative standard deviation of crossing spacings.
    pub spacing_tol: f64,
    /// Largest relative amplitude change between the two halves of the
    /// post-transient window.
    pub settle_tol: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            transient_fraction: 0.5,
            min_periods: 10,
            amp_floor: 1e-6,
            phase_tol: 0.1,
            amp_tol: 0.05,
            spacing_tol: 0.05,
            settle_tol: 0.05,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(Error::InvalidInput(format!(
                "transient_fraction must lie in [0, 1), got {}",
                self.transient_fraction
            )));
        }
        if self.min_periods < 5 {
            return Err(Error::InvalidInput(format!(
                "min_periods must be >= 5, got {}",
                self.min_periods
            )));
        }
        let pos = [self.amp_floor, self.phase_tol, self.amp_tol, self.spacing_tol, self.settle_tol];
        if pos.iter().any(|v| !(*v > 0.0)) {
            return Err(Error::InvalidInput("extraction tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub period: f64,
    /// Standard deviation of the crossing spacings over their mean.
    pub rel_std: f64,
    pub cycles: usize,
    pub reference_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredRhythm {
    pub period: f64,
    pub period_rel_std: f64,
    pub profile: RhythmicProfile,
    /// Fundamental amplitude of the reference node.
    pub reference_amplitude: f64,
    /// `(max + min) / (max - min)` per node over the analysis window; zero
    /// for waveforms symmetric about zero.
    pub per_node_waveform_symmetry: Vec<f64>,
    pub periods_used: usize,
    pub quiescent: bool,
}

fn post_start(ts: &TimeSeries, cfg: &ExtractionConfig) -> usize {
    ((ts.len() as f64) * cfg.transient_fraction) as usize
}

fn half_range(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    0.5 * (hi - lo)
}

/// Mean spacing of upward zero crossings of the mean-removed reference node
/// (largest peak-to-peak amplitude after the transient).
pub fn estimate_period(ts: &TimeSeries, cfg: &ExtractionConfig) -> Result<PeriodEstimate> {
    cfg.validate()?;
    if ts.len() < 4 || ts.n_nodes() == 0 {
        return Err(Error::InvalidInput("time series too short".into()));
    }
    let start = post_start(ts, cfg);
    let amps: Vec<f64> = ts.x.iter().map(|c| half_range(&c[start..])).collect();
    let amax = amps.iter().cloned().fold(0.0, f64::max);
    let reference_index = amps.iter().position(|&a| a >= amax * (1.0 - 1e-12)).unwrap_or(0);
    if !(amax >= cfg.amp_floor) {
        return Err(Error::Quiescent {
            amplitude: amax,
            floor: cfg.amp_floor,
        });
    }

    let sig = &ts.x[reference_index][start..];
    let t = &ts.t[start..];
    let mid = sig.len() / 2;
    let (a1, a2) = (half_range(&sig[..mid]), half_range(&sig[mid..]));
    if (a1 - a2).abs() > cfg.settle_tol * a1.max(a2) {
        return Err(Error::Unsettled(format!(
            "reference amplitude drifts from {a1:e} to {a2:e} within the analysis window"
        )));
    }

    let mean = sig.iter().sum::<f64>() / sig.len() as f64;
    let arm = -0.25 * amax;
    let mut armed = false;
    let mut crossings = Vec::new();
    for k in 1..sig.len() {
        let (u, v) = (sig[k - 1] - mean, sig[k] - mean);
        if u < arm {
            armed = true;
        }
        if armed && u < 0.0 && v >= 0.0 {
            let frac = -u / (v - u);
            crossings.push(t[k - 1] + frac * (t[k] - t[k - 1]));
            armed = false;
        }
    }
    if crossings.len() < cfg.min_periods + 1 {
        return Err(Error::Unsettled(format!(
            "only {} full cycles after the transient, need {}",
            crossings.len().saturating_sub(1),
            cfg.min_periods
        )));
    }
    let gaps: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    let period = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let var = gaps.iter().map(|g| (g - period).powi(2)).sum::<f64>() / gaps.len() as f64;
    let rel_std = var.sqrt() / period;
    if rel_std > cfg.spacing_tol {
        return Err(Error::Unsettled(format!(
            "crossing spacings vary by {:.1}% (limit {:.1}%)",
            100.0 * rel_std,
            100.0 * cfg.spacing_tol
        )));
    }
    Ok(PeriodEstimate {
        period,
        rel_std,
        cycles: gaps.len(),
        reference_index,
    })
}

fn lerp(t: &[f64], x: &[f64], at: f64) -> f64 {
    let k = t.partition_point(|&s| s <= at).clamp(1, t.len() - 1);
    let (t0, t1) = (t[k - 1], t[k]);
    let w = if t1 > t0 { (at - t0) / (t1 - t0) } else { 0.0 };
    x[k - 1] + w * (x[k] - x[k - 1])
}

/// `(2 / (t1 - t0)) * int_{t0}^{t1} x(t) e^{-i omega t} dt`, trapezoidal on
/// the samples with linear interpolation at `t0`.
fn fundamental(t: &[f64], x: &[f64], t0: f64, omega: f64) -> Complex64 {
    let t1 = *t.last().unwrap();
    let first = t.partition_point(|&s| s <= t0);
    let mut prev_t = t0;
    let mut prev_f = lerp(t, x, t0) * Complex64::from_polar(1.0, -omega * t0);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in first..t.len() {
        let f = x[k] * Complex64::from_polar(1.0, -omega * t[k]);
        acc += 0.5 * (t[k] - prev_t) * (f + prev_f);
        prev_t = t[k];
        prev_f = f;
    }
    acc * (2.0 / (t1 - t0))
}

/// Fundamental Fourier coefficients over the last whole periods of the
/// post-transient window; phase `phi_j = arg(c_j)` with positive values
/// leading the reference node.
pub fn extract_profile(ts: &TimeSeries, period: f64, cfg: &ExtractionConfig) -> Result<MeasuredRhythm> {
    cfg.validate()?;
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
    }
    let start = post_start(ts, cfg);
    let t = &ts.t[start..];
    let t_last = *t.last().ok_or_else(|| Error::InvalidInput("empty time series".into()))?;
    let k = ((t_last - t[0]) / period).floor() as usize;
    if k < 1 {
        return Err(Error::Unsettled("analysis window shorter than one period".into()));
    }
    let t0 = t_last - k as f64 * period;
    let omega = 2.0 * PI / period;
    let coeffs: CVector = ts
        .x
        .iter()
        .map(|c| fundamental(t, &c[start..], t0, omega))
        .collect();
    let amax = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if !(amax >= cfg.amp_floor) {
        return Err(Error::Quiescent {
            amplitude: amax,
            floor: cfg.amp_floor,
        });
    }
    let w0 = t.partition_point(|&s| s < t0);
    let symmetry = ts
        .x
        .iter()
        .map(|c| {
            let win = &c[start + w0..];
            let hi = win.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = win.iter().cloned().fold(f64::INFINITY, f64::min);
            if hi > lo {
                (hi + lo) / (hi - lo)
            } else {
                0.0
            }
        })
        .collect();
    Ok(MeasuredRhythm {
        period,
        period_rel_std: 0.0,
        profile: RhythmicProfile::relative_from(&coeffs),
        reference_amplitude: amax,
        per_node_waveform_symmetry: symmetry,
        periods_used: k,
        quiescent: false,
    })
}

/// Period estimate followed by profile extraction.
pub fn measure(ts: &TimeSeries, cfg: &ExtractionConfig) -> Result<MeasuredRhythm> {
    let pe = estimate_period(ts, cfg)?;
    let mut m = extract_profile(ts, pe.period, cfg)?;
    m.period_rel_std = pe.rel_std;
    Ok(m)
}

/// Hausdorff distance between two profiles viewed as point sets in the plane.
pub fn hausdorff(predicted: &RhythmicProfile, measured: &RhythmicProfile) -> Result<f64> {
    if predicted.len() != measured.len() {
        return Err(Error::DimensionMismatch {
            expected: predicted.len(),
            got: measured.len(),
        });
    }
    let directed = |a: &[Complex64], b: &[Complex64]| {
        a.iter()
            .map(|p| b.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(&predicted.entries, &measured.entries).max(directed(&measured.entries, &predicted.entries)))
}

pub fn classify_measured(m: &MeasuredRhythm, cfg: &ExtractionConfig) -> CommonProfile {
    classify_common_profile_with(&m.profile, cfg.amp_tol, cfg.phase_tol)
}
