//! End-to-end loop: design, critical point, prediction, simulation past
//! criticality, measurement and comparison.

use serde::{Deserialize, Serialize};

use crate::criticality::{analyze_critical, CriticalParam, CriticalPoint};
use crate::design::{design, validate_design, DesignMode, DesignTarget, DesignValidation};
use crate::error::{Error, Result};
use crate::extract::{classify_measured, hausdorff, measure, ExtractionConfig, MeasuredRhythm};
use crate::hopf::{predict, CommonProfile, HopfReport};
use crate::simulate::{simulate, InitialCondition, SimConfig};
use crate::spectral::AdjacencySpec;

/// Default held value for the non-critical parameter.
pub const DEFAULT_HELD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hold {
    /// Hold `beta`, solve for `alpha*`.
    Beta(f64),
    /// Hold `alpha`, solve for `beta*`.
    Alpha(f64),
}

impl Hold {
    /// `beta = 0.5` for real targets, `alpha = 0.5` otherwise.
    pub fn default_for(target: &DesignTarget) -> Self {
        if target.is_real() {
            Hold::Beta(DEFAULT_HELD)
        } else {
            Hold::Alpha(DEFAULT_HELD)
        }
    }

    fn split(self) -> (CriticalParam, f64) {
        match self {
            Hold::Beta(b) => (CriticalParam::AlphaCritical, b),
            Hold::Alpha(a) => (CriticalParam::BetaCritical, a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub eps: f64,
    pub delta: f64,
    pub hold: Option<Hold>,
    pub mode: Option<DesignMode>,
    /// Hausdorff tolerance; `max(0.05, 2 sqrt(eps))` when absent.
    pub tolerance: Option<f64>,
    pub period_tol: f64,
    /// Simulated horizon in predicted periods.
    pub periods: f64,
    pub seed: u64,
    pub extraction: ExtractionConfig,
}

impl VerifyConfig {
    pub fn new(eps: f64, delta: f64) -> Self {
        VerifyConfig {
            eps,
            delta,
            hold: None,
            mode: None,
            tolerance: None,
            period_tol: 0.1,
            periods: 80.0,
            seed: 0,
            extraction: ExtractionConfig::default(),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| 0.05f64.max(2.0 * self.eps.sqrt()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub mode: DesignMode,
    pub hold: Hold,
    pub matrix: serde_json::Value,
    pub validation: Option<DesignValidation>,
    pub critical: Option<CriticalPoint>,
    pub prediction: Option<HopfReport>,
    pub simulated: Option<crate::simulate::ParamSnapshot>,
    pub measured: Option<MeasuredRhythm>,
    pub measured_class: Option<CommonProfile>,
    pub hausdorff: Option<f64>,
    pub tolerance: f64,
    pub period_rel_error: Option<f64>,
    pub failure: Option<StageFailure>,
    pub pass: bool,
}

impl VerifyReport {
    fn fail(mut self, stage: &str, e: Error) -> Self {
        self.failure = Some(StageFailure {
            stage: stage.into(),
            error: e.to_string(),
        });
        self.pass = false;
        self
    }
}

/// Designs a matrix from `target` and runs the prediction/measurement loop.
/// Stage errors after the design step are recorded in the report.
pub fn verify(target: &DesignTarget, cfg: &VerifyConfig) -> Result<(AdjacencySpec, VerifyReport)> {
    let mode = cfg.mode.unwrap_or_else(|| DesignMode::auto(target));
    let a = design(target, mode)?;
    let report = verify_matrix(&a, target, mode, cfg)?;
    Ok((a, report))
}

/// As [`verify`] for an already designed matrix.
pub fn verify_matrix(
    a: &AdjacencySpec,
    target: &DesignTarget,
    mode: DesignMode,
    cfg: &VerifyConfig,
) -> Result<VerifyReport> {
    if !(cfg.delta >= 0.0 && cfg.delta.is_finite()) {
        return Err(Error::InvalidInput(format!("delta must be >= 0, got {}", cfg.delta)));
    }
    cfg.extraction.validate()?;
    let hold = cfg.hold.unwrap_or_else(|| Hold::default_for(target));
    let mut r = VerifyReport {
        mode,
        hold,
        matrix: a.to_json_value(),
        validation: None,
        critical: None,
        prediction: None,
        simulated: None,
        measured: None,
        measured_class: None,
        hausdorff: None,
        tolerance: cfg.tolerance(),
        period_rel_error: None,
        failure: None,
        pass: false,
    };
    let validation = validate_design(a, target)?;
    let valid = validation.pass;
    r.validation = Some(validation);
    if !valid {
        return Ok(r.fail(
            "validate",
            Error::PreconditionViolation("designed matrix does not realize the target".into()),
        ));
    }

    let (which, fixed) = hold.split();
    let analysis = match analyze_critical(a, which, fixed, cfg.eps) {
        Ok(x) => x,
        Err(e) => return Ok(r.fail("critical", e)),
    };
    r.critical = Some(analysis.point.clone());
    let prediction = match predict(a, &analysis) {
        Ok(x) => x,
        Err(e) => return Ok(r.fail("predict", e)),
    };
    let period = prediction.period;
    r.prediction = Some(prediction.clone());

    let p = analysis.point.past(cfg.delta);
    r.simulated = Some((&p).into());
    let sim = SimConfig {
        seed: cfg.seed,
        initial: InitialCondition::AlongLeadingEigvec { scale: 0.1 },
        ..SimConfig::for_period(period, cfg.periods)
    };
    let ts = match simulate(a, &p, &sim) {
        Ok(x) => x,
        Err(e) => return Ok(r.fail("simulate", e)),
    };
    let measured = match measure(&ts, &cfg.extraction) {
        Ok(x) => x,
        Err(e) => return Ok(r.fail("extract", e)),
    };
    let d = match hausdorff(&prediction.predicted_profile, &measured.profile) {
        Ok(x) => x,
        Err(e) => return Ok(r.fail("compare", e)),
    };
    let period_err = (measured.period - period).abs() / period;
    r.measured_class = Some(classify_measured(&measured, &cfg.extraction));
    r.measured = Some(measured);
    r.hausdorff = Some(d);
    r.period_rel_error = Some(period_err);
    r.pass = d <= r.tolerance && period_err <= cfg.period_tol;
    Ok(r)
}
