//! Critical values of the self-loop gain and coupling gain at which the
//! leading `J0` pair crosses the imaginary axis, crossing speed, and
//! dominance of the bifurcating pair.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::serde_c64;
use crate::error::{Error, Result};
use crate::jacobian::{associated_pair, ModelParams, SigmoidSpec};
use crate::spectral::{classify_leading, eigendecompose, AdjacencySpec, LeadingInfo, Spectrum};

const IMAG_AXIS_TOL: f64 = 1e-9;
const TRANSVERSALITY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalParam {
    AlphaCritical,
    BetaCritical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub which: CriticalParam,
    /// `alpha*` or `beta*`.
    pub value: f64,
    pub omega: f64,
    /// The parameter held fixed (`beta` for `AlphaCritical`, `alpha` otherwise).
    pub fixed_param: f64,
    pub eps: f64,
    #[serde(with = "serde_c64")]
    pub mu1: Complex64,
    pub transversality: f64,
    /// Largest real part among the non-bifurcating `J0` eigenvalues, once a
    /// dominance check has been run against a concrete matrix.
    pub dominance_margin: Option<f64>,
}

impl CriticalPoint {
    pub fn alpha(&self) -> f64 {
        match self.which {
            CriticalParam::AlphaCritical => self.value,
            CriticalParam::BetaCritical => self.fixed_param,
        }
    }

    pub fn beta(&self) -> f64 {
        match self.which {
            CriticalParam::AlphaCritical => self.fixed_param,
            CriticalParam::BetaCritical => self.value,
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// Tanh model parameters at the critical point.
    pub fn params(&self) -> ModelParams {
        self.params_with(SigmoidSpec::Tanh)
    }

    pub fn params_with(&self, sigmoid: SigmoidSpec) -> ModelParams {
        ModelParams {
            alpha: self.alpha(),
            beta: self.beta(),
            eps: self.eps,
            sigmoid,
        }
    }

    /// Parameters shifted by `delta` past the critical value.
    pub fn past(&self, delta: f64) -> ModelParams {
        let mut p = self.params();
        match self.which {
            CriticalParam::AlphaCritical => p.alpha += delta,
            CriticalParam::BetaCritical => p.beta += delta,
        }
        p
    }

    pub fn is_certified(&self) -> bool {
        self.transversality > TRANSVERSALITY_FLOOR && self.dominance_margin.is_some_and(|m| m < 0.0)
    }
}

/// Real part of the leading associated root, `Re(nu_1^+)`.
pub fn leading_real_part(mu1: Complex64, alpha: f64, beta: f64, eps: f64) -> f64 {
    let p = ModelParams {
        alpha,
        beta,
        eps,
        sigmoid: SigmoidSpec::Tanh,
    };
    associated_pair(mu1, &p).nu_plus.re
}

fn check_common(mu1: Complex64, eps: f64) -> Result<()> {
    if !(mu1.re.is_finite() && mu1.im.is_finite()) {
        return Err(Error::InvalidInput("mu1 must be finite".into()));
    }
    if mu1.re <= 0.0 {
        return Err(Error::PreconditionViolation(format!(
            "Re(mu1) must be positive, got {}",
            mu1.re
        )));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("eps must lie in [0, 1), got {eps}")));
    }
    if eps > 0.1 {
        log::warn!("eps = {eps} is large; critical values are computed but not certified by theory");
    }
    Ok(())
}

/// Finds a root of `f` in `[lo, hi]` with `f(lo) > 0 > f(hi)`, Newton steps
/// from `seed` safeguarded by bisection.
fn safeguarded_newton(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    seed: f64,
) -> f64 {
    let mut x = seed.clamp(lo, hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) || hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()) {
            return next;
        }
        x = next;
    }
    x
}

/// All roots of `f` in `[lo, hi]` found by scanning for sign changes.
fn scan_roots(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let m = 400;
    let mut out = Vec::new();
    let xs: Vec<f64> = (0..=m).map(|k| lo + (hi - lo) * k as f64 / m as f64).collect();
    for w in xs.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa == 0.0 {
            out.push(w[0]);
        } else if fa * fb < 0.0 {
            let g = |x: f64| if fa > 0.0 { f(x) } else { -f(x) };
            let dg = |x: f64| if fa > 0.0 { df(x) } else { -df(x) };
            out.push(safeguarded_newton(g, dg, w[0], w[1], 0.5 * (w[0] + w[1])));
        }
    }
    out
}

/// Solves the bracketed cubic, returning the first candidate that passes
/// `accept`: the seeded Newton root, then any other root in the bracket.
fn solve_cubic(
    f: &dyn Fn(f64) -> f64,
    df: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    seed: f64,
    accept: &dyn Fn(f64) -> bool,
) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo > 0.0 && fhi < 0.0) {
        if flo == 0.0 && accept(lo) {
            return Ok(lo);
        }
        if fhi == 0.0 && accept(hi) {
            return Ok(hi);
        }
        return Err(Error::RootNotBracketed(format!(
            "cubic has no sign change on [{lo}, {hi}] (values {flo:e}, {fhi:e})"
        )));
    }
    let x = safeguarded_newton(f, df, lo, hi, seed);
    if accept(x) {
        return Ok(x);
    }
    for r in scan_roots(f, df, lo, hi) {
        if accept(r) {
            return Ok(r);
        }
    }
    Err(Error::NumericalFailure(format!(
        "no root of the cubic on [{lo}, {hi}] puts the leading pair on the imaginary axis"
    )))
}

/// Frequency of the purely imaginary leading pair.
fn complex_omega(mu1: Complex64, alpha: f64, beta: f64, eps: f64) -> f64 {
    let (u, v) = (mu1.re, mu1.im);
    let bv = beta * v;
    0.5 * bv + 0.5 * (bv * bv + 4.0 * eps * (2.0 - alpha - beta * u)).sqrt()
}

fn finish(
    which: CriticalParam,
    mu1: Complex64,
    value: f64,
    fixed: f64,
    eps: f64,
) -> Result<CriticalPoint> {
    let (alpha, beta) = match which {
        CriticalParam::AlphaCritical => (value, fixed),
        CriticalParam::BetaCritical => (fixed, value),
    };
    let re = leading_real_part(mu1, alpha, beta, eps);
    if re.abs() > IMAG_AXIS_TOL {
        return Err(Error::NumericalFailure(format!(
            "critical value {value} leaves Re(nu_1^+) = {re:e}"
        )));
    }
    let omega = if mu1.im == 0.0 {
        (eps * (1.0 - eps)).sqrt()
    } else {
        complex_omega(mu1, alpha, beta, eps)
    };
    if !(omega > 0.0) {
        return Err(Error::NumericalFailure(format!(
            "critical pair has non-positive frequency {omega}"
        )));
    }
    let p = ModelParams {
        alpha,
        beta,
        eps,
        sigmoid: SigmoidSpec::Tanh,
    };
    let tr = transversality(mu1, &p, which)?;
    Ok(CriticalPoint {
        which,
        value,
        omega,
        fixed_param: fixed,
        eps,
        mu1,
        transversality: tr,
        dominance_margin: None,
    })
}

/// Self-loop gain `alpha*` at which the leading pair is purely imaginary for
/// fixed `beta` and `eps`.
pub fn alpha_critical(mu1: Complex64, beta: f64, eps: f64) -> Result<CriticalPoint> {
    check_common(mu1, eps)?;
    if !(beta > 0.0 && beta * mu1.re < 1.0) {
        return Err(Error::PreconditionViolation(format!(
            "beta must lie in (0, 1/Re(mu1)) = (0, {}), got {beta}",
            1.0 / mu1.re
        )));
    }
    let (u, v) = (mu1.re, mu1.im);
    let value = if v == 0.0 {
        1.0 + eps - beta * u
    } else {
        // s = alpha + beta u - 1;  p(s) = (s - eps)^2 (1 - s) - beta^2 v^2 s
        let bv2 = beta * beta * v * v;
        let f = move |s: f64| (s - eps).powi(2) * (1.0 - s) - bv2 * s;
        let df = move |s: f64| 2.0 * (s - eps) * (1.0 - s) - (s - eps).powi(2) - bv2;
        let s = if eps == 0.0 {
            0.0
        } else {
            let accept = |s: f64| leading_real_part(mu1, 1.0 - beta * u + s, beta, eps).abs() <= IMAG_AXIS_TOL;
            solve_cubic(&f, &df, -eps, eps, 0.0, &accept)?
        };
        1.0 - beta * u + s
    };
    finish(CriticalParam::AlphaCritical, mu1, value, beta, eps)
}

/// Coupling gain `beta*` at which the leading pair is purely imaginary for
/// fixed `alpha` and `eps`.
pub fn beta_critical(mu1: Complex64, alpha: f64, eps: f64) -> Result<CriticalPoint> {
    check_common(mu1, eps)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::PreconditionViolation(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let (u, v) = (mu1.re, mu1.im);
    let value = if v == 0.0 {
        (1.0 + eps - alpha) / u
    } else if eps == 0.0 {
        (1.0 - alpha) / u
    } else {
        let f = move |b: f64| {
            let s = alpha + b * u - 1.0;
            (s - eps).powi(2) * (1.0 - s) - b * b * v * v * s
        };
        let df = move |b: f64| {
            let s = alpha + b * u - 1.0;
            u * (2.0 * (s - eps) * (1.0 - s) - (s - eps).powi(2))
                - 2.0 * b * v * v * s
                - b * b * v * v * u
        };
        let lo = ((1.0 - alpha - eps) / u).max(f64::MIN_POSITIVE);
        let hi = (1.0 - alpha + eps) / u;
        let accept = |b: f64| leading_real_part(mu1, alpha, b, eps).abs() <= IMAG_AXIS_TOL;
        solve_cubic(&f, &df, lo, hi, (1.0 - alpha) / u, &accept)?
    };
    finish(CriticalParam::BetaCritical, mu1, value, alpha, eps)
}

/// Central finite difference of `Re(nu_1^+)` in the critical parameter.
pub fn transversality(mu1: Complex64, p: &ModelParams, which: CriticalParam) -> Result<f64> {
    let param = match which {
        CriticalParam::AlphaCritical => p.alpha,
        CriticalParam::BetaCritical => p.beta,
    };
    let h = 1e-5 * param.abs().max(1.0);
    let at = |x: f64| match which {
        CriticalParam::AlphaCritical => leading_real_part(mu1, x, p.beta, p.eps),
        CriticalParam::BetaCritical => leading_real_part(mu1, p.alpha, x, p.eps),
    };
    let d = (at(param + h) - at(param - h)) / (2.0 * h);
    if !(d > TRANSVERSALITY_FLOOR) {
        return Err(Error::NonTransversal(format!(
            "d Re(nu_1^+) / d param = {d:e} at {param}"
        )));
    }
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct J0Eigenvalue {
    #[serde(with = "serde_c64")]
    pub nu: Complex64,
    /// Index of the source adjacency eigenvalue in the spectrum.
    pub source: usize,
    pub plus_root: bool,
    pub bifurcating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub eigenvalues: Vec<J0Eigenvalue>,
    /// Largest real part among the non-bifurcating eigenvalues; `-inf` when
    /// there are none (serialized as `null`).
    pub dominance_margin: f64,
    pub pass: bool,
}

/// Lists every `J0` eigenvalue (through the associated pairs of the ordered
/// spectrum) and checks that all but the bifurcating pair are stable.
pub fn dominance_from_spectrum(spec: &Spectrum, p: &ModelParams) -> DominanceReport {
    let complex_lead = spec.triples[0].value.im != 0.0;
    let mut eigenvalues = Vec::with_capacity(2 * spec.len());
    for (j, t) in spec.triples.iter().enumerate() {
        let pr = associated_pair(t.value, p);
        let plus_bif = j == 0 || (complex_lead && j == 1);
        let minus_bif = j == 0 && !complex_lead;
        eigenvalues.push(J0Eigenvalue {
            nu: pr.nu_plus,
            source: j,
            plus_root: true,
            bifurcating: plus_bif,
        });
        eigenvalues.push(J0Eigenvalue {
            nu: pr.nu_minus,
            source: j,
            plus_root: false,
            bifurcating: minus_bif,
        });
    }
    let dominance_margin = eigenvalues
        .iter()
        .filter(|e| !e.bifurcating)
        .map(|e| e.nu.re)
        .fold(f64::NEG_INFINITY, f64::max);
    DominanceReport {
        eigenvalues,
        dominance_margin,
        pass: dominance_margin < 0.0,
    }
}

pub fn dominance_report(a: &AdjacencySpec, p: &ModelParams) -> Result<DominanceReport> {
    Ok(dominance_from_spectrum(&eigendecompose(a)?, p))
}

/// Spectrum, leading structure, critical point and dominance for one matrix.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalAnalysis {
    pub spectrum: Spectrum,
    pub leading: LeadingInfo,
    pub point: CriticalPoint,
    pub dominance: DominanceReport,
}

/// Critical point of `a` in the chosen parameter with the other one held at
/// `fixed`. Fails with `PreconditionViolation` when `a` has no strictly
/// leading eigenvalue.
pub fn analyze_critical(
    a: &AdjacencySpec,
    which: CriticalParam,
    fixed: f64,
    eps: f64,
) -> Result<CriticalAnalysis> {
    let spectrum = eigendecompose(a)?;
    let leading = classify_leading(&spectrum, &a.tol);
    leading.require()?;
    let mut point = match which {
        CriticalParam::AlphaCritical => alpha_critical(leading.mu1, fixed, eps)?,
        CriticalParam::BetaCritical => beta_critical(leading.mu1, fixed, eps)?,
    };
    let dominance = dominance_from_spectrum(&spectrum, &point.params());
    point.dominance_margin = Some(dominance.dominance_margin);
    if !dominance.pass {
        log::warn!(
            "dominance fails at the critical point: margin {:e}",
            dominance.dominance_margin
        );
    }
    Ok(CriticalAnalysis {
        spectrum,
        leading,
        point,
        dominance,
    })
}
