//! Model parameters, the linearization `J0` at the origin, and the map between
//! adjacency eigenvalues and their associated `J0` eigenvalue pairs.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::complex::{serde_c64, CVector};
use crate::error::{Error, Result};
use crate::spectral::{AdjacencySpec, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmoidKind {
    Tanh,
    Custom,
}

/// Saturating nonlinearity `S` with `S(0) = 0`, `S'(0) = 1`, `S'''(0) < 0`.
#[derive(Clone)]
pub enum SigmoidSpec {
    Tanh,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        s3_at_zero: f64,
    },
}

impl SigmoidSpec {
    /// Builds a custom sigmoid after checking `S(0) = 0` and `S'(0) = 1` by
    /// finite differences (tolerance `1e-6`) and `s3_at_zero < 0`.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s3_at_zero: f64,
    ) -> Result<Self> {
        let s0 = f(0.0);
        let h = 1e-5;
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        if s0.abs() > 1e-6 || (d1 - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidInput(format!(
                "sigmoid must satisfy S(0) = 0 and S'(0) = 1 (got {s0:e}, {d1})"
            )));
        }
        if !(s3_at_zero < 0.0) {
            return Err(Error::InvalidInput(format!(
                "S'''(0) must be negative, got {s3_at_zero}"
            )));
        }
        Ok(SigmoidSpec::Custom {
            name: name.into(),
            f: Arc::new(f),
            s3_at_zero,
        })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SigmoidSpec::Tanh => x.tanh(),
            SigmoidSpec::Custom { f, .. } => f(x),
        }
    }

    pub fn s3_at_zero(&self) -> f64 {
        match self {
            SigmoidSpec::Tanh => -2.0,
            SigmoidSpec::Custom { s3_at_zero, .. } => *s3_at_zero,
        }
    }

    pub fn kind(&self) -> SigmoidKind {
        match self {
            SigmoidSpec::Tanh => SigmoidKind::Tanh,
            SigmoidSpec::Custom { .. } => SigmoidKind::Custom,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            SigmoidSpec::Tanh => "tanh",
            SigmoidSpec::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for SigmoidSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SigmoidSpec")
            .field("name", &self.name())
            .field("s3_at_zero", &self.s3_at_zero())
            .finish()
    }
}

impl Serialize for SigmoidSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SigmoidSpec", 3)?;
        st.serialize_field("kind", &self.kind())?;
        st.serialize_field("name", self.name())?;
        st.serialize_field("s3_at_zero", &self.s3_at_zero())?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub sigmoid: SigmoidSpec,
}

impl ModelParams {
    /// Tanh model. `eps = 0` is accepted for the singular-limit formulas;
    /// simulation requires `eps > 0`.
    pub fn new(alpha: f64, beta: f64, eps: f64) -> Result<Self> {
        Self::with_sigmoid(alpha, beta, eps, SigmoidSpec::Tanh)
    }

    pub fn with_sigmoid(alpha: f64, beta: f64, eps: f64, sigmoid: SigmoidSpec) -> Result<Self> {
        let p = ModelParams {
            alpha,
            beta,
            eps,
            sigmoid,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "beta must be finite and >= 0, got {}",
                self.beta
            )));
        }
        if !(self.eps >= 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidInput(format!(
                "eps must lie in [0, 1), got {}",
                self.eps
            )));
        }
        Ok(())
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        ModelParams {
            alpha,
            ..self.clone()
        }
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        ModelParams {
            beta,
            ..self.clone()
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        ModelParams {
            eps,
            ..self.clone()
        }
    }
}

/// The two `J0` eigenvalues associated with an adjacency eigenvalue `mu`,
/// labelled so that `Re(nu_minus) <= Re(nu_plus)` (ties: larger imaginary
/// part goes to `nu_plus`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssociatedPair {
    #[serde(with = "serde_c64")]
    pub mu: Complex64,
    #[serde(with = "serde_c64")]
    pub nu_plus: Complex64,
    #[serde(with = "serde_c64")]
    pub nu_minus: Complex64,
    /// Set when the quadratic has a (numerically) repeated root.
    pub degenerate: bool,
}

/// `[[(alpha - 1) I + beta A, -I], [eps I, -eps I]]`.
pub fn build_jacobian(a: &AdjacencySpec, p: &ModelParams) -> DMatrix<f64> {
    let n = a.n();
    let m = a.entries();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => p.beta * m[(i, j)] + if i == j { p.alpha - 1.0 } else { 0.0 },
        (true, false) => {
            if j - n == i {
                -1.0
            } else {
                0.0
            }
        }
        (false, true) => {
            if i - n == j {
                p.eps
            } else {
                0.0
            }
        }
        (false, false) => {
            if i == j {
                -p.eps
            } else {
                0.0
            }
        }
    })
}

/// Coefficients `(b, c)` of `nu^2 + b nu + c = 0`.
fn quadratic_coeffs(mu: Complex64, p: &ModelParams) -> (Complex64, Complex64) {
    let g = p.alpha + p.beta * mu;
    let b = 1.0 + p.eps - g;
    let c = p.eps * (2.0 - g);
    (b, c)
}

/// Residual of the characteristic quadratic at `nu`.
pub fn quadratic_residual(mu: Complex64, nu: Complex64, p: &ModelParams) -> f64 {
    let (b, c) = quadratic_coeffs(mu, p);
    (nu * nu + b * nu + c).norm()
}

pub fn associated_pair(mu: Complex64, p: &ModelParams) -> AssociatedPair {
    let (b, c) = quadratic_coeffs(mu, p);
    let disc = (b * b - 4.0 * c).sqrt();
    let sign = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -(b + sign * disc) / 2.0;
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q, c / q)
    };
    let tie = 1e-12 * (1.0 + r1.norm().max(r2.norm()));
    let r1_first = if (r1.re - r2.re).abs() > tie {
        r1.re > r2.re
    } else {
        r1.im >= r2.im
    };
    let (nu_plus, nu_minus) = if r1_first { (r1, r2) } else { (r2, r1) };
    AssociatedPair {
        mu,
        nu_plus,
        nu_minus,
        degenerate: disc.norm() < 1e-12 * (1.0 + b.norm()),
    }
}

/// `mu = (1 - alpha + nu + eps/(eps + nu)) / beta`.
pub fn inverse_map(nu: Complex64, p: &ModelParams) -> Result<Complex64> {
    if p.beta == 0.0 {
        return Err(Error::SingularInput("inverse map needs beta != 0".into()));
    }
    let d = p.eps + nu;
    if d.norm() <= f64::EPSILON * (1.0 + nu.norm()) {
        return Err(Error::SingularInput("nu = -eps is not a J0 eigenvalue".into()));
    }
    Ok((1.0 - p.alpha + nu + p.eps / d) / p.beta)
}

fn check_not_minus_eps(nu: Complex64, eps: f64) -> Result<Complex64> {
    let d = eps + nu;
    if d.norm() <= f64::EPSILON * (1.0 + nu.norm()) {
        return Err(Error::SingularInput("eigenvector lift undefined at nu = -eps".into()));
    }
    Ok(d)
}

/// Right `J0` eigenvector `(w_x, eps/(eps + nu) w_x)`.
pub fn lift_right(w_x: &[Complex64], nu: Complex64, eps: f64) -> Result<CVector> {
    let d = check_not_minus_eps(nu, eps)?;
    let k = eps / d;
    Ok(w_x.iter().copied().chain(w_x.iter().map(|z| z * k)).collect())
}

/// Left `J0` eigenvector `(v_x, -1/(eps + nu) v_x)`.
pub fn lift_left(v_x: &[Complex64], nu: Complex64, eps: f64) -> Result<CVector> {
    let d = check_not_minus_eps(nu, eps)?;
    let k = -1.0 / d;
    Ok(v_x.iter().copied().chain(v_x.iter().map(|z| z * k)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjugationCase {
    /// Real `mu` with real roots: `nu_minus < nu_plus`.
    RealOrdered,
    /// Real `mu` with non-real roots: `nu_minus = conj(nu_plus)`.
    RealConjugate,
    /// Conjugate pair `mu_j, mu_{j+1}`: roots map to conjugates.
    PairCross,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationCheck {
    pub indices: Vec<usize>,
    pub case: ConjugationCase,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub pairs: Vec<AssociatedPair>,
    pub checks: Vec<ConjugationCheck>,
    pub all_pass: bool,
}

pub fn check_conjugation(spec: &Spectrum, p: &ModelParams) -> ConjugationReport {
    let pairs: Vec<AssociatedPair> = spec
        .triples
        .iter()
        .map(|t| associated_pair(t.value, p))
        .collect();
    let mut checks = Vec::new();
    let mut j = 0;
    while j < pairs.len() {
        let pj = &pairs[j];
        let tol = 1e-12 * (1.0 + pj.nu_plus.norm().max(pj.nu_minus.norm()));
        if pj.mu.im == 0.0 {
            if pj.nu_plus.im == 0.0 && pj.nu_minus.im == 0.0 {
                let diff = pj.nu_plus.re - pj.nu_minus.re;
                checks.push(ConjugationCheck {
                    indices: vec![j],
                    case: ConjugationCase::RealOrdered,
                    residual: diff,
                    pass: diff > 0.0 || pj.degenerate,
                });
            } else {
                let r = (pj.nu_minus - pj.nu_plus.conj()).norm();
                checks.push(ConjugationCheck {
                    indices: vec![j],
                    case: ConjugationCase::RealConjugate,
                    residual: r,
                    pass: r <= tol,
                });
            }
            j += 1;
        } else {
            let q = &pairs[j + 1];
            let r = (q.nu_plus - pj.nu_plus.conj())
                .norm()
                .max((q.nu_minus - pj.nu_minus.conj()).norm());
            checks.push(ConjugationCheck {
                indices: vec![j, j + 1],
                case: ConjugationCase::PairCross,
                residual: r,
                pass: r <= tol,
            });
            j += 2;
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    ConjugationReport {
        pairs,
        checks,
        all_pass,
    }
}
