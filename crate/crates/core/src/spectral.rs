//! Eigendecomposition of the adjacency matrix, eigenvalue ordering,
//! leading-eigenstructure classification and biorthogonal normalization.

use std::fmt;
use std::path::Path;

use faer::linalg::solvers::Eigen;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{self, serde_c64, serde_cvec, CVector};
use crate::error::{Error, Result};
use crate::jacobian;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralTolerances {
    pub eig_residual_tol: f64,
    /// Minimum eigenvalue separation for an eigenvalue to count as simple.
    pub simplicity_gap_tol: f64,
    /// Minimum real-part gap for the leading eigenvalue to count as strictly leading.
    pub leading_gap_tol: f64,
    pub modulus_homog_tol: f64,
}

impl Default for SpectralTolerances {
    fn default() -> Self {
        SpectralTolerances {
            eig_residual_tol: 1e-9,
            simplicity_gap_tol: 1e-8,
            leading_gap_tol: 1e-8,
            modulus_homog_tol: 1e-6,
        }
    }
}

impl SpectralTolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.eig_residual_tol,
            self.simplicity_gap_tol,
            self.leading_gap_tol,
            self.modulus_homog_tol,
        ];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "spectral tolerances must be finite and strictly positive".into(),
            ))
        }
    }
}

/// A dense, real, weighted and signed adjacency matrix. Entry `(j, k)` weighs
/// the edge from node `k` into node `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencySpec {
    entries: DMatrix<f64>,
    labels: Vec<String>,
    pub tol: SpectralTolerances,
}

#[derive(Serialize, Deserialize)]
struct AdjacencyJson {
    n: usize,
    entries: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl AdjacencySpec {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        let labels = (1..=n).map(|j| j.to_string()).collect();
        Self::with_labels(entries, labels)
    }

    pub fn with_labels(entries: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("matrix must have at least one node".into()));
        }
        if entries.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "matrix must be square, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        Ok(AdjacencySpec {
            entries,
            labels,
            tol: SpectralTolerances::default(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("matrix must have at least one node".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    r.len(),
                    n
                )));
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max(1, ||A||_inf)`, the scale applied to absolute spectral tolerances.
    pub fn scale(&self) -> f64 {
        self.inf_norm().max(1.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let mut out = Self::with_labels(&self.entries * c, self.labels.clone())?;
        out.tol = self.tol;
        Ok(out)
    }

    /// Parses `n` rows of `n` comma-separated reals. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let row = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("not a number: {f:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: AdjacencyJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if j.entries.len() != j.n {
            return Err(Error::Parse(format!(
                "\"n\" is {} but {} rows were given",
                j.n,
                j.entries.len()
            )));
        }
        let mut a = Self::from_rows(&j.entries)?;
        if let Some(labels) = j.labels {
            a = Self::with_labels(a.entries, labels)?;
        }
        Ok(a)
    }

    /// Accepts either format; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json_str(text)
        } else {
            Self::from_csv_str(text)
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for r in self.entries.row_iter() {
            let line: Vec<String> = r.iter().map(|v| format!("{v:.17e}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.n();
        let j = AdjacencyJson {
            n,
            entries: (0..n)
                .map(|i| (0..n).map(|k| self.entries[(i, k)]).collect())
                .collect(),
            labels: Some(self.labels.clone()),
        };
        serde_json::to_value(j).expect("matrix serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenTriple {
    #[serde(with = "serde_c64")]
    pub value: Complex64,
    /// Right eigenvector, scaled so its largest-modulus entry is `1`.
    #[serde(with = "serde_cvec")]
    pub right: CVector,
    /// Left eigenvector (`v^t A = mu v^t`), same scaling as `right`.
    #[serde(with = "serde_cvec")]
    pub left: CVector,
    pub is_simple: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub triples: Vec<EigenTriple>,
    /// `max(1, ||A||_inf)` of the source matrix.
    pub scale: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.triples.iter().map(|t| t.value).collect()
    }

    /// Index of the eigenvalue closest to `mu`.
    pub fn nearest(&self, mu: Complex64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, t) in self.triples.iter().enumerate() {
            let d = (t.value - mu).norm();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeadingKind {
    RealLeading,
    ComplexLeading,
    NotStrictlyLeading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeadingViolation {
    NotSimple,
    NonPositiveRealPart,
    InsufficientGap,
}

impl fmt::Display for LeadingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LeadingViolation::NotSimple => "leading eigenvalue is not simple",
            LeadingViolation::NonPositiveRealPart => "leading eigenvalue has non-positive real part",
            LeadingViolation::InsufficientGap => "real-part gap to the next eigenvalue is too small",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingInfo {
    pub kind: LeadingKind,
    #[serde(with = "serde_c64")]
    pub mu1: Complex64,
    #[serde(with = "serde_cvec")]
    pub w1: CVector,
    #[serde(with = "serde_cvec")]
    pub v1: CVector,
    /// `Re(mu1)` minus the largest non-leading real part; infinite when there
    /// is no non-leading eigenvalue.
    pub re_gap: f64,
    pub violation: Option<LeadingViolation>,
}

impl LeadingInfo {
    pub fn is_leading(&self) -> bool {
        self.kind != LeadingKind::NotStrictlyLeading
    }

    /// Returns `Err(PreconditionViolation)` unless Assumption-1 style
    /// leading structure holds.
    pub fn require(&self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::PreconditionViolation(format!(
                "no strictly leading eigenvalue: {v}"
            ))),
        }
    }
}

fn to_faer(m: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues of an arbitrary real square matrix, unordered.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    Ok(raw_eigen(m)?.0)
}

fn raw_eigen(m: &DMatrix<f64>) -> Result<(Vec<Complex64>, Vec<CVector>)> {
    let fm = to_faer(m);
    let eig = Eigen::new_from_real(fm.as_ref())
        .map_err(|e| Error::NumericalFailure(format!("eigensolver failed: {e:?}")))?;
    let n = m.nrows();
    let s = eig.S().column_vector();
    let u = eig.U();
    let values = (0..n).map(|i| s[i]).collect();
    let vectors = (0..n)
        .map(|j| (0..n).map(|i| u[(i, j)]).collect())
        .collect();
    Ok((values, vectors))
}

fn mat_vec(a: &DMatrix<f64>, v: &[Complex64]) -> CVector {
    let n = a.nrows();
    (0..n)
        .map(|i| (0..n).map(|k| v[k] * a[(i, k)]).sum())
        .collect()
}

fn vec_mat(v: &[Complex64], a: &DMatrix<f64>) -> CVector {
    let n = a.nrows();
    (0..n)
        .map(|k| (0..n).map(|i| v[i] * a[(i, k)]).sum())
        .collect()
}

/// `||A w - mu w||_inf / (||A||_inf ||w||_inf)`, with `||A||_inf` floored at 1.
pub fn right_residual(a: &AdjacencySpec, mu: Complex64, w: &[Complex64]) -> f64 {
    let aw = mat_vec(a.entries(), w);
    let r = aw
        .iter()
        .zip(w)
        .map(|(x, y)| (x - mu * y).norm())
        .fold(0.0, f64::max);
    r / (a.scale() * complex::inf_norm(w))
}

pub fn left_residual(a: &AdjacencySpec, mu: Complex64, v: &[Complex64]) -> f64 {
    let va = vec_mat(v, a.entries());
    let r = va
        .iter()
        .zip(v)
        .map(|(x, y)| (x - mu * y).norm())
        .fold(0.0, f64::max);
    r / (a.scale() * complex::inf_norm(v))
}

/// One step of complex inverse iteration on `M - mu I`, used to polish an
/// eigenvector whose residual misses the tolerance.
fn polish(m: &DMatrix<f64>, mu: Complex64, v: &[Complex64]) -> Option<CVector> {
    let n = m.nrows();
    let shift = mu + Complex64::new(1e-13, 1e-13) * m.amax().max(1.0);
    let mc = DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(m[(i, j)], 0.0) - if i == j { shift } else { Complex64::new(0.0, 0.0) }
    });
    let rhs = nalgebra::DVector::from_column_slice(v);
    let sol = mc.lu().solve(&rhs)?;
    let out: CVector = sol.iter().copied().collect();
    if out.iter().all(|z| z.is_finite()) && complex::inf_norm(&out) > 0.0 {
        Some(complex::gauge_fix(&out))
    } else {
        None
    }
}

/// Full eigendecomposition with both-sided eigenvectors, ordered by
/// decreasing real part. Conjugate pairs are adjacent with the positive
/// imaginary part first; on tied real parts real eigenvalues come first and
/// pairs are ordered by decreasing imaginary part.
pub fn eigendecompose(a: &AdjacencySpec) -> Result<Spectrum> {
    a.tol.validate()?;
    let m = a.entries();
    let n = a.n();
    let scale = a.scale();
    let (vals, rvecs) = raw_eigen(m)?;
    let (lvals, lvecs) = raw_eigen(&m.transpose())?;
    if vals.iter().chain(&lvals).any(|z| !z.is_finite()) {
        return Err(Error::NumericalFailure(format!(
            "eigensolver produced non-finite values (||A||_inf = {:e})",
            a.inf_norm()
        )));
    }

    // Pair every right eigenvalue with the closest unused left eigenvalue.
    let mut used = vec![false; n];
    let mut left_of = vec![0usize; n];
    for i in 0..n {
        let mut best = usize::MAX;
        let mut dist = f64::INFINITY;
        for (k, lv) in lvals.iter().enumerate() {
            if !used[k] && (lv - vals[i]).norm() < dist {
                dist = (lv - vals[i]).norm();
                best = k;
            }
        }
        used[best] = true;
        left_of[i] = best;
    }

    // Group into units: real singletons and conjugate pairs (keep the
    // positive-imaginary member, regenerate its partner by conjugation).
    struct Unit {
        value: Complex64,
        right: CVector,
        left: CVector,
        pair: bool,
    }
    let real_tol = 1e-14 * scale;
    let mut units: Vec<Unit> = Vec::new();
    for i in 0..n {
        let mut value = vals[i];
        if value.im.abs() <= real_tol {
            value.im = 0.0;
            let re = |v: &CVector| v.iter().map(|z| Complex64::new(z.re, 0.0)).collect::<CVector>();
            let right = re(&rvecs[i]);
            let left = re(&lvecs[left_of[i]]);
            units.push(Unit {
                value,
                right,
                left,
                pair: false,
            });
        } else if value.im > 0.0 {
            units.push(Unit {
                value,
                right: rvecs[i].clone(),
                left: lvecs[left_of[i]].clone(),
                pair: true,
            });
        }
    }
    let n_units: usize = units.iter().map(|u| if u.pair { 2 } else { 1 }).sum();
    if n_units != n {
        return Err(Error::NumericalFailure(
            "eigenvalues of a real matrix did not form conjugate pairs".into(),
        ));
    }

    let tie = 1e-12 * scale;
    units.sort_by(|x, y| {
        let (a, b) = (x.value, y.value);
        if (a.re - b.re).abs() > tie {
            return b.re.partial_cmp(&a.re).unwrap();
        }
        match (x.pair, y.pair) {
            (false, true) => std::cmp::Ordering::Less,
            (true, false) => std::cmp::Ordering::Greater,
            _ => b.im.partial_cmp(&a.im).unwrap(),
        }
    });

    let mut triples = Vec::with_capacity(n);
    for u in units {
        let mut right = complex::gauge_fix(&u.right);
        let mut left = complex::gauge_fix(&u.left);
        if right_residual(a, u.value, &right) > a.tol.eig_residual_tol {
            if let Some(p) = polish(m, u.value, &right) {
                right = p;
            }
        }
        if left_residual(a, u.value, &left) > a.tol.eig_residual_tol {
            if let Some(p) = polish(&m.transpose(), u.value, &left) {
                left = p;
            }
        }
        triples.push(EigenTriple {
            value: u.value,
            right: right.clone(),
            left: left.clone(),
            is_simple: true,
        });
        if u.pair {
            triples.push(EigenTriple {
                value: u.value.conj(),
                right: complex::conj(&right),
                left: complex::conj(&left),
                is_simple: true,
            });
        }
    }

    let gap = a.tol.simplicity_gap_tol * scale;
    let values: Vec<Complex64> = triples.iter().map(|t| t.value).collect();
    for (i, t) in triples.iter_mut().enumerate() {
        t.is_simple = values
            .iter()
            .enumerate()
            .all(|(k, v)| k == i || (v - t.value).norm() > gap);
    }

    for t in &triples {
        let rr = right_residual(a, t.value, &t.right);
        let lr = left_residual(a, t.value, &t.left);
        // Defective eigenvalues legitimately miss the bound; only simple ones are certified.
        if t.is_simple && (rr > a.tol.eig_residual_tol || lr > a.tol.eig_residual_tol) {
            return Err(Error::NumericalFailure(format!(
                "eigenpair residual too large for mu = {}: right {rr:e}, left {lr:e} (||A||_inf = {:e})",
                t.value,
                a.inf_norm()
            )));
        }
    }

    Ok(Spectrum { triples, scale })
}

pub fn classify_leading(spec: &Spectrum, tol: &SpectralTolerances) -> LeadingInfo {
    let first = &spec.triples[0];
    let mu1 = first.value;
    let lead_count = if mu1.im != 0.0 { 2 } else { 1 };
    let re_gap = spec
        .triples
        .iter()
        .skip(lead_count)
        .map(|t| mu1.re - t.value.re)
        .fold(f64::INFINITY, f64::min);

    let violation = if !first.is_simple {
        Some(LeadingViolation::NotSimple)
    } else if mu1.re <= 0.0 {
        Some(LeadingViolation::NonPositiveRealPart)
    } else if re_gap <= tol.leading_gap_tol * spec.scale {
        Some(LeadingViolation::InsufficientGap)
    } else {
        None
    };
    let kind = match violation {
        Some(_) => LeadingKind::NotStrictlyLeading,
        None if mu1.im == 0.0 => LeadingKind::RealLeading,
        None => LeadingKind::ComplexLeading,
    };
    LeadingInfo {
        kind,
        mu1,
        w1: first.right.clone(),
        v1: first.left.clone(),
        re_gap,
        violation,
    }
}

/// Left/right J0-eigenvector pair used by the normal-form coefficient.
///
/// `v` is the left eigenvector for `nu`, `w` the right eigenvector for
/// `conj(nu)`; both are lifted from the A-eigenvectors of `mu` and scaled so
/// that `conj(v)^t w = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthogonalPair {
    pub v_x: CVector,
    pub w_x: CVector,
    pub v: CVector,
    pub w: CVector,
}

pub fn biorthogonal_pair(
    spec: &Spectrum,
    mu: Complex64,
    nu: Complex64,
    eps: f64,
) -> Result<BiorthogonalPair> {
    let t = &spec.triples[spec.nearest(mu)];
    let w_x = complex::conj(&t.right);
    let v_x = t.left.clone();
    let factor = Complex64::new(1.0, 0.0) - eps / (eps + nu.conj()).powi(2);
    let raw = factor * complex::inner(&v_x, &w_x);
    let size = complex::norm2(&v_x) * complex::norm2(&w_x);
    if raw.norm() <= 1e-12 * size {
        return Err(Error::DegenerateNormalization(format!(
            "conj(v)^t w = {raw} vanishes for mu = {}",
            t.value
        )));
    }
    let s = (2.0 / raw).conj();
    let v_x = complex::scale(&v_x, s);
    let v = jacobian::lift_left(&v_x, nu, eps)?;
    let w = jacobian::lift_right(&w_x, nu.conj(), eps)?;
    Ok(BiorthogonalPair { v_x, w_x, v, w })
}

/// True iff `max |w_j| - min |w_j| <= tol * max |w_j|`.
pub fn modulus_homogeneous(w: &[Complex64], tol: f64) -> bool {
    let max = w.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min = w.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    max - min <= tol * max
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec_of(rows: &[Vec<f64>]) -> Spectrum {
        eigendecompose(&AdjacencySpec::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn one_by_one_zero() {
        let s = spec_of(&[vec![0.0]]);
        assert_eq!(s.triples[0].value, c(0.0, 0.0));
        assert_eq!(s.triples[0].right, vec![c(1.0, 0.0)]);
        assert_eq!(s.triples[0].left, vec![c(1.0, 0.0)]);
    }

    #[test]
    fn rotation_pair_ordered() {
        let s = spec_of(&[vec![1.0, 1.0], vec![-1.0, 1.0]]);
        assert!((s.triples[0].value - c(1.0, 1.0)).norm() < 1e-12);
        assert!((s.triples[1].value - c(1.0, -1.0)).norm() < 1e-12);
        let w = &s.triples[0].right;
        assert!((w[1] / w[0] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_canonical() {
        let s = spec_of(&[
            vec![2.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ]);
        let vals: Vec<f64> = s.triples.iter().map(|t| t.value.re).collect();
        assert_eq!(vals, vec![2.0, 1.0, -1.0]);
        for (k, t) in s.triples.iter().enumerate() {
            for (i, z) in t.right.iter().enumerate() {
                let e = if i == k { 1.0 } else { 0.0 };
                assert!((z - c(e, 0.0)).norm() < 1e-14);
            }
        }
        let info = classify_leading(&s, &SpectralTolerances::default());
        assert_eq!(info.kind, LeadingKind::RealLeading);
        assert_eq!(info.mu1, c(2.0, 0.0));
        assert!((info.re_gap - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classify_complex_and_repeated() {
        let tol = SpectralTolerances::default();
        let s = spec_of(&[vec![1.0, 1.0], vec![-1.0, 1.0]]);
        let info = classify_leading(&s, &tol);
        assert_eq!(info.kind, LeadingKind::ComplexLeading);
        assert!((info.mu1 - c(1.0, 1.0)).norm() < 1e-12);
        assert!(info.re_gap.is_infinite());

        let s = spec_of(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let info = classify_leading(&s, &tol);
        assert_eq!(info.kind, LeadingKind::NotStrictlyLeading);
        assert_eq!(info.violation, Some(LeadingViolation::NotSimple));
        assert!(info.require().is_err());
    }

    #[test]
    fn negative_leading_rejected() {
        let s = spec_of(&[vec![-1.0, 0.0], vec![0.0, -2.0]]);
        let info = classify_leading(&s, &SpectralTolerances::default());
        assert_eq!(info.violation, Some(LeadingViolation::NonPositiveRealPart));
    }

    #[test]
    fn real_before_complex_on_tie() {
        // eigenvalues 1 and 1 +- 2i
        let s = spec_of(&[
            vec![1.0, 2.0, 0.0],
            vec![-2.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert_eq!(s.triples[0].value.im, 0.0);
        assert!(s.triples[1].value.im > 0.0);
        assert!((s.triples[2].value - s.triples[1].value.conj()).norm() == 0.0);
    }

    #[test]
    fn parse_formats() {
        let a = AdjacencySpec::parse("# comment\n1, 2\n3,4\n").unwrap();
        assert_eq!(a.entries()[(1, 0)], 3.0);
        let b = AdjacencySpec::parse(r#"{"n":2,"entries":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert!(AdjacencySpec::parse("1,2\n3\n").is_err());
        assert!(AdjacencySpec::parse("1,x\n3,4\n").is_err());
        assert!(AdjacencySpec::parse(r#"{"n":3,"entries":[[1]]}"#).is_err());
        let round = AdjacencySpec::parse(&a.to_csv_string()).unwrap();
        assert_eq!(round.entries(), a.entries());
    }

    #[test]
    fn modulus_homogeneous_examples() {
        assert!(modulus_homogeneous(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)], 1e-6));
        assert!(!modulus_homogeneous(&[c(1.0, 0.0), c(0.5, 0.0)], 1e-6));
        let w: Vec<Complex64> = (0..7).map(|j| Complex64::from_polar(1.0, 0.9 * j as f64)).collect();
        assert!(modulus_homogeneous(&w, 1e-6));
    }

    #[test]
    fn biorthogonal_scalar_case() {
        let s = spec_of(&[vec![1.0]]);
        let eps: f64 = 0.01;
        let nu = c(0.0, (eps * (1.0 - eps)).sqrt());
        let p = biorthogonal_pair(&s, c(1.0, 0.0), nu, eps).unwrap();
        assert!((complex::inner(&p.v, &p.w) - c(2.0, 0.0)).norm() < 1e-12);
        assert!(complex::dot(&p.v, &p.w).norm() < 1e-12);
    }

    fn random_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, n), n)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ordering_and_residuals(rows in random_matrix()) {
            let a = AdjacencySpec::from_rows(&rows).unwrap();
            let s = eigendecompose(&a).unwrap();
            prop_assert_eq!(s.len(), a.n());
            for w in s.triples.windows(2) {
                prop_assert!(w[0].value.re >= w[1].value.re - 1e-12);
            }
            let mut i = 0;
            while i < s.len() {
                let t = &s.triples[i];
                if t.value.im != 0.0 {
                    prop_assert!(t.value.im > 0.0);
                    prop_assert_eq!(s.triples[i + 1].value, t.value.conj());
                    i += 2;
                } else {
                    i += 1;
                }
            }
            for t in &s.triples {
                if t.is_simple {
                    prop_assert!(right_residual(&a, t.value, &t.right) <= 1e-9);
                    prop_assert!(left_residual(&a, t.value, &t.left) <= 1e-9);
                }
            }
        }

        #[test]
        fn classification_scale_consistent(rows in random_matrix(), c in 0.5f64..4.0) {
            let a = AdjacencySpec::from_rows(&rows).unwrap();
            let tol = SpectralTolerances::default();
            let i1 = classify_leading(&eigendecompose(&a).unwrap(), &tol);
            let i2 = classify_leading(&eigendecompose(&a.scaled(c).unwrap()).unwrap(), &tol);
            prop_assume!(i1.re_gap > 1e-4 && i1.mu1.re.abs() > 1e-4);
            prop_assert_eq!(i1.kind, i2.kind);
            prop_assert!((i1.mu1 * c - i2.mu1).norm() < 1e-9);
            for (x, y) in i1.w1.iter().zip(&i2.w1) {
                prop_assert!((x - y).norm() < 1e-7);
            }
        }

        #[test]
        fn biorthogonality_complex_leading(rows in random_matrix(), eps in 0.001f64..0.05) {
            let a = AdjacencySpec::from_rows(&rows).unwrap();
            let s = eigendecompose(&a).unwrap();
            let info = classify_leading(&s, &a.tol);
            prop_assume!(info.kind == LeadingKind::ComplexLeading);
            let nu = c(0.0, 0.7);
            let p = biorthogonal_pair(&s, info.mu1, nu, eps).unwrap();
            let nv = complex::norm2(&p.v) * complex::norm2(&p.w);
            prop_assert!(complex::dot(&p.v, &p.w).norm() <= 1e-9 * nv);
            prop_assert!((complex::inner(&p.v, &p.w) - c(2.0, 0.0)).norm() <= 1e-9);
        }
    }
}
