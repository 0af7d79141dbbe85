//! Fixed-step RK4 integration of the full nonlinear network model and the
//! time-series CSV format.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobian::{associated_pair, lift_right, ModelParams};
use crate::spectral::{eigendecompose, AdjacencySpec};

pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `scale * Re(w) / ||Re(w)||_inf` for the lifted leading eigenvector `w`.
    AlongLeadingEigvec { scale: f64 },
    /// Uniform in the `2N`-ball of the given radius, drawn from the seed.
    RandomBall { radius: f64 },
    /// Full state `(x_1..x_N, y_1..y_N)`.
    Explicit { state: Vec<f64> },
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::AlongLeadingEigvec { scale: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub t_end: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub initial: InitialCondition,
    pub seed: u64,
    /// Enables the resolution guard `dt <= min(0.01, T / 200)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_period: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            t_end: 1000.0,
            dt: 0.01,
            sample_stride: 10,
            initial: InitialCondition::default(),
            seed: 0,
            predicted_period: None,
        }
    }
}

impl SimConfig {
    /// Horizon of at least `periods` predicted periods, `dt = min(0.01, T/200)`.
    pub fn for_period(period: f64, periods: f64) -> Self {
        SimConfig {
            t_end: periods * period,
            dt: (period / 200.0).min(0.01),
            predicted_period: Some(period),
            ..Default::default()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 100.0 * self.dt) {
            return Err(Error::InvalidInput(format!(
                "t_end = {} must be at least 100 dt = {}",
                self.t_end,
                100.0 * self.dt
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidInput("sample_stride must be >= 1".into()));
        }
        if let Some(t) = self.predicted_period {
            let cap = (t / 200.0).min(0.01);
            if self.dt > cap * (1.0 + 1e-12) {
                return Err(Error::InvalidInput(format!(
                    "dt = {} exceeds the resolution limit min(0.01, T/200) = {cap}",
                    self.dt
                )));
            }
        }
        match &self.initial {
            InitialCondition::AlongLeadingEigvec { scale: r } | InitialCondition::RandomBall { radius: r } => {
                if !(*r > 0.0 && *r <= 0.5) {
                    return Err(Error::InvalidInput(format!(
                        "initial scale must lie in (0, 0.5], got {r}"
                    )));
                }
            }
            InitialCondition::Explicit { state } => {
                if state.len() != 2 * n {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * n,
                        got: state.len(),
                    });
                }
                if state.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidInput("initial state must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSnapshot {
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub sigmoid: String,
}

impl From<&ModelParams> for ParamSnapshot {
    fn from(p: &ModelParams) -> Self {
        ParamSnapshot {
            alpha: p.alpha,
            beta: p.beta,
            eps: p.eps,
            sigmoid: p.sigmoid.name().to_string(),
        }
    }
}

/// Uniformly sampled trajectory; `x[j][k]` is node `j` at time `t[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<Vec<f64>>,
    pub params: Option<ParamSnapshot>,
    pub meta: Option<SimConfig>,
}

impl TimeSeries {
    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn sample_spacing(&self) -> f64 {
        if self.t.len() < 2 {
            0.0
        } else {
            (self.t[self.t.len() - 1] - self.t[0]) / (self.t.len() - 1) as f64
        }
    }

    /// Full state at sample `k`.
    pub fn state(&self, k: usize) -> Vec<f64> {
        self.x.iter().chain(&self.y).map(|c| c[k]).collect()
    }

    pub fn final_state(&self) -> Vec<f64> {
        self.state(self.len() - 1)
    }

    pub fn to_csv_string(&self) -> String {
        let n = self.n_nodes();
        let mut out = String::new();
        if let Some(p) = &self.params {
            let _ = writeln!(out, "# alpha={:.17e}", p.alpha);
            let _ = writeln!(out, "# beta={:.17e}", p.beta);
            let _ = writeln!(out, "# eps={:.17e}", p.eps);
            let _ = writeln!(out, "# sigmoid={}", p.sigmoid);
        }
        if let Some(m) = &self.meta {
            let _ = writeln!(out, "# dt={:.17e}", m.dt);
            let _ = writeln!(out, "# t_end={:.17e}", m.t_end);
            let _ = writeln!(out, "# sample_stride={}", m.sample_stride);
            let _ = writeln!(out, "# seed={}", m.seed);
            if let Ok(init) = serde_json::to_string(&m.initial) {
                let _ = writeln!(out, "# initial={init}");
            }
        }
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|j| format!("x{j}")));
        header.extend((1..=n).map(|j| format!("y{j}")));
        out.push_str(&header.join(","));
        out.push('\n');
        for k in 0..self.len() {
            let _ = write!(out, "{:.16e}", self.t[k]);
            for c in self.x.iter().chain(&self.y) {
                let _ = write!(out, ",{:.16e}", c[k]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for line in text.lines() {
            if let Some(rest) = line.trim_start().strip_prefix('#') {
                if let Some((k, v)) = rest.split_once('=') {
                    kv.insert(k.trim().to_string(), v.trim().to_string());
                }
            }
        }
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        let cols = header.len();
        if cols < 3 || (cols - 1) % 2 != 0 || &header[0] != "t" {
            return Err(Error::Parse(format!(
                "expected header t,x1..xN,y1..yN, got {:?}",
                header.iter().collect::<Vec<_>>()
            )));
        }
        let n = (cols - 1) / 2;
        for j in 0..n {
            if header[1 + j] != format!("x{}", j + 1) || header[1 + n + j] != format!("y{}", j + 1) {
                return Err(Error::Parse(format!("unexpected column names in header at node {}", j + 1)));
            }
        }
        let mut t = Vec::new();
        let mut x = vec![Vec::new(); n];
        let mut y = vec![Vec::new(); n];
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.len() != cols {
                return Err(Error::Parse(format!("row {} has {} fields, expected {cols}", row + 1, rec.len())));
            }
            let vals = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {f:?}"))))
                .collect::<Result<Vec<f64>>>()?;
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse(format!("non-finite value in row {}", row + 1)));
            }
            t.push(vals[0]);
            for j in 0..n {
                x[j].push(vals[1 + j]);
                y[j].push(vals[1 + n + j]);
            }
        }
        let num = |k: &str| kv.get(k).and_then(|v| v.parse::<f64>().ok());
        let params = match (num("alpha"), num("beta"), num("eps")) {
            (Some(alpha), Some(beta), Some(eps)) => Some(ParamSnapshot {
                alpha,
                beta,
                eps,
                sigmoid: kv.get("sigmoid").cloned().unwrap_or_else(|| "tanh".into()),
            }),
            _ => None,
        };
        let meta = match (num("dt"), num("t_end")) {
            (Some(dt), Some(t_end)) => Some(SimConfig {
                t_end,
                dt,
                sample_stride: kv.get("sample_stride").and_then(|v| v.parse().ok()).unwrap_or(1),
                seed: kv.get("seed").and_then(|v| v.parse().ok()).unwrap_or(0),
                initial: kv
                    .get("initial")
                    .and_then(|v| serde_json::from_str(v).ok())
                    .unwrap_or_default(),
                predicted_period: None,
            }),
            _ => None,
        };
        Ok(TimeSeries { t, x, y, params, meta })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }
}

/// Vector field evaluator with the coupling matrix pre-scaled by `beta`.
struct Field<'a> {
    n: usize,
    beta_a: Vec<f64>,
    p: &'a ModelParams,
}

impl<'a> Field<'a> {
    fn new(a: &AdjacencySpec, p: &'a ModelParams) -> Self {
        let n = a.n();
        let m = a.entries();
        let beta_a = (0..n * n).map(|k| p.beta * m[(k / n, k % n)]).collect();
        Field { n, beta_a, p }
    }

    #[inline]
    fn eval(&self, s: &[f64], out: &mut [f64]) {
        let n = self.n;
        let (x, y) = s.split_at(n);
        for j in 0..n {
            let row = &self.beta_a[j * n..(j + 1) * n];
            let mut u = self.p.alpha * x[j];
            for k in 0..n {
                u += row[k] * x[k];
            }
            out[j] = -x[j] - y[j] + self.p.sigmoid.eval(u);
            out[n + j] = self.p.eps * (x[j] - y[j]);
        }
    }
}

/// Vector field at `state = (x, y)`.
pub fn rhs(state: &[f64], a: &AdjacencySpec, p: &ModelParams) -> Result<Vec<f64>> {
    if state.len() != 2 * a.n() {
        return Err(Error::DimensionMismatch {
            expected: 2 * a.n(),
            got: state.len(),
        });
    }
    let mut out = vec![0.0; state.len()];
    Field::new(a, p).eval(state, &mut out);
    Ok(out)
}

/// Initial state for `cfg` (leading eigenvector, random ball or explicit).
pub fn initial_state(a: &AdjacencySpec, p: &ModelParams, cfg: &SimConfig) -> Result<Vec<f64>> {
    let n = a.n();
    match &cfg.initial {
        InitialCondition::Explicit { state } => Ok(state.clone()),
        InitialCondition::RandomBall { radius } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let d = 2 * n;
            let g: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
            Ok(g.iter().map(|v| v * r / norm).collect())
        }
        InitialCondition::AlongLeadingEigvec { scale } => {
            let spec = eigendecompose(a)?;
            let t = &spec.triples[0];
            let nu = associated_pair(t.value, p).nu_plus;
            let w = lift_right(&t.right, nu, p.eps)?;
            let mut z: Vec<f64> = w.iter().map(|c| c.re).collect();
            let mut m = z.iter().map(|v| v.abs()).fold(0.0, f64::max);
            if m == 0.0 {
                z = w.iter().map(|c| c.im).collect();
                m = z.iter().map(|v| v.abs()).fold(0.0, f64::max);
            }
            Ok(z.iter().map(|v| scale * v / m).collect())
        }
    }
}

/// Integrates the model with classical RK4 and returns every
/// `sample_stride`-th state, starting with the initial one.
pub fn simulate(a: &AdjacencySpec, p: &ModelParams, cfg: &SimConfig) -> Result<TimeSeries> {
    p.validate()?;
    if !(p.eps > 0.0) {
        return Err(Error::InvalidInput("simulation requires eps > 0".into()));
    }
    cfg.validate(a.n())?;
    let z0 = initial_state(a, p, cfg)?;
    simulate_from(a, p, cfg, z0)
}

fn simulate_from(a: &AdjacencySpec, p: &ModelParams, cfg: &SimConfig, mut z: Vec<f64>) -> Result<TimeSeries> {
    let n = a.n();
    let d = 2 * n;
    let field = Field::new(a, p);
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let n_samples = steps / cfg.sample_stride + 1;
    let mut t = Vec::with_capacity(n_samples);
    let mut x = vec![Vec::with_capacity(n_samples); n];
    let mut y = vec![Vec::with_capacity(n_samples); n];
    let record = |k: usize, z: &[f64], t: &mut Vec<f64>, x: &mut Vec<Vec<f64>>, y: &mut Vec<Vec<f64>>| {
        t.push(k as f64 * cfg.dt);
        for j in 0..n {
            x[j].push(z[j]);
            y[j].push(z[n + j]);
        }
    };
    record(0, &z, &mut t, &mut x, &mut y);

    let h = cfg.dt;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    for step in 1..=steps {
        field.eval(&z, &mut k1);
        for i in 0..d {
            tmp[i] = z[i] + 0.5 * h * k1[i];
        }
        field.eval(&tmp, &mut k2);
        for i in 0..d {
            tmp[i] = z[i] + 0.5 * h * k2[i];
        }
        field.eval(&tmp, &mut k3);
        for i in 0..d {
            tmp[i] = z[i] + h * k3[i];
        }
        field.eval(&tmp, &mut k4);
        let mut worst = 0.0f64;
        for i in 0..d {
            z[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            worst = worst.max(z[i].abs());
        }
        if !(worst <= DIVERGENCE_LIMIT) {
            return Err(Error::Divergence {
                t: step as f64 * h,
                magnitude: worst,
            });
        }
        if step % cfg.sample_stride == 0 {
            record(step, &z, &mut t, &mut x, &mut y);
        }
    }
    Ok(TimeSeries {
        t,
        x,
        y,
        params: Some(ParamSnapshot::from(p)),
        meta: Some(cfg.clone()),
    })
}

/// Half peak-to-peak amplitude of each `x_j` after discarding the leading
/// `transient_fraction` of the samples.
pub fn steady_amplitudes(ts: &TimeSeries, transient_fraction: f64) -> Vec<f64> {
    let start = ((ts.len() as f64) * transient_fraction.clamp(0.0, 0.999)) as usize;
    ts.x.iter()
        .map(|c| {
            let tail = &c[start..];
            let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
            0.5 * (hi - lo)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Alpha,
    Beta,
    Eps,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParam::Alpha),
            "beta" => Ok(SweepParam::Beta),
            "eps" => Ok(SweepParam::Eps),
            _ => Err(Error::InvalidInput(format!("unknown sweep parameter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    /// Half peak-to-peak amplitude per node over the second half of the run.
    pub steady_amplitude: Vec<f64>,
    pub final_state: Vec<f64>,
}

/// Independent runs over `values`; executed in parallel, returned in input order.
pub fn sweep(
    a: &AdjacencySpec,
    p_base: &ModelParams,
    param: SweepParam,
    values: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<SweepPoint>> {
    values
        .par_iter()
        .map(|&v| {
            let p = match param {
                SweepParam::Alpha => p_base.with_alpha(v),
                SweepParam::Beta => p_base.with_beta(v),
                SweepParam::Eps => p_base.with_eps(v),
            };
            let ts = simulate(a, &p, cfg)?;
            Ok(SweepPoint {
                value: v,
                steady_amplitude: steady_amplitudes(&ts, 0.5),
                final_state: ts.final_state(),
            })
        })
        .collect()
}
