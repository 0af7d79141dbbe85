//! Command-line front end. [`run`] parses arguments and returns the process
//! exit code: 0 success, 1 usage, 2 input parse, 3 assumption or
//! precondition, 4 numerical stage failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::criticality::{analyze_critical, CriticalAnalysis, CriticalParam};
use crate::design::{design, validate_design, DesignMode, DesignTarget};
use crate::error::{Error, Result};
use crate::extract::{classify_measured, hausdorff, measure, ExtractionConfig};
use crate::hopf::{predict, RhythmicProfile};
use crate::jacobian::{associated_pair, check_conjugation, ModelParams};
use crate::manifest::RunManifest;
use crate::pipeline::{verify_matrix, Hold, VerifyConfig};
use crate::simulate::{simulate, InitialCondition, SimConfig, TimeSeries};
use crate::spectral::{classify_leading, eigendecompose, AdjacencySpec, SpectralTolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rhythmnet", version, about = "Collective rhythms in networks of fast-slow mixed-feedback oscillators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, leading eigenstructure and the leading-eigenvalue verdict.
    Analyze(AnalyzeArgs),
    /// Critical value of alpha or beta with the other parameter held.
    Critical(CriticalArgs),
    /// Hopf coefficient, period and relative profile at the critical point.
    Predict(CriticalArgs),
    /// RK4 time series as CSV.
    Simulate(SimulateArgs),
    /// Period, amplitudes and phases measured from a time-series CSV.
    Extract(ExtractArgs),
    /// Adjacency matrix realizing a target profile.
    Design(DesignArgs),
    /// Design, predict, simulate past criticality and compare.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_eig_residual: Option<f64>,
    #[arg(long)]
    pub tol_simplicity: Option<f64>,
    #[arg(long)]
    pub tol_leading_gap: Option<f64>,
    #[arg(long)]
    pub tol_modulus: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Result<SpectralTolerances> {
        let d = SpectralTolerances::default();
        let t = SpectralTolerances {
            eig_residual_tol: self.tol_eig_residual.unwrap_or(d.eig_residual_tol),
            simplicity_gap_tol: self.tol_simplicity.unwrap_or(d.simplicity_gap_tol),
            leading_gap_tol: self.tol_leading_gap.unwrap_or(d.leading_gap_tol),
            modulus_homog_tol: self.tol_modulus.unwrap_or(d.modulus_homog_tol),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Exit with code 3 unless a strictly leading eigenvalue exists.
    #[arg(long)]
    pub require_leading: bool,
    #[command(flatten)]
    pub tol: TolArgs,
    /// With --beta and --eps, also report the associated J0 pairs.
    #[arg(long, requires_all = ["beta", "eps"])]
    pub alpha: Option<f64>,
    #[arg(long, requires_all = ["alpha", "eps"])]
    pub beta: Option<f64>,
    #[arg(long, requires_all = ["alpha", "beta"])]
    pub eps: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("held").required(true).args(["alpha", "beta"])))]
pub struct CriticalArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub eps: f64,
    /// Hold alpha and solve for beta*.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hold beta and solve for alpha*.
    #[arg(long)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `leading[:scale]`, `random[:radius]` or `state:v1,v2,...`.
    #[arg(long, default_value = "leading")]
    pub init: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub transient: f64,
    #[arg(long, default_value_t = 10)]
    pub min_periods: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub amp_floor: f64,
    /// JSON output of `predict`, to report the Hausdorff distance.
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long)]
    pub target: PathBuf,
    /// amplitude, phase or general; chosen from the target when absent.
    #[arg(long)]
    pub mode: Option<String>,
    /// Matrix CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Validation report JSON destination.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("held").args(["alpha", "beta"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub target: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub mode: Option<String>,
    /// Hausdorff tolerance; max(0.05, 2 sqrt(eps)) by default.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 80.0)]
    pub periods: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::Io(_) => EXIT_PARSE,
        Error::PreconditionViolation(_) | Error::SingularInput(_) => EXIT_PRECONDITION,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v).expect("json"))
}

fn load_matrix(path: &Path, tol: SpectralTolerances, m: &mut RunManifest) -> Result<AdjacencySpec> {
    let bytes = std::fs::read(path)?;
    m.add_input_bytes(&path.display().to_string(), &bytes);
    let text = String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let mut a = AdjacencySpec::parse(&text)?;
    a.tol = tol;
    Ok(a)
}

fn load_target(path: &Path, m: &mut RunManifest) -> Result<DesignTarget> {
    m.add_input(path)?;
    DesignTarget::load(path)
}

fn parse_init(s: &str) -> Result<InitialCondition> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let num = |a: Option<&str>, d: f64| -> Result<f64> {
        a.map_or(Ok(d), |a| a.parse().map_err(|_| Error::InvalidInput(format!("bad --init value {a:?}"))))
    };
    match kind {
        "leading" => Ok(InitialCondition::AlongLeadingEigvec { scale: num(arg, 0.1)? }),
        "random" => Ok(InitialCondition::RandomBall { radius: num(arg, 0.1)? }),
        "state" => {
            let state = arg
                .unwrap_or("")
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad state entry {v:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(InitialCondition::Explicit { state })
        }
        _ => Err(Error::InvalidInput(format!("unknown --init kind {kind:?}"))),
    }
}

fn parse_mode(s: &Option<String>, target: &DesignTarget) -> Result<DesignMode> {
    match s.as_deref() {
        None | Some("auto") => Ok(DesignMode::auto(target)),
        Some(m) => m.parse(),
    }
}

fn critical_analysis(args: &CriticalArgs, command: &str) -> Result<(AdjacencySpec, CriticalAnalysis, RunManifest)> {
    let tol = args.tol.resolve()?;
    let mut m = RunManifest::new(
        command,
        json!({"eps": args.eps, "alpha": args.alpha, "beta": args.beta, "tolerances": tol}),
    );
    let a = load_matrix(&args.matrix, tol, &mut m)?;
    let (which, fixed) = match (args.alpha, args.beta) {
        (Some(al), None) => (CriticalParam::BetaCritical, al),
        (None, Some(b)) => (CriticalParam::AlphaCritical, b),
        _ => unreachable!("clap enforces exactly one held parameter"),
    };
    let analysis = analyze_critical(&a, which, fixed, args.eps)?;
    Ok((a, analysis, m))
}

fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Analyze(args) => {
            let tol = args.tol.resolve()?;
            let mut m = RunManifest::new(
                "analyze",
                json!({"require_leading": args.require_leading, "tolerances": tol,
                       "alpha": args.alpha, "beta": args.beta, "eps": args.eps}),
            );
            let a = load_matrix(&args.matrix, tol, &mut m)?;
            let spectrum = eigendecompose(&a)?;
            let leading = classify_leading(&spectrum, &a.tol);
            let mut report = json!({
                "manifest": m,
                "n": a.n(),
                "spectrum": spectrum,
                "leading": leading,
                "assumption_holds": leading.is_leading(),
            });
            if let (Some(al), Some(b), Some(e)) = (args.alpha, args.beta, args.eps) {
                let p = ModelParams::new(al, b, e)?;
                let pairs: Vec<_> = spectrum.values().iter().map(|&mu| associated_pair(mu, &p)).collect();
                report["associated_pairs"] = serde_json::to_value(pairs).expect("json");
                report["conjugation"] = serde_json::to_value(check_conjugation(&spectrum, &p)).expect("json");
            }
            emit_json(args.out.as_deref(), &report)?;
            if args.require_leading && !leading.is_leading() {
                eprintln!("error: no strictly leading eigenvalue ({:?})", leading.violation);
                return Ok(EXIT_PRECONDITION);
            }
            Ok(EXIT_OK)
        }
        Command::Critical(args) => {
            let (_, analysis, m) = critical_analysis(args, "critical")?;
            let report = json!({
                "manifest": m,
                "critical": analysis.point,
                "period": analysis.point.period(),
                "certified": analysis.point.is_certified(),
                "leading": analysis.leading,
                "dominance": analysis.dominance,
            });
            emit_json(args.out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Predict(args) => {
            let (a, analysis, m) = critical_analysis(args, "predict")?;
            let hopf = predict(&a, &analysis)?;
            let report = json!({
                "manifest": m,
                "critical": analysis.point,
                "hopf": hopf,
            });
            emit_json(args.out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Simulate(args) => {
            let mut m = RunManifest::new(
                "simulate",
                json!({"alpha": args.alpha, "beta": args.beta, "eps": args.eps, "t_end": args.t_end,
                       "dt": args.dt, "stride": args.stride, "init": args.init}),
            )
            .with_seed(args.seed);
            let a = load_matrix(&args.matrix, SpectralTolerances::default(), &mut m)?;
            let p = ModelParams::new(args.alpha, args.beta, args.eps)?;
            let cfg = SimConfig {
                t_end: args.t_end,
                dt: args.dt,
                sample_stride: args.stride,
                initial: parse_init(&args.init)?,
                seed: args.seed,
                predicted_period: None,
            };
            let ts = simulate(&a, &p, &cfg)?;
            let text = format!(
                "# manifest={}\n{}",
                serde_json::to_string(&m).expect("json"),
                ts.to_csv_string()
            );
            emit(args.out.as_deref(), text.trim_end())?;
            Ok(EXIT_OK)
        }
        Command::Extract(args) => {
            let cfg = ExtractionConfig {
                transient_fraction: args.transient,
                min_periods: args.min_periods,
                amp_floor: args.amp_floor,
                ..Default::default()
            };
            cfg.validate()?;
            let mut m = RunManifest::new("extract", json!({"extraction": cfg}));
            m.add_input(&args.series)?;
            let ts = TimeSeries::load(&args.series)?;
            let mut report = json!({"manifest": m});
            match measure(&ts, &cfg) {
                Ok(meas) => {
                    report["status"] = json!("oscillating");
                    report["class"] = serde_json::to_value(classify_measured(&meas, &cfg)).expect("json");
                    if let Some(pp) = &args.predicted {
                        let pred = load_predicted_profile(pp, &mut report)?;
                        report["hausdorff"] = json!(hausdorff(&pred, &meas.profile)?);
                    }
                    report["measured"] = serde_json::to_value(&meas).expect("json");
                }
                Err(Error::Quiescent { amplitude, floor }) => {
                    report["status"] = json!("quiescent");
                    report["reference_amplitude"] = json!(amplitude);
                    report["amp_floor"] = json!(floor);
                }
                Err(e) => return Err(e),
            }
            emit_json(args.out.as_deref(), &report)?;
            Ok(EXIT_OK)
        }
        Command::Design(args) => {
            let mut m = RunManifest::new("design", json!({"mode": args.mode}));
            let target = load_target(&args.target, &mut m)?;
            let mode = parse_mode(&args.mode, &target)?;
            m.params = json!({"mode": mode});
            let a = design(&target, mode)?;
            let validation = validate_design(&a, &target)?;
            let csv = format!("# manifest={}\n{}", serde_json::to_string(&m).expect("json"), a.to_csv_string());
            emit(args.out.as_deref(), csv.trim_end())?;
            let report = json!({
                "manifest": m,
                "target": target.to_json_value(),
                "matrix": a.to_json_value(),
                "validation": validation,
            });
            match &args.report {
                Some(p) => emit_json(Some(p), &report)?,
                None if args.out.is_some() => emit_json(None, &report)?,
                None => {}
            }
            Ok(if validation.pass { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Command::Verify(args) => {
            let hold = match (args.alpha, args.beta) {
                (Some(a), _) => Some(Hold::Alpha(a)),
                (_, Some(b)) => Some(Hold::Beta(b)),
                _ => None,
            };
            let mut cfg = VerifyConfig::new(args.eps, args.delta);
            cfg.hold = hold;
            cfg.tolerance = args.tol;
            cfg.periods = args.periods;
            cfg.seed = args.seed;
            let mut m = RunManifest::new("verify", Value::Null).with_seed(args.seed);
            let target = load_target(&args.target, &mut m)?;
            let mode = parse_mode(&args.mode, &target)?;
            cfg.mode = Some(mode);
            m.params = serde_json::to_value(&cfg).expect("json");
            let a = design(&target, mode)?;
            let report = verify_matrix(&a, &target, mode, &cfg)?;
            let out = json!({"manifest": m, "report": report});
            emit_json(args.out.as_deref(), &out)?;
            if !report.pass {
                match &report.failure {
                    Some(f) => eprintln!("verify failed at stage {}: {}", f.stage, f.error),
                    None => eprintln!("verify failed: prediction and measurement disagree"),
                }
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
    }
}

fn load_predicted_profile(path: &Path, report: &mut Value) -> Result<RhythmicProfile> {
    let text = std::fs::read_to_string(path)?;
    if let Some(m) = report.get_mut("manifest") {
        let mut man: RunManifest = serde_json::from_value(m.clone()).expect("manifest");
        man.add_input_bytes(&path.display().to_string(), text.as_bytes());
        *m = serde_json::to_value(man).expect("json");
    }
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let prof = v
        .pointer("/hopf/predicted_profile")
        .cloned()
        .ok_or_else(|| Error::Parse("predict JSON lacks hopf.predicted_profile".into()))?;
    serde_json::from_value(prof).map_err(|e| Error::Parse(e.to_string()))
}
