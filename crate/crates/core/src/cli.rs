//! Command-line front end.
//!
//! Each subcommand decodes its inputs, calls the library and renders the
//! result. Reports are JSON on stdout, with every float rounded to 15
//! significant digits. Exit codes: 0 on success, 2 for domain errors
//! (degenerate or infeasible inputs), 1 for malformed input.

use crate::analysis::{
    chain, montecarlo_with_tol, verify_inequalities_with_tol, Check, FidelityName, MonteCarloRun,
};
use crate::error::Error;
use crate::kraus::{
    dilation_unitary, kraus_from_unitary, kraus_pair_from_target, TargetAmplitudes,
};
use crate::measurement::{
    reconstruct_complete_both, sample_ensemble, EnsembleConfig, Mode, Record,
};
use crate::purify_a::{purify_a_general, purify_a_z, OrthogonalMixture, ProjectionChoice};
use crate::purify_b::grid_oracle;
use crate::purify_b::purify_b;
use crate::qubit::{fidelity, DensityMatrix, PureState};
use crate::scalar::c;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::io::Read;

#[derive(Debug, Parser)]
#[command(
    name = "purekit",
    version,
    about = "Qubit purification protocols and measurement analysis"
)]
pub struct Cli {
    /// Verdict and residual threshold, in (0, 1e-4].
    #[arg(long, global = true, env = "PUREKIT_TOLERANCE", default_value = "1e-10", value_parser = parse_tolerance)]
    pub tolerance: f64,

    /// Seed for sampling; never derived from the clock.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability-preserving purification.
    PurifyA(PurifyAArgs),
    /// Closest pure state to a density matrix.
    PurifyB(PurifyBArgs),
    /// Measurement record and post-measurement mixture of a pure state.
    Measure(MeasureArgs),
    /// Recover the initial state from a complete-measurement mixture.
    Reconstruct(ReconstructArgs),
    /// Fidelity chain of one pure state for a measurement scenario.
    Chain(ChainArgs),
    /// Fidelity chain over Haar-random states.
    Montecarlo(MontecarloArgs),
    /// Dilation unitary and Kraus round trip for a target state.
    DilationCheck(DilationArgs),
}

#[derive(Debug, Args)]
pub struct PurifyAArgs {
    /// Weight of the first component; taken from the spectrum with --rho.
    #[arg(
        long,
        required_unless_present = "rho",
        conflicts_with = "rho",
        allow_negative_numbers = true
    )]
    pub p1: Option<f64>,
    /// Free phase of the coherence.
    #[arg(long, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, value_enum, conflicts_with = "rho")]
    pub basis: Option<BasisArg>,
    /// Density matrix JSON, or `-` for stdin; purified in its eigenbasis.
    #[arg(long)]
    pub rho: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Z,
}

#[derive(Debug, Args)]
pub struct PurifyBArgs {
    /// Density matrix JSON, or `-` for stdin.
    #[arg(long)]
    pub rho: String,
    /// Certify against a brute-force grid search.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle grid as NxM (theta by phi).
    #[arg(long, requires = "oracle", default_value = "720x1440", value_parser = parse_grid)]
    pub grid: (usize, usize),
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Pure state JSON, or `-` for stdin.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Ensemble size; exact probabilities when omitted.
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Density matrix JSON, or `-` for stdin.
    #[arg(long)]
    pub rho: String,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Pure state JSON, or `-` for stdin.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct MontecarloArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub trials: u64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DilationArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta_im: f64,
    /// Include both Kraus operators in the report.
    #[arg(long)]
    pub dump_kraus: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Complete,
    Partial,
    Single,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Complete => Mode::Complete,
            ModeArg::Partial => Mode::Partial,
            ModeArg::Single => Mode::Single,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t > 0.0 && t <= 1e-4 {
        Ok(t)
    } else {
        Err(format!("tolerance must lie in (0, 1e-4], got {s}"))
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got {s}"))?;
    let n = a.trim().parse().map_err(|e| format!("{e}"))?;
    let m = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((n, m))
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Lib(e) => e.code(),
            Failure::Malformed(_) => "MALFORMED_INPUT",
        }
    }

    fn exit(&self) -> i32 {
        match self {
            Failure::Lib(e) if e.is_domain() => 2,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Malformed(m) => m.clone(),
        }
    }
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    consumed: Option<String>,
}

impl Inputs<'_> {
    fn payload(&mut self, arg: &str) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg.to_string());
        }
        if let Some(s) = &self.consumed {
            return Ok(s.clone());
        }
        let mut s = String::new();
        self.stdin
            .read_to_string(&mut s)
            .map_err(|e| Failure::Malformed(format!("reading stdin: {e}")))?;
        self.consumed = Some(s.clone());
        Ok(s)
    }

    fn decode<T: DeserializeOwned>(&mut self, arg: &str, what: &str) -> Result<T, Failure> {
        let text = self.payload(arg)?;
        serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{what}: {e}")))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: error_report(
                        "USAGE",
                        &e.kind().to_string(),
                        echo_value(&echo, None),
                        &e.to_string(),
                    ),
                },
            };
        }
    };
    let mut inputs = Inputs {
        stdin,
        consumed: None,
    };
    match dispatch(&cli, &mut inputs) {
        Ok(stdout) => Outcome { code: 0, stdout },
        Err(f) => Outcome {
            code: f.exit(),
            stdout: error_report(
                f.code(),
                &f.message(),
                echo_value(&echo, inputs.consumed.as_deref()),
                "",
            ),
        },
    }
}

fn echo_value(args: &[String], stdin: Option<&str>) -> Value {
    let mut m = Map::new();
    m.insert("args".into(), json!(args));
    if let Some(s) = stdin {
        m.insert("stdin".into(), Value::String(s.to_string()));
    }
    Value::Object(m)
}

fn error_report(code: &str, message: &str, echo: Value, detail: &str) -> String {
    let mut v = json!({ "code": code, "message": message, "input_echo": echo });
    if !detail.is_empty() {
        v["detail"] = Value::String(detail.trim_end().to_string());
    }
    render(&v)
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<String, Failure> {
    let tol = cli.tolerance;
    let out = match &cli.command {
        Command::PurifyA(a) => purify_a_report(a, inputs)?,
        Command::PurifyB(a) => {
            let rho: DensityMatrix<f64> = inputs.decode(&a.rho, "rho")?;
            purify_b_report(&rho, a.oracle.then_some(a.grid))?
        }
        Command::Measure(a) => {
            let psi: PureState<f64> = inputs.decode(&a.state, "state")?;
            measure_report(&psi, a.mode.into(), a.n, cli.seed)?
        }
        Command::Reconstruct(a) => {
            let rho: DensityMatrix<f64> = inputs.decode(&a.rho, "rho")?;
            to_value(&reconstruct_complete_both(&rho)?)
        }
        Command::Chain(a) => {
            let psi: PureState<f64> = inputs.decode(&a.state, "state")?;
            chain_report(&psi, a.mode.into(), tol)?
        }
        Command::Montecarlo(a) => {
            let run = montecarlo_with_tol::<f64>(a.mode.into(), a.trials, cli.seed, tol)?;
            return Ok(match a.format {
                Format::Json => render(&to_value(&run.summary)),
                Format::Csv => montecarlo_csv(&run),
            });
        }
        Command::DilationCheck(a) => dilation_report(a, tol)?,
    };
    Ok(render(&out))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

/// `purify-a` report.
pub fn purify_a_report_for(
    p1: Option<f64>,
    phi: f64,
    rho: Option<&DensityMatrix<f64>>,
) -> crate::error::Result<Value> {
    let (state, basis, p1, reference) = match rho {
        None => {
            let p1 =
                p1.ok_or_else(|| Error::InvalidArgument("--p1 is required without --rho".into()))?;
            (purify_a_z(p1, phi)?, "z", p1, DensityMatrix::diag(1.0)?)
        }
        Some(rho) => {
            let mix = OrthogonalMixture::from_density(rho);
            let spectrum = rho.eigen();
            let proj = ProjectionChoice::with_phase(phi)
                .projection_in_basis(&spectrum.vec_large, &spectrum.vec_small);
            (purify_a_general(&mix, &proj)?, "rho", mix.p1(), *mix.rho1())
        }
    };
    Ok(json!({
        "basis": basis,
        "p1": p1,
        "phi": phi,
        "state": to_value(&state),
        "purity": state.purity(),
        "overlaps": { "p1_check": fidelity(&state, &reference) },
    }))
}

fn purify_a_report(a: &PurifyAArgs, inputs: &mut Inputs) -> Result<Value, Failure> {
    let rho: Option<DensityMatrix<f64>> = match &a.rho {
        Some(r) => Some(inputs.decode(r, "rho")?),
        None => None,
    };
    Ok(purify_a_report_for(a.p1, a.phi, rho.as_ref())?)
}

/// `purify-b` report; `grid` enables the oracle.
pub fn purify_b_report(
    rho: &DensityMatrix<f64>,
    grid: Option<(usize, usize)>,
) -> crate::error::Result<Value> {
    let b = purify_b(rho)?;
    let mut v = json!({
        "state": to_value(&b.state),
        "ket": to_value(&b.pure_state()),
        "p_tilde": b.p_tilde,
        "theta": b.theta,
        "fidelity": b.f_achieved,
    });
    if let Some((n, m)) = grid {
        let (_, f) = grid_oracle(rho, n, m)?;
        v["oracle_fidelity"] = json!(f);
        v["oracle_grid"] = json!([n, m]);
    }
    Ok(v)
}

/// `measure` report.
pub fn measure_report(
    psi: &PureState<f64>,
    mode: Mode,
    n: Option<u64>,
    seed: u64,
) -> crate::error::Result<Value> {
    let record = match n {
        None => Record::from_state(psi, mode),
        Some(n) => sample_ensemble(psi, &EnsembleConfig::new(n, seed)?, mode)?,
    };
    Ok(json!({
        "record": to_value(&record),
        "mixture": to_value(&record.mixture()),
        "metadata": { "mode": mode, "n": n, "seed": seed },
    }))
}

/// `chain` report with verdicts at `tol`.
pub fn chain_report(psi: &PureState<f64>, mode: Mode, tol: f64) -> crate::error::Result<Value> {
    let report = chain(mode, psi)?;
    let mut v = to_value(&report);
    let verdicts: Map<String, Value> = verify_inequalities_with_tol(&report, tol)
        .into_iter()
        .map(|x| (x.check.as_str().to_string(), to_value(&x)))
        .collect();
    v["verdicts"] = Value::Object(verdicts);
    Ok(v)
}

/// `dilation-check` report.
pub fn dilation_report_for(
    alpha: (f64, f64),
    beta: (f64, f64),
    dump_kraus: bool,
    tol: f64,
) -> crate::error::Result<Value> {
    let target = TargetAmplitudes::new(c(alpha.0, alpha.1), c(beta.0, beta.1))?;
    let u = dilation_unitary(&target);
    let direct = kraus_pair_from_target(&target);
    let recovered = kraus_from_unitary(&u)?;
    let unitarity = u.unitarity_residual();
    let round_trip = recovered.max_abs_diff(&direct);
    let det = u.det();
    let mut v = json!({
        "unitarity_residual": unitarity,
        "round_trip_residual": round_trip,
        "completeness_residual": recovered.completeness_residual(),
        "det": [det.re, det.im],
        "within_tolerance": unitarity < tol && round_trip < tol,
    });
    if dump_kraus {
        v["kraus"] = to_value(&recovered);
    }
    Ok(v)
}

fn dilation_report(a: &DilationArgs, tol: f64) -> Result<Value, Failure> {
    Ok(dilation_report_for(
        (a.alpha_re, a.alpha_im),
        (a.beta_re, a.beta_im),
        a.dump_kraus,
        tol,
    )?)
}

/// `montecarlo --format csv` table.
pub fn montecarlo_csv(run: &MonteCarloRun<f64>) -> String {
    let mode = run.summary.scenario;
    let names = FidelityName::for_mode(mode);
    let checks = Check::for_mode(mode);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "scenario".to_string(),
        "trial".into(),
        "p1".into(),
        "p2".into(),
        "p3".into(),
    ];
    header.extend(names.iter().map(|n| n.as_str().to_string()));
    header.extend(checks.iter().map(|c| format!("slack_{}", c.as_str())));
    w.write_record(&header).expect("in-memory write");
    let tol = run.summary.tolerance;
    for t in &run.trials {
        let mut row = vec![
            mode.as_str().to_string(),
            t.index.to_string(),
            fmt15(t.record.p1),
            fmt15(t.record.p2),
            fmt15(t.record.p3),
        ];
        match &t.report {
            Some(r) => {
                row.extend(
                    names
                        .iter()
                        .map(|n| r.get(*n).map(fmt15).unwrap_or_default()),
                );
                row.extend(
                    verify_inequalities_with_tol(r, tol)
                        .iter()
                        .map(|v| fmt15(v.slack)),
                );
            }
            None => row.extend(std::iter::repeat_n(
                String::new(),
                names.len() + checks.len(),
            )),
        }
        w.write_record(&row).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory write");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Shortest decimal for `round15(x)`.
pub fn fmt15(x: f64) -> String {
    serde_json::to_string(&round15(x)).expect("finite floats serialize")
}

fn round_value(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json!(round15(n.as_f64().expect("f64 number"))),
        Value::Array(a) => Value::Array(a.iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.iter().map(|(k, v)| (k.clone(), round_value(v))).collect())
        }
        other => other.clone(),
    }
}

/// Pretty JSON with every float rounded to 15 significant digits and a
/// trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_value(v)).expect("values serialize");
    s.push('\n');
    s
}
