//! `qflag`: fiber checks, Einstein scans and the conventions ledger.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 unsupported input.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qflag_core::cartan::FlagSpec;
use qflag_core::conventions::Conventions;
use qflag_core::einstein::{einstein_scan, RicciReport};
use qflag_core::fibercalc::{default_shat_normalization, CheckResult, FiberCalculus, FiberDump};
use qflag_core::podles::run_pipeline;
use qflag_core::{Error, Scalar};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "qflag", version, about = "Exact lifting maps and Einstein checks for quantum flag manifolds")]
struct Cli {
    /// key=value file supplying defaults for the flags below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the lifting maps on the cotangent fiber of a flag such as A3:2
    FiberCheck {
        flag: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the geometry pipeline and scan the Einstein condition over a q-interval
    Einstein {
        flag: String,
        #[arg(long)]
        qmin: Option<f64>,
        #[arg(long)]
        qmax: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the conventions ledger
    Conventions {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// scalar multiplying the braiding to give Ŝ, e.g. "q^2"
    #[arg(long)]
    shat_norm: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

/// A failed run: exit code and message for stderr.
struct Failure {
    code: u8,
    message: String,
    /// Report to emit even though the run failed.
    report: Option<String>,
}

impl Failure {
    fn unsupported(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into(), report: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::NotIrreducible(_)
            | Error::NodeOutOfRange { .. }
            | Error::NotImplementedForFlag(_)
            | Error::NormalizationRejected(_)
            | Error::InvalidConfig(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string(), report: None }
    }
}

/// Settings after merging the config file under the command line.
struct Settings {
    qmin: f64,
    qmax: f64,
    samples: usize,
    shat_norm: Option<Scalar>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::unsupported(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::unsupported(format!("config line {}: expected key=value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if !["qmin", "qmax", "samples", "shat-norm", "format", "out"].contains(&key.as_str()) {
            return Err(Failure::unsupported(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn settings(
    config: &BTreeMap<String, String>,
    common: &Common,
    qmin: Option<f64>,
    qmax: Option<f64>,
    samples: Option<usize>,
) -> Result<Settings, Failure> {
    fn from_cfg<T: std::str::FromStr>(cfg: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, Failure> {
        cfg.get(key)
            .map(|v| v.parse::<T>().map_err(|_| Failure::unsupported(format!("config: bad value {v:?} for {key}"))))
            .transpose()
    }
    let format = match (common.format, config.get("format")) {
        (Some(f), _) => Some(f),
        (None, Some(v)) => {
            Some(Format::from_str(v, true).map_err(|_| Failure::unsupported(format!("config: bad format {v:?}")))?)
        }
        (None, None) => None,
    };
    let shat_norm = match common.shat_norm.clone().or_else(|| config.get("shat-norm").cloned()) {
        Some(s) => Some(s.parse::<Scalar>()?),
        None => None,
    };
    Ok(Settings {
        qmin: qmin.or(from_cfg(config, "qmin")?).unwrap_or(0.5),
        qmax: qmax.or(from_cfg(config, "qmax")?).unwrap_or(2.0),
        samples: samples.or(from_cfg(config, "samples")?).unwrap_or(97),
        shat_norm,
        format,
        out: common.out.clone().or_else(|| config.get("out").map(PathBuf::from)),
    })
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn fiber_check(flag: &str, st: &Settings) -> Result<String, Failure> {
    let flag: FlagSpec = flag.parse()?;
    let norm = st.shat_norm.clone().unwrap_or_else(|| default_shat_normalization(&flag));
    let fc = FiberCalculus::new(&flag, &norm)?;
    let checks = fc.run_checks();
    let passed = checks.iter().all(|c| c.passed);
    let dump: Option<FiberDump> = if passed { Some(fc.dump()?) } else { None };
    let report = match st.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({
            "flag": flag,
            "shat_normalization": norm,
            "passed": passed,
            "checks": checks,
            "dump": dump,
        })),
        Format::Pretty => pretty_checks(&flag, &norm, &checks),
        Format::Csv => return Err(Failure::unsupported("fiber-check supports --format json or pretty")),
    };
    if passed {
        Ok(report)
    } else {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail.as_deref().unwrap_or("failed")))
            .collect();
        Err(Failure { code: 1, message: format!("check failed: {}", failed.join("; ")), report: Some(report) })
    }
}

fn pretty_checks(flag: &FlagSpec, norm: &Scalar, checks: &[CheckResult]) -> String {
    let mut s = format!("flag {flag}, Ŝ normalization {norm}\n");
    for c in checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status} {}", c.name));
        if let Some(d) = &c.detail {
            s.push_str(&format!(" ({d})"));
        }
        s.push('\n');
    }
    s
}

fn einstein(flag: &str, st: &Settings) -> Result<String, Failure> {
    let flag: FlagSpec = flag.parse()?;
    if flag.to_string() != "A1:1" {
        return Err(Failure::unsupported(format!(
            "no geometry backend for {flag}: the algebra-level pipeline is implemented only for A1:1"
        )));
    }
    if st.qmin > st.qmax {
        return Err(Failure::unsupported(format!("qmin = {} exceeds qmax = {}", st.qmin, st.qmax)));
    }
    let norm = st.shat_norm.clone().unwrap_or_else(|| default_shat_normalization(&flag));
    let pipeline = run_pipeline(&norm)?;
    let report = einstein_scan(&pipeline.inputs.a, &pipeline.inputs.b, st.qmin, st.qmax, st.samples)?;
    let text = match st.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => report.to_csv()?,
        Format::Pretty => pretty_report(&report),
    };
    let neighbourhood_ok = !report.contains_one || report.neighbourhood_of_one.is_some();
    if report.einstein_ok && report.anchor_ok && neighbourhood_ok {
        Ok(text)
    } else {
        let bad = report.q_samples.iter().filter(|s| !s.einstein_ok).count();
        Err(Failure {
            code: 1,
            message: format!(
                "Einstein condition not verified: {bad} failing samples, anchor a(1) = b(1) {}",
                if report.anchor_ok { "holds" } else { "fails" }
            ),
            report: Some(text),
        })
    }
}

fn pretty_report(r: &RicciReport) -> String {
    let opt = |x: &Option<Scalar>| x.as_ref().map(|s| s.to_string()).unwrap_or_else(|| "undefined".into());
    let mut s = String::new();
    s.push_str(&format!("a      = {}\nb      = {}\na + b  = {}\n", r.a, r.b, r.a_plus_b));
    s.push_str(&format!("c1     = {}\nc2     = {}\nlambda = {}\n", opt(&r.c1), opt(&r.c2), opt(&r.lambda)));
    s.push_str(&format!("interval [{}, {}], {} samples\n", r.qmin, r.qmax, r.q_samples.len()));
    let failing = r.q_samples.iter().filter(|x| !x.einstein_ok).count();
    s.push_str(&format!("failing samples: {failing}\n"));
    s.push_str(&format!("failure points in interval: {}\n", r.failure_points.len()));
    for p in &r.failure_points {
        s.push_str(&format!("  q in [{}, {}]\n", p.q_lo, p.q_hi));
    }
    if let Some(n) = &r.neighbourhood_of_one {
        s.push_str(&format!("root-free neighbourhood of 1: q in [{}, {}]\n", n.q_lo, n.q_hi));
    }
    s.push_str(&format!("a(1) = b(1): {}\neinstein_ok: {}\n", r.anchor_ok, r.einstein_ok));
    s
}

fn conventions(st: &Settings) -> Result<String, Failure> {
    let c = Conventions::current()?;
    match st.format.unwrap_or(Format::Json) {
        Format::Json => Ok(c.to_json()? + "\n"),
        Format::Pretty => {
            let v = serde_json::to_value(&c).expect("ledger serializes");
            let mut s = String::new();
            for (k, v) in v.as_object().expect("ledger is an object") {
                match v {
                    serde_json::Value::Array(xs) => {
                        s.push_str(&format!("{k}:\n"));
                        for x in xs {
                            s.push_str(&format!("  {}\n", x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())));
                        }
                    }
                    serde_json::Value::String(x) => s.push_str(&format!("{k}: {x}\n")),
                    other => s.push_str(&format!("{k}: {other}\n")),
                }
            }
            Ok(s)
        }
        Format::Csv => Err(Failure::unsupported("conventions supports --format json or pretty")),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure { code: 1, message: format!("cannot write {}: {e}", p.display()), report: None }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    let (result, st) = match &cli.command {
        Command::FiberCheck { flag, common } => {
            let st = settings(&config, common, None, None, None)?;
            (fiber_check(flag, &st), st)
        }
        Command::Einstein { flag, qmin, qmax, samples, common } => {
            let st = settings(&config, common, *qmin, *qmax, *samples)?;
            (einstein(flag, &st), st)
        }
        Command::Conventions { common } => {
            let st = settings(&config, common, None, None, None)?;
            (conventions(&st), st)
        }
    };
    match result {
        Ok(text) => emit(&text, &st.out),
        Err(mut f) => {
            if let Some(r) = f.report.take() {
                emit(&r, &st.out)?;
            }
            Err(f)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
