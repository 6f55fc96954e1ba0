//! Command-line front end: coefficient tables, kernel and Bessel evaluation,
//! and the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 no
//! convergence.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::bigint::BigInt;
use num::complex::Complex64;
use num::traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::b2::{self, B2Integral};
use crate::coeffs::{self, SumMode};
use crate::error::{Error, Result};
use crate::group::{DihedralSystem, ElementKind};
use crate::verify::{self, Suite, VerifyConfig};
use crate::{CoeffTable, ComplexMultiplicity, Dunkl, ExactMultiplicity, Rational};

#[derive(Parser, Debug)]
#[command(name = "dunkl", version, about = "Dunkl operators and kernels for dihedral root systems I2(s)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Factorization counts c_m(g) (exact) and resolvent coefficients C_n(g).
    Coeffs(CoeffsArgs),
    /// The Dunkl kernel E_k(x, y).
    Kernel(EvalArgs),
    /// The generalized Bessel function E_k^G(x, y).
    Bessel(EvalArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Dihedral parameter s ≥ 2.
    #[arg(long, default_value_t = 4)]
    pub s: u32,
    /// Multiplicity on even-index reflections ("1", "0.5", "3/2").
    #[arg(long, default_value = "1", value_parser = parse_rational, allow_hyphen_values = true)]
    pub k1: Rational,
    /// Multiplicity on odd-index reflections; must equal k1 for odd s.
    #[arg(long, default_value = "1", value_parser = parse_rational, allow_hyphen_values = true)]
    pub k2: Rational,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    #[arg(long, default_value_t = 3)]
    pub n_max: usize,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: [f64; 2],
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: [f64; 2],
    /// Relative truncation tolerance of the series.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 40)]
    pub max_degree: usize,
    /// Quadrature nodes per variable for the integral method.
    #[arg(long, default_value_t = b2::DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Restrict the suites to this s.
    #[arg(long)]
    pub s: Option<u32>,
    /// Replace the multiplicity grid (both values required).
    #[arg(long, value_parser = parse_rational, requires = "k2", allow_hyphen_values = true)]
    pub k1: Option<Rational>,
    #[arg(long, value_parser = parse_rational, requires = "k1", allow_hyphen_values = true)]
    pub k2: Option<Rational>,
    #[arg(long, default_value_t = b2::DEFAULT_NODES)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    BesselIntegral,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteArg {
    Coeffs,
    Resolvent,
    Intertwining,
    Eigen,
    Recovery,
    B2integral,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Coeffs => Suite::Coeffs,
            SuiteArg::Resolvent => Suite::Resolvent,
            SuiteArg::Intertwining => Suite::Intertwining,
            SuiteArg::Eigen => Suite::Eigen,
            SuiteArg::Recovery => Suite::Recovery,
            SuiteArg::B2integral => Suite::B2Integral,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Parses `"3"`, `"-0.25"` or `"3/2"` exactly.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let t = text.trim();
    if t.contains('/') {
        return Rational::from_str(t).map_err(|e| format!("invalid rational '{text}': {e}"));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if body.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return Err(format!("invalid number '{text}': expected an integer, decimal or p/q"));
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|e| e.to_string())?;
    let den = num::pow(BigInt::from(10), frac.len());
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// Parses `"a,b"`.
pub fn parse_point(text: &str) -> std::result::Result<[f64; 2], String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected a point 'a,b', got '{text}'"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .ok()
            .filter(|f| f.is_finite())
            .ok_or_else(|| format!("invalid coordinate '{v}'"))
    };
    Ok([parse(a)?, parse(b)?])
}

fn rational_json(r: &Rational) -> Value {
    let int = |b: &BigInt| b.to_i64().map_or_else(|| Value::String(b.to_string()), Value::from);
    json!({ "num": int(r.numer()), "den": int(r.denom()) })
}

fn float(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn seed() -> u64 {
    std::env::var("DUNKL_SEED").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(verify::DEFAULT_SEED)
}

fn kind_name(k: ElementKind) -> &'static str {
    match k {
        ElementKind::Rotation => "rotation",
        ElementKind::Reflection => "reflection",
    }
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Coeffs(a) => cmd_coeffs(a, out),
        Command::Kernel(a) => cmd_eval(a, false, out),
        Command::Bessel(a) => cmd_eval(a, true, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Validation(format!("cannot write output: {e}"))
}

fn cmd_coeffs(a: &CoeffsArgs, out: &mut dyn Write) -> Result<i32> {
    let sys = DihedralSystem::new(a.system.s)?;
    let exact = ExactMultiplicity::new(&sys, a.system.k1.clone(), a.system.k2.clone())?;
    let table = CoeffTable::by_recursion(sys, exact, a.m_max);
    let k = ComplexMultiplicity::real(&sys, float(&a.system.k1), float(&a.system.k2))?;
    let mut resolvent = Vec::new();
    for n in 1..=a.n_max {
        for g in sys.elements() {
            resolvent.push((n, g, coeffs::resolvent_coefficient(n, &g, &sys, &k, SumMode::Series)?));
        }
    }
    match a.system.format {
        Format::Json => {
            let c: Vec<Value> = (0..=a.m_max)
                .flat_map(|m| sys.elements().map(move |g| (m, g)))
                .map(|(m, g)| {
                    json!({
                        "kind": kind_name(g.kind()), "index": g.index(), "orbit": g.orbit().to_string(),
                        "m": m, "value": rational_json(table.get(m, &g)),
                    })
                })
                .collect();
            let big_c: Vec<Value> = resolvent
                .iter()
                .map(|(n, g, v)| {
                    json!({
                        "kind": kind_name(g.kind()), "index": g.index(), "orbit": g.orbit().to_string(),
                        "n": n, "value_re": v.re, "value_im": v.im,
                    })
                })
                .collect();
            let doc = json!({
                "s": sys.s(),
                "k1": rational_json(&a.system.k1),
                "k2": rational_json(&a.system.k2),
                "c": c,
                "C": big_c,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io)?;
        }
        Format::Csv => {
            writeln!(out, "quantity,kind,index,orbit,m,value,value_im").map_err(io)?;
            for m in 0..=a.m_max {
                for g in sys.elements() {
                    writeln!(out, "c,{},{},{},{},{},", kind_name(g.kind()), g.index(), g.orbit(), m, table.get(m, &g)).map_err(io)?;
                }
            }
            for (n, g, v) in &resolvent {
                writeln!(out, "C,{},{},{},{},{},{}", kind_name(g.kind()), g.index(), g.orbit(), n, v.re, v.im).map_err(io)?;
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ValueReport {
    quantity: &'static str,
    method: &'static str,
    value_re: f64,
    value_im: f64,
    #[serde(rename = "N_used")]
    n_used: Option<usize>,
    tail_estimate: Option<f64>,
    nodes: Option<usize>,
}

fn cmd_eval(a: &EvalArgs, bessel: bool, out: &mut dyn Write) -> Result<i32> {
    if !(a.tol > 0.0) {
        return Err(Error::Validation(format!("--tol must be positive, got {}", a.tol)));
    }
    let sys = DihedralSystem::new(a.system.s)?;
    let k = ComplexMultiplicity::real(&sys, float(&a.system.k1), float(&a.system.k2))?;
    // validates odd s with unequal values
    ExactMultiplicity::new(&sys, a.system.k1.clone(), a.system.k2.clone())?;
    let ops = Dunkl::new(sys, k);
    let quantity = if bessel { "generalized_bessel" } else { "dunkl_kernel" };
    let report = match a.method {
        Method::Series => {
            let v = if bessel {
                ops.generalized_bessel(a.x, a.y, a.tol, a.max_degree)?
            } else {
                ops.dunkl_kernel(a.x, a.y, a.tol, a.max_degree)?
            };
            let v = v.require_converged()?;
            ValueReport {
                quantity,
                method: "series",
                value_re: v.value.re,
                value_im: v.value.im,
                n_used: Some(v.n_used),
                tail_estimate: Some(v.tail_estimate),
                nodes: None,
            }
        }
        Method::BesselIntegral => {
            let integral = B2Integral::new(&ops, a.nodes)?;
            let v = if bessel { Complex64::new(integral.bessel(a.x, a.y), 0.0) } else { integral.kernel(a.x, a.y)? };
            ValueReport {
                quantity,
                method: "bessel-integral",
                value_re: v.re,
                value_im: if v.im.is_zero() { 0.0 } else { v.im },
                n_used: None,
                tail_estimate: None,
                nodes: Some(a.nodes),
            }
        }
    };
    match a.system.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&report).expect("serializable")).map_err(io)?,
        Format::Csv => {
            let opt = |v: Option<String>| v.unwrap_or_default();
            writeln!(out, "quantity,method,value_re,value_im,N_used,tail_estimate,nodes").map_err(io)?;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                report.quantity,
                report.method,
                report.value_re,
                report.value_im,
                opt(report.n_used.map(|v| v.to_string())),
                opt(report.tail_estimate.map(|v| v.to_string())),
                opt(report.nodes.map(|v| v.to_string())),
            )
            .map_err(io)?;
        }
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some(s) = a.s {
        DihedralSystem::new(s)?;
    }
    let k = match (&a.k1, &a.k2) {
        (Some(k1), Some(k2)) => {
            if let Some(s) = a.s {
                ExactMultiplicity::new(&DihedralSystem::new(s)?, k1.clone(), k2.clone())?;
            }
            Some((k1.clone(), k2.clone()))
        }
        _ => None,
    };
    if a.nodes == 0 {
        return Err(Error::Validation("--nodes must be positive".into()));
    }
    let cfg = VerifyConfig { s: a.s, k, nodes: a.nodes, seed: seed() };
    let suite = Suite::from(a.suite);
    let reports = verify::run_suite(suite, &cfg);
    let passed = reports.iter().all(|r| r.passed);
    match a.format {
        Format::Json => {
            let doc = json!({
                "suite": suite.name(),
                "passed": passed,
                "parameters": {
                    "s": a.s,
                    "k1": a.k1.as_ref().map(rational_json),
                    "k2": a.k2.as_ref().map(rational_json),
                    "nodes": a.nodes,
                    "seed": cfg.seed,
                },
                "criteria": reports,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable")).map_err(io)?;
        }
        Format::Csv => {
            writeln!(out, "criterion,title,check,passed,worst,tolerance,samples").map_err(io)?;
            for r in &reports {
                for c in &r.checks {
                    let opt = |v: Option<f64>| v.map_or_else(String::new, |v| v.to_string());
                    writeln!(
                        out,
                        "{},{},\"{}\",{},{},{},{}",
                        r.id,
                        r.title,
                        c.name.replace('"', "\"\""),
                        c.passed,
                        opt(c.worst),
                        opt(c.tolerance),
                        c.samples
                    )
                    .map_err(io)?;
                }
            }
        }
    }
    Ok(if passed { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("dunkl").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn rational_parsing() {
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        assert_eq!(parse_rational("1").unwrap(), r(1, 1));
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("3/2").unwrap(), r(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        for bad in ["", "abc", "1e3", "1..2", "-", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("1,-0.5").unwrap(), [1.0, -0.5]);
        assert!(parse_point("1").is_err());
        assert!(parse_point("1,nan").is_err());
    }

    #[test]
    fn coeffs_rows() {
        let (code, out, _) = run_str(&["coeffs", "--s", "4", "--k1", "1", "--k2", "1", "--m-max", "3", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("c,reflection,") && l.ends_with(",3,16,")));
        let (_, out, _) = run_str(&["coeffs", "--s", "4", "--k1", "1", "--k2", "2", "--m-max", "2"]);
        let doc: Value = serde_json::from_str(&out).unwrap();
        let row = doc["c"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["kind"] == "rotation" && r["index"] == 2 && r["m"] == 2)
            .unwrap();
        assert_eq!(row["value"], json!({"num": 10, "den": 1}));
        let (code, _, err) = run_str(&["coeffs", "--s", "3", "--k1", "1", "--k2", "2"]);
        assert_eq!(code, 2, "{err}");
    }

    #[test]
    fn kernel_values() {
        let (code, out, _) = run_str(&["kernel", "--s", "4", "--k1", "0", "--k2", "0", "--x", "1,0", "--y", "1,0"]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        let v = doc["value_re"].as_f64().unwrap();
        assert!((v - 1f64.exp()).abs() <= 1e-10 * v);
        assert!(doc["N_used"].as_u64().is_some() && doc["tail_estimate"].as_f64().is_some());

        let (_, out, _) = run_str(&["kernel", "--x", "0.3,0.5", "--y", "0,0"]);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["value_re"].as_f64(), Some(1.0));

        let args = ["--s", "4", "--k1", "1", "--k2", "1", "--x", "0.6,0.2", "--y", "0.9,-0.4"];
        let series = |cmd: &str, method: &str| {
            let mut a = vec![cmd];
            a.extend_from_slice(&args);
            a.extend_from_slice(&["--method", method]);
            let (code, out, err) = run_str(&a);
            assert_eq!(code, 0, "{err}");
            serde_json::from_str::<Value>(&out).unwrap()["value_re"].as_f64().unwrap()
        };
        for cmd in ["kernel", "bessel"] {
            let (s, q) = (series(cmd, "series"), series(cmd, "bessel-integral"));
            assert!((s - q).abs() <= 1e-6 * s.abs(), "{cmd}: {s} vs {q}");
        }
    }

    #[test]
    fn exit_codes() {
        let (code, _, _) = run_str(&["kernel", "--x", "3,1", "--y", "4,-2", "--tol", "1e-15", "--max-degree", "5"]);
        assert_eq!(code, 3);
        let (code, _, _) = run_str(&["kernel", "--s", "1", "--x", "1,0", "--y", "1,0"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["kernel", "--x", "1", "--y", "1,0"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["kernel", "--method", "bessel-integral", "--s", "6", "--x", "1,0.3", "--y", "1,0"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["verify", "--suite", "coeffs", "--s", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn verify_output_is_deterministic() {
        let (code, a, _) = run_str(&["verify", "--suite", "coeffs", "--s", "4"]);
        assert_eq!(code, 0);
        let (_, b, _) = run_str(&["verify", "--suite", "coeffs", "--s", "4"]);
        assert_eq!(a, b);
        let doc: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(doc["passed"], json!(true));
    }
}
