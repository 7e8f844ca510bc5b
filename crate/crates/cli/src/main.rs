//! `matfun`: command-line front end.
//!
//! Exit codes: 0 definitive answer, 1 usage or input error, 2 undetermined,
//! 3 eigenvalue outside the image of an entire function.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matfun::critical::{critical_values, CriticalSet};
use matfun::entire::{catalog, eval_entire, solve_entire, EntireFunction};
use matfun::field::{Backend, BackendDescriptor, ComplexField, Field, FiniteField};
use matfun::matrix::{mat_eval_poly, Matrix};
use matfun::oracle::{oracle_critical_values, oracle_image_search};
use matfun::parse::parse_poly;
use matfun::poly::Poly;
use matfun::report::{
    critical_set_json, entire_json, envelope, matrix_json, oracle_critical_json, oracle_report_json, poly_json,
    replay, rows_from_json, solve_entire_report, solve_report, ReportField,
};
use matfun::solver::{solve, SolveOutcome};
use matfun::Error;

#[derive(Parser)]
#[command(name = "matfun", version, about = "Critical values, preimages and certificates for matrix polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical values and surjectivity of a polynomial or catalog function
    Analyze(Common),
    /// Find X with f(X) = A, or certify that none exists
    Solve(WithMatrix),
    /// Evaluate f(A)
    Eval(WithMatrix),
    /// Replay a JSON report produced by `solve`
    Verify {
        /// Path to the report, or `-` for standard input
        #[arg(long)]
        report: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exhaustive search over small finite fields: critical values, or
    /// preimages of --matrix when given
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Matrix to search preimages of, as for `solve`
        #[arg(long)]
        matrix: Option<String>,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Inline polynomial in x (`x^3 - 3x`), a JSON coefficient array (low
    /// degree first), a JSON polynomial object, or @path
    #[arg(long, conflicts_with = "function", required_unless_present = "function")]
    poly: Option<String>,
    /// Catalog entire function: exp, sin or cos (complex backend)
    #[arg(long = "fn", id = "function")]
    function: Option<String>,
    /// Q, C, F5, F2^4 or a JSON descriptor such as {"kind":"Fq","p":2,"m":2}
    #[arg(long)]
    backend: Option<String>,
    /// Tolerance of the complex backend
    #[arg(long, env = "MATFUN_EPS")]
    eps: Option<f64>,
    /// Extension degree bound for oracle searches
    #[arg(long, default_value_t = 1)]
    ext_bound: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Clone)]
struct WithMatrix {
    #[command(flatten)]
    common: Common,
    /// JSON rows (`[[1,1],[0,1]]`), a JSON matrix object, or @path
    #[arg(long)]
    matrix: String,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Text,
}

struct Output {
    report: Value,
    code: u8,
}

fn load(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(s)
        }
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_json(s: &str) -> Result<Value, Error> {
    serde_json::from_str(s).map_err(|e| Error::Parse {
        position: byte_offset(s, e.line(), e.column()),
        message: e.to_string(),
    })
}

fn byte_offset(s: &str, line: usize, column: usize) -> usize {
    let before: usize = s.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    before + column.saturating_sub(1)
}

fn backend(common: &Common) -> Result<Backend, Error> {
    let default = if common.function.is_some() { "C" } else { "Q" };
    let mut d: BackendDescriptor = common.backend.as_deref().unwrap_or(default).parse()?;
    if let (BackendDescriptor::C { eps }, Some(e)) = (&mut d, common.eps) {
        *eps = e;
    }
    Backend::from_descriptor(&d)
}

fn read_poly<F: ReportField>(field: &F, arg: &str) -> Result<Poly<F>, Error> {
    let text = load(arg)?;
    let t = text.trim();
    if t.starts_with('{') {
        let p: Poly<F> = matfun::report::poly_from_json(&parse_json(t)?)?;
        if p.field() != field {
            return Err(Error::BackendMismatch {
                left: p.field().describe(),
                right: field.describe(),
            });
        }
        Ok(p)
    } else if t.starts_with('[') {
        let v = parse_json(t)?;
        let coeffs = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("expected a coefficient array".into()))?
            .iter()
            .map(|c| field.elem_from_json(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field.clone(), coeffs))
    } else {
        parse_poly(field, t)
    }
}

fn read_matrix<F: Field>(field: &F, arg: &str) -> Result<Matrix<F>, Error> {
    let v = parse_json(load(arg)?.trim())?;
    let rows = match &v {
        Value::Object(_) => v.get("rows").ok_or_else(|| Error::InvalidInput("missing key 'rows'".into()))?,
        _ => &v,
    };
    rows_from_json(field, rows)
}

fn entire_fn(common: &Common) -> Result<Option<(EntireFunction, ComplexField)>, Error> {
    let Some(name) = &common.function else { return Ok(None) };
    let fun = catalog(name)?;
    match backend(common)? {
        Backend::C(c) => Ok(Some((fun, c))),
        other => Err(Error::UnsupportedBackend(format!("{} (entire functions need C)", other.describe()))),
    }
}

fn exit_for<F: Field>(o: &SolveOutcome<F>) -> u8 {
    match o {
        SolveOutcome::Undetermined { .. } => 2,
        SolveOutcome::NotInDomain { .. } => 3,
        _ => 0,
    }
}

fn surjective<F: Field>(set: &CriticalSet<F>) -> Result<bool, Error> {
    match set {
        CriticalSet::Empty => Ok(true),
        CriticalSet::All { .. } => Ok(false),
        CriticalSet::Finite {
            values,
            algebraic,
            ambiguous,
        } => {
            if !values.is_empty() || !algebraic.is_empty() {
                Ok(false)
            } else if ambiguous.is_empty() {
                Ok(true)
            } else {
                Err(Error::NumericallyDefective(format!(
                    "{} candidate critical value(s) could not be decided",
                    ambiguous.len()
                )))
            }
        }
    }
}

fn analyze_poly<F: ReportField>(field: F, poly: &str) -> Result<Output, Error> {
    let f = read_poly(&field, poly)?;
    let set = critical_values(&f)?;
    let report = envelope(
        "analyze",
        json!({
            "backend": field.descriptor(),
            "poly": poly_json(&f),
            "critical_values": critical_set_json(&field, &set),
            "surjective": surjective(&set)?,
        }),
    );
    Ok(Output { report, code: 0 })
}

fn solve_poly<F: ReportField>(field: F, poly: &str, matrix: &str) -> Result<Output, Error> {
    let f = read_poly(&field, poly)?;
    let a = read_matrix(&field, matrix)?;
    let o = solve(&f, &a)?;
    Ok(Output {
        report: solve_report(&f, &a, &o),
        code: exit_for(&o),
    })
}

fn eval_poly<F: ReportField>(field: F, poly: &str, matrix: &str) -> Result<Output, Error> {
    let f = read_poly(&field, poly)?;
    let a = read_matrix(&field, matrix)?;
    let value = mat_eval_poly(&f, &a)?;
    let report = envelope(
        "eval",
        json!({"backend": field.descriptor(), "poly": poly_json(&f), "matrix": matrix_json(&a), "value": matrix_json(&value)}),
    );
    Ok(Output { report, code: 0 })
}

/// Dispatches a generic routine on the run-time backend.
macro_rules! with_backend {
    ($b:expr, $func:ident ( $($arg:expr),* )) => {
        match $b {
            Backend::Fq(k) => $func::<FiniteField>(k, $($arg),*),
            Backend::Q(k) => $func(k, $($arg),*),
            Backend::C(k) => $func(k, $($arg),*),
        }
    };
}

fn run(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Analyze(common) => {
            if let Some((fun, _)) = entire_fn(common)? {
                return Ok(Output {
                    report: envelope("analyze", json!({"function": fun.name(), "analysis": entire_json(&fun)})),
                    code: 0,
                });
            }
            let poly = common.poly.as_deref().expect("clap enforces --poly");
            with_backend!(backend(common)?, analyze_poly(poly))
        }
        Command::Solve(w) => {
            if let Some((fun, c)) = entire_fn(&w.common)? {
                let a = read_matrix(&c, &w.matrix)?;
                let o = solve_entire(&fun, &a)?;
                return Ok(Output {
                    report: solve_entire_report(&fun, &a, &o),
                    code: exit_for(&o),
                });
            }
            let poly = w.common.poly.as_deref().expect("clap enforces --poly");
            with_backend!(backend(&w.common)?, solve_poly(poly, &w.matrix))
        }
        Command::Eval(w) => {
            if let Some((fun, c)) = entire_fn(&w.common)? {
                let a = read_matrix(&c, &w.matrix)?;
                let value = eval_entire(&fun, &a)?;
                return Ok(Output {
                    report: envelope(
                        "eval",
                        json!({"backend": c.descriptor(), "function": fun.name(), "matrix": matrix_json(&a), "value": matrix_json(&value)}),
                    ),
                    code: 0,
                });
            }
            let poly = w.common.poly.as_deref().expect("clap enforces --poly");
            with_backend!(backend(&w.common)?, eval_poly(poly, &w.matrix))
        }
        Command::Verify { report, .. } => {
            let text = if report == "-" { load("@-")? } else { load(&format!("@{report}"))? };
            let r = replay(&parse_json(&text)?)?;
            Ok(Output {
                report: envelope(
                    "verify",
                    json!({"outcome": r.outcome, "verified": r.pass, "residual": r.residual}),
                ),
                code: 0,
            })
        }
        Command::Oracle { common, matrix } => {
            if common.function.is_some() {
                return Err(Error::UnsupportedBackend("the oracle works over finite fields only".into()));
            }
            let Backend::Fq(k) = backend(common)? else {
                return Err(Error::UnsupportedBackend("the oracle works over finite fields only".into()));
            };
            let f = read_poly(&k, common.poly.as_deref().expect("clap enforces --poly"))?;
            let body = match matrix {
                None => json!({
                    "mode": "critical_values",
                    "backend": k.descriptor(),
                    "poly": poly_json(&f),
                    "critical_values": oracle_critical_json(&oracle_critical_values(&f, common.ext_bound)?, common.ext_bound),
                }),
                Some(m) => {
                    let a = read_matrix(&k, m)?;
                    json!({
                        "mode": "image_search",
                        "backend": k.descriptor(),
                        "poly": poly_json(&f),
                        "matrix": matrix_json(&a),
                        "report": oracle_report_json(&oracle_image_search(&f, &a, common.ext_bound)?),
                    })
                }
            };
            Ok(Output {
                report: envelope("oracle", body),
                code: 0,
            })
        }
    }
}

fn format_of(cmd: &Command) -> Format {
    match cmd {
        Command::Analyze(c) => c.format,
        Command::Solve(w) | Command::Eval(w) => w.common.format,
        Command::Verify { format, .. } => *format,
        Command::Oracle { common, .. } => common.format,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Analyze(_) => "analyze",
        Command::Solve(_) => "solve",
        Command::Eval(_) => "eval",
        Command::Verify { .. } => "verify",
        Command::Oracle { .. } => "oracle",
    }
}

fn error_json(command: &str, e: &Error) -> Value {
    let mut err = json!({"message": e.to_string()});
    if let Error::Parse { position, .. } = e {
        err["position"] = json!(position);
    }
    envelope(command, json!({"error": err}))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(p) if p.len() == 2 => {
            let (re, im) = (p[0].as_f64().unwrap_or(f64::NAN), p[1].as_f64().unwrap_or(f64::NAN));
            if im == 0.0 {
                format!("{re}")
            } else {
                format!("{re}{im:+}i")
            }
        }
        other => other.to_string(),
    }
}

fn rows_text(m: &Value) -> String {
    m["rows"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| {
                    let cells: Vec<String> = r.as_array().into_iter().flatten().map(scalar).collect();
                    format!("  [{}]", cells.join(", "))
                })
                .collect::<Vec<_>>()
                .join("\n")
        })
        .unwrap_or_default()
}

fn values_text(set: &Value) -> String {
    let vals: Vec<String> = set["values"].as_array().into_iter().flatten().map(|v| scalar(&v["t"])).collect();
    format!("{} {{{}}}", set["kind"].as_str().unwrap_or("?"), vals.join(", "))
}

/// Human-readable rendering of a JSON report; verdicts are read from the
/// report itself so both formats agree.
fn text(report: &Value) -> String {
    let mut out = Vec::new();
    if let Some(e) = report.get("error") {
        out.push(format!("error: {}", e["message"].as_str().unwrap_or("?")));
        return out.join("\n");
    }
    match report["command"].as_str().unwrap_or("") {
        "analyze" => {
            if let Some(a) = report.get("analysis") {
                out.push(format!("function: {}", a["name"].as_str().unwrap_or("?")));
                out.push(format!("critical values: {}", values_text(&a["critical_values"])));
                out.push(format!("image is all matrices with eigenvalues in f(C): {}", a["image_is_full_domain"]));
            } else {
                out.push(format!("polynomial: {}", report["poly"]["text"].as_str().unwrap_or("?")));
                out.push(format!("critical values: {}", values_text(&report["critical_values"])));
                out.push(format!("surjective: {}", report["surjective"]));
            }
        }
        "solve" => {
            let o = &report["outcome"];
            out.push(format!("verdict: {}", o["kind"].as_str().unwrap_or("?")));
            match o["kind"].as_str() {
                Some("preimage") => out.push(format!("X =\n{}", rows_text(&o["x"]))),
                Some("no_preimage") => {
                    let c = &o["certificate"];
                    out.push(format!("critical eigenvalue t = {} on a block of size {}", scalar(&c["t"]), c["size"]));
                    for p in c["fiber"].as_array().into_iter().flatten() {
                        out.push(format!("  fiber point {} (multiplicity {}), f'(u) = {}", scalar(&p["u"]), p["multiplicity"], scalar(&p["derivative"])));
                    }
                }
                Some("not_in_domain") => {
                    let vals: Vec<String> = o["offending"].as_array().into_iter().flatten().map(scalar).collect();
                    out.push(format!("eigenvalues outside the image: {}", vals.join(", ")));
                }
                Some("undetermined") => out.push(format!("reason: {}", o["reason"].as_str().unwrap_or("?"))),
                _ => {}
            }
        }
        "eval" => out.push(format!("f(A) =\n{}", rows_text(&report["value"]))),
        "verify" => {
            out.push(format!("outcome: {}", report["outcome"].as_str().unwrap_or("?")));
            out.push(format!("verified: {}", report["verified"]));
            if let Some(r) = report["residual"].as_f64() {
                out.push(format!("residual: {r:.3e}"));
            }
        }
        "oracle" => {
            if let Some(cv) = report.get("critical_values") {
                out.push(format!("critical values over extensions up to degree {}: {}", cv["ext_bound"], values_text(cv)));
            } else {
                let r = &report["report"];
                out.push(format!("verdict: {}", r["verdict"]["kind"].as_str().unwrap_or("?")));
                if let Some(x) = r["verdict"].get("x") {
                    out.push(format!("X =\n{}", rows_text(x)));
                }
                out.push(format!("candidates tested: {}", r["candidates_tested"].as_str().unwrap_or("?")));
            }
        }
        _ => out.push(report.to_string()),
    }
    out.join("\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = format_of(&cli.command);
    let (report, code) = match run(&cli.command) {
        Ok(o) => (o.report, o.code),
        Err(e) => {
            eprintln!("matfun: {e}");
            (error_json(command_name(&cli.command), &e), 1)
        }
    };
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable"),
        Format::Text => text(&report),
    };
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout(), "{rendered}");
    ExitCode::from(code)
}
