//! The `valivt` command line.
//!
//! Every subcommand prints a human-readable report, or with `--json` a JSON
//! object tagged `"schema": "valivt/1"`. Failures exit with
//! [`Error::exit_code`]: 2 for hypothesis witnesses, 3 for precision, 4 for
//! bad input. A counterexample whose checks do not all pass exits with 1.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::counterexample::{
    divisibility_counterexample, finite_residue_counterexample, locally_constant_ivt_failure, CounterexampleReport,
};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::group::{parse_q, GroupValue, Q};
use crate::ivt::{ivt_enumerate, ivt_solve, Certificate, IvtQuery, IvtSolution};
use crate::parse::parse_series;
use crate::series::{self, RestrictedSeries};
use crate::tropical::{PolygonSlopes, Segment, TropicalForm};

pub const SCHEMA: &str = "valivt/1";
pub const DEFAULT_PRECISION: i64 = 8;

#[derive(Parser, Debug)]
#[command(name = "valivt", version, about = "Valuations of polynomials and restricted series; the valuation IVT")]
pub struct Cli {
    /// puiseux, laurent or padic:<p>
    #[arg(long, global = true, default_value = "puiseux")]
    field: String,
    #[arg(long, global = true)]
    json: bool,
    /// Working precision for series, e.g. 8 or 17/2.
    #[arg(long, global = true, env = "VALIVT_PRECISION", allow_hyphen_values = true)]
    precision: Option<String>,
    /// Offset into the enumeration order of solutions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polygon: root valuations with multiplicities.
    Polygon {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// The tropical function of a polynomial, at a point or sampled.
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// lo:hi:step
        #[arg(long, allow_hyphen_values = true)]
        sample: Option<String>,
        #[arg(long)]
        csv: bool,
    },
    /// Find c with v(f(c)) = alpha and v(c) between v(a) and v(b).
    Ivt {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Reports showing the field hypotheses cannot be dropped.
    #[command(subcommand)]
    Counterexample(CounterexampleCmd),
    /// Restricted power series.
    #[command(subcommand)]
    Series(SeriesCmd),
}

#[derive(Subcommand, Debug)]
enum CounterexampleCmd {
    FiniteResidue {
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// lo:hi integer range of valuations to sample.
        #[arg(long, default_value = "-3:3", allow_hyphen_values = true)]
        grid: String,
    },
    Divisibility {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        h: String,
    },
    LocallyConstant {
        #[arg(long, default_value = "t", allow_hyphen_values = true)]
        k: String,
    },
}

#[derive(Args, Debug)]
struct SeriesArg {
    /// head: [c0, c1, ...]; tail: geometric(c, rho, start)
    #[arg(long, allow_hyphen_values = true)]
    series: String,
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    /// Normalize at a point and factor as P·B.
    Factor {
        #[command(flatten)]
        s: SeriesArg,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        at: String,
    },
    Ivt {
        #[command(flatten)]
        s: SeriesArg,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    Phi {
        #[command(flatten)]
        s: SeriesArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Valuations of zeros at or above v(at).
    Zeros {
        #[command(flatten)]
        s: SeriesArg,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        at: String,
    },
}

/// Output of a successful command: JSON fields, text lines, optional CSV,
/// and the exit code.
struct Report {
    json: Map<String, Value>,
    text: String,
    csv: Option<String>,
    code: i32,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        let json = match json {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Report { json, text, csv: None, code: 0 }
    }
}

fn group_value(s: &str) -> Result<GroupValue> {
    s.parse()
}

fn precision(cli: &Cli) -> Result<GroupValue> {
    match &cli.precision {
        None => Ok(GroupValue::int(DEFAULT_PRECISION)),
        Some(p) => {
            let v = group_value(p)?;
            if !v.is_positive() || v.is_infinite() || v.rank() != Some(1) {
                return Err(Error::Precondition(format!("precision must be a positive rational, got {p}")));
            }
            Ok(v)
        }
    }
}

pub fn slopes_json(s: &PolygonSlopes) -> Value {
    Value::Array(
        s.iter()
            .map(|r| json!({"h": r.h.to_string(), "mult": r.multiplicity}))
            .collect(),
    )
}

pub fn segments_json(segs: &[Segment]) -> Value {
    Value::Array(
        segs.iter()
            .map(|s| {
                json!({
                    "segment": [s.lo.as_ref().map_or("-inf".to_string(), |l| l.to_string()), s.hi.to_string()],
                    "slope": s.slope,
                    "intercept": s.intercept.to_string(),
                })
            })
            .collect(),
    )
}

pub fn solution_json(s: &IvtSolution) -> Value {
    let mut m = json!({
        "c": s.c.to_string(),
        "v_c": s.vc.to_string(),
        "achieved": s.achieved.to_string(),
        "case": s.certificate.case(),
        "retries": s.certificate.retries(),
    });
    match &s.certificate {
        Certificate::SegmentInversion { intercept, slope, .. } => {
            m["segment"] = json!({"A": intercept.to_string(), "B": slope});
        }
        Certificate::BreakpointShift { shift_point, .. } => {
            m["shift_point"] = json!(shift_point.to_string());
        }
    }
    m
}

fn parse_sample(s: &str) -> Result<(Q, Q, Q)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Syntax { offset: 0, expected: vec!["lo:hi:step".into()], found: s.to_string() };
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<Q> = parts.iter().map(|p| parse_q(p.trim()).ok_or_else(bad)).collect::<Result<_>>()?;
    let (lo, hi, step) = (nums[0].clone(), nums[1].clone(), nums[2].clone());
    if step <= Q::from_integer(0.into()) || lo > hi {
        return Err(Error::Precondition(format!("sample range {s} is empty or has a non-positive step")));
    }
    Ok((lo, hi, step))
}

fn polygon_cmd(spec: &FieldSpec, poly: &str) -> Result<Report> {
    let f = spec.parse_poly(poly)?;
    let form = TropicalForm::new(spec, &f)?;
    let slopes = form.newton_polygon();
    let json = json!({
        "poly": f.to_string(),
        "slopes": slopes_json(&slopes),
        "zero_roots": form.order_at_zero(),
        "phi": segments_json(&form.segments()),
    });
    let mut text = format!("root valuations of {f}: {slopes}");
    if form.order_at_zero() > 0 {
        text.push_str(&format!("\nroots at 0: {}", form.order_at_zero()));
    }
    Ok(Report::new(json, text))
}

fn phi_cmd(spec: &FieldSpec, poly: &str, gamma: Option<&str>, sample: Option<&str>, csv: bool) -> Result<Report> {
    let f = spec.parse_poly(poly)?;
    let form = TropicalForm::new(spec, &f)?;
    let points: Vec<GroupValue> = match (gamma, sample) {
        (Some(g), None) => vec![group_value(g)?],
        (None, Some(s)) => {
            let (lo, hi, step) = parse_sample(s)?;
            let mut out = Vec::new();
            let mut x = lo;
            while x <= hi {
                out.push(GroupValue::scalar(x.clone()));
                x += &step;
            }
            out
        }
        _ => return Err(Error::Precondition("give exactly one of --gamma and --sample".into())),
    };
    let rows: Vec<(GroupValue, GroupValue)> = points.into_iter().map(|g| (g.clone(), form.phi(&g))).collect();
    let json = json!({
        "poly": f.to_string(),
        "points": rows.iter().map(|(g, v)| json!({"gamma": g.to_string(), "phi": v.to_string()})).collect::<Vec<_>>(),
        "phi": segments_json(&form.segments()),
    });
    let text = rows.iter().map(|(g, v)| format!("phi({g}) = {v}")).collect::<Vec<_>>().join("\n");
    let mut r = Report::new(json, text);
    if csv {
        let mut out = String::from("gamma,phi\n");
        for (g, v) in &rows {
            out.push_str(&format!("{g},{v}\n"));
        }
        r.csv = Some(out);
    }
    Ok(r)
}

fn ivt_cmd(spec: &FieldSpec, seed: u64, poly: &str, a: &str, b: &str, alpha: &str, count: Option<usize>) -> Result<Report> {
    let q = IvtQuery {
        spec: *spec,
        f: spec.parse_poly(poly)?,
        a: spec.parse_element(a)?,
        b: spec.parse_element(b)?,
        alpha: group_value(alpha)?,
    };
    let skip = usize::try_from(seed).map_err(|_| Error::Precondition("seed too large".into()))?;
    match count {
        None if skip == 0 => {
            let s = ivt_solve(&q)?;
            Ok(Report::new(solution_json(&s), s.to_string()))
        }
        _ => {
            let k = count.unwrap_or(1);
            let all = ivt_enumerate(&q, k + skip)?;
            let sols = &all[skip..];
            let json = json!({"solutions": sols.iter().map(solution_json).collect::<Vec<_>>()});
            let text = sols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Report::new(json, text))
        }
    }
}

fn report_out(r: CounterexampleReport) -> Result<Report> {
    let code = if r.passed() { 0 } else { 1 };
    let mut text = format!("{} over {}\n", r.construction, r.model);
    for c in &r.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        text.push_str(&format!("{mark} {}: expected {}, observed {}\n", c.input, c.expected, c.observed));
    }
    if let Some(n) = &r.note {
        text.push_str(&format!("note: {n}\n"));
    }
    text.push_str(&format!("conclusion: {}", serde_json::to_value(r.conclusion).expect("enum").as_str().unwrap_or("")));
    let json = serde_json::to_value(&r).expect("report serializes");
    let mut out = Report::new(json, text);
    out.code = code;
    Ok(out)
}

fn int_range(s: &str) -> Result<Vec<GroupValue>> {
    let bad = || Error::Syntax { offset: 0, expected: vec!["lo:hi".into()], found: s.to_string() };
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo..=hi).map(GroupValue::int).collect())
}

fn counterexample_cmd(spec: &FieldSpec, cmd: &CounterexampleCmd) -> Result<Report> {
    let r = match cmd {
        CounterexampleCmd::FiniteResidue { p, grid } => finite_residue_counterexample(*p, &int_range(grid)?)?,
        CounterexampleCmd::Divisibility { n, h } => divisibility_counterexample(*n, &group_value(h)?)?,
        CounterexampleCmd::LocallyConstant { k } => locally_constant_ivt_failure(spec, &spec.parse_element(k)?)?,
    };
    report_out(r)
}

fn series_input(spec: &FieldSpec, s: &SeriesArg) -> Result<RestrictedSeries> {
    if !spec.is_series() {
        return Err(Error::FieldMismatch(format!("series commands need a series model, not {spec}")));
    }
    let s = parse_series(&s.series)?;
    for c in s.head() {
        spec.check(c)?;
    }
    if let series::Tail::Geometric { coeff, ratio, .. } = s.tail() {
        spec.check(coeff)?;
        spec.check(ratio)?;
    }
    Ok(s)
}

fn coeffs_json(f: &crate::poly::Poly) -> Value {
    Value::Array(
        f.coeffs()
            .iter()
            .map(|c| json!({"value": c.to_string(), "precision": c.precision().map(crate::group::fmt_q)}))
            .collect(),
    )
}

fn series_cmd(spec: &FieldSpec, pi: &GroupValue, cmd: &SeriesCmd) -> Result<Report> {
    match cmd {
        SeriesCmd::Factor { s, at } => {
            let s = series_input(spec, s)?;
            let a = spec.parse_element(at)?;
            let (norm, w) = series::factor_at(&s, &a, pi)?;
            let b = w.b.to_poly();
            let json = json!({
                "h": norm.h.to_string(),
                "N": w.n,
                "precision": pi.to_string(),
                "normalized": norm.series.to_string(),
                "P": w.p.to_string(),
                "P_coeffs": coeffs_json(&w.p),
                "B": b.as_ref().map_or_else(|| w.b.to_string(), |b| b.to_string()),
            });
            let text = format!("h = {}\nN = {}\nP = {}\nB = {}", norm.h, w.n, w.p, json["B"].as_str().unwrap_or(""));
            Ok(Report::new(json, text))
        }
        SeriesCmd::Ivt { s, a, b, alpha } => {
            let s = series_input(spec, s)?;
            let sol = series::ivt_series_solve(spec, &s, &spec.parse_element(a)?, &spec.parse_element(b)?, &group_value(alpha)?, pi)?;
            Ok(Report::new(solution_json(&sol), sol.to_string()))
        }
        SeriesCmd::Phi { s, beta, gamma } => {
            let s = series_input(spec, s)?;
            let (beta, gamma) = (group_value(beta)?, group_value(gamma)?);
            let v = series::phi_series(&s, &beta, &gamma, pi)?;
            Ok(Report::new(json!({"beta": beta.to_string(), "gamma": gamma.to_string(), "phi": v.to_string()}), format!("phi({gamma}) = {v}")))
        }
        SeriesCmd::Zeros { s, at } => {
            let s = series_input(spec, s)?;
            let a = spec.parse_element(at)?;
            let z = series::zero_valuations_above(&s, &a, pi)?;
            Ok(Report::new(json!({"zeros": slopes_json(&z)}), format!("zero valuations >= v({a}): {z}")))
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let spec: FieldSpec = cli.field.parse()?;
    match &cli.command {
        Command::Polygon { poly } => polygon_cmd(&spec, poly),
        Command::Phi { poly, gamma, sample, csv } => phi_cmd(&spec, poly, gamma.as_deref(), sample.as_deref(), *csv),
        Command::Ivt { poly, a, b, alpha, count } => ivt_cmd(&spec, cli.seed, poly, a, b, alpha, *count),
        Command::Counterexample(c) => counterexample_cmd(&spec, c),
        Command::Series(c) => series_cmd(&spec, &precision(cli)?, c),
    }
}

fn error_json(e: &Error) -> Value {
    json!({"schema": SCHEMA, "error": {"kind": e.kind(), "message": e.to_string()}})
}

/// Runs the CLI on `args` (including the program name), writing to `out`
/// and `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let written = match dispatch(&cli) {
        Ok(r) => {
            let res = if let Some(csv) = &r.csv {
                write!(out, "{csv}")
            } else if cli.json {
                let mut m = Map::new();
                m.insert("schema".into(), json!(SCHEMA));
                m.extend(r.json);
                writeln!(out, "{}", Value::Object(m))
            } else {
                writeln!(out, "{}", r.text)
            };
            res.map(|_| r.code)
        }
        Err(e) => {
            let res = if cli.json { writeln!(out, "{}", error_json(&e)) } else { writeln!(err, "error: {e}") };
            res.map(|_| e.exit_code())
        }
    };
    written.unwrap_or(1)
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
