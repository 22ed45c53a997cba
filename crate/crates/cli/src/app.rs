//! Command dispatch, human and JSON rendering, exit codes.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use fadel_core::finite::{check_implications, make_matrix_ring_2x2_f2, make_zmod, FiniteRing, ImplicationReport};
use fadel_core::oracle::{standard_oracle, DEFAULT_POLY_BOUND};
use fadel_core::ore::OreError;
use fadel_core::series::{laurent_witness, FieldOracle, LaurentError, OreFadelianOracle, PowerSeries};
use fadel_core::witness::{fadelian_witness, inverse_by_evaluation, weak_witness, WitnessError, WitnessPair};
use fadel_core::{Op, RatFun, Ring, Side};
use serde_json::{json, Value};

use crate::parse::{parse_op, parse_ratfun, parse_rational, split_list, unicode, InputError};

pub const SCHEMA: &str = "fadel/1";

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Usage = 2,
    Incomplete = 3,
    Violation = 4,
    Internal = 5,
}

impl ExitCode {
    fn status(self) -> &'static str {
        match self {
            ExitCode::Ok => "ok",
            ExitCode::Usage => "error",
            ExitCode::Incomplete => "incomplete",
            ExitCode::Violation => "violation",
            ExitCode::Internal => "internal",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fadel", version, about = "Exact computations in differential operator rings and finite rings")]
pub struct Cli {
    /// Emit one JSON document (schema `fadel/1`) instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print operators with δ, superscripts and `·`.
    #[arg(long, global = true)]
    pub unicode: bool,
    /// Largest polynomial degree tried by the scalar equation solver.
    #[arg(long, global = true, default_value_t = DEFAULT_POLY_BOUND)]
    pub bound: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Base {
    /// Rational coefficients.
    Q,
    /// Operator coefficients.
    Ore,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Euclidean division of X by Y.
    Divide {
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        x: String,
        y: String,
    },
    /// b, c with 1 = b*X + X*c.
    WeakWitness { x: String },
    /// B, C with X = A*B + C*A.
    Witness { x: String, a: String },
    /// Applies the operator U to the rational function F.
    Apply { u: String, f: String },
    /// Nonzero b, c with A*b = X*c (right) or b*A = c*X (left).
    Lcm {
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
        a: String,
        x: String,
    },
    /// Series B, C with P = Q*B + C*Q, from comma-separated coefficient lists.
    LaurentWitness {
        #[arg(long, default_value_t = 32)]
        prec: usize,
        #[arg(long, value_enum, default_value = "q")]
        base: Base,
        p: String,
        q: String,
    },
    /// Exhaustive predicates and implication checks on a finite ring.
    CheckRing {
        /// `zmod:<n>`, `m2f2`, `table:<file>` or `table:-` for stdin.
        #[arg(long)]
        ring: String,
    },
    /// The inverse of A, read off a weak witness of A*D.
    InverseEval { a: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Divide { .. } => "divide",
            Command::WeakWitness { .. } => "weak-witness",
            Command::Witness { .. } => "witness",
            Command::Apply { .. } => "apply",
            Command::Lcm { .. } => "lcm",
            Command::LaurentWitness { .. } => "laurent-witness",
            Command::CheckRing { .. } => "check-ring",
            Command::InverseEval { .. } => "inverse-eval",
        }
    }
}

/// Everything a run prints, and its exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

/// A finished command: text lines, JSON result, exit code.
struct Report {
    code: ExitCode,
    lines: Vec<String>,
    result: Value,
}

impl Report {
    fn ok(lines: Vec<String>, result: Value) -> Self {
        Report { code: ExitCode::Ok, lines, result }
    }
}

struct Failure {
    code: ExitCode,
    kind: &'static str,
    message: String,
    detail: Value,
}

impl Failure {
    fn new(code: ExitCode, kind: &'static str, message: impl ToString) -> Self {
        Failure { code, kind, message: message.to_string(), detail: Value::Null }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        let detail = match &e {
            InputError::Parse(p) => {
                json!({"line": p.line, "column": p.column, "expected": p.expected, "found": p.found})
            }
            _ => Value::Null,
        };
        Failure { code: ExitCode::Usage, kind: "parse", message: e.to_string(), detail }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        let (code, kind) = match e {
            WitnessError::OracleIncomplete { .. } | WitnessError::System(_) => {
                (ExitCode::Incomplete, "oracle-incomplete")
            }
            WitnessError::Unverified => (ExitCode::Internal, "unverified"),
            WitnessError::ZeroTarget | WitnessError::DegreeZeroTarget | WitnessError::ZeroArgument => {
                (ExitCode::Usage, "bad-input")
            }
        };
        Failure::new(code, kind, e)
    }
}

impl From<OreError> for Failure {
    fn from(e: OreError) -> Self {
        Failure::new(ExitCode::Usage, "bad-input", e)
    }
}

impl From<LaurentError> for Failure {
    fn from(e: LaurentError) -> Self {
        match e {
            LaurentError::OracleFailure { .. } => Failure::new(ExitCode::Incomplete, "oracle-incomplete", e),
            _ => Failure::new(ExitCode::Usage, "bad-input", e),
        }
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Output { code: ExitCode::Ok, stdout: e.to_string(), stderr: String::new() };
            }
            if args.iter().any(|a| a == "--json") {
                let failure = Failure::new(ExitCode::Usage, "usage", e.kind());
                return Output { code: ExitCode::Usage, stdout: envelope(None, Err(&failure)), stderr: e.to_string() };
            }
            return Output { code: ExitCode::Usage, stdout: String::new(), stderr: e.to_string() };
        }
    };
    let name = cli.command.name();
    let outcome = dispatch(&cli, stdin);
    let pretty = |s: String| if cli.unicode { unicode(&s) } else { s };
    match outcome {
        Ok(report) => {
            let stdout = if cli.json {
                envelope(Some(name), Ok(&report))
            } else {
                report.lines.into_iter().map(|l| pretty(l) + "\n").collect()
            };
            Output { code: report.code, stdout, stderr: String::new() }
        }
        Err(failure) => {
            let stderr = format!("fadel {name}: {}\n", failure.message);
            let stdout = if cli.json { envelope(Some(name), Err(&failure)) } else { String::new() };
            Output { code: failure.code, stdout, stderr }
        }
    }
}

fn envelope(command: Option<&str>, outcome: Result<&Report, &Failure>) -> String {
    let doc = match outcome {
        Ok(r) => json!({
            "schema": SCHEMA,
            "command": command,
            "status": r.code.status(),
            "exit_code": r.code as i32,
            "result": r.result,
        }),
        Err(f) => {
            let mut error = json!({"kind": f.kind, "message": f.message});
            if !f.detail.is_null() {
                error["detail"] = f.detail.clone();
            }
            json!({
                "schema": SCHEMA,
                "command": command,
                "status": f.code.status(),
                "exit_code": f.code as i32,
                "error": error,
            })
        }
    };
    serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Report, Failure> {
    let oracle = standard_oracle(cli.bound);
    match &cli.command {
        Command::Divide { side, x, y } => divide((*side).into(), &parse_op(x)?, &parse_op(y)?),
        Command::WeakWitness { x } => {
            let w = weak_witness(&parse_op(x)?, &oracle)?;
            Ok(witness_report(&w, "b*x + x*c = 1"))
        }
        Command::Witness { x, a } => {
            let w = fadelian_witness(&parse_op(x)?, &parse_op(a)?, &oracle)?;
            Ok(witness_report(&w, "x = a*b + c*a"))
        }
        Command::Apply { u, f } => {
            let value = parse_op(u)?.apply(&parse_ratfun(f)?);
            Ok(Report::ok(vec![value.to_string()], json!({"value": value.to_string()})))
        }
        Command::Lcm { side, a, x } => lcm((*side).into(), &parse_op(a)?, &parse_op(x)?),
        Command::LaurentWitness { prec, base, p, q } => match base {
            Base::Q => {
                let (p, q) = (series(p, parse_rational)?, series(q, parse_rational)?);
                laurent(&p, &q, FieldOracle, *prec)
            }
            Base::Ore => {
                let (p, q) = (series(p, parse_op)?, series(q, parse_op)?);
                laurent(&p, &q, OreFadelianOracle { oracle }, *prec)
            }
        },
        Command::CheckRing { ring } => {
            let ring = load_ring(ring, stdin)?;
            Ok(ring_report(&check_implications(&ring)))
        }
        Command::InverseEval { a } => {
            let a = parse_ratfun(a)?;
            if a.is_zero() {
                return Err(Failure::new(ExitCode::Usage, "bad-input", "zero has no inverse"));
            }
            let w = weak_witness(&Op::monomial(a.clone(), 1), &oracle)?;
            let u = inverse_by_evaluation(&w).ok_or_else(|| {
                Failure::new(ExitCode::Internal, "unverified", "witness does not evaluate to an inverse")
            })?;
            if !(&a * &u).is_one() {
                return Err(Failure::new(ExitCode::Internal, "unverified", "a*u is not 1"));
            }
            Ok(Report::ok(
                vec![
                    format!("b = {}", w.b),
                    format!("c = {}", w.c),
                    format!("inverse = {u}"),
                    "verified: a*inverse = 1".into(),
                ],
                json!({"b": w.b.to_string(), "c": w.c.to_string(), "inverse": u.to_string(), "verified": true}),
            ))
        }
    }
}

fn divide(side: Side, x: &Op, y: &Op) -> Result<Report, Failure> {
    let (q, r) = Op::divide(side, x, y)?;
    let (recomposed, law) = match side {
        Side::Left => (q.compose(y).add_op(&r), "x = q*y + r"),
        Side::Right => (y.compose(&q).add_op(&r), "x = y*q + r"),
    };
    if recomposed != *x || r.theta() >= y.theta() {
        return Err(Failure::new(ExitCode::Internal, "unverified", format!("division failed to recompose: {law}")));
    }
    Ok(Report::ok(
        vec![format!("q = {q}"), format!("r = {r}"), format!("verified: {law}")],
        json!({"side": side_name(side), "q": q.to_string(), "r": r.to_string(), "verified": true}),
    ))
}

fn lcm(side: Side, a: &Op, x: &Op) -> Result<Report, Failure> {
    let cm = Op::common_multiple(side, a, x)?;
    let (lhs, rhs, law) = match side {
        Side::Right => (a.compose(&cm.b), x.compose(&cm.c), "a*b = x*c = m"),
        Side::Left => (cm.b.compose(a), cm.c.compose(x), "b*a = c*x = m"),
    };
    if lhs != rhs || lhs != cm.m || cm.b.is_zero() || cm.c.is_zero() {
        return Err(Failure::new(ExitCode::Internal, "unverified", format!("common multiple fails {law}")));
    }
    Ok(Report::ok(
        vec![format!("b = {}", cm.b), format!("c = {}", cm.c), format!("m = {}", cm.m), format!("verified: {law}")],
        json!({"side": side_name(side), "b": cm.b.to_string(), "c": cm.c.to_string(), "m": cm.m.to_string(), "verified": true}),
    ))
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn witness_report(w: &WitnessPair<RatFun>, law: &str) -> Report {
    Report::ok(
        vec![format!("b = {}", w.b), format!("c = {}", w.c), format!("verified: {law}")],
        json!({"b": w.b.to_string(), "c": w.c.to_string(), "verified": true}),
    )
}

fn series<R, E>(list: &str, parse: impl Fn(&str) -> Result<R, E>) -> Result<PowerSeries<R>, Failure>
where
    R: Ring + 'static,
    Failure: From<E>,
{
    let coeffs = split_list(list).into_iter().map(parse).collect::<Result<Vec<R>, E>>()?;
    Ok(PowerSeries::from_coeffs(coeffs))
}

fn laurent<R, O>(p: &PowerSeries<R>, q: &PowerSeries<R>, oracle: O, prec: usize) -> Result<Report, Failure>
where
    R: Ring + std::fmt::Display + 'static,
    O: fadel_core::series::FadelianOracle<R> + 'static,
{
    let w = laurent_witness(p, q, oracle, prec)?;
    if !w.residual(prec).iter().all(Ring::is_zero) {
        return Err(Failure::new(ExitCode::Internal, "unverified", "truncated identity fails"));
    }
    let show = |s: &PowerSeries<R>| s.truncate(prec).iter().map(ToString::to_string).collect::<Vec<_>>();
    let (b, c) = (show(&w.b), show(&w.c));
    Ok(Report::ok(
        vec![
            format!("B = {}", b.join(", ")),
            format!("C = {}", c.join(", ")),
            format!("verified: P = Q*B + C*Q through X^{}", prec.saturating_sub(1)),
        ],
        json!({"precision": prec, "B": b, "C": c, "verified": true}),
    ))
}

fn load_ring(name: &str, stdin: &mut dyn Read) -> Result<FiniteRing, Failure> {
    let bad = |e: &dyn std::fmt::Display| Failure::new(ExitCode::Usage, "bad-input", e);
    if name == "m2f2" {
        return Ok(make_matrix_ring_2x2_f2());
    }
    if let Some(n) = name.strip_prefix("zmod:") {
        let n: usize = n.parse().map_err(|e| bad(&format!("zmod:{n}: {e}")))?;
        return make_zmod(n).map_err(|e| bad(&e));
    }
    if let Some(path) = name.strip_prefix("table:") {
        let mut text = String::new();
        if path == "-" {
            stdin.read_to_string(&mut text).map_err(|e| bad(&e))?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| bad(&format!("{path}: {e}")))?;
        }
        return FiniteRing::parse_table(path, &text).map_err(|e| bad(&e));
    }
    Err(bad(&format!("unknown ring {name:?}; expected zmod:<n>, m2f2 or table:<file>")))
}

fn ring_report(report: &ImplicationReport) -> Report {
    let ore = |o: Option<bool>| o.map_or("n/a".to_string(), |b| b.to_string());
    let mut lines = vec![
        format!("ring {} ({} elements)", report.ring, report.size),
        format!("weakly_fadelian={}", report.weakly_fadelian),
        format!("fadelian={}", report.fadelian),
        format!("integral={}", report.integral),
        format!("simple={}", report.simple),
        format!("commutative={}", report.commutative),
        format!("division_ring={}", report.division_ring),
        format!("right_ore={}", ore(report.right_ore)),
        format!("left_ore={}", ore(report.left_ore)),
    ];
    lines.extend(report.implications.iter().map(|i| format!("{:<8} {}", i.status.to_string(), i.name)));
    let violations = report.violations();
    lines.push(format!("violations={}", violations.len()));
    let result = json!({
        "ring": report.ring,
        "size": report.size,
        "predicates": {
            "weakly_fadelian": report.weakly_fadelian,
            "fadelian": report.fadelian,
            "integral": report.integral,
            "simple": report.simple,
            "commutative": report.commutative,
            "division_ring": report.division_ring,
            "right_ore": report.right_ore,
            "left_ore": report.left_ore,
        },
        "implications": report.implications.iter().map(|i| json!({"name": i.name, "status": i.status.to_string().to_lowercase()})).collect::<Vec<_>>(),
        "violations": violations,
    });
    let code = if violations.is_empty() { ExitCode::Ok } else { ExitCode::Violation };
    Report { code, lines, result }
}
