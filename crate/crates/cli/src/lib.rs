//! Command-line front end for `mldo-core`.

pub mod config;
pub mod expr;
pub mod series;

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mldo_core::annihilate::{dwt, frobenius_solve, mason_mlde, monic_annihilator, mord, AnnihilatorCertificate};
use mldo_core::families::{verify_suite_with, SuiteOptions};
use mldo_core::merore::{ore_pair, ORE_CAP};
use mldo_core::mldo::{apply_form, apply_series, DivisionSide};
use mldo_core::scalar::parse_rat;
use mldo_core::spectra::{charpoly, construct_monic, construct_quasimonic, map_solution_space};
use mldo_core::{Error, MerOperator, ModForm, Operator, Rat, Result};
use serde_json::{json, Value};

use config::Defaults;
use expr::{parse, parse_form, parse_homogeneous_operator, parse_operator};
use series::{series_from_spec, SeriesValue};

fn rat_arg(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "mldo", version, about = "Exact algebra of modular linear differential operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Weight k, an integer or a/b.
    #[arg(long, global = true, value_parser = rat_arg, allow_hyphen_values = true)]
    weight: Option<Rat>,
    /// Operator order n (for mapspace: the number N of shared roots).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Truncation bound T: series are exact below q^T.
    #[arg(long, global = true, value_parser = rat_arg)]
    terms: Option<Rat>,
    /// Exponent grid 1/N.
    #[arg(long, global = true)]
    grid: Option<u64>,
    /// Builtin series spec; may be repeated.
    #[arg(long, global = true)]
    series: Vec<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// key = value file with defaults for terms, grid and cyclotomic_order.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an expression; with --terms, the q-expansion of a form.
    Expand { expr: String },
    /// Apply an operator at --weight to a form, or to --series below --terms.
    Apply { op: String, form: Option<String> },
    /// Division with remainder by b (right unless --left).
    Divide {
        a: String,
        b: String,
        #[arg(long)]
        left: bool,
    },
    /// Exact quotient of a by b.
    Quo {
        a: String,
        b: String,
        #[arg(long)]
        left: bool,
    },
    /// Greatest common right divisor, denominators cleared.
    Gcrd { a: String, b: String },
    /// Least common left multiple, denominators cleared.
    Lclm { a: String, b: String },
    /// Monic a', b' with a'·a = b'·b.
    Orepair {
        a: String,
        b: String,
        #[arg(long, default_value_t = ORE_CAP)]
        cap: usize,
    },
    /// Characteristic polynomial at --weight, factored over Q.
    Charpoly { op: String },
    /// Operator with prescribed characteristic roots at --weight.
    Construct {
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        /// Build a quasimonic operator of this weight instead of a monic one.
        #[arg(long, allow_hyphen_values = true)]
        quasimonic: Option<i64>,
    },
    /// Map the kernel of a into the kernel of some c through b (--order N).
    Mapspace {
        a: String,
        b: String,
        #[arg(long)]
        force: bool,
    },
    /// Monic annihilator of --order for a quasimodular form at --weight.
    Annihilate { form: String },
    /// Least order of a monic annihilator.
    Mord {
        form: String,
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
    /// Differential weight k - s.
    Dwt {
        form: String,
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
    /// Frobenius solutions below --terms.
    Frobenius { op: String },
    /// Wronskian operator of --series (or of the Frobenius solutions of op).
    Mason { op: Option<String> },
    /// Operator killing products of solutions of a and b.
    Symprod { a: String, b: String },
    /// Run the verification suite.
    Verify {
        #[arg(long)]
        threads: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::Apply { .. } => "apply",
            Command::Divide { .. } => "divide",
            Command::Quo { .. } => "quo",
            Command::Gcrd { .. } => "gcrd",
            Command::Lclm { .. } => "lclm",
            Command::Orepair { .. } => "orepair",
            Command::Charpoly { .. } => "charpoly",
            Command::Construct { .. } => "construct",
            Command::Mapspace { .. } => "mapspace",
            Command::Annihilate { .. } => "annihilate",
            Command::Mord { .. } => "mord",
            Command::Dwt { .. } => "dwt",
            Command::Frobenius { .. } => "frobenius",
            Command::Mason { .. } => "mason",
            Command::Symprod { .. } => "symprod",
            Command::Verify { .. } => "verify",
        }
    }

    fn positional(&self) -> Vec<&str> {
        match self {
            Command::Expand { expr } => vec![expr],
            Command::Apply { op, form } => std::iter::once(op.as_str()).chain(form.as_deref()).collect(),
            Command::Divide { a, b, .. }
            | Command::Quo { a, b, .. }
            | Command::Gcrd { a, b }
            | Command::Lclm { a, b }
            | Command::Orepair { a, b, .. }
            | Command::Mapspace { a, b, .. }
            | Command::Symprod { a, b } => vec![a, b],
            Command::Charpoly { op } | Command::Frobenius { op } => vec![op],
            Command::Annihilate { form } | Command::Mord { form, .. } | Command::Dwt { form, .. } => vec![form],
            Command::Mason { op } => op.as_deref().into_iter().collect(),
            Command::Construct { roots, .. } => vec![roots],
            Command::Verify { .. } => vec![],
        }
    }
}

/// Text for humans, a JSON value for machines.
struct Output {
    text: String,
    result: Value,
    /// Commands such as `verify` report failure without an error value.
    ok: bool,
}

impl Output {
    fn new(text: impl Into<String>, result: Value) -> Self {
        Output {
            text: text.into(),
            result,
            ok: true,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

struct Ctx {
    opts: Opts,
    defaults: Defaults,
}

impl Ctx {
    fn weight(&self) -> Result<Rat> {
        self.opts.weight.clone().ok_or_else(|| usage("--weight is required"))
    }

    fn order(&self) -> Result<usize> {
        self.opts.order.ok_or_else(|| usage("--order is required"))
    }

    fn terms(&self) -> Rat {
        self.opts.terms.clone().unwrap_or_else(|| self.defaults.terms.clone())
    }

    fn grid(&self) -> u64 {
        self.opts.grid.unwrap_or(self.defaults.grid)
    }

    fn series(&self, spec: &str) -> Result<SeriesValue> {
        series_from_spec(spec, &self.terms(), self.grid())?.in_field(self.defaults.cyclotomic_order)
    }
}

fn op_json(a: &Operator) -> Value {
    json!({"operator": a.to_string(), "order": a.ord(), "weight": a.weight()})
}

fn cleared(a: &MerOperator) -> (ModForm, Operator) {
    a.clear_denoms()
}

fn mer(text: &str) -> Result<MerOperator> {
    Ok(MerOperator::from_modular(&parse_homogeneous_operator(text)?))
}

fn cert_output(cert: Option<AnnihilatorCertificate>, what: &str) -> Output {
    match cert {
        Some(c) => Output::new(
            c.operator.to_string(),
            json!({"operator": c.operator.to_string(), "order": c.order, "weight": c.weight.to_string(), "verified": c.verified}),
        ),
        None => Output::new(format!("no monic annihilator {what}"), Value::Null),
    }
}

fn series_list_json(list: &[SeriesValue]) -> Value {
    Value::Array(list.iter().map(|s| Value::String(s.to_string())).collect())
}

fn execute(cmd: &Command, ctx: &Ctx) -> Result<Output> {
    match cmd {
        Command::Expand { expr } => {
            let a = parse(expr)?;
            match (&ctx.opts.terms, a.ord()) {
                (Some(t), Some(0) | None) => {
                    let s = a.coeff(0).qexp(t)?;
                    Ok(Output::new(s.to_string(), json!({"normal_form": a.to_string(), "qexp": s.to_string()})))
                }
                _ => Ok(Output::new(
                    a.to_string(),
                    json!({"normal_form": a.to_string(), "order": a.ord(), "weight": a.weight()}),
                )),
            }
        }
        Command::Apply { op, form } => {
            let a = parse(op)?;
            let k = ctx.weight()?;
            match (form, ctx.opts.series.as_slice()) {
                (Some(f), []) => {
                    let r = apply_form(&a, &k, &parse_form(f)?)?;
                    Ok(Output::new(r.to_string(), Value::String(r.to_string())))
                }
                (None, [spec]) => {
                    let t = ctx.terms();
                    let r = match ctx.series(spec)? {
                        SeriesValue::Rat(s) => SeriesValue::Rat(apply_series(&a, &k, &s, &t)?),
                        SeriesValue::Cyc(s) => SeriesValue::Cyc(apply_series(&a, &k, &s, &t)?),
                    };
                    Ok(Output::new(r.to_string(), Value::String(r.to_string())))
                }
                _ => Err(usage("apply takes either a form argument or one --series")),
            }
        }
        Command::Divide { a, b, left } => {
            let (a, b) = (parse_operator(a)?, parse_operator(b)?);
            let side = if *left { DivisionSide::Left } else { DivisionSide::Right };
            if b.is_monic() {
                let (q, r) = match side {
                    DivisionSide::Right => a.divide_monic_right(&b)?,
                    DivisionSide::Left => a.divide_monic_left(&b)?,
                };
                Ok(Output::new(
                    format!("quotient: {q}\nremainder: {r}"),
                    json!({"quotient": q.to_string(), "remainder": r.to_string()}),
                ))
            } else {
                let d = b.top();
                let g = match side {
                    DivisionSide::Right => a.divide_general_right(&b, &d)?,
                    DivisionSide::Left => a.divide_general_left(&b, &d)?,
                };
                Ok(Output::new(
                    format!("multiplier: {}\nquotient: {}\nremainder: {}", g.multiplier, g.quotient, g.remainder),
                    json!({"multiplier": g.multiplier.to_string(), "quotient": g.quotient.to_string(), "remainder": g.remainder.to_string()}),
                ))
            }
        }
        Command::Quo { a, b, left } => {
            let side = if *left { DivisionSide::Left } else { DivisionSide::Right };
            let q = parse_operator(a)?.exact_div(&parse_operator(b)?, side)?;
            Ok(Output::new(q.to_string(), op_json(&q)))
        }
        Command::Gcrd { a, b } => {
            let (a, b) = (mer(a)?, mer(b)?);
            let g = a.gcrd(&b)?;
            let bezout = &(&g.a_cof * &a) + &(&g.b_cof * &b) == g.g;
            let (m, g0) = cleared(&g.g);
            Ok(Output::new(
                g0.to_string(),
                json!({"operator": g0.to_string(), "order": g0.ord(), "denominator": m.to_string(), "bezout_verified": bezout}),
            ))
        }
        Command::Lclm { a, b } => {
            let l = mer(a)?.lclm(&mer(b)?)?;
            let (m, l0) = cleared(&l);
            Ok(Output::new(
                l0.to_string(),
                json!({"operator": l0.to_string(), "order": l0.ord(), "denominator": m.to_string()}),
            ))
        }
        Command::Orepair { a, b, cap } => {
            let (a1, b1) = ore_pair(&parse_homogeneous_operator(a)?, &parse_homogeneous_operator(b)?, *cap)?;
            Ok(Output::new(
                format!("a': {a1}\nb': {b1}"),
                json!({"a_prime": a1.to_string(), "b_prime": b1.to_string()}),
            ))
        }
        Command::Charpoly { op } => {
            let c = charpoly(&ctx.weight()?, &parse_operator(op)?)?;
            Ok(Output::new(
                c.to_string(),
                json!({
                    "factored": c.to_string(),
                    "polynomial": c.poly.display_with("λ"),
                    "rational_roots": c.rational_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "residual": c.residual.display_with("λ"),
                    "identically_zero": c.is_zero,
                }),
            ))
        }
        Command::Construct { roots, quasimonic } => {
            let k = ctx.weight()?;
            let roots: Vec<Rat> = roots.split(',').map(parse_rat).collect::<Result<_>>()?;
            let a = match quasimonic {
                Some(l) => construct_quasimonic(&k, &roots, *l)?,
                None => construct_monic(&k, &roots)?,
            };
            Ok(Output::new(a.to_string(), op_json(&a)))
        }
        Command::Mapspace { a, b, force } => {
            let m = map_solution_space(
                &ctx.weight()?,
                &parse_homogeneous_operator(a)?,
                &parse_homogeneous_operator(b)?,
                ctx.order()?,
                *force,
            )?;
            Ok(Output::new(
                format!("c: {}\nd: {}\nremainder: {}", m.c, m.d, m.remainder),
                json!({
                    "c": m.c.to_string(),
                    "d": m.d.to_string(),
                    "common_roots": m.common.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "lambda_star": m.lambda_star.to_string(),
                    "remainder": m.remainder.to_string(),
                    "remainder_in_z": m.remainder_in_z,
                }),
            ))
        }
        Command::Annihilate { form } => {
            let n = ctx.order()?;
            let cert = monic_annihilator(&parse_form(form)?, &ctx.weight()?, n)?;
            Ok(cert_output(cert, &format!("of order {n}")))
        }
        Command::Mord { form, cap } => {
            let cert = mord(&parse_form(form)?, &ctx.weight()?, *cap)?;
            Ok(cert_output(cert, &format!("of order at most {cap}")))
        }
        Command::Dwt { form, cap } => {
            let (w, cert) = dwt(&parse_form(form)?, *cap)?;
            Ok(Output::new(
                w.to_string(),
                json!({"dwt": w, "annihilator": cert.map(|c| c.operator.to_string())}),
            ))
        }
        Command::Frobenius { op } => {
            let sols = frobenius_solve(&parse_operator(op)?, &ctx.weight()?, &ctx.terms())?;
            let sols: Vec<SeriesValue> = sols.into_iter().map(SeriesValue::Rat).collect();
            let text = sols.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Output::new(text, series_list_json(&sols)))
        }
        Command::Mason { op } => {
            let k = ctx.weight()?;
            let sols = match (op, ctx.opts.series.as_slice()) {
                (Some(op), []) => frobenius_solve(&parse_operator(op)?, &k, &ctx.terms())?,
                (None, specs) if !specs.is_empty() => specs
                    .iter()
                    .map(|s| ctx.series(s)?.to_rat().ok_or_else(|| usage(format!("{s} is not a rational series"))))
                    .collect::<Result<_>>()?,
                _ => return Err(usage("mason takes an operator or at least one --series")),
            };
            let r = mason_mlde(&sols, &k)?;
            let shown = r.monic.as_ref().or(r.operator.as_ref()).map(|a| a.to_string());
            let text = match (&shown, r.multiplier_exponent) {
                (Some(s), None) => s.clone(),
                (Some(s), Some(e)) => format!("{s}\nmultiplier exponent: {e}"),
                (None, _) => "no operator".into(),
            };
            Ok(Output::new(
                text,
                json!({
                    "inequality_ok": r.inequality_ok,
                    "monic": r.monic.map(|a| a.to_string()),
                    "multiplier_exponent": r.multiplier_exponent,
                    "operator": r.operator.map(|a| a.to_string()),
                }),
            ))
        }
        Command::Symprod { a, b } => {
            let s = mer(a)?.symmetric_product(&mer(b)?)?;
            let (m, s0) = cleared(&s);
            Ok(Output::new(
                s0.to_string(),
                json!({"operator": s0.to_string(), "order": s0.ord(), "denominator": m.to_string()}),
            ))
        }
        Command::Verify { threads } => {
            let mut opts = SuiteOptions::new(ctx.terms());
            if let Some(n) = threads {
                opts.threads = *n;
            }
            let r = verify_suite_with(&opts);
            let entries: Vec<Value> = r
                .entries
                .iter()
                .map(|e| json!({"name": e.name, "status": e.status.to_string(), "detail": e.detail}))
                .collect();
            Ok(Output {
                text: r.to_string(),
                result: json!({"all_pass": r.all_pass, "entries": entries}),
                ok: r.all_pass,
            })
        }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

/// Usage problems exit with 2, failed computations with 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::WeightError(_) => 2,
        Error::PreconditionViolated(msg) if msg.starts_with("--") || msg.contains(" takes ") => 2,
        _ => 1,
    }
}

fn inputs_json(cmd: &Command, opts: &Opts) -> Value {
    json!({
        "args": cmd.positional(),
        "weight": opts.weight.as_ref().map(|w| w.to_string()),
        "order": opts.order,
        "terms": opts.terms.as_ref().map(|t| t.to_string()),
        "grid": opts.grid,
        "series": opts.series,
    })
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, env: &HashMap<String, String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let defaults = match Defaults::load(cli.opts.config.as_deref(), env) {
        Ok(d) => d,
        Err(msg) => {
            let _ = writeln!(err, "error: config: {msg}");
            return 2;
        }
    };
    let name = cli.command.name();
    let inputs = inputs_json(&cli.command, &cli.opts);
    let json_mode = cli.opts.json;
    let ctx = Ctx { opts: cli.opts, defaults };
    let (code, doc) = match execute(&cli.command, &ctx) {
        Ok(o) => {
            let status = if o.ok { "ok" } else { "fail" };
            if !json_mode {
                let _ = writeln!(out, "{}", o.text);
            }
            (i32::from(!o.ok), json!({"command": name, "inputs": inputs, "result": o.result, "status": status}))
        }
        Err(e) => {
            if !json_mode {
                let _ = writeln!(err, "error: {e}");
            }
            let code = exit_code(&e);
            (
                code,
                json!({
                    "command": name,
                    "inputs": inputs,
                    "result": {"error": error_kind(&e), "message": e.to_string()},
                    "status": "error",
                }),
            )
        }
    };
    if json_mode {
        let _ = writeln!(out, "{doc}");
    }
    code
}
