//! `ncprob`: convolutions, cumulants, partitions, CLT experiments and
//! randomized verification suites over exact rationals.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 when
//! the arguments or an input file cannot be used.

mod format;
mod verify;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncprob::convolutions::{
    clt_verify, derived_additive, mult_cfree, mult_free, mult_ofree, multiplicative_moments, CltReport,
};
use ncprob::cumulants::{cumulants_from_moments, dot_cumulants, moments_from_cumulants, specialize};
use ncprob::freeprod::{convolve_moments, MultiMomentFunctional};
use ncprob::kind::ProductKind;
use ncprob::partitions::{classify, enumerate_n, OrderedNCPartition, PartitionClass};
use ncprob::series::MomentSequence;
use ncprob::Rational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use format::*;

#[derive(Parser)]
#[command(name = "ncprob", version, about = "Exact noncommutative probability computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Transform,
    Words,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CumulantRoute {
    Partitions,
    Dot,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operation {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Associativity,
    DualRoute,
    Independence,
    Fock,
}

#[derive(Subcommand)]
enum Command {
    /// Convolve the distributions of one variable per factor.
    ///
    /// Each input file holds one factor: a moments object for one-state kinds,
    /// otherwise an array of `arity` moments objects. `-` reads stdin.
    Convolve {
        #[arg(long, value_parser = parse_kind)]
        kind: ProductKind,
        #[arg(long, value_parser = parse_degree)]
        degree: usize,
        #[arg(long, value_enum, default_value = "additive")]
        op: Operation,
        #[arg(long, value_enum, default_value = "both")]
        route: Route,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Indented, o-free and anti-o-free cumulants of a state triple.
    ///
    /// With `--inverse` the input is a cumulant object and the output the state
    /// triple. With `--kind` the input is an array of `arity` states and the
    /// output the cumulants of that product kind.
    Cumulants {
        input: PathBuf,
        #[arg(long, value_parser = parse_degree)]
        degree: Option<usize>,
        #[arg(long, value_parser = parse_kind, conflicts_with = "inverse")]
        kind: Option<ProductKind>,
        #[arg(long)]
        inverse: bool,
        #[arg(long, value_enum, default_value = "partitions")]
        route: CumulantRoute,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate, count, classify or draw ordered non-crossing partitions.
    Partitions {
        #[arg(long, value_parser = parse_class, required_unless_present = "input")]
        class: Option<PartitionClass>,
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        /// Read partitions (`{"n", "blocks", "order"}` or an array) instead of enumerating.
        #[arg(long, conflicts_with_all = ["class", "n"])]
        input: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["classify", "ascii"])]
        count: bool,
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        ascii: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Kesten limit cumulants and convergence of scaled two-point convolutions.
    Clt {
        #[arg(long, value_parser = rational_str)]
        alpha2: Rational,
        #[arg(long, value_parser = rational_str)]
        beta2: Rational,
        #[arg(long, value_parser = rational_str)]
        gamma2: Rational,
        #[arg(long, value_parser = parse_degree, default_value = "8")]
        degree: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized checks with a reproducible seed.
    Verify {
        #[arg(long, default_value = "0")]
        seed: u64,
        #[arg(long, default_value = "20")]
        trials: usize,
        #[arg(long, value_parser = parse_degree, default_value = "6")]
        degree: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Matrix fixture for the Fock suite.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_kind(s: &str) -> Result<ProductKind, String> {
    s.parse().map_err(|_| format!("unknown product kind {s:?}"))
}

fn parse_class(s: &str) -> Result<PartitionClass, String> {
    s.parse().map_err(|_| format!("unknown partition class {s:?}"))
}

fn parse_degree(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if d >= 1 => Ok(d),
        _ => Err(format!("degree must be a positive integer, got {s:?}")),
    }
}

/// Result of a command: what to write and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn json(v: &Value, passed: bool) -> Self {
        let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
        text.push('\n');
        Outcome { text, passed }
    }
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn read_json(path: &PathBuf) -> Result<Value, String> {
    serde_json::from_str(&read_input(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        _ => io::stdout().write_all(text.as_bytes()).map_err(|e| format!("stdout: {e}")),
    }
}

fn lib<T>(r: ncprob::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// The states of one factor: a single object or an array of `arity` objects.
fn factor_states<T>(v: &Value, arity: usize, parse: impl Fn(&Value) -> ParseResult<T>) -> ParseResult<Vec<T>> {
    let states = match v.as_array() {
        Some(items) => items.iter().map(&parse).collect::<ParseResult<Vec<_>>>()?,
        None => vec![parse(v)?],
    };
    if states.len() != arity {
        return Err(format!("expected {arity} states per factor, found {}", states.len()));
    }
    Ok(states)
}

fn component_map(kind: ProductKind, ms: &[MomentSequence]) -> Value {
    let mut m = serde_json::Map::new();
    for (c, s) in kind.outputs().iter().zip(ms) {
        m.insert(component_name(*c).into(), moments_to_json(s));
    }
    Value::Object(m)
}

fn multiplicative_transform(kind: ProductKind, inputs: &[Vec<MomentSequence>]) -> Result<Vec<MomentSequence>, String> {
    let mut acc = inputs[0].clone();
    for next in &inputs[1..] {
        acc = match kind {
            ProductKind::Free => vec![lib(mult_free(&acc[0], &next[0]))?],
            ProductKind::CFree | ProductKind::OFree => {
                let f = if kind == ProductKind::CFree { mult_cfree } else { mult_ofree };
                let (a, b) = lib(f((&acc[0], &acc[1]), (&next[0], &next[1])))?;
                vec![a, b]
            }
            _ => return Err(format!("no transform route for multiplicative {kind} convolution; use --route words")),
        };
    }
    Ok(acc)
}

fn convolve(kind: ProductKind, degree: usize, op: Operation, route: Route, inputs: &[PathBuf]) -> Result<Outcome, String> {
    let mut factors = Vec::with_capacity(inputs.len());
    for path in inputs {
        let states =
            factor_states(&read_json(path)?, kind.arity(), moments_from_json).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cut = Vec::with_capacity(states.len());
        for s in states {
            if s.degree() < degree {
                return Err(format!("{}: moments stop at degree {}, need {degree}", path.display(), s.degree()));
            }
            cut.push(s.truncate(degree));
        }
        factors.push(cut);
    }
    let transform = |f: &[Vec<MomentSequence>]| match op {
        Operation::Additive => lib(derived_additive(kind, f)),
        Operation::Multiplicative => multiplicative_transform(kind, f),
    };
    let words = |f: &[Vec<MomentSequence>]| match op {
        Operation::Additive => lib(convolve_moments(kind, f, degree)),
        Operation::Multiplicative => lib(multiplicative_moments(kind, f, degree)),
    };
    let op_name = match op {
        Operation::Additive => "additive",
        Operation::Multiplicative => "multiplicative",
    };
    let mut out = json!({ "kind": kind.name(), "operation": op_name, "degree": degree, "factors": factors.len() });
    let passed = match route {
        Route::Transform => {
            out["components"] = component_map(kind, &transform(&factors)?);
            true
        }
        Route::Words => {
            out["components"] = component_map(kind, &words(&factors)?);
            true
        }
        Route::Both => {
            let t = transform(&factors)?;
            let w = words(&factors)?;
            let agree = t == w;
            out["components"] = component_map(kind, &t);
            out["routes_agree"] = json!(agree);
            if !agree {
                out["word_expansion"] = component_map(kind, &w);
            }
            agree
        }
    };
    Ok(Outcome::json(&out, passed))
}

fn cumulants(
    input: &PathBuf,
    degree: Option<usize>,
    kind: Option<ProductKind>,
    inverse: bool,
    route: CumulantRoute,
) -> Result<Outcome, String> {
    let v = read_json(input)?;
    let at = |e: String| format!("{}: {e}", input.display());
    if inverse {
        let c = cumulants_from_json(&v).map_err(at)?;
        let n = degree.unwrap_or(c.indented.truncation());
        let t = lib(moments_from_cumulants(&c.indented, &c.ofree, &c.antiofree, n))?;
        return Ok(Outcome::json(&triple_to_json(&t), true));
    }
    if let Some(kind) = kind {
        let parse = |x: &Value| {
            if x.get("coeffs").is_some() {
                moments_from_json(x).map(|m| MultiMomentFunctional::from_moments(&m))
            } else {
                functional_from_json(x)
            }
        };
        let states = factor_states(&v, kind.arity(), parse).map_err(at)?;
        let n = degree.unwrap_or(states[0].truncation());
        let table = lib(specialize(kind, &states, n))?;
        let mut out = table_to_json(&table);
        out["product"] = json!(kind.name());
        return Ok(Outcome::json(&out, true));
    }
    let t = triple_from_json(&v).map_err(at)?;
    let n = degree.unwrap_or(t.truncation());
    let (c, passed) = match route {
        CumulantRoute::Partitions => (lib(cumulants_from_moments(&t, n))?, true),
        CumulantRoute::Dot => (lib(dot_cumulants(&t, n))?, true),
        CumulantRoute::Both => {
            let a = lib(cumulants_from_moments(&t, n))?;
            let b = lib(dot_cumulants(&t, n))?;
            let agree = a == b;
            (a, agree)
        }
    };
    let mut out = cumulants_to_json(&c);
    if route == CumulantRoute::Both {
        out["routes_agree"] = json!(passed);
    }
    Ok(Outcome::json(&out, passed))
}

fn partition_json(p: &OrderedNCPartition, with_classes: bool) -> Value {
    let mut v = json!({
        "n": p.ground().len(),
        "blocks": p.canonical_blocks(),
        "order": p.order().iter().map(|o| o + 1).collect::<Vec<_>>(),
    });
    if with_classes {
        let c = classify(p);
        v["classification"] = json!({
            "S1": c.s1, "S2": c.s2, "T1": c.t1, "T2": c.t2, "outer": c.outer, "inner": c.inner,
        });
    }
    v
}

fn partition_from_json(v: &Value) -> ParseResult<OrderedNCPartition> {
    let n = v.get("n").and_then(Value::as_u64).ok_or("partition needs an integer \"n\"")? as usize;
    let blocks: Vec<Vec<usize>> = serde_json::from_value(v.get("blocks").cloned().unwrap_or(Value::Null))
        .map_err(|e| format!("blocks: {e}"))?;
    let order: Vec<usize> = match v.get("order") {
        Some(o) => serde_json::from_value(o.clone()).map_err(|e| format!("order: {e}"))?,
        None => (1..=blocks.len()).collect(),
    };
    if order.iter().any(|&o| o == 0 || o > blocks.len()) {
        return Err("order entries index blocks from 1".into());
    }
    OrderedNCPartition::from_canonical((1..=n).collect(), blocks, order.iter().map(|o| o - 1).collect())
        .map_err(|e| e.to_string())
}

fn partitions(
    class: Option<PartitionClass>,
    n: Option<usize>,
    input: Option<&PathBuf>,
    count: bool,
    with_classes: bool,
    ascii: bool,
) -> Result<Outcome, String> {
    let ps = match (input, class, n) {
        (Some(path), _, _) => {
            let v = read_json(path)?;
            let items = match v.as_array() {
                Some(a) => a.clone(),
                None => vec![v],
            };
            items.iter().map(partition_from_json).collect::<ParseResult<Vec<_>>>().map_err(|e| format!("{}: {e}", path.display()))?
        }
        (None, Some(class), Some(n)) => {
            if n > 12 {
                return Err(format!("enumeration is limited to n ≤ 12, got {n}"));
            }
            enumerate_n(class, n)
        }
        _ => return Err("give --class and --n, or --input".into()),
    };
    if count {
        return Ok(Outcome { text: format!("{}\n", ps.len()), passed: true });
    }
    if ascii {
        let text = ps.iter().map(OrderedNCPartition::render_ascii).collect::<Vec<_>>().join("\n");
        return Ok(Outcome { text, passed: true });
    }
    let items: Vec<Value> = ps.iter().map(|p| partition_json(p, with_classes)).collect();
    Ok(Outcome::json(&Value::Array(items), true))
}

fn decimal(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    component: &'static str,
    k: usize,
    moment: f64,
    kesten_moment: f64,
    abs_err: f64,
    moment_exact: String,
    kesten_moment_exact: String,
    abs_err_exact: String,
}

fn clt_json(r: &CltReport) -> Value {
    let names = ["I", "OF", "AOF"];
    let cumulants: serde_json::Map<String, Value> = names
        .iter()
        .zip(&r.cumulants)
        .map(|(name, ks)| (name.to_string(), Value::Array(ks.iter().map(rat).collect())))
        .collect();
    json!({
        "cumulants": cumulants,
        "second_cumulants_match": r.second_cumulants_match,
        "higher_cumulants_vanish": r.higher_cumulants_vanish,
        "steps": ncprob::convolutions::CLT_STEPS,
        "max_errors": r.max_errors.iter().map(rat).collect::<Vec<_>>(),
        "errors_decrease": r.errors_decrease,
        "passed": r.passed(),
        "rows": r.rows.iter().map(|row| json!({
            "n": row.n,
            "component": component_name(row.component),
            "k": row.k,
            "moment": rat(&row.moment),
            "kesten_moment": rat(&row.kesten_moment),
            "abs_err": rat(&row.abs_err),
        })).collect::<Vec<_>>(),
    })
}

fn clt(a: &Rational, b: &Rational, c: &Rational, degree: usize, fmt: OutputFormat) -> Result<Outcome, String> {
    let report = lib(clt_verify(a, b, c, degree))?;
    let passed = report.passed();
    match fmt {
        OutputFormat::Json => Ok(Outcome::json(&clt_json(&report), passed)),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &report.rows {
                w.serialize(CsvRow {
                    n: row.n,
                    component: component_name(row.component),
                    k: row.k,
                    moment: decimal(&row.moment),
                    kesten_moment: decimal(&row.kesten_moment),
                    abs_err: decimal(&row.abs_err),
                    moment_exact: row.moment.to_string(),
                    kesten_moment_exact: row.kesten_moment.to_string(),
                    abs_err_exact: row.abs_err.to_string(),
                })
                .map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            Ok(Outcome { text: String::from_utf8(bytes).expect("CSV output is UTF-8"), passed })
        }
    }
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), String> {
    match cli.command {
        Command::Convolve { kind, degree, op, route, output, inputs } => {
            Ok((convolve(kind, degree, op, route, &inputs)?, output))
        }
        Command::Cumulants { input, degree, kind, inverse, route, output } => {
            Ok((cumulants(&input, degree, kind, inverse, route)?, output))
        }
        Command::Partitions { class, n, input, count, classify, ascii, output } => {
            Ok((partitions(class, n, input.as_ref(), count, classify, ascii)?, output))
        }
        Command::Clt { alpha2, beta2, gamma2, degree, format, output } => {
            Ok((clt(&alpha2, &beta2, &gamma2, degree, format)?, output))
        }
        Command::Verify { seed, trials, degree, suite, fixture, output } => {
            let fixture = match &fixture {
                Some(p) => Some(fixture_from_json(&read_json(p)?).map_err(|e| format!("{}: {e}", p.display()))?),
                None => None,
            };
            let (report, passed) = verify::run(suite, seed, trials, degree, fixture)?;
            Ok((Outcome::json(&report, passed), output))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(cli).and_then(|(outcome, path)| {
        write_output(path.as_ref(), &outcome.text)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", json!({ "status": "check_failed" }));
            ExitCode::from(1)
        }
        Err(msg) => {
            eprintln!("{}", json!({ "status": "error", "message": msg }));
            ExitCode::from(2)
        }
    }
}
