//! The `paley` command line: closed formulas, brute-force counts, agreement
//! checks, tower tables and quadratic-form representations.
//!
//! [`run`] takes the full argument vector and two output streams and returns
//! the process exit code, so the binary and the tests share one path.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use paley_core::arith::{is_prime, prime_power};
use paley_core::ff::{BinomialConvention, FieldTable, DEFAULT_CONVENTION};
use paley_core::formulas::{clique_report, oracle_count, CliqueReport, FormulaRequest};
use paley_core::oracle::{connected_criterion, connectivity, generalized_paley, power_graph, verify_blowup_structure, BlowupReport, Caps};
use paley_core::quadforms::{rep_4q_c2_27d2, rep_u2_2v2, rep_x2_27y2, rep_x2_4y2, QFRep, SumFourSquareMode};
use paley_core::rings::{undirected_criterion, LocalRing, RingDescriptor};
use paley_core::towers::{reproduce_table, TableReport};
use paley_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_SIZE_CAP: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "paley", version, about = "Clique counts of generalized Paley graphs over finite local rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the closed formula for K_ell(G_R(k)).
    Formula(CountArgs),
    /// Count ell-cliques of G_R(k) by brute force.
    Oracle(CountArgs),
    /// Compare formula and brute force; exits 5 when they differ.
    Verify(VerifyArgs),
    /// Recompute a tower table and list disagreements with the published one.
    Table(TableArgs),
    /// Solve q = X^2 + D Y^2 under the normalization a formula needs.
    Reps(RepsArgs),
    /// Undirectedness and connectivity criteria, confirmed by search when feasible.
    Criteria(CriteriaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Greene,
    Literal,
}

impl From<Convention> for BinomialConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Greene => BinomialConvention::Greene,
            Convention::Literal => BinomialConvention::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    /// q = x^2 + 4y^2 with p ∤ x (p ≡ 1 mod 4).
    #[value(name = "x2+4y2")]
    SumFourSquare,
    /// q = e^2 + 4f^2 with additionally e ≡ 1 mod 4.
    #[value(name = "e2+4f2")]
    ENormalized,
    /// 4q = c^2 + 27d^2 with c ≡ 1 mod 3.
    #[value(name = "c2+27d2")]
    Scaled,
    /// q = x^2 + 27y^2 with x ≡ 1 mod 3 and p ∤ x.
    #[value(name = "x2+27y2")]
    TwentySeven,
    /// q = u^2 + 2v^2 with u ≡ 3 mod 4.
    #[value(name = "u2+2v2")]
    TwoSquare,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest graph on which cliques are counted.
    #[arg(long, default_value_t = Caps::default().clique_vertices)]
    max_clique_vertices: usize,
    /// Largest graph built for connectivity and structure checks.
    #[arg(long, default_value_t = Caps::default().graph_vertices)]
    max_graph_vertices: usize,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            clique_vertices: self.max_clique_vertices,
            graph_vertices: self.max_graph_vertices,
            ..Caps::default()
        }
    }
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Ring descriptor: fq:p,r | zpk:p,alpha | gr:p,alpha,r | fqt:p,r,n
    #[arg(long)]
    ring: String,
    #[arg(long)]
    k: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=6))]
    ell: u32,
    #[arg(long, value_enum)]
    convention: Option<Convention>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    count: CountArgs,
    /// Also check that G_R(k) is the blow-up of Γ(k,q).
    #[arg(long)]
    structure: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    id: u32,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=40))]
    max_ell: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct RepsArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    form: Form,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct CriteriaArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    k: u64,
    #[command(flatten)]
    common: Common,
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let format = match &cli.command {
        Command::Formula(a) | Command::Oracle(a) => a.common.format,
        Command::Verify(a) => a.count.common.format,
        Command::Table(a) => a.common.format,
        Command::Reps(a) => a.common.format,
        Command::Criteria(a) => a.common.format,
    };
    let result = match cli.command {
        Command::Formula(a) => formula(&a, out),
        Command::Oracle(a) => oracle(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Table(a) => table(&a, out),
        Command::Reps(a) => reps(&a, out),
        Command::Criteria(a) => criteria(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            if format == Format::Json {
                let payload = json!({ "error": { "kind": error_kind(&e), "message": e.to_string(), "exit_code": code } });
                let _ = writeln!(out, "{}", render(&payload));
            }
            code
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BadDescriptor(_) | Error::NonPrime(_) | Error::BadModulus { .. } | Error::ReducibleModulus(_) => EXIT_USAGE,
        Error::HypothesisViolated(_)
        | Error::DirectedGraph
        | Error::NotCoprime { .. }
        | Error::NoRepresentation { .. }
        | Error::OddExtensionForInertPrime { .. }
        | Error::OrderUnavailable { .. }
        | Error::NoCharacterOfOrder { .. }
        | Error::MinimalityProbeFailed { .. } => EXIT_HYPOTHESIS,
        Error::SizeCap { .. } => EXIT_SIZE_CAP,
        Error::NonIntegralBracket { .. } | Error::NonRealValue(_) | Error::InexactDivision { .. } | Error::Invariant(_) => {
            EXIT_INTERNAL
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonPrime(_) => "non_prime",
        Error::ReducibleModulus(_) => "reducible_modulus",
        Error::BadModulus { .. } => "bad_modulus",
        Error::SizeCap { .. } => "size_cap",
        Error::OrderUnavailable { .. } => "order_unavailable",
        Error::NoCharacterOfOrder { .. } => "no_character_of_order",
        Error::NotCoprime { .. } => "not_coprime",
        Error::NoRepresentation { .. } => "no_representation",
        Error::OddExtensionForInertPrime { .. } => "odd_extension_for_inert_prime",
        Error::BadDescriptor(_) => "bad_descriptor",
        Error::DirectedGraph => "directed_graph",
        Error::HypothesisViolated(_) => "hypothesis_violated",
        Error::NonIntegralBracket { .. } => "non_integral_bracket",
        Error::NonRealValue(_) => "non_real_value",
        Error::InexactDivision { .. } => "inexact_division",
        Error::MinimalityProbeFailed { .. } => "minimality_probe_failed",
        Error::Invariant(_) => "invariant",
    }
}

/// Pretty JSON with sorted keys.
pub fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn opt_str<T: ToString>(x: Option<&T>) -> Value {
    x.map_or(Value::Null, |v| Value::String(v.to_string()))
}

fn count_request(a: &CountArgs, subcommand: &str, ring: &RingDescriptor) -> Value {
    json!({
        "subcommand": subcommand,
        "ring": ring.to_string(),
        "k": a.k,
        "ell": a.ell,
    })
}

fn params(req: &FormulaRequest) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("q".into(), Value::String(req.q.to_string()));
    m.insert("beta".into(), Value::String(req.beta.to_string()));
    m.insert("m".into(), Value::String(req.m().to_string()));
    m.insert("p".into(), Value::String(req.p.to_string()));
    m.insert("r".into(), Value::String(req.r.to_string()));
    m
}

fn report_json(request: Value, report: &CliqueReport, structure: Option<&BlowupReport>) -> Value {
    let mut intermediates = params(&report.request);
    for (k, v) in &report.intermediates {
        intermediates.insert(k.clone(), Value::String(v.clone()));
    }
    let mut obj = json!({
        "request": request,
        "formula_value": report.formula_value.to_string(),
        "oracle_value": opt_str(report.oracle_value.as_ref()),
        "match": report.matches,
        "intermediates": intermediates,
        "errata": [],
    });
    if let Some(s) = structure {
        obj["structure"] = structure_json(s);
    }
    obj
}

fn structure_json(s: &BlowupReport) -> Value {
    json!({
        "q": s.q.to_string(),
        "m": s.m.to_string(),
        "directed": s.directed,
        "independent_cosets": s.independent_cosets,
        "quotient_matches": s.quotient_matches,
        "complete_between_cosets": s.complete_between_cosets,
        "passed": s.passed(),
    })
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.clone() })
        .collect::<Vec<_>>()
        .join(",")
}

fn write_count_csv(out: &mut dyn Write, ring: &RingDescriptor, a: &CountArgs, formula: Option<&BigUint>, oracle: Option<&BigUint>, matches: Option<bool>) -> std::io::Result<()> {
    writeln!(out, "ring,k,ell,formula_value,oracle_value,match")?;
    let s = |x: Option<&BigUint>| x.map_or(String::new(), |v| v.to_string());
    writeln!(
        out,
        "{}",
        csv_line(&[ring.to_string(), a.k.to_string(), a.ell.to_string(), s(formula), s(oracle), matches.map_or(String::new(), |m| m.to_string())])
    )
}

fn parse_ring(s: &str) -> paley_core::Result<RingDescriptor> {
    s.parse()
}

fn convention(a: &CountArgs) -> BinomialConvention {
    a.convention.map_or(DEFAULT_CONVENTION, Into::into)
}

fn io(e: std::io::Error) -> Error {
    Error::Invariant(format!("write failed: {e}"))
}

fn formula(a: &CountArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let ring = parse_ring(&a.ring)?;
    let report = clique_report(&ring, a.k, a.ell, false, convention(a), &a.common.caps())?;
    match a.common.format {
        Format::Json => writeln!(out, "{}", render(&report_json(count_request(a, "formula", &ring), &report, None))),
        Format::Csv => write_count_csv(out, &ring, a, Some(&report.formula_value), None, None),
        Format::Text => {
            writeln!(out, "K_{}(G_R({})) for R = {}: {}", a.ell, a.k, ring, report.formula_value)
                .and_then(|_| write_intermediates(out, &report))
        }
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn write_intermediates(out: &mut dyn Write, report: &CliqueReport) -> std::io::Result<()> {
    for (k, v) in params(&report.request) {
        writeln!(out, "  {k} = {}", v.as_str().unwrap_or_default())?;
    }
    for (k, v) in &report.intermediates {
        if !matches!(k.as_str(), "q" | "beta" | "m") {
            writeln!(out, "  {k} = {v}")?;
        }
    }
    Ok(())
}

fn oracle(a: &CountArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let ring = parse_ring(&a.ring)?;
    let count = oracle_count(&ring, a.k, a.ell, &a.common.caps())?;
    match a.common.format {
        Format::Json => {
            let value = json!({
                "request": count_request(a, "oracle", &ring),
                "formula_value": null,
                "oracle_value": count.to_string(),
                "match": null,
                "intermediates": {},
                "errata": [],
            });
            writeln!(out, "{}", render(&value))
        }
        Format::Csv => write_count_csv(out, &ring, a, None, Some(&count), None),
        Format::Text => writeln!(out, "K_{}(G_R({})) for R = {} by enumeration: {}", a.ell, a.k, ring, count),
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let c = &a.count;
    let ring = parse_ring(&c.ring)?;
    let caps = c.common.caps();
    let report = clique_report(&ring, c.k, c.ell, true, convention(c), &caps)?;
    let structure = if a.structure { Some(verify_blowup_structure(&LocalRing::new(ring)?, c.k, &caps)?) } else { None };
    let ok = report.matches == Some(true) && structure.as_ref().is_none_or(|s| s.passed());
    match c.common.format {
        Format::Json => writeln!(out, "{}", render(&report_json(count_request(c, "verify", &ring), &report, structure.as_ref()))),
        Format::Csv => write_count_csv(out, &ring, c, Some(&report.formula_value), report.oracle_value.as_ref(), report.matches),
        Format::Text => {
            let oracle = report.oracle_value.as_ref().map_or(String::new(), |v| v.to_string());
            writeln!(
                out,
                "K_{}(G_R({})) for R = {}: formula {}, enumeration {}, {}",
                c.ell,
                c.k,
                ring,
                report.formula_value,
                oracle,
                if report.matches == Some(true) { "match" } else { "MISMATCH" }
            )
            .and_then(|_| match &structure {
                Some(s) => writeln!(
                    out,
                    "  blow-up structure: independent cosets {}, quotient {}, complete blocks {}",
                    s.independent_cosets, s.quotient_matches, s.complete_between_cosets
                ),
                None => Ok(()),
            })
        }
    }
    .map_err(io)?;
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn table_json(t: &TableReport, max_ell: u32) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            json!({
                "ell": r.ell,
                "sequence_value": r.sequence_value.to_string(),
                "count": r.count.to_string(),
                "published_value": opt_str(r.published_value.as_ref()),
                "published_count": opt_str(r.published_count.as_ref()),
                "erratum": r.erratum,
            })
        })
        .collect();
    let errata: Vec<Value> = t
        .errata
        .iter()
        .map(|e| json!({ "ell": e.ell, "column": e.column, "published": e.published, "computed": e.computed }))
        .collect();
    json!({
        "request": { "subcommand": "table", "id": t.id, "max_ell": max_ell },
        "title": t.title,
        "sequence": t.sequence.name(),
        "rows": rows,
        "errata": errata,
    })
}

fn table(a: &TableArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let t = reproduce_table(a.id, a.max_ell)?;
    let show = |x: Option<String>| x.unwrap_or_default();
    match a.common.format {
        Format::Json => writeln!(out, "{}", render(&table_json(&t, a.max_ell))),
        Format::Csv => {
            let mut res = writeln!(out, "ell,sequence_value,count,published_value,published_count,erratum_flag");
            for r in &t.rows {
                res = res.and_then(|_| {
                    writeln!(
                        out,
                        "{}",
                        csv_line(&[
                            r.ell.to_string(),
                            r.sequence_value.to_string(),
                            r.count.to_string(),
                            show(r.published_value.as_ref().map(BigInt::to_string)),
                            show(r.published_count.as_ref().map(BigUint::to_string)),
                            r.erratum.to_string(),
                        ])
                    )
                });
            }
            res
        }
        Format::Text => {
            let mut res = writeln!(out, "Table {}: {}", t.id, t.title);
            for r in &t.rows {
                res = res.and_then(|_| {
                    writeln!(
                        out,
                        "  l={:<2} {}={:<8} count={}{}",
                        r.ell,
                        t.sequence.name(),
                        r.sequence_value,
                        r.count,
                        if r.erratum { "  (differs from published)" } else { "" }
                    )
                });
            }
            for e in &t.errata {
                res = res.and_then(|_| writeln!(out, "  erratum l={} {}: published {}, computed {}", e.ell, e.column, e.published, e.computed));
            }
            res
        }
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn reps(a: &RepsArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let (p, r) = prime_power(a.q).ok_or_else(|| Error::HypothesisViolated(format!("q = {} is not a prime power", a.q)))?;
    let qb = BigInt::from(a.q);
    let rep: QFRep = match a.form {
        Form::SumFourSquare => rep_x2_4y2(&qb, p, SumFourSquareMode::CoprimeOnly)?,
        Form::ENormalized => rep_x2_4y2(&qb, p, SumFourSquareMode::ENormalized)?,
        Form::Scaled => rep_4q_c2_27d2(p, r)?,
        Form::TwentySeven => rep_x2_27y2(&qb, p)?,
        Form::TwoSquare => rep_u2_2v2(&qb, p)?,
    };
    match a.common.format {
        Format::Json => {
            let tags: Vec<String> = rep.tags.iter().map(|t| format!("{t:?}")).collect();
            let value = json!({
                "request": { "subcommand": "reps", "q": a.q.to_string(), "form": rep.form.display() },
                "a": rep.a.to_string(),
                "b": rep.b.to_string(),
                "target": rep.target.to_string(),
                "p": rep.p.to_string(),
                "tags": tags,
                "valid": rep.is_valid(),
            });
            writeln!(out, "{}", render(&value))
        }
        Format::Csv => writeln!(out, "q,form,a,b,target\n{}", csv_line(&[a.q.to_string(), rep.form.display().into(), rep.a.to_string(), rep.b.to_string(), rep.target.to_string()])),
        Format::Text => writeln!(out, "{rep}"),
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn criteria(a: &CriteriaArgs, out: &mut dyn Write) -> paley_core::Result<i32> {
    let ring = parse_ring(&a.ring)?;
    let caps = a.common.caps();
    let (p, r) = (ring.p(), ring.r());
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    let q = ring.q().ok_or_else(|| Error::HypothesisViolated("residue field too large".into()))?;
    if a.k == 0 {
        return Err(Error::HypothesisViolated("k must be positive".into()));
    }
    let undirected = undirected_criterion(q, a.k);
    let connected = connected_criterion(p, r, a.k);

    let size = ring.size().unwrap_or(u128::MAX);
    let mut checked = Map::new();
    if (q as u128) <= caps.graph_vertices as u128 {
        let field = FieldTable::new(p, r, None)?;
        let gamma = generalized_paley(&field, a.k);
        checked.insert("residue_graph_symmetric".into(), Value::Bool(gamma.is_symmetric()));
        checked.insert("residue_graph_connected".into(), Value::Bool(connectivity(&gamma)));
    }
    if size <= caps.graph_vertices as u128 {
        let local = LocalRing::new(ring)?;
        let g = power_graph(&local, a.k, &caps)?;
        checked.insert("ring_graph_symmetric".into(), Value::Bool(!g.graph.is_directed()));
        checked.insert("ring_graph_connected".into(), Value::Bool(connectivity(&g.graph)));
    }
    let consistent = checked.iter().all(|(k, v)| {
        let want = if k.ends_with("symmetric") { undirected } else { connected };
        v.as_bool() == Some(want)
    });
    match a.common.format {
        Format::Json => {
            let value = json!({
                "request": { "subcommand": "criteria", "ring": ring.to_string(), "k": a.k },
                "q": q.to_string(),
                "undirected": undirected,
                "connected": connected,
                "search": checked,
                "consistent": consistent,
            });
            writeln!(out, "{}", render(&value))
        }
        Format::Csv => {
            let s = |k: &str| checked.get(k).and_then(Value::as_bool).map_or(String::new(), |b| b.to_string());
            writeln!(
                out,
                "ring,k,q,undirected,connected,residue_graph_symmetric,residue_graph_connected,ring_graph_symmetric,ring_graph_connected\n{}",
                csv_line(&[
                    ring.to_string(),
                    a.k.to_string(),
                    q.to_string(),
                    undirected.to_string(),
                    connected.to_string(),
                    s("residue_graph_symmetric"),
                    s("residue_graph_connected"),
                    s("ring_graph_symmetric"),
                    s("ring_graph_connected"),
                ])
            )
        }
        Format::Text => {
            let mut res = writeln!(out, "{ring}, k = {}: undirected {undirected}, connected {connected}", a.k);
            for (k, v) in &checked {
                res = res.and_then(|_| writeln!(out, "  {k}: {v}"));
            }
            res
        }
    }
    .map_err(io)?;
    Ok(if consistent { EXIT_OK } else { EXIT_MISMATCH })
}
