//! Command-line front end: argument model, dispatch to the library, and
//! JSON-lines / CSV reporting.
//!
//! Every command streams one record per item to `out` and finishes with a
//! single summary object. In CSV mode the records form a table on `out` and
//! the summary goes to `err` as JSON.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::axcore::{enumerate_index_sets, verify_with_family, AxError, AxReport, IndexSetFamily};
use crate::budget::Budget;
use crate::closedform::{
    build_quadratic_form, complementary_pair_family, e_closed_form_normalized, formula_count_for,
    quad_root_count, quad_root_count_brute, CaseInstance, CaseTag, ClosedFormError, FormulaSource,
};
use crate::gf::{FieldSpec, GfError};
use crate::mpoly::{nu_p, parse_poly, parse_poly_file, MultiPoly, PolyError, Valuation};
use crate::rmcode::{census_brute, enumerate_codewords, rm_dim, run_in_pool, RMParams, RmError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;

/// Polynomials handed to the worker pool at a time; records are written in
/// input order after each chunk.
const CHUNK: usize = 1024;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("output failed: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AxError> for CliError {
    fn from(e: AxError) -> Self {
        match e {
            AxError::Budget { .. } => CliError::Budget(e.to_string()),
            AxError::Poly(p) => p.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RmError> for CliError {
    fn from(e: RmError) -> Self {
        match e {
            RmError::Budget { .. } => CliError::Budget(e.to_string()),
            RmError::Poly(p) => p.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        match e {
            ClosedFormError::Budget { .. } => CliError::Budget(e.to_string()),
            ClosedFormError::Rm(r) => r.into(),
            ClosedFormError::Ax(a) => a.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Formula,
    Both,
}

/// Polynomial supply for `closed`: every codeword, or K seeded samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl FromStr for Check {
    type Err = String;

    /// `exhaustive` or `random:K:SEED`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exhaustive" {
            return Ok(Check::Exhaustive);
        }
        let bad = || format!("expected exhaustive or random:K:SEED, got {s:?}");
        let mut parts = s.split(':');
        match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some("random"), Some(k), Some(seed), None) => Ok(Check::Random {
                count: k.parse().map_err(|_| bad())?,
                seed: seed.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Parser, Debug, Clone, Serialize)]
#[command(
    name = "axcount",
    version,
    about = "p-adic zero counts of polynomials over finite fields and Reed-Muller weight divisibility"
)]
pub struct RunConfig {
    /// Field as p or p^m
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Modulus coefficients c0,...,cm overriding the canonical one
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Limit for every enumeration budget; defaults to AXCOUNT_BUDGET or built-in limits
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", content = "args", rename_all = "lowercase")]
pub enum Command {
    /// Check the congruence for E(f) on one or many polynomials
    Verify(VerifyArgs),
    /// List the index functions of I (or I' with --prime-set)
    Iset(IsetArgs),
    /// Reed-Muller code dimension and weight-divisibility counts
    #[command(subcommand)]
    Rm(RmCommand),
    /// Compare E(f) with its quadratic closed form on one of the four cases
    Closed(ClosedArgs),
    /// Count zeros of a polynomial over GF(q)^n
    Zcount(ZcountArgs),
    /// Run a fixed battery of known values
    Selftest,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Seed for --random
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
    /// Every codeword of the Reed-Muller code R_q(d, n)
    #[arg(long)]
    pub exhaustive: bool,
    /// K codewords with independent uniform coefficients
    #[arg(long, value_name = "K", requires = "seed")]
    pub random: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IsetArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub prime_set: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "subcommand", content = "args", rename_all = "lowercase")]
pub enum RmCommand {
    Dim(RmDimArgs),
    Count(RmCountArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RmDimArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub d: i64,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RmCountArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: u32,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClosedArgs {
    #[arg(long, value_parser = parse_case)]
    pub case: CaseTag,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value = "exhaustive")]
    pub check: Check,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ZcountArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub source: PolyArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct PolyArgs {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
}

fn parse_case(s: &str) -> Result<CaseTag, String> {
    s.parse::<CaseTag>().map_err(|e| e.to_string())
}

/// Where the polynomials of a sweep come from; exactly one per run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Inline(String),
    File(PathBuf),
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl VerifyArgs {
    pub fn input_source(&self) -> Result<InputSource, CliError> {
        let s = &self.source;
        let chosen = [
            s.poly.is_some(),
            s.poly_file.is_some(),
            s.exhaustive,
            s.random.is_some(),
        ];
        if chosen.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Usage(
                "exactly one of --poly, --poly-file, --exhaustive, --random is required".into(),
            ));
        }
        Ok(if let Some(p) = &s.poly {
            InputSource::Inline(p.clone())
        } else if let Some(path) = &s.poly_file {
            InputSource::File(path.clone())
        } else if s.exhaustive {
            InputSource::Exhaustive
        } else {
            let count = s.random.expect("one source is set");
            let seed = self
                .seed
                .ok_or_else(|| CliError::Usage("--random requires --seed".into()))?;
            InputSource::Random { count, seed }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub summary: bool,
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: u64,
    pub elapsed_seconds: f64,
}

/// Outcome of one run. Per-item records are streamed, not retained.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub config: RunConfig,
    pub items: u64,
    pub summary: Summary,
}

impl RunRecord {
    pub fn exit_code(&self) -> u8 {
        if self.summary.disagreements > 0 {
            EXIT_DISAGREEMENT
        } else {
            EXIT_OK
        }
    }
}

enum Sink<'a> {
    Json(&'a mut dyn Write),
    Csv {
        writer: csv::Writer<&'a mut dyn Write>,
        header: Option<Vec<String>>,
    },
}

struct Emitter<'a> {
    sink: Sink<'a>,
    items: u64,
}

impl<'a> Emitter<'a> {
    fn new(format: Format, out: &'a mut dyn Write) -> Self {
        let sink = match format {
            Format::Json => Sink::Json(out),
            Format::Csv => Sink::Csv {
                writer: csv::WriterBuilder::new().flexible(true).from_writer(out),
                header: None,
            },
        };
        Emitter { sink, items: 0 }
    }

    fn record<T: Serialize>(&mut self, rec: &T) -> Result<(), CliError> {
        let value = serde_json::to_value(rec).map_err(|e| CliError::Usage(e.to_string()))?;
        self.items += 1;
        match &mut self.sink {
            Sink::Json(out) => {
                serde_json::to_writer(&mut **out, &value).map_err(io::Error::from)?;
                out.write_all(b"\n")?;
            }
            Sink::Csv { writer, header } => {
                let Value::Object(map) = value else {
                    writer.write_record([csv_cell(&value)]).map_err(io::Error::from)?;
                    return Ok(());
                };
                let keys: Vec<String> = map.keys().cloned().collect();
                if header.as_ref() != Some(&keys) {
                    writer.write_record(&keys).map_err(io::Error::from)?;
                    *header = Some(keys);
                }
                writer
                    .write_record(map.values().map(csv_cell))
                    .map_err(io::Error::from)?;
            }
        }
        Ok(())
    }

    fn finish(self, summary: &Summary, err: &mut dyn Write) -> Result<u64, CliError> {
        match self.sink {
            Sink::Json(out) => {
                serde_json::to_writer(&mut *out, summary).map_err(io::Error::from)?;
                out.write_all(b"\n")?;
                out.flush()?;
            }
            Sink::Csv { mut writer, .. } => {
                writer.flush()?;
                serde_json::to_writer(&mut *err, summary).map_err(io::Error::from)?;
                err.write_all(b"\n")?;
            }
        }
        Ok(self.items)
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn big(n: &BigUint) -> Value {
    Value::Number(serde_json::Number::from_str(&n.to_string()).expect("decimal digits"))
}

#[derive(Default)]
struct Tally {
    checked: u64,
    agreements: u64,
}

impl Tally {
    fn add(&mut self, ok: bool) {
        self.checked += 1;
        self.agreements += ok as u64;
    }

    fn summary(&self, started: Instant) -> Summary {
        Summary {
            summary: true,
            checked: self.checked,
            agreements: self.agreements,
            disagreements: self.checked - self.agreements,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

impl RunConfig {
    fn budget(&self) -> Budget {
        self.budget.map(Budget::uniform).unwrap_or_else(Budget::from_env)
    }

    fn field(&self) -> Result<FieldSpec, CliError> {
        let text = self
            .field
            .as_deref()
            .ok_or_else(|| CliError::Usage("--field is required".into()))?;
        Ok(FieldSpec::from_notation(text, self.modulus.as_deref())?)
    }
}

/// Runs `config`, writing records to `out` (and, in CSV mode, the summary to
/// `err`).
pub fn dispatch(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<RunRecord, CliError> {
    if config.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let started = Instant::now();
    let mut em = Emitter::new(config.format, out);
    let tally = match &config.command {
        Command::Verify(args) => run_verify(config, args, &mut em)?,
        Command::Iset(args) => run_iset(config, args, &mut em)?,
        Command::Rm(RmCommand::Dim(args)) => run_rm_dim(config, args, &mut em)?,
        Command::Rm(RmCommand::Count(args)) => run_rm_count(config, args, &mut em)?,
        Command::Closed(args) => run_closed(config, args, &mut em)?,
        Command::Zcount(args) => run_zcount(config, args, &mut em)?,
        Command::Selftest => run_selftest(config, &mut em)?,
    };
    let summary = tally.summary(started);
    let items = em.finish(&summary, err)?;
    Ok(RunRecord {
        config: config.clone(),
        items,
        summary,
    })
}

/// Polynomials from a sweep source, in a deterministic order.
fn sweep_polys(
    source: &InputSource,
    field: &FieldSpec,
    n: usize,
    d: u32,
    budget: &Budget,
) -> Result<Box<dyn Iterator<Item = MultiPoly>>, CliError> {
    Ok(match source {
        InputSource::Inline(text) => Box::new(std::iter::once(parse_poly(text, field, n, d)?)),
        InputSource::File(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Box::new(parse_poly_file(&text, field, n, d)?.into_iter())
        }
        InputSource::Exhaustive => {
            let params = RMParams::new(field, d, n)?;
            Box::new(enumerate_codewords(&params, budget)?)
        }
        InputSource::Random { count, seed } => {
            let params = RMParams::new(field, d, n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Box::new((0..*count).map(move |_| params.random_codeword(&mut rng)))
        }
    })
}

/// Applies `check` to the polynomials on `jobs` workers, emitting results in
/// input order.
fn sweep<R, F>(
    polys: Box<dyn Iterator<Item = MultiPoly>>,
    jobs: usize,
    em: &mut Emitter<'_>,
    check: F,
) -> Result<Tally, CliError>
where
    R: Serialize + Send,
    F: Fn(&MultiPoly) -> Result<(R, bool), CliError> + Sync,
{
    let mut tally = Tally::default();
    let mut polys = polys.peekable();
    while polys.peek().is_some() {
        let chunk: Vec<MultiPoly> = polys.by_ref().take(CHUNK).collect();
        let results: Vec<Result<(R, bool), CliError>> =
            run_in_pool(jobs, || chunk.par_iter().map(&check).collect());
        for r in results {
            let (rec, ok) = r?;
            em.record(&rec)?;
            tally.add(ok);
        }
    }
    Ok(tally)
}

#[derive(Serialize)]
struct VerifyRecord {
    poly: String,
    #[serde(flatten)]
    report: AxReport,
}

fn run_verify(config: &RunConfig, args: &VerifyArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let budget = config.budget();
    let source = args.input_source()?;
    let family = enumerate_index_sets(field.p(), field.m(), args.n, args.d, &budget)?;
    let polys = sweep_polys(&source, &field, args.n, args.d, &budget)?;
    sweep(polys, config.jobs, em, |f| {
        let report = verify_with_family(f, &family, &budget)?;
        let ok = report.agrees();
        Ok((
            VerifyRecord {
                poly: f.to_string(),
                report,
            },
            ok,
        ))
    })
}

fn run_iset(config: &RunConfig, args: &IsetArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let family = enumerate_index_sets(field.p(), field.m(), args.n, args.d, &config.budget())?;
    let (label, set) = if args.prime_set {
        ("I'", &family.set_i_prime)
    } else {
        ("I", &family.set_i)
    };
    let mut tally = Tally::default();
    for (k, i) in set.iter().enumerate() {
        let ok = index_function_ok(&family, i, args.prime_set);
        em.record(&json!({ "set": label, "index": k, "i": i, "ok": ok }))?;
        tally.add(ok);
    }
    Ok(tally)
}

/// Post-hoc membership check: sum_u i(u) u has components that are positive
/// multiples of q - 1 (one of them zero for I'), and for I the tau sums are
/// all (q - 1) ceil(n/d).
fn index_function_ok(family: &IndexSetFamily, i: &crate::axcore::IndexFunction, prime: bool) -> bool {
    let q1 = family.q() - 1;
    let sums = i.weighted_sum(family.n);
    let zeros = sums.iter().filter(|&&s| s == 0).count();
    let multiples = sums.iter().all(|&s| s % q1 == 0);
    if prime {
        return multiples && zeros == 1;
    }
    let target = q1 * family.c() as u64;
    multiples && zeros == 0 && i.tau_sums(family.p, family.m).iter().all(|&s| s == target)
}

fn run_rm_dim(config: &RunConfig, args: &RmDimArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let dim = rm_dim(field.q() as u64, args.d, args.n)?;
    em.record(&json!({ "q": field.q(), "d": args.d, "n": args.n, "dim": dim as u64 }))?;
    Ok(Tally::default())
}

fn run_rm_count(config: &RunConfig, args: &RmCountArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let params = RMParams::new(&field, args.d, args.n)?;
    let total = params.size_big();
    let record = |method: &str, count: &BigUint, source: Option<FormulaSource>, seconds: f64| {
        let mut map = Map::new();
        map.insert("q".into(), json!(field.q()));
        map.insert("d".into(), json!(args.d));
        map.insert("n".into(), json!(args.n));
        map.insert("t".into(), json!(args.t));
        map.insert("method".into(), json!(method));
        map.insert("count".into(), big(count));
        map.insert("total".into(), big(&total));
        if let Some(source) = source {
            map.insert("source".into(), json!(source));
        }
        map.insert("seconds".into(), json!(seconds));
        Value::Object(map)
    };
    let mut counts = Vec::new();
    if matches!(args.method, Method::Brute | Method::Both) {
        let t0 = Instant::now();
        let res = census_brute(&params, args.t, &config.budget(), config.jobs)?;
        em.record(&record("brute", &res.count, None, t0.elapsed().as_secs_f64()))?;
        counts.push(res.count);
    }
    if matches!(args.method, Method::Formula | Method::Both) {
        let t0 = Instant::now();
        let (count, source) = formula_count_for(&field, args.d, args.n, args.t)?;
        em.record(&record(
            "formula",
            &count,
            Some(source),
            t0.elapsed().as_secs_f64(),
        ))?;
        counts.push(count);
    }
    let mut tally = Tally::default();
    if let [a, b] = counts.as_slice() {
        tally.add(a == b);
    }
    Ok(tally)
}

#[derive(Serialize)]
struct ClosedRecord {
    poly: String,
    #[serde(rename = "E")]
    e: u32,
    #[serde(rename = "E_closed")]
    e_closed: u32,
    agree: bool,
}

fn run_closed(config: &RunConfig, args: &ClosedArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let budget = config.budget();
    let inst = CaseInstance::new(args.case, &field, args.n, args.d)?;
    let family = enumerate_index_sets(field.p(), field.m(), inst.n(), inst.d(), &budget)?;
    let source = match args.check {
        Check::Exhaustive => InputSource::Exhaustive,
        Check::Random { count, seed } => InputSource::Random { count, seed },
    };
    let polys = sweep_polys(&source, &field, inst.n(), inst.d(), &budget)?;
    sweep(polys, config.jobs, em, |f| {
        let e = family.evaluate_e(f)?;
        let closed = e_closed_form_normalized(&inst, f)?;
        let agree = e == closed;
        Ok((
            ClosedRecord {
                poly: f.to_string(),
                e: e.0,
                e_closed: closed.0,
                agree,
            },
            agree,
        ))
    })
}

#[derive(Serialize)]
struct ZcountRecord {
    poly: String,
    zcount: u64,
    valuation: Valuation,
}

fn run_zcount(config: &RunConfig, args: &ZcountArgs, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let field = config.field()?;
    let budget = config.budget();
    let source = match (&args.source.poly, &args.source.poly_file) {
        (Some(p), None) => InputSource::Inline(p.clone()),
        (None, Some(path)) => InputSource::File(path.clone()),
        _ => {
            return Err(CliError::Usage(
                "exactly one of --poly, --poly-file is required".into(),
            ))
        }
    };
    for f in sweep_polys(&source, &field, args.n, args.d, &budget)? {
        let zcount = f.zero_count(&budget)?;
        em.record(&ZcountRecord {
            poly: f.to_string(),
            zcount,
            valuation: nu_p(zcount as u128, field.p()),
        })?;
    }
    Ok(Tally::default())
}

#[derive(Serialize)]
struct SelftestRecord {
    check: &'static str,
    expected: String,
    got: String,
    ok: bool,
}

/// Known values exercised end to end; a failing check counts as a
/// disagreement.
fn run_selftest(config: &RunConfig, em: &mut Emitter<'_>) -> Result<Tally, CliError> {
    let budget = config.budget();
    let gf = |p, m| FieldSpec::new(p, m, None).expect("small prime power");
    let mut tally = Tally::default();
    let mut emit = |check, expected: String, got: String| -> Result<(), CliError> {
        let ok = expected == got;
        em.record(&SelftestRecord {
            check,
            expected,
            got,
            ok,
        })?;
        tally.add(ok);
        Ok(())
    };

    let f2 = gf(2, 1);
    let f = parse_poly("X1*X2 + X3*X4", &f2, 4, 2)?;
    let family = enumerate_index_sets(2, 1, 4, 2, &budget)?;
    let rep = verify_with_family(&f, &family, &budget)?;
    emit(
        "zcount X1X2+X3X4 over GF(2)^4",
        "10".into(),
        rep.zcount.to_string(),
    )?;
    emit("E(X1X2+X3X4)", "1".into(), rep.e.to_string())?;

    emit("dim R_2(2,4)", "11".into(), rm_dim(2, 2, 4)?.to_string())?;

    let params = RMParams::new(&f2, 2, 4)?;
    let brute = census_brute(&params, 2, &budget, config.jobs)?.count;
    let formula = formula_count_for(&f2, 2, 4, 2)?.0;
    emit("N_2(2,4;2) census", "1152".into(), brute.to_string())?;
    emit("N_2(2,4;2) formula", "1152".into(), formula.to_string())?;

    let f3 = gf(3, 1);
    let params = RMParams::new(&f3, 2, 2)?;
    let brute = census_brute(&params, 1, &budget, config.jobs)?.count;
    let formula = formula_count_for(&f3, 2, 2, 1)?.0;
    emit("N_3(2,2;1) census", "243".into(), brute.to_string())?;
    emit("N_3(2,2;1) formula", "243".into(), formula.to_string())?;

    let family = enumerate_index_sets(2, 1, 3, 2, &budget)?;
    let params = RMParams::new(&f2, 2, 3)?;
    let mut failures = 0u64;
    for g in enumerate_codewords(&params, &budget)? {
        failures += !verify_with_family(&g, &family, &budget)?.agrees() as u64;
    }
    emit(
        "congruence failures on R_2(2,3)",
        "0".into(),
        failures.to_string(),
    )?;

    let built = complementary_pair_family(&f2, 4)?;
    let mut a = built.set_i;
    let mut b = enumerate_index_sets(2, 1, 4, 2, &budget)?.set_i;
    a.sort();
    b.sort();
    emit(
        "pair construction = enumeration, q=2 n=4",
        "true".into(),
        (a == b).to_string(),
    )?;

    let inst = CaseInstance::new(CaseTag::HalfN, &f2, 4, None)?;
    let form = build_quadratic_form(&inst);
    let expected = quad_root_count(inst.case().characteristic(), 2, form.num_vars())?;
    let got = quad_root_count_brute(&form, &f2, &budget)?;
    emit("roots of the q=2 n=4 form", expected.to_string(), got.to_string())?;

    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (Result<RunRecord, CliError>, String, String) {
        let config = RunConfig::try_parse_from(std::iter::once("axcount").chain(args.iter().copied()))
            .expect("valid arguments");
        let mut out = Vec::new();
        let mut err = Vec::new();
        let rec = dispatch(&config, &mut out, &mut err);
        (
            rec,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn lines(s: &str) -> Vec<Value> {
        s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
    }

    #[test]
    fn verify_inline() {
        let (rec, out, _) = run(&[
            "verify",
            "--field",
            "2",
            "--n",
            "4",
            "--d",
            "2",
            "--poly",
            "X1*X2+X3*X4",
        ]);
        let rec = rec.unwrap();
        assert_eq!(rec.exit_code(), EXIT_OK);
        let v = lines(&out);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0]["zcount"], 10);
        assert_eq!(v[0]["E"], 1);
        assert_eq!(v[0]["congruence_ok"], true);
        assert_eq!(v[1]["checked"], 1);
        assert_eq!(v[1]["disagreements"], 0);
    }

    #[test]
    fn rm_commands() {
        let (_, out, _) = run(&["rm", "dim", "--field", "2", "--d", "2", "--n", "4"]);
        assert_eq!(lines(&out)[0]["dim"], 11);
        let (rec, out, _) = run(&[
            "rm", "count", "--field", "3", "--d", "2", "--n", "2", "--t", "1", "--method", "both",
        ]);
        assert_eq!(rec.unwrap().exit_code(), EXIT_OK);
        let v = lines(&out);
        assert_eq!(v[0]["method"], "brute");
        assert_eq!(v[0]["count"], 243);
        assert_eq!(v[1]["method"], "formula");
        assert_eq!(v[1]["count"], 243);
        assert_eq!(v[2]["agreements"], 1);
    }

    #[test]
    fn random_is_reproducible() {
        let args = [
            "verify", "--field", "2^2", "--n", "3", "--d", "2", "--random", "20", "--seed", "7",
        ];
        let (_, a, _) = run(&args);
        let (_, b, _) = run(&args);
        let strip = |s: &str| {
            s.lines()
                .filter(|l| !l.contains("elapsed_seconds"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.lines().count(), 21);
    }

    #[test]
    fn usage_errors() {
        assert!(
            RunConfig::try_parse_from(["axcount", "verify", "--field", "2", "--n", "2", "--d", "2"]).is_err()
        );
        assert!(RunConfig::try_parse_from([
            "axcount", "verify", "--field", "2", "--n", "2", "--d", "2", "--random", "3"
        ])
        .is_err());
        assert!(RunConfig::try_parse_from([
            "axcount",
            "verify",
            "--field",
            "2",
            "--n",
            "2",
            "--d",
            "2",
            "--exhaustive",
            "--poly",
            "X1"
        ])
        .is_err());
        let (rec, _, _) = run(&["verify", "--field", "6", "--n", "2", "--d", "2", "--poly", "X1"]);
        assert_eq!(rec.unwrap_err().exit_code(), EXIT_USAGE);
        let (rec, _, _) = run(&["verify", "--n", "2", "--d", "2", "--poly", "X1"]);
        assert_eq!(rec.unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn budget_error() {
        let (rec, _, _) = run(&[
            "--budget", "100", "rm", "count", "--field", "2", "--d", "2", "--n", "4", "--t", "2", "--method",
            "brute",
        ]);
        assert_eq!(rec.unwrap_err().exit_code(), EXIT_BUDGET);
    }

    #[test]
    fn check_parsing() {
        assert_eq!("exhaustive".parse::<Check>().unwrap(), Check::Exhaustive);
        assert_eq!(
            "random:10:3".parse::<Check>().unwrap(),
            Check::Random { count: 10, seed: 3 }
        );
        assert!("random:10".parse::<Check>().is_err());
    }

    #[test]
    fn closed_and_iset() {
        let (rec, out, _) = run(&["closed", "--case", "ter_n", "--field", "3", "--n", "2"]);
        assert_eq!(rec.unwrap().summary.disagreements, 0);
        assert_eq!(lines(&out).len(), 730);
        let (rec, out, _) = run(&["iset", "--field", "2", "--n", "4", "--d", "2"]);
        assert_eq!(rec.unwrap().summary.checked, 3);
        let v = lines(&out);
        assert_eq!(v[0]["i"]["(1,1,0,0)"], 1);
        let (rec, _, _) = run(&["iset", "--field", "2", "--n", "3", "--d", "2", "--prime-set"]);
        assert_eq!(rec.unwrap().summary.agreements, 3);
    }

    #[test]
    fn csv_output() {
        let (_, out, err) = run(&[
            "--format", "csv", "zcount", "--field", "3", "--n", "2", "--d", "2", "--poly", "X1*X2",
        ]);
        let mut rows = out.lines();
        assert_eq!(rows.next(), Some("poly,zcount,valuation"));
        assert_eq!(rows.next(), Some("X1*X2,5,0"));
        assert!(err.contains("\"checked\""));
    }

    #[test]
    fn selftest_passes() {
        let (rec, out, _) = run(&["selftest"]);
        let rec = rec.unwrap();
        assert_eq!(rec.summary.disagreements, 0, "{out}");
        assert!(rec.summary.checked >= 10);
    }
}
