//! `kempner-gadic` command line. Every subcommand parses its flags, calls one
//! library operation and serializes the result; numeric work stays in the
//! library.
//!
//! Exit status: 0 success, 2 usage/domain/structural error, 3 regime error,
//! 4 enumeration budget exceeded.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use crate::bounds::{self, CriterionVerdict, Verdict};
use crate::counting::{self, LevelCounts};
use crate::decimal::{f64_to_decimal, rational_to_decimal, Rounding};
use crate::digit_sets::{
    ForbiddenRule, ForbiddenSpec, IndexRule, IndexedFamily, Lambda, LambdaFamily,
    DEFAULT_ENUMERATION_BUDGET,
};
use crate::error::Error;
use crate::gadic::{DigitVector, GadicSequence};
use crate::summation::{self, DEFAULT_TAIL_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REGIME: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Decimal digits in fixed-point output; working precision is IEEE double.
const DEFAULT_PRECISION: u32 = 12;
const WORKING_BITS: u32 = 53;

#[derive(Debug, Parser)]
#[command(
    name = "kempner-gadic",
    version,
    about = "Missing-digit sets in mixed-radix numeration: codec, exact counts, bounds and sum enclosures",
    after_help = "Sequence specs: constant:<d> | periodic:<d0>,<d1>,... | explicit:<d0>,...[;then=constant:<d>|periodic:<...>|linear:<start>,<step>]\n\
                  Forbidden specs: uniform:{9} | per-position:0={9};1={0,5};default={9}\n\
                  Index sets: finite:0,2,4 | arith:first=0,step=2 | all\n\
                  Lambda is a rational p/q; decimals are rejected.\n\
                  Config mode: kempner-gadic --config job.json, where job.json is an object with a \"command\" key and one key per flag."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mixed-radix digits of n (least significant first).
    Encode(EncodeArgs),
    /// Integer value of a digit string.
    Decode(DecodeArgs),
    /// Exact member counts per level.
    Count(RangeArgs),
    /// Exact Pr(X <= lambda m) on J_m.
    Prob(LevelArgs),
    /// Chernoff level-count bound next to the exact count.
    Bound(RangeArgs),
    /// Upper bound on the abscissa of convergence and the admissible sigma window.
    Abscissa(AbscissaArgs),
    /// Convergence/divergence thresholds for an index-restricted set over a k range.
    Criterion(CriterionArgs),
    /// Certified enclosures of the sum of a^(-sigma) over the set.
    Sum(SumArgs),
    /// Monte-Carlo estimate of Pr(X <= lambda m).
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal digits after the point in fixed-point fields.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    forbidden: String,
    /// Rational p/q in [0, 1].
    #[arg(long)]
    lambda: String,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    n: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    #[arg(long)]
    sequence: String,
    /// Comma-separated digits, least significant first; empty for 0.
    #[arg(long, allow_hyphen_values = true)]
    digits: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// First level.
    #[arg(long)]
    m: usize,
    /// Last level (defaults to --m).
    #[arg(long)]
    to: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct AbscissaArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    lambda: String,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct CriterionArgs {
    #[arg(long)]
    sequence: String,
    #[arg(long)]
    forbidden: String,
    #[arg(long)]
    index: String,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    k_min: u64,
    #[arg(long)]
    k_max: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct SumArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    sigma: f64,
    /// Enumerated levels M; a comma-separated list yields one row per M.
    #[arg(long)]
    levels: String,
    /// Extra levels bounded by exact counts (M' = M + depth).
    #[arg(long, default_value_t = DEFAULT_TAIL_DEPTH)]
    tail_depth: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[command(flatten)]
    out: Output,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of independently seeded chunks; fixes the result.
    #[arg(long, default_value_t = 1)]
    splits: u64,
    /// Threads running the chunks; does not change the result.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    out: Output,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<crate::error::ParseError> for Failure {
    fn from(e: crate::error::ParseError) -> Self {
        Failure::Lib(e.into())
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Regime(_) => EXIT_REGIME,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Domain(_) | Error::Structural(_) | Error::Parse(_) => EXIT_USAGE,
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(args) => args,
        Err(msg) => return failure(EXIT_USAGE, msg),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if status == EXIT_OK {
                Outcome {
                    status,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                failure(status, text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok((stdout, status)) => Outcome {
            status,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => failure(EXIT_USAGE, format!("error: {msg}\n")),
        Err(Failure::Lib(e)) => failure(exit_code(&e), format!("error: {e}\n")),
    }
}

fn failure(status: i32, stderr: String) -> Outcome {
    Outcome {
        status,
        stdout: String::new(),
        stderr,
    }
}

/// `prog --config job.json` becomes `prog <command> --flag value ...`.
fn expand_config(args: Vec<String>) -> std::result::Result<Vec<String>, String> {
    if args.get(1).map(String::as_str) != Some("--config") {
        return Ok(args);
    }
    let path = PathBuf::from(args.get(2).ok_or("--config needs a path")?);
    if args.len() > 3 {
        return Err("--config takes no further arguments; put every flag in the file".into());
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let json: Value = serde_json::from_str(&text)
        .map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    let Value::Object(map) = json else {
        return Err("config must be a JSON object".into());
    };
    let command = map
        .get("command")
        .and_then(Value::as_str)
        .ok_or("config needs a string \"command\" key")?;
    let mut out = vec![args[0].clone(), command.to_string()];
    for (key, value) in &map {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let text = match value {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            Value::Bool(true) => {
                out.push(flag);
                continue;
            }
            Value::Bool(false) | Value::Null => continue,
            Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            Value::Object(_) => return Err(format!("config key {key:?} has an object value")),
        };
        out.push(flag);
        out.push(text);
    }
    Ok(out)
}

fn family(args: &FamilyArgs) -> Result<LambdaFamily, Failure> {
    let seq: GadicSequence = args.sequence.parse()?;
    let rule: ForbiddenRule = args.forbidden.parse()?;
    let lambda: Lambda = args.lambda.parse()?;
    Ok(LambdaFamily::new(ForbiddenSpec::new(seq, rule)?, lambda))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("invalid {what} {s:?} in {text:?}")))
        })
        .collect()
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("serializable");
    text.push('\n');
    text
}

/// CSV or aligned table from a header and string rows.
fn tabular(format: Format, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    match format {
        Format::Csv | Format::Json => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Format::Table => {
            let widths: Vec<usize> = (0..header.len())
                .map(|c| {
                    rows.iter()
                        .map(|r| r[c].len())
                        .chain([header[c].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            for row in rows {
                let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
            }
        }
    }
    out
}

fn dispatch(command: Command) -> Result<(String, i32), Failure> {
    match command {
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Count(a) => count(a),
        Command::Prob(a) => prob(a),
        Command::Bound(a) => bound(a),
        Command::Abscissa(a) => abscissa(a),
        Command::Criterion(a) => criterion(a),
        Command::Sum(a) => sum(a),
        Command::Mc(a) => mc(a),
    }
    .map(|text| (text, EXIT_OK))
    .or_else(|f| match f {
        // Per-row failures in a table still print the table.
        Failure::Usage(msg) if msg.starts_with(ROW_ERRORS) => {
            let (status, body) = msg[ROW_ERRORS.len()..].split_once('\n').expect("tagged");
            Ok((body.to_string(), status.parse().expect("status")))
        }
        other => Err(other),
    })
}

const ROW_ERRORS: &str = "\u{0}rows:";

#[derive(Serialize)]
struct EncodeOut {
    digits: Vec<u64>,
    m: usize,
}

fn encode(a: EncodeArgs) -> Result<String, Failure> {
    let seq: GadicSequence = a.sequence.parse()?;
    let n: BigUint = a
        .n
        .parse()
        .map_err(|_| Failure::Usage(format!("--n {:?} is not a natural number", a.n)))?;
    let dv = seq.encode(&n)?;
    let out = EncodeOut {
        digits: dv.digits().to_vec(),
        m: dv.len(),
    };
    Ok(match a.out.format {
        Format::Json => json(&out),
        f => tabular(
            f,
            &["position", "digit", "radix"],
            &dv.digits()
                .iter()
                .zip(dv.radices())
                .enumerate()
                .map(|(i, (c, d))| vec![i.to_string(), c.to_string(), d.to_string()])
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Serialize)]
struct DecodeOut {
    n: String,
}

fn decode(a: DecodeArgs) -> Result<String, Failure> {
    let seq: GadicSequence = a.sequence.parse()?;
    let digits: Vec<u64> = parse_list(&a.digits, "digit")?;
    let dv = DigitVector::for_sequence(&seq, digits)?;
    let n = seq.decode(&dv)?;
    Ok(match a.out.format {
        Format::Json => json(&DecodeOut { n: n.to_string() }),
        f => tabular(f, &["n"], &[vec![n.to_string()]]),
    })
}

fn level_range(m: usize, to: Option<usize>) -> Result<std::ops::RangeInclusive<usize>, Failure> {
    let to = to.unwrap_or(m);
    if m == 0 || to < m {
        return Err(Failure::Usage(format!("level range {m}..={to} is empty or starts at 0")));
    }
    Ok(m..=to)
}

#[derive(Serialize)]
struct CountRow {
    m: usize,
    g_m: String,
    level_size: String,
    members_in_im: String,
    members_in_jm: String,
    tail_probability: String,
}

#[derive(Serialize)]
struct CountOut {
    sequence: String,
    forbidden: String,
    lambda: String,
    precision: u32,
    rows: Vec<CountRow>,
}

fn count(a: RangeArgs) -> Result<String, Failure> {
    let fam = family(&a.family)?;
    let range = level_range(a.m, a.to)?;
    let digits = a.out.precision;
    let mut rows = Vec::new();
    for c in LevelCounts::new(&fam).skip(range.start() - 1).take(range.clone().count()) {
        let c = c?;
        rows.push(CountRow {
            m: c.m,
            g_m: c.g_m.to_string(),
            level_size: c.level_size().to_string(),
            members_in_im: c.members_in_im.to_string(),
            members_in_jm: c.members_in_jm.to_string(),
            tail_probability: rational_to_decimal(&c.tail_probability(), digits, Rounding::Nearest),
        });
    }
    Ok(match a.out.format {
        Format::Json => json(&CountOut {
            sequence: fam.seq().to_string(),
            forbidden: fam.forbidden().rule().to_string(),
            lambda: fam.lambda().to_string(),
            precision: digits,
            rows,
        }),
        f => tabular(
            f,
            &["m", "g_m", "level_size", "members_in_im", "members_in_jm", "tail_probability"],
            &rows
                .into_iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.g_m,
                        r.level_size,
                        r.members_in_im,
                        r.members_in_jm,
                        r.tail_probability,
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Serialize)]
struct ProbOut {
    m: usize,
    lambda: String,
    tail_probability: String,
    decimal: String,
    precision: u32,
}

fn prob(a: LevelArgs) -> Result<String, Failure> {
    let fam = family(&a.family)?;
    let p = counting::tail_probability(&fam, a.m)?;
    let out = ProbOut {
        m: a.m,
        lambda: fam.lambda().to_string(),
        tail_probability: p.to_string(),
        decimal: rational_to_decimal(&p, a.out.precision, Rounding::Nearest),
        precision: a.out.precision,
    };
    Ok(match a.out.format {
        Format::Json => json(&out),
        f => tabular(
            f,
            &["m", "tail_probability", "decimal"],
            &[vec![out.m.to_string(), out.tail_probability, out.decimal]],
        ),
    })
}

#[derive(Serialize)]
struct BoundRow {
    m: usize,
    exact_count: String,
    chernoff_level_bound: String,
    ratio: String,
}

#[derive(Serialize)]
struct BoundOut {
    sequence: String,
    forbidden: String,
    lambda: String,
    precision: u32,
    rows: Vec<BoundRow>,
}

fn bound(a: RangeArgs) -> Result<String, Failure> {
    let fam = family(&a.family)?;
    let range = level_range(a.m, a.to)?;
    let digits = a.out.precision;
    let mut rows = Vec::new();
    for c in LevelCounts::new(&fam).skip(range.start() - 1).take(range.clone().count()) {
        let c = c?;
        let b = bounds::level_count_bound(&fam, c.m)?;
        let exact = crate::interval::Interval::from_biguint(&c.members_in_im);
        rows.push(BoundRow {
            m: c.m,
            exact_count: c.members_in_im.to_string(),
            chernoff_level_bound: f64_to_decimal(b, digits, Rounding::Up),
            ratio: f64_to_decimal(exact.hi / b, digits, Rounding::Up),
        });
    }
    Ok(match a.out.format {
        Format::Json => json(&BoundOut {
            sequence: fam.seq().to_string(),
            forbidden: fam.forbidden().rule().to_string(),
            lambda: fam.lambda().to_string(),
            precision: digits,
            rows,
        }),
        f => tabular(
            f,
            &["m", "exact_count", "chernoff_level_bound", "ratio"],
            &rows
                .into_iter()
                .map(|r| vec![r.m.to_string(), r.exact_count, r.chernoff_level_bound, r.ratio])
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Serialize)]
struct AbscissaOut {
    d: u64,
    lambda: String,
    abscissa_bound: f64,
    sigma_window: bounds::SigmaWindow,
}

fn abscissa(a: AbscissaArgs) -> Result<String, Failure> {
    let lambda: Lambda = a.lambda.parse()?;
    let value = bounds::abscissa_bound(a.d, lambda)?;
    let window = bounds::sigma_window(a.d, lambda)?;
    let out = AbscissaOut {
        d: a.d,
        lambda: lambda.to_string(),
        abscissa_bound: value,
        sigma_window: window,
    };
    Ok(match a.out.format {
        Format::Json => json(&out),
        f => tabular(
            f,
            &["d", "lambda", "abscissa_bound"],
            &[vec![
                a.d.to_string(),
                out.lambda,
                f64_to_decimal(value, a.out.precision, Rounding::Up),
            ]],
        ),
    })
}

#[derive(Serialize)]
struct WitnessOut {
    #[serde(flatten)]
    witness: bounds::Witness,
    text: String,
}

#[derive(Serialize)]
struct CriterionOut {
    verdict: Verdict,
    scope: String,
    index: String,
    d: u64,
    delta: f64,
    k_min: u64,
    k_max: u64,
    witness_min: WitnessOut,
    witness_max: WitnessOut,
    convergence_fails_at: Option<u64>,
    divergence_fails_at: Option<u64>,
}

fn criterion(a: CriterionArgs) -> Result<String, Failure> {
    let seq: GadicSequence = a.sequence.parse()?;
    let rule: ForbiddenRule = a.forbidden.parse()?;
    let index: IndexRule = a.index.parse()?;
    let fam = IndexedFamily::new(ForbiddenSpec::new(seq, rule)?, index);
    let v: CriterionVerdict = bounds::criterion_check(&fam, a.d, a.delta, a.k_min, a.k_max)?;
    let wrap = |w: bounds::Witness| WitnessOut {
        text: w.to_string(),
        witness: w,
    };
    let out = CriterionOut {
        verdict: v.verdict,
        scope: format!("tested k in [{}, {}] only", v.k_min, v.k_max),
        index: fam.index().to_string(),
        d: v.d,
        delta: v.delta_used,
        k_min: v.k_min,
        k_max: v.k_max,
        witness_min: wrap(v.witness_at_min),
        witness_max: wrap(v.witness),
        convergence_fails_at: v.convergence_fails_at,
        divergence_fails_at: v.divergence_fails_at,
    };
    Ok(match a.out.format {
        Format::Json => json(&out),
        f => tabular(
            f,
            &["verdict", "k", "witness"],
            &[
                vec![out.verdict.to_string(), out.k_min.to_string(), out.witness_min.text],
                vec![out.verdict.to_string(), out.k_max.to_string(), out.witness_max.text],
            ],
        ),
    })
}

#[derive(Serialize)]
struct SumRow {
    levels: usize,
    levels_counted: Option<usize>,
    lower: Option<String>,
    upper: Option<String>,
    width: Option<String>,
    partial_sum: Option<String>,
    counted_tail: Option<String>,
    analytic_tail: Option<String>,
    tail_ratio: Option<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SumOut {
    sequence: String,
    forbidden: String,
    lambda: String,
    sigma: f64,
    tail_depth: usize,
    precision: Precision,
    rows: Vec<SumRow>,
}

#[derive(Serialize)]
struct Precision {
    decimal_digits: u32,
    working_bits: u32,
    rounding: &'static str,
}

fn sum(a: SumArgs) -> Result<String, Failure> {
    let fam = family(&a.family)?;
    let levels: Vec<usize> = parse_list(&a.levels, "level")?;
    let digits = a.out.precision;
    let table = summation::convergence_table(&fam, a.sigma, &levels, a.tail_depth, a.budget);
    let mut worst = EXIT_OK;
    let mut rows = Vec::new();
    for (m, row) in table {
        let fmt = |x: f64, r: Rounding| Some(f64_to_decimal(x, digits, r));
        rows.push(match row {
            Ok(e) => SumRow {
                levels: m,
                levels_counted: Some(e.levels_counted),
                lower: fmt(e.lower, Rounding::Down),
                upper: fmt(e.upper, Rounding::Up),
                width: fmt(e.width(), Rounding::Up),
                partial_sum: fmt(e.partial_sum, Rounding::Nearest),
                counted_tail: fmt(e.counted_tail, Rounding::Up),
                analytic_tail: fmt(e.analytic_tail, Rounding::Up),
                tail_ratio: fmt(e.tail_ratio, Rounding::Up),
                error: None,
            },
            Err(e) => {
                worst = worst.max(exit_code(&e));
                SumRow {
                    levels: m,
                    levels_counted: None,
                    lower: None,
                    upper: None,
                    width: None,
                    partial_sum: None,
                    counted_tail: None,
                    analytic_tail: None,
                    tail_ratio: None,
                    error: Some(e.to_string()),
                }
            }
        });
    }
    let body = match a.out.format {
        Format::Json => json(&SumOut {
            sequence: fam.seq().to_string(),
            forbidden: fam.forbidden().rule().to_string(),
            lambda: fam.lambda().to_string(),
            sigma: a.sigma,
            tail_depth: a.tail_depth,
            precision: Precision {
                decimal_digits: digits,
                working_bits: WORKING_BITS,
                rounding: "lower rounded down, upper rounded up",
            },
            rows,
        }),
        f => {
            let cell = |x: Option<String>| x.unwrap_or_default();
            tabular(
                f,
                &[
                    "M", "M_prime", "lower", "upper", "width", "partial_sum", "counted_tail",
                    "analytic_tail", "tail_ratio", "error",
                ],
                &rows
                    .into_iter()
                    .map(|r| {
                        vec![
                            r.levels.to_string(),
                            r.levels_counted.map(|v| v.to_string()).unwrap_or_default(),
                            cell(r.lower),
                            cell(r.upper),
                            cell(r.width),
                            cell(r.partial_sum),
                            cell(r.counted_tail),
                            cell(r.analytic_tail),
                            cell(r.tail_ratio),
                            cell(r.error).replace(',', ";"),
                        ]
                    })
                    .collect::<Vec<_>>(),
            )
        }
    };
    if worst == EXIT_OK {
        Ok(body)
    } else {
        Err(Failure::Usage(format!("{ROW_ERRORS}{worst}\n{body}")))
    }
}

#[derive(Serialize)]
struct McOut {
    m: usize,
    lambda: String,
    samples: u64,
    seed: u64,
    splits: u64,
    hits: u64,
    estimate: f64,
    std_error: f64,
    exact: String,
    exact_decimal: String,
}

fn mc(a: McArgs) -> Result<String, Failure> {
    let fam = family(&a.family)?;
    let est = counting::monte_carlo_tail_split(&fam, a.m, a.samples, a.seed, a.splits, a.workers)?;
    let exact = counting::tail_probability(&fam, a.m)?;
    let out = McOut {
        m: a.m,
        lambda: fam.lambda().to_string(),
        samples: est.samples,
        seed: a.seed,
        splits: a.splits,
        hits: est.hits,
        estimate: est.estimate,
        std_error: est.std_error,
        exact: exact.to_string(),
        exact_decimal: rational_to_decimal(&exact, a.out.precision, Rounding::Nearest),
    };
    Ok(match a.out.format {
        Format::Json => json(&out),
        f => tabular(
            f,
            &["m", "samples", "hits", "estimate", "std_error", "exact"],
            &[vec![
                out.m.to_string(),
                out.samples.to_string(),
                out.hits.to_string(),
                out.estimate.to_string(),
                out.std_error.to_string(),
                out.exact,
            ]],
        ),
    })
}
