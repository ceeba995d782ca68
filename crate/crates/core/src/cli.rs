//! The `qlc` command line.
//!
//! Data goes to stdout, witnesses and diagnostics to stderr. Exit status is
//! 0 when the command succeeds and any checked property holds, 1 when a
//! checked property fails, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use serde_json::Value;

use crate::criteria::{
    check_constant_criterion, check_criterion, confirm_conclusion, constant_parts, DEFAULT_MAX_N,
};
use crate::qpoly::QPoly;
use crate::seqprops::{self, first_internal_zero, PolySeq, Report, Witness};
use crate::transforms::{self, BinomialParams, ProofIdentity, Window};
use crate::triangles::{self, Triangle, TriangleSpec};

#[derive(Parser, Debug)]
#[command(name = "qlc", version, about = "Exact q-log-concavity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a triangle from a built-in family or a spec file.
    Triangle(TriangleArgs),
    /// Check a sequence property.
    Check(CheckArgs),
    /// Apply a linear transform to a sequence.
    Transform(TransformArgs),
    /// Verify a criterion or its conclusion on a bounded range.
    Verify(VerifyArgs),
    /// Check the binomial identities of the shifted binomial transform argument.
    Identities(IdentitiesArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in family name.
    #[arg(long)]
    family: Option<String>,
    /// Triangle spec JSON file.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct TriangleArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    rows: usize,
    /// Print only column K.
    #[arg(long, value_name = "K")]
    column: Option<usize>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Evaluate every entry at this rational q (e.g. 1, 1/2).
    #[arg(long, value_name = "RAT")]
    eval_q: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    LogConcave,
    LogConvex,
    QLogConcave,
    StrongQLogConcave,
    StrongQLogConvex,
    InternalZeros,
    Tp2Window,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    property: Property,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_name = "RAT")]
    eval_q: Option<String>,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(subcommand)]
    kind: TransformKind,
}

#[derive(Args, Debug)]
struct TransformIo {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    upto: usize,
}

#[derive(Subcommand, Debug)]
enum TransformKind {
    /// y_n = sum_k C(a+n, b+k) x_k
    Binomial {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[command(flatten)]
        io: TransformIo,
    },
    /// z_n = sum_i w_i x_{n+i}
    Window {
        #[arg(long)]
        weights: PathBuf,
        #[command(flatten)]
        io: TransformIo,
    },
    /// y_n = sum_i [q^i](w(q)^n) x_i
    Multinomial {
        #[arg(long)]
        weights: PathBuf,
        #[command(flatten)]
        io: TransformIo,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Thm41,
    Proposition,
    Conclusion,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: VerifyTarget,
    #[command(flatten)]
    source: Source,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
}

#[derive(Args, Debug)]
struct IdentitiesArgs {
    #[arg(long)]
    max_a: u32,
    /// Use the corrected form of the first identity.
    #[arg(long)]
    corrected: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    2
                }
            };
        }
    };

    apply_thread_cap();
    match execute(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn apply_thread_cap() {
    #[cfg(feature = "parallel")]
    {
        let cap = std::env::var("QLC_THREADS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0);
        if let Some(n) = cap {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<bool> {
    match command {
        Command::Triangle(args) => run_triangle(args, out),
        Command::Check(args) => run_check(args, out, err),
        Command::Transform(args) => run_transform(args.kind, out),
        Command::Verify(args) => run_verify(args, out, err),
        Command::Identities(args) => run_identities(args, out, err),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn report_witness<T: Serialize>(err: &mut dyn Write, witness: &T) -> anyhow::Result<()> {
    write_json(err, &serde_json::json!({ "witness": witness }))
}

fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_spec(source: &Source) -> anyhow::Result<TriangleSpec> {
    match (&source.family, &source.spec) {
        (Some(name), None) => Ok(triangles::builtin(name)?),
        (None, Some(path)) => Ok(serde_json::from_value(read_json(path)?)
            .with_context(|| format!("invalid triangle spec in {}", path.display()))?),
        _ => bail!("exactly one of --family or --spec is required"),
    }
}

fn parse_rational(s: &str) -> anyhow::Result<BigRational> {
    let s = s.trim();
    let parsed = if s.contains('/') {
        s.parse::<BigRational>().ok()
    } else {
        s.parse::<BigInt>().ok().map(BigRational::from_integer)
    };
    parsed.ok_or_else(|| anyhow!("invalid rational {s:?}"))
}

enum SeqInput {
    Numeric(Vec<BigRational>),
    Poly(PolySeq),
}

fn parse_numeric_item(v: &Value) -> anyhow::Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => bail!("expected a decimal string, got {other}"),
    }
}

fn read_sequence(path: &Path) -> anyhow::Result<SeqInput> {
    let value = read_json(path)?;
    let items = value
        .as_array()
        .ok_or_else(|| anyhow!("{}: expected a JSON array", path.display()))?;
    if items.iter().any(Value::is_array) {
        let seq: PolySeq = serde_json::from_value(value.clone())
            .with_context(|| format!("{}: invalid polynomial sequence", path.display()))?;
        Ok(SeqInput::Poly(seq))
    } else {
        let nums = items
            .iter()
            .map(parse_numeric_item)
            .collect::<anyhow::Result<Vec<_>>>()
            .with_context(|| format!("{}: invalid numeric sequence", path.display()))?;
        Ok(SeqInput::Numeric(nums))
    }
}

fn read_integers(path: &Path) -> anyhow::Result<Vec<BigInt>> {
    match read_sequence(path)? {
        SeqInput::Numeric(v) => v
            .into_iter()
            .map(|r| {
                r.is_integer()
                    .then(|| r.to_integer())
                    .ok_or_else(|| anyhow!("{}: {r} is not an integer", path.display()))
            })
            .collect(),
        SeqInput::Poly(_) => bail!("{}: expected an array of integer strings", path.display()),
    }
}

fn as_numeric(input: SeqInput, eval_q: Option<&str>) -> anyhow::Result<Vec<BigRational>> {
    match (input, eval_q) {
        (SeqInput::Numeric(_), Some(_)) => bail!("--eval-q needs a polynomial sequence input"),
        (SeqInput::Numeric(v), None) => Ok(v),
        (SeqInput::Poly(p), Some(q)) => Ok(p.eval_at(&parse_rational(q)?)),
        (SeqInput::Poly(p), None) => {
            p.0.iter()
                .map(|x| x.as_constant().map(BigRational::from_integer))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| anyhow!("polynomial entries need --eval-q for a numeric property"))
        }
    }
}

fn as_poly(input: SeqInput, eval_q: Option<&str>) -> anyhow::Result<PolySeq> {
    if eval_q.is_some() {
        bail!("--eval-q only applies to numeric properties");
    }
    match input {
        SeqInput::Poly(p) => Ok(p),
        SeqInput::Numeric(v) => v
            .into_iter()
            .map(|r| {
                r.is_integer()
                    .then(|| QPoly::constant(r.to_integer()))
                    .ok_or_else(|| anyhow!("{r} is not an integer"))
            })
            .collect::<anyhow::Result<Vec<_>>>()
            .map(PolySeq),
    }
}

fn run_check(args: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<bool> {
    let input = read_sequence(&args.input)?;
    let eval_q = args.eval_q.as_deref();
    let report = match args.property {
        Property::LogConcave => seqprops::is_log_concave(&as_numeric(input, eval_q)?)?,
        Property::LogConvex => seqprops::is_log_convex(&as_numeric(input, eval_q)?)?,
        Property::QLogConcave => seqprops::is_q_log_concave(&as_poly(input, eval_q)?)?,
        Property::StrongQLogConcave => seqprops::is_strong_q_log_concave(&as_poly(input, eval_q)?)?,
        Property::StrongQLogConvex => seqprops::is_strong_q_log_convex(&as_poly(input, eval_q)?)?,
        Property::InternalZeros => {
            let zero_at = match input {
                SeqInput::Poly(p) if eval_q.is_none() => first_internal_zero(&p.0),
                other => first_internal_zero(&as_numeric(other, eval_q)?),
            };
            match zero_at {
                None => Report::pass("no-internal-zeros"),
                Some(i) => Report::fail(
                    "no-internal-zeros",
                    Witness {
                        row: None,
                        i,
                        j: i,
                        degree: None,
                        lhs: "nonzero".into(),
                        rhs: "0".into(),
                    },
                ),
            }
        }
        Property::Tp2Window => {
            let values = as_numeric(input, eval_q)?;
            let ints = values
                .iter()
                .map(|r| r.is_integer().then(|| r.to_integer()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| anyhow!("tp2-window needs integer entries"))?;
            if ints.iter().any(Signed::is_negative) {
                bail!("tp2-window needs nonnegative entries");
            }
            if let Some(i) = first_internal_zero(&ints) {
                bail!("sequence has an internal zero at index {i}");
            }
            seqprops::tp2_window_check(&ints)
        }
    };
    write_json(out, &report)?;
    if let Some(w) = &report.witness {
        report_witness(err, w)?;
    }
    Ok(report.holds)
}

fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn write_transformed(out: &mut dyn Write, ys: TransformOutput) -> anyhow::Result<()> {
    match ys {
        TransformOutput::Numeric(v) => write_json(out, &rational_strings(&v)),
        TransformOutput::Poly(v) => write_json(out, &PolySeq(v)),
    }
}

enum TransformOutput {
    Numeric(Vec<BigRational>),
    Poly(Vec<QPoly>),
}

fn truncated<T>(mut v: Vec<T>, upto: usize, needed: usize, got: usize) -> anyhow::Result<Vec<T>> {
    if v.len() < upto + 1 {
        return Err(transforms::TransformError::InsufficientInput { needed, got }.into());
    }
    v.truncate(upto + 1);
    Ok(v)
}

fn run_transform(kind: TransformKind, out: &mut dyn Write) -> anyhow::Result<bool> {
    let result = match kind {
        TransformKind::Binomial { a, b, io } => {
            let p = BinomialParams { a, b };
            let input = read_sequence(&io.input)?;
            match &input {
                SeqInput::Numeric(x) => {
                    TransformOutput::Numeric(transforms::binomial_transform(p, x, io.upto)?)
                }
                SeqInput::Poly(x) => {
                    TransformOutput::Poly(transforms::binomial_transform(p, &x.0, io.upto)?)
                }
            }
        }
        TransformKind::Window { weights, io } => {
            let w = Window::new(read_integers(&weights)?)?;
            let input = read_sequence(&io.input)?;
            let width = w.weights().len();
            match &input {
                SeqInput::Numeric(x) => TransformOutput::Numeric(truncated(
                    transforms::window_convolve(&w, x)?,
                    io.upto,
                    io.upto + width,
                    x.len(),
                )?),
                SeqInput::Poly(x) => TransformOutput::Poly(truncated(
                    transforms::window_convolve(&w, &x.0)?,
                    io.upto,
                    io.upto + width,
                    x.len(),
                )?),
            }
        }
        TransformKind::Multinomial { weights, io } => {
            let w = Window::new(read_integers(&weights)?)?;
            let input = read_sequence(&io.input)?;
            match &input {
                SeqInput::Numeric(x) => {
                    TransformOutput::Numeric(transforms::multinomial_transform(&w, x, io.upto)?)
                }
                SeqInput::Poly(x) => {
                    TransformOutput::Poly(transforms::multinomial_transform(&w, &x.0, io.upto)?)
                }
            }
        }
    };
    write_transformed(out, result)?;
    Ok(true)
}

fn run_triangle(args: TriangleArgs, out: &mut dyn Write) -> anyhow::Result<bool> {
    let spec = load_spec(&args.source)?;
    let triangle = triangles::build(&spec, args.rows)?;
    let rows: Vec<Vec<String>> = match &args.eval_q {
        Some(q) => {
            let q0 = parse_rational(q)?;
            triangle
                .eval_at(&q0)
                .iter()
                .map(|r| rational_strings(r))
                .collect()
        }
        None => render_rows(&triangle),
    };

    if let Some(k) = args.column {
        let col: Vec<String> = rows.iter().filter_map(|r| r.get(k).cloned()).collect();
        match args.format {
            Format::Json => match &args.eval_q {
                Some(_) => write_json(out, &col)?,
                None => write_json(out, &triangles::column(&triangle, k))?,
            },
            Format::Csv | Format::Pretty => {
                for entry in col {
                    writeln!(out, "{entry}")?;
                }
            }
        }
        return Ok(true);
    }

    match args.format {
        Format::Json => match &args.eval_q {
            Some(_) => write_json(out, &rows)?,
            None => write_json(out, &triangle)?,
        },
        Format::Csv => {
            for row in &rows {
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Format::Pretty => write_pretty(out, &rows)?,
    }
    Ok(true)
}

fn render_rows(t: &Triangle) -> Vec<Vec<String>> {
    t.rows
        .iter()
        .map(|r| r.0.iter().map(ToString::to_string).collect())
        .collect()
}

fn write_pretty(out: &mut dyn Write, rows: &[Vec<String>]) -> anyhow::Result<()> {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|k| {
            rows.iter()
                .filter_map(|r| r.get(k))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let label = rows.len().saturating_sub(1).to_string().len();
    for (n, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{n:>label$} | {}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<bool> {
    let spec = load_spec(&args.source)?;
    match args.target {
        VerifyTarget::Thm41 | VerifyTarget::Proposition => {
            let report = if args.target == VerifyTarget::Thm41 {
                check_criterion(&spec, args.max_n)?
            } else {
                let (e, g, h) = constant_parts(&spec)?;
                check_constant_criterion(&e, &g, &h)?
            };
            for w in &report.warnings {
                writeln!(err, "warning: {w}")?;
            }
            write_json(out, &report)?;
            if let Some((key, verdict)) = report.first_failure() {
                write_json(
                    err,
                    &serde_json::json!({ "condition": key, "witness": verdict.witness }),
                )?;
            }
            Ok(report.overall)
        }
        VerifyTarget::Conclusion => {
            let report = confirm_conclusion(&spec, args.max_n)?;
            write_json(out, &report)?;
            if let Some(w) = &report.witness {
                report_witness(err, w)?;
            }
            Ok(report.holds)
        }
    }
}

fn run_identities(
    args: IdentitiesArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<bool> {
    let set = if args.corrected {
        ProofIdentity::CORRECTED
    } else {
        ProofIdentity::PRINTED
    };
    let report = transforms::check_identities(&set, args.max_a);
    write_json(out, &report)?;
    if let Some(first) = report.failures.first() {
        report_witness(err, first)?;
    }
    Ok(report.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert_eq!(
            parse_rational(" -1/2 ").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn pretty_rows_align() {
        let rows = vec![
            vec!["1".to_string()],
            vec!["10".to_string(), "1".to_string()],
        ];
        let mut buf = Vec::new();
        write_pretty(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 |  1\n1 | 10  1\n");
    }
}
