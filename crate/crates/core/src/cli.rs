//! Command-line front end. [`run`] is the whole program minus process exit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacity::{
    blahut_arimoto, deletion_capacities, mixture_upper_bound, BlahutArimotoOptions,
    TransitionMatrix, BOUND_CSV_HEADER, CAPACITY_CSV_HEADER,
};
use crate::embedding::{ball, embedding_number, BallKind};
use crate::entropy::{
    d2_spectrum, entropy, format_bits, i2_spectrum, ChannelKind, ChannelSpec, Direction,
    EntropyReport, Method,
};
use crate::error::Error;
use crate::extremal::{
    average_input_entropy, average_input_entropy_enumerated, average_lower_bound, default_budget,
    exhaustive_argopt, extremum_over_fixed_runs, figure_rows, global_extremum, BoundKind,
    ExtremumResult, FigureRow, Objective, ScanOptions, Which,
};
use crate::math::TOLERANCE_BITS;
use crate::verify::{run_all, run_suite, SuiteConfig, SuiteReport};
use crate::words::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "indel-entropy",
    version,
    about = "Conditional entropies of deletion and insertion channels"
)]
struct Cli {
    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of ways `y` embeds into `x` as a subsequence.
    Embed {
        #[arg(long)]
        y: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 2)]
        q: u8,
    },
    /// Weighted insertion or deletion ball as CSV.
    Ball {
        #[arg(long)]
        word: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Input or output entropy of one word.
    Entropy {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Input)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Per-case embedding spectrum of the radius-2 ball behind a 2-edit
    /// input entropy (binary). `del` gives `I_2(y)`, `ins` gives `D_2(y)`.
    Spectrum {
        #[arg(long, value_enum)]
        channel: KindArg,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Minimum or maximum input entropy over outputs of length `m`.
    Extremes {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        which: WhichArg,
        /// Restrict to outputs with this many runs (single-edit channels).
        #[arg(long)]
        runs: Option<usize>,
        /// Scan every word instead of using the known characterization.
        #[arg(long)]
        exhaustive: bool,
        /// Word budget for `--exhaustive`; defaults to $INDEL_ENTROPY_BUDGET or 20000000.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Average single-edit input entropy for inputs of length `n`.
    Average {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        n: usize,
        /// Also average by scoring every output word.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Run a named invariant suite (or `all`).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Blahut–Arimoto capacity at block length `n`; without `--k`, the
    /// deletion table for every k, or the mixture bound with `--bound-steps`.
    Capacity {
        #[arg(long, value_enum, default_value_t = KindArg::Del)]
        channel: KindArg,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iterations: usize,
        /// Emit the mixture bound at p = i/steps, i = 0..=steps.
        #[arg(long)]
        bound_steps: Option<usize>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Minimum, maximum, average and bound curves over a range of lengths.
    Figure {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Input lengths as `lo:hi` (inclusive) or a single value.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = BoundArg::Derived)]
        bound: BoundArg,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Debug, Args)]
struct ChannelArgs {
    #[arg(long, value_enum)]
    channel: KindArg,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    q: u8,
}

impl ChannelArgs {
    fn spec(&self) -> Result<ChannelSpec, Error> {
        ChannelSpec::new(self.channel.into(), self.k, self.q)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Del,
    Ins,
}

impl From<KindArg> for ChannelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Del => ChannelKind::Deletion,
            KindArg::Ins => ChannelKind::Insertion,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Enum,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BoundArg {
    Derived,
    ClosedForm,
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok(lo..=hi)
}

/// Failure carrying the exit status and the diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("csv error: {e}"),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("json error: {e}"),
        }
    }
}

fn flag_error(flag: &str, e: Error) -> Failure {
    let mut f = Failure::from(e);
    f.message = format!("--{flag}: {}", f.message);
    f
}

fn parse_word(flag: &str, text: &str, q: u8) -> Result<Word, Failure> {
    Word::parse(text, q).map_err(|e| flag_error(flag, e))
}

/// Parses `args` (program name first) and runs the command, writing
/// standard output to `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    // Standard output is buffered so the command can run inside a pool.
    let buffered = |command: &Command| {
        let mut buf = Vec::new();
        let outcome = dispatch(command, &mut buf);
        (outcome, buf)
    };
    let (outcome, buf) = match cli.jobs {
        Some(0) => (
            Err(Failure {
                code: EXIT_USAGE,
                message: "--jobs: must be at least 1".into(),
            }),
            Vec::new(),
        ),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| buffered(&cli.command)),
            Err(e) => (
                Err(Failure {
                    code: EXIT_USAGE,
                    message: format!("--jobs: {e}"),
                }),
                Vec::new(),
            ),
        },
        None => buffered(&cli.command),
    };
    if let Err(e) = stdout.write_all(&buf).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs `body` against the `--out` target.
fn with_out<F>(path: &str, stdout: &mut dyn Write, body: F) -> Result<i32, Failure>
where
    F: FnOnce(&mut dyn Write) -> Result<i32, Failure>,
{
    if path == "-" {
        let code = body(stdout)?;
        stdout.flush()?;
        Ok(code)
    } else {
        let file = File::create(path).map_err(|e| Failure {
            code: EXIT_USAGE,
            message: format!("--out: cannot create {path}: {e}"),
        })?;
        let mut w = BufWriter::new(file);
        let code = body(&mut w)?;
        w.flush()?;
        Ok(code)
    }
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn dispatch(command: &Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Embed { y, x, q } => {
            let y = parse_word("y", y, *q)?;
            let x = parse_word("x", x, *q)?;
            writeln!(stdout, "{}", embedding_number(&y, &x)?)?;
            Ok(EXIT_OK)
        }
        Command::Ball {
            word,
            k,
            kind,
            q,
            out,
        } => {
            let y = parse_word("word", word, *q)?;
            let kind = match kind {
                KindArg::Del => BallKind::Deletion,
                KindArg::Ins => BallKind::Insertion,
            };
            let b = ball(&y, *k, kind)?;
            with_out(out, stdout, |w| {
                b.write_csv(w)?;
                Ok(EXIT_OK)
            })
        }
        Command::Entropy {
            channel,
            word,
            direction,
            method,
            format,
            out,
        } => entropy_command(channel, word, *direction, *method, *format, out, stdout),
        Command::Spectrum { channel, word, out } => {
            let y = parse_word("word", word, 2)?;
            let s = match channel {
                KindArg::Del => i2_spectrum(&y)?,
                KindArg::Ins => d2_spectrum(&y)?,
            };
            with_out(out, stdout, |w| {
                let mut c = csv_writer(w);
                c.write_record(["case", "count", "multiplicity"])?;
                for e in &s.entries {
                    c.write_record([
                        e.case.to_string(),
                        e.value.to_string(),
                        e.multiplicity.to_string(),
                    ])?;
                }
                c.flush()?;
                Ok(EXIT_OK)
            })
        }
        Command::Extremes {
            channel,
            m,
            which,
            runs,
            exhaustive,
            budget,
            format,
            out,
        } => {
            let spec = channel.spec()?;
            let which = match which {
                WhichArg::Min => Which::Min,
                WhichArg::Max => Which::Max,
            };
            let result = if *exhaustive {
                let opts = ScanOptions {
                    budget: budget.unwrap_or_else(default_budget),
                    runs: *runs,
                    progress: None,
                };
                exhaustive_argopt(spec.q, *m, Objective::input(spec), which, &opts)?
            } else if let Some(r) = runs {
                extremum_over_fixed_runs(spec.q, *m, *r, spec, which)?
            } else {
                global_extremum(spec.q, *m, spec, which)?
            };
            with_out(out, stdout, |w| write_extremum(&result, *format, w))
        }
        Command::Average {
            channel,
            n,
            enumerate,
            out,
        } => {
            let spec = channel.spec()?;
            let avg = average_input_entropy(*n, spec.q, spec)?;
            let bounds = average_lower_bound(*n, spec.q, spec)?;
            let direct = if *enumerate {
                Some(average_input_entropy_enumerated(*n, spec.q, spec)?)
            } else {
                None
            };
            with_out(out, stdout, |w| {
                writeln!(w, "average_bits {}", format_bits(avg))?;
                if let Some(d) = direct {
                    writeln!(w, "enumerated_bits {}", format_bits(d))?;
                }
                writeln!(w, "derived_bound_bits {}", format_bits(bounds.derived_bits))?;
                writeln!(
                    w,
                    "closed_form_bound_bits {}",
                    format_bits(bounds.closed_form_bits)
                )?;
                Ok(match direct {
                    Some(d) if (d - avg).abs() > TOLERANCE_BITS => EXIT_VERIFICATION,
                    _ => EXIT_OK,
                })
            })
        }
        Command::Verify {
            suite,
            q,
            max_len,
            samples,
            seed,
            out,
        } => {
            let config = SuiteConfig {
                q: *q,
                max_len: *max_len,
                samples: *samples,
                seed: *seed,
            };
            let reports: Vec<SuiteReport> = if suite == "all" {
                run_all(&config)?
            } else {
                vec![run_suite(suite, &config).map_err(|e| flag_error("suite", e))?]
            };
            with_out(out, stdout, |w| {
                for r in &reports {
                    writeln!(w, "{r}")?;
                }
                Ok(if reports.iter().all(SuiteReport::passed) {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION
                })
            })
        }
        Command::Capacity {
            channel,
            k,
            q,
            n,
            tolerance,
            max_iterations,
            bound_steps,
            out,
        } => {
            let options = BlahutArimotoOptions {
                tolerance: *tolerance,
                max_iterations: *max_iterations,
            };
            capacity_command(*channel, *k, *q, *n, options, *bound_steps, out, stdout)
        }
        Command::Figure {
            channel,
            n,
            bound,
            out,
        } => {
            let spec = channel.spec()?;
            let bound = match bound {
                BoundArg::Derived => BoundKind::Derived,
                BoundArg::ClosedForm => BoundKind::ClosedForm,
            };
            let rows = figure_rows(spec, n.clone(), bound)?;
            with_out(out, stdout, |w| {
                let mut c = csv_writer(w);
                c.write_record(FigureRow::CSV_HEADER)?;
                for r in &rows {
                    c.write_record(r.csv_record())?;
                }
                c.flush()?;
                Ok(EXIT_OK)
            })
        }
    }
}

fn entropy_command(
    channel: &ChannelArgs,
    word: &str,
    direction: DirectionArg,
    method: MethodArg,
    format: Format,
    out: &str,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let spec = channel.spec()?;
    let w = parse_word("word", word, spec.q)?;
    let direction = match direction {
        DirectionArg::Input => Direction::Input,
        DirectionArg::Output => Direction::Output,
    };
    let methods: &[Method] = match method {
        MethodArg::Closed => &[Method::ClosedForm],
        MethodArg::Enum => &[Method::Enumeration],
        MethodArg::Both => &[Method::ClosedForm, Method::Enumeration],
    };
    let reports = methods
        .iter()
        .map(|&m| entropy(&w, spec, direction, m))
        .collect::<Result<Vec<EntropyReport>, Error>>()?;
    let disagreement =
        (reports.len() == 2).then(|| (reports[0].entropy_bits - reports[1].entropy_bits).abs());
    with_out(out, stdout, |o| {
        match format {
            Format::Text => match disagreement {
                Some(d) => {
                    writeln!(o, "closed_form {}", format_bits(reports[0].entropy_bits))?;
                    writeln!(o, "enumeration {}", format_bits(reports[1].entropy_bits))?;
                    writeln!(o, "difference {}", format_bits(d))?;
                }
                None => writeln!(o, "{}", format_bits(reports[0].entropy_bits))?,
            },
            Format::Csv => {
                let mut c = csv_writer(o);
                c.write_record(EntropyReport::CSV_HEADER)?;
                for r in &reports {
                    c.write_record(r.csv_record())?;
                }
                c.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *o, &reports)?;
                writeln!(o)?;
            }
        }
        Ok(match disagreement {
            Some(d) if d > TOLERANCE_BITS => EXIT_VERIFICATION,
            _ => EXIT_OK,
        })
    })
}

fn write_extremum(
    result: &ExtremumResult,
    format: Format,
    w: &mut dyn Write,
) -> Result<i32, Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, result)?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv_writer(w);
            c.write_record(["value_bits", "witness"])?;
            for x in &result.witnesses {
                c.write_record([format_bits(result.value_bits), x.to_string()])?;
            }
            c.flush()?;
        }
        Format::Text => {
            writeln!(w, "value_bits {}", format_bits(result.value_bits))?;
            if let Some(v) = result.n_indexed_form_bits {
                writeln!(w, "n_indexed_form_bits {}", format_bits(v))?;
            }
            if let Some(v) = result.m_indexed_form_bits {
                writeln!(w, "m_indexed_form_bits {}", format_bits(v))?;
            }
            writeln!(w, "witness_count {}", result.witnesses.len())?;
            for x in &result.witnesses {
                writeln!(w, "witness {x}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn capacity_command(
    channel: KindArg,
    k: Option<usize>,
    q: u8,
    n: usize,
    options: BlahutArimotoOptions,
    bound_steps: Option<usize>,
    out: &str,
    stdout: &mut dyn Write,
) -> Result<i32, Failure> {
    let kind: ChannelKind = channel.into();
    if let Some(steps) = bound_steps {
        if kind != ChannelKind::Deletion {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "--bound-steps: the mixture bound is defined for deletion only".into(),
            });
        }
        if steps == 0 {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "--bound-steps: must be at least 1".into(),
            });
        }
        let caps: Vec<Option<f64>> = deletion_capacities(n, q, options)?
            .into_iter()
            .map(|c| c.map(|c| c.capacity_bits))
            .collect();
        return with_out(out, stdout, |w| {
            let mut c = csv_writer(w);
            c.write_record(BOUND_CSV_HEADER)?;
            for i in 0..=steps {
                let p = i as f64 / steps as f64;
                let b = mixture_upper_bound(n, p, &caps, q)?;
                c.write_record([
                    format_bits(p),
                    format_bits(b.bound_bits),
                    format_bits(b.bound_bits_per_symbol),
                ])?;
            }
            c.flush()?;
            Ok(EXIT_OK)
        });
    }
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None if kind == ChannelKind::Deletion => (0..=n).collect(),
        None => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "--k: required for the insertion channel".into(),
            })
        }
    };
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let spec = ChannelSpec::new(kind, k, q)?;
        let result = blahut_arimoto(&TransitionMatrix::new(spec, n)?, options)?;
        rows.push((k, result));
    }
    with_out(out, stdout, |w| {
        let mut c = csv_writer(w);
        c.write_record(CAPACITY_CSV_HEADER)?;
        for (k, r) in &rows {
            c.write_record([k.to_string(), format_bits(r.capacity_bits)])?;
        }
        c.flush()?;
        Ok(if rows.iter().all(|(_, r)| r.converged) {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("indel-entropy").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn embed_prints_count() {
        assert_eq!(
            call(&["embed", "--y", "120", "--x", "11220", "--q", "3"]).1,
            "4\n"
        );
    }

    #[test]
    fn entropy_both_methods() {
        let (code, out, _) = call(&[
            "entropy",
            "--channel",
            "del",
            "--k",
            "1",
            "--q",
            "2",
            "--word",
            "0000",
            "--method",
            "both",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("closed_form 2.16096404744368"), "{out}");
        assert!(out.contains("difference 0.000000000000000"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["entropy", "--bogus"]).0, EXIT_USAGE);
        let (code, _, err) = call(&["embed", "--y", "12", "--x", "0"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--y"), "{err}");
        assert_eq!(
            call(&["--jobs", "0", "embed", "--y", "0", "--x", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn budget_exit_code() {
        let (code, _, err) = call(&[
            "extremes",
            "--channel",
            "del",
            "--m",
            "6",
            "--which",
            "min",
            "--exhaustive",
            "--budget",
            "10",
        ]);
        assert_eq!(code, EXIT_BUDGET);
        assert!(err.contains("--budget"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4:40").unwrap(), 4..=40);
        assert_eq!(parse_range("7").unwrap(), 7..=7);
        assert!(parse_range("9:3").is_err());
        assert!(parse_range("a:3").is_err());
    }
}
