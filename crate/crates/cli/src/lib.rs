//! Command-line driver: `check` files, run a `repl`, or `test` the kernel
//! against the property suites.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use iitt_core::program::{exit_code, Options, Outcome, Report, Session};
use iitt_core::surface::print;
use iitt_core::untyped::PrintStyle;
use iitt_core::{Diagnostic, Span, DEFAULT_FUEL};

#[derive(Debug, Parser)]
#[command(
    name = "iitt",
    version,
    about = "Type checker for irrelevant intensional type theory"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check source files.
    Check {
        paths: Vec<PathBuf>,
        #[command(flatten)]
        kernel: KernelFlags,
        /// Print results as JSON on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Read items interactively. Items end with `;`.
    Repl {
        #[command(flatten)]
        kernel: KernelFlags,
    },
    /// Run the property suites.
    Test {
        /// Suites to run (all when omitted).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Largest term size, overriding each suite's default.
        #[arg(long)]
        size: Option<usize>,
        /// Reduction steps per kernel call.
        #[arg(long, env = "IITT_FUEL", default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct KernelFlags {
    /// Reduction steps per item.
    #[arg(long, env = "IITT_FUEL", default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
    /// Accept `irr` in irrelevant positions.
    #[arg(long)]
    pub allow_irr: bool,
    /// How `#erase` prints untyped terms.
    #[arg(long, value_enum, default_value_t = EraseStyle::Named)]
    pub erase_style: EraseStyle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EraseStyle {
    Named,
    Debruijn,
}

impl KernelFlags {
    pub fn options(&self) -> Options {
        Options {
            fuel: self.fuel,
            allow_dummy: self.allow_irr,
            erase_style: match self.erase_style {
                EraseStyle::Named => PrintStyle::Named,
                EraseStyle::Debruijn => PrintStyle::DeBruijn,
            },
        }
    }
}

/// Runs one command and returns the process exit code.
pub fn run(
    config: CliConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let result = match config.command {
        Command::Check {
            paths,
            kernel,
            json,
        } => cmd_check(&paths, kernel.options(), json, out, err),
        Command::Repl { kernel } => cmd_repl(kernel.options(), input, out, err),
        Command::Test { suites, size, fuel } => cmd_test(&suites, size, fuel, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        3
    })
}

#[derive(Serialize)]
struct JsonSpan {
    line: u32,
    column: u32,
}

impl From<Span> for JsonSpan {
    fn from(s: Span) -> Self {
        JsonSpan {
            line: s.line,
            column: s.column,
        }
    }
}

#[derive(Serialize)]
struct JsonDiagnostic {
    code: &'static str,
    message: String,
    span: JsonSpan,
}

impl From<&Diagnostic> for JsonDiagnostic {
    fn from(d: &Diagnostic) -> Self {
        JsonDiagnostic {
            code: d.code.as_str(),
            message: d.message.clone(),
            span: d.span.into(),
        }
    }
}

#[derive(Serialize)]
struct JsonItem {
    file: String,
    span: JsonSpan,
    kind: &'static str,
    status: &'static str,
    diagnostic: Option<JsonDiagnostic>,
    output: Option<String>,
}

#[derive(Serialize)]
struct JsonReport {
    items: Vec<JsonItem>,
}

fn json_items(file: &str, report: &Report) -> Vec<JsonItem> {
    let parse = report.parse_error.iter().map(|d| JsonItem {
        file: file.to_string(),
        span: d.span.into(),
        kind: "parse",
        status: "error",
        diagnostic: Some(d.into()),
        output: None,
    });
    let items = report.outcomes.iter().map(|o| JsonItem {
        file: file.to_string(),
        span: o.span.into(),
        kind: o.kind,
        status: if o.is_ok() { "ok" } else { "error" },
        diagnostic: o.diagnostic.as_ref().map(Into::into),
        output: o.output.clone(),
    });
    parse.chain(items).collect()
}

/// Checks each file in a fresh session.
pub fn cmd_check(
    paths: &[PathBuf],
    options: Options,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    let mut unreadable = false;
    let mut items = Vec::new();
    for path in paths {
        let file = path.display().to_string();
        let source = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                writeln!(err, "{file}: cannot read: {e}")?;
                unreadable = true;
                continue;
            }
        };
        let report = Session::new(options).run_source(&source);
        for d in report.diagnostics() {
            writeln!(err, "{file}:{d}")?;
        }
        if json {
            items.extend(json_items(&file, &report));
        } else {
            for o in &report.outcomes {
                writeln!(out, "{file}:{}: {}", o.span, describe(o))?;
            }
        }
        diagnostics.extend(report.diagnostics().cloned());
    }
    if json {
        let text = serde_json::to_string_pretty(&JsonReport { items }).expect("report serialises");
        writeln!(out, "{text}")?;
    }
    let code = exit_code(&diagnostics);
    Ok(if unreadable { 2 } else { code })
}

fn describe(o: &Outcome) -> String {
    match (&o.diagnostic, &o.output) {
        (Some(d), _) => format!("{}: error[{}]", o.kind, d.code),
        (None, Some(output)) => format!("{}: {output}", o.kind),
        (None, None) => format!("{}: ok", o.kind),
    }
}

/// Interactive loop. Prompts go to `err` so `out` carries only results.
pub fn cmd_repl(
    options: Options,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut session = Session::new(options);
    let mut buffer = String::new();
    loop {
        write!(
            err,
            "{}",
            if buffer.is_empty() {
                "iitt> "
            } else {
                "  ... "
            }
        )?;
        err.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        let trimmed = line.trim();
        if buffer.is_empty() {
            if let Some(meta) = trimmed.strip_prefix(':') {
                let mut words = meta.split_whitespace();
                match (words.next(), words.next()) {
                    (Some("quit" | "q"), None) => break,
                    (Some("ctx"), None) => {
                        for d in session.definitions() {
                            writeln!(out, "{} : {}", d.name, print(&d.ty))?;
                        }
                    }
                    (Some("fuel"), Some(n)) => match n.parse() {
                        Ok(n) => session.set_fuel(n),
                        Err(_) => writeln!(err, "error: `{n}` is not a step count")?,
                    },
                    (Some("fuel"), None) => writeln!(out, "{}", session.options().fuel)?,
                    _ => writeln!(err, "error: unknown command `:{meta}`")?,
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
        }
        buffer.push_str(&line);
        if !strip_comments(&buffer).trim_end().ends_with(';') {
            continue;
        }
        let report = session.run_source(&buffer);
        buffer.clear();
        for d in report.diagnostics() {
            writeln!(err, "{d}")?;
        }
        for o in report.outcomes.iter().filter(|o| o.is_ok()) {
            match &o.output {
                Some(output) => writeln!(out, "{output}")?,
                None => writeln!(out, "ok")?,
            }
        }
        out.flush()?;
    }
    Ok(0)
}

/// Drops `--` line comments.
fn strip_comments(s: &str) -> String {
    s.lines()
        .map(|l| l.split("--").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs the named suites (every suite when `names` is empty).
pub fn cmd_test(
    names: &[String],
    size: Option<usize>,
    fuel: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let names: Vec<String> = if names.is_empty() {
        iitt_testkit::SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    if let Some(bad) = names
        .iter()
        .find(|n| !iitt_testkit::SUITES.contains(&n.as_str()))
    {
        writeln!(
            err,
            "error: unknown suite `{bad}` (known: {})",
            iitt_testkit::SUITES.join(", ")
        )?;
        return Ok(2);
    }
    let mut all = true;
    for name in &names {
        let r = iitt_testkit::run_suite(name, size, fuel).expect("name was validated");
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{verdict} {name} (size {}): {} cases, {} failures, {} out of fuel, {:.1?}",
            r.max_size, r.cases, r.failure_count, r.fuel_exhausted, r.elapsed
        )?;
        for f in &r.failures {
            writeln!(out, "  {}: {}", f.term, f.message)?;
        }
        all &= r.passed();
    }
    Ok(if all { 0 } else { 1 })
}
