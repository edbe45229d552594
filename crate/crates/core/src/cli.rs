//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or parse error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{BurniatConfig, Variant};
use crate::degeneration::{self, CollectionVariant};
use crate::effective::{Engine, FiberKind, Verdict};
use crate::error::{Error, Result};
use crate::picard::{self, XClass};
use crate::verify::{self, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "burniat", version, about = "Picard groups and effective divisors on Burniat surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fiber {
    Smooth,
    Degenerate,
}

impl From<Fiber> for FiberKind {
    fn from(f: Fiber) -> Self {
        match f {
            Fiber::Smooth => FiberKind::Smooth,
            Fiber::Degenerate => FiberKind::Degenerate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Collection {
    Original,
    Corrected,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the acceptance criteria, one line each.
    VerifyAll {
        /// Comma-separated criterion numbers or section names.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Generator-table override file for K^2 = 6.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Echelon basis of the torsion subgroup, one vector per line.
    Torsion {
        #[arg(long, required_unless_present = "config")]
        ksq: Option<i64>,
        #[arg(long, default_value = "plain")]
        variant: String,
        /// Configuration file in `key = value` form.
        #[arg(long, conflicts_with = "ksq")]
        config: Option<PathBuf>,
    },
    /// Decide a class on the K^2 = 6 surface.
    Effective {
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value = "smooth")]
        fiber: Fiber,
    },
    /// Classify every candidate class up to a degree.
    Scan {
        #[arg(long)]
        max_degree: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
        #[arg(long, value_enum, default_value = "smooth")]
        fiber: Fiber,
    },
    /// Check the six line bundles on one fibre type.
    ExcCheck {
        #[arg(long, value_enum)]
        fiber: Fiber,
        #[arg(long, value_enum, default_value = "original")]
        collection: Collection,
    },
    /// Print a standard configuration in the file format `torsion --config` reads.
    Config {
        #[arg(long)]
        ksq: i64,
        #[arg(long, default_value = "plain")]
        variant: String,
    },
}

/// Parse and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "burniat: {e}");
            match e {
                Error::Parse(_)
                | Error::UnknownConfig(_)
                | Error::Precondition(_)
                | Error::NotInLattice(_)
                | Error::NotRepresentable(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Precondition(format!("i/o: {e}"))
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::VerifyAll { only, seed, table } => {
            let mut opts = VerifyOptions::new();
            opts.seed = seed;
            opts.only = only.iter().map(|s| verify::section_id(s.trim())).collect::<Result<_>>()?;
            if let Some(p) = table {
                opts.overrides = picard::parse_overrides(&read(&p)?)?;
            }
            let suite = match Suite::new(&opts) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(out, "FAIL table construction: {e}").map_err(io)?;
                    return Ok(EXIT_FAIL);
                }
            };
            let mut all = true;
            for id in (1..=10u8).filter(|i| opts.only.is_empty() || opts.only.contains(i)) {
                let r = suite.run(id);
                all &= r.passed;
                writeln!(out, "{r}").map_err(io)?;
            }
            Ok(if all { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Torsion { ksq, variant, config } => {
            let cfg = match config {
                Some(p) => BurniatConfig::from_text(&read(&p)?)?,
                None => BurniatConfig::standard(ksq.expect("clap requires ksq"), variant.parse::<Variant>()?)?,
            };
            for v in picard::torsion_subgroup(&cfg) {
                writeln!(out, "{v}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Effective { class, fiber } => {
            let x: XClass = class.parse()?;
            let engine = Engine::new(fiber.into())?;
            let v = engine.classify(&x)?;
            engine.validate_verdict(&x, &v)?;
            writeln!(out, "{x}\t{}\t{}", v.tag(), v.evidence()).map_err(io)?;
            Ok(if matches!(v, Verdict::Unresolved { .. }) { EXIT_FAIL } else { EXIT_OK })
        }
        Command::Scan {
            max_degree,
            out: path,
            format,
            fiber,
        } => {
            let engine = Engine::new(fiber.into())?;
            let report = engine.scan(max_degree)?;
            let text = match format {
                Format::Human => report.to_human(),
                Format::Structured => report.to_structured(),
            };
            match path {
                Some(p) => {
                    fs::write(&p, &text).map_err(|e| Error::Precondition(format!("{}: {e}", p.display())))?;
                    writeln!(out, "{}", report.summary_line()).map_err(io)?;
                }
                None => write!(out, "{text}").map_err(io)?,
            }
            Ok(if report.unresolved().is_empty() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::ExcCheck { fiber, collection } => {
            let engine = Engine::new(fiber.into())?;
            let variant = match collection {
                Collection::Original => CollectionVariant::Original,
                Collection::Corrected => CollectionVariant::Corrected,
            };
            let report = degeneration::exceptional_collection_check_with(&engine, variant)?;
            write!(out, "{report}").map_err(io)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Config { ksq, variant } => {
            let cfg = BurniatConfig::standard(ksq, variant.parse()?)?;
            write!(out, "{}", cfg.to_text()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("burniat").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn torsion_rows() {
        for (k, v, n) in [("6", "plain", 6), ("5", "plain", 5), ("4", "nodal", 4), ("2", "plain", 3)] {
            let (code, text) = call(&["torsion", "--ksq", k, "--variant", v]);
            assert_eq!(code, 0);
            assert_eq!(text.lines().count(), n);
        }
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["exc-check", "--fiber", "wobbly"]).0, EXIT_USAGE);
        assert_eq!(call(&["effective", "--class", "(3; 1 00)"]).0, EXIT_USAGE);
        assert_eq!(call(&["torsion", "--ksq", "7"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify-all", "--only", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&[]).0, EXIT_USAGE);
    }

    #[test]
    fn config_round_trip() {
        let (code, text) = call(&["config", "--ksq", "4", "--variant", "non-nodal"]);
        assert_eq!(code, 0);
        assert_eq!(BurniatConfig::from_text(&text).unwrap(), BurniatConfig::standard(4, Variant::NonNodal).unwrap());
    }
}
