//! The `mzv` command-line tool. [`run`] is the whole program; `main` only
//! wires it to the process streams and exit status.
//!
//! Exit status: 0 on success, 1 when a check fails (or cannot be
//! decided), 2 on usage errors.

mod commands;
pub mod config;
mod modular;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Config, Format, Overrides, CONFIG_ENV};

#[derive(Debug, Parser)]
#[command(name = "mzv", version, about = "Multiple zeta values, the motivic coaction and multiple modular values")]
pub struct Cli {
    /// Working precision in decimal digits (at least 15).
    #[arg(long, global = true, value_name = "N")]
    digits: Option<u32>,
    /// Truncation degree for series (at most 12).
    #[arg(long, global = true, value_name = "N")]
    truncation: Option<usize>,
    /// Relation database file (JSON lines).
    #[arg(long, global = true, value_name = "PATH")]
    db: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Config file (TOML); defaults to $MZV_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shuffle product of two words in the letters 0 and 1.
    Shuffle { u: String, v: String },
    /// Shuffle-regularize a word into admissible zeta values.
    Regularize { word: String },
    /// Lyndon words in a weighted alphabet, letters ordered as given.
    Lyndon {
        #[arg(long, default_value = "3,2", value_delimiter = ',')]
        weights: Vec<u32>,
        #[arg(long, default_value_t = 12)]
        max_weight: u32,
    },
    /// Dimensions d_N from 1/(1-t^2-t^3).
    Dims {
        #[arg(long, default_value_t = 12)]
        max: u32,
    },
    /// Depth-graded dimension predictions, coefficient of s^d t^N.
    BkSeries {
        #[arg(long, default_value_t = 20)]
        max: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Infinitesimal coaction of a combination such as "z(2,3) - 3*z(2)*z(3)".
    Coaction {
        expr: String,
        /// Only the part with a weight-r cofactor.
        #[arg(long)]
        r: Option<u32>,
    },
    /// Decide whether a combination is a rational multiple of zeta(N).
    CheckRelation {
        expr: Option<String>,
        /// JSON file holding the combination (text or term list).
        #[arg(long, conflicts_with = "expr")]
        file: Option<PathBuf>,
    },
    /// Coefficients of the Drinfeld associator.
    Associator {
        /// Motivic coefficients instead of numbers.
        #[arg(long)]
        symbolic: bool,
    },
    /// Ihara composition a∘g = g(x0, a x1 a^-1) a of two series.
    IharaCompose { a: String, g: String },
    /// Depth-2 check of {σ3,σ9} - 3{σ5,σ7}.
    IharaTakao,
    /// Numerical value of a multiple zeta value, e.g. "2,3" for ζ(2,3).
    EvalMzv { composition: String },
    /// Zagier's formula for ζ(2,..,2,3,2,..,2).
    ZagierCheck {
        /// Largest a+b to check.
        #[arg(long, default_value_t = 4)]
        max_sum: u32,
    },
    /// Ramanujan's series for ζ(3).
    RamanujanCheck,
    /// Modular forms, iterated Eichler integrals and cocycles.
    Modular {
        #[command(subcommand)]
        command: modular::ModularCommand,
    },
}

/// Outcome of a command that ran to completion.
pub(crate) enum Status {
    Ok,
    CheckFailed,
}

#[derive(Debug, thiserror::Error)]
pub(crate) enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    /// The reader went away, as with `mzv dims | head`.
    #[error("broken pipe")]
    BrokenPipe,
}

impl From<mzv_core::Error> for CliError {
    fn from(e: mzv_core::Error) -> Self {
        match e {
            mzv_core::Error::Io(m) => CliError::Runtime(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::BrokenPipe;
        }
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Text or JSON-lines writer bound to the configured format.
pub(crate) struct Output<'a> {
    w: &'a mut dyn Write,
    pub format: Format,
}

impl Output<'_> {
    pub fn line(&mut self, s: impl AsRef<str>) -> Result<(), CliError> {
        writeln!(self.w, "{}", s.as_ref())?;
        Ok(())
    }

    pub fn json(&mut self, v: &serde_json::Value) -> Result<(), CliError> {
        writeln!(self.w, "{}", serde_json::to_string(v)?)?;
        Ok(())
    }

    pub fn is_json(&self) -> bool {
        self.format == Format::Json
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    let overrides =
        Overrides { precision: cli.digits, truncation: cli.truncation, db: cli.db.clone(), format: cli.format };
    let cfg = match Config::load(cli.config.as_deref(), &overrides) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let mut output = Output { w: out, format: cfg.format };
    match dispatch(&cli.command, &cfg, &mut output) {
        Ok(Status::Ok) => 0,
        Ok(Status::CheckFailed) => 1,
        Err(CliError::BrokenPipe) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(CliError::Runtime(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: &Command, cfg: &Config, out: &mut Output) -> Result<Status, CliError> {
    use commands as c;
    match cmd {
        Command::Shuffle { u, v } => c::shuffle(u, v, out),
        Command::Regularize { word } => c::regularize(word, out),
        Command::Lyndon { weights, max_weight } => c::lyndon(weights, *max_weight, out),
        Command::Dims { max } => c::dims(*max, out),
        Command::BkSeries { max, depth } => c::bk_series(*max, *depth, out),
        Command::Coaction { expr, r } => c::coaction(expr, *r, out),
        Command::CheckRelation { expr, file } => c::check_relation(expr.as_deref(), file.as_deref(), cfg, out),
        Command::Associator { symbolic } => c::associator(*symbolic, cfg, out),
        Command::IharaCompose { a, g } => c::ihara_compose(a, g, cfg, out),
        Command::IharaTakao => c::ihara_takao(out),
        Command::EvalMzv { composition } => c::eval_mzv(composition, cfg, out),
        Command::ZagierCheck { max_sum } => c::zagier_check(*max_sum, cfg, out),
        Command::RamanujanCheck => c::ramanujan_check(cfg, out),
        Command::Modular { command } => modular::dispatch(command, cfg, out),
    }
}
