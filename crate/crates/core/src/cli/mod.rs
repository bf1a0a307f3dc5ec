//! The `qembed` command-line front end.
//!
//! Values resolve in the order: command-line flag, config file, the
//! `QEMBED_SEED` environment variable (seed only), built-in default.
//!
//! Exit codes: 0 on success with a passing (or informational) verdict, 1 on
//! a failing verdict or an I/O failure, 2 on usage and configuration errors.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::error::Error;
pub use config::ConfigFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qembed", version, about = "Quantized random embeddings and their Monte Carlo checks")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, env = "QEMBED_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output directory for CSV and gnuplot files.
    #[arg(long, global = true, default_value = "qembed-out")]
    pub out: PathBuf,
    /// Flat key = value config file with [subcommand] sections.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prints the code A(x) of each input vector.
    Embed(EmbedArgs),
    /// Prints D and D^t between the two input vectors.
    Distance(DistanceArgs),
    /// Monte Carlo Gaussian mean width of a set.
    Width(WidthArgs),
    /// Measurement count required by one of the embedding bounds.
    MinM(MinMArgs),
    /// Decay of the worst normalized distortion with M.
    QuasiIsometry(SweepArgs),
    /// Decay of the consistency width with M.
    ConsistencyWidth(SweepArgs),
    /// The no-dither and Bernoulli-floor constructions.
    Counterexamples(CounterexampleArgs),
    /// Expectation, diameter and Chernoff checks.
    Lemmas(LemmaArgs),
    /// Binomial MAD gap and the Stirling sandwich.
    Combinatorics(CombinatoricsArgs),
    /// Runs the acceptance catalogue.
    Selftest(SelftestArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Embed(_) => "embed",
            Command::Distance(_) => "distance",
            Command::Width(_) => "width",
            Command::MinM(_) => "min-m",
            Command::QuasiIsometry(_) => "quasi-isometry",
            Command::ConsistencyWidth(_) => "consistency-width",
            Command::Counterexamples(_) => "counterexamples",
            Command::Lemmas(_) => "lemmas",
            Command::Combinatorics(_) => "combinatorics",
            Command::Selftest(_) => "selftest",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// gaussian, rademacher or uniform.
    #[arg(long, default_value = "gaussian")]
    pub ensemble: String,
    /// exact-zero, generic-bound or estimated (defaults by ensemble).
    #[arg(long)]
    pub kappa_source: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// floor or round.
    #[arg(long, default_value = "floor")]
    pub variant: String,
    /// Uses ξ = 0.
    #[arg(long)]
    pub no_dither: bool,
    #[arg(long, default_value_t = 256)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    /// Set the inputs must belong to, e.g. sparse:N=64,K=4,d=1.
    #[arg(long)]
    pub set: Option<String>,
    #[command(flatten)]
    pub map: MapArgs,
    /// Vectors file (one per line); stdin when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Softening parameter of D^t.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    /// File holding x and y on two lines; stdin when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WidthArgs {
    #[arg(long, default_value = "sparse:N=64,K=4,d=1")]
    pub set: String,
    #[arg(long, default_value_t = 10_000)]
    pub draws: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MinMArgs {
    #[arg(long, default_value = "sparse:N=64,K=4,d=1")]
    pub set: String,
    /// embed-general, embed-structured, width-general or width-structured.
    #[arg(long, default_value = "embed-structured")]
    pub kind: String,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Unknown absolute constant in front of the bound.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "sparse:N=512,K=4,d=1")]
    pub set: String,
    #[arg(long, default_value = "gaussian")]
    pub ensemble: String,
    #[arg(long)]
    pub kappa_source: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Comma-separated, strictly increasing.
    #[arg(long, default_value = "128,256,512,1024,2048,4096,8192")]
    pub m_grid: String,
    /// Pairs (or rays) per map.
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    /// Maps per M.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Anti-sparsity level required of difference vectors.
    #[arg(long, default_value_t = 1.0)]
    pub k0: f64,
    #[arg(long)]
    pub no_k0_filter: bool,
    /// Pass band for the fitted slope; without both ends the verdict is informational.
    #[arg(long, allow_hyphen_values = true)]
    pub slope_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub slope_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CounterexampleArgs {
    /// no-dither, bernoulli-floor or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    #[arg(long, default_value_t = 64)]
    pub k0: usize,
    #[arg(long, default_value_t = 0.4)]
    pub s: f64,
    #[arg(long, default_value_t = 512)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaArgs {
    /// expectation, diameter, chernoff or all.
    #[arg(long, default_value = "all")]
    pub which: String,
    #[arg(long, default_value = "gaussian")]
    pub ensemble: String,
    #[arg(long)]
    pub kappa_source: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = 64)]
    pub m: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    /// File holding u and v on two lines; a random pair of norm-0.5 difference when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Softening levels for the expectation check.
    #[arg(long, default_value = "0.05,0.1,0.2,0.4")]
    pub t_grid: String,
    /// Set for the diameter check.
    #[arg(long, default_value = "sparse:N=64,K=4,d=1")]
    pub set: String,
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Factor on √M·η in the diameter check.
    #[arg(long, default_value_t = crate::experiments::DIAMETER_FACTOR)]
    pub factor: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k0: f64,
    /// Softening level for the Chernoff check.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Count threshold r (default ⌈M p̂ / 2⌉).
    #[arg(long)]
    pub r: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CombinatoricsArgs {
    #[arg(long, default_value_t = 10_000)]
    pub stirling_max: usize,
    /// Largest even k0 in the MAD gap check.
    #[arg(long, default_value_t = 40)]
    pub mad_max: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// quick or full.
    #[arg(long, default_value = "full")]
    pub scale: String,
    /// Comma-separated criterion ids (default: all).
    #[arg(long)]
    pub only: Option<String>,
}

/// Runs the CLI on `args` (including the program name), writing to the
/// process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse_with_config(argv) {
        Ok(cli) => cli,
        Err(Parsed(code, text)) => {
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let Some(command) = cli.command.as_ref() else {
        let _ = writeln!(err, "error: no subcommand given (see --help)");
        return EXIT_USAGE;
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {} workers: {e}", cli.jobs);
            return EXIT_USAGE;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| commands::dispatch(&cli, command, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Csv(_) | Error::InsufficientData { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Exit code and the text to print when parsing stops early.
struct Parsed(i32, String);

fn clap_exit(e: clap::Error) -> Parsed {
    let code = match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            EXIT_OK
        }
        _ => EXIT_USAGE,
    };
    Parsed(code, e.render().to_string())
}

fn config_exit(msg: String) -> Parsed {
    Parsed(EXIT_USAGE, format!("error: {msg}\n"))
}

const TOP_KEYS: [&str; 4] = ["seed", "jobs", "out", "command"];

/// Parses `argv`, then appends flags from the config file for every option
/// the command line left unset, and parses again.
fn parse_with_config(argv: Vec<OsString>) -> Result<Cli, Parsed> {
    let first = Cli::command().try_get_matches_from(argv.clone()).map_err(clap_exit)?;
    let Some(path) = first.get_one::<PathBuf>("config") else {
        return Cli::from_arg_matches(&first).map_err(clap_exit);
    };
    let cfg = ConfigFile::load(path).map_err(|e| config_exit(e.to_string()))?;
    let root = Cli::command();
    for (section, entries) in &cfg.sections {
        if section.is_empty() {
            if let Some((k, _, line)) = entries.iter().find(|(k, _, _)| !TOP_KEYS.contains(&k.as_str())) {
                return Err(config_exit(format!("unknown key '{k}' (line {line}) in the top section")));
            }
        } else if root.find_subcommand(section).is_none() {
            return Err(config_exit(format!("unknown section [{section}]")));
        }
    }

    let mut extra: Vec<OsString> = Vec::new();
    let sub_name = match first.subcommand_name() {
        Some(name) => name.to_string(),
        None => match cfg.get("", "command") {
            Some(name) if root.find_subcommand(name).is_some() => {
                extra.push(name.into());
                name.to_string()
            }
            Some(name) => return Err(config_exit(format!("unknown command '{name}' in config"))),
            None => return Cli::from_arg_matches(&first).map_err(clap_exit),
        },
    };
    for key in ["seed", "jobs", "out"] {
        if let Some(v) = cfg.get("", key) {
            if first.value_source(key) != Some(ValueSource::CommandLine) {
                extra.push(format!("--{key}").into());
                extra.push(v.into());
            }
        }
    }

    let sub_matches = first.subcommand_matches(&sub_name);
    for (section, entries) in cfg.sections.iter().filter(|(s, _)| !s.is_empty()) {
        let cmd = root.find_subcommand(section).expect("checked above");
        for (key, value, line) in entries {
            let Some(arg) = cmd.get_arguments().find(|a| a.get_long() == Some(key.as_str()) && !a.is_global_set())
            else {
                return Err(config_exit(format!("unknown key '{key}' (line {line}) in section [{section}]")));
            };
            if *section != sub_name {
                continue;
            }
            let from_cli = sub_matches.and_then(|m| m.value_source(arg.get_id().as_str())) == Some(ValueSource::CommandLine);
            if from_cli {
                continue;
            }
            if arg.get_action().takes_values() {
                extra.push(format!("--{key}={value}").into());
            } else {
                match value.as_str() {
                    "true" => extra.push(format!("--{key}").into()),
                    "false" => {}
                    _ => {
                        return Err(config_exit(format!(
                            "key '{key}' (line {line}) is a switch and takes true or false, got '{value}'"
                        )))
                    }
                }
            }
        }
    }
    let mut full = argv;
    full.extend(extra);
    let second = Cli::command().try_get_matches_from(full).map_err(clap_exit)?;
    Cli::from_arg_matches(&second).map_err(clap_exit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("qembed").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn help_and_usage_codes() {
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["width", "--bogus", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--bogus"), "{err}");
    }

    #[test]
    fn config_fills_unset_flags_and_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "command = min-m\n[min-m]\nset = ball:N=3,d=1\nkind = width-structured\neps = 0.5\n").unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, a, err) = run_capture(&["--config", cfg]);
        assert_eq!(code, EXIT_OK, "{err}");
        let (_, b, _) = run_capture(&["min-m", "--config", cfg, "--eps", "0.25"]);
        assert_ne!(a, b);
        assert!(a.starts_with("m = "), "{a}");
    }

    #[test]
    fn unknown_config_key_names_it() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.cfg");
        std::fs::write(&cfg, "[width]\ndraws = 10\nwobble = 3\n").unwrap();
        let (code, _, err) = run_capture(&["width", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("wobble"), "{err}");
        std::fs::write(&cfg, "[nope]\n").unwrap();
        assert_eq!(run_capture(&["width", "--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
        std::fs::write(&cfg, "color = red\n").unwrap();
        let (code, _, err) = run_capture(&["width", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("color"), "{err}");
    }
}
