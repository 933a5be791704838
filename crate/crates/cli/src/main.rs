mod cache;
mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spherecurve::enumerate::MAX_CROSSINGS;
use spherecurve::Convention;

/// Spherical curves as Gauss words: analysis, reductivity, censuses and discharging scans.
#[derive(Parser, Debug)]
#[command(name = "spherecurve", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Identify mirror images (default).
    #[arg(long, global = true, overrides_with = "no_mirror")]
    pub mirror: bool,
    /// Keep mirror images distinct.
    #[arg(long, global = true, overrides_with = "mirror")]
    pub no_mirror: bool,
    /// Keep a curve and its reversal distinct.
    #[arg(long, global = true)]
    pub oriented: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory for cached censuses.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Largest crossing number for surveys, scans, censuses and audits.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
}

impl Global {
    pub fn convention(&self) -> Convention {
        Convention { identify_mirror: !self.no_mirror, identify_reversal: !self.oriented }
    }

    /// The crossing bound: positional value, else `--max-n`, else `default`.
    pub fn bound(&self, positional: Option<usize>, default: usize) -> anyhow::Result<usize> {
        let n = positional.or(self.max_n).unwrap_or(default);
        if !(1..=MAX_CROSSINGS).contains(&n) {
            return Err(InputError(format!("crossing number {n} outside 1..={MAX_CROSSINGS}")).into());
        }
        Ok(n)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Tsv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Faces, bigons, trigons and reductivity of each input word.
    Analyze {
        /// Words (`"1 2 3 1 2 3"`), signed words (`"1 2 3 1 2 3 [+,-,+]"`) or files of words.
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Reductivity with a witness chain of inverse splices.
    Reductivity {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Reductivity histogram for every crossing number up to N.
    Survey {
        /// Largest crossing number, 1..=10 (default 6).
        n: Option<usize>,
    },
    /// List every curve with N crossings (or 1..=--max-n when N is omitted).
    Enumerate {
        n: Option<usize>,
    },
    /// Look for reduced curves avoiding a set of tangles, e.g. "bigon|trigon".
    Scan {
        /// Predicates joined by `|`, e.g. "bigon|trigon(adj<=4)".
        set: String,
        /// Largest crossing number, 1..=10 (default 6).
        n: Option<usize>,
    },
    /// Charge conservation under discharging rules, over a census or given words.
    DischargeAudit {
        /// Words or files; when empty, audit the census up to --max-n (default 6).
        inputs: Vec<String>,
        /// Rule file; defaults to the built-in rule D1.
        #[arg(long)]
        rules: Option<PathBuf>,
    },
    /// SVG chord diagram of a word.
    Render {
        input: String,
        /// Highlight the trigon on this face, numbered as in `analyze`.
        #[arg(long)]
        trigon: Option<usize>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Bad input: exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

const EXIT_INPUT: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<spherecurve::Error>() {
            return if e.is_invariant_violation() { EXIT_INVARIANT } else { EXIT_INPUT };
        }
        if cause.downcast_ref::<commands::InvariantFailure>().is_some() {
            return EXIT_INVARIANT;
        }
    }
    EXIT_INPUT
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
