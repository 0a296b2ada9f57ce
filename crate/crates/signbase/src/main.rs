use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use signbase::cli::{
    cmd_analyze, cmd_family, cmd_verify, AnalyzeOptions, CliError, FamilyOptions, VerifyOptions,
};
use signbase::digraph::ArcSign;

/// Signed-digraph analysis: primitive exponents, local bases of nonpowerful
/// sign patterns, extremal family generators, and verification suites.
#[derive(Parser)]
#[command(name = "signbase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a signed digraph given as an edge-list file
    Analyze {
        file: PathBuf,
        /// Skip the base computation (also tolerates powerful inputs)
        #[arg(long)]
        exp_only: bool,
        /// Emit the canonical JSON report
        #[arg(long)]
        json: bool,
    },
    /// Generate a named family member, print its edge list and report
    Family {
        /// d1, d2, dki, script-l, f, f1..f7, f-prime, b1..b4
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        /// same-sign, mixed, t, s0..s7, si, q1..q4
        #[arg(long)]
        preset: Option<String>,
        /// Leave every arc positive (the default)
        #[arg(long)]
        all_positive: bool,
        /// Negate an arc of the all-positive member: "U,V" (repeatable)
        #[arg(long = "negate", value_name = "U,V")]
        negate: Vec<String>,
        /// Demand all cycles of a length share a sign: "LEN=+" or "LEN=-"
        #[arg(long = "require", value_name = "LEN=SIGN")]
        require: Vec<String>,
        /// Print only the edge list
        #[arg(long)]
        no_analyze: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites
    Verify {
        /// exponents, bases, tiny, gaps, characterizations, all
        #[arg(long)]
        suite: String,
        /// Order or inclusive range, e.g. 14 or 6..12
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_arc_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid arc '{s}' (use U,V)"));
    let (u, v) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        u.trim().parse().map_err(|_| bad())?,
        v.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_requirement(s: &str) -> Result<(usize, ArcSign), CliError> {
    let bad = || CliError::Usage(format!("invalid requirement '{s}' (use LEN=+ or LEN=-)"));
    let (len, sign) = s.split_once('=').ok_or_else(bad)?;
    let len: usize = len.trim().parse().map_err(|_| bad())?;
    let sign = match sign.trim() {
        "+" => ArcSign::Plus,
        "-" => ArcSign::Minus,
        _ => return Err(bad()),
    };
    Ok((len, sign))
}

fn run(command: Command) -> Result<signbase::cli::CmdOutput, CliError> {
    match command {
        Command::Analyze {
            file,
            exp_only,
            json,
        } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
            cmd_analyze(&file.display().to_string(), &text, AnalyzeOptions { exp_only, json })
        }
        Command::Family {
            name,
            n,
            k,
            i,
            preset,
            all_positive,
            negate,
            require,
            no_analyze,
            json,
        } => {
            let negate = negate
                .iter()
                .map(|s| parse_arc_pair(s))
                .collect::<Result<Vec<_>, _>>()?;
            let require = require
                .iter()
                .map(|s| parse_requirement(s))
                .collect::<Result<Vec<_>, _>>()?;
            cmd_family(&FamilyOptions {
                name,
                n,
                k,
                i,
                preset,
                all_positive,
                negate,
                require,
                no_analyze,
                json,
            })
        }
        Command::Verify {
            suite,
            n,
            samples,
            seed,
            json,
        } => cmd_verify(&VerifyOptions {
            suite,
            n,
            samples,
            seed,
            json,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
