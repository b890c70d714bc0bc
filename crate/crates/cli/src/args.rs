use clap::{Args, Parser, Subcommand, ValueEnum};

pub const TOL_MIN: f64 = 1e-12;
pub const TOL_MAX: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "qrel", version, about = "Checks, evaluates and verifies .qrel workspaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and sort-check the files.
    Check {
        #[arg(value_name = "FILES")]
        files: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Interpret a named formula.
    Eval {
        #[arg(value_name = "FILES")]
        files: Vec<String>,
        /// Formula to interpret.
        #[arg(long, value_name = "NAME")]
        formula: String,
        /// Context for free variables, e.g. "x:X,y:Y*".
        #[arg(long, value_name = "SPEC")]
        context: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run assert and verify directives, or one structure check.
    Verify {
        /// Files, optionally preceded by KIND and NAMES.
        #[arg(value_name = "[KIND NAMES..] FILES")]
        args: Vec<String>,
        /// Structure kind, e.g. graph or magic-unitary.
        #[arg(long)]
        kind: Option<String>,
        /// Names the kind acts on.
        #[arg(long, num_args = 1..)]
        names: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in property suites.
    Selftest {
        /// Suites to run; all when omitted.
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Cases per suite instead of each suite's default.
        #[arg(long)]
        cases: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Check { common, .. }
            | Command::Eval { common, .. }
            | Command::Verify { common, .. }
            | Command::Selftest { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Eval { .. } => "eval",
            Command::Verify { .. } => "verify",
            Command::Selftest { .. } => "selftest",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Pass threshold on margins, in [1e-12, 1e-4].
    #[arg(long, env = "QREL_TOL", default_value_t = 1e-8, value_parser = parse_tol)]
    pub tol: f64,
    /// Seed for randomized procedures.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    pub output: Output,
    /// Leave timings out of the report.
    #[arg(long)]
    pub no_timings: bool,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(TOL_MIN..=TOL_MAX).contains(&t) {
        return Err(format!("tolerance must lie in [{TOL_MIN:e}, {TOL_MAX:e}], got {t:e}"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_range() {
        assert_eq!(parse_tol("1e-8"), Ok(1e-8));
        assert!(parse_tol("1e-3").is_err());
        assert!(parse_tol("1e-13").is_err());
        assert!(parse_tol("NaN").is_err());
        assert!(parse_tol("x").is_err());
    }

    #[test]
    fn verify_accepts_positional_kind() {
        let c = Cli::try_parse_from(["qrel", "verify", "magic-unitary", "P", "m.qrel", "--output", "json"]).unwrap();
        match c.command {
            Command::Verify { args, common, .. } => {
                assert_eq!(args, ["magic-unitary", "P", "m.qrel"]);
                assert_eq!(common.output, Output::Json);
            }
            _ => panic!("expected verify"),
        }
    }

    #[test]
    fn flag_wins_over_default() {
        let c = Cli::try_parse_from(["qrel", "check", "--tol", "1e-6", "a.qrel"]).unwrap();
        assert_eq!(c.command.common().tol, 1e-6);
    }
}
