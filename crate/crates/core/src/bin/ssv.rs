use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ssv_core::matching::{double_factorial, enumerate_matchings};
use ssv_core::pfaffian::{pfaffian_minus_one, DEFAULT_ORACLE_LIMIT};
use ssv_core::report::{self, CheckReport, OutputFormat, RunConfig};
use ssv_core::{AlgebraError, LevelPolicy, Rank};

/// Exact checks of the Pfaffian Segal-Sugawara vector of the affine algebra of type D.
#[derive(Parser)]
#[command(name = "ssv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the signed perfect matchings of {1..2n}.
    Matchings {
        #[command(flatten)]
        common: Common,
        /// Print only the number of matchings.
        #[arg(long)]
        count: bool,
    },
    /// Print Pf F[-1] applied to the vacuum.
    Pfaffian(Common),
    /// Check that every nonnegative-mode generator kills Pf F[-1].
    VerifyCenter(Common),
    /// Compare F[1,2;1] Pf F[-1] with (-K-2n+2) times the sub-Pfaffian.
    Residual(Common),
    /// Compare the matching sum with the full permutation sum.
    OracleCompare(Common),
    /// Center membership of S+_p and commutation of S_p with the generators.
    Sugawara(Common),
    /// Run the seeded algebraic property suites.
    Selftest(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value = "critical")]
    level: LevelPolicy,
    /// Comma-separated annihilation modes, e.g. 0,1,2.
    #[arg(long, allow_hyphen_values = true)]
    modes: Option<String>,
    /// Comma-separated coefficient indices p.
    #[arg(long = "p", allow_hyphen_values = true, default_value = "-2,-1,0")]
    p_list: String,
    /// Comma-separated generator modes for the commutation grid.
    #[arg(long, allow_hyphen_values = true, default_value = "-1,0,1")]
    gen_modes: String,
    /// Test vector in text form, e.g. "F[1,2;-1]|0>" (repeatable).
    #[arg(long = "vector", allow_hyphen_values = true)]
    vectors: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    oracle_limit: u32,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Newline-delimited JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_list(text: &str) -> Result<Vec<i64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("'{t}' is not an integer")))
        .collect()
}

impl Common {
    fn config(&self) -> Result<RunConfig, String> {
        Rank::new(self.n).map_err(|e| e.to_string())?;
        Ok(RunConfig {
            n: self.n,
            level: self.level,
            modes: self.modes.as_deref().map(parse_list).transpose()?,
            p_list: parse_list(&self.p_list)?,
            generator_modes: parse_list(&self.gen_modes)?,
            vectors: self.vectors.clone(),
            oracle_limit: self.oracle_limit,
            parallelism: self.threads,
            seed: self.seed,
            output: if self.json { OutputFormat::Json } else { OutputFormat::Text },
        })
    }
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_USAGE)
}

fn emit(config: &RunConfig, result: Result<Vec<CheckReport>, AlgebraError>) -> ExitCode {
    match result {
        Ok(reports) => {
            print!("{}", report::render(&reports, config.output));
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if config.output == OutputFormat::Text {
                eprintln!("{} checks, {} failed", reports.len(), failed);
            }
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => usage(e),
    }
}

fn matchings(config: &RunConfig, count: bool) -> ExitCode {
    let ground: Vec<u32> = (1..=2 * config.n).collect();
    let all = match config.install(|| enumerate_matchings(&ground)) {
        Ok(all) => all,
        Err(e) => return usage(e),
    };
    debug_assert_eq!(all.len() as u64, double_factorial(2 * u64::from(config.n) - 1));
    if count {
        println!("{}", all.len());
        return ExitCode::SUCCESS;
    }
    for m in &all {
        match config.output {
            OutputFormat::Json => println!(
                "{}",
                serde_json::json!({ "pairs": m.pairs(), "sign": m.sign() })
            ),
            OutputFormat::Text => {
                let pairs: Vec<String> = m.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
                println!("{:+} {}", m.sign(), pairs.join(""));
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, count) = match &cli.command {
        Command::Matchings { common, count } => (common, *count),
        Command::Pfaffian(c)
        | Command::VerifyCenter(c)
        | Command::Residual(c)
        | Command::OracleCompare(c)
        | Command::Sugawara(c)
        | Command::Selftest(c) => (c, false),
    };
    let config = match common.config() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    match cli.command {
        Command::Matchings { .. } => matchings(&config, count),
        Command::Pfaffian(_) => {
            let rank = Rank::new(config.n).expect("validated");
            let pf = config.install(|| pfaffian_minus_one(rank));
            match config.output {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::json!({ "n": config.n, "terms": pf.len(), "element": pf.to_string() })
                ),
                OutputFormat::Text => println!("{pf}"),
            }
            ExitCode::SUCCESS
        }
        Command::VerifyCenter(_) => emit(&config, config.install(|| report::verify_center(&config))),
        Command::Residual(_) => emit(&config, config.install(|| report::residual(&config))),
        Command::OracleCompare(_) => emit(&config, config.install(|| report::oracle_compare(&config))),
        Command::Sugawara(_) => {
            if config.p_list.is_empty() || config.generator_modes.is_empty() {
                eprintln!("warning: empty verification grid; nothing to check");
            }
            emit(&config, config.install(|| report::sugawara(&config)))
        }
        Command::Selftest(_) => {
            if config.n > 4 {
                return usage(format!("selftest supports n in 1..=4, got {}", config.n));
            }
            emit(&config, config.install(|| report::selftest(&config)))
        }
    }
}
