use clap::{Args, Parser, Subcommand};
use qlevy::QError;
use serde_json::json;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod commands;
mod scenario;

use scenario::{Overrides, Scenario};

#[derive(Parser)]
#[command(name = "qlevy", version, about = "Batch driver: scenario in, JSON/CSV reports out")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (TOML)
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Truncation size
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic relation check and representation residual table
    CheckRelations(Common),
    /// Gaussian parameter roundtrip and classification
    Gauss(Common),
    /// Level decomposition with certificates
    Decompose(Common),
    /// Full decomposition of the generating functional
    Hunt(Common),
    /// Divergence trace of the SU_q(3) counterexample
    Counterexample(Common),
    /// Convolution semigroup table
    Semigroup(Common),
    /// Print the scenario JSON schema
    Schema,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckRelations(_) => "check-relations",
            Command::Gauss(_) => "gauss",
            Command::Decompose(_) => "decompose",
            Command::Hunt(_) => "hunt",
            Command::Counterexample(_) => "counterexample",
            Command::Semigroup(_) => "semigroup",
            Command::Schema => "schema",
        }
    }
}

enum Failure {
    Lib(QError),
    Io(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(e) => e.exit_code() as u8,
            Failure::Io(_) => 2,
            Failure::Internal(_) => 4,
        }
    }

    fn to_json(&self, command: &str) -> serde_json::Value {
        let (kind, message) = match self {
            Failure::Lib(e) => (e.kind().to_string(), e.to_string()),
            Failure::Io(m) => ("io".into(), m.clone()),
            Failure::Internal(m) => ("internal".into(), m.clone()),
        };
        json!({ "error": { "command": command, "kind": kind, "message": message, "exit_code": self.code() } })
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {}", path.display(), e)))
}

fn run(command: &Command, c: &Common) -> Result<PathBuf, Failure> {
    let mut sc = Scenario::load(&c.scenario).map_err(Failure::Lib)?;
    sc.apply(&Overrides { seed: c.seed, tol: c.tol, dim: c.dim });
    std::fs::create_dir_all(&c.out).map_err(|e| Failure::Io(format!("{}: {}", c.out.display(), e)))?;
    let out = match command {
        Command::CheckRelations(_) => commands::check_relations(&sc, &c.out),
        Command::Gauss(_) => commands::gauss(&sc),
        Command::Decompose(_) => commands::decompose_cmd(&sc),
        Command::Hunt(_) => commands::hunt(&sc),
        Command::Counterexample(_) => commands::counterexample(&sc),
        Command::Semigroup(_) => commands::semigroup(&sc),
        Command::Schema => unreachable!(),
    }
    .map_err(Failure::Lib)?;
    let name = command.name();
    let report = c.out.join(format!("{}.json", name));
    write_file(&report, &(serde_json::to_string_pretty(&out.report).expect("report serializes") + "\n"))?;
    if let Some(csv) = &out.csv {
        write_file(&c.out.join(format!("{}.csv", name)), csv)?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Schema => {
            println!("{}", scenario::schema_json());
            return ExitCode::SUCCESS;
        }
        Command::CheckRelations(c)
        | Command::Gauss(c)
        | Command::Decompose(c)
        | Command::Hunt(c)
        | Command::Counterexample(c)
        | Command::Semigroup(c) => c.clone(),
    };
    let name = cli.command.name();
    let res = catch_unwind(AssertUnwindSafe(|| run(&cli.command, &common))).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(Failure::Internal(msg.unwrap_or_else(|| "panic".into())))
    });
    match res {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(f) => {
            let text = serde_json::to_string_pretty(&f.to_json(name)).expect("error serializes");
            if common.out.is_dir() {
                let _ = std::fs::write(common.out.join("error.json"), format!("{}\n", text));
            }
            println!("{}", text);
            ExitCode::from(f.code())
        }
    }
}
