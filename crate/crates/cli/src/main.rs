mod cmd;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use aschemes::dlat::DEFAULT_CAP;

#[derive(Parser)]
#[command(name = "aschemes", version, about = "Finite models of point-free schemes over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest lattice fragment materialized.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP as u64, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Seed for sampled property checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Radical-class lattice of principal ideals and its spectrum.
    Frag { input: Option<PathBuf> },
    /// Normalization of an affine integral model.
    Normalize { input: Option<PathBuf> },
    /// A model of Q(t) inside the Zariski-Riemann space.
    Zr { input: Option<PathBuf> },
    /// Inverse limit of a chain of models.
    Limit { input: Option<PathBuf> },
    /// Compactification of a curve model covered by two charts.
    Compactify { input: Option<PathBuf> },
    /// Fan resolving monomial fractions.
    Fan { input: Option<PathBuf> },
    /// Axiom, refinement and sampled support checks on a model.
    Check { input: Option<PathBuf> },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Frag { .. } => "frag",
            Command::Normalize { .. } => "normalize",
            Command::Zr { .. } => "zr",
            Command::Limit { .. } => "limit",
            Command::Compactify { .. } => "compactify",
            Command::Fan { .. } => "fan",
            Command::Check { .. } => "check",
        }
    }

    fn input(&self) -> Option<&PathBuf> {
        match self {
            Command::Frag { input }
            | Command::Normalize { input }
            | Command::Zr { input }
            | Command::Limit { input }
            | Command::Compactify { input }
            | Command::Fan { input }
            | Command::Check { input } => input.as_ref(),
        }
    }
}

enum Failure {
    Schema { path: String, message: String },
    Compute(String),
}

fn parse<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| Failure::Schema { path: e.path().to_string(), message: e.into_inner().to_string() })
}

fn dispatch(cli: &Cli, bytes: &[u8]) -> Result<cmd::Output, Failure> {
    let cap = cli.cap as usize;
    let r = match cli.command {
        Command::Frag { .. } => cmd::frag(parse(bytes)?, cap),
        Command::Normalize { .. } => cmd::normalize(parse(bytes)?, cap),
        Command::Zr { .. } => cmd::zr(parse(bytes)?, cap),
        Command::Limit { .. } => cmd::limit(parse(bytes)?, cap),
        Command::Compactify { .. } => cmd::compactify_cmd(parse(bytes)?, cap),
        Command::Fan { .. } => cmd::fan(parse(bytes)?),
        Command::Check { .. } => cmd::check(parse(bytes)?, cap, cli.seed),
    };
    r.map_err(|e| Failure::Compute(e.to_string()))
}

fn read_input(path: Option<&PathBuf>) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match path {
        Some(p) if p.as_os_str() != "-" => buf = std::fs::read(p)?,
        _ => {
            std::io::stdin().read_to_end(&mut buf)?;
        }
    }
    Ok(buf)
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bytes = match read_input(cli.command.input()) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("aschemes: cannot read input: {e}");
            return ExitCode::from(1);
        }
    };
    let digest = hex::encode(Sha256::digest(&bytes));
    let mut doc = json!({
        "command": cli.command.name(),
        "input_sha256": digest,
        "seed": cli.seed,
        "cap": cli.cap,
    });
    let (code, dot) = match dispatch(&cli, &bytes) {
        Ok(out) => {
            let ok = out.verdicts.ok();
            doc["ok"] = Value::Bool(ok);
            doc["verdicts"] = serde_json::to_value(&out.verdicts.checks).unwrap();
            doc["result"] = out.result;
            (if ok { 0 } else { 1 }, Some(out.dot))
        }
        Err(Failure::Schema { path, message }) => {
            doc["ok"] = Value::Bool(false);
            doc["error"] = json!({ "kind": "schema", "path": path, "message": message });
            (2, None)
        }
        Err(Failure::Compute(message)) => {
            doc["ok"] = Value::Bool(false);
            doc["error"] = json!({ "kind": "computation", "message": message });
            (1, None)
        }
    };
    let text = match (cli.format, dot) {
        (Format::Dot, Some(d)) => d,
        (Format::Dot, None) => {
            eprintln!("{}", doc["error"]);
            String::new()
        }
        (Format::Json, _) => serde_json::to_string_pretty(&doc).unwrap() + "\n",
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("aschemes: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
