use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use qlpa::qscalar::ScalarMode;
use qlpa_cli::{dispatch, text, Options, Report};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Generic,
    Root,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact computations in quasi polynomial algebras.
///
/// Parameters are a JSON object read from FILE, from --params, or from stdin.
#[derive(Debug, Parser)]
#[command(name = "qlpa", version, after_help = verbs_help())]
struct Cli {
    /// Operation to run
    verb: String,
    /// JSON parameter file; `-` or absent reads stdin
    file: Option<PathBuf>,
    /// Inline JSON parameters
    #[arg(long, conflicts_with = "file")]
    params: Option<String>,
    #[arg(long, value_enum, default_value = "generic")]
    mode: Mode,
    /// Order of the root of unity in root mode
    #[arg(long)]
    ell: Option<u32>,
    /// Series truncation order
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Valuation window for searches
    #[arg(long, num_args = 2, value_names = ["KMIN", "KMAX"], allow_negative_numbers = true, default_values_t = [-8, 8])]
    window: Vec<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn verbs_help() -> String {
    format!("Verbs: {}", qlpa_cli::VERBS.join(", "))
}

fn usage_error(command: &str, msg: String) -> Report {
    Report { command: command.to_string(), exit_code: 2, result: None, message: Some(msg), pointer: None }
}

fn options(cli: &Cli) -> Result<Options, String> {
    let mode = match (cli.mode, cli.ell) {
        (Mode::Generic, None) => ScalarMode::Generic,
        (Mode::Generic, Some(_)) => return Err("--ell needs --mode root".into()),
        (Mode::Root, Some(l)) => ScalarMode::root(l).map_err(|e| e.to_string())?,
        (Mode::Root, None) => return Err("--mode root needs --ell".into()),
    };
    if cli.trunc <= 0 {
        return Err("--trunc must be positive".into());
    }
    let window = (cli.window[0], cli.window[1]);
    if window.0 > window.1 {
        return Err("--window needs KMIN <= KMAX".into());
    }
    Ok(Options { mode, trunc: cli.trunc, window })
}

fn read_params(cli: &Cli) -> Result<Value, String> {
    let raw = match (&cli.params, &cli.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) if path.as_os_str() != "-" => {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
        }
        // paper-examples takes no parameters; do not wait on a terminal
        (None, None) if cli.verb == "paper-examples" => String::new(),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {e}"))?;
            s
        }
    };
    if raw.trim().is_empty() {
        return Ok(Value::Null);
    }
    serde_json::from_str(&raw).map_err(|e| format!("invalid JSON: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match options(&cli).and_then(|opts| Ok((opts, read_params(&cli)?))) {
        Ok((opts, params)) => dispatch(&cli.verb, &params, &opts),
        Err(msg) => usage_error(&cli.verb, msg),
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
        Format::Text => print!("{}", text::render(&report)),
    }
    ExitCode::from(report.exit_code)
}
