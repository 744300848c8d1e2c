use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use reductor_core::catalog;
use reductor_core::config::RunConfig;
use reductor_core::registry;
use reductor_core::report::{self, Report};

#[derive(Parser)]
#[command(name = "reductor", version, about = "Reductors of filtered algebras over valued fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Degree bound N (default: the config's value, else 6).
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Extends the deterministic element pools with seeded random elements.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a TOML config.
    Run { config: PathBuf },
    /// Run a built-in example against its expected values.
    Example {
        name: String,
        /// Print the example's config as TOML instead of running it.
        #[arg(long)]
        export: bool,
    },
    /// List the built-in examples.
    ListExamples,
    /// Describe a check.
    Explain { check: String },
    /// Run every built-in example and report mismatches.
    Catalog,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(true) + "\n",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<u8, String> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Run { config } => {
            let src = fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
            let mut inst = RunConfig::load(&src).map_err(|e| format!("{}: {e}", config.display()))?;
            if let Some(n) = cli.max_degree {
                inst = override_degree(&inst.config, n)?;
            }
            if cli.seed.is_some() {
                inst.seed = cli.seed;
            }
            let format = cli.format.unwrap_or(match inst.config.format {
                Some(reductor_core::config::Format::Json) => Format::Json,
                _ => Format::Text,
            });
            let rep = report::run(&inst);
            emit(out, &render(&rep, format))?;
            Ok(if rep.passed { 0 } else { 1 })
        }
        Command::Example { name, export } => {
            let mut entry = catalog::get_example(name)?;
            if let Some(n) = cli.max_degree {
                entry.set_max_degree(n);
            }
            if *export {
                emit(out, &entry.config.to_toml())?;
                return Ok(0);
            }
            let outcome = entry.run_with_seed(cli.seed);
            let mut text = match cli.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let mut t = format!("example  {}: {}\n", entry.name, entry.summary);
                    t.push_str(&outcome.report.to_text());
                    t.push_str(&format!("expected values: {} checked, {} mismatches\n", outcome.expectations, outcome.mismatches.len()));
                    for m in &outcome.mismatches {
                        let actual = m.actual.as_ref().map_or("missing".into(), |v| v.to_string());
                        t.push_str(&format!("  {}: expected {}, got {actual}\n", m.pointer, m.expected));
                    }
                    t
                }
                Format::Json => {
                    let v = serde_json::json!({
                        "example": entry.name,
                        "expectations": entry.expected,
                        "mismatches": outcome.mismatches,
                        "report": outcome.report.to_value(true),
                    });
                    serde_json::to_string_pretty(&v).expect("serializes")
                }
            };
            if !text.ends_with('\n') {
                text.push('\n');
            }
            emit(out, &text)?;
            Ok(if outcome.mismatches.is_empty() { 0 } else { 1 })
        }
        Command::ListExamples => {
            let mut t = String::new();
            for x in catalog::entries() {
                t.push_str(&format!("{:<18} N<={}  {}\n", x.name, x.degree_bound, x.summary));
            }
            emit(out, &t)?;
            Ok(0)
        }
        Command::Explain { check } => {
            let text = registry::explain(check)?;
            emit(out, &format!("{text}\n"))?;
            Ok(0)
        }
        Command::Catalog => {
            let s = catalog::run_all(cli.max_degree.unwrap_or(reductor_core::config::DEFAULT_MAX_DEGREE));
            let text = match cli.format.unwrap_or(Format::Text) {
                Format::Text => s.to_text(),
                Format::Json => s.to_json() + "\n",
            };
            emit(out, &text)?;
            Ok(if s.mismatches == 0 { 0 } else { 1 })
        }
    }
}

fn override_degree(config: &RunConfig, n: u32) -> Result<reductor_core::config::Instance, String> {
    let mut c = config.clone();
    c.max_degree = Some(n);
    c.validate().map_err(|e| e.to_string())
}
