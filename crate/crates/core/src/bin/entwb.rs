use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use entwb::classify::Definition;
use entwb::harness::props::{run_props, summary};
use entwb::harness::repro::run_repro_suite;
use entwb::harness::table::VerdictTable;
use entwb::harness::{fmt_f64, parse_scenario, seed_from_env, Scenario};

#[derive(Parser)]
#[command(name = "entwb", version, about = "Identical-particle entanglement workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a scenario's state under one definition, or all five.
    Classify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_parser = parse_definition)]
        definition: Option<Definition>,
    },
    /// Factorization gaps for every probe pair, then the file's expectations.
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run the full reproduction suite. Exits 1 if any check fails.
    Repro {
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Print the verdict table derived from the reproduction suite.
    Table1 {
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Randomized property sweeps.
    Props {
        /// Defaults to ENTWB_SEED, then to the built-in seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
    },
    /// Quantum Fisher information of the state for the declared generator.
    Qfi {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn parse_definition(s: &str) -> Result<Definition, String> {
    s.parse().map_err(|e: entwb::Error| e.to_string())
}

fn load(path: &Path) -> Result<Scenario, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<bool, String> {
    let err = |e: entwb::Error| e.to_string();
    match cli.command {
        Command::Classify { scenario, definition } => {
            let sc = load(&scenario)?;
            let ev = sc.evaluate().map_err(err)?;
            let defs = match definition {
                Some(d) => vec![d],
                None => Definition::ALL.to_vec(),
            };
            for d in defs {
                match ev.classify(d) {
                    Ok(v) => println!("{d}: {} ({})", v.label(), v.witness),
                    Err(e) if definition.is_none() => println!("{d}: n/a ({e})"),
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok(true)
        }
        Command::Check { scenario } => {
            let sc = load(&scenario)?;
            let ev = sc.evaluate().map_err(err)?;
            if (ev.norm - 1.0).abs() > entwb::EPS_TOL {
                println!("state normalized from norm {}", fmt_f64(ev.norm));
            }
            let names: Vec<&String> = ev.probes.keys().collect();
            for (i, a) in names.iter().enumerate() {
                for b in &names[i + 1..] {
                    let g = ev.gap(a, b).map_err(err)?;
                    println!(
                        "gap({a}, {b}) = {} ; <AB> = {} ; <A><B> = {} ; {}",
                        fmt_f64(g.gap.re),
                        fmt_f64(g.lhs.re),
                        fmt_f64(g.rhs.re),
                        if g.factorizes { "factorizes" } else { "does not factorize" }
                    );
                }
            }
            let checks = sc.check().map_err(err)?;
            for c in &checks {
                println!("{} {} : expected {} got {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.expected, c.actual);
            }
            Ok(checks.iter().all(|c| c.pass))
        }
        Command::Repro { format } => {
            let report = run_repro_suite(seed_from_env());
            match format {
                Format::Csv => print!("{}", report.to_csv()),
                Format::Md => print!("{}", report.to_markdown()),
            }
            Ok(report.passed())
        }
        Command::Table1 { format } => {
            let report = run_repro_suite(seed_from_env());
            let table = VerdictTable::from_report(&report).map_err(err)?;
            match format {
                Format::Csv => print!("{}", table.to_csv()),
                Format::Md => print!("{}", table.to_markdown()),
            }
            Ok(true)
        }
        Command::Props { seed, samples, format } => {
            let report = run_props(seed.unwrap_or_else(seed_from_env), samples).map_err(err)?;
            match format {
                Format::Csv => print!("{}", report.to_csv()),
                Format::Md => println!("{}\n{}", report.to_markdown(), summary(&report)),
            }
            Ok(report.passed())
        }
        Command::Qfi { scenario } => {
            let sc = load(&scenario)?;
            let q = sc.evaluate().and_then(|ev| ev.qfi()).map_err(err)?;
            println!("{}", fmt_f64(q));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
