use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pcn_region::io::{read_text, Format};
use pcn_region::scenario::{parse_config, preset, run_scenario, ConfigError, ScenarioConfig, PRESETS};
use pcn_region::verify::{fm_equivalence, oracle_agreement};
use pcn_region::{Error, Result};

#[derive(Parser)]
#[command(name = "pcn", version, about = "Rate regions of the two-pair collaborative network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the regions of a scenario and write frontiers and plot.
    Region {
        /// Preset a..e, or a config file (optionally `path:name`).
        #[arg(long, default_value = "a")]
        scenario: String,
        /// Grid points per split parameter; overrides the scenario's.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle-agreement and elimination-equivalence suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[arg(long, default_value_t = 100)]
        systems: usize,
        #[arg(long, default_value_t = 20)]
        distributions: usize,
    },
    /// List the built-in scenarios.
    Scenarios,
}

fn load_scenario(spec: &str) -> Result<ScenarioConfig> {
    if let Some(cfg) = preset(spec) {
        return Ok(cfg);
    }
    let (path, name) = match spec.rsplit_once(':') {
        Some((p, n)) if !n.contains('/') && !p.is_empty() => (p, Some(n)),
        _ => (spec, None),
    };
    let path = PathBuf::from(path);
    if !path.exists() {
        return Err(ConfigError::UnknownScenario(spec.to_string()).into());
    }
    let all = parse_config(&read_text(&path)?)?;
    match name {
        Some(n) => all.into_iter().find(|c| c.name == n).ok_or_else(|| ConfigError::NotInFile(n.to_string()).into()),
        None => all.into_iter().next().ok_or_else(|| ConfigError::UnknownScenario(spec.to_string()).into()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Region { scenario, grid, format, plot, out } => {
            let mut cfg = load_scenario(&scenario)?;
            if let Some(g) = grid {
                cfg.grid = g;
            }
            cfg.outputs.format = format;
            cfg.outputs.plot = plot;
            cfg.outputs.dir = out;
            let report = run_scenario(&cfg)?;
            println!("scenario {} (config {})", report.name, &report.config_hash[..12]);
            if let Some(pdf) = &report.pdf {
                println!("  pdf: {} frontier points, equal rate {:.6}", pdf.region.len(), pdf.equal_rate);
            }
            if let Some(o) = &report.oracle {
                println!("  oracle: {} splits checked, max relative deviation {:.3e}", o.splits, o.max_relative_deviation);
            }
            match (&report.ifc, &report.ifc_error) {
                (Some(ifc), _) => println!("  ifc: {} frontier points, equal rate {:.6}", ifc.region.len(), ifc.equal_rate),
                (None, Some(e)) => println!("  ifc: not computed ({e})"),
                _ => {}
            }
            if cfg.outputs.dir.is_none() {
                if let Some(pdf) = &report.pdf {
                    print!("{}", pcn_region::io::frontier_csv(&pdf.region)?);
                }
            }
            Ok(())
        }
        Command::Verify { seed, draws, systems, distributions } => {
            let oracle = oracle_agreement(seed, draws);
            let worst = oracle.worst.as_ref().map(|w| format!(" ({} at draw {})", w.term, w.draw)).unwrap_or_default();
            println!(
                "oracle agreement: {} draws, max relative deviation {:.3e}{worst}: {}",
                oracle.draws,
                oracle.max_relative_deviation,
                if oracle.passed() { "PASS" } else { "FAIL" }
            );
            for f in &oracle.oracle_failures {
                println!("  {f}");
            }
            let fm = fm_equivalence(seed, systems, distributions)?;
            println!(
                "elimination equivalence: {} random systems, {} from distributions (snap error {:.1e}): {}",
                fm.random_sets,
                fm.pmf_sets,
                fm.max_snap_error,
                if fm.passed() { "PASS" } else { "FAIL" }
            );
            for m in &fm.mismatches {
                println!("  {m}");
            }
            if oracle.passed() && fm.passed() {
                Ok(())
            } else {
                Err(Error::Verification("see the lines marked FAIL".into()))
            }
        }
        Command::Scenarios => {
            for (name, h) in PRESETS {
                println!(
                    "{name}: h12={} h13={} h14={} h23={} h24={} h34={} (P=N=1)",
                    h[0], h[1], h[2], h[3], h[4], h[5]
                );
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
