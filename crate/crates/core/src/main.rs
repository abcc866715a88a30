use clap::{Parser, Subcommand};
use fr3sim::beams::{csirs_codebook, ssb_codebook};
use fr3sim::catalog::catalog_lookup;
use fr3sim::error::{Result, SimError};
use fr3sim::geometry::{Point2, SitePlan};
use fr3sim::link::SchedulingMode;
use fr3sim::output;
use fr3sim::scenario::{expand_scenario, ScenarioConfig, SCENARIO_NAMES};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fr3sim", version, about = "Multi-layer cellular network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named scenario or a JSON config through the full pipeline.
    Simulate {
        /// Scenario name or path to a JSON config file.
        #[arg(long)]
        scenario: String,
        /// Master RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of Monte-Carlo drops.
        #[arg(long)]
        drops: Option<u32>,
        /// Scheduling/interference mode.
        #[arg(long, value_parser = parse_mode)]
        mode: Option<SchedulingMode>,
        /// Disable priority-based cell reselection.
        #[arg(long)]
        no_reselection: bool,
        /// Output directory for per_ue.csv, cdf.csv, power.json, manifest.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare previously emitted result directories (first is the baseline).
    Compare {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
    },
    /// Export beam pointing directions of a radio type as CSV.
    Beams {
        /// Radio type name from the catalog.
        #[arg(long)]
        radio: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_mode(s: &str) -> std::result::Result<SchedulingMode, String> {
    match s {
        "paper-literal" => Ok(SchedulingMode::PaperLiteral),
        "orthogonal" => Ok(SchedulingMode::Orthogonal),
        other => Err(format!(
            "unknown mode '{other}' (expected paper-literal or orthogonal)"
        )),
    }
}

fn load_config(scenario: &str) -> Result<ScenarioConfig> {
    if SCENARIO_NAMES.contains(&scenario) {
        return expand_scenario(scenario);
    }
    let path = std::path::Path::new(scenario);
    if path.exists() {
        let raw = std::fs::read_to_string(path).map_err(|source| SimError::Io {
            path: path.display().to_string(),
            source,
        })?;
        return serde_json::from_str(&raw).map_err(|e| SimError::Config(e.to_string()));
    }
    Err(SimError::UnknownScenario {
        name: scenario.to_string(),
        valid: SCENARIO_NAMES.join(", "),
    })
}

fn cmd_simulate(
    scenario: String,
    seed: Option<u64>,
    drops: Option<u32>,
    mode: Option<SchedulingMode>,
    no_reselection: bool,
    out: PathBuf,
) -> Result<()> {
    let mut config = load_config(&scenario)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(drops) = drops {
        config.n_drops = drops;
    }
    if let Some(mode) = mode {
        config.scheduling_mode = mode;
    }
    if no_reselection {
        config.reselection.enabled = false;
    }
    let results = fr3sim::run(&config)?;
    output::emit(&results, &out)?;
    println!(
        "{}: {} UE records over {} drops; median {:.2} Mbps, p95 {:.2} Mbps, power {:.1} W ({:.1} s)",
        results.scenario,
        results.records.len(),
        config.n_drops,
        results.percentiles.p50_mbps,
        results.percentiles.p95_mbps,
        results.power.total_w,
        results.wall_clock_s,
    );
    println!("results written to {}", out.display());
    Ok(())
}

fn cmd_compare(dirs: Vec<PathBuf>) -> Result<()> {
    let runs = dirs
        .iter()
        .map(|d| output::load_run(d))
        .collect::<Result<Vec<_>>>()?;
    let rows = output::compare(&runs)?;
    print!("{}", output::render_compare(&rows));
    Ok(())
}

fn cmd_beams(radio: String, out: PathBuf) -> Result<()> {
    let rt = catalog_lookup(&radio)?;
    let plan = SitePlan {
        sites: vec![Point2::ORIGIN],
        isd: 500.0,
        n_tiers: 0,
        kind: fr3sim::geometry::SiteKind::UMa,
    };
    let (_, cells) = fr3sim::catalog::instantiate_layer(&plan, &rt, 0, 0)?;
    let mut csv = String::from("technology,codebook,beam,azimuth_deg,zenith_deg\n");
    // One sector per technology suffices; the other sectors are rotations.
    for cell in cells.iter().filter(|c| c.boresight_deg == 30.0) {
        for (label, book) in [
            ("ssb", ssb_codebook(cell)?),
            ("csi-rs", csirs_codebook(cell)?),
        ] {
            for i in 0..book.len() {
                let (az, zen) = book.beam_direction_deg(i);
                csv.push_str(&format!(
                    "{},{},{},{:.3},{:.3}\n",
                    cell.technology.label(),
                    label,
                    i,
                    az,
                    zen
                ));
            }
        }
    }
    std::fs::write(&out, csv).map_err(|source| SimError::Io {
        path: out.display().to_string(),
        source,
    })?;
    println!("beam table for '{radio}' written to {}", out.display());
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            scenario,
            seed,
            drops,
            mode,
            no_reselection,
            out,
        } => cmd_simulate(scenario, seed, drops, mode, no_reselection, out),
        Command::Compare { dirs } => cmd_compare(dirs),
        Command::Beams { radio, out } => cmd_beams(radio, out),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            eprintln!("  caused by: {s}");
            source = s.source();
        }
        std::process::exit(1);
    }
}
