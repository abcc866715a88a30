//! Result serialization: per-UE CSV, rate CDF, power JSON, run manifest,
//! and the cross-scenario comparison table.

use crate::engine::{percentiles_of, quantile_sorted, ResultSet};
use crate::error::{Result, SimError};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SimError + '_ {
    move |source| SimError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

/// Number of quantile points in cdf.csv.
pub const CDF_POINTS: usize = 1000;

fn tier_label(t: crate::geometry::TierLabel) -> &'static str {
    use crate::geometry::TierLabel::*;
    match t {
        Center => "center",
        Tier1 => "tier1",
        Tier2 => "tier2",
        Hotspot => "hotspot",
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: String,
    pub seed: u64,
    pub n_drops: u32,
    pub version: String,
    pub config_hash: String,
    pub wall_clock_s: f64,
    pub p5_mbps: f64,
    pub p50_mbps: f64,
    pub p95_mbps: f64,
    pub total_power_w: f64,
    pub config: crate::scenario::ScenarioConfig,
}

/// Writes per_ue.csv, cdf.csv, power.json, and manifest.json into `dir`.
pub fn emit(results: &ResultSet, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;

    let mut per_ue = String::from(
        "drop,ue_id,tier_label,serving_tech,serving_cell,ssb_beam,csirs_beam,\
         sinr_eff_l1_db,sinr_eff_l2_db,rate_mbps\n",
    );
    for r in &results.records {
        per_ue.push_str(&format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6}\n",
            r.drop,
            r.ue_id,
            tier_label(r.tier),
            r.serving_tech.label(),
            r.serving_cell,
            r.ssb_beam,
            r.csirs_beam,
            r.sinr_eff_db[0],
            r.sinr_eff_db[1],
            r.rate_bps / 1e6,
        ));
    }
    write_file(&dir.join("per_ue.csv"), &per_ue)?;

    let mut sorted = results.rates_mbps();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut cdf = String::from("rate_mbps,cdf\n");
    if !sorted.is_empty() {
        for i in 0..CDF_POINTS {
            let q = i as f64 / (CDF_POINTS - 1) as f64;
            cdf.push_str(&format!("{:.6},{:.6}\n", quantile_sorted(&sorted, q), q));
        }
    }
    write_file(&dir.join("cdf.csv"), &cdf)?;

    let power_json = serde_json::to_string_pretty(&results.power)
        .map_err(|e| SimError::Config(e.to_string()))?;
    write_file(&dir.join("power.json"), &power_json)?;

    let manifest = Manifest {
        scenario: results.scenario.clone(),
        seed: results.config.seed,
        n_drops: results.config.n_drops,
        version: results.version.clone(),
        config_hash: results.config_hash.clone(),
        wall_clock_s: results.wall_clock_s,
        p5_mbps: results.percentiles.p5_mbps,
        p50_mbps: results.percentiles.p50_mbps,
        p95_mbps: results.percentiles.p95_mbps,
        total_power_w: results.power.total_w,
        config: results.config.clone(),
    };
    let manifest_json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| SimError::Config(e.to_string()))?;
    write_file(&dir.join("manifest.json"), &manifest_json)?;
    Ok(())
}

/// A previously emitted run, reloaded for comparison.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub scenario: String,
    pub p50_mbps: f64,
    pub p95_mbps: f64,
    pub total_power_w: f64,
    pub rates_mbps: Vec<f64>,
}

/// Loads a results directory written by [`emit`].
pub fn load_run(dir: &Path) -> Result<RunSummary> {
    let manifest_path = dir.join("manifest.json");
    let raw = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let manifest: Manifest =
        serde_json::from_str(&raw).map_err(|e| SimError::Config(e.to_string()))?;

    let csv_path = dir.join("per_ue.csv");
    let csv = fs::read_to_string(&csv_path).map_err(io_err(&csv_path))?;
    let mut rates = Vec::new();
    for line in csv.lines().skip(1) {
        let rate = line
            .rsplit(',')
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| SimError::Config(format!("malformed per_ue.csv row: {line}")))?;
        rates.push(rate);
    }
    let p = percentiles_of(&rates);
    Ok(RunSummary {
        scenario: manifest.scenario,
        p50_mbps: p.p50_mbps,
        p95_mbps: p.p95_mbps,
        total_power_w: manifest.total_power_w,
        rates_mbps: rates,
    })
}

/// One row of the comparison table. Ratios are relative to the first run.
#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub scenario: String,
    pub p50_mbps: f64,
    pub p95_mbps: f64,
    pub rate_ratio: f64,
    pub total_power_w: f64,
    pub power_ratio: f64,
}

pub fn compare(runs: &[RunSummary]) -> Result<Vec<CompareRow>> {
    let base = runs
        .first()
        .ok_or_else(|| SimError::Config("compare needs at least one run".into()))?;
    Ok(runs
        .iter()
        .map(|r| CompareRow {
            scenario: r.scenario.clone(),
            p50_mbps: r.p50_mbps,
            p95_mbps: r.p95_mbps,
            rate_ratio: r.p50_mbps / base.p50_mbps,
            total_power_w: r.total_power_w,
            power_ratio: r.total_power_w / base.total_power_w,
        })
        .collect())
}

/// Renders the comparison as an aligned plain-text table.
pub fn render_compare(rows: &[CompareRow]) -> String {
    let mut out = format!(
        "{:<32} {:>12} {:>12} {:>10} {:>12} {:>10}\n",
        "scenario", "p50 Mbps", "p95 Mbps", "rate x", "power W", "power x"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<32} {:>12.2} {:>12.2} {:>10.3} {:>12.1} {:>10.3}\n",
            r.scenario, r.p50_mbps, r.p95_mbps, r.rate_ratio, r.total_power_w, r.power_ratio
        ));
    }
    out
}
