//! End-to-end scenario runs: geometry, channels, codebooks, association,
//! allocations, SINR, rates, and power, aggregated over Monte-Carlo drops.

use crate::assoc::{self, AssociationState, RsrpMeasurement};
use crate::beams::{beam_amplitude_gain, csirs_codebook, ssb_codebook, Codebook};
use crate::catalog::{catalog_lookup, Cell, RadioUnit, Technology};
use crate::channel::{
    link_large_scale, los_probability, small_scale, CellShadow, PropModel,
};
use crate::error::{Result, SimError};
use crate::geometry::{
    build_hex_grid, drop_hotspots, drop_macro_ues, Point2, SitePlan, TierLabel, Ue,
};
use crate::link::{effective_sinr, split_power, ue_rate, SchedulingMode};
use crate::power::{network_power, PowerReport};
use crate::rng::{substream, tag};
use crate::scenario::{PlanSpec, ScenarioConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UeRecord {
    pub drop: u32,
    pub ue_id: u32,
    pub tier: TierLabel,
    pub serving_tech: Technology,
    pub serving_cell: u32,
    pub ssb_beam: usize,
    pub csirs_beam: usize,
    pub sinr_eff_db: [f64; 2],
    pub rate_bps: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Percentiles {
    pub p5_mbps: f64,
    pub p50_mbps: f64,
    pub p95_mbps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultSet {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub version: String,
    pub wall_clock_s: f64,
    pub records: Vec<UeRecord>,
    pub percentiles: Percentiles,
    pub power: PowerReport,
}

impl ResultSet {
    pub fn rates_mbps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.rate_bps / 1e6).collect()
    }

    /// Fraction of UE records served by the given technology.
    pub fn served_fraction(&self, tech: Technology) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().filter(|r| r.serving_tech == tech).count() as f64
            / self.records.len() as f64
    }
}

/// Linear-interpolation quantile of a sorted slice, q in [0, 1].
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}

pub fn percentiles_of(rates_mbps: &[f64]) -> Percentiles {
    let mut sorted = rates_mbps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Percentiles {
        p5_mbps: quantile_sorted(&sorted, 0.05),
        p50_mbps: quantile_sorted(&sorted, 0.50),
        p95_mbps: quantile_sorted(&sorted, 0.95),
    }
}

fn fnv_hash(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

struct Deployment {
    radios: Vec<RadioUnit>,
    cells: Vec<Cell>,
    /// Parallel to `radios`: the technologies each radio hosts.
    radio_techs: Vec<Vec<Technology>>,
}

fn build_deployment(config: &ScenarioConfig, hotspot_centers: &[Point2]) -> Result<Deployment> {
    let mut radios = Vec::new();
    let mut cells = Vec::new();
    let mut radio_techs = Vec::new();
    for layer in &config.layers {
        let rt = catalog_lookup(&layer.radio_type)?;
        let plan = match &layer.plan {
            PlanSpec::Hex { isd_m, n_tiers, kind } => {
                let mut p = build_hex_grid(*isd_m, *n_tiers, Point2::ORIGIN)?;
                p.kind = *kind;
                p
            }
            PlanSpec::HotspotSites => SitePlan {
                sites: hotspot_centers.to_vec(),
                isd: config.ue_distribution.hotspots.min_separation_m,
                n_tiers: 0,
                kind: crate::geometry::SiteKind::Hotspot,
            },
        };
        let (layer_radios, layer_cells) =
            crate::catalog::instantiate_layer(&plan, &rt, radios.len() as u32, cells.len() as u32)?;
        let techs: Vec<Technology> = rt.techs.iter().map(|t| t.technology).collect();
        radio_techs.extend(std::iter::repeat(techs).take(layer_radios.len()));
        radios.extend(layer_radios);
        cells.extend(layer_cells);
    }
    Ok(Deployment {
        radios,
        cells,
        radio_techs,
    })
}

fn drop_ues(config: &ScenarioConfig, drop: u32) -> Result<(Vec<Ue>, Vec<Point2>)> {
    let dist = &config.ue_distribution;
    let plan = build_hex_grid(dist.isd_m, dist.n_tiers, Point2::ORIGIN)?;
    let mut macro_rng = substream(config.seed, &[drop as u64, tag::MACRO_UE]);
    let mut ues = drop_macro_ues(&plan, dist.tier_counts, 0, &mut macro_rng);
    let mut hs_rng = substream(config.seed, &[drop as u64, tag::HOTSPOT]);
    let hs = &dist.hotspots;
    let (hotspots, hs_ues) = drop_hotspots(
        hs.count,
        hs.region_radius_m,
        hs.radius_m,
        hs.min_separation_m,
        hs.ues_per_hotspot,
        ues.len() as u32,
        &mut hs_rng,
    )?;
    ues.extend(hs_ues);
    Ok((ues, hotspots.into_iter().map(|h| h.center).collect()))
}

struct PassA {
    betas: Vec<f64>,
    los: Vec<bool>,
    assoc: AssociationState,
    csirs_direction: usize,
}

/// Per-drop channel-and-association evaluation for one UE.
fn evaluate_ue(
    config: &ScenarioConfig,
    drop: u32,
    ue: &Ue,
    cells: &[Cell],
    shadows: &[CellShadow],
    ssb_books: &[Codebook],
    csirs_books: &[Codebook],
) -> Result<PassA> {
    let k_los = 10f64.powf(config.channel.rician_k_db / 10.0);
    let mut betas = Vec::with_capacity(cells.len());
    let mut los_flags = Vec::with_capacity(cells.len());
    let mut measurements: Vec<RsrpMeasurement> = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let model = PropModel::for_site_kind(cell.site_kind);
        let d2d = cell.site.dist(&ue.position());
        let p_los = los_probability(model, d2d, ue.z);
        let mut los_rng = substream(
            config.seed,
            &[drop as u64, tag::LOS, ue.id as u64, cell.id as u64],
        );
        let los = rand::Rng::gen::<f64>(&mut los_rng) < p_los;
        let shadow_db = shadows[ci].sample(ue.position(), los);
        let ls = link_large_scale(cell, ue, shadow_db, los)?;
        betas.push(ls.beta_linear);
        los_flags.push(los);

        let k = if los { k_los } else { 0.0 };
        let mut h_rng = substream(
            config.seed,
            &[drop as u64, tag::SMALL_SCALE, ue.id as u64, cell.id as u64, 0],
        );
        let h = small_scale(cell, ue, k, &mut h_rng);
        measurements.extend(assoc::measure_rsrp_with_beta(
            ue.id,
            cell,
            ls.beta_linear,
            &h,
            &ssb_books[ci],
        )?);
    }
    let state = assoc::priority_reselect(&measurements, &config.reselection)?;
    let sc = state.serving_cell as usize;
    let k = if los_flags[sc] { k_los } else { 0.0 };
    let mut h_rng = substream(
        config.seed,
        &[drop as u64, tag::SMALL_SCALE, ue.id as u64, cells[sc].id as u64, 0],
    );
    let h_serv = small_scale(&cells[sc], ue, k, &mut h_rng);
    let pick = assoc::select_csirs_beam(ue.id, &cells[sc], betas[sc], &h_serv, &csirs_books[sc])?;
    Ok(PassA {
        betas,
        los: los_flags,
        assoc: state,
        csirs_direction: pick.csirs_direction,
    })
}

struct CellLoad {
    ue_indices: Vec<usize>,
    /// (direction index, number of UEs sharing it), ordered by direction.
    dir_ue_counts: Vec<(usize, u32)>,
    /// Per-(layer, PRB) transmit power of each served beam, watts.
    layer_prb_power_w: f64,
}

impl CellLoad {
    fn ues_on_direction(&self, dir: usize) -> u32 {
        self.dir_ue_counts
            .iter()
            .find(|(d, _)| *d == dir)
            .map(|(_, n)| *n)
            .unwrap_or(0)
    }
}

fn cell_loads(
    config: &ScenarioConfig,
    cells: &[Cell],
    pass_a: &[PassA],
) -> Result<Vec<CellLoad>> {
    let mut loads: Vec<CellLoad> = cells
        .iter()
        .map(|_| CellLoad {
            ue_indices: Vec::new(),
            dir_ue_counts: Vec::new(),
            layer_prb_power_w: 0.0,
        })
        .collect();
    for (ui, pa) in pass_a.iter().enumerate() {
        loads[pa.assoc.serving_cell as usize].ue_indices.push(ui);
    }
    for (ci, load) in loads.iter_mut().enumerate() {
        if load.ue_indices.is_empty() {
            continue;
        }
        let mut dirs: BTreeMap<usize, u32> = BTreeMap::new();
        for &ui in &load.ue_indices {
            *dirs.entry(pass_a[ui].csirs_direction).or_insert(0) += 1;
        }
        load.dir_ue_counts = dirs.into_iter().collect();
        // MU-MIMO co-scheduling: every active direction carries one beam per
        // polarization, and the cell's power splits uniformly over all of
        // them; UEs sharing a direction time-share its beam pair.
        let scheduled_layers = match config.scheduling_mode {
            SchedulingMode::PaperLiteral => 2 * load.dir_ue_counts.len() as u32,
            SchedulingMode::Orthogonal => 2,
        };
        load.layer_prb_power_w =
            split_power(cells[ci].tx_power_w, cells[ci].n_prb, scheduled_layers)?;
    }
    Ok(loads)
}

/// SINR, effective SINR, and rate for one UE given the network load.
#[allow(clippy::too_many_arguments)]
fn evaluate_link(
    config: &ScenarioConfig,
    drop: u32,
    ue: &Ue,
    cells: &[Cell],
    csirs_books: &[Codebook],
    pass_a: &PassA,
    loads: &[CellLoad],
) -> Result<([f64; 2], f64)> {
    let sc = pass_a.assoc.serving_cell as usize;
    let serving = &cells[sc];
    // Eq. 9's N_UE per layer: UEs time-sharing this UE's beam pair in
    // paper-literal mode, the whole cell under round-robin FDM.
    let n_ue_layer = match config.scheduling_mode {
        SchedulingMode::PaperLiteral => loads[sc].ues_on_direction(pass_a.csirs_direction),
        SchedulingMode::Orthogonal => loads[sc].ue_indices.len() as u32,
    };
    let noise_w = config.channel.noise_power_w(serving.prb_bandwidth_hz);
    let k_los = 10f64.powf(config.channel.rician_k_db / 10.0);
    let n_groups = config.channel.n_prb_groups.max(1);

    let mut per_group: [Vec<f64>; 2] = [Vec::with_capacity(n_groups), Vec::with_capacity(n_groups)];
    for g in 0..n_groups {
        let mut signal = [0.0f64; 2];
        let mut interference = [0.0f64; 2];
        for (ci, cell) in cells.iter().enumerate() {
            if cell.carrier_hz != serving.carrier_hz {
                continue; // different carriers do not interfere
            }
            let load = &loads[ci];
            if load.ue_indices.is_empty() {
                continue;
            }
            let k = if pass_a.los[ci] { k_los } else { 0.0 };
            let mut h_rng = substream(
                config.seed,
                &[
                    drop as u64,
                    tag::SMALL_SCALE,
                    ue.id as u64,
                    cell.id as u64,
                    g as u64,
                ],
            );
            let h = small_scale(cell, ue, k, &mut h_rng);
            let beta = pass_a.betas[ci];
            let p = load.layer_prb_power_w;
            for layer in 0..2 {
                let panel = &h.panels[layer];
                let mut beam_sum = 0.0;
                let mut expected_sum = 0.0;
                let mut self_gain = 0.0;
                for &(dir, n_on_dir) in &load.dir_ue_counts {
                    let gain = beam_amplitude_gain(panel, &csirs_books[ci].codewords[dir])?;
                    beam_sum += gain;
                    expected_sum += gain * n_on_dir as f64;
                    if ci == sc && dir == pass_a.csirs_direction {
                        self_gain = gain;
                    }
                }
                if ci == sc {
                    signal[layer] = beta * self_gain * p;
                    if config.scheduling_mode == SchedulingMode::PaperLiteral {
                        // Co-scheduled beams of the serving cell, one per
                        // active direction, excluding the UE's own.
                        interference[layer] += beta * (beam_sum - self_gain) * p;
                    }
                } else {
                    let other = match config.scheduling_mode {
                        // Every active beam of the interfering cell is live.
                        SchedulingMode::PaperLiteral => beam_sum,
                        // Round-robin FDM: expectation over which UE the
                        // interfering cell schedules on this PRB.
                        SchedulingMode::Orthogonal => {
                            expected_sum / load.ue_indices.len() as f64
                        }
                    };
                    interference[layer] += beta * other * p;
                }
            }
        }
        for layer in 0..2 {
            per_group[layer].push(signal[layer] / (interference[layer] + noise_w));
        }
    }
    let eff = [
        effective_sinr(&per_group[0])?,
        effective_sinr(&per_group[1])?,
    ];
    let rate = ue_rate(
        serving.n_prb,
        serving.prb_bandwidth_hz,
        &[n_ue_layer, n_ue_layer],
        &eff,
    )?;
    Ok((eff, rate))
}

fn run_drop(config: &ScenarioConfig, drop: u32) -> Result<(Vec<UeRecord>, Deployment)> {
    let (ues, hotspot_centers) = drop_ues(config, drop)?;
    let deployment = build_deployment(config, &hotspot_centers)?;
    let cells = &deployment.cells;

    let ssb_books: Vec<Codebook> = cells.iter().map(ssb_codebook).collect::<Result<_>>()?;
    let csirs_books: Vec<Codebook> = cells.iter().map(csirs_codebook).collect::<Result<_>>()?;
    let shadows: Vec<CellShadow> = cells
        .iter()
        .map(|c| {
            let mut rng = substream(config.seed, &[drop as u64, tag::SHADOW, c.id as u64]);
            CellShadow::new(
                PropModel::for_site_kind(c.site_kind),
                config.channel.shadow_harmonics,
                &mut rng,
            )
        })
        .collect();

    let pass_a: Vec<PassA> = ues
        .par_iter()
        .map(|ue| evaluate_ue(config, drop, ue, cells, &shadows, &ssb_books, &csirs_books))
        .collect::<Result<_>>()?;

    let loads = cell_loads(config, cells, &pass_a)?;

    let records: Vec<UeRecord> = ues
        .par_iter()
        .zip(pass_a.par_iter())
        .map(|(ue, pa)| {
            let (eff, rate) =
                evaluate_link(config, drop, ue, cells, &csirs_books, pa, &loads)?;
            Ok(UeRecord {
                drop,
                ue_id: ue.id,
                tier: ue.tier,
                serving_tech: pa.assoc.technology,
                serving_cell: pa.assoc.serving_cell,
                ssb_beam: pa.assoc.serving_ssb_beam,
                csirs_beam: pa.csirs_direction,
                sinr_eff_db: [
                    10.0 * eff[0].max(1e-300).log10(),
                    10.0 * eff[1].max(1e-300).log10(),
                ],
                rate_bps: rate,
            })
        })
        .collect::<Result<_>>()?;

    Ok((records, deployment))
}

/// Runs all drops of a scenario configuration.
pub fn run(config: &ScenarioConfig) -> Result<ResultSet> {
    let start = Instant::now();
    let wrap = |e: SimError| SimError::Scenario {
        scenario: config.name.clone(),
        source: Box::new(e),
    };
    // Validate the layer list up front for a clean error surface.
    for layer in &config.layers {
        catalog_lookup(&layer.radio_type).map_err(wrap)?;
    }
    if config.layers.is_empty() {
        return Err(wrap(SimError::Config("no layers configured".into())));
    }

    let mut records = Vec::new();
    let mut power: Option<PowerReport> = None;
    for drop in 0..config.n_drops {
        let (drop_records, deployment) = run_drop(config, drop).map_err(wrap)?;
        records.extend(drop_records);
        if power.is_none() {
            let entries: Vec<_> = deployment
                .radios
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let params = config.power.params_for(r, &deployment.radio_techs[i]);
                    let tx: Vec<f64> = r
                        .cell_ids
                        .iter()
                        .map(|&cid| deployment.cells[cid as usize].tx_power_w)
                        .collect();
                    (r.clone(), params, tx)
                })
                .collect();
            power = Some(network_power(&entries).map_err(wrap)?);
        }
    }
    let rates: Vec<f64> = records.iter().map(|r| r.rate_bps / 1e6).collect();
    let percentiles = percentiles_of(&rates);
    let config_json = serde_json::to_vec(config).map_err(|e| SimError::Config(e.to_string()))?;
    Ok(ResultSet {
        scenario: config.name.clone(),
        config: config.clone(),
        config_hash: fnv_hash(&config_json),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_s: start.elapsed().as_secs_f64(),
        records,
        percentiles,
        power: power.expect("at least one drop"),
    })
}
