//! Named deployment strategies and the run configuration.

use crate::assoc::ReselectionPolicy;
use crate::channel::ChannelConfig;
use crate::error::{Result, SimError};
use crate::geometry::{SiteKind, TierCounts};
use crate::link::SchedulingMode;
use crate::power::PowerConfig;
use serde::{Deserialize, Serialize};

pub const SCENARIO_NAMES: [&str; 7] = [
    "4G UMa",
    "5G UMa",
    "[4G UMa + 5G UMa]",
    "4G UMa + 5G UMi (UMa BS)",
    "4G UMa + 5G UMi",
    "4G UMa + [5G UMi + 6G UMi]",
    "4G UMa + 5G UMi + 6G HS",
];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PlanSpec {
    /// Hexagonal grid centered at the origin.
    Hex {
        isd_m: f64,
        n_tiers: u32,
        kind: SiteKind,
    },
    /// One site at the center of each UE hotspot.
    HotspotSites,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LayerSpec {
    pub radio_type: String,
    pub plan: PlanSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct HotspotConfig {
    pub count: u32,
    pub region_radius_m: f64,
    pub radius_m: f64,
    pub min_separation_m: f64,
    pub ues_per_hotspot: u32,
}

impl Default for HotspotConfig {
    fn default() -> Self {
        HotspotConfig {
            count: 19,
            region_radius_m: 500.0,
            radius_m: 40.0,
            min_separation_m: 80.0,
            ues_per_hotspot: 30,
        }
    }
}

/// The UE drop geometry is scenario-independent: a two-tier UMa macro area
/// with tiered per-sector counts plus hotspots.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct UeDistribution {
    pub isd_m: f64,
    pub n_tiers: u32,
    pub tier_counts: TierCounts,
    pub hotspots: HotspotConfig,
}

impl Default for UeDistribution {
    fn default() -> Self {
        UeDistribution {
            isd_m: 500.0,
            n_tiers: 2,
            tier_counts: TierCounts::default(),
            hotspots: HotspotConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub name: String,
    pub layers: Vec<LayerSpec>,
    pub ue_distribution: UeDistribution,
    pub reselection: ReselectionPolicy,
    pub seed: u64,
    pub n_drops: u32,
    pub scheduling_mode: SchedulingMode,
    pub channel: ChannelConfig,
    pub power: PowerConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "custom".into(),
            layers: Vec::new(),
            ue_distribution: UeDistribution::default(),
            reselection: ReselectionPolicy::default(),
            seed: 1,
            n_drops: 10,
            scheduling_mode: SchedulingMode::PaperLiteral,
            channel: ChannelConfig::default(),
            power: PowerConfig::default(),
        }
    }
}

fn uma_grid() -> PlanSpec {
    PlanSpec::Hex {
        isd_m: 500.0,
        n_tiers: 2,
        kind: SiteKind::UMa,
    }
}

fn umi_grid() -> PlanSpec {
    PlanSpec::Hex {
        isd_m: 200.0,
        n_tiers: 2,
        kind: SiteKind::UMi,
    }
}

fn layer(radio_type: &str, plan: PlanSpec) -> LayerSpec {
    LayerSpec {
        radio_type: radio_type.into(),
        plan,
    }
}

/// Expands one of the seven named deployment strategies.
pub fn expand_scenario(name: &str) -> Result<ScenarioConfig> {
    let layers = match name {
        "4G UMa" => vec![layer("4G macro", uma_grid())],
        "5G UMa" => vec![layer("5G macro", uma_grid())],
        "[4G UMa + 5G UMa]" => vec![layer("4G/5G macro", uma_grid())],
        "4G UMa + 5G UMi (UMa BS)" => vec![
            layer("4G macro", uma_grid()),
            layer("5G macro", umi_grid()),
        ],
        "4G UMa + 5G UMi" => vec![
            layer("4G macro", uma_grid()),
            layer("5G micro", umi_grid()),
        ],
        "4G UMa + [5G UMi + 6G UMi]" => vec![
            layer("4G macro", uma_grid()),
            layer("5G/6G micro", umi_grid()),
        ],
        "4G UMa + 5G UMi + 6G HS" => vec![
            layer("4G macro", uma_grid()),
            layer("5G micro", umi_grid()),
            layer("6G pico", PlanSpec::HotspotSites),
        ],
        _ => {
            return Err(SimError::UnknownScenario {
                name: name.to_string(),
                valid: SCENARIO_NAMES.join(", "),
            })
        }
    };
    Ok(ScenarioConfig {
        name: name.to_string(),
        layers,
        ..Default::default()
    })
}
