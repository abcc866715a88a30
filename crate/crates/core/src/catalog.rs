//! The seven radio types and their instantiation into radios and cells.

use crate::error::{Result, SimError};
use crate::geometry::{Point2, SiteKind, SitePlan, SECTOR_BORESIGHTS_DEG};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Technology {
    #[serde(rename = "4G")]
    FourG,
    #[serde(rename = "5G")]
    FiveG,
    #[serde(rename = "6G")]
    SixG,
}

impl Technology {
    /// Reselection priority: 4G lowest, 6G highest.
    pub fn priority(self) -> u8 {
        match self {
            Technology::FourG => 0,
            Technology::FiveG => 1,
            Technology::SixG => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Technology::FourG => "4G",
            Technology::FiveG => "5G",
            Technology::SixG => "6G",
        }
    }

    /// Planar array layout (horizontal columns, vertical rows) per polarization.
    pub fn array_dims(self) -> (usize, usize) {
        match self {
            Technology::FourG => (2, 2),
            Technology::FiveG => (8, 4),
            Technology::SixG => (16, 4),
        }
    }
}

/// Per-technology parameters of a radio type (one Table row slice).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TechParams {
    pub technology: Technology,
    pub carrier_ghz: f64,
    pub bandwidth_mhz: f64,
    pub n_prb: u32,
    pub n_trx: u32,
    pub n_elements: u32,
    pub n_ssb_beams: u32,
    pub n_csirs_beams: u32,
    pub tx_power_dbm: f64,
    /// Subcarrier spacing, kHz; PRB bandwidth is 12 subcarriers.
    pub scs_khz: f64,
}

impl TechParams {
    pub fn prb_bandwidth_hz(&self) -> f64 {
        self.scs_khz * 1e3 * 12.0
    }

    pub fn tx_power_w(&self) -> f64 {
        10f64.powf((self.tx_power_dbm - 30.0) / 10.0)
    }
}

/// Power-amplifier/unit class of a radio, used to pick power-model defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadioClass {
    Macro,
    Micro,
    Pico,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioType {
    pub name: String,
    pub techs: Vec<TechParams>,
    pub cells_supported: u32,
    pub class: RadioClass,
}

impl RadioType {
    pub fn is_multiband(&self) -> bool {
        self.techs.len() > 1
    }
}

fn tech(
    technology: Technology,
    carrier_ghz: f64,
    bandwidth_mhz: f64,
    n_prb: u32,
    n_trx: u32,
    n_ssb: u32,
    n_csirs: u32,
    tx_power_dbm: f64,
    scs_khz: f64,
) -> TechParams {
    TechParams {
        technology,
        carrier_ghz,
        bandwidth_mhz,
        n_prb,
        n_trx,
        n_elements: n_trx,
        n_ssb_beams: n_ssb,
        n_csirs_beams: n_csirs,
        tx_power_dbm,
        scs_khz,
    }
}

fn lte_macro() -> TechParams {
    tech(Technology::FourG, 2.0, 20.0, 100, 8, 4, 8, 46.0, 15.0)
}
fn nr_macro() -> TechParams {
    tech(Technology::FiveG, 3.5, 100.0, 273, 64, 8, 64, 49.0, 30.0)
}
fn nr_micro() -> TechParams {
    tech(Technology::FiveG, 3.5, 100.0, 273, 64, 8, 32, 44.0, 30.0)
}
fn sixg_micro() -> TechParams {
    tech(Technology::SixG, 10.0, 200.0, 273, 128, 16, 128, 44.0, 60.0)
}
fn sixg_pico() -> TechParams {
    tech(Technology::SixG, 10.0, 200.0, 273, 128, 16, 128, 41.0, 60.0)
}

/// The seven catalog entries.
pub fn catalog() -> Vec<RadioType> {
    vec![
        RadioType {
            name: "4G macro".into(),
            techs: vec![lte_macro()],
            cells_supported: 3,
            class: RadioClass::Macro,
        },
        RadioType {
            name: "5G macro".into(),
            techs: vec![nr_macro()],
            cells_supported: 3,
            class: RadioClass::Macro,
        },
        RadioType {
            name: "5G micro".into(),
            techs: vec![nr_micro()],
            cells_supported: 3,
            class: RadioClass::Micro,
        },
        RadioType {
            name: "6G micro".into(),
            techs: vec![sixg_micro()],
            cells_supported: 3,
            class: RadioClass::Micro,
        },
        RadioType {
            name: "6G pico".into(),
            techs: vec![sixg_pico()],
            cells_supported: 3,
            class: RadioClass::Pico,
        },
        RadioType {
            name: "4G/5G macro".into(),
            techs: vec![lte_macro(), nr_macro()],
            cells_supported: 6,
            class: RadioClass::Macro,
        },
        RadioType {
            name: "5G/6G micro".into(),
            techs: vec![nr_micro(), sixg_micro()],
            cells_supported: 6,
            class: RadioClass::Micro,
        },
    ]
}

pub fn catalog_lookup(name: &str) -> Result<RadioType> {
    catalog()
        .into_iter()
        .find(|r| r.name == name)
        .ok_or_else(|| SimError::CatalogMiss(name.to_string()))
}

/// One sector transmitter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Cell {
    pub id: u32,
    pub radio_id: u32,
    pub technology: Technology,
    pub site: Point2,
    pub bs_height_m: f64,
    pub boresight_deg: f64,
    pub m_h: usize,
    pub m_v: usize,
    pub carrier_hz: f64,
    pub n_prb: u32,
    pub prb_bandwidth_hz: f64,
    pub tx_power_w: f64,
    pub priority: u8,
    pub n_ssb_beams: u32,
    pub n_csirs_beams: u32,
    /// Propagation model variant follows the deployment kind (hotspots use UMi).
    pub site_kind: SiteKind,
}

impl Cell {
    /// Elements per polarization panel.
    pub fn panel_size(&self) -> usize {
        self.m_h * self.m_v
    }

    /// Per-resource-element SSB power, watts (time-multiplexed beams at full
    /// cell power spectral density).
    pub fn ssb_re_power_w(&self) -> f64 {
        self.tx_power_w / (12.0 * self.n_prb as f64)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadioUnit {
    pub id: u32,
    pub type_name: String,
    pub class: RadioClass,
    pub multiband: bool,
    pub site: Point2,
    pub cell_ids: Vec<u32>,
    /// TRX counts per technology, used by the power model.
    pub trx_counts: Vec<u32>,
}

/// Instantiates one radio per site of the plan, with three cells per
/// technology at the standard tri-sector boresights.
pub fn instantiate_layer(
    plan: &SitePlan,
    radio_type: &RadioType,
    first_radio_id: u32,
    first_cell_id: u32,
) -> Result<(Vec<RadioUnit>, Vec<Cell>)> {
    if plan.sites.is_empty() {
        return Err(SimError::InvalidParameter {
            name: "plan",
            reason: "site plan has no sites".into(),
        });
    }
    let mut radios = Vec::with_capacity(plan.sites.len());
    let mut cells = Vec::new();
    let mut cell_id = first_cell_id;
    for (i, &site) in plan.sites.iter().enumerate() {
        let radio_id = first_radio_id + i as u32;
        let mut cell_ids = Vec::with_capacity(radio_type.cells_supported as usize);
        for params in &radio_type.techs {
            let (m_h, m_v) = params.technology.array_dims();
            for &boresight in &SECTOR_BORESIGHTS_DEG {
                cells.push(Cell {
                    id: cell_id,
                    radio_id,
                    technology: params.technology,
                    site,
                    bs_height_m: plan.bs_height_m(),
                    boresight_deg: boresight,
                    m_h,
                    m_v,
                    carrier_hz: params.carrier_ghz * 1e9,
                    n_prb: params.n_prb,
                    prb_bandwidth_hz: params.prb_bandwidth_hz(),
                    tx_power_w: params.tx_power_w(),
                    priority: params.technology.priority(),
                    n_ssb_beams: params.n_ssb_beams,
                    n_csirs_beams: params.n_csirs_beams,
                    site_kind: plan.kind,
                });
                cell_ids.push(cell_id);
                cell_id += 1;
            }
        }
        radios.push(RadioUnit {
            id: radio_id,
            type_name: radio_type.name.clone(),
            class: radio_type.class,
            multiband: radio_type.is_multiband(),
            site,
            cell_ids,
            trx_counts: radio_type.techs.iter().map(|t| t.n_trx).collect(),
        });
    }
    Ok((radios, cells))
}
