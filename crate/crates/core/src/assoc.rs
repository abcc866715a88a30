//! SSB RSRP measurement, cell association, priority-based reselection, and
//! CSI-RS serving-beam selection.

use crate::beams::{beam_amplitude_gain, Codebook};
use crate::catalog::{Cell, Technology};
use crate::channel::SmallScale;
use crate::error::{Result, SimError};
use serde::{Deserialize, Serialize};

pub fn watt_to_dbm(w: f64) -> f64 {
    10.0 * (w * 1e3).log10()
}

#[derive(Debug, Clone, Copy)]
pub struct RsrpMeasurement {
    pub ue_id: u32,
    pub cell_id: u32,
    pub beam_index: usize,
    pub rsrp_dbm: f64,
    pub technology: Technology,
    pub priority: u8,
}

#[derive(Debug, Clone, Copy)]
pub struct AssociationState {
    pub ue_id: u32,
    pub serving_cell: u32,
    pub serving_ssb_beam: usize,
    pub rsrp_dbm: f64,
    pub technology: Technology,
}

/// Serving CSI-RS direction: the same per-panel codeword applied to both
/// polarization panels, giving the UE its two MIMO layers.
#[derive(Debug, Clone, Copy)]
pub struct BeamAssignment {
    pub ue_id: u32,
    pub serving_cell: u32,
    pub csirs_direction: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReselectionPolicy {
    pub enabled: bool,
    pub threshold_5g_dbm: f64,
    pub threshold_6g_dbm: f64,
}

impl Default for ReselectionPolicy {
    fn default() -> Self {
        ReselectionPolicy {
            enabled: true,
            threshold_5g_dbm: -110.0,
            threshold_6g_dbm: -108.0,
        }
    }
}

impl ReselectionPolicy {
    pub fn threshold_dbm(&self, tech: Technology) -> f64 {
        match tech {
            Technology::FourG => f64::NEG_INFINITY,
            Technology::FiveG => self.threshold_5g_dbm,
            Technology::SixG => self.threshold_6g_dbm,
        }
    }
}

/// One RSRP measurement per SSB beam of the cell (single-panel codebook,
/// panel 0 by convention): rsrp = beta |h w|^2 p_ssb.
pub fn measure_rsrp_with_beta(
    ue_id: u32,
    cell: &Cell,
    beta_linear: f64,
    h: &SmallScale,
    ssb: &Codebook,
) -> Result<Vec<RsrpMeasurement>> {
    let p_re_w = cell.ssb_re_power_w();
    let mut out = Vec::with_capacity(ssb.len());
    for (beam_index, w) in ssb.codewords.iter().enumerate() {
        let gain = beam_amplitude_gain(&h.panels[0], w)?;
        let rsrp_w = beta_linear * gain * p_re_w;
        out.push(RsrpMeasurement {
            ue_id,
            cell_id: cell.id,
            beam_index,
            rsrp_dbm: watt_to_dbm(rsrp_w),
            technology: cell.technology,
            priority: cell.priority,
        });
    }
    Ok(out)
}

fn better(a: &RsrpMeasurement, b: &RsrpMeasurement) -> bool {
    // Strictly stronger wins; exact ties break to lowest cell id then beam.
    if a.rsrp_dbm != b.rsrp_dbm {
        return a.rsrp_dbm > b.rsrp_dbm;
    }
    (a.cell_id, a.beam_index) < (b.cell_id, b.beam_index)
}

/// Argmax over all (cell, beam) measurements.
pub fn associate_strongest(measurements: &[RsrpMeasurement]) -> Result<AssociationState> {
    let best = measurements
        .iter()
        .fold(None::<&RsrpMeasurement>, |acc, m| match acc {
            Some(cur) if !better(m, cur) => Some(cur),
            _ => Some(m),
        })
        .ok_or_else(|| {
            SimError::NoCoverage(measurements.first().map(|m| m.ue_id).unwrap_or(0))
        })?;
    Ok(AssociationState {
        ue_id: best.ue_id,
        serving_cell: best.cell_id,
        serving_ssb_beam: best.beam_index,
        rsrp_dbm: best.rsrp_dbm,
        technology: best.technology,
    })
}

/// Priority-based reselection: among technologies whose best beam clears that
/// technology's threshold, serve on the highest priority; fall back to the
/// plain argmax when nothing qualifies.
pub fn priority_reselect(
    measurements: &[RsrpMeasurement],
    policy: &ReselectionPolicy,
) -> Result<AssociationState> {
    if !policy.enabled {
        return associate_strongest(measurements);
    }
    let mut chosen: Option<&RsrpMeasurement> = None;
    let mut chosen_priority: i32 = -1;
    for tech in [Technology::SixG, Technology::FiveG, Technology::FourG] {
        let threshold = policy.threshold_dbm(tech);
        let best = measurements
            .iter()
            .filter(|m| m.technology == tech)
            .fold(None::<&RsrpMeasurement>, |acc, m| match acc {
                Some(cur) if !better(m, cur) => Some(cur),
                _ => Some(m),
            });
        if let Some(m) = best {
            if m.rsrp_dbm >= threshold && (tech.priority() as i32) > chosen_priority {
                chosen = Some(m);
                chosen_priority = tech.priority() as i32;
            }
        }
    }
    match chosen {
        Some(m) => Ok(AssociationState {
            ue_id: m.ue_id,
            serving_cell: m.cell_id,
            serving_ssb_beam: m.beam_index,
            rsrp_dbm: m.rsrp_dbm,
            technology: m.technology,
        }),
        None => associate_strongest(measurements),
    }
}

/// Strongest CSI-RS direction on the serving cell, summed over the two
/// polarization panels.
pub fn select_csirs_beam(
    ue_id: u32,
    serving_cell: &Cell,
    beta_linear: f64,
    h: &SmallScale,
    csirs: &Codebook,
) -> Result<BeamAssignment> {
    let mut best = 0usize;
    let mut best_gain = f64::NEG_INFINITY;
    for (i, w) in csirs.codewords.iter().enumerate() {
        let gain =
            beam_amplitude_gain(&h.panels[0], w)? + beam_amplitude_gain(&h.panels[1], w)?;
        if gain > best_gain {
            best_gain = gain;
            best = i;
        }
    }
    let _ = beta_linear; // common scale cannot change the argmax
    Ok(BeamAssignment {
        ue_id,
        serving_cell: serving_cell.id,
        csirs_direction: best,
    })
}

/// Renders the association table as CSV:
/// ue_id, serving_cell, technology, ssb_beam, csirs_beam, rsrp_dbm.
/// States and beam assignments are zipped by position.
pub fn association_table_csv(states: &[AssociationState], beams: &[BeamAssignment]) -> String {
    let mut out = String::from("ue_id,serving_cell,technology,ssb_beam,csirs_beam,rsrp_dbm\n");
    for (s, b) in states.iter().zip(beams) {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            s.ue_id,
            s.serving_cell,
            s.technology.label(),
            s.serving_ssb_beam,
            b.csirs_direction,
            s.rsrp_dbm
        ));
    }
    out
}
