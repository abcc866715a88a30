//! Per-PRB SINR, effective SINR via the mutual-information map, and the
//! achievable UE rate.

use crate::beams::beam_amplitude_gain;
use crate::error::{Result, SimError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How a cell's transmit power and intra-cell interference are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchedulingMode {
    /// All UEs of a cell co-scheduled on every PRB; the intra-cell sum is live
    /// and power splits across every co-scheduled layer.
    #[serde(rename = "paper-literal")]
    PaperLiteral,
    /// Round-robin FDM: no intra-cell term, power splits across the two
    /// layers of the scheduled UE only.
    #[serde(rename = "orthogonal")]
    Orthogonal,
}

/// Uniform power split: P_TX / (n_prb * n_scheduled_layers), watts per
/// (layer, PRB).
pub fn split_power(tx_power_w: f64, n_prb: u32, n_scheduled_layers: u32) -> Result<f64> {
    if n_prb == 0 || n_scheduled_layers == 0 {
        return Err(SimError::InvalidParameter {
            name: "split_power",
            reason: format!("n_prb={n_prb}, n_scheduled_layers={n_scheduled_layers}"),
        });
    }
    Ok(tx_power_w / (n_prb as f64 * n_scheduled_layers as f64))
}

/// One transmission arriving at the victim from some cell: the beam's
/// codeword and its per-(layer, PRB) power.
pub struct BeamTx<'a> {
    pub codeword: &'a [Complex64],
    pub power_w: f64,
}

/// Everything the victim hears from one cell on one polarization panel.
pub struct CellContribution<'a> {
    pub beta_linear: f64,
    pub h_panel: &'a [Complex64],
    pub beams: &'a [BeamTx<'a>],
}

/// Downlink SINR of one (UE, layer, PRB) following the displayed ratio:
/// serving-beam power over intra-cell plus inter-cell interference plus noise.
///
/// The caller supplies the panel-`l` channel columns; cross-polarized panels
/// are isolated so only same-panel beams contribute.
pub fn sinr(
    serving: &CellContribution,
    self_beam: &BeamTx,
    intra: &[BeamTx],
    inter: &[CellContribution],
    noise_w: f64,
) -> Result<f64> {
    let signal = serving.beta_linear
        * beam_amplitude_gain(serving.h_panel, self_beam.codeword)?
        * self_beam.power_w;
    let mut denom = noise_w;
    for b in intra {
        denom +=
            serving.beta_linear * beam_amplitude_gain(serving.h_panel, b.codeword)? * b.power_w;
    }
    for cell in inter {
        for b in cell.beams {
            denom +=
                cell.beta_linear * beam_amplitude_gain(cell.h_panel, b.codeword)? * b.power_w;
        }
    }
    Ok(signal / denom)
}

/// Capacity-domain average of per-PRB SINRs: C^-1(mean C(g)) with
/// C(x) = log2(1 + x).
pub fn effective_sinr(per_prb: &[f64]) -> Result<f64> {
    if per_prb.is_empty() {
        return Err(SimError::InvalidParameter {
            name: "per_prb",
            reason: "empty PRB set".into(),
        });
    }
    let mean_ci =
        per_prb.iter().map(|g| (1.0 + g).log2()).sum::<f64>() / per_prb.len() as f64;
    Ok(2f64.powf(mean_ci) - 1.0)
}

/// Achievable rate (bit/s): per-layer bandwidth share times log2(1 + g_eff).
pub fn ue_rate(
    n_prb: u32,
    prb_bandwidth_hz: f64,
    n_ue_per_layer: &[u32],
    eff_sinr_per_layer: &[f64],
) -> Result<f64> {
    if n_ue_per_layer.len() != eff_sinr_per_layer.len() {
        return Err(SimError::InvalidParameter {
            name: "ue_rate",
            reason: "layer count mismatch".into(),
        });
    }
    let mut rate = 0.0;
    for (&n_ue, &g) in n_ue_per_layer.iter().zip(eff_sinr_per_layer) {
        if n_ue == 0 {
            return Err(SimError::InvalidParameter {
                name: "n_ue_per_layer",
                reason: "layer with zero associated UEs".into(),
            });
        }
        rate += n_prb as f64 * prb_bandwidth_hz / n_ue as f64 * (1.0 + g).log2();
    }
    Ok(rate)
}
