//! Radio-unit and network power consumption (multicarrier model).

use crate::catalog::{RadioClass, RadioUnit};
use crate::error::{Result, SimError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Parameters of the radio power model. Multiband radios carry summed TRX
/// terms and one shared set of static terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerParams {
    pub p_bbu_w: f64,
    pub p_0_w: f64,
    pub p_bb_w: f64,
    /// (TRX count, per-TRX watts) per technology hosted by the radio.
    pub trx: Vec<(u32, f64)>,
    pub d_pa_w: f64,
    pub eta: f64,
    /// Active PAs; defaults to the total TRX count (no sleep modes).
    pub m_pa_ac: u32,
}

impl PowerParams {
    pub fn m_trx_av(&self) -> u32 {
        self.trx.iter().map(|(n, _)| n).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(SimError::InvalidParameter {
                name: "eta",
                reason: format!("must be in (0, 1], got {}", self.eta),
            });
        }
        let fields = [self.p_bbu_w, self.p_0_w, self.p_bb_w, self.d_pa_w];
        if fields.iter().any(|v| *v < 0.0) || self.trx.iter().any(|(_, d)| *d < 0.0) {
            return Err(SimError::InvalidParameter {
                name: "power params",
                reason: "negative component".into(),
            });
        }
        if self.m_pa_ac > self.m_trx_av() {
            return Err(SimError::InvalidParameter {
                name: "m_pa_ac",
                reason: "active PAs exceed available TRXs".into(),
            });
        }
        Ok(())
    }
}

/// Calibration defaults per radio class; config-overridable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerConfig {
    pub p_bbu_w: f64,
    pub p_0_w: f64,
    pub p_bb_w: f64,
    pub multiband_bb_scale: f64,
    pub d_trx_4g_w: f64,
    pub d_trx_5g_w: f64,
    pub d_trx_6g_w: f64,
    pub d_pa_w: f64,
    pub eta: f64,
    /// Scale applied to the static terms (BBU, P0, BB, D_TRX, D_PA) of pico
    /// radios, reflecting their smaller form factor.
    pub pico_static_scale: f64,
}

impl Default for PowerConfig {
    fn default() -> Self {
        PowerConfig {
            p_bbu_w: 100.0,
            p_0_w: 60.0,
            p_bb_w: 40.0,
            multiband_bb_scale: 1.5,
            d_trx_4g_w: 1.5,
            d_trx_5g_w: 4.0,
            d_trx_6g_w: 2.5,
            d_pa_w: 2.0,
            eta: 0.35,
            pico_static_scale: 0.3,
        }
    }
}

impl PowerConfig {
    /// Builds the model parameters for a radio unit.
    pub fn params_for(&self, radio: &RadioUnit, techs: &[crate::catalog::Technology]) -> PowerParams {
        let static_scale = if radio.class == RadioClass::Pico {
            self.pico_static_scale
        } else {
            1.0
        };
        let bb_scale = if radio.multiband {
            self.multiband_bb_scale
        } else {
            1.0
        };
        let trx: Vec<(u32, f64)> = radio
            .trx_counts
            .iter()
            .zip(techs)
            .map(|(&n, tech)| {
                let d = match tech {
                    crate::catalog::Technology::FourG => self.d_trx_4g_w,
                    crate::catalog::Technology::FiveG => self.d_trx_5g_w,
                    crate::catalog::Technology::SixG => self.d_trx_6g_w,
                } * static_scale;
                (n, d)
            })
            .collect();
        let m_pa = trx.iter().map(|(n, _)| n).sum();
        PowerParams {
            p_bbu_w: self.p_bbu_w * static_scale,
            p_0_w: self.p_0_w * static_scale,
            p_bb_w: self.p_bb_w * bb_scale * static_scale,
            trx,
            d_pa_w: self.d_pa_w * static_scale,
            eta: self.eta,
            m_pa_ac: m_pa,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub bbu_w: f64,
    pub static_w: f64,
    pub baseband_w: f64,
    pub trx_w: f64,
    pub pa_w: f64,
    pub out_w: f64,
}

impl PowerBreakdown {
    pub fn total_w(&self) -> f64 {
        self.bbu_w + self.static_w + self.baseband_w + self.trx_w + self.pa_w + self.out_w
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadioPower {
    pub radio_id: u32,
    pub type_name: String,
    pub breakdown: PowerBreakdown,
    pub total_w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerReport {
    pub per_radio: Vec<RadioPower>,
    /// Totals grouped by radio type name.
    pub per_layer_w: BTreeMap<String, f64>,
    pub total_w: f64,
}

/// Power of one radio given the transmit powers of the cells it hosts.
pub fn radio_power(params: &PowerParams, cell_tx_w: &[f64]) -> Result<PowerBreakdown> {
    params.validate()?;
    let trx_w: f64 = params.trx.iter().map(|(n, d)| *n as f64 * d).sum();
    let pa_w = params.m_pa_ac as f64 * params.d_pa_w;
    let out_w = cell_tx_w.iter().sum::<f64>() / params.eta;
    Ok(PowerBreakdown {
        bbu_w: params.p_bbu_w,
        static_w: params.p_0_w,
        baseband_w: params.p_bb_w,
        trx_w,
        pa_w,
        out_w,
    })
}

/// Aggregates per-radio power into a network report.
pub fn network_power(
    radios: &[(RadioUnit, PowerParams, Vec<f64>)],
) -> Result<PowerReport> {
    let mut per_radio = Vec::with_capacity(radios.len());
    let mut per_layer: BTreeMap<String, f64> = BTreeMap::new();
    let mut total = 0.0;
    for (radio, params, tx) in radios {
        let breakdown = radio_power(params, tx)?;
        let w = breakdown.total_w();
        total += w;
        *per_layer.entry(radio.type_name.clone()).or_insert(0.0) += w;
        per_radio.push(RadioPower {
            radio_id: radio.id,
            type_name: radio.type_name.clone(),
            breakdown,
            total_w: w,
        });
    }
    Ok(PowerReport {
        per_radio,
        per_layer_w: per_layer,
        total_w: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn macro_5g_params() -> PowerParams {
        PowerParams {
            p_bbu_w: 100.0,
            p_0_w: 60.0,
            p_bb_w: 40.0,
            trx: vec![(64, 4.0)],
            d_pa_w: 2.0,
            eta: 0.35,
            m_pa_ac: 64,
        }
    }

    #[test]
    fn zero_output_leaves_static_sum() {
        let p = macro_5g_params();
        let b = radio_power(&p, &[0.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(b.out_w, 0.0);
        assert_relative_eq!(
            b.total_w(),
            100.0 + 60.0 + 40.0 + 64.0 * 4.0 + 64.0 * 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn output_term_linear_in_tx() {
        let p = macro_5g_params();
        let tx = [10.0, 11.0, 12.0];
        let doubled = [20.0, 22.0, 24.0];
        let a = radio_power(&p, &tx).unwrap();
        let b = radio_power(&p, &doubled).unwrap();
        assert_relative_eq!(b.out_w, 2.0 * a.out_w, epsilon = 1e-12);
        assert_relative_eq!(b.total_w() - b.out_w, a.total_w() - a.out_w, epsilon = 1e-12);
    }

    #[test]
    fn hand_computed_5g_macro_sum() {
        // Three cells at 49 dBm (79.433 W each).
        let p = macro_5g_params();
        let tx_w = 10f64.powf((49.0 - 30.0) / 10.0);
        let b = radio_power(&p, &[tx_w, tx_w, tx_w]).unwrap();
        let expect = 100.0 + 60.0 + 40.0 + 256.0 + 128.0 + 3.0 * tx_w / 0.35;
        assert_relative_eq!(b.total_w(), expect, epsilon = 1e-9);
        // Breakdown completeness.
        let parts = b.bbu_w + b.static_w + b.baseband_w + b.trx_w + b.pa_w + b.out_w;
        assert_relative_eq!(parts, b.total_w(), epsilon = 1e-12);
    }

    #[test]
    fn eta_zero_rejected() {
        let mut p = macro_5g_params();
        p.eta = 0.0;
        assert!(radio_power(&p, &[1.0]).is_err());
    }

    #[test]
    fn monotone_in_every_parameter() {
        let base = macro_5g_params();
        let tx = [50.0, 50.0, 50.0];
        let t0 = radio_power(&base, &tx).unwrap().total_w();
        for bump in 0..6 {
            let mut p = base.clone();
            match bump {
                0 => p.p_bbu_w += 10.0,
                1 => p.p_0_w += 10.0,
                2 => p.p_bb_w += 10.0,
                3 => p.trx[0].1 += 0.5,
                4 => p.d_pa_w += 0.5,
                _ => p.eta = (p.eta - 0.1).max(0.01), // lower efficiency costs more
            }
            assert!(radio_power(&p, &tx).unwrap().total_w() > t0, "bump {bump}");
        }
        let more_tx = [60.0, 50.0, 50.0];
        assert!(radio_power(&base, &more_tx).unwrap().total_w() > t0);
    }

    #[test]
    fn network_additivity() {
        use crate::catalog::{RadioClass, RadioUnit};
        use crate::geometry::Point2;
        let radio = RadioUnit {
            id: 0,
            type_name: "5G macro".into(),
            class: RadioClass::Macro,
            multiband: false,
            site: Point2::ORIGIN,
            cell_ids: vec![0, 1, 2],
            trx_counts: vec![64],
        };
        let mut second = radio.clone();
        second.id = 1;
        let entries = vec![
            (radio, macro_5g_params(), vec![50.0, 50.0, 50.0]),
            (second, macro_5g_params(), vec![50.0, 50.0, 50.0]),
        ];
        let report = network_power(&entries).unwrap();
        assert_relative_eq!(
            report.total_w,
            2.0 * report.per_radio[0].total_w,
            epsilon = 1e-12
        );
        let layer_sum: f64 = report.per_layer_w.values().sum();
        assert_relative_eq!(layer_sum, report.total_w, epsilon = 1e-9);

        let empty = network_power(&[]).unwrap();
        assert_relative_eq!(empty.total_w, 0.0);
    }
}
