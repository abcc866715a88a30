//! Propagation: LOS probability, path loss, correlated shadow fading, element
//! gain, O2I penetration, and Rician small-scale channel vectors.

use crate::catalog::Cell;
use crate::error::{Result, SimError};
use crate::geometry::{Point2, SiteKind, Ue};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Statistical propagation model variant. Hotspot deployments use UMi.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropModel {
    UMa,
    UMi,
}

impl PropModel {
    pub fn for_site_kind(kind: SiteKind) -> Self {
        match kind {
            SiteKind::UMa => PropModel::UMa,
            SiteKind::UMi | SiteKind::Hotspot => PropModel::UMi,
        }
    }

    /// Shadow fading std (dB) and decorrelation distance (m).
    pub fn shadow_params(self, los: bool) -> (f64, f64) {
        match (self, los) {
            (PropModel::UMa, true) => (4.0, 37.0),
            (PropModel::UMa, false) => (6.0, 50.0),
            (PropModel::UMi, true) => (4.0, 10.0),
            (PropModel::UMi, false) => (7.82, 13.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Rician K for LOS links, dB. NLOS links are pure Rayleigh.
    pub rician_k_db: f64,
    pub noise_figure_db: f64,
    pub temperature_k: f64,
    /// Independent small-scale draws across the PRB axis.
    pub n_prb_groups: usize,
    /// Harmonics per shadow random field.
    pub shadow_harmonics: usize,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            rician_k_db: 9.0,
            noise_figure_db: 9.0,
            temperature_k: 290.0,
            n_prb_groups: 1,
            shadow_harmonics: 256,
        }
    }
}

impl ChannelConfig {
    /// Per-PRB noise power, watts.
    pub fn noise_power_w(&self, prb_bandwidth_hz: f64) -> f64 {
        BOLTZMANN
            * self.temperature_k
            * prb_bandwidth_hz
            * 10f64.powf(self.noise_figure_db / 10.0)
    }
}

/// LOS probability at a given 2D distance and UE height (meters).
pub fn los_probability(model: PropModel, d2d: f64, ue_height_m: f64) -> f64 {
    if d2d <= 18.0 {
        return 1.0;
    }
    match model {
        PropModel::UMa => {
            let base = 18.0 / d2d + (-d2d / 63.0).exp() * (1.0 - 18.0 / d2d);
            let c = if ue_height_m <= 13.0 {
                0.0
            } else {
                (((ue_height_m.min(23.0) - 13.0) / 10.0) as f64).powf(1.5)
            };
            let boost = 1.0 + c * 1.25 * (d2d / 100.0).powi(3) * (-d2d / 150.0).exp();
            (base * boost).clamp(0.0, 1.0)
        }
        PropModel::UMi => 18.0 / d2d + (-d2d / 36.0).exp() * (1.0 - 18.0 / d2d),
    }
}

fn breakpoint_distance(fc_hz: f64, bs_height_m: f64, ue_height_m: f64) -> f64 {
    // Effective environment height 1 m for both UMa and UMi.
    let h_bs = (bs_height_m - 1.0).max(0.0);
    let h_ut = (ue_height_m - 1.0).max(0.0);
    4.0 * h_bs * h_ut * fc_hz / SPEED_OF_LIGHT
}

/// Path loss in dB (loss positive). NLOS takes the max of the LOS and NLOS
/// formulas.
pub fn path_loss_db(
    model: PropModel,
    fc_hz: f64,
    d2d: f64,
    bs_height_m: f64,
    ue_height_m: f64,
    los: bool,
) -> Result<f64> {
    let fc_ghz = fc_hz / 1e9;
    if !(0.5..=100.0).contains(&fc_ghz) {
        return Err(SimError::ModelDomain(fc_ghz));
    }
    let d2d = d2d.max(10.0);
    let dh = bs_height_m - ue_height_m;
    let d3d = (d2d.powi(2) + dh.powi(2)).sqrt();
    let d_bp = breakpoint_distance(fc_hz, bs_height_m, ue_height_m);
    let pl_los = match model {
        PropModel::UMa => {
            if d2d <= d_bp {
                28.0 + 22.0 * d3d.log10() + 20.0 * fc_ghz.log10()
            } else {
                28.0 + 40.0 * d3d.log10() + 20.0 * fc_ghz.log10()
                    - 9.0 * (d_bp.powi(2) + dh.powi(2)).log10()
            }
        }
        PropModel::UMi => {
            if d2d <= d_bp {
                32.4 + 21.0 * d3d.log10() + 20.0 * fc_ghz.log10()
            } else {
                32.4 + 40.0 * d3d.log10() + 20.0 * fc_ghz.log10()
                    - 9.5 * (d_bp.powi(2) + dh.powi(2)).log10()
            }
        }
    };
    if los {
        return Ok(pl_los);
    }
    let pl_nlos = match model {
        PropModel::UMa => {
            13.54 + 39.08 * d3d.log10() + 20.0 * fc_ghz.log10() - 0.6 * (ue_height_m - 1.5)
        }
        PropModel::UMi => {
            22.4 + 35.3 * d3d.log10() + 21.3 * fc_ghz.log10() - 0.3 * (ue_height_m - 1.5)
        }
    };
    Ok(pl_los.max(pl_nlos))
}

/// O2I penetration loss, low-loss building model.
pub fn o2i_loss_db(fc_hz: f64, d2d_indoor_m: f64) -> f64 {
    let f = fc_hz / 1e9;
    let l_glass = 2.0 + 0.2 * f;
    let l_concrete = 5.0 + 4.0 * f;
    let tw = 5.0
        - 10.0
            * (0.3 * 10f64.powf(-l_glass / 10.0) + 0.7 * 10f64.powf(-l_concrete / 10.0)).log10();
    tw + 0.5 * d2d_indoor_m
}

/// 3GPP single-element pattern: 65 degree HPBW in both planes, 30 dB floor,
/// 8 dBi peak. Offsets are from the cell boresight (horizontal) and from the
/// 90 degree vertical boresight.
pub fn element_gain_dbi(az_offset_deg: f64, el_offset_deg: f64) -> f64 {
    let az = wrap_deg(az_offset_deg);
    let a_h = (12.0 * (az / 65.0).powi(2)).min(30.0);
    let a_v = (12.0 * (el_offset_deg / 65.0).powi(2)).min(30.0);
    8.0 - (a_h + a_v).min(30.0)
}

fn wrap_deg(a: f64) -> f64 {
    let mut a = a % 360.0;
    if a > 180.0 {
        a -= 360.0;
    } else if a < -180.0 {
        a += 360.0;
    }
    a
}

/// UE angles seen from a cell: horizontal offset from boresight (degrees,
/// wrapped) and zenith angle (degrees, 90 = horizon).
pub fn relative_angles(cell: &Cell, ue: &Ue) -> (f64, f64) {
    let az = (ue.y - cell.site.y).atan2(ue.x - cell.site.x).to_degrees();
    let az_off = wrap_deg(az - cell.boresight_deg);
    let d2d = cell.site.dist(&ue.position()).max(1e-9);
    let zenith = (d2d).atan2(cell.bs_height_m - ue.z).to_degrees();
    (az_off, zenith)
}

/// Large-scale link state per (UE, cell) pair.
#[derive(Debug, Clone, Copy)]
pub struct LargeScale {
    pub path_loss_db: f64,
    pub shadow_db: f64,
    pub elem_gain_db: f64,
    pub o2i_loss_db: f64,
    pub los: bool,
    pub beta_linear: f64,
}

/// Combines Eq.-(1) style terms into the linear large-scale gain.
pub fn large_scale_gain(
    path_loss_db: f64,
    shadow_db: f64,
    elem_gain_db: f64,
    o2i_loss_db: f64,
    los: bool,
) -> LargeScale {
    let beta_db = -path_loss_db + shadow_db + elem_gain_db - o2i_loss_db;
    LargeScale {
        path_loss_db,
        shadow_db,
        elem_gain_db,
        o2i_loss_db,
        los,
        beta_linear: 10f64.powf(beta_db / 10.0),
    }
}

/// Full large-scale evaluation for a (UE, cell) pair.
pub fn link_large_scale(
    cell: &Cell,
    ue: &Ue,
    shadow_db: f64,
    los: bool,
) -> Result<LargeScale> {
    let model = PropModel::for_site_kind(cell.site_kind);
    let d2d = cell.site.dist(&ue.position());
    let pl = path_loss_db(model, cell.carrier_hz, d2d, cell.bs_height_m, ue.z, los)?;
    let (az_off, zenith) = relative_angles(cell, ue);
    let g = element_gain_dbi(az_off, zenith - 90.0);
    let o2i = if ue.indoor {
        o2i_loss_db(cell.carrier_hz, ue.d2d_indoor_m)
    } else {
        0.0
    };
    Ok(large_scale_gain(pl, shadow_db, g, o2i, los))
}

/// Isotropic Gaussian random field with exponential autocorrelation
/// exp(l2 dist / d_corr), realized as a sum of random plane waves.
///
/// Marginal variance is exactly sigma^2 in expectation; evaluation is a pure
/// function of position, so coincident points get equal values.
#[derive(Debug, Clone)]
pub struct ShadowField {
    sigma_db: f64,
    scale: f64,
    waves: Vec<(f64, f64, f64)>, // (kx, ky, phase)
}

impl ShadowField {
    pub fn new(sigma_db: f64, d_corr_m: f64, n_harmonics: usize, rng: &mut impl Rng) -> Self {
        let mut waves = Vec::with_capacity(n_harmonics);
        for _ in 0..n_harmonics {
            // Radial spectral measure of the 2D exponential covariance:
            // F(k) = 1 - (1 + (d_corr k)^2)^{-1/2}, inverted analytically.
            let u: f64 = rng.gen::<f64>().min(1.0 - 1e-12);
            let k = ((1.0 / (1.0 - u)).powi(2) - 1.0).sqrt() / d_corr_m;
            let theta = rng.gen::<f64>() * 2.0 * PI;
            let phase = rng.gen::<f64>() * 2.0 * PI;
            waves.push((k * theta.cos(), k * theta.sin(), phase));
        }
        ShadowField {
            sigma_db,
            scale: (2.0 / n_harmonics as f64).sqrt(),
            waves,
        }
    }

    pub fn sample(&self, p: Point2) -> f64 {
        let sum: f64 = self
            .waves
            .iter()
            .map(|&(kx, ky, phase)| (kx * p.x + ky * p.y + phase).cos())
            .sum();
        self.sigma_db * self.scale * sum
    }
}

/// Per-cell pair of shadow fields (LOS and NLOS statistics).
#[derive(Debug, Clone)]
pub struct CellShadow {
    pub los: ShadowField,
    pub nlos: ShadowField,
}

impl CellShadow {
    pub fn new(model: PropModel, n_harmonics: usize, rng: &mut impl Rng) -> Self {
        let (s_los, d_los) = model.shadow_params(true);
        let (s_nlos, d_nlos) = model.shadow_params(false);
        CellShadow {
            los: ShadowField::new(s_los, d_los, n_harmonics, rng),
            nlos: ShadowField::new(s_nlos, d_nlos, n_harmonics, rng),
        }
    }

    pub fn sample(&self, p: Point2, los: bool) -> f64 {
        if los {
            self.los.sample(p)
        } else {
            self.nlos.sample(p)
        }
    }
}

/// Small-scale channel: one complex vector per polarization panel.
///
/// Cross-polarized panels are isolated, so the stacked length-2M vectors of
/// the two receive paths occupy disjoint blocks and are orthogonal.
#[derive(Debug, Clone)]
pub struct SmallScale {
    pub panels: [Vec<Complex64>; 2],
    pub rician_k_linear: f64,
}

impl SmallScale {
    /// Stacked length-2M representation of the given polarization column.
    pub fn stacked(&self, panel: usize) -> Vec<Complex64> {
        let m = self.panels[panel].len();
        let mut v = vec![Complex64::new(0.0, 0.0); 2 * m];
        v[panel * m..(panel + 1) * m].copy_from_slice(&self.panels[panel]);
        v
    }
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; one value per call keeps draws independent of vector layout.
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Plane-wave steering phases over the panel toward the UE, unit magnitude.
pub fn steering_vector(cell: &Cell, ue: &Ue) -> Vec<Complex64> {
    let (az_off, zenith) = relative_angles(cell, ue);
    let (az, zen) = (az_off.to_radians(), zenith.to_radians());
    // Half-wavelength spacing: per-index phase increments in the horizontal
    // (panel columns) and vertical (panel rows) directions.
    let psi_h = PI * zen.sin() * az.sin();
    let psi_v = PI * zen.cos();
    let mut v = Vec::with_capacity(cell.panel_size());
    for i_v in 0..cell.m_v {
        for i_h in 0..cell.m_h {
            let phase = psi_h * i_h as f64 + psi_v * i_v as f64;
            v.push(Complex64::from_polar(1.0, phase));
        }
    }
    v
}

/// Draws the Rician small-scale channel for a (UE, cell) pair.
///
/// `k_linear` may be infinite (pure LOS) or zero (pure Rayleigh).
pub fn small_scale(cell: &Cell, ue: &Ue, k_linear: f64, rng: &mut impl Rng) -> SmallScale {
    let steer = steering_vector(cell, ue);
    let m = steer.len();
    let (los_w, nlos_w) = if k_linear.is_infinite() {
        (1.0, 0.0)
    } else {
        (
            (k_linear / (1.0 + k_linear)).sqrt(),
            (1.0 / (1.0 + k_linear)).sqrt(),
        )
    };
    let mut panels: [Vec<Complex64>; 2] = [Vec::with_capacity(m), Vec::with_capacity(m)];
    for (p, panel) in panels.iter_mut().enumerate() {
        // 90-degree phase shift between the polarization panels' LOS parts.
        let pol_phase = Complex64::from_polar(1.0, PI / 2.0 * p as f64);
        for los in steer.iter() {
            let nlos = Complex64::new(standard_normal(rng), standard_normal(rng))
                / 2f64.sqrt();
            panel.push(los_w * los * pol_phase + nlos_w * nlos);
        }
    }
    SmallScale {
        panels,
        rician_k_linear: k_linear,
    }
}
