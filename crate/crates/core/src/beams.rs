//! 2D-DFT beam codebooks over cross-polarized planar arrays.

use crate::catalog::Cell;
use crate::error::{Result, SimError};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodebookKind {
    Ssb,
    CsiRs,
}

/// A set of unit-norm codewords over an M_h x M_v panel.
///
/// Codewords are shared between polarization panels; `polarization_panels`
/// records how many panels transmit them (1 for SSB, 2 for CSI-RS).
#[derive(Debug, Clone)]
pub struct Codebook {
    pub kind: CodebookKind,
    pub m_h: usize,
    pub m_v: usize,
    pub o_h: usize,
    pub o_v: usize,
    pub polarization_panels: u8,
    /// Signed DFT indices (p', q') of each codeword.
    pub directions: Vec<(i32, i32)>,
    pub codewords: Vec<Vec<Complex64>>,
    pub boresight_az_deg: f64,
    pub boresight_el_deg: f64,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Total beam count as reported against the catalog (CSI-RS counts both
    /// polarizations).
    pub fn beam_count(&self) -> usize {
        self.codewords.len() * self.polarization_panels as usize
    }

    /// Nominal pointing direction of codeword `i` in the global frame:
    /// (azimuth deg, zenith deg).
    pub fn beam_direction_deg(&self, i: usize) -> (f64, f64) {
        let (p, q) = self.directions[i];
        let sin_az = (2.0 * p as f64 / (self.o_h * self.m_h) as f64).clamp(-1.0, 1.0);
        let cos_zen = (2.0 * q as f64 / (self.o_v * self.m_v) as f64).clamp(-1.0, 1.0);
        (
            self.boresight_az_deg + sin_az.asin().to_degrees(),
            cos_zen.acos().to_degrees(),
        )
    }
}

fn signed_index(p: usize, n: usize) -> i32 {
    if 2 * p < n {
        p as i32
    } else {
        p as i32 - n as i32
    }
}

fn dft_codeword(m_h: usize, m_v: usize, o_h: usize, o_v: usize, p: usize, q: usize) -> Vec<Complex64> {
    let norm = 1.0 / ((m_h * m_v) as f64).sqrt();
    let mut w = Vec::with_capacity(m_h * m_v);
    for i_v in 0..m_v {
        for i_h in 0..m_h {
            let phase = -2.0
                * PI
                * (i_h as f64 * p as f64 / (o_h * m_h) as f64
                    + i_v as f64 * q as f64 / (o_v * m_v) as f64);
            w.push(Complex64::from_polar(norm, phase));
        }
    }
    w
}

/// Vertical row indices ordered from broadside outwards.
fn vertical_rows_by_centrality(m_v: usize, o_v: usize) -> Vec<usize> {
    let n = o_v * m_v;
    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by(|&a, &b| {
        let fa = 2.0 * signed_index(a, n) as f64 / n as f64;
        let fb = 2.0 * signed_index(b, n) as f64 / n as f64;
        fa.abs()
            .partial_cmp(&fb.abs())
            .unwrap()
            .then(fa.partial_cmp(&fb).unwrap())
    });
    rows
}

/// Full oversampled 2D-DFT codebook (O_h M_h x O_v M_v directions).
pub fn build_dft_codebook(
    m_h: usize,
    m_v: usize,
    o_h: usize,
    o_v: usize,
    boresight_az_deg: f64,
    boresight_el_deg: f64,
) -> Result<Codebook> {
    if m_h == 0 || m_v == 0 || o_h == 0 || o_v == 0 {
        return Err(SimError::InvalidParameter {
            name: "codebook dims",
            reason: format!("m_h={m_h}, m_v={m_v}, o_h={o_h}, o_v={o_v}"),
        });
    }
    let mut directions = Vec::new();
    let mut codewords = Vec::new();
    for q in 0..o_v * m_v {
        for p in 0..o_h * m_h {
            directions.push((signed_index(p, o_h * m_h), signed_index(q, o_v * m_v)));
            codewords.push(dft_codeword(m_h, m_v, o_h, o_v, p, q));
        }
    }
    Ok(Codebook {
        kind: CodebookKind::CsiRs,
        m_h,
        m_v,
        o_h,
        o_v,
        polarization_panels: 2,
        directions,
        codewords,
        boresight_az_deg,
        boresight_el_deg,
    })
}

fn subset_codebook(
    cell: &Cell,
    kind: CodebookKind,
    rows: &[usize],
    cols_per_row: usize,
    panels: u8,
) -> Codebook {
    let (m_h, m_v) = (cell.m_h, cell.m_v);
    let mut directions = Vec::new();
    let mut codewords = Vec::new();
    for &q in rows {
        // Uniform horizontal subsample when fewer columns than M_h.
        for i in 0..cols_per_row {
            let p = i * m_h / cols_per_row;
            directions.push((signed_index(p, m_h), signed_index(q, m_v)));
            codewords.push(dft_codeword(m_h, m_v, 1, 1, p, q));
        }
    }
    Codebook {
        kind,
        m_h,
        m_v,
        o_h: 1,
        o_v: 1,
        polarization_panels: panels,
        directions,
        codewords,
        boresight_az_deg: cell.boresight_deg,
        boresight_el_deg: 90.0,
    }
}

/// Single-panel SSB codebook with exactly the catalog's beam count: the
/// horizontal DFT fan at the broadside vertical row, or the full 2D grid when
/// the count exceeds M_h (the 4G 2x2 case).
pub fn ssb_codebook(cell: &Cell) -> Result<Codebook> {
    let count = cell.n_ssb_beams as usize;
    let rows = vertical_rows_by_centrality(cell.m_v, 1);
    if count <= cell.m_h {
        if cell.m_h % count != 0 {
            return Err(SimError::InvalidParameter {
                name: "n_ssb_beams",
                reason: format!("{count} does not divide M_h={}", cell.m_h),
            });
        }
        Ok(subset_codebook(cell, CodebookKind::Ssb, &rows[..1], count, 1))
    } else if count == cell.m_h * cell.m_v {
        Ok(subset_codebook(cell, CodebookKind::Ssb, &rows, cell.m_h, 1))
    } else {
        Err(SimError::InvalidParameter {
            name: "n_ssb_beams",
            reason: format!(
                "{count} not representable on a {}x{} panel",
                cell.m_h, cell.m_v
            ),
        })
    }
}

/// Dual-panel CSI-RS codebook: |W^csi-rs|/2 directions, either the full DFT
/// grid or all M_h columns crossed with the two most central vertical rows.
pub fn csirs_codebook(cell: &Cell) -> Result<Codebook> {
    let n_directions = cell.n_csirs_beams as usize / 2;
    let rows = vertical_rows_by_centrality(cell.m_v, 1);
    if n_directions == cell.m_h * cell.m_v {
        Ok(subset_codebook(cell, CodebookKind::CsiRs, &rows, cell.m_h, 2))
    } else if n_directions == 2 * cell.m_h {
        Ok(subset_codebook(cell, CodebookKind::CsiRs, &rows[..2], cell.m_h, 2))
    } else {
        Err(SimError::InvalidParameter {
            name: "n_csirs_beams",
            reason: format!(
                "{} directions not representable on a {}x{} panel",
                n_directions, cell.m_h, cell.m_v
            ),
        })
    }
}

/// Linear power gain |h w|^2 of a codeword against one panel's channel.
pub fn beam_amplitude_gain(h_panel: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if h_panel.len() != w.len() {
        return Err(SimError::ShapeMismatch {
            channel: h_panel.len(),
            codeword: w.len(),
        });
    }
    let inner: Complex64 = h_panel.iter().zip(w).map(|(h, w)| h * w).sum();
    Ok(inner.norm_sqr())
}
