//! Site layouts and UE drops.
//!
//! Hexagonal macro grids, hotspot placement with minimum separation, and the
//! inhomogeneous UE distribution (80/40/20 UEs per sector by tier plus 30 UEs
//! per hotspot).

use crate::error::{Result, SimError};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SiteKind {
    UMa,
    UMi,
    Hotspot,
}

/// A set of base-station site positions sharing a deployment kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SitePlan {
    pub sites: Vec<Point2>,
    pub isd: f64,
    pub n_tiers: u32,
    pub kind: SiteKind,
}

impl SitePlan {
    /// BS antenna height for this deployment kind.
    pub fn bs_height_m(&self) -> f64 {
        match self.kind {
            SiteKind::UMa => 25.0,
            SiteKind::UMi | SiteKind::Hotspot => 10.0,
        }
    }

    /// Minimum 2D UE-site distance enforced when dropping UEs.
    pub fn min_ue_dist_m(&self) -> f64 {
        match self.kind {
            SiteKind::UMa => 35.0,
            SiteKind::UMi | SiteKind::Hotspot => 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TierLabel {
    Center,
    Tier1,
    Tier2,
    Hotspot,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ue {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub indoor: bool,
    /// Depth into the building for indoor UEs, meters (0 when outdoor).
    pub d2d_indoor_m: f64,
    pub tier: TierLabel,
    pub n_rx_antennas: u8,
}

impl Ue {
    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hotspot {
    pub center: Point2,
    pub radius_m: f64,
    pub ue_count: u32,
}

/// UEs per sector for the center site and the two tiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TierCounts {
    pub center: u32,
    pub tier1: u32,
    pub tier2: u32,
}

impl Default for TierCounts {
    fn default() -> Self {
        TierCounts {
            center: 80,
            tier1: 40,
            tier2: 20,
        }
    }
}

/// Horizontal sector boresights of a tri-sector site, degrees.
pub const SECTOR_BORESIGHTS_DEG: [f64; 3] = [30.0, 150.0, 270.0];

const INDOOR_PROBABILITY: f64 = 0.8;
const MAX_FLOOR: u32 = 4;

/// Builds a hexagonal grid of `1 + 3 n (n + 1)` sites around `origin`.
///
/// Sites are enumerated ring by ring so index 0 is the origin, indices 1..7
/// are tier 1, and so on. Nearest-neighbor spacing equals `isd`.
pub fn build_hex_grid(isd: f64, n_tiers: u32, origin: Point2) -> Result<SitePlan> {
    if !(isd > 0.0) {
        return Err(SimError::InvalidParameter {
            name: "isd",
            reason: format!("must be positive, got {isd}"),
        });
    }
    // Axial hex coordinates on a triangular lattice.
    let ax = |q: i64, r: i64| {
        Point2::new(
            origin.x + isd * (q as f64 + r as f64 / 2.0),
            origin.y + isd * (r as f64 * 3f64.sqrt() / 2.0),
        )
    };
    let mut sites = vec![origin];
    for ring in 1..=n_tiers as i64 {
        // Walk the ring starting from (ring, -ring) through the six edges.
        let mut q = ring;
        let mut r = -ring;
        const DIRS: [(i64, i64); 6] = [(0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0)];
        for dir in DIRS {
            for _ in 0..ring {
                sites.push(ax(q, r));
                q += dir.0;
                r += dir.1;
            }
        }
    }
    Ok(SitePlan {
        sites,
        isd,
        n_tiers,
        kind: SiteKind::UMa,
    })
}

/// Ring index of a site by its position in the ring-ordered enumeration.
pub fn tier_of_site(index: usize) -> u32 {
    let mut i = index;
    let mut ring = 0u32;
    loop {
        let ring_len = if ring == 0 { 1 } else { 6 * ring as usize };
        if i < ring_len {
            return ring;
        }
        i -= ring_len;
        ring += 1;
    }
}

fn in_hexagon(p: Point2, center: Point2, isd: f64) -> bool {
    // Voronoi hexagon of the triangular lattice: flat edges face neighbors at
    // 0/60/120 degrees, apothem isd/2.
    let dx = p.x - center.x;
    let dy = p.y - center.y;
    let half = isd / 2.0 + 1e-12;
    for k in 0..3 {
        let ang = PI / 3.0 * k as f64;
        if (dx * ang.cos() + dy * ang.sin()).abs() > half {
            return false;
        }
    }
    true
}

/// True when the UE position falls inside sector `s` of the site's hexagon.
pub fn in_sector(p: Point2, site: Point2, isd: f64, sector: usize) -> bool {
    if !in_hexagon(p, site, isd) {
        return false;
    }
    let ang = (p.y - site.y).atan2(p.x - site.x).to_degrees();
    let rel = (ang - SECTOR_BORESIGHTS_DEG[sector]).rem_euclid(360.0);
    rel < 60.0 || rel >= 300.0
}

fn sample_indoor_state(rng: &mut impl Rng) -> (bool, f64, f64) {
    if rng.gen::<f64>() < INDOOR_PROBABILITY {
        let floor = rng.gen_range(1..=MAX_FLOOR);
        let depth = rng.gen::<f64>() * 25.0;
        (true, 1.5 + 3.0 * (floor - 1) as f64, depth)
    } else {
        (false, 1.5, 0.0)
    }
}

/// Drops macro-area UEs uniformly within each sector's hexagonal wedge.
pub fn drop_macro_ues(
    plan: &SitePlan,
    counts: TierCounts,
    first_id: u32,
    rng: &mut impl Rng,
) -> Vec<Ue> {
    let mut ues = Vec::new();
    let mut id = first_id;
    let circumradius = plan.isd / 3f64.sqrt();
    for (site_idx, &site) in plan.sites.iter().enumerate() {
        let tier = tier_of_site(site_idx);
        let (count, label) = match tier {
            0 => (counts.center, TierLabel::Center),
            1 => (counts.tier1, TierLabel::Tier1),
            _ => (counts.tier2, TierLabel::Tier2),
        };
        for sector in 0..3 {
            for _ in 0..count {
                // Rejection sample from the bounding circle into the wedge,
                // honoring the minimum 2D distance to the site.
                let p = loop {
                    let r = circumradius * rng.gen::<f64>().sqrt();
                    let a = rng.gen::<f64>() * 2.0 * PI;
                    let cand = Point2::new(site.x + r * a.cos(), site.y + r * a.sin());
                    if in_sector(cand, site, plan.isd, sector)
                        && cand.dist(&site) >= plan.min_ue_dist_m()
                    {
                        break cand;
                    }
                };
                let (indoor, z, depth) = sample_indoor_state(rng);
                ues.push(Ue {
                    id,
                    x: p.x,
                    y: p.y,
                    z,
                    indoor,
                    d2d_indoor_m: depth,
                    tier: label,
                    n_rx_antennas: 2,
                });
                id += 1;
            }
        }
    }
    ues
}

const PLACEMENT_RETRY_CAP: usize = 20_000;

/// Places `n` hotspot centers uniformly in a disc with pairwise separation,
/// then drops UEs uniformly in each hotspot disc. Hotspot UEs are outdoor.
pub fn drop_hotspots(
    n: u32,
    region_radius_m: f64,
    hs_radius_m: f64,
    min_sep_m: f64,
    ues_per_hotspot: u32,
    first_id: u32,
    rng: &mut impl Rng,
) -> Result<(Vec<Hotspot>, Vec<Ue>)> {
    let mut centers: Vec<Point2> = Vec::with_capacity(n as usize);
    let mut attempts = 0usize;
    while centers.len() < n as usize {
        if attempts >= PLACEMENT_RETRY_CAP {
            return Err(SimError::PlacementExhausted {
                attempts,
                constraint: format!(
                    "{n} hotspot centers with {min_sep_m} m separation in a {region_radius_m} m disc"
                ),
            });
        }
        attempts += 1;
        let r = region_radius_m * rng.gen::<f64>().sqrt();
        let a = rng.gen::<f64>() * 2.0 * PI;
        let cand = Point2::new(r * a.cos(), r * a.sin());
        if centers.iter().all(|c| c.dist(&cand) >= min_sep_m) {
            centers.push(cand);
        }
    }

    let min_dist: f64 = 10.0; // hotspot pico minimum UE distance
    let mut ues = Vec::with_capacity((n * ues_per_hotspot) as usize);
    let mut hotspots = Vec::with_capacity(n as usize);
    let mut id = first_id;
    for center in centers {
        for _ in 0..ues_per_hotspot {
            // Uniform over the annulus [min_dist, hs_radius].
            let r2 = rng.gen::<f64>() * (hs_radius_m.powi(2) - min_dist.powi(2)) + min_dist.powi(2);
            let r = r2.sqrt();
            let a = rng.gen::<f64>() * 2.0 * PI;
            ues.push(Ue {
                id,
                x: center.x + r * a.cos(),
                y: center.y + r * a.sin(),
                z: 1.5,
                indoor: false,
                d2d_indoor_m: 0.0,
                tier: TierLabel::Hotspot,
                n_rx_antennas: 2,
            });
            id += 1;
        }
        hotspots.push(Hotspot {
            center,
            radius_m: hs_radius_m,
            ue_count: ues_per_hotspot,
        });
    }
    Ok((hotspots, ues))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn hex_grid_site_counts() {
        for (tiers, expected) in [(0u32, 1usize), (1, 7), (2, 19), (3, 37)] {
            let plan = build_hex_grid(500.0, tiers, Point2::ORIGIN).unwrap();
            assert_eq!(plan.sites.len(), expected, "tiers = {tiers}");
        }
    }

    #[test]
    fn hex_grid_nearest_neighbor_is_isd() {
        for isd in [200.0, 500.0] {
            let plan = build_hex_grid(isd, 2, Point2::ORIGIN).unwrap();
            for (i, a) in plan.sites.iter().enumerate() {
                let nn = plan
                    .sites
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, b)| a.dist(b))
                    .fold(f64::INFINITY, f64::min);
                assert!((nn - isd).abs() < 1e-6, "site {i}: nn = {nn}");
            }
        }
    }

    #[test]
    fn hex_grid_rejects_bad_isd() {
        assert!(build_hex_grid(0.0, 2, Point2::ORIGIN).is_err());
        assert!(build_hex_grid(-10.0, 2, Point2::ORIGIN).is_err());
    }

    #[test]
    fn zero_tiers_single_site() {
        let plan = build_hex_grid(500.0, 0, Point2::ORIGIN).unwrap();
        assert_eq!(plan.sites.len(), 1);
        assert_eq!(plan.sites[0], Point2::ORIGIN);
    }

    #[test]
    fn tier_labels_by_ring() {
        assert_eq!(tier_of_site(0), 0);
        for i in 1..7 {
            assert_eq!(tier_of_site(i), 1);
        }
        for i in 7..19 {
            assert_eq!(tier_of_site(i), 2);
        }
    }

    #[test]
    fn macro_drop_paper_counts() {
        let plan = build_hex_grid(500.0, 2, Point2::ORIGIN).unwrap();
        let mut rng = substream(7, &[0]);
        let ues = drop_macro_ues(&plan, TierCounts::default(), 0, &mut rng);
        assert_eq!(ues.len(), 1680);
        let center = ues.iter().filter(|u| u.tier == TierLabel::Center).count();
        let t1 = ues.iter().filter(|u| u.tier == TierLabel::Tier1).count();
        let t2 = ues.iter().filter(|u| u.tier == TierLabel::Tier2).count();
        assert_eq!((center, t1, t2), (240, 720, 720));
    }

    #[test]
    fn macro_drop_single_sector_in_central_hexagon() {
        let plan = build_hex_grid(500.0, 2, Point2::ORIGIN).unwrap();
        let mut rng = substream(7, &[1]);
        let counts = TierCounts {
            center: 1,
            tier1: 0,
            tier2: 0,
        };
        let ues = drop_macro_ues(&plan, counts, 0, &mut rng);
        assert_eq!(ues.len(), 3);
        for ue in &ues {
            assert!(in_hexagon(ue.position(), Point2::ORIGIN, 500.0));
        }
    }

    #[test]
    fn macro_drop_ues_inside_their_sector() {
        let plan = build_hex_grid(500.0, 2, Point2::ORIGIN).unwrap();
        let mut rng = substream(9, &[2]);
        let ues = drop_macro_ues(&plan, TierCounts::default(), 0, &mut rng);
        // Sector index recoverable from the drop order: per site, 3 blocks.
        let mut it = ues.iter();
        for (site_idx, site) in plan.sites.iter().enumerate() {
            let count = match tier_of_site(site_idx) {
                0 => 80,
                1 => 40,
                _ => 20,
            };
            for sector in 0..3 {
                for _ in 0..count {
                    let ue = it.next().unwrap();
                    assert!(in_sector(ue.position(), *site, plan.isd, sector));
                    assert!(ue.position().dist(site) >= 35.0);
                    assert!(ue.z >= 1.5);
                }
            }
        }
    }

    #[test]
    fn macro_drop_deterministic() {
        let plan = build_hex_grid(500.0, 2, Point2::ORIGIN).unwrap();
        let a = drop_macro_ues(&plan, TierCounts::default(), 0, &mut substream(11, &[3]));
        let b = drop_macro_ues(&plan, TierCounts::default(), 0, &mut substream(11, &[3]));
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((x.x, x.y, x.z, x.indoor), (y.x, y.y, y.z, y.indoor));
        }
    }

    #[test]
    fn hotspot_drop_paper_counts_and_separation() {
        let mut rng = substream(13, &[4]);
        let (hs, ues) = drop_hotspots(19, 500.0, 40.0, 80.0, 30, 0, &mut rng).unwrap();
        assert_eq!(hs.len(), 19);
        assert_eq!(ues.len(), 570);
        for (i, a) in hs.iter().enumerate() {
            assert!(a.center.dist(&Point2::ORIGIN) <= 500.0);
            for b in &hs[i + 1..] {
                assert!(a.center.dist(&b.center) >= 80.0);
            }
        }
        for ue in &ues {
            let within = hs.iter().any(|h| h.center.dist(&ue.position()) <= 40.0);
            assert!(within);
            assert!(!ue.indoor);
        }
    }

    #[test]
    fn single_hotspot() {
        let mut rng = substream(13, &[5]);
        let (hs, ues) = drop_hotspots(1, 500.0, 40.0, 80.0, 30, 0, &mut rng).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(ues.len(), 30);
        for ue in &ues {
            assert!(hs[0].center.dist(&ue.position()) <= 40.0);
        }
    }

    #[test]
    fn infeasible_hotspot_packing_errors() {
        let mut rng = substream(13, &[6]);
        let err = drop_hotspots(100, 100.0, 40.0, 80.0, 1, 0, &mut rng).unwrap_err();
        assert!(matches!(err, SimError::PlacementExhausted { .. }));
    }
}
