//! Property suites: codebook structure, SINR oracle equivalence, reselection
//! rule oracle, effective-SINR behavior, power-model structure, shadow-field
//! statistics, and end-to-end determinism across thread counts.

use fr3sim::assoc::{
    associate_strongest, priority_reselect, ReselectionPolicy, RsrpMeasurement,
};
use fr3sim::beams::{
    beam_amplitude_gain, build_dft_codebook, csirs_codebook, ssb_codebook, Codebook,
};
use fr3sim::catalog::{catalog, Cell, RadioClass, RadioUnit, Technology};
use fr3sim::channel::ShadowField;
use fr3sim::geometry::{Point2, SiteKind};
use fr3sim::link::{effective_sinr, sinr, BeamTx, CellContribution};
use fr3sim::power::{network_power, radio_power, PowerParams};
use fr3sim::rng::substream;
use num_complex::Complex64;
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Codebooks
// ---------------------------------------------------------------------------

fn cell_for(tech: &fr3sim::catalog::TechParams, id: u32) -> Cell {
    let (m_h, m_v) = tech.technology.array_dims();
    Cell {
        id,
        radio_id: 0,
        technology: tech.technology,
        site: Point2::ORIGIN,
        bs_height_m: 25.0,
        boresight_deg: 30.0,
        m_h,
        m_v,
        carrier_hz: tech.carrier_ghz * 1e9,
        n_prb: tech.n_prb,
        prb_bandwidth_hz: tech.prb_bandwidth_hz(),
        tx_power_w: tech.tx_power_w(),
        priority: tech.technology.priority(),
        n_ssb_beams: tech.n_ssb_beams,
        n_csirs_beams: tech.n_csirs_beams,
        site_kind: SiteKind::UMa,
    }
}

fn assert_unit_norm(book: &Codebook) {
    for w in &book.codewords {
        let norm: f64 = w.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12, "codeword norm {norm}");
    }
}

fn assert_pairwise_orthogonal(book: &Codebook) {
    for (i, a) in book.codewords.iter().enumerate() {
        for b in book.codewords.iter().skip(i + 1) {
            let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            assert!(ip.norm() < 1e-10, "inner product {}", ip.norm());
        }
    }
}

/// Sum of beam gains over a complete orthonormal codebook equals ||h||^2.
fn assert_parseval(book: &Codebook, dim: usize) {
    let mut rng = substream(7, &[dim as u64]);
    use rand::Rng;
    for _ in 0..20 {
        let h: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let total: f64 = book
            .codewords
            .iter()
            .map(|w| beam_amplitude_gain(&h, w).unwrap())
            .sum();
        let norm: f64 = h.iter().map(|c| c.norm_sqr()).sum();
        assert!(
            (total - norm).abs() <= 1e-10 * norm.max(1.0),
            "Parseval violated: {total} vs {norm}"
        );
    }
}

#[test]
fn codebooks_unit_norm_orthogonal_and_counted() {
    for radio in catalog() {
        for tech in &radio.techs {
            let cell = cell_for(tech, 0);
            let ssb = ssb_codebook(&cell).unwrap();
            let csirs = csirs_codebook(&cell).unwrap();
            // Catalog beam counts (CSI-RS counts both polarization panels).
            assert_eq!(ssb.beam_count(), tech.n_ssb_beams as usize, "{}", radio.name);
            assert_eq!(
                csirs.beam_count(),
                tech.n_csirs_beams as usize,
                "{}",
                radio.name
            );
            assert_unit_norm(&ssb);
            assert_unit_norm(&csirs);
            // Critically-sampled DFT subsets stay pairwise orthogonal.
            assert_pairwise_orthogonal(&ssb);
            assert_pairwise_orthogonal(&csirs);
            // When the CSI-RS grid covers the full panel it is complete.
            if csirs.len() == cell.m_h * cell.m_v {
                assert_parseval(&csirs, cell.m_h * cell.m_v);
            }
        }
    }
}

#[test]
fn full_dft_grid_is_complete_for_arbitrary_dims() {
    for (m_h, m_v) in [(1usize, 1usize), (2, 2), (4, 2), (8, 4), (16, 4)] {
        let book = build_dft_codebook(m_h, m_v, 1, 1, 30.0, 90.0).unwrap();
        assert_eq!(book.len(), m_h * m_v);
        assert_unit_norm(&book);
        assert_pairwise_orthogonal(&book);
        assert_parseval(&book, m_h * m_v);
    }
}

// ---------------------------------------------------------------------------
// Eq.-style SINR: brute-force oracle equivalence
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct RandomBeam {
    codeword: Vec<Complex64>,
    power_w: f64,
}

#[derive(Debug, Clone)]
struct RandomCell {
    beta: f64,
    h: Vec<Complex64>,
    beams: Vec<RandomBeam>,
}

fn complex_strategy() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn beam_strategy(dim: usize) -> impl Strategy<Value = RandomBeam> {
    (
        prop::collection::vec(complex_strategy(), dim),
        1e-6f64..10.0,
    )
        .prop_map(|(codeword, power_w)| RandomBeam { codeword, power_w })
}

fn cell_strategy(dim: usize, max_beams: usize) -> impl Strategy<Value = RandomCell> {
    (
        1e-15f64..1e-6,
        prop::collection::vec(complex_strategy(), dim),
        prop::collection::vec(beam_strategy(dim), 0..=max_beams),
    )
        .prop_map(|(beta, h, beams)| RandomCell { beta, h, beams })
}

/// Straight-line reimplementation of the displayed SINR ratio: the numerator
/// is the serving beam's received power and the denominator accumulates every
/// other beam term plus noise, with the inner product expanded by hand.
fn oracle_sinr(
    serving: &RandomCell,
    self_beam: &RandomBeam,
    intra: &[RandomBeam],
    inter: &[RandomCell],
    noise_w: f64,
) -> f64 {
    fn gain(h: &[Complex64], w: &[Complex64]) -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (hi, wi) in h.iter().zip(w) {
            // Row-times-column product h w, expanded into real arithmetic.
            re += hi.re * wi.re - hi.im * wi.im;
            im += hi.re * wi.im + hi.im * wi.re;
        }
        re * re + im * im
    }
    let signal = serving.beta * gain(&serving.h, &self_beam.codeword) * self_beam.power_w;
    let mut denom = noise_w;
    for b in intra {
        denom += serving.beta * gain(&serving.h, &b.codeword) * b.power_w;
    }
    for cell in inter {
        for b in &cell.beams {
            denom += cell.beta * gain(&cell.h, &b.codeword) * b.power_w;
        }
    }
    signal / denom
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sinr_matches_brute_force_oracle(
        dim in 1usize..=8,
        noise in 1e-18f64..1e-12,
        seed_cells in prop::collection::vec(cell_strategy(8, 3), 1..=3),
        self_power in 1e-6f64..10.0,
    ) {
        // Truncate every vector to the sampled dimension so all lengths agree.
        let cells: Vec<RandomCell> = seed_cells
            .into_iter()
            .map(|mut c| {
                c.h.truncate(dim);
                for b in &mut c.beams {
                    b.codeword.truncate(dim);
                }
                c
            })
            .collect();
        let serving = &cells[0];
        let self_beam = RandomBeam {
            codeword: serving.h.iter().map(|e| e.conj()).collect(),
            power_w: self_power,
        };
        let inter = &cells[1..];

        let self_tx = BeamTx { codeword: &self_beam.codeword, power_w: self_beam.power_w };
        let intra_tx: Vec<BeamTx> = serving
            .beams
            .iter()
            .map(|b| BeamTx { codeword: &b.codeword, power_w: b.power_w })
            .collect();
        let inter_beams: Vec<Vec<BeamTx>> = inter
            .iter()
            .map(|c| {
                c.beams
                    .iter()
                    .map(|b| BeamTx { codeword: &b.codeword, power_w: b.power_w })
                    .collect()
            })
            .collect();
        let inter_tx: Vec<CellContribution> = inter
            .iter()
            .zip(&inter_beams)
            .map(|(c, beams)| CellContribution {
                beta_linear: c.beta,
                h_panel: &c.h,
                beams,
            })
            .collect();
        let serving_tx = CellContribution {
            beta_linear: serving.beta,
            h_panel: &serving.h,
            beams: &[],
        };

        let got = sinr(&serving_tx, &self_tx, &intra_tx, &inter_tx, noise).unwrap();
        let want = oracle_sinr(serving, &self_beam, &serving.beams, inter, noise);
        let rel = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
        prop_assert!(rel <= 1e-10, "relative error {rel}: {got} vs {want}");
    }
}

// ---------------------------------------------------------------------------
// Priority reselection: rule oracle
// ---------------------------------------------------------------------------

fn tech_strategy() -> impl Strategy<Value = Technology> {
    prop_oneof![
        Just(Technology::FourG),
        Just(Technology::FiveG),
        Just(Technology::SixG),
    ]
}

fn measurement_strategy() -> impl Strategy<Value = RsrpMeasurement> {
    (0u32..40, 0usize..16, -150i32..-50, tech_strategy()).prop_map(
        |(cell_id, beam_index, rsrp, technology)| RsrpMeasurement {
            ue_id: 0,
            cell_id,
            beam_index,
            // Integer dBm grid so exact ties actually occur.
            rsrp_dbm: rsrp as f64,
            technology,
            priority: technology.priority(),
        },
    )
}

/// Literal restatement of the reselection rule, written without reusing any
/// library helper: walk technologies from highest to lowest priority, take
/// the first whose best beam clears its threshold, else plain argmax.
fn oracle_reselect(
    ms: &[RsrpMeasurement],
    policy: &ReselectionPolicy,
) -> (u32, usize, Technology) {
    let best_of = |tech: Option<Technology>| -> Option<&RsrpMeasurement> {
        let mut best: Option<&RsrpMeasurement> = None;
        for m in ms {
            if let Some(t) = tech {
                if m.technology != t {
                    continue;
                }
            }
            best = match best {
                None => Some(m),
                Some(cur) => {
                    if m.rsrp_dbm > cur.rsrp_dbm
                        || (m.rsrp_dbm == cur.rsrp_dbm
                            && (m.cell_id, m.beam_index) < (cur.cell_id, cur.beam_index))
                    {
                        Some(m)
                    } else {
                        Some(cur)
                    }
                }
            };
        }
        best
    };
    if policy.enabled {
        for tech in [Technology::SixG, Technology::FiveG, Technology::FourG] {
            if let Some(m) = best_of(Some(tech)) {
                if m.rsrp_dbm >= policy.threshold_dbm(tech) {
                    return (m.cell_id, m.beam_index, m.technology);
                }
            }
        }
    }
    let m = best_of(None).expect("non-empty");
    (m.cell_id, m.beam_index, m.technology)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reselection_matches_rule_oracle(
        ms in prop::collection::vec(measurement_strategy(), 1..=12),
        t5 in -130i32..-80,
        t6 in -130i32..-80,
        enabled in any::<bool>(),
    ) {
        let policy = ReselectionPolicy {
            enabled,
            threshold_5g_dbm: t5 as f64,
            threshold_6g_dbm: t6 as f64,
        };
        let got = priority_reselect(&ms, &policy).unwrap();
        let want = oracle_reselect(&ms, &policy);
        prop_assert_eq!(
            (got.serving_cell, got.serving_ssb_beam, got.technology),
            want
        );
        // Disabled policy is exactly the strongest-beam rule.
        if !enabled {
            let plain = associate_strongest(&ms).unwrap();
            prop_assert_eq!(got.serving_cell, plain.serving_cell);
            prop_assert_eq!(got.serving_ssb_beam, plain.serving_ssb_beam);
        }
    }
}

// ---------------------------------------------------------------------------
// Effective SINR
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn effective_sinr_properties(
        v in prop::collection::vec(1e-6f64..1e6, 1..64),
        bump_idx in any::<prop::sample::Index>(),
        bump in 0.0f64..100.0,
        c in 1e-6f64..1e6,
    ) {
        // Bounded by the min and max per-PRB SINR.
        let e = effective_sinr(&v).unwrap();
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(e >= min * (1.0 - 1e-12) && e <= max * (1.0 + 1e-12));

        // Fixed point on constant vectors.
        let flat = vec![c; v.len()];
        let ef = effective_sinr(&flat).unwrap();
        prop_assert!((ef - c).abs() <= 1e-9 * c.max(1.0));

        // Monotone in each coordinate.
        let mut bumped = v.clone();
        let i = bump_idx.index(bumped.len());
        bumped[i] += bump;
        prop_assert!(effective_sinr(&bumped).unwrap() >= e - 1e-12 * e.abs());
    }
}

// ---------------------------------------------------------------------------
// Power model
// ---------------------------------------------------------------------------

fn params_strategy() -> impl Strategy<Value = PowerParams> {
    (
        0.0f64..200.0,
        0.0f64..100.0,
        0.0f64..100.0,
        prop::collection::vec((1u32..=128, 0.0f64..8.0), 1..=2),
        0.0f64..5.0,
        0.05f64..1.0,
    )
        .prop_map(|(p_bbu_w, p_0_w, p_bb_w, trx, d_pa_w, eta)| {
            let m_pa_ac = trx.iter().map(|(n, _)| n).sum();
            PowerParams {
                p_bbu_w,
                p_0_w,
                p_bb_w,
                trx,
                d_pa_w,
                eta,
                m_pa_ac,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn power_additivity_linearity_monotonicity(
        params in params_strategy(),
        tx in prop::collection::vec(0.1f64..100.0, 1..=6),
        scale in 0.1f64..10.0,
    ) {
        let b = radio_power(&params, &tx).unwrap();

        // Additivity: the reported total is exactly the component sum.
        let sum = b.bbu_w + b.static_w + b.baseband_w + b.trx_w + b.pa_w + b.out_w;
        prop_assert!((b.total_w() - sum).abs() <= 1e-9 * sum.max(1.0));

        // Linearity in transmit power: only the PA output term scales.
        let scaled_tx: Vec<f64> = tx.iter().map(|p| p * scale).collect();
        let bs = radio_power(&params, &scaled_tx).unwrap();
        prop_assert!((bs.out_w - b.out_w * scale).abs() <= 1e-9 * bs.out_w.max(1.0));
        prop_assert!((bs.total_w() - b.total_w() - b.out_w * (scale - 1.0)).abs()
            <= 1e-9 * bs.total_w().max(1.0));

        // Monotone non-decreasing in every parameter (eta decreases power,
        // so monotone non-increasing there).
        let base = b.total_w();
        let mut p = params.clone();
        p.p_bbu_w += 1.0;
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() >= base);
        let mut p = params.clone();
        p.p_0_w += 1.0;
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() >= base);
        let mut p = params.clone();
        p.p_bb_w += 1.0;
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() >= base);
        let mut p = params.clone();
        p.d_pa_w += 1.0;
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() >= base);
        let mut p = params.clone();
        for (_, d) in &mut p.trx {
            *d += 1.0;
        }
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() >= base);
        let mut p = params.clone();
        p.eta = (p.eta * 1.1).min(1.0);
        prop_assert!(radio_power(&p, &tx).unwrap().total_w() <= base + 1e-9 * base);
    }
}

#[test]
fn network_power_sums_radios_and_layers() {
    let mk = |id: u32, name: &str| RadioUnit {
        id,
        type_name: name.to_string(),
        class: RadioClass::Macro,
        multiband: false,
        site: Point2::ORIGIN,
        trx_counts: vec![64],
        cell_ids: vec![],
    };
    let params = PowerParams {
        p_bbu_w: 100.0,
        p_0_w: 60.0,
        p_bb_w: 40.0,
        trx: vec![(64, 4.0)],
        d_pa_w: 2.0,
        eta: 0.35,
        m_pa_ac: 64,
    };
    let radios = vec![
        (mk(0, "5G macro"), params.clone(), vec![79.4, 79.4, 79.4]),
        (mk(1, "5G macro"), params.clone(), vec![79.4, 79.4, 79.4]),
        (mk(2, "4G macro"), params.clone(), vec![39.8]),
    ];
    let report = network_power(&radios).unwrap();
    let per_radio_sum: f64 = report.per_radio.iter().map(|r| r.total_w).sum();
    let per_layer_sum: f64 = report.per_layer_w.values().sum();
    assert!((report.total_w - per_radio_sum).abs() < 1e-9);
    assert!((report.total_w - per_layer_sum).abs() < 1e-9);
    assert_eq!(report.per_layer_w.len(), 2);
}

// ---------------------------------------------------------------------------
// Shadow field statistics
// ---------------------------------------------------------------------------

#[test]
fn shadow_field_std_and_autocorrelation() {
    let sigma = 8.0;
    let d_corr = 50.0;
    // Average over independent field realizations; each field is one frozen
    // draw of the random spectral sum.
    let n_fields = 200;
    let n_points = 200;
    let mut sum_sq = 0.0;
    let mut sum_lag = 0.0;
    let mut n = 0usize;
    for f in 0..n_fields {
        let mut rng = substream(99, &[f as u64]);
        let field = ShadowField::new(sigma, d_corr, 512, &mut rng);
        let mut pos_rng = substream(100, &[f as u64]);
        use rand::Rng;
        for _ in 0..n_points {
            let p = Point2::new(
                pos_rng.gen::<f64>() * 4000.0 - 2000.0,
                pos_rng.gen::<f64>() * 4000.0 - 2000.0,
            );
            let theta = pos_rng.gen::<f64>() * std::f64::consts::TAU;
            let q = Point2::new(p.x + d_corr * theta.cos(), p.y + d_corr * theta.sin());
            let a = field.sample(p);
            let b = field.sample(q);
            sum_sq += a * a;
            sum_lag += a * b;
            n += 1;
        }
    }
    let var = sum_sq / n as f64;
    let std = var.sqrt();
    // Lag-d_corr autocorrelation of the exponential model is exp(-1).
    let rho = sum_lag / n as f64 / var;
    assert!(
        (std - sigma).abs() < 0.05 * sigma,
        "sample std {std}, expected {sigma}"
    );
    let target = (-1.0f64).exp();
    assert!(
        (rho - target).abs() < 0.05,
        "lag-d_corr autocorrelation {rho}, expected {target}"
    );
}

// ---------------------------------------------------------------------------
// End-to-end determinism across thread counts
// ---------------------------------------------------------------------------

fn tiny_config() -> fr3sim::ScenarioConfig {
    let mut config = fr3sim::expand_scenario("4G UMa + [5G UMi + 6G UMi]").unwrap();
    config.seed = 20260826;
    config.n_drops = 2;
    config.ue_distribution.n_tiers = 1;
    config.ue_distribution.tier_counts = fr3sim::geometry::TierCounts {
        center: 3,
        tier1: 2,
        tier2: 2,
    };
    config.ue_distribution.hotspots.count = 1;
    config.ue_distribution.hotspots.ues_per_hotspot = 4;
    config
}

#[test]
fn determinism_across_thread_counts() {
    let config = tiny_config();
    let mut artifacts: Vec<(usize, Vec<u8>, Vec<u8>, Vec<u8>)> = Vec::new();
    for threads in [1usize, 4, 16] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let results = pool.install(|| fr3sim::run(&config)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        fr3sim::output::emit(&results, dir.path()).unwrap();
        artifacts.push((
            threads,
            std::fs::read(dir.path().join("per_ue.csv")).unwrap(),
            std::fs::read(dir.path().join("cdf.csv")).unwrap(),
            std::fs::read(dir.path().join("power.json")).unwrap(),
        ));
    }
    let (_, per_ue, cdf, power) = &artifacts[0];
    for (threads, p, c, w) in &artifacts[1..] {
        assert_eq!(per_ue, p, "per_ue.csv differs at {threads} threads");
        assert_eq!(cdf, c, "cdf.csv differs at {threads} threads");
        assert_eq!(power, w, "power.json differs at {threads} threads");
    }
}
