//! Acceptance gate: one test per shipped guarantee, each printing a single
//! `ACCEPTANCE <n> PASS` line (run with `-- --nocapture` to see them all;
//! any failure prints the captured line alongside the panic).

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hoplan::channel::{self, ChannelParams};
use hoplan::commands::cmd_compare;
use hoplan::constellation::SatId;
use hoplan::eval::ComplexityReport;
use hoplan::geometry;
use hoplan::hograph::{
    build_graph, build_time_grid, normalize_utilities, CriteriaConfig, SatelliteInstance,
};
use hoplan::planner::{brute_force_plan, extract_plan, shortest_path};
use hoplan::scenario::load_scenario;

fn shipped_config() -> &'static Path {
    Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/config/starlink-phase1.example"
    ))
}

fn bare_instance(sat: u32, slot: usize, rate_bps: f64, delay_s: f64) -> SatelliteInstance {
    SatelliteInstance {
        sat_id: SatId(sat),
        slot_index: slot,
        samples: Vec::new(),
        mean_rate_bps: rate_bps,
        mean_delay_s: delay_s,
        utilities: Vec::new(),
        weight: f64::NAN,
    }
}

/// Random layered instance set: `n` slots with 1..=k_max instances each.
fn random_instances(rng: &mut ChaCha8Rng, n: usize, k_max: u32) -> Vec<SatelliteInstance> {
    let mut instances = Vec::new();
    for slot in 1..=n {
        let k = rng.gen_range(1..=k_max);
        for sat in 0..k {
            instances.push(bare_instance(
                sat,
                slot,
                rng.gen_range(1e5..1e8),
                rng.gen_range(1e-3..1e-2),
            ));
        }
    }
    instances
}

#[test]
fn acceptance_1_optimality_oracle() {
    let started = Instant::now();
    let criteria = CriteriaConfig::balanced();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let trials = 1_000;
    for trial in 0..trials {
        let n = rng.gen_range(1..=6);
        let mut instances = random_instances(&mut rng, n, 6);
        normalize_utilities(&mut instances, &criteria).unwrap();
        let graph = build_graph(instances, &criteria).unwrap();
        let fast = shortest_path(&graph).unwrap();
        let exact = brute_force_plan(&graph).unwrap();
        assert!(
            (fast.total_cost - exact.total_cost).abs() <= 1e-12,
            "trial {trial}: dijkstra {} vs brute force {}",
            fast.total_cost,
            exact.total_cost
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "optimality sweep took {elapsed:?}"
    );
    println!(
        "ACCEPTANCE 1 PASS: {trials} random layered graphs (k <= 6, n <= 6), \
         shortest path equals exhaustive enumeration within 1e-12, in {elapsed:?}"
    );
}

#[test]
fn acceptance_2_channel_chain_unit_values() {
    let params = ChannelParams::default();

    // Free-space term alone: strip fading and the Rician factor.
    let mut bare = params;
    bare.rician_factor = 1.0;
    let g_db = 10.0 * channel::channel_gain(550_000.0, 1.0, &bare).log10();
    assert!((g_db - -168.76).abs() <= 0.01, "free-space term {g_db} dB");

    let pd_ms = channel::propagation_delay(550_000.0) * 1e3;
    assert!((pd_ms - 1.8346).abs() <= 1e-4, "PD {pd_ms} ms");

    let a = channel::atmospheric_fading(params.orbit_altitude_m, &params);
    assert!((a - 1.03514).abs() <= 1e-5, "A(d = h) = {a}");

    let p_n = channel::noise_power(&params);
    assert!((p_n - 5.01e-14).abs() / 5.01e-14 <= 0.005, "P_N = {p_n} W");

    println!(
        "ACCEPTANCE 2 PASS: free-space {g_db:.2} dB, PD {pd_ms:.4} ms, \
         A {a:.5}, P_N {p_n:.3e} W"
    );
}

#[test]
fn acceptance_3_grid_and_handover_count() {
    // 30 minutes with lambda = 150 s gives exactly six slots.
    let grid = build_time_grid(1_800.0, 150.0).unwrap();
    assert_eq!(grid.slot_count(), 6);

    // Synthetic scenario whose optimum alternates satellites every slot:
    // the n-1 handover bound must be attained, never exceeded.
    let criteria = CriteriaConfig::balanced();
    let mut instances = Vec::new();
    for slot in 1..=6 {
        let cheap = (slot % 2) as u32; // sat 1 in odd slots, sat 0 in even
        for sat in 0..2u32 {
            let delay = if sat == cheap { 1e-3 } else { 9e-3 };
            instances.push(bare_instance(sat, slot, 5e6, delay));
        }
    }
    normalize_utilities(&mut instances, &criteria).unwrap();
    let graph = build_graph(instances, &criteria).unwrap();
    let solution = shortest_path(&graph).unwrap();
    let plan = extract_plan(&solution.nodes, &graph, &grid);

    assert!(plan.handover_count() < grid.slot_count());
    assert_eq!(plan.handover_count(), 5, "alternating optimum is tight");
    assert_eq!(
        plan.handover_epochs_s,
        vec![300.0, 600.0, 900.0, 1_200.0, 1_500.0]
    );
    for epoch in &plan.handover_epochs_s {
        assert_eq!(epoch % 300.0, 0.0, "handover at {epoch} s");
    }
    println!(
        "ACCEPTANCE 3 PASS: T = 1800 s, lambda = 150 s -> 6 slots; alternating \
         optimum attains 5 = n-1 handovers at multiples of 300 s"
    );
}

#[test]
fn acceptance_4_rate_ordering_on_the_walker_scenario() {
    // Absolute rates are not asserted: they hinge on antenna gains that are
    // not public (directional gains push the 20th percentile into the
    // 15-21 Mbit/s range; the unity-gain chain used here lands near
    // 0.4-1.4 Mbit/s). The asserted, gain-independent shape is the ordering.
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut scenario = load_scenario(shipped_config()).unwrap();
    scenario.out_dir = dir.path().to_path_buf();
    scenario.emit_svg = false;

    let report = cmd_compare(&scenario).unwrap();
    let labels: Vec<&str> = report.methods.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels, ["GM-4", "GM-5", "GM-6", "GM-10", "TH"]);

    let p20: Vec<f64> = report.methods.iter().map(|m| m.p20_bps).collect();
    for lambda_pair in [(0, 1), (1, 2), (2, 3)] {
        assert!(
            p20[lambda_pair.0] >= p20[lambda_pair.1],
            "20th percentile must be non-increasing in lambda: {p20:?}"
        );
    }
    let th = p20[4];
    for gm in 0..3 {
        assert!(
            p20[gm] >= th,
            "{} must match or beat TH at the 20th percentile: {p20:?}",
            labels[gm]
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "comparison took {elapsed:?}");
    println!(
        "ACCEPTANCE 4 PASS: p20 Mbit/s GM-4 {:.3} >= GM-5 {:.3} >= GM-6 {:.3} \
         >= GM-10 {:.3}; GM(lambda <= 180 s) >= TH {:.3}; in {elapsed:?}",
        p20[0] / 1e6,
        p20[1] / 1e6,
        p20[2] / 1e6,
        p20[3] / 1e6,
        th / 1e6
    );
}

#[test]
fn acceptance_5_complexity_model_and_full_solve() {
    let report = ComplexityReport::uniform(1_584, 6);
    assert_eq!(report.v, 9_506);
    assert_eq!(report.e, 12_548_448);
    assert!(
        (report.op_estimate - 1.267e7).abs() / 1.267e7 <= 1e-3,
        "op estimate {}",
        report.op_estimate
    );

    // Monotone decreasing in lambda across a sweep of a 1-hour horizon.
    let horizon = 3_600.0_f64;
    let mut last = f64::INFINITY;
    for lambda in [120.0, 150.0, 180.0, 300.0] {
        let n = (horizon / (2.0 * lambda)).round() as usize;
        let ops = ComplexityReport::uniform(1_584, n).op_estimate;
        assert!(ops < last, "ops must fall as lambda grows");
        last = ops;
    }

    // Solve the worst case for real: all 1584 satellites eligible in all
    // six slots, ~12.5M edge relaxations.
    let criteria = CriteriaConfig::balanced();
    let mut instances = Vec::with_capacity(1_584 * 6);
    for slot in 1..=6 {
        for sat in 0..1_584u32 {
            let spread = f64::from(sat * slot as u32 % 997);
            instances.push(bare_instance(
                sat,
                slot,
                1e6 + 1e4 * spread,
                2e-3 + 1e-6 * spread,
            ));
        }
    }
    normalize_utilities(&mut instances, &criteria).unwrap();
    let graph = build_graph(instances, &criteria).unwrap();
    assert_eq!(graph.node_count(), 9_506);
    assert_eq!(graph.edge_count(), 12_548_448);

    let started = Instant::now();
    let solution = shortest_path(&graph).unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "full solve took {elapsed:?}");
    assert_eq!(solution.nodes.len(), 8); // begin + 6 slots + end
    println!(
        "ACCEPTANCE 5 PASS: V = {}, E = {}, ops = {:.4e}; sweep monotone; \
         full 12.5M-edge solve in {elapsed:?}",
        report.v, report.e, report.op_estimate
    );
}

#[test]
fn acceptance_6_compare_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut scenario = load_scenario(shipped_config()).unwrap();

    let mut digests = Vec::new();
    for run in ["a", "b"] {
        scenario.out_dir = dir.path().join(run);
        let report = cmd_compare(&scenario).unwrap();
        let mut files: Vec<_> = report.files;
        files.sort();
        digests.push(
            files
                .iter()
                .map(|f| (f.file_name().unwrap().to_owned(), std::fs::read(f).unwrap()))
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(digests[0].len(), digests[1].len());
    for (a, b) in digests[0].iter().zip(&digests[1]) {
        assert_eq!(a.0, b.0, "artifact sets diverge");
        assert_eq!(a.1, b.1, "artifact {:?} is not byte-identical", a.0);
    }
    println!(
        "ACCEPTANCE 6 PASS: two compare runs produced {} byte-identical artifacts",
        digests[0].len()
    );
}

#[test]
fn acceptance_7_property_spot_checks() {
    // The full randomized suites live in tests/properties.rs and run
    // stand-alone (`cargo test --test properties`); this spot-checks each.
    let criteria = CriteriaConfig::balanced();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Normalization bounds and affine invariance.
    let mut instances = random_instances(&mut rng, 4, 6);
    normalize_utilities(&mut instances, &criteria).unwrap();
    for inst in &instances {
        for &u in &inst.utilities {
            assert!((0.0..=1.0).contains(&u));
        }
    }
    let mut scaled: Vec<_> = instances
        .iter()
        .map(|i| {
            bare_instance(
                i.sat_id.0,
                i.slot_index,
                i.mean_rate_bps,
                i.mean_delay_s * 4.0,
            )
        })
        .collect();
    normalize_utilities(&mut scaled, &criteria).unwrap();
    let d = criteria.index_of("delay").unwrap();
    for (orig, new) in instances.iter().zip(&scaled) {
        assert_eq!(orig.utilities[d].to_bits(), new.utilities[d].to_bits());
    }

    // Channel monotonicity on [550, 3000] km.
    let params = ChannelParams::default();
    let p_n = channel::noise_power(&params);
    let mut last_rate = f64::INFINITY;
    let mut last_delay = 0.0;
    for km in (550..=3_000).step_by(50) {
        let d_m = km as f64 * 1e3;
        let a = channel::atmospheric_fading(d_m, &params);
        let rate = channel::data_rate(
            channel::received_power(channel::channel_gain(d_m, a, &params), &params),
            p_n,
            &params,
        );
        let delay = channel::propagation_delay(d_m);
        assert!(rate < last_rate && delay > last_delay);
        last_rate = rate;
        last_delay = delay;
    }

    // Percentile monotone in p.
    let series = {
        use hoplan::eval::{RateSample, RateSeries};
        let samples = (0..100)
            .map(|i| RateSample {
                t_s: i as f64,
                rate_bps: rng.gen_range(1e5..1e8),
                serving_sat: SatId(0),
            })
            .collect();
        RateSeries {
            samples,
            sample_step_s: 1.0,
        }
    };
    let mut last_p = 0.0;
    for i in 0..=10 {
        let p = f64::from(i) / 10.0;
        let v = hoplan::eval::percentile(&series, p).unwrap();
        assert!(v >= last_p);
        last_p = v;
    }

    // Graph layering: every edge advances exactly one slot.
    let mut instances = random_instances(&mut rng, 5, 5);
    normalize_utilities(&mut instances, &criteria).unwrap();
    let graph = build_graph(instances, &criteria).unwrap();
    let begin = graph.begin_node();
    let end = graph.end_node();
    let slot_of = |node: usize| graph.node_instance(node).slot_index;
    for (src, dst, _) in graph.edges() {
        if src == begin {
            assert_eq!(slot_of(dst), 1);
        } else if dst == end {
            assert_eq!(slot_of(src), graph.slot_count());
        } else {
            assert_eq!(slot_of(dst), slot_of(src) + 1);
        }
    }

    // Threshold baseline: the serving satellite is only ever below the
    // trigger angle at the instant the policy reacts to it.
    let scenario = load_scenario(shipped_config()).unwrap();
    let eph = scenario.ephemeris().unwrap();
    let plan = hoplan::baseline::threshold_plan(
        &eph,
        &scenario.user,
        scenario.horizon_s,
        &scenario.threshold,
        None,
    )
    .unwrap();
    let user_pos = scenario.user.position_ecef();
    let step = scenario.threshold.decision_step_s;
    let steps = (scenario.horizon_s / step) as usize;
    for k in 0..=steps {
        let t = k as f64 * step;
        let serving = plan.serving_at(t).unwrap();
        let elev = geometry::elevation_angle(user_pos, eph.position_at(serving, t).unwrap());
        if elev < scenario.threshold.threshold_rad {
            // Dipping below the trigger is only legal when the policy has
            // already reacted: t must be a recorded handover epoch, where
            // serving_at reports the incoming satellite... so the incoming
            // satellite itself was the max-elevation choice. Verify that.
            let best = eph
                .sat_ids()
                .iter()
                .map(|&id| {
                    (
                        geometry::elevation_angle(user_pos, eph.position_at(id, t).unwrap()),
                        id,
                    )
                })
                .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.cmp(&a.1)))
                .unwrap();
            assert_eq!(serving, best.1, "below-threshold serving at t = {t} s");
        }
    }

    println!(
        "ACCEPTANCE 7 PASS: normalization bounds/affine invariance, channel \
         and percentile monotonicity, graph layering, threshold serving \
         invariant all hold (full suites: cargo test --test properties)"
    );
}
