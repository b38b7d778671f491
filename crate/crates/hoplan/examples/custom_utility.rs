//! Plug a third handover criterion into the weighted-sum scoring: the
//! registry is open, so anything computable from a satellite instance can
//! steer the plan alongside the built-in delay and rate utilities.
//!
//! Run with: `cargo run --example custom_utility`

use hoplan::channel::ChannelParams;
use hoplan::constellation::{generate_walker, OrbitalShell};
use hoplan::geometry::GroundUser;
use hoplan::hograph::{
    build_graph, build_time_grid, enumerate_instances, normalize_utilities, CriteriaConfig,
    Criterion, Preference, SatelliteInstance,
};
use hoplan::planner::plan_handovers;

/// Mean elevation across the instance's slot, straight off its samples.
fn mean_elevation_rad(inst: &SatelliteInstance) -> f64 {
    let sum: f64 = inst.samples.iter().map(|s| s.elevation_rad).sum();
    sum / inst.samples.len() as f64
}

fn main() -> hoplan::Result<()> {
    let horizon_s = 1_800.0;
    let grid = build_time_grid(horizon_s, 150.0)?;
    let shell = OrbitalShell::new(22, 72, 550_000.0, 53f64.to_radians())?;
    let eph = generate_walker(&shell, horizon_s, 10.0)?;
    let user = GroundUser::new(
        45.42f64.to_radians(),
        -75.70f64.to_radians(),
        0.0,
        10f64.to_radians(),
    )?;
    let params = ChannelParams::default();

    // Half the weight goes to staying high in the sky — higher is better,
    // so after normalization the highest-elevation instance costs 0.
    let criteria = CriteriaConfig::new(vec![
        Criterion::delay(0.25),
        Criterion::rate(0.25),
        Criterion::new(
            "elevation",
            0.5,
            Preference::HigherIsBetter,
            mean_elevation_rad,
        ),
    ])?;

    let mut instances = enumerate_instances(&eph, &user, &grid, &params, 10.0)?;
    normalize_utilities(&mut instances, &criteria)?;
    let graph = build_graph(instances, &criteria)?;
    let plan = plan_handovers(&graph, &grid)?;

    println!("criteria: delay 0.25, rate 0.25, elevation 0.5");
    println!(
        "plan: {} handovers, total cost {:.4}",
        plan.handover_count(),
        plan.total_cost.unwrap()
    );
    for (sat, slot) in plan.sequence() {
        println!("  slot {slot}: {sat}");
    }
    Ok(())
}
