//! Plan a handover sequence end to end: generate the constellation, build
//! the time-expanded graph, and read the shortest path off as a plan.
//!
//! Run with: `cargo run --example plan_handovers`

use hoplan::channel::ChannelParams;
use hoplan::constellation::{generate_walker, OrbitalShell};
use hoplan::geometry::GroundUser;
use hoplan::hograph::{
    build_graph, build_time_grid, enumerate_instances, normalize_utilities, CriteriaConfig,
};
use hoplan::planner::plan_handovers;

fn main() -> hoplan::Result<()> {
    // 30 minutes split into six 5-minute slots (relaxation period 150 s).
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

    // Instances = satellites visible for a whole slot; each gets a cost from
    // equally weighted, min-max normalized delay and rate utilities.
    let criteria = CriteriaConfig::balanced();
    let mut instances = enumerate_instances(&eph, &user, &grid, &params, 10.0)?;
    normalize_utilities(&mut instances, &criteria)?;
    println!("eligible instances: {}", instances.len());

    let graph = build_graph(instances, &criteria)?;
    println!(
        "graph: {} nodes, {} edges",
        graph.node_count(),
        graph.edge_count()
    );

    let plan = plan_handovers(&graph, &grid)?;
    println!(
        "plan: {} handovers, total cost {:.4}",
        plan.handover_count(),
        plan.total_cost.unwrap()
    );
    for seg in &plan.segments {
        match seg.handover_at_s {
            Some(t) => println!(
                "  slot {}: {} over [{:.0}, {:.0}] s, handover at {t:.0} s",
                seg.slot, seg.sat_id, seg.start_s, seg.end_s
            ),
            None => println!(
                "  slot {}: {} over [{:.0}, {:.0}] s",
                seg.slot, seg.sat_id, seg.start_s, seg.end_s
            ),
        }
    }
    Ok(())
}
