//! Compare the graph method across two slot widths against the threshold
//! baseline, from a shared start satellite — a miniature of the `compare`
//! CLI command (which adds CSV/SVG artifacts on top of the same calls).
//!
//! Run with: `cargo run --example compare_methods`

use std::path::Path;

use hoplan::commands::{cmd_compare, fair_start_sat, gm_run};
use hoplan::scenario::scenario_from_str;

fn main() -> hoplan::Result<()> {
    // The visibility floor is the geometric horizon here so that 10-minute
    // slots stay coverable; the baseline still triggers at 10 deg.
    let toml = r#"
        [user]
        min_elevation_deg = 0.0

        [planner]
        horizon_s = 1800.0
        lambda_s = [150.0, 300.0]

        [output]
        emit_svg = false
    "#;
    let mut scenario = scenario_from_str(toml, Path::new("."))?;
    scenario.out_dir = std::env::temp_dir().join("hoplan_compare_example");

    // The individual steps are available piecemeal too: pick a start
    // satellite and solve one lambda by hand before running the batch.
    let eph = scenario.ephemeris()?;
    let start = fair_start_sat(&scenario, &eph)?;
    let single = gm_run(&scenario, &eph, 150.0, Some(start))?;
    println!(
        "lambda = 150 s alone: cost {:.4}, {} handovers",
        single.plan.total_cost.unwrap(),
        single.plan.handover_count()
    );

    let report = cmd_compare(&scenario)?;
    println!();
    println!("20th-percentile rate by method:");
    for m in &report.methods {
        println!(
            "  {:<6} {:>7.3} Mbit/s  ({} handovers)",
            m.label,
            m.p20_bps / 1e6,
            m.handovers
        );
    }
    Ok(())
}
