//! Run the legacy elevation-threshold handover policy: stay on the serving
//! satellite until it sinks below the trigger angle, then jump to whichever
//! visible satellite is highest.
//!
//! Run with: `cargo run --example threshold_baseline`

use hoplan::baseline::{threshold_plan, ThresholdConfig};
use hoplan::channel::ChannelParams;
use hoplan::constellation::{generate_walker, OrbitalShell};
use hoplan::eval::{count_handovers, percentile, simulate_rate};
use hoplan::geometry::GroundUser;

fn main() -> hoplan::Result<()> {
    let horizon_s = 1_800.0;
    let shell = OrbitalShell::new(22, 72, 550_000.0, 53f64.to_radians())?;
    let eph = generate_walker(&shell, horizon_s, 10.0)?;
    let user = GroundUser::new(
        45.42f64.to_radians(),
        -75.70f64.to_radians(),
        0.0,
        10f64.to_radians(),
    )?;

    // Trigger at 10 deg, re-check the serving satellite every 10 s.
    let cfg = ThresholdConfig {
        threshold_rad: 10f64.to_radians(),
        decision_step_s: 10.0,
    };
    let plan = threshold_plan(&eph, &user, horizon_s, &cfg, None)?;
    println!("handovers: {}", count_handovers(&plan));
    println!("handover epochs: {:?}", plan.handover_epochs_s);

    // Replay the plan through the link budget to see what the policy costs.
    let series = simulate_rate(&plan, &eph, &user, &ChannelParams::default(), 10.0)?;
    println!(
        "rate: p20 = {:.3} Mbit/s, median = {:.3} Mbit/s",
        percentile(&series, 0.2)? / 1e6,
        percentile(&series, 0.5)? / 1e6,
    );
    Ok(())
}
