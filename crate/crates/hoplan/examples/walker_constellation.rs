//! Generate a Walker-delta constellation, inspect its geometry, and round-trip
//! the ephemeris through the CSV format.
//!
//! Run with: `cargo run --example walker_constellation`

use hoplan::constellation::{generate_walker, load_ephemeris, save_ephemeris, OrbitalShell, SatId};

fn main() -> hoplan::Result<()> {
    // Starlink Phase I-like shell: 22 planes of 72 satellites at 550 km.
    let shell = OrbitalShell::new(22, 72, 550_000.0, 53f64.to_radians())?;
    println!("satellites:      {}", shell.satellite_count());
    println!("orbital radius:  {:.0} m", shell.orbital_radius_m());
    println!("orbital period:  {:.1} s", shell.orbital_period_s());

    // Earth-fixed positions sampled every 60 s across half an orbit.
    let eph = generate_walker(&shell, shell.orbital_period_s() / 2.0, 60.0)?;
    println!("epochs:          {}", eph.epochs_s().len());

    // Positions are linearly interpolated between table epochs.
    let sat = SatId(0);
    for t in [0.0, 90.0, 1_500.0] {
        let p = eph.position_at(sat, t)?;
        println!(
            "{sat} at t = {t:>6.1} s: ({:>11.0}, {:>11.0}, {:>11.0}) m  |r| = {:.0} m",
            p.x,
            p.y,
            p.z,
            p.norm()
        );
    }

    // The CSV round-trips bit-exactly: floats are written with enough digits
    // to reconstruct the same values.
    let path = std::env::temp_dir().join("hoplan_walker_example.csv");
    save_ephemeris(&eph, &path)?;
    let reloaded = load_ephemeris(&path)?;
    assert_eq!(
        reloaded.position_at(sat, 90.0)?,
        eph.position_at(sat, 90.0)?
    );
    println!("round-tripped    {}", path.display());
    std::fs::remove_file(&path)?;
    Ok(())
}
