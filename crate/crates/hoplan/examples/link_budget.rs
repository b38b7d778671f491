//! Walk the link-budget chain — fading, path gain, received power, Shannon
//! rate, propagation delay — for a satellite seen at several elevations.
//!
//! Run with: `cargo run --example link_budget`

use hoplan::channel::{self, ChannelParams};
use hoplan::constants::EARTH_RADIUS_M;

/// Slant range to a satellite at `alt_m` seen at elevation `elev_rad`,
/// from the law of cosines on the Earth-center triangle.
fn slant_range_m(elev_rad: f64, alt_m: f64) -> f64 {
    let r_user = EARTH_RADIUS_M;
    let r_sat = EARTH_RADIUS_M + alt_m;
    let s = elev_rad.sin();
    -r_user * s + (r_user * r_user * (s * s - 1.0) + r_sat * r_sat).sqrt()
}

fn main() {
    // Ku-band downlink defaults: 11.9 GHz, 10 MHz, 10 W, unity gains,
    // -173 dBm/Hz noise density, 0.05 dB/km rain fading, 550 km orbit.
    let params = ChannelParams::default();
    let p_n = channel::noise_power(&params);
    println!(
        "noise power: {p_n:.3e} W over {:.0} MHz",
        params.bandwidth_hz / 1e6
    );
    println!();
    println!(" elev       slant d    fading A         rate R     delay PD");

    for elev_deg in [90.0, 60.0, 30.0, 10.0, 0.0_f64] {
        let d = slant_range_m(elev_deg.to_radians(), params.orbit_altitude_m);
        let a = channel::atmospheric_fading(d, &params);
        let g = channel::channel_gain(d, a, &params);
        let p_rx = channel::received_power(g, &params);
        let rate = channel::data_rate(p_rx, p_n, &params);
        let delay = channel::propagation_delay(d);
        println!(
            "{elev_deg:>3.0} deg  {:>8.1} km  {a:>10.5}  {:>9.3} Mbit/s  {:>7.4} ms",
            d / 1e3,
            rate / 1e6,
            delay * 1e3,
        );
    }
}
