//! Link-budget chain for a single satellite-to-ground link: atmospheric
//! fading, free-space channel gain with deterministic Rician factor,
//! received power, Shannon rate, and propagation delay.
//!
//! Every step is a pure function of distance and an immutable
//! [`ChannelParams`], so samples can be evaluated in any order (or in
//! parallel) with identical results.

use crate::constants::C_LIGHT;
use crate::error::{Error, Result};
use crate::geometry;
use crate::vec3::Vec3;

/// How the atmospheric fading exponent is applied.
///
/// The model's fading term has a positive exponent, which makes the factor a
/// slight gain at LEO ranges. `AsWritten` keeps that form; `Attenuating`
/// negates the exponent so the factor damps the signal instead. Link
/// rankings at LEO distances are insensitive to the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FadingSign {
    #[default]
    AsWritten,
    Attenuating,
}

/// Immutable link-budget parameters.
///
/// `Default` is the Ku-band downlink used by the shipped scenario:
/// 11.9 GHz carrier, 10 MHz bandwidth, 10 dBW transmit power, unity antenna
/// gains, -173 dBm/Hz noise density, 0.05 dB/km rain attenuation, 20 dB
/// Rician factor, 550 km orbit altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    /// Transmit antenna gain, linear (1 = 0 dBi).
    pub tx_gain: f64,
    /// Receive antenna gain, linear.
    pub rx_gain: f64,
    /// Noise power spectral density, dBm/Hz.
    pub noise_psd_dbm_hz: f64,
    /// Rain/cloud attenuation coefficient, dB/km.
    pub rain_attenuation_db_km: f64,
    /// Deterministic Rician small-scale factor, linear (100 = 20 dB).
    pub rician_factor: f64,
    /// Orbit altitude used by the fading exponent, meters.
    pub orbit_altitude_m: f64,
    pub fading_sign: FadingSign,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            carrier_frequency_hz: 11.9e9,
            bandwidth_hz: 10.0e6,
            tx_power_w: 10.0,
            tx_gain: 1.0,
            rx_gain: 1.0,
            noise_psd_dbm_hz: -173.0,
            rain_attenuation_db_km: 0.05,
            rician_factor: 100.0,
            orbit_altitude_m: 550_000.0,
            fading_sign: FadingSign::AsWritten,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.carrier_frequency_hz <= 0.0 {
            return Err(Error::invalid("carrier frequency must be > 0"));
        }
        if self.bandwidth_hz <= 0.0 {
            return Err(Error::invalid("bandwidth must be > 0"));
        }
        if self.tx_power_w <= 0.0 {
            return Err(Error::invalid("transmit power must be > 0"));
        }
        if self.tx_gain <= 0.0 || self.rx_gain <= 0.0 {
            return Err(Error::invalid("antenna gains must be > 0"));
        }
        if self.rician_factor <= 0.0 {
            return Err(Error::invalid("Rician factor must be > 0"));
        }
        if self.orbit_altitude_m <= 0.0 {
            return Err(Error::invalid("orbit altitude must be > 0"));
        }
        Ok(())
    }
}

/// One evaluated link at time `t_s`: slant range, Shannon rate, propagation
/// delay, and elevation. Produced whether or not the satellite is above the
/// caller's elevation mask — visibility filtering happens upstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub t_s: f64,
    pub distance_m: f64,
    pub rate_bps: f64,
    pub delay_s: f64,
    pub elevation_rad: f64,
}

/// Atmospheric fading factor at slant range `d_m`, linear.
///
/// `10^(3 * chi * d / (10 * h))` with `chi` in dB/km and `d`, `h` in the
/// same unit (the ratio is dimensionless). With `FadingSign::Attenuating`
/// the exponent is negated.
pub fn atmospheric_fading(d_m: f64, params: &ChannelParams) -> f64 {
    debug_assert!(d_m > 0.0);
    let mut exponent = 3.0 * params.rain_attenuation_db_km * (d_m / params.orbit_altitude_m) / 10.0;
    if params.fading_sign == FadingSign::Attenuating {
        exponent = -exponent;
    }
    10_f64.powf(exponent)
}

/// Channel power gain at slant range `d_m`: the free-space term
/// `(c / (4 pi d f_c))^2` times the fading factor `a` and the Rician factor.
pub fn channel_gain(d_m: f64, a: f64, params: &ChannelParams) -> f64 {
    debug_assert!(d_m > 0.0);
    let free_space = C_LIGHT / (4.0 * std::f64::consts::PI * d_m * params.carrier_frequency_hz);
    free_space * free_space * a * params.rician_factor
}

/// Received power in watts: transmit power through both antenna gains and
/// the channel gain `g`.
pub fn received_power(g: f64, params: &ChannelParams) -> f64 {
    debug_assert!(g > 0.0);
    params.tx_power_w * params.tx_gain * g * params.rx_gain
}

/// Noise power in watts over the configured bandwidth, from the noise power
/// spectral density in dBm/Hz.
pub fn noise_power(params: &ChannelParams) -> f64 {
    debug_assert!(params.bandwidth_hz > 0.0);
    10_f64.powf((params.noise_psd_dbm_hz - 30.0) / 10.0) * params.bandwidth_hz
}

/// Shannon rate in bits/s: `B * log2(1 + P_rx / P_N)`.
pub fn data_rate(p_rx_w: f64, p_n_w: f64, params: &ChannelParams) -> f64 {
    debug_assert!(p_rx_w >= 0.0);
    debug_assert!(p_n_w > 0.0);
    params.bandwidth_hz * (1.0 + p_rx_w / p_n_w).log2()
}

/// Propagation delay in seconds over slant range `d_m`.
pub fn propagation_delay(d_m: f64) -> f64 {
    debug_assert!(d_m >= 0.0);
    d_m / C_LIGHT
}

/// Evaluate the full chain for one user/satellite geometry at time `t_s`.
///
/// Does not check visibility: callers that care about the elevation mask
/// filter on `elevation_rad` themselves.
pub fn link_sample(user_pos: Vec3, sat_pos: Vec3, t_s: f64, params: &ChannelParams) -> LinkSample {
    let d = geometry::slant_range(user_pos, sat_pos);
    let a = atmospheric_fading(d, params);
    let g = channel_gain(d, a, params);
    let p_rx = received_power(g, params);
    let p_n = noise_power(params);
    LinkSample {
        t_s,
        distance_m: d,
        rate_bps: data_rate(p_rx, p_n, params),
        delay_s: propagation_delay(d),
        elevation_rad: geometry::elevation_angle(user_pos, sat_pos),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EARTH_RADIUS_M;

    fn close_rel(actual: f64, expected: f64, tol: f64) -> bool {
        (actual - expected).abs() <= tol * expected.abs()
    }

    #[test]
    fn fading_is_unity_without_attenuation() {
        let params = ChannelParams {
            rain_attenuation_db_km: 0.0,
            ..ChannelParams::default()
        };
        assert_eq!(atmospheric_fading(550_000.0, &params), 1.0);
        assert_eq!(atmospheric_fading(2_000_000.0, &params), 1.0);
    }

    #[test]
    fn fading_at_nadir_and_double_range() {
        let params = ChannelParams::default();
        // 10^(3 * 0.05 * (d/h) / 10) at d = h and d = 2h.
        assert!(close_rel(
            atmospheric_fading(550_000.0, &params),
            1.03514,
            1e-5
        ));
        assert!(close_rel(
            atmospheric_fading(1_100_000.0, &params),
            1.07152,
            1e-5
        ));
    }

    #[test]
    fn attenuating_sign_inverts_the_factor() {
        let as_written = ChannelParams::default();
        let attenuating = ChannelParams {
            fading_sign: FadingSign::Attenuating,
            ..as_written
        };
        let d = 812_345.0;
        let up = atmospheric_fading(d, &as_written);
        let down = atmospheric_fading(d, &attenuating);
        assert!(up > 1.0);
        assert!(down < 1.0);
        assert!(close_rel(up * down, 1.0, 1e-12));
    }

    #[test]
    fn channel_gain_identity_distance() {
        let params = ChannelParams {
            rician_factor: 1.0,
            ..ChannelParams::default()
        };
        let d =
            crate::constants::C_LIGHT / (4.0 * std::f64::consts::PI * params.carrier_frequency_hz);
        assert!(close_rel(channel_gain(d, 1.0, &params), 1.0, 1e-12));
    }

    #[test]
    fn free_space_gain_at_550_km() {
        let params = ChannelParams {
            rician_factor: 1.0,
            ..ChannelParams::default()
        };
        let g = channel_gain(550_000.0, 1.0, &params);
        // Within 0.01 dB of the hand-computed free-space value.
        let db = 10.0 * g.log10();
        let expected_db = 10.0 * 1.329e-17_f64.log10();
        assert!((db - expected_db).abs() < 0.01, "{db} vs {expected_db}");
    }

    #[test]
    fn rician_factor_scales_gain_linearly() {
        let params = ChannelParams::default(); // 20 dB factor
        let g = channel_gain(550_000.0, 1.0, &params);
        let db = 10.0 * g.log10();
        let expected_db = 10.0 * 1.329e-15_f64.log10();
        assert!((db - expected_db).abs() < 0.01);
    }

    #[test]
    fn received_power_through_unity_gains() {
        let params = ChannelParams::default();
        assert_eq!(received_power(1.0, &params), params.tx_power_w);
        assert!(close_rel(
            received_power(1.329e-15, &params),
            1.329e-14,
            1e-12
        ));
        let boosted = ChannelParams {
            rx_gain: 2.0,
            ..params
        };
        assert_eq!(
            received_power(1.0e-15, &boosted),
            2.0 * received_power(1.0e-15, &params)
        );
    }

    #[test]
    fn noise_power_from_psd() {
        let params = ChannelParams::default();
        assert!(close_rel(noise_power(&params), 5.01e-14, 5e-3));

        let unit = ChannelParams {
            noise_psd_dbm_hz: 0.0,
            bandwidth_hz: 1.0,
            ..params
        };
        assert!(close_rel(noise_power(&unit), 1e-3, 1e-12));

        let doubled = ChannelParams {
            bandwidth_hz: 2.0 * params.bandwidth_hz,
            ..params
        };
        assert!(close_rel(
            noise_power(&doubled),
            2.0 * noise_power(&params),
            1e-12
        ));
    }

    #[test]
    fn data_rate_reference_points() {
        let params = ChannelParams::default();
        let p_n = noise_power(&params);
        assert_eq!(data_rate(0.0, p_n, &params), 0.0);
        assert!(close_rel(data_rate(p_n, p_n, &params), 10.0e6, 1e-12));
        assert!(close_rel(data_rate(26.5 * p_n, p_n, &params), 47.8e6, 5e-3));
    }

    #[test]
    fn propagation_delay_reference_points() {
        assert_eq!(propagation_delay(0.0), 0.0);
        assert!(close_rel(propagation_delay(C_LIGHT), 1.0, 1e-15));
        assert!((propagation_delay(550_000.0) - 1.8346e-3).abs() < 1e-7);
    }

    #[test]
    fn link_sample_zenith_composes_the_chain() {
        let params = ChannelParams::default();
        let user = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let sat = Vec3::new(EARTH_RADIUS_M + 550_000.0, 0.0, 0.0);
        let s = link_sample(user, sat, 42.0, &params);
        assert_eq!(s.t_s, 42.0);
        assert!(close_rel(s.distance_m, 550_000.0, 1e-12));
        assert!((s.delay_s - 1.8346e-3).abs() < 1e-7);
        assert!((s.elevation_rad - std::f64::consts::FRAC_PI_2).abs() < 1e-9);

        let a = atmospheric_fading(s.distance_m, &params);
        let g = channel_gain(s.distance_m, a, &params);
        let p_rx = received_power(g, &params);
        let expected = data_rate(p_rx, noise_power(&params), &params);
        assert_eq!(s.rate_bps, expected);
    }

    #[test]
    fn equal_slant_ranges_give_identical_rate_and_delay() {
        let params = ChannelParams::default();
        let user = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        // Same range, different directions.
        let sat_a = Vec3::new(EARTH_RADIUS_M + 700_000.0, 0.0, 0.0);
        let sat_b = Vec3::new(EARTH_RADIUS_M, 700_000.0, 0.0);
        let sa = link_sample(user, sat_a, 0.0, &params);
        let sb = link_sample(user, sat_b, 0.0, &params);
        assert!(close_rel(sa.distance_m, sb.distance_m, 1e-12));
        assert!(close_rel(sa.rate_bps, sb.rate_bps, 1e-12));
        assert!(close_rel(sa.delay_s, sb.delay_s, 1e-12));
    }

    #[test]
    fn rate_decreases_and_delay_increases_with_range() {
        let params = ChannelParams::default();
        let p_n = noise_power(&params);
        let rate_at = |d: f64| {
            let a = atmospheric_fading(d, &params);
            let g = channel_gain(d, a, &params);
            data_rate(received_power(g, &params), p_n, &params)
        };
        let mut d = 550_000.0;
        let mut last_rate = rate_at(d);
        let mut last_delay = propagation_delay(d);
        while d < 3_000_000.0 {
            d += 50_000.0;
            let r = rate_at(d);
            let pd = propagation_delay(d);
            assert!(r < last_rate, "rate not decreasing at d = {d}");
            assert!(pd > last_delay, "delay not increasing at d = {d}");
            last_rate = r;
            last_delay = pd;
        }
    }

    #[test]
    fn linear_chain_agrees_with_db_chain() {
        let params = ChannelParams::default();
        let d = 987_654.0;

        // Linear path.
        let a = atmospheric_fading(d, &params);
        let g = channel_gain(d, a, &params);
        let p_rx = received_power(g, &params);
        let p_n = noise_power(&params);
        let snr_linear = p_rx / p_n;

        // Decibel path, recombined at the end.
        let free_space_db = 20.0
            * (C_LIGHT / (4.0 * std::f64::consts::PI * d * params.carrier_frequency_hz)).log10();
        let fading_db = 3.0 * params.rain_attenuation_db_km * (d / params.orbit_altitude_m);
        let rician_db = 10.0 * params.rician_factor.log10();
        let p_rx_dbw = 10.0 * params.tx_power_w.log10()
            + 10.0 * params.tx_gain.log10()
            + free_space_db
            + fading_db
            + rician_db
            + 10.0 * params.rx_gain.log10();
        let p_n_dbw = params.noise_psd_dbm_hz - 30.0 + 10.0 * params.bandwidth_hz.log10();
        let snr_db_path = 10_f64.powf((p_rx_dbw - p_n_dbw) / 10.0);

        assert!(close_rel(snr_linear, snr_db_path, 1e-9));
    }
}
