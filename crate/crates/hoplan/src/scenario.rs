//! Scenario configuration: a single TOML file describing the constellation,
//! ground user, channel, planner, baseline, and output settings.
//!
//! Loading is total: every invalid field is collected and reported together
//! with its `section.key` path before any computation starts, rather than
//! bailing on the first problem. Every key has a default, so an empty file
//! is a complete scenario (the shipped Ku-band constellation over Ottawa).

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::baseline::ThresholdConfig;
use crate::channel::{ChannelParams, FadingSign};
use crate::constellation::{self, ConstellationEphemeris, OrbitalShell, SatId};
use crate::error::{Error, Result};
use crate::geometry::GroundUser;
use crate::hograph::{self, CriteriaConfig};

/// Where satellite positions come from.
#[derive(Debug, Clone)]
pub enum ConstellationSource {
    /// Generate a Walker shell ephemeris, sampled every `step_s`.
    Shell { shell: OrbitalShell, step_s: f64 },
    /// Load a previously saved ephemeris CSV.
    File(PathBuf),
}

/// A fully validated scenario, units resolved to SI.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub source: ConstellationSource,
    pub user: GroundUser,
    pub channel: ChannelParams,
    pub horizon_s: f64,
    /// One or more relaxation values; multi-valued for sweep commands.
    pub lambdas_s: Vec<f64>,
    pub weight_delay: f64,
    pub weight_rate: f64,
    pub sample_step_s: f64,
    /// Satellite every plan must start on, for like-for-like comparisons.
    pub start_sat: Option<SatId>,
    pub threshold: ThresholdConfig,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
    /// Reserved for synthetic-scenario generators; the shipped pipeline is
    /// deterministic and never draws from it.
    pub seed: u64,
}

impl Scenario {
    /// The delay/rate criteria registry with this scenario's weights.
    pub fn criteria(&self) -> CriteriaConfig {
        CriteriaConfig::rate_delay(self.weight_delay, self.weight_rate)
            .expect("weights validated at load time")
    }

    /// Produce the ephemeris: generate the Walker shell over the horizon
    /// (extended to the next sampling multiple so interpolation covers the
    /// final instant) or load the configured CSV.
    pub fn ephemeris(&self) -> Result<ConstellationEphemeris> {
        match &self.source {
            ConstellationSource::Shell { shell, step_s } => {
                let steps = (self.horizon_s / step_s).ceil().max(1.0);
                constellation::generate_walker(shell, steps * step_s, *step_s)
            }
            ConstellationSource::File(path) => {
                let eph = constellation::load_ephemeris(path)?;
                if eph.last_epoch_s() < self.horizon_s {
                    return Err(Error::invalid(format!(
                        "ephemeris {} ends at {} s but the horizon is {} s",
                        path.display(),
                        eph.last_epoch_s(),
                        self.horizon_s
                    )));
                }
                Ok(eph)
            }
        }
    }

    /// Replace the relaxation list (the `--lambda` override), re-checking
    /// that every value still divides the horizon into whole slots.
    pub fn override_lambdas(&mut self, lambdas_s: Vec<f64>) -> Result<()> {
        if lambdas_s.is_empty() {
            return Err(Error::Config(vec![
                "lambda override: at least one value required".into(),
            ]));
        }
        let mut issues = Vec::new();
        for &l in &lambdas_s {
            if let Err(e) = hograph::build_time_grid(self.horizon_s, l) {
                issues.push(format!("lambda override {l}: {e}"));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Config(issues));
        }
        self.lambdas_s = lambdas_s;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Raw TOML layer
// ---------------------------------------------------------------------------

fn d_planes() -> u32 {
    22
}
fn d_sats_per_plane() -> u32 {
    72
}
fn d_altitude_km() -> f64 {
    550.0
}
fn d_inclination_deg() -> f64 {
    53.0
}
fn d_raan_spread_deg() -> f64 {
    360.0
}
fn d_step_s() -> f64 {
    10.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConstellation {
    planes: u32,
    sats_per_plane: u32,
    altitude_km: f64,
    inclination_deg: f64,
    phasing_offset: f64,
    raan_spread_deg: f64,
    /// Ephemeris sampling step for generation, seconds.
    step_s: f64,
    /// Path to an ephemeris CSV; when set it overrides the shell keys.
    ephemeris: Option<String>,
}

impl Default for RawConstellation {
    fn default() -> Self {
        Self {
            planes: d_planes(),
            sats_per_plane: d_sats_per_plane(),
            altitude_km: d_altitude_km(),
            inclination_deg: d_inclination_deg(),
            phasing_offset: 0.0,
            raan_spread_deg: d_raan_spread_deg(),
            step_s: d_step_s(),
            ephemeris: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawUser {
    latitude_deg: f64,
    longitude_deg: f64,
    altitude_m: f64,
    min_elevation_deg: f64,
}

impl Default for RawUser {
    fn default() -> Self {
        // The shipped scenario's ground user in Ottawa.
        Self {
            latitude_deg: 45.42,
            longitude_deg: -75.70,
            altitude_m: 0.0,
            min_elevation_deg: 10.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawChannel {
    carrier_frequency_hz: f64,
    bandwidth_hz: f64,
    tx_power_w: f64,
    tx_gain: f64,
    rx_gain: f64,
    noise_psd_dbm_hz: f64,
    rain_attenuation_db_km: f64,
    rician_factor: f64,
    /// Defaults to the constellation altitude when absent.
    orbit_altitude_m: Option<f64>,
    /// "as-written" (gain form) or "attenuating".
    fading_sign: String,
}

impl Default for RawChannel {
    fn default() -> Self {
        let p = ChannelParams::default();
        Self {
            carrier_frequency_hz: p.carrier_frequency_hz,
            bandwidth_hz: p.bandwidth_hz,
            tx_power_w: p.tx_power_w,
            tx_gain: p.tx_gain,
            rx_gain: p.rx_gain,
            noise_psd_dbm_hz: p.noise_psd_dbm_hz,
            rain_attenuation_db_km: p.rain_attenuation_db_km,
            rician_factor: p.rician_factor,
            orbit_altitude_m: None,
            fading_sign: "as-written".into(),
        }
    }
}

/// `lambda_s = 150.0` and `lambda_s = [120.0, 150.0]` both parse.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawPlanner {
    horizon_s: f64,
    lambda_s: OneOrMany,
    weight_delay: f64,
    weight_rate: f64,
    sample_step_s: f64,
    start_sat: Option<u32>,
}

impl Default for RawPlanner {
    fn default() -> Self {
        Self {
            horizon_s: 1_800.0,
            lambda_s: OneOrMany::One(150.0),
            weight_delay: 0.5,
            weight_rate: 0.5,
            sample_step_s: 10.0,
            start_sat: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawBaseline {
    threshold_deg: f64,
    decision_step_s: f64,
}

impl Default for RawBaseline {
    fn default() -> Self {
        Self {
            threshold_deg: 10.0,
            decision_step_s: 10.0,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawOutput {
    directory: String,
    emit_svg: bool,
    seed: u64,
}

impl Default for RawOutput {
    fn default() -> Self {
        Self {
            directory: "out".into(),
            emit_svg: true,
            seed: 42,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawScenario {
    constellation: RawConstellation,
    user: RawUser,
    channel: RawChannel,
    planner: RawPlanner,
    baseline: RawBaseline,
    output: RawOutput,
}

/// `v > 0` with NaN and the infinities rejected.
fn positive_finite(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

/// `v >= 0` with NaN and the infinities rejected.
fn non_negative_finite(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

/// Load and validate a scenario file. Relative paths inside the config
/// (ephemeris, output directory) resolve against the config file's parent.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(vec![format!("cannot read config {}: {e}", path.display())]))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    scenario_from_str(&text, base)
}

/// Parse and validate scenario TOML, resolving relative paths against `base`.
pub fn scenario_from_str(text: &str, base: &Path) -> Result<Scenario> {
    let raw: RawScenario = toml::from_str(text)
        .map_err(|e| Error::Config(vec![format!("config parse error: {}", e.message())]))?;

    let mut issues: Vec<String> = Vec::new();
    let mut issue = |path: &str, msg: String| issues.push(format!("{path}: {msg}"));

    // --- constellation ---
    let c = &raw.constellation;
    if c.ephemeris.is_none() {
        if c.planes < 1 {
            issue("constellation.planes", "must be >= 1".into());
        }
        if c.sats_per_plane < 1 {
            issue("constellation.sats_per_plane", "must be >= 1".into());
        }
        if !positive_finite(c.altitude_km) {
            issue("constellation.altitude_km", "must be > 0".into());
        }
        if !(0.0..=180.0).contains(&c.inclination_deg) {
            issue(
                "constellation.inclination_deg",
                "must be in [0, 180]".into(),
            );
        }
        if !(c.raan_spread_deg > 0.0 && c.raan_spread_deg <= 360.0) {
            issue(
                "constellation.raan_spread_deg",
                "must be in (0, 360]".into(),
            );
        }
        if !positive_finite(c.step_s) {
            issue("constellation.step_s", "must be > 0".into());
        }
    }

    // --- user ---
    let u = &raw.user;
    if !(-90.0..=90.0).contains(&u.latitude_deg) {
        issue("user.latitude_deg", "must be in [-90, 90]".into());
    }
    if !(-180.0..=180.0).contains(&u.longitude_deg) {
        issue("user.longitude_deg", "must be in [-180, 180]".into());
    }
    if !(0.0..90.0).contains(&u.min_elevation_deg) {
        issue("user.min_elevation_deg", "must be in [0, 90)".into());
    }
    if !non_negative_finite(u.altitude_m) {
        issue("user.altitude_m", "must be >= 0".into());
    }

    // --- channel ---
    let ch = &raw.channel;
    for (key, value) in [
        ("channel.carrier_frequency_hz", ch.carrier_frequency_hz),
        ("channel.bandwidth_hz", ch.bandwidth_hz),
        ("channel.tx_power_w", ch.tx_power_w),
        ("channel.tx_gain", ch.tx_gain),
        ("channel.rx_gain", ch.rx_gain),
        ("channel.rician_factor", ch.rician_factor),
    ] {
        if !positive_finite(value) {
            issue(key, format!("must be > 0, got {value}"));
        }
    }
    if let Some(h) = ch.orbit_altitude_m {
        if !positive_finite(h) {
            issue("channel.orbit_altitude_m", "must be > 0".into());
        }
    }
    let fading_sign = match ch.fading_sign.as_str() {
        "as-written" => FadingSign::AsWritten,
        "attenuating" => FadingSign::Attenuating,
        other => {
            issue(
                "channel.fading_sign",
                format!("must be \"as-written\" or \"attenuating\", got \"{other}\""),
            );
            FadingSign::AsWritten
        }
    };

    // --- planner ---
    // A zero horizon is allowed so the constellation command can dump a
    // single-epoch snapshot; planning itself still requires horizon > 0.
    let p = &raw.planner;
    if !non_negative_finite(p.horizon_s) {
        issue("planner.horizon_s", "must be >= 0".into());
    }
    let lambdas = p.lambda_s.values();
    if lambdas.is_empty() {
        issue("planner.lambda_s", "at least one value required".into());
    }
    for &l in &lambdas {
        if !positive_finite(l) {
            issue("planner.lambda_s", format!("value {l} must be > 0"));
        } else if p.horizon_s > 0.0 {
            if let Err(e) = hograph::build_time_grid(p.horizon_s, l) {
                issue("planner.lambda_s", e.to_string());
            }
        }
    }
    if p.weight_delay < 0.0 {
        issue("planner.weight_delay", "must be >= 0".into());
    }
    if p.weight_rate < 0.0 {
        issue("planner.weight_rate", "must be >= 0".into());
    }
    if (p.weight_delay + p.weight_rate - 1.0).abs() > 1e-9 {
        issue(
            "planner.weight_delay/weight_rate",
            format!("must sum to 1, got {}", p.weight_delay + p.weight_rate),
        );
    }
    if !positive_finite(p.sample_step_s) {
        issue("planner.sample_step_s", "must be > 0".into());
    } else {
        let min_lambda = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
        if min_lambda.is_finite() && p.sample_step_s > 2.0 * min_lambda {
            issue(
                "planner.sample_step_s",
                format!(
                    "must not exceed the narrowest slot width {} s",
                    2.0 * min_lambda
                ),
            );
        }
    }

    // --- baseline ---
    let b = &raw.baseline;
    if b.threshold_deg < 0.0 {
        issue("baseline.threshold_deg", "must be >= 0".into());
    }
    if !positive_finite(b.decision_step_s) {
        issue("baseline.decision_step_s", "must be > 0".into());
    }

    // --- output ---
    if raw.output.directory.is_empty() {
        issue("output.directory", "must not be empty".into());
    }

    if !issues.is_empty() {
        return Err(Error::Config(issues));
    }

    let source = match &c.ephemeris {
        Some(file) => {
            let p = PathBuf::from(file);
            ConstellationSource::File(if p.is_relative() { base.join(p) } else { p })
        }
        None => {
            let mut shell = OrbitalShell::new(
                c.planes,
                c.sats_per_plane,
                c.altitude_km * 1_000.0,
                c.inclination_deg.to_radians(),
            )
            .expect("shell fields validated above");
            shell.phasing_offset = c.phasing_offset;
            shell.raan_spread_rad = c.raan_spread_deg.to_radians();
            ConstellationSource::Shell {
                shell,
                step_s: c.step_s,
            }
        }
    };

    let user = GroundUser::new(
        u.latitude_deg.to_radians(),
        u.longitude_deg.to_radians(),
        u.altitude_m,
        u.min_elevation_deg.to_radians(),
    )
    .expect("user fields validated above");

    let channel = ChannelParams {
        carrier_frequency_hz: ch.carrier_frequency_hz,
        bandwidth_hz: ch.bandwidth_hz,
        tx_power_w: ch.tx_power_w,
        tx_gain: ch.tx_gain,
        rx_gain: ch.rx_gain,
        noise_psd_dbm_hz: ch.noise_psd_dbm_hz,
        rain_attenuation_db_km: ch.rain_attenuation_db_km,
        rician_factor: ch.rician_factor,
        orbit_altitude_m: ch.orbit_altitude_m.unwrap_or(c.altitude_km * 1_000.0),
        fading_sign,
    };

    let out_dir = {
        let p = PathBuf::from(&raw.output.directory);
        if p.is_relative() {
            base.join(p)
        } else {
            p
        }
    };

    Ok(Scenario {
        source,
        user,
        channel,
        horizon_s: p.horizon_s,
        lambdas_s: lambdas,
        weight_delay: p.weight_delay,
        weight_rate: p.weight_rate,
        sample_step_s: p.sample_step_s,
        start_sat: p.start_sat.map(SatId),
        threshold: ThresholdConfig {
            threshold_rad: b.threshold_deg.to_radians(),
            decision_step_s: b.decision_step_s,
        },
        out_dir,
        emit_svg: raw.output.emit_svg,
        seed: raw.output.seed,
    })
}
