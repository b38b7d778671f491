//! Walker-style circular-orbit constellation generation, ephemeris tables,
//! and position queries.
//!
//! An ephemeris is a dense (satellite, epoch) grid of Earth-fixed positions.
//! It can be generated from an [`OrbitalShell`] or loaded from the CSV schema
//! documented at [`load_ephemeris_str`], so externally produced tables (from
//! a real propagator) interchange with generated ones.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::constants::{EARTH_RADIUS_M, EARTH_ROTATION_RAD_S, MU_EARTH};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Satellite identifier. Walker generation assigns `plane * sats_per_plane + slot`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SatId(pub u32);

impl fmt::Display for SatId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One shell of a Walker constellation: circular orbits at a common altitude
/// and inclination, planes spread in right ascension.
#[derive(Debug, Clone, Copy)]
pub struct OrbitalShell {
    pub planes: u32,
    pub sats_per_plane: u32,
    /// Altitude above the spherical Earth, meters.
    pub altitude_m: f64,
    /// Inclination in radians, in [0, pi].
    pub inclination_rad: f64,
    /// In-plane phase shift between adjacent planes, as a fraction of the
    /// in-plane satellite spacing. 0 = no phasing.
    pub phasing_offset: f64,
    /// Total right-ascension span the planes are spread across, radians.
    /// 2*pi gives the classic Walker-delta spacing of `span / planes`.
    pub raan_spread_rad: f64,
}

impl OrbitalShell {
    pub fn new(
        planes: u32,
        sats_per_plane: u32,
        altitude_m: f64,
        inclination_rad: f64,
    ) -> Result<Self> {
        let shell = Self {
            planes,
            sats_per_plane,
            altitude_m,
            inclination_rad,
            phasing_offset: 0.0,
            raan_spread_rad: std::f64::consts::TAU,
        };
        shell.validate()?;
        Ok(shell)
    }

    pub fn validate(&self) -> Result<()> {
        if self.planes < 1 {
            return Err(Error::invalid("planes must be >= 1"));
        }
        if self.sats_per_plane < 1 {
            return Err(Error::invalid("sats_per_plane must be >= 1"));
        }
        if self.altitude_m <= 0.0 {
            return Err(Error::invalid("altitude must be > 0"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.inclination_rad) {
            return Err(Error::invalid("inclination must be in [0, pi]"));
        }
        Ok(())
    }

    pub fn satellite_count(&self) -> u32 {
        self.planes * self.sats_per_plane
    }

    /// Orbital radius: Earth radius plus altitude, meters.
    pub fn orbital_radius_m(&self) -> f64 {
        EARTH_RADIUS_M + self.altitude_m
    }

    /// Keplerian period 2*pi*sqrt(a^3 / mu), seconds.
    pub fn orbital_period_s(&self) -> f64 {
        let a = self.orbital_radius_m();
        std::f64::consts::TAU * (a.powi(3) / MU_EARTH).sqrt()
    }
}

/// Time-indexed Earth-fixed positions for every satellite over a horizon.
///
/// Dense table: every satellite has a position at every epoch, epochs are
/// strictly increasing, and every position lies above the Earth's surface.
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct ConstellationEphemeris {
    sat_ids: Vec<SatId>,
    epochs_s: Vec<f64>,
    /// Row-major by epoch: `positions[epoch_idx * sat_count + sat_idx]`.
    positions: Vec<Vec3>,
    sat_index: HashMap<SatId, usize>,
}

impl ConstellationEphemeris {
    pub fn new(sat_ids: Vec<SatId>, epochs_s: Vec<f64>, positions: Vec<Vec3>) -> Result<Self> {
        if sat_ids.is_empty() {
            return Err(Error::invalid("ephemeris needs at least one satellite"));
        }
        if epochs_s.is_empty() {
            return Err(Error::invalid("ephemeris needs at least one epoch"));
        }
        if positions.len() != sat_ids.len() * epochs_s.len() {
            return Err(Error::invalid(format!(
                "position table has {} entries, expected {} sats x {} epochs = {}",
                positions.len(),
                sat_ids.len(),
                epochs_s.len(),
                sat_ids.len() * epochs_s.len()
            )));
        }
        for pair in epochs_s.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::invalid(format!(
                    "epochs not strictly increasing at t={} -> t={}",
                    pair[0], pair[1]
                )));
            }
        }
        for (i, p) in positions.iter().enumerate() {
            if p.norm() <= EARTH_RADIUS_M {
                return Err(Error::invalid(format!(
                    "position {} is at or below the Earth surface (|p| = {} m)",
                    i,
                    p.norm()
                )));
            }
        }
        let mut sat_index = HashMap::with_capacity(sat_ids.len());
        for (i, id) in sat_ids.iter().enumerate() {
            if sat_index.insert(*id, i).is_some() {
                return Err(Error::invalid(format!("duplicate satellite id {id}")));
            }
        }
        Ok(Self {
            sat_ids,
            epochs_s,
            positions,
            sat_index,
        })
    }

    pub fn sat_ids(&self) -> &[SatId] {
        &self.sat_ids
    }

    pub fn epochs_s(&self) -> &[f64] {
        &self.epochs_s
    }

    pub fn first_epoch_s(&self) -> f64 {
        self.epochs_s[0]
    }

    pub fn last_epoch_s(&self) -> f64 {
        *self.epochs_s.last().unwrap()
    }

    pub fn contains(&self, sat_id: SatId) -> bool {
        self.sat_index.contains_key(&sat_id)
    }

    /// Stored position by table indices (no interpolation).
    pub fn position_at_index(&self, sat_idx: usize, epoch_idx: usize) -> Vec3 {
        self.positions[epoch_idx * self.sat_ids.len() + sat_idx]
    }

    /// Earth-fixed position of `sat_id` at time `t_s`, linearly interpolated
    /// between the bracketing epochs. Exact at grid epochs. Errors when `t_s`
    /// falls outside the table; there is no extrapolation.
    pub fn position_at(&self, sat_id: SatId, t_s: f64) -> Result<Vec3> {
        let sat_idx = *self
            .sat_index
            .get(&sat_id)
            .ok_or_else(|| Error::invalid(format!("unknown satellite id {sat_id}")))?;
        if t_s < self.first_epoch_s() || t_s > self.last_epoch_s() {
            return Err(Error::OutOfRange(format!(
                "t = {} s outside ephemeris range [{}, {}] s",
                t_s,
                self.first_epoch_s(),
                self.last_epoch_s()
            )));
        }
        match self
            .epochs_s
            .binary_search_by(|e| e.partial_cmp(&t_s).unwrap())
        {
            Ok(i) => Ok(self.position_at_index(sat_idx, i)),
            Err(i) => {
                // Bracketing epochs i-1 and i exist because t is in range.
                let (t0, t1) = (self.epochs_s[i - 1], self.epochs_s[i]);
                let p0 = self.position_at_index(sat_idx, i - 1);
                let p1 = self.position_at_index(sat_idx, i);
                let w = (t_s - t0) / (t1 - t0);
                Ok(p0 + (p1 - p0) * w)
            }
        }
    }
}

/// Inertial Cartesian position of one Walker satellite at time `t_s`.
///
/// The satellite moves on a circle of radius (Earth radius + altitude) in the
/// plane set by the shell inclination and the plane's right ascension, at the
/// Keplerian angular rate sqrt(mu / a^3).
pub fn propagate_circular(
    shell: &OrbitalShell,
    plane_index: u32,
    slot_index: u32,
    t_s: f64,
) -> Result<Vec3> {
    shell.validate()?;
    if plane_index >= shell.planes {
        return Err(Error::invalid(format!(
            "plane index {} out of range (planes = {})",
            plane_index, shell.planes
        )));
    }
    if slot_index >= shell.sats_per_plane {
        return Err(Error::invalid(format!(
            "slot index {} out of range (sats_per_plane = {})",
            slot_index, shell.sats_per_plane
        )));
    }
    let a = shell.orbital_radius_m();
    let rate = (MU_EARTH / a.powi(3)).sqrt();
    let raan = shell.raan_spread_rad * plane_index as f64 / shell.planes as f64;
    let in_plane_spacing = std::f64::consts::TAU / shell.sats_per_plane as f64;
    let phase = in_plane_spacing * (slot_index as f64 + shell.phasing_offset * plane_index as f64);
    let u = phase + rate * t_s;

    let (sin_u, cos_u) = u.sin_cos();
    let (sin_raan, cos_raan) = raan.sin_cos();
    let (sin_inc, cos_inc) = shell.inclination_rad.sin_cos();
    Ok(Vec3::new(
        a * (cos_u * cos_raan - sin_u * cos_inc * sin_raan),
        a * (cos_u * sin_raan + sin_u * cos_inc * cos_raan),
        a * sin_u * sin_inc,
    ))
}

/// Rotate an inertial position into the Earth-fixed frame at time `t_s`
/// (rotation about the polar axis by the Earth rotation rate). Norm-preserving.
pub fn inertial_to_earth_fixed(pos: Vec3, t_s: f64) -> Vec3 {
    let angle = EARTH_ROTATION_RAD_S * t_s;
    let (sin_a, cos_a) = angle.sin_cos();
    Vec3::new(
        pos.x * cos_a + pos.y * sin_a,
        -pos.x * sin_a + pos.y * cos_a,
        pos.z,
    )
}

/// Generate a Walker-shell ephemeris sampled at every multiple of `step_s`
/// in `[0, horizon_s]`. Earth-fixed positions.
pub fn generate_walker(
    shell: &OrbitalShell,
    horizon_s: f64,
    step_s: f64,
) -> Result<ConstellationEphemeris> {
    shell.validate()?;
    if step_s <= 0.0 {
        return Err(Error::invalid("step must be > 0"));
    }
    if horizon_s < 0.0 {
        return Err(Error::invalid("horizon must be >= 0"));
    }
    let n_epochs = (horizon_s / step_s).floor() as usize + 1;
    let epochs: Vec<f64> = (0..n_epochs).map(|i| i as f64 * step_s).collect();

    let k = shell.satellite_count();
    let sat_ids: Vec<SatId> = (0..k).map(SatId).collect();
    let mut positions = Vec::with_capacity(k as usize * n_epochs);
    for &t in &epochs {
        for plane in 0..shell.planes {
            for slot in 0..shell.sats_per_plane {
                let inertial = propagate_circular(shell, plane, slot, t)?;
                positions.push(inertial_to_earth_fixed(inertial, t));
            }
        }
    }
    ConstellationEphemeris::new(sat_ids, epochs, positions)
}

// ---------------------------------------------------------------------------
// Ephemeris CSV
// ---------------------------------------------------------------------------

pub const EPHEMERIS_CSV_HEADER: &str = "t_s,sat_id,x_m,y_m,z_m";

/// Serialize the table in the ephemeris CSV schema: one row per
/// (epoch, satellite), rows grouped by epoch ascending. Floats are written
/// with the shortest representation that parses back to the identical value,
/// so save/load round-trips are lossless.
pub fn ephemeris_to_csv(eph: &ConstellationEphemeris) -> String {
    let mut out = String::new();
    out.push_str(EPHEMERIS_CSV_HEADER);
    out.push('\n');
    for (ei, t) in eph.epochs_s().iter().enumerate() {
        for (si, id) in eph.sat_ids().iter().enumerate() {
            let p = eph.position_at_index(si, ei);
            out.push_str(&format!("{},{},{},{},{}\n", t, id, p.x, p.y, p.z));
        }
    }
    out
}

pub fn save_ephemeris(eph: &ConstellationEphemeris, path: &Path) -> Result<()> {
    crate::artifact::write_atomic(path, ephemeris_to_csv(eph).as_bytes())
}

pub fn load_ephemeris(path: &Path) -> Result<ConstellationEphemeris> {
    let text = std::fs::read_to_string(path)?;
    load_ephemeris_str(&text)
}

/// Parse an ephemeris table from the CSV schema `t_s,sat_id,x_m,y_m,z_m`.
///
/// Strict reader: the header must match exactly, every row needs five
/// fields, rows must be grouped by strictly increasing epoch, and every
/// epoch block must contain exactly the satellites of the first block.
/// All failures name the 1-based line (the header is line 1).
pub fn load_ephemeris_str(text: &str) -> Result<ConstellationEphemeris> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    if header.trim_end_matches('\r') != EPHEMERIS_CSV_HEADER {
        return Err(parse_err(
            1,
            format!("expected header '{EPHEMERIS_CSV_HEADER}', found '{header}'"),
        ));
    }

    struct Row {
        line: usize,
        t: f64,
        id: SatId,
        pos: Vec3,
    }
    let mut rows: Vec<Row> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(
                line,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let t: f64 = fields[0]
            .parse()
            .map_err(|_| parse_err(line, format!("bad t_s value '{}'", fields[0])))?;
        let id: u32 = fields[1]
            .parse()
            .map_err(|_| parse_err(line, format!("bad sat_id value '{}'", fields[1])))?;
        let mut coords = [0.0_f64; 3];
        for (c, f) in coords.iter_mut().zip(&fields[2..5]) {
            *c = f
                .parse()
                .map_err(|_| parse_err(line, format!("bad coordinate value '{f}'")))?;
        }
        let pos = Vec3::new(coords[0], coords[1], coords[2]);
        if pos.norm() <= EARTH_RADIUS_M {
            return Err(parse_err(
                line,
                format!(
                    "position below the Earth surface (|p| = {:.0} m <= {:.0} m)",
                    pos.norm(),
                    EARTH_RADIUS_M
                ),
            ));
        }
        if !t.is_finite() {
            return Err(parse_err(line, format!("non-finite epoch {t}")));
        }
        rows.push(Row {
            line,
            t,
            id: SatId(id),
            pos,
        });
    }
    if rows.is_empty() {
        return Err(parse_err(2, "no data rows".into()));
    }

    // Split into epoch blocks, requiring strictly increasing group order.
    let mut sat_ids: Vec<SatId> = Vec::new();
    let mut epochs: Vec<f64> = Vec::new();
    let mut positions: Vec<Vec3> = Vec::new();
    let mut block: HashMap<SatId, (usize, Vec3)> = HashMap::new();
    let mut block_t = rows[0].t;
    let mut block_first_line = rows[0].line;

    let flush = |block: &mut HashMap<SatId, (usize, Vec3)>,
                 block_t: f64,
                 block_end_line: usize,
                 sat_ids: &mut Vec<SatId>,
                 epochs: &mut Vec<f64>,
                 positions: &mut Vec<Vec3>|
     -> Result<()> {
        if epochs.is_empty() {
            // First block defines the satellite set; keep id order sorted for
            // external files, which makes the table layout deterministic.
            let mut ids: Vec<SatId> = block.keys().copied().collect();
            ids.sort();
            *sat_ids = ids;
        }
        if block.len() != sat_ids.len() {
            for id in sat_ids.iter() {
                if !block.contains_key(id) {
                    return Err(Error::Parse {
                        line: block_end_line,
                        message: format!("satellite {id} missing at epoch t = {block_t} s"),
                    });
                }
            }
        }
        for id in block.keys() {
            if !sat_ids.contains(id) {
                return Err(Error::Parse {
                    line: block[id].0,
                    message: format!("satellite {id} appears at epoch t = {block_t} s but not in the first epoch"),
                });
            }
        }
        epochs.push(block_t);
        for id in sat_ids.iter() {
            positions.push(block[id].1);
        }
        block.clear();
        Ok(())
    };

    for row in &rows {
        if row.t != block_t {
            if row.t < block_t {
                return Err(parse_err(
                    row.line,
                    format!(
                        "epochs not grouped ascending: t = {} s after t = {} s",
                        row.t, block_t
                    ),
                ));
            }
            flush(
                &mut block,
                block_t,
                row.line - 1,
                &mut sat_ids,
                &mut epochs,
                &mut positions,
            )?;
            block_t = row.t;
            block_first_line = row.line;
        }
        if block.insert(row.id, (row.line, row.pos)).is_some() {
            return Err(parse_err(
                row.line,
                format!("duplicate satellite {} at epoch t = {} s", row.id, row.t),
            ));
        }
    }
    let last_line = rows.last().map(|r| r.line).unwrap_or(block_first_line);
    flush(
        &mut block,
        block_t,
        last_line,
        &mut sat_ids,
        &mut epochs,
        &mut positions,
    )?;

    ConstellationEphemeris::new(sat_ids, epochs, positions)
}
