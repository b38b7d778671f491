//! Physical constants shared across the crate.

/// Speed of light in m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Geocentric gravitational constant in m^3/s^2.
pub const MU_EARTH: f64 = 3.986_004_418e14;

/// Mean Earth radius in meters (spherical Earth model).
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Earth rotation rate in rad/s.
pub const EARTH_ROTATION_RAD_S: f64 = 7.292_115_9e-5;
