//! Ground-user placement and user–satellite geometry: elevation angle,
//! slant range, and the planar nadir-offset distance formula.

use crate::constants::EARTH_RADIUS_M;
use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// A fixed user location on the spherical Earth with its visibility floor.
#[derive(Debug, Clone, Copy)]
pub struct GroundUser {
    /// Geodetic latitude in radians, in [-pi/2, pi/2].
    pub latitude_rad: f64,
    /// Longitude in radians.
    pub longitude_rad: f64,
    /// Height above the sphere in meters.
    pub altitude_m: f64,
    /// Minimum elevation angle for a satellite to count as visible, radians.
    pub min_elevation_rad: f64,
}

impl GroundUser {
    pub fn new(
        latitude_rad: f64,
        longitude_rad: f64,
        altitude_m: f64,
        min_elevation_rad: f64,
    ) -> Result<Self> {
        if latitude_rad.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::invalid(format!(
                "latitude {latitude_rad} rad outside [-pi/2, pi/2]"
            )));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&min_elevation_rad) {
            return Err(Error::invalid(format!(
                "min_elevation {min_elevation_rad} rad outside [0, pi/2)"
            )));
        }
        Ok(Self {
            latitude_rad,
            longitude_rad,
            altitude_m,
            min_elevation_rad,
        })
    }

    /// Earth-fixed Cartesian position of the user.
    pub fn position_ecef(&self) -> Vec3 {
        geodetic_to_ecef(self)
    }
}

/// Instantaneous user–satellite geometry.
#[derive(Debug, Clone, Copy)]
pub struct LinkGeometry {
    pub slant_range_m: f64,
    pub elevation_rad: f64,
    pub visible: bool,
}

/// Spherical-Earth conversion of a geodetic location to Earth-fixed Cartesian.
pub fn geodetic_to_ecef(user: &GroundUser) -> Vec3 {
    let r = EARTH_RADIUS_M + user.altitude_m;
    let (sin_lat, cos_lat) = user.latitude_rad.sin_cos();
    let (sin_lon, cos_lon) = user.longitude_rad.sin_cos();
    Vec3::new(r * cos_lat * cos_lon, r * cos_lat * sin_lon, r * sin_lat)
}

/// Straight-line user–satellite distance in meters. Symmetric in its arguments.
pub fn slant_range(user_pos: Vec3, sat_pos: Vec3) -> f64 {
    user_pos.distance(sat_pos)
}

/// Distance through altitude `h` to a point offset from the sub-satellite
/// point: sqrt(h^2 + (x-o_x)^2 + (y-o_y)^2). All arguments in meters.
///
/// The pipeline uses the full 3D [`slant_range`]; this planar form is the
/// flat-Earth specialization, kept for exact-formula tests and callers that
/// work in local tangent coordinates.
pub fn planar_distance(h: f64, x: f64, y: f64, o_x: f64, o_y: f64) -> f64 {
    let dx = x - o_x;
    let dy = y - o_y;
    (h * h + dx * dx + dy * dy).sqrt()
}

/// Elevation of the satellite above the user's local horizon plane, radians,
/// in [-pi/2, pi/2]. Computed from the angle between the user->satellite
/// vector and the local vertical (the user's radial direction).
pub fn elevation_angle(user_pos: Vec3, sat_pos: Vec3) -> f64 {
    let zenith = user_pos.normalized();
    let to_sat = sat_pos - user_pos;
    let d = to_sat.norm();
    if d == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    // sin(elevation) = radial component / slant range
    (zenith.dot(to_sat) / d).clamp(-1.0, 1.0).asin()
}

/// Full link geometry with the user's visibility rule applied.
pub fn link_geometry(user: &GroundUser, user_pos: Vec3, sat_pos: Vec3) -> LinkGeometry {
    let elevation_rad = elevation_angle(user_pos, sat_pos);
    LinkGeometry {
        slant_range_m: slant_range(user_pos, sat_pos),
        elevation_rad,
        visible: elevation_rad >= user.min_elevation_rad,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn user_at(lat_deg: f64, lon_deg: f64) -> GroundUser {
        GroundUser::new(lat_deg.to_radians(), lon_deg.to_radians(), 0.0, 0.0).unwrap()
    }

    #[test]
    fn ecef_at_equator_prime_meridian() {
        let p = geodetic_to_ecef(&user_at(0.0, 0.0));
        assert!((p.x - 6_371_000.0).abs() < 1e-6);
        assert!(p.y.abs() < 1e-6);
        assert!(p.z.abs() < 1e-6);
    }

    #[test]
    fn ecef_at_north_pole() {
        let p = geodetic_to_ecef(&user_at(90.0, 0.0));
        assert!(p.x.abs() < 1e-3);
        assert!(p.y.abs() < 1e-3);
        assert!((p.z - 6_371_000.0).abs() < 1e-6);
    }

    #[test]
    fn ecef_ottawa() {
        // 45.42 N, 284.30 E
        let p = geodetic_to_ecef(&user_at(45.42, 284.30));
        assert!((p.norm() - 6_371_000.0).abs() < 1e-6);
        let expected_z = 6_371_000.0 * 45.42_f64.to_radians().sin();
        assert!((p.z - expected_z).abs() < 1e-6);
    }

    #[test]
    fn latitude_out_of_range_rejected() {
        assert!(GroundUser::new(2.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn min_elevation_at_zenith_rejected() {
        assert!(GroundUser::new(0.0, 0.0, 0.0, std::f64::consts::FRAC_PI_2).is_err());
    }

    #[test]
    fn slant_range_identical_points_is_zero() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(slant_range(p, p), 0.0);
    }

    #[test]
    fn slant_range_zenith_satellite() {
        let u = Vec3::new(6_371_000.0, 0.0, 0.0);
        let s = Vec3::new(6_921_000.0, 0.0, 0.0);
        assert!((slant_range(u, s) - 550_000.0).abs() < 1e-9);
    }

    #[test]
    fn slant_range_pythagoras() {
        let u = Vec3::new(6_371_000.0, 0.0, 0.0);
        let s = Vec3::new(6_921_000.0, 500_000.0, 0.0);
        let expected = (550_000.0_f64.powi(2) + 500_000.0_f64.powi(2)).sqrt();
        assert!((slant_range(u, s) - expected).abs() < 1e-6);
    }

    #[test]
    fn planar_distance_nadir_is_altitude() {
        assert_eq!(
            planar_distance(550_000.0, 12.0, -7.0, 12.0, -7.0),
            550_000.0
        );
    }

    #[test]
    fn planar_distance_hand_value() {
        let d = planar_distance(550_000.0, 300_000.0, 400_000.0, 0.0, 0.0);
        assert!((d - 743_303.0).abs() < 1.0);
    }

    #[test]
    fn planar_distance_offset_symmetry() {
        let a = planar_distance(550_000.0, 10_000.0, 20_000.0, 3_000.0, 4_000.0);
        let b = planar_distance(550_000.0, 20_000.0, 10_000.0, 4_000.0, 3_000.0);
        assert_eq!(a, b);
    }

    #[test]
    fn elevation_at_zenith() {
        let u = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let s = Vec3::new(EARTH_RADIUS_M + 550_000.0, 0.0, 0.0);
        assert!((elevation_angle(u, s) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn elevation_in_tangent_plane_is_zero() {
        let u = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let s = Vec3::new(EARTH_RADIUS_M, 700_000.0, 0.0);
        assert!(elevation_angle(u, s).abs() < 1e-12);
    }

    #[test]
    fn elevation_matches_spherical_triangle_formula() {
        // Satellite at central angle theta from the user, both in the
        // equatorial plane: elev = atan((cos t - R/r) / sin t).
        let r_orbit = EARTH_RADIUS_M + 550_000.0;
        let theta = 10.0_f64.to_radians();
        let u = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let s = Vec3::new(r_orbit * theta.cos(), r_orbit * theta.sin(), 0.0);
        let expected = ((theta.cos() - EARTH_RADIUS_M / r_orbit) / theta.sin()).atan();
        assert!((elevation_angle(u, s) - expected).abs() < 1e-9);
    }

    #[test]
    fn slant_range_matches_planar_form_in_tangent_geometry() {
        // Satellite placed vertically above a point offset in the user's
        // tangent plane; the 3D range must then equal the planar formula.
        let user = user_at(37.0, -45.0);
        let u = user.position_ecef();
        let up = u.normalized();
        // Build a tangent basis.
        let e1 = Vec3::new(-user.longitude_rad.sin(), user.longitude_rad.cos(), 0.0);
        let e2 = Vec3::new(
            -user.latitude_rad.sin() * user.longitude_rad.cos(),
            -user.latitude_rad.sin() * user.longitude_rad.sin(),
            user.latitude_rad.cos(),
        );
        let (ox, oy, h) = (300_000.0, -120_000.0, 550_000.0);
        let sat = u + e1 * ox + e2 * oy + up * h;
        let expected = planar_distance(h, 0.0, 0.0, ox, oy);
        let got = slant_range(u, sat);
        assert!((got - expected).abs() / expected < 1e-6);
    }

    #[test]
    fn elevation_decreases_with_slant_range_along_pass() {
        // A satellite at fixed orbital radius sweeping past the user: as the
        // central angle grows, range grows and elevation falls.
        let r_orbit = EARTH_RADIUS_M + 550_000.0;
        let u = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let mut last_elev = f64::INFINITY;
        let mut last_range = 0.0;
        for i in 0..30 {
            let theta = (i as f64) * 0.01;
            let s = Vec3::new(r_orbit * theta.cos(), r_orbit * theta.sin(), 0.0);
            let elev = elevation_angle(u, s);
            let range = slant_range(u, s);
            if i > 0 {
                assert!(elev < last_elev);
                assert!(range > last_range);
            }
            last_elev = elev;
            last_range = range;
        }
    }

    #[test]
    fn visibility_monotone_in_threshold() {
        let u_pos = Vec3::new(EARTH_RADIUS_M, 0.0, 0.0);
        let r_orbit = EARTH_RADIUS_M + 550_000.0;
        let theta = 15.0_f64.to_radians();
        let s = Vec3::new(r_orbit * theta.cos(), r_orbit * theta.sin(), 0.0);
        let mut seen_invisible = false;
        for floor_deg in [0.0f64, 5.0, 10.0, 20.0, 40.0, 60.0] {
            let user = GroundUser::new(0.0, 0.0, 0.0, floor_deg.to_radians()).unwrap();
            let g = link_geometry(&user, u_pos, s);
            if seen_invisible {
                assert!(!g.visible, "raising the floor re-admitted a satellite");
            }
            if !g.visible {
                seen_invisible = true;
            }
        }
    }
}
