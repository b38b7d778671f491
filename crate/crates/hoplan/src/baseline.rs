//! Legacy elevation-threshold handover method: stay on the serving
//! satellite until its elevation drops below a trigger angle, then jump to
//! the highest satellite currently visible.

use crate::constellation::{ConstellationEphemeris, SatId};
use crate::error::{Error, Result};
use crate::geometry::{self, GroundUser};
use crate::planner::{HandoverPlan, PlanMethod, PlanSegment};
use crate::vec3::Vec3;

/// Trigger settings for the threshold method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    /// Elevation below which a handover is triggered, radians.
    pub threshold_rad: f64,
    /// Spacing of the trigger checks, seconds.
    pub decision_step_s: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            threshold_rad: 10.0_f64.to_radians(),
            decision_step_s: 10.0,
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threshold_rad < 0.0 {
            return Err(Error::invalid("threshold must be >= 0"));
        }
        if self.decision_step_s <= 0.0 {
            return Err(Error::invalid("decision step must be > 0"));
        }
        Ok(())
    }
}

fn elevation_of(eph: &ConstellationEphemeris, sat: SatId, user_pos: Vec3, t_s: f64) -> Result<f64> {
    Ok(geometry::elevation_angle(
        user_pos,
        eph.position_at(sat, t_s)?,
    ))
}

/// Highest-elevation satellite at `t_s` among those above the user's mask.
fn best_visible(
    eph: &ConstellationEphemeris,
    user: &GroundUser,
    user_pos: Vec3,
    t_s: f64,
) -> Result<Option<(SatId, f64)>> {
    let mut best: Option<(SatId, f64)> = None;
    for &sat in eph.sat_ids() {
        let elev = elevation_of(eph, sat, user_pos, t_s)?;
        if elev < user.min_elevation_rad {
            continue;
        }
        // Ties go to the lower satellite id so runs are reproducible.
        let better = match best {
            None => true,
            Some((_, e)) => elev > e,
        };
        if better {
            best = Some((sat, elev));
        }
    }
    Ok(best)
}

/// Simulate threshold-triggered handovers over `[0, horizon_s]`.
///
/// Serving starts on `start_sat` when given (it must be visible at t = 0),
/// otherwise on the highest-elevation visible satellite. At every decision
/// step the serving elevation is checked against the trigger angle; a
/// breach hands the connection to the best visible satellite at that
/// instant. Errors with a coverage gap when a trigger finds nothing visible.
pub fn threshold_plan(
    eph: &ConstellationEphemeris,
    user: &GroundUser,
    horizon_s: f64,
    cfg: &ThresholdConfig,
    start_sat: Option<SatId>,
) -> Result<HandoverPlan> {
    cfg.validate()?;
    if horizon_s <= 0.0 {
        return Err(Error::invalid("horizon must be > 0"));
    }
    let user_pos = user.position_ecef();

    let mut serving = match start_sat {
        Some(sat) => {
            let elev = elevation_of(eph, sat, user_pos, 0.0)?;
            if elev < user.min_elevation_rad {
                return Err(Error::invalid(format!(
                    "start satellite {sat} is not visible at t = 0 \
                     (elevation {:.2} deg below the {:.2} deg mask)",
                    elev.to_degrees(),
                    user.min_elevation_rad.to_degrees()
                )));
            }
            sat
        }
        None => {
            best_visible(eph, user, user_pos, 0.0)?
                .ok_or_else(|| Error::CoverageGap("no visible satellite at t = 0".into()))?
                .0
        }
    };

    let mut segments: Vec<PlanSegment> = Vec::new();
    let mut handovers: Vec<f64> = Vec::new();
    let mut segment_start = 0.0;

    let steps = (horizon_s / cfg.decision_step_s).floor() as u64;
    for k in 1..=steps {
        let t = k as f64 * cfg.decision_step_s;
        let elev = elevation_of(eph, serving, user_pos, t)?;
        if elev >= cfg.threshold_rad {
            continue;
        }
        let (target, _) = best_visible(eph, user, user_pos, t)?
            .ok_or_else(|| Error::CoverageGap(format!("no visible satellite at t = {t} s")))?;
        if target == serving {
            // Even the best candidate is the one we already hold.
            continue;
        }
        segments.push(PlanSegment {
            slot: segments.len() + 1,
            sat_id: serving,
            start_s: segment_start,
            end_s: t,
            handover_at_s: Some(t),
        });
        handovers.push(t);
        serving = target;
        segment_start = t;
    }
    segments.push(PlanSegment {
        slot: segments.len() + 1,
        sat_id: serving,
        start_s: segment_start,
        end_s: horizon_s,
        handover_at_s: None,
    });

    Ok(HandoverPlan {
        method: PlanMethod::Threshold,
        segments,
        handover_epochs_s: handovers,
        total_cost: None,
    })
}
