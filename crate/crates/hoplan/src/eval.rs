//! Plan evaluation: replay a handover plan against the ephemeris into a
//! data-rate time series, summarize it as CDFs and percentiles, count
//! handovers, and evaluate the closed-form search-complexity model.

use crate::channel::{self, ChannelParams};
use crate::constellation::{ConstellationEphemeris, SatId};
use crate::error::{Error, Result};
use crate::geometry::GroundUser;
use crate::hograph;
use crate::planner::HandoverPlan;

/// One replayed sample: who served at `t_s` and at what Shannon rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSample {
    pub t_s: f64,
    pub rate_bps: f64,
    pub serving_sat: SatId,
}

/// The UE's data rate over the horizon under one plan.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    pub samples: Vec<RateSample>,
    pub sample_step_s: f64,
}

impl RateSeries {
    pub fn rates(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rate_bps).collect()
    }
}

/// Node/edge counts and the operation estimate `E + V * log2(V)` for one
/// graph shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityReport {
    pub v: u64,
    pub e: u64,
    pub op_estimate: f64,
}

impl ComplexityReport {
    /// From explicit per-slot instance counts.
    pub fn from_counts(k_per_slot: &[usize]) -> Self {
        assert!(
            k_per_slot.iter().all(|&k| k >= 1),
            "every slot needs at least one instance"
        );
        let (v, e) = hograph::closed_form_counts(k_per_slot);
        Self {
            v,
            e,
            op_estimate: hograph::op_estimate(v, e),
        }
    }

    /// Full visibility: `k` satellites eligible in every one of `n` slots.
    pub fn uniform(k: usize, n: usize) -> Self {
        assert!(k >= 1 && n >= 1);
        Self::from_counts(&vec![k; n])
    }
}

/// Replay `plan` against the ephemeris at `sample_step_s` spacing.
///
/// Samples run from 0 to the plan's end inclusive; each sample takes the
/// rate of the satellite the plan designates at that instant (the incoming
/// satellite exactly at a handover epoch). Errors when the plan serves a
/// satellite the ephemeris does not know.
pub fn simulate_rate(
    plan: &HandoverPlan,
    eph: &ConstellationEphemeris,
    user: &GroundUser,
    params: &ChannelParams,
    sample_step_s: f64,
) -> Result<RateSeries> {
    if sample_step_s <= 0.0 {
        return Err(Error::invalid("sample step must be > 0"));
    }
    let first = plan
        .segments
        .first()
        .ok_or_else(|| Error::InvalidPlan("plan has no segments".into()))?;
    if first.start_s != 0.0 {
        return Err(Error::InvalidPlan(format!(
            "plan starts at {} s instead of 0",
            first.start_s
        )));
    }
    let horizon = plan.segments.last().unwrap().end_s;
    let user_pos = user.position_ecef();

    let mut times: Vec<f64> = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * sample_step_s;
        if t > horizon {
            break;
        }
        times.push(t);
        k += 1;
    }
    if *times.last().unwrap() < horizon {
        times.push(horizon);
    }

    let mut samples = Vec::with_capacity(times.len());
    for t in times {
        let sat = plan
            .serving_at(t)
            .ok_or_else(|| Error::InvalidPlan(format!("plan does not cover t = {t} s")))?;
        if !eph.contains(sat) {
            return Err(Error::InvalidPlan(format!(
                "serving satellite {sat} is not in the ephemeris"
            )));
        }
        let pos = eph.position_at(sat, t)?;
        let link = channel::link_sample(user_pos, pos, t, params);
        samples.push(RateSample {
            t_s: t,
            rate_bps: link.rate_bps,
            serving_sat: sat,
        });
    }
    Ok(RateSeries {
        samples,
        sample_step_s,
    })
}

/// Nearest-rank percentile of the series' rates: the `ceil(p * N)`-th
/// smallest value, with `p = 0` mapping to the minimum. No interpolation,
/// so results are reproducible bit for bit.
pub fn percentile(series: &RateSeries, p: f64) -> Result<f64> {
    if series.samples.is_empty() {
        return Err(Error::invalid(
            "cannot take a percentile of an empty series",
        ));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("percentile {p} outside [0, 1]")));
    }
    let mut rates = series.rates();
    rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = rates.len();
    let rank = ((p * n as f64).ceil() as usize).max(1).min(n);
    Ok(rates[rank - 1])
}

/// Empirical CDF of the series' rates: every sorted rate paired with the
/// cumulative fraction `i / N`, a right-continuous step function ending at 1.
pub fn cdf_points(series: &RateSeries) -> Vec<(f64, f64)> {
    let mut rates = series.rates();
    rates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = rates.len() as f64;
    rates
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, (i + 1) as f64 / n))
        .collect()
}

/// Number of adjacent serving-satellite changes in the plan.
pub fn count_handovers(plan: &HandoverPlan) -> usize {
    plan.segments
        .windows(2)
        .filter(|w| w[0].sat_id != w[1].sat_id)
        .count()
}

pub const SERIES_CSV_HEADER: &str = "t_s,rate_bps,serving_sat";
pub const CDF_CSV_HEADER: &str = "rate_bps,fraction";
pub const COMPLEXITY_CSV_HEADER: &str = "lambda_s,n,V,E,ops";

pub fn series_to_csv(series: &RateSeries) -> String {
    let mut out = String::from(SERIES_CSV_HEADER);
    out.push('\n');
    for s in &series.samples {
        out.push_str(&format!("{},{},{}\n", s.t_s, s.rate_bps, s.serving_sat));
    }
    out
}

pub fn cdf_to_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from(CDF_CSV_HEADER);
    out.push('\n');
    for (rate, fraction) in points {
        out.push_str(&format!("{rate},{fraction}\n"));
    }
    out
}
