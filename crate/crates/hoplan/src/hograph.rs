//! Time-expanded handover graph: slot grid, per-slot satellite instances,
//! min-max utility normalization, weighted-sum edge weights, and the layered
//! directed graph a planner searches.
//!
//! The pipeline is: [`build_time_grid`] -> [`enumerate_instances`] ->
//! [`normalize_utilities`] -> [`build_graph`]. Instances are evaluated
//! independently per (satellite, slot); normalization and assembly are a
//! single reduction over the immutable instance set.

use std::sync::Arc;

use crate::channel::{self, ChannelParams, LinkSample};
use crate::constellation::{ConstellationEphemeris, SatId};
use crate::error::{Error, Result};
use crate::geometry::GroundUser;

/// Planning horizon split into `n = T / (2 * lambda)` equal slots.
///
/// Slot `i` (1-based) covers `[center - lambda, center + lambda]` with
/// center `(2i - 1) * lambda`; consecutive slots share a boundary instant
/// and together tile `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    horizon_s: f64,
    relaxation_s: f64,
    slot_centers_s: Vec<f64>,
}

impl TimeGrid {
    pub fn horizon_s(&self) -> f64 {
        self.horizon_s
    }

    /// Half-width of each slot (the handover relaxation), seconds.
    pub fn relaxation_s(&self) -> f64 {
        self.relaxation_s
    }

    pub fn slot_count(&self) -> usize {
        self.slot_centers_s.len()
    }

    pub fn slot_centers_s(&self) -> &[f64] {
        &self.slot_centers_s
    }

    /// Start of 1-based slot `i`. Computed from the integer multiple, so
    /// `slot_end(i)` and `slot_start(i + 1)` are the identical float.
    pub fn slot_start_s(&self, slot: usize) -> f64 {
        debug_assert!((1..=self.slot_count()).contains(&slot));
        (2 * (slot - 1)) as f64 * self.relaxation_s
    }

    /// End of 1-based slot `i` (the handover decision instant).
    pub fn slot_end_s(&self, slot: usize) -> f64 {
        debug_assert!((1..=self.slot_count()).contains(&slot));
        (2 * slot) as f64 * self.relaxation_s
    }

    /// Sample times `start, start + step, ...` within slot `i`, including the
    /// end boundary when the step divides the slot width.
    pub fn slot_samples_s(&self, slot: usize, step_s: f64) -> Vec<f64> {
        debug_assert!(step_s > 0.0);
        let start = self.slot_start_s(slot);
        let end = self.slot_end_s(slot);
        let mut out = Vec::new();
        let mut j = 0u32;
        loop {
            let t = start + j as f64 * step_s;
            if t > end + 1e-9 {
                break;
            }
            out.push(t.min(end));
            j += 1;
        }
        out
    }
}

/// Build the slot grid for horizon `t_s` and relaxation `lambda_s`.
///
/// The horizon must be an exact whole number of `2 * lambda` slots; when it
/// is not, the error names the nearest relaxations that would fit.
pub fn build_time_grid(t_s: f64, lambda_s: f64) -> Result<TimeGrid> {
    if t_s <= 0.0 {
        return Err(Error::invalid("horizon must be > 0"));
    }
    if lambda_s <= 0.0 {
        return Err(Error::invalid("relaxation must be > 0"));
    }
    let ratio = t_s / (2.0 * lambda_s);
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 {
        let lo = ratio.floor().max(1.0);
        let hi = ratio.ceil().max(1.0);
        let mut hint = format!("lambda = {} s (n = {})", t_s / (2.0 * hi), hi);
        if hi != lo && (ratio - n).abs() > 1e-9 {
            hint = format!(
                "lambda = {} s (n = {}) or lambda = {} s (n = {})",
                t_s / (2.0 * hi),
                hi,
                t_s / (2.0 * lo),
                lo
            );
        }
        return Err(Error::invalid(format!(
            "horizon {t_s} s is not a whole number of 2*lambda = {} s slots; nearest: {hint}",
            2.0 * lambda_s
        )));
    }
    let n = n as usize;
    let slot_centers_s = (1..=n).map(|i| (2 * i - 1) as f64 * lambda_s).collect();
    Ok(TimeGrid {
        horizon_s: t_s,
        relaxation_s: lambda_s,
        slot_centers_s,
    })
}

/// One satellite eligible for one slot: visible at every sample of the slot,
/// carrying the slot-mean link metrics.
///
/// `utilities` is empty until [`normalize_utilities`] fills one entry per
/// registered criterion; `weight` is NaN until [`build_graph`] combines them.
#[derive(Debug, Clone)]
pub struct SatelliteInstance {
    pub sat_id: SatId,
    /// 1-based slot index.
    pub slot_index: usize,
    /// Per-sample link evaluations across the slot, in time order.
    pub samples: Vec<LinkSample>,
    pub mean_rate_bps: f64,
    pub mean_delay_s: f64,
    /// Normalized utilities in criteria-registry order, each in [0, 1].
    pub utilities: Vec<f64>,
    /// Weighted-sum cost of handing over to this instance.
    pub weight: f64,
}

/// Whether small raw values are good (delay) or large ones are (rate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    LowerIsBetter,
    HigherIsBetter,
}

/// One named utility criterion: extracts a raw score from an instance and
/// declares which direction is desirable. After min-max normalization a
/// `LowerIsBetter` criterion's utility is the normalized value itself and a
/// `HigherIsBetter` criterion's is one minus it, so 0 is always best.
#[derive(Clone)]
pub struct Criterion {
    pub name: String,
    pub weight: f64,
    pub preference: Preference,
    pub raw: Arc<dyn Fn(&SatelliteInstance) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Criterion")
            .field("name", &self.name)
            .field("weight", &self.weight)
            .field("preference", &self.preference)
            .finish()
    }
}

impl Criterion {
    pub fn new(
        name: impl Into<String>,
        weight: f64,
        preference: Preference,
        raw: impl Fn(&SatelliteInstance) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            weight,
            preference,
            raw: Arc::new(raw),
        }
    }

    /// Mean propagation delay criterion (lower is better).
    pub fn delay(weight: f64) -> Self {
        Self::new("delay", weight, Preference::LowerIsBetter, |inst| {
            inst.mean_delay_s
        })
    }

    /// Mean data-rate criterion (higher is better).
    pub fn rate(weight: f64) -> Self {
        Self::new("rate", weight, Preference::HigherIsBetter, |inst| {
            inst.mean_rate_bps
        })
    }
}

/// Ordered registry of utility criteria with weights summing to 1.
#[derive(Debug, Clone)]
pub struct CriteriaConfig {
    criteria: Vec<Criterion>,
}

impl CriteriaConfig {
    pub fn new(criteria: Vec<Criterion>) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::invalid("at least one criterion is required"));
        }
        let mut sum = 0.0;
        for c in &criteria {
            if !(c.weight.is_finite() && c.weight >= 0.0) {
                return Err(Error::invalid(format!(
                    "criterion '{}' has invalid weight {}",
                    c.name, c.weight
                )));
            }
            sum += c.weight;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "criterion weights must sum to 1, got {sum}"
            )));
        }
        for (i, c) in criteria.iter().enumerate() {
            if criteria[..i].iter().any(|other| other.name == c.name) {
                return Err(Error::invalid(format!("duplicate criterion '{}'", c.name)));
            }
        }
        Ok(Self { criteria })
    }

    /// The shipped delay/rate pair with the given weights.
    pub fn rate_delay(weight_delay: f64, weight_rate: f64) -> Result<Self> {
        Self::new(vec![
            Criterion::delay(weight_delay),
            Criterion::rate(weight_rate),
        ])
    }

    /// Delay and rate weighted 0.5 each.
    pub fn balanced() -> Self {
        Self::rate_delay(0.5, 0.5).expect("0.5/0.5 weights are valid")
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c.name == name)
    }
}

/// Enumerate eligible satellite instances over the grid.
///
/// A satellite earns an instance in a slot only when its elevation stays at
/// or above the user's mask at every sample time in the slot; the instance's
/// metrics are arithmetic means over exactly those samples. Errors with a
/// coverage gap when any slot ends up with no eligible satellite, since no
/// plan could serve that slot.
pub fn enumerate_instances(
    eph: &ConstellationEphemeris,
    user: &GroundUser,
    grid: &TimeGrid,
    params: &ChannelParams,
    sample_step_s: f64,
) -> Result<Vec<SatelliteInstance>> {
    if sample_step_s <= 0.0 {
        return Err(Error::invalid("sample step must be > 0"));
    }
    if sample_step_s > 2.0 * grid.relaxation_s() {
        return Err(Error::invalid(format!(
            "sample step {} s exceeds the slot width {} s",
            sample_step_s,
            2.0 * grid.relaxation_s()
        )));
    }
    params.validate()?;
    let user_pos = user.position_ecef();

    let mut instances = Vec::new();
    for slot in 1..=grid.slot_count() {
        let times = grid.slot_samples_s(slot, sample_step_s);
        let slot_start_len = instances.len();
        for &sat_id in eph.sat_ids() {
            let mut samples = Vec::with_capacity(times.len());
            let mut eligible = true;
            for &t in &times {
                let sat_pos = eph.position_at(sat_id, t)?;
                let sample = channel::link_sample(user_pos, sat_pos, t, params);
                if sample.elevation_rad < user.min_elevation_rad {
                    eligible = false;
                    break;
                }
                samples.push(sample);
            }
            if !eligible {
                continue;
            }
            let count = samples.len() as f64;
            let mean_rate_bps = samples.iter().map(|s| s.rate_bps).sum::<f64>() / count;
            let mean_delay_s = samples.iter().map(|s| s.delay_s).sum::<f64>() / count;
            instances.push(SatelliteInstance {
                sat_id,
                slot_index: slot,
                samples,
                mean_rate_bps,
                mean_delay_s,
                utilities: Vec::new(),
                weight: f64::NAN,
            });
        }
        if instances.len() == slot_start_len {
            return Err(Error::CoverageGap(format!(
                "slot {slot} ([{}, {}] s) has no eligible satellite",
                grid.slot_start_s(slot),
                grid.slot_end_s(slot)
            )));
        }
    }
    Ok(instances)
}

/// Min-max normalize every registered criterion across ALL instances and
/// store the utilities on each instance (one per criterion, registry order).
///
/// A criterion whose raw values are identical across the whole set maps to
/// 0.5 everywhere: the constant shifts every candidate path equally, and 0.5
/// keeps weights inside [0, 1].
pub fn normalize_utilities(
    instances: &mut [SatelliteInstance],
    criteria: &CriteriaConfig,
) -> Result<()> {
    if instances.is_empty() {
        return Err(Error::invalid("cannot normalize an empty instance set"));
    }
    for inst in instances.iter_mut() {
        inst.utilities.clear();
    }
    for criterion in criteria.criteria() {
        let raw: Vec<f64> = instances.iter().map(|i| (criterion.raw)(i)).collect();
        for (i, r) in raw.iter().enumerate() {
            if !r.is_finite() {
                return Err(Error::invalid(format!(
                    "criterion '{}' produced a non-finite raw value for satellite {} slot {}",
                    criterion.name, instances[i].sat_id, instances[i].slot_index
                )));
            }
        }
        let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (inst, r) in instances.iter_mut().zip(&raw) {
            let normalized = if hi == lo { 0.5 } else { (r - lo) / (hi - lo) };
            let u = match criterion.preference {
                Preference::LowerIsBetter => normalized,
                Preference::HigherIsBetter => 1.0 - normalized,
            };
            inst.utilities.push(u);
        }
    }
    Ok(())
}

/// Weighted sum of an instance's normalized utilities.
pub fn edge_weight(instance: &SatelliteInstance, criteria: &CriteriaConfig) -> f64 {
    assert_eq!(
        instance.utilities.len(),
        criteria.criteria().len(),
        "instance utilities not normalized against this criteria registry"
    );
    criteria
        .criteria()
        .iter()
        .zip(&instance.utilities)
        .map(|(c, u)| c.weight * u)
        .sum()
}

/// The layered time-expanded graph.
///
/// Node ids: 0 is the virtual begin node, `1..=m` are the instances (sorted
/// by slot then satellite id), and `m + 1` is the virtual end node. Every
/// edge goes from slot `i` to slot `i + 1` (begin counts as slot 0, end as
/// slot `n + 1`), and an edge's weight is the destination instance's weight
/// (0 into the end node), independent of the source.
#[derive(Debug, Clone)]
pub struct HandoverGraph {
    instances: Vec<SatelliteInstance>,
    /// Per 1-based slot: index range into `instances`.
    slot_ranges: Vec<std::ops::Range<usize>>,
    pinned_start: Option<usize>,
}

/// Out-edges of one node, as a range of destination instances or the end node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Successors {
    /// Destination instances by index into [`HandoverGraph::instances`].
    Instances(std::ops::Range<usize>),
    /// Single zero-weight edge into the virtual end node.
    End,
    /// The end node itself has no successors.
    None,
}

impl HandoverGraph {
    pub fn instances(&self) -> &[SatelliteInstance] {
        &self.instances
    }

    pub fn slot_count(&self) -> usize {
        self.slot_ranges.len()
    }

    /// Instances eligible in 1-based slot `i`.
    pub fn slot_instances(&self, slot: usize) -> &[SatelliteInstance] {
        &self.instances[self.slot_ranges[slot - 1].clone()]
    }

    pub fn per_slot_counts(&self) -> Vec<usize> {
        self.slot_ranges.iter().map(|r| r.len()).collect()
    }

    pub fn begin_node(&self) -> usize {
        0
    }

    pub fn end_node(&self) -> usize {
        self.instances.len() + 1
    }

    /// Instance behind a non-virtual node id.
    pub fn node_instance(&self, node: usize) -> &SatelliteInstance {
        &self.instances[node - 1]
    }

    pub fn node_count(&self) -> u64 {
        self.instances.len() as u64 + 2
    }

    pub fn edge_count(&self) -> u64 {
        let k = self.per_slot_counts();
        let begin_edges = if self.pinned_start.is_some() {
            1
        } else {
            k[0] as u64
        };
        let end_edges = *k.last().unwrap() as u64;
        let between: u64 = k.windows(2).map(|w| (w[0] * w[1]) as u64).sum();
        begin_edges + between + end_edges
    }

    /// Satellite pinned as the mandatory first connection, if any.
    pub fn pinned_start(&self) -> Option<SatId> {
        self.pinned_start.map(|i| self.instances[i].sat_id)
    }

    /// Restrict the begin node to a single slot-1 satellite. Errors when the
    /// satellite has no slot-1 instance (it could never start the plan).
    pub fn set_pinned_start(&mut self, sat: Option<SatId>) -> Result<()> {
        match sat {
            None => {
                self.pinned_start = None;
                Ok(())
            }
            Some(id) => {
                let range = self.slot_ranges[0].clone();
                match self.instances[range.clone()]
                    .iter()
                    .position(|inst| inst.sat_id == id)
                {
                    Some(offset) => {
                        self.pinned_start = Some(range.start + offset);
                        Ok(())
                    }
                    None => Err(Error::invalid(format!(
                        "start satellite {id} is not eligible in slot 1"
                    ))),
                }
            }
        }
    }

    /// Out-edges of `node`. The edge weight into instance index `i` is
    /// `instances[i].weight`; into the end node it is 0.
    pub fn successors(&self, node: usize) -> Successors {
        if node == self.begin_node() {
            return match self.pinned_start {
                Some(idx) => Successors::Instances(idx..idx + 1),
                None => Successors::Instances(self.slot_ranges[0].clone()),
            };
        }
        if node == self.end_node() {
            return Successors::None;
        }
        let slot = self.instances[node - 1].slot_index;
        if slot == self.slot_count() {
            Successors::End
        } else {
            Successors::Instances(self.slot_ranges[slot].clone())
        }
    }

    /// Materialize every edge as (source node, destination node, weight).
    /// Intended for tests and small dumps; the planner walks
    /// [`Self::successors`] without allocating the edge list.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for node in 0..=self.end_node() {
            match self.successors(node) {
                Successors::Instances(range) => {
                    for idx in range {
                        out.push((node, idx + 1, self.instances[idx].weight));
                    }
                }
                Successors::End => out.push((node, self.end_node(), 0.0)),
                Successors::None => {}
            }
        }
        out
    }
}

/// Assemble the graph: compute each instance's weighted-sum cost, sort by
/// (slot, satellite id) for deterministic node numbering, and index the slot
/// layers. Errors with a coverage gap when any slot between 1 and the last
/// populated slot has no instance.
pub fn build_graph(
    mut instances: Vec<SatelliteInstance>,
    criteria: &CriteriaConfig,
) -> Result<HandoverGraph> {
    if instances.is_empty() {
        return Err(Error::CoverageGap("no satellite instances at all".into()));
    }
    for inst in &instances {
        if inst.utilities.len() != criteria.criteria().len() {
            return Err(Error::invalid(format!(
                "instance (sat {}, slot {}) has {} utilities but {} criteria are registered; \
                 run normalize_utilities first",
                inst.sat_id,
                inst.slot_index,
                inst.utilities.len(),
                criteria.criteria().len()
            )));
        }
    }
    for inst in instances.iter_mut() {
        inst.weight = edge_weight(inst, criteria);
    }
    instances.sort_by_key(|a| (a.slot_index, a.sat_id));

    let n_slots = instances.last().unwrap().slot_index;
    let mut slot_ranges = Vec::with_capacity(n_slots);
    let mut start = 0;
    for slot in 1..=n_slots {
        let end = start
            + instances[start..]
                .iter()
                .take_while(|i| i.slot_index == slot)
                .count();
        if end == start {
            return Err(Error::CoverageGap(format!(
                "slot {slot} has no eligible satellite"
            )));
        }
        slot_ranges.push(start..end);
        start = end;
    }
    if instances[0].slot_index < 1 {
        return Err(Error::invalid("slot indices are 1-based"));
    }

    Ok(HandoverGraph {
        instances,
        slot_ranges,
        pinned_start: None,
    })
}

/// Closed-form node and edge counts from per-slot instance counts:
/// `V = 2 + sum(k_i)`, `E = k_1 + k_n + sum(k_i * k_{i+1})`.
pub fn closed_form_counts(per_slot: &[usize]) -> (u64, u64) {
    assert!(!per_slot.is_empty());
    let v = 2 + per_slot.iter().map(|&k| k as u64).sum::<u64>();
    let e = per_slot[0] as u64
        + *per_slot.last().unwrap() as u64
        + per_slot
            .windows(2)
            .map(|w| (w[0] * w[1]) as u64)
            .sum::<u64>();
    (v, e)
}

/// Rough operation count for a Dijkstra run: `E + V * log2(V)`.
pub fn op_estimate(v: u64, e: u64) -> f64 {
    e as f64 + v as f64 * (v as f64).log2()
}

pub const INSTANCE_TABLE_CSV_HEADER: &str = "sat_id,slot,mean_rate_bps,mean_delay_s,u_d,u_r,w";

/// Debug dump of the instance table (one row per instance). Requires the
/// delay and rate criteria to be registered so the u_d/u_r columns exist.
pub fn instance_table_csv(graph: &HandoverGraph, criteria: &CriteriaConfig) -> Result<String> {
    let d_idx = criteria
        .index_of("delay")
        .ok_or_else(|| Error::invalid("instance table dump requires a 'delay' criterion"))?;
    let r_idx = criteria
        .index_of("rate")
        .ok_or_else(|| Error::invalid("instance table dump requires a 'rate' criterion"))?;
    let mut out = String::from(INSTANCE_TABLE_CSV_HEADER);
    out.push('\n');
    for inst in graph.instances() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            inst.sat_id,
            inst.slot_index,
            inst.mean_rate_bps,
            inst.mean_delay_s,
            inst.utilities[d_idx],
            inst.utilities[r_idx],
            inst.weight
        ));
    }
    Ok(out)
}
