//! Shortest-path handover planning over the time-expanded graph, plan
//! extraction with handover timings, and a brute-force optimality oracle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::constellation::SatId;
use crate::error::{Error, Result};
use crate::hograph::{HandoverGraph, Successors, TimeGrid};

/// Which method produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMethod {
    /// Graph-based planning (shortest path over the time-expanded graph).
    Graph,
    /// Legacy elevation-threshold triggering.
    Threshold,
}

impl PlanMethod {
    pub fn label(&self) -> &'static str {
        match self {
            PlanMethod::Graph => "graph",
            PlanMethod::Threshold => "threshold",
        }
    }
}

/// One serving interval of a plan. For graph plans a segment is exactly one
/// grid slot; for threshold plans it is the span between two triggers and
/// `slot` is the 1-based segment ordinal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSegment {
    pub slot: usize,
    pub sat_id: SatId,
    pub start_s: f64,
    pub end_s: f64,
    /// Time of the handover ending this segment; `None` on the final segment
    /// and wherever the next segment keeps the same satellite.
    pub handover_at_s: Option<f64>,
}

/// A serving schedule over the horizon: which satellite serves when, where
/// the handovers land, and (for graph plans) the traversed edge-weight sum.
#[derive(Debug, Clone, PartialEq)]
pub struct HandoverPlan {
    pub method: PlanMethod,
    pub segments: Vec<PlanSegment>,
    /// Epochs at which the serving satellite actually changes.
    pub handover_epochs_s: Vec<f64>,
    /// Sum of traversed edge weights; `None` for threshold plans, which do
    /// not optimize a cost.
    pub total_cost: Option<f64>,
}

pub const PLAN_CSV_HEADER: &str = "slot,sat_id,start_s,end_s,handover_at_s";

impl HandoverPlan {
    pub fn handover_count(&self) -> usize {
        self.handover_epochs_s.len()
    }

    /// (satellite, slot) pairs in serving order.
    pub fn sequence(&self) -> Vec<(SatId, usize)> {
        self.segments.iter().map(|s| (s.sat_id, s.slot)).collect()
    }

    /// Satellite serving at time `t_s`. Segments are half-open `[start, end)`
    /// so a handover instant already belongs to the incoming satellite; the
    /// final segment includes its end. `None` outside the plan's span.
    pub fn serving_at(&self, t_s: f64) -> Option<SatId> {
        let last = self.segments.last()?;
        if t_s == last.end_s {
            return Some(last.sat_id);
        }
        self.segments
            .iter()
            .find(|seg| seg.start_s <= t_s && t_s < seg.end_s)
            .map(|seg| seg.sat_id)
    }

    /// Serialize in the plan CSV schema. `handover_at_s` is left empty on
    /// segments that do not end in a handover.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(PLAN_CSV_HEADER);
        out.push('\n');
        for seg in &self.segments {
            let handover = seg.handover_at_s.map(|t| t.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                seg.slot, seg.sat_id, seg.start_s, seg.end_s, handover
            ));
        }
        out
    }
}

/// A solved begin-to-end path: node ids including the virtual endpoints,
/// the summed edge weight, and how many nodes the search settled (0 for the
/// brute-force oracle, which does not run a node-settling search).
#[derive(Debug, Clone, PartialEq)]
pub struct PathSolution {
    pub nodes: Vec<usize>,
    pub total_cost: f64,
    pub settled: usize,
}

#[derive(Debug, PartialEq)]
struct HeapEntry {
    cost: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Finite costs by construction (sums of weights in [0, 1]).
        self.cost
            .partial_cmp(&other.cost)
            .unwrap()
            .then(self.node.cmp(&other.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from the virtual begin node to the virtual end node.
///
/// Deterministic everywhere: the heap orders by (cost, node id) and an
/// equal-cost relaxation keeps the lower-id predecessor, so ties resolve to
/// the lower satellite id layer by layer and the returned path is
/// reproducible across runs and platforms.
pub fn shortest_path(graph: &HandoverGraph) -> Result<PathSolution> {
    let node_count = graph.end_node() + 1;
    let mut dist = vec![f64::INFINITY; node_count];
    let mut pred = vec![usize::MAX; node_count];
    let mut done = vec![false; node_count];
    let mut settled = 0usize;

    let mut heap = BinaryHeap::new();
    dist[graph.begin_node()] = 0.0;
    heap.push(std::cmp::Reverse(HeapEntry {
        cost: 0.0,
        node: graph.begin_node(),
    }));

    while let Some(std::cmp::Reverse(HeapEntry { cost, node })) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        settled += 1;
        if node == graph.end_node() {
            break;
        }
        let mut relax = |next: usize, weight: f64, heap: &mut BinaryHeap<_>| {
            let candidate = cost + weight;
            if candidate < dist[next] {
                dist[next] = candidate;
                pred[next] = node;
                heap.push(std::cmp::Reverse(HeapEntry {
                    cost: candidate,
                    node: next,
                }));
            } else if candidate == dist[next] && node < pred[next] {
                pred[next] = node;
            }
        };
        match graph.successors(node) {
            Successors::Instances(range) => {
                for idx in range {
                    relax(idx + 1, graph.instances()[idx].weight, &mut heap);
                }
            }
            Successors::End => relax(graph.end_node(), 0.0, &mut heap),
            Successors::None => {}
        }
    }

    if !done[graph.end_node()] {
        return Err(Error::CoverageGap(
            "virtual end node unreachable from begin".into(),
        ));
    }
    let mut nodes = vec![graph.end_node()];
    while *nodes.last().unwrap() != graph.begin_node() {
        nodes.push(pred[*nodes.last().unwrap()]);
    }
    nodes.reverse();
    Ok(PathSolution {
        nodes,
        total_cost: dist[graph.end_node()],
        settled,
    })
}

/// Exhaustive enumeration of every slot-consistent satellite sequence.
///
/// The true-minimum oracle the shortest path is tested against. Refuses
/// search spaces above a million sequences; ties resolve to the first
/// minimum in slot-major node order, which may pick a different equal-cost
/// sequence than [`shortest_path`] — only total cost is comparable.
pub fn brute_force_plan(graph: &HandoverGraph) -> Result<PathSolution> {
    let mut space = 1u64;
    let mut ranges = Vec::with_capacity(graph.slot_count());
    let mut offset = 0usize;
    for slot in 1..=graph.slot_count() {
        let len = graph.slot_instances(slot).len();
        let range = offset..offset + len;
        offset += len;
        let choices = if slot == 1 {
            match graph.successors(graph.begin_node()) {
                Successors::Instances(r) => r,
                _ => unreachable!("begin node always points at slot 1"),
            }
        } else {
            range
        };
        space = space.saturating_mul(choices.len() as u64);
        ranges.push(choices);
    }
    const GUARD: u64 = 1_000_000;
    if space > GUARD {
        return Err(Error::invalid(format!(
            "brute-force search space of {space} sequences exceeds the {GUARD} guard"
        )));
    }

    let mut best_cost = f64::INFINITY;
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(ranges.len());

    fn recurse(
        graph: &HandoverGraph,
        ranges: &[std::ops::Range<usize>],
        depth: usize,
        cost_so_far: f64,
        current: &mut Vec<usize>,
        best_cost: &mut f64,
        best: &mut Vec<usize>,
    ) {
        if depth == ranges.len() {
            if cost_so_far < *best_cost {
                *best_cost = cost_so_far;
                *best = current.clone();
            }
            return;
        }
        for idx in ranges[depth].clone() {
            current.push(idx);
            let w = graph.instances()[idx].weight;
            recurse(
                graph,
                ranges,
                depth + 1,
                cost_so_far + w,
                current,
                best_cost,
                best,
            );
            current.pop();
        }
    }
    recurse(
        graph,
        &ranges,
        0,
        0.0,
        &mut current,
        &mut best_cost,
        &mut best,
    );

    let mut nodes = Vec::with_capacity(ranges.len() + 2);
    nodes.push(graph.begin_node());
    nodes.extend(best.iter().map(|idx| idx + 1));
    nodes.push(graph.end_node());
    Ok(PathSolution {
        nodes,
        total_cost: best_cost,
        settled: 0,
    })
}

/// Turn a solved node path into a serving schedule on the grid.
///
/// Strips the virtual endpoints; each instance node becomes one segment over
/// its slot, and a handover is recorded at the slot boundary (center plus
/// relaxation) whenever the satellite changes between consecutive slots.
pub fn extract_plan(path: &[usize], graph: &HandoverGraph, grid: &TimeGrid) -> HandoverPlan {
    assert!(path.len() >= 3, "path must contain begin, instances, end");
    assert_eq!(path[0], graph.begin_node(), "path must start at begin");
    assert_eq!(
        *path.last().unwrap(),
        graph.end_node(),
        "path must stop at end"
    );
    let instance_nodes = &path[1..path.len() - 1];
    assert_eq!(
        instance_nodes.len(),
        grid.slot_count(),
        "one instance per slot"
    );

    let mut segments = Vec::with_capacity(instance_nodes.len());
    let mut handovers = Vec::new();
    let mut total_cost = 0.0;
    for (i, &node) in instance_nodes.iter().enumerate() {
        let inst = graph.node_instance(node);
        let slot = i + 1;
        assert_eq!(inst.slot_index, slot, "path slots must be 1..n in order");
        total_cost += inst.weight;

        let next_sat = instance_nodes
            .get(i + 1)
            .map(|&n| graph.node_instance(n).sat_id);
        let boundary = grid.slot_end_s(slot);
        let handover_at_s = match next_sat {
            Some(next) if next != inst.sat_id => {
                handovers.push(boundary);
                Some(boundary)
            }
            _ => None,
        };
        segments.push(PlanSegment {
            slot,
            sat_id: inst.sat_id,
            start_s: grid.slot_start_s(slot),
            end_s: boundary,
            handover_at_s,
        });
    }
    HandoverPlan {
        method: PlanMethod::Graph,
        segments,
        handover_epochs_s: handovers,
        total_cost: Some(total_cost),
    }
}

/// Convenience: solve the graph and extract the plan in one call.
pub fn plan_handovers(graph: &HandoverGraph, grid: &TimeGrid) -> Result<HandoverPlan> {
    let solution = shortest_path(graph)?;
    Ok(extract_plan(&solution.nodes, graph, grid))
}
