//! Command orchestration: one function per CLI subcommand. Each reads a
//! validated [`Scenario`], runs the pipeline, writes its artifacts atomically
//! into the output directory, prints a short summary, and returns the
//! structured results so tests can assert on them directly.

use std::path::PathBuf;

use crate::baseline;
use crate::constellation::{self, ConstellationEphemeris, SatId};
use crate::error::{Error, Result};
use crate::eval::{self, ComplexityReport, RateSeries, COMPLEXITY_CSV_HEADER};
use crate::geometry;
use crate::hograph::{self, HandoverGraph, TimeGrid};
use crate::planner::{self, HandoverPlan};
use crate::scenario::{ConstellationSource, Scenario};
use crate::svg::{LinePlot, Series};

/// Write one artifact into the output directory, atomically.
fn write_artifact(scenario: &Scenario, name: &str, content: &str) -> Result<PathBuf> {
    let path = scenario.out_dir.join(name);
    crate::artifact::write_atomic(&path, content.as_bytes())?;
    Ok(path)
}

/// `GM-x` label with x = slot length in minutes (2λ/60).
pub fn gm_label(lambda_s: f64) -> String {
    let minutes = 2.0 * lambda_s / 60.0;
    if (minutes - minutes.round()).abs() < 1e-9 {
        format!("GM-{}", minutes.round() as u64)
    } else {
        format!("GM-{minutes}")
    }
}

/// Generate or load the ephemeris and dump it as `ephemeris.csv`.
///
/// A zero horizon produces a single-epoch snapshot (one row per satellite).
pub fn cmd_constellation(scenario: &Scenario) -> Result<PathBuf> {
    let eph = match &scenario.source {
        ConstellationSource::Shell { shell, step_s } => {
            constellation::generate_walker(shell, scenario.horizon_s, *step_s)?
        }
        ConstellationSource::File(path) => constellation::load_ephemeris(path)?,
    };
    let path = write_artifact(
        scenario,
        "ephemeris.csv",
        &constellation::ephemeris_to_csv(&eph),
    )?;
    println!(
        "{} satellites, epochs [{}, {}] s -> {}",
        eph.sat_ids().len(),
        eph.epochs_s()[0],
        eph.last_epoch_s(),
        path.display()
    );
    Ok(path)
}

/// One graph-method run: grid, instance graph, and the shortest-path plan.
pub struct GmRun {
    pub grid: TimeGrid,
    pub graph: HandoverGraph,
    pub plan: HandoverPlan,
}

/// Build the slot grid and instance graph for one λ and solve it.
pub fn gm_run(
    scenario: &Scenario,
    eph: &ConstellationEphemeris,
    lambda_s: f64,
    start_sat: Option<SatId>,
) -> Result<GmRun> {
    let grid = hograph::build_time_grid(scenario.horizon_s, lambda_s)?;
    let criteria = scenario.criteria();
    let mut instances = hograph::enumerate_instances(
        eph,
        &scenario.user,
        &grid,
        &scenario.channel,
        scenario.sample_step_s,
    )?;
    hograph::normalize_utilities(&mut instances, &criteria)?;
    let mut graph = hograph::build_graph(instances, &criteria)?;
    graph.set_pinned_start(start_sat)?;
    let plan = planner::plan_handovers(&graph, &grid)?;
    Ok(GmRun { grid, graph, plan })
}

/// A solved plan plus its replayed rate series and written artifacts.
pub struct PlanOutput {
    pub plan: HandoverPlan,
    pub series: RateSeries,
    pub files: Vec<PathBuf>,
}

/// Graph-method plan for the first configured λ:
/// `plan.csv` + `instances.csv` + `series.csv`.
pub fn cmd_plan(scenario: &Scenario) -> Result<PlanOutput> {
    let eph = scenario.ephemeris()?;
    let lambda_s = scenario.lambdas_s[0];
    let run = gm_run(scenario, &eph, lambda_s, scenario.start_sat)?;
    let series = eval::simulate_rate(
        &run.plan,
        &eph,
        &scenario.user,
        &scenario.channel,
        scenario.sample_step_s,
    )?;
    let criteria = scenario.criteria();
    let files = vec![
        write_artifact(scenario, "plan.csv", &run.plan.to_csv())?,
        write_artifact(
            scenario,
            "instances.csv",
            &hograph::instance_table_csv(&run.graph, &criteria)?,
        )?,
        write_artifact(scenario, "series.csv", &eval::series_to_csv(&series))?,
    ];
    println!(
        "GM plan (lambda = {} s): {} slots, {} handovers, total cost {}",
        lambda_s,
        run.grid.slot_count(),
        run.plan.handover_count(),
        run.plan.total_cost.unwrap_or(f64::NAN),
    );
    for f in &files {
        println!("wrote {}", f.display());
    }
    Ok(PlanOutput {
        plan: run.plan,
        series,
        files,
    })
}

/// Elevation-threshold baseline plan:
/// `baseline_plan.csv` + `baseline_series.csv`.
pub fn cmd_baseline(scenario: &Scenario) -> Result<PlanOutput> {
    let eph = scenario.ephemeris()?;
    let plan = baseline::threshold_plan(
        &eph,
        &scenario.user,
        scenario.horizon_s,
        &scenario.threshold,
        scenario.start_sat,
    )?;
    let series = eval::simulate_rate(
        &plan,
        &eph,
        &scenario.user,
        &scenario.channel,
        scenario.sample_step_s,
    )?;
    let files = vec![
        write_artifact(scenario, "baseline_plan.csv", &plan.to_csv())?,
        write_artifact(
            scenario,
            "baseline_series.csv",
            &eval::series_to_csv(&series),
        )?,
    ];
    println!(
        "TH plan (threshold = {} deg): {} handovers",
        scenario.threshold.threshold_rad.to_degrees(),
        plan.handover_count(),
    );
    for f in &files {
        println!("wrote {}", f.display());
    }
    Ok(PlanOutput {
        plan,
        series,
        files,
    })
}

/// Pick the start satellite for a like-for-like comparison: the highest
/// satellite at t = 0 among those eligible throughout the first slot of the
/// widest λ. Any instance eligible for the widest slot is eligible for every
/// narrower one (its samples are a subset), so all methods can start there.
pub fn fair_start_sat(scenario: &Scenario, eph: &ConstellationEphemeris) -> Result<SatId> {
    let lambda_max = scenario
        .lambdas_s
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let grid = hograph::build_time_grid(scenario.horizon_s, lambda_max)?;
    let instances = hograph::enumerate_instances(
        eph,
        &scenario.user,
        &grid,
        &scenario.channel,
        scenario.sample_step_s,
    )?;
    let user_pos = scenario.user.position_ecef();
    let mut best: Option<(f64, SatId)> = None;
    for inst in instances.iter().filter(|i| i.slot_index == 1) {
        let elev = geometry::elevation_angle(user_pos, eph.position_at(inst.sat_id, 0.0)?);
        let better = match best {
            None => true,
            Some((e, id)) => elev > e || (elev == e && inst.sat_id < id),
        };
        if better {
            best = Some((elev, inst.sat_id));
        }
    }
    best.map(|(_, id)| id)
        .ok_or_else(|| Error::CoverageGap("no eligible satellite in the first slot".into()))
}

/// One method's results within a comparison run.
pub struct MethodResult {
    pub label: String,
    pub plan: HandoverPlan,
    pub series: RateSeries,
    pub p20_bps: f64,
    pub handovers: usize,
}

/// Everything `compare` produced.
pub struct CompareReport {
    pub start_sat: SatId,
    /// One GM entry per λ in config order, then the TH baseline.
    pub methods: Vec<MethodResult>,
    pub files: Vec<PathBuf>,
}

fn method_result(
    scenario: &Scenario,
    eph: &ConstellationEphemeris,
    label: String,
    plan: HandoverPlan,
) -> Result<MethodResult> {
    let series = eval::simulate_rate(
        &plan,
        eph,
        &scenario.user,
        &scenario.channel,
        scenario.sample_step_s,
    )?;
    let p20_bps = eval::percentile(&series, 0.2)?;
    let handovers = eval::count_handovers(&plan);
    Ok(MethodResult {
        label,
        plan,
        series,
        p20_bps,
        handovers,
    })
}

/// Run every GM-λ plus the TH baseline from a common start satellite and
/// emit the comparison artifacts: per-method series/CDF CSVs, a combined
/// CDF, a percentile table, handover counts, and (optionally) SVG plots.
pub fn cmd_compare(scenario: &Scenario) -> Result<CompareReport> {
    let eph = scenario.ephemeris()?;
    let start_sat = match scenario.start_sat {
        Some(id) => id,
        None => fair_start_sat(scenario, &eph)?,
    };

    let mut methods = Vec::new();
    for &lambda_s in &scenario.lambdas_s {
        let run = gm_run(scenario, &eph, lambda_s, Some(start_sat))?;
        methods.push(method_result(scenario, &eph, gm_label(lambda_s), run.plan)?);
    }
    let th_plan = baseline::threshold_plan(
        &eph,
        &scenario.user,
        scenario.horizon_s,
        &scenario.threshold,
        Some(start_sat),
    )?;
    methods.push(method_result(scenario, &eph, "TH".into(), th_plan)?);

    let mut files = Vec::new();
    for m in &methods {
        files.push(write_artifact(
            scenario,
            &format!("series_{}.csv", m.label),
            &eval::series_to_csv(&m.series),
        )?);
        files.push(write_artifact(
            scenario,
            &format!("cdf_{}.csv", m.label),
            &eval::cdf_to_csv(&eval::cdf_points(&m.series)),
        )?);
    }

    let mut combined = String::from("method,rate_bps,fraction\n");
    for m in &methods {
        for (rate, fraction) in eval::cdf_points(&m.series) {
            combined.push_str(&format!("{},{rate},{fraction}\n", m.label));
        }
    }
    files.push(write_artifact(scenario, "cdf_combined.csv", &combined)?);

    let mut percentiles = String::from("method,p,rate_bps\n");
    for m in &methods {
        for i in 0..=20u32 {
            let p = f64::from(i) / 20.0;
            percentiles.push_str(&format!(
                "{},{p},{}\n",
                m.label,
                eval::percentile(&m.series, p)?
            ));
        }
    }
    files.push(write_artifact(scenario, "percentiles.csv", &percentiles)?);

    let mut handovers = String::from("method,handovers\n");
    for m in &methods {
        handovers.push_str(&format!("{},{}\n", m.label, m.handovers));
    }
    files.push(write_artifact(scenario, "handovers.csv", &handovers)?);

    if scenario.emit_svg {
        let cdf_plot = LinePlot {
            title: "Rate CDF by handover method".into(),
            x_label: "data rate (Mbit/s)".into(),
            y_label: "cumulative fraction".into(),
            series: methods
                .iter()
                .map(|m| Series {
                    label: m.label.clone(),
                    points: eval::cdf_points(&m.series)
                        .into_iter()
                        .map(|(r, f)| (r / 1e6, f))
                        .collect(),
                    step: true,
                })
                .collect(),
        };
        files.push(write_artifact(scenario, "cdf.svg", &cdf_plot.render())?);

        let rate_plot = LinePlot {
            title: "Data rate over the horizon".into(),
            x_label: "time (s)".into(),
            y_label: "data rate (Mbit/s)".into(),
            series: methods
                .iter()
                .map(|m| Series {
                    label: m.label.clone(),
                    points: m
                        .series
                        .samples
                        .iter()
                        .map(|s| (s.t_s, s.rate_bps / 1e6))
                        .collect(),
                    step: false,
                })
                .collect(),
        };
        files.push(write_artifact(scenario, "rates.svg", &rate_plot.render())?);
    }

    println!("start satellite: {start_sat}");
    for m in &methods {
        println!(
            "{}: p20 = {:.3} Mbit/s, handovers = {}",
            m.label,
            m.p20_bps / 1e6,
            m.handovers
        );
    }
    for f in &files {
        println!("wrote {}", f.display());
    }
    Ok(CompareReport {
        start_sat,
        methods,
        files,
    })
}

/// One row of the complexity sweep.
pub struct ComplexityRow {
    pub lambda_s: f64,
    pub n: usize,
    pub report: ComplexityReport,
}

/// Closed-form graph sizes under full visibility of all `k` satellites,
/// one row per configured λ: `complexity.csv` (+ `complexity.svg`).
pub fn cmd_complexity(scenario: &Scenario) -> Result<(Vec<ComplexityRow>, Vec<PathBuf>)> {
    let k = match &scenario.source {
        ConstellationSource::Shell { shell, .. } => shell.satellite_count() as usize,
        ConstellationSource::File(path) => constellation::load_ephemeris(path)?.sat_ids().len(),
    };
    let mut rows = Vec::new();
    let mut csv = String::from(COMPLEXITY_CSV_HEADER);
    csv.push('\n');
    for &lambda_s in &scenario.lambdas_s {
        let grid = hograph::build_time_grid(scenario.horizon_s, lambda_s)?;
        let n = grid.slot_count();
        let report = ComplexityReport::uniform(k, n);
        csv.push_str(&format!(
            "{lambda_s},{n},{},{},{}\n",
            report.v, report.e, report.op_estimate
        ));
        rows.push(ComplexityRow {
            lambda_s,
            n,
            report,
        });
    }
    let mut files = vec![write_artifact(scenario, "complexity.csv", &csv)?];

    if scenario.emit_svg {
        let mut points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.lambda_s, r.report.op_estimate))
            .collect();
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let plot = LinePlot {
            title: format!("Solver cost model, k = {k}"),
            x_label: "relaxation period (s)".into(),
            y_label: "edge + heap operation estimate".into(),
            series: vec![Series {
                label: "E + V log2 V".into(),
                points,
                step: false,
            }],
        };
        files.push(write_artifact(scenario, "complexity.svg", &plot.render())?);
    }

    for r in &rows {
        println!(
            "lambda = {} s: n = {}, V = {}, E = {}, ops = {:.4e}",
            r.lambda_s, r.n, r.report.v, r.report.e, r.report.op_estimate
        );
    }
    for f in &files {
        println!("wrote {}", f.display());
    }
    Ok((rows, files))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EARTH_RADIUS_M;
    use crate::scenario::scenario_from_str;
    use crate::vec3::Vec3;
    use std::path::Path;

    /// Three satellites frozen above the default (Ottawa) user: one at
    /// zenith and two farther north at sinking elevations. Being static,
    /// they are eligible in every slot, so command tests exercise the full
    /// pipeline without depending on orbital coverage.
    fn static_ephemeris() -> ConstellationEphemeris {
        let place = |lat_deg: f64, lon_deg: f64| {
            let (lat, lon) = (lat_deg.to_radians(), lon_deg.to_radians());
            let r = EARTH_RADIUS_M + 550_000.0;
            Vec3::new(
                r * lat.cos() * lon.cos(),
                r * lat.cos() * lon.sin(),
                r * lat.sin(),
            )
        };
        let spots = [
            place(45.42, -75.70),
            place(49.0, -75.70),
            place(53.0, -75.70),
        ];
        let epochs = vec![0.0, 600.0];
        let mut positions = Vec::new();
        for _ in &epochs {
            positions.extend_from_slice(&spots);
        }
        ConstellationEphemeris::new(vec![SatId(0), SatId(1), SatId(2)], epochs, positions).unwrap()
    }

    /// Scenario backed by [`static_ephemeris`], written into `dir`.
    fn small_scenario(dir: &Path) -> Scenario {
        let eph_path = dir.join("eph.csv");
        constellation::save_ephemeris(&static_ephemeris(), &eph_path).unwrap();
        let text = r#"
            [constellation]
            ephemeris = "eph.csv"

            [planner]
            horizon_s = 600.0
            lambda_s = [150.0, 300.0]
            sample_step_s = 10.0

            [output]
            directory = "."
            "#;
        scenario_from_str(text, dir).unwrap()
    }

    #[test]
    fn gm_labels_follow_slot_minutes() {
        assert_eq!(gm_label(120.0), "GM-4");
        assert_eq!(gm_label(150.0), "GM-5");
        assert_eq!(gm_label(180.0), "GM-6");
        assert_eq!(gm_label(300.0), "GM-10");
        assert_eq!(gm_label(75.0), "GM-2.5");
    }

    #[test]
    fn constellation_zero_horizon_writes_one_row_per_satellite() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = scenario_from_str(
            "[constellation]\nplanes = 1\nsats_per_plane = 1\n[planner]\nhorizon_s = 0.0\n",
            dir.path(),
        )
        .unwrap();
        s.out_dir = dir.path().to_path_buf();
        let path = cmd_constellation(&s).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        // Header plus exactly one row for the single satellite at t = 0.
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn constellation_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = small_scenario(dir.path());
        s.out_dir = dir.path().join("a");
        let first = cmd_constellation(&s).unwrap();
        let bytes_a = std::fs::read(first).unwrap();
        s.out_dir = dir.path().join("b");
        let second = cmd_constellation(&s).unwrap();
        let bytes_b = std::fs::read(second).unwrap();
        assert_eq!(bytes_a, bytes_b);
    }

    #[test]
    fn plan_emits_three_artifacts_with_documented_headers() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = small_scenario(dir.path());
        s.out_dir = dir.path().to_path_buf();
        let out = cmd_plan(&s).unwrap();
        assert_eq!(out.files.len(), 3);
        let plan_text = std::fs::read_to_string(&out.files[0]).unwrap();
        assert!(plan_text.starts_with(crate::planner::PLAN_CSV_HEADER));
        let inst_text = std::fs::read_to_string(&out.files[1]).unwrap();
        assert!(inst_text.starts_with(crate::hograph::INSTANCE_TABLE_CSV_HEADER));
        let series_text = std::fs::read_to_string(&out.files[2]).unwrap();
        assert!(series_text.starts_with(crate::eval::SERIES_CSV_HEADER));
        // 600 s at 10 s steps, endpoints inclusive.
        assert_eq!(series_text.lines().count(), 62);
    }

    #[test]
    fn compare_runs_all_methods_from_one_start() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = small_scenario(dir.path());
        s.out_dir = dir.path().to_path_buf();
        let report = cmd_compare(&s).unwrap();
        let labels: Vec<&str> = report.methods.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(labels, ["GM-5", "GM-10", "TH"]);
        // The zenith satellite is the highest at t = 0, so it is the fair start,
        // the best pick in every slot, and no method ever hands over.
        assert_eq!(report.start_sat, SatId(0));
        for m in &report.methods {
            assert_eq!(m.series.samples[0].serving_sat, report.start_sat);
            assert_eq!(m.handovers, 0);
        }
        let names: Vec<String> = report
            .files
            .iter()
            .map(|f| f.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        for expected in [
            "series_GM-5.csv",
            "cdf_GM-5.csv",
            "series_TH.csv",
            "cdf_combined.csv",
            "percentiles.csv",
            "handovers.csv",
            "cdf.svg",
            "rates.svg",
        ] {
            assert!(names.iter().any(|n| n == expected), "missing {expected}");
        }
        let percentiles = std::fs::read_to_string(
            report
                .files
                .iter()
                .find(|f| f.ends_with("percentiles.csv"))
                .unwrap(),
        )
        .unwrap();
        assert!(percentiles.lines().any(|l| l.starts_with("GM-5,0.2,")));
        assert!(percentiles.lines().any(|l| l.starts_with("TH,0.2,")));
    }

    #[test]
    fn complexity_rows_match_the_closed_form() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = small_scenario(dir.path());
        s.out_dir = dir.path().to_path_buf();
        s.emit_svg = false;
        let (rows, files) = cmd_complexity(&s).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].n, 2); // 600 s / (2 * 150 s)
        assert_eq!(rows[1].n, 1);
        let k = 3u64;
        assert_eq!(rows[0].report.v, 2 + 2 * k);
        assert_eq!(rows[0].report.e, k * k + 2 * k);
        assert_eq!(files.len(), 1);
        let text = std::fs::read_to_string(&files[0]).unwrap();
        assert!(text.starts_with(COMPLEXITY_CSV_HEADER));
        assert_eq!(text.lines().count(), 3);
    }
}
