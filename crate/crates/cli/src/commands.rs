//! One function per subcommand: validate, run the core, build the table and summary.

use std::path::Path;

use serde_json::{json, Map, Value};
use weakval_core::hom::{
    background_ratio_from_postselection, hwp5_grid, symmetric_angle_report, visibility_sweep,
    PhotonPairConfig, DEFAULT_SWEEP_STEP,
};
use weakval_core::optics::{
    delta_theta, output_amplitudes, postselection_state, preparation_angle,
    preselection_from_weak_value, run_interferometer, shift_angle_approx, shift_angle_exact,
    simulate_interferometer, PathArm, PATHS,
};
use weakval_core::prepost::three_box_scenario;
use weakval_core::weakmeas::{
    fit_weak_value, fit_weak_value_counts, readout, readout_curve, synthesize_counts, Calibration,
    CountRecord, ReadoutPoint, WeakValueFit,
};
use weakval_core::{MeasurementStrength, Operator, PrePostSelection};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Everything a run produces before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: Value,
}

/// Relative HWP5 window swept when no explicit grid is given, in degrees.
pub const DEFAULT_HOM_WINDOW_DEG: (f64, f64) = (-20.0, 10.0);

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut resolved = Map::new();
    resolved.insert("command".into(), json!(cfg.command.name()));
    if let Some(out) = cfg.output() {
        resolved.insert("output".into(), json!(out.display().to_string()));
    }
    let (table, results) = match cfg.command {
        Command::Threebox => threebox()?,
        Command::Weakvalue => weakvalue(cfg, &mut resolved)?,
        Command::Interferometer => interferometer(cfg, &mut resolved)?,
        Command::ReadoutSweep => readout_sweep(cfg, &mut resolved)?,
        Command::Fit => fit(cfg, &mut resolved)?,
        Command::HomSweep => hom_sweep(cfg, &mut resolved)?,
    };
    Ok(Outcome {
        table,
        summary: json!({ "config": resolved, "results": results }),
    })
}

fn strength(
    cfg: &RunConfig,
    resolved: &mut Map<String, Value>,
) -> Result<MeasurementStrength, CliError> {
    let g = cfg
        .real_in("G", 0.0, 1.0)?
        .ok_or_else(|| CliError::Validation("missing parameter G".into()))?;
    resolved.insert("G".into(), json!(g));
    Ok(MeasurementStrength::from_g(g)?)
}

fn p_a(cfg: &RunConfig, resolved: &mut Map<String, Value>) -> Result<f64, CliError> {
    let p = cfg.require_real("p_A")?;
    resolved.insert("p_A".into(), json!(p));
    Ok(p)
}

fn weak_value_table(
    pp: &PrePostSelection,
    projs: &[Operator],
    names: &[&str],
) -> Result<(Table, Value), CliError> {
    let mut t = Table::new(&[
        "observable",
        "weak_value_re",
        "weak_value_im",
        "abl_probability",
    ]);
    let mut rows = Vec::new();
    for (p, name) in projs.iter().zip(names) {
        let w = pp.weak_value(p)?;
        let abl = pp.abl_probability(p)?;
        t.push(vec![
            Cell::from(*name),
            w.value.re.into(),
            w.value.im.into(),
            abl.into(),
        ]);
        rows.push(json!({
            "observable": w.observable_tag,
            "weak_value": [w.value.re, w.value.im],
            "abl_probability": abl,
        }));
    }
    let sum = pp.weak_value_sum(projs)?;
    t.push(vec![
        Cell::from("sum"),
        sum.re.into(),
        sum.im.into(),
        Cell::Empty,
    ]);
    let overlap = pp.overlap();
    Ok((
        t,
        json!({
            "projectors": rows,
            "weak_value_sum": [sum.re, sum.im],
            "overlap": [overlap.re, overlap.im],
        }),
    ))
}

fn threebox() -> Result<(Table, Value), CliError> {
    let tb = three_box_scenario();
    weak_value_table(&tb.selection, &tb.projectors, &["A", "B", "C"])
}

fn weakvalue(
    cfg: &RunConfig,
    resolved: &mut Map<String, Value>,
) -> Result<(Table, Value), CliError> {
    let p = p_a(cfg, resolved)?;
    let pre = preselection_from_weak_value(p);
    let pp = PrePostSelection::new(&pre, &postselection_state())?;
    let projs = [
        Operator::basis_projector(PATHS, "A")?,
        Operator::basis_projector(PATHS, "B")?,
    ];
    let (table, mut results) = weak_value_table(&pp, &projs, &["A", "B"])?;
    let amps: Vec<f64> = pre.amplitudes().iter().map(|a| a.re).collect();
    results["preselection"] = json!(amps);
    results["preparation_angle_deg"] = json!(preparation_angle(p).to_degrees());
    Ok((table, results))
}

fn interferometer(
    cfg: &RunConfig,
    resolved: &mut Map<String, Value>,
) -> Result<(Table, Value), CliError> {
    let p = p_a(cfg, resolved)?;
    let st = strength(cfg, resolved)?;
    let run = run_interferometer(p, st)?;
    let sim = simulate_interferometer(p, st, PathArm::A, std::f64::consts::FRAC_PI_4)?;
    let oracle_gap = run
        .output_polarization
        .max_abs_diff(&sim.output_polarization)?
        .max((run.postselect_prob - sim.postselect_prob).abs());
    let p_v = run.output_polarization.amplitudes()[1].norm_sqr();
    let r = readout(p_v, st)?;
    let shift = shift_angle_exact(p, st)?;
    let marks = symmetric_angle_report(p, st)?;
    let (ah, av) = output_amplitudes(p, st);
    let deg = f64::to_degrees;

    let cols = [
        ("p_A", p),
        ("G", st.g()),
        ("theta_deg", deg(st.theta())),
        ("delta_theta_deg", deg(delta_theta(st))),
        ("output_angle_deg", deg(run.output_angle)),
        ("shift_exact_deg", deg(shift)),
        ("shift_approx_deg", deg(shift_angle_approx(p, st.g()))),
        ("postselect_prob", run.postselect_prob),
        ("alpha_H", ah),
        ("alpha_V", av),
        ("P_V", p_v),
        ("R", r),
        ("restoration_exact_deg", deg(marks.exact)),
        ("restoration_symmetric_deg", deg(marks.symmetric_mark)),
        ("restoration_small_G_deg", deg(marks.small_g_mark)),
    ];
    let header: Vec<&str> = cols.iter().map(|c| c.0).collect();
    let mut t = Table::new(&header);
    t.push(cols.iter().map(|c| Cell::from(c.1)).collect());
    let mut results: Map<String, Value> = cols
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    results.insert("state_simulation_max_abs_diff".into(), json!(oracle_gap));
    Ok((t, Value::Object(results)))
}

fn fit_json(fit: &Result<WeakValueFit, weakval_core::Error>) -> Value {
    match fit {
        Ok(f) => json!({ "p_A_hat": f.p_a, "residual": f.residual, "std_error": f.std_error }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Seed offsets for the calibration reference streams.
const CAL_ONE_STREAM: u64 = 1 << 32;
const CAL_ZERO_STREAM: u64 = 2 << 32;

fn readout_sweep(
    cfg: &RunConfig,
    resolved: &mut Map<String, Value>,
) -> Result<(Table, Value), CliError> {
    let p = p_a(cfg, resolved)?;
    let grid = match (cfg.raw("G"), cfg.raw("grid")) {
        (Some(_), Some(_)) => {
            return Err(CliError::Validation(
                "give the G grid as either G or grid, not both".into(),
            ))
        }
        (Some(_), None) => cfg.grid("G")?,
        (None, Some(_)) => cfg.grid("grid")?,
        (None, None) => None,
    }
    .ok_or_else(|| CliError::Validation("missing parameter G".into()))?;
    if let Some(bad) = grid.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(CliError::Validation(format!("G = {bad} is outside [0, 1]")));
    }
    resolved.insert("G".into(), json!(grid));

    let Some(trials) = cfg.uint("trials")? else {
        for key in ["seed", "background", "calibrate"] {
            if cfg.raw(key).is_some() {
                return Err(CliError::Validation(format!("{key} needs trials")));
            }
        }
        let curve = readout_curve(p, &grid)?;
        let mut t = Table::new(&["G", "P_V", "R", "p_A_nominal"]);
        for pt in &curve.points {
            t.push(vec![pt.g.into(), pt.p_v.into(), pt.r.into(), p.into()]);
        }
        let fit = fit_weak_value(&curve.points);
        return Ok((t, json!({ "fit": fit_json(&fit) })));
    };
    if trials == 0 {
        return Err(CliError::Validation("trials must be positive".into()));
    }
    let seed = cfg.uint("seed")?.unwrap_or(0);
    let background = cfg.real_in("background", 0.0, 1.0)?.unwrap_or(0.0);
    let calibrate = cfg.flag("calibrate")?;
    resolved.insert("trials".into(), json!(trials));
    resolved.insert("seed".into(), json!(seed));
    resolved.insert("background".into(), json!(background));
    resolved.insert("calibrate".into(), json!(calibrate));

    let mut records = Vec::with_capacity(grid.len());
    let mut t = Table::new(&["G", "counts_H", "counts_V", "trials", "seed"]);
    for (i, &g) in grid.iter().enumerate() {
        let st = MeasurementStrength::from_g(g)?;
        let rec = synthesize_counts(p, st, trials, seed.wrapping_add(i as u64), background)?;
        t.push(vec![
            rec.g.into(),
            rec.counts_h.into(),
            rec.counts_v.into(),
            rec.trials.into(),
            rec.seed.into(),
        ]);
        records.push(rec);
    }
    let mut results = json!({ "fit": fit_json(&fit_weak_value_counts(&records)) });
    if calibrate {
        let mut points = Vec::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            let st = rec.strength()?;
            let s = seed.wrapping_add(i as u64);
            let one =
                synthesize_counts(1.0, st, trials, s.wrapping_add(CAL_ONE_STREAM), background)?;
            let zero =
                synthesize_counts(0.0, st, trials, s.wrapping_add(CAL_ZERO_STREAM), background)?;
            points.push(Calibration::from_records(&one, &zero)?.apply(rec)?);
        }
        results["calibrated_fit"] = fit_json(&fit_weak_value(&points));
        results["calibration_seed_offsets"] = json!([CAL_ONE_STREAM, CAL_ZERO_STREAM]);
    }
    Ok((t, results))
}

/// Samples read back from a readout or count CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    Readout(Vec<ReadoutPoint>),
    Counts(Vec<CountRecord>),
}

/// Reads a CSV written by `readout-sweep`; `#` lines are ignored.
pub fn read_samples(path: &Path) -> Result<Samples, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_samples(&text)
}

pub fn parse_samples(text: &str) -> Result<Samples, CliError> {
    let invalid = |e: csv::Error| CliError::Validation(format!("malformed input: {e}"));
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(invalid)?
        .iter()
        .map(String::from)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(CliError::Validation("input has no header".into()));
    }
    let col = |name: &str| header.iter().position(|h| h == name);
    let records: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .map_err(invalid)?;
    let rows: Vec<Vec<&str>> = records.iter().map(|r| r.iter().collect()).collect();
    let bad =
        |n: usize, what: &str| CliError::Validation(format!("input row {}: bad {what}", n + 1));
    let real = |row: &[&str], n: usize, i: usize, what: &str| -> Result<f64, CliError> {
        row.get(i)
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(n, what))
    };
    let int = |row: &[&str], n: usize, i: usize, what: &str| -> Result<u64, CliError> {
        row.get(i)
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| bad(n, what))
    };
    let g_col = col("G").ok_or_else(|| CliError::Validation("input lacks a G column".into()))?;
    if let (Some(h), Some(v)) = (col("counts_H"), col("counts_V")) {
        let trials_col = col("trials");
        let seed_col = col("seed");
        let records = rows
            .iter()
            .enumerate()
            .map(|(n, r)| {
                let (counts_h, counts_v) = (int(r, n, h, "counts_H")?, int(r, n, v, "counts_V")?);
                Ok(CountRecord {
                    g: real(r, n, g_col, "G")?,
                    counts_h,
                    counts_v,
                    trials: match trials_col {
                        Some(i) => int(r, n, i, "trials")?,
                        None => counts_h + counts_v,
                    },
                    seed: match seed_col {
                        Some(i) => int(r, n, i, "seed")?,
                        None => 0,
                    },
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(Samples::Counts(records));
    }
    let r_col = col("R");
    let pv_col = col("P_V");
    if r_col.is_none() && pv_col.is_none() {
        return Err(CliError::Validation(
            "input needs R, P_V, or counts_H/counts_V columns".into(),
        ));
    }
    let points = rows
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let g = real(row, n, g_col, "G")?;
            let p_v = pv_col.map(|i| real(row, n, i, "P_V")).transpose()?;
            let r = match (r_col, p_v) {
                (Some(i), _) => real(row, n, i, "R")?,
                (None, Some(pv)) => readout(pv, MeasurementStrength::from_g(g)?)?,
                (None, None) => unreachable!(),
            };
            Ok(ReadoutPoint {
                g,
                p_v: p_v.unwrap_or(f64::NAN),
                r,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Samples::Readout(points))
}

fn fit(cfg: &RunConfig, resolved: &mut Map<String, Value>) -> Result<(Table, Value), CliError> {
    let input = cfg
        .raw("input")
        .ok_or_else(|| CliError::Validation("missing parameter input".into()))?;
    resolved.insert("input".into(), json!(input));
    let (fit, n, kind) = match read_samples(Path::new(input))? {
        Samples::Readout(points) => (fit_weak_value(&points)?, points.len(), "readout"),
        Samples::Counts(records) => (fit_weak_value_counts(&records)?, records.len(), "counts"),
    };
    let mut t = Table::new(&["p_A_hat", "residual", "std_error", "samples"]);
    t.push(vec![
        fit.p_a.into(),
        fit.residual.into(),
        fit.std_error.map_or(Cell::Empty, Cell::from),
        (n as u64).into(),
    ]);
    Ok((
        t,
        json!({
            "sample_kind": kind,
            "samples": n,
            "p_A_hat": fit.p_a,
            "residual": fit.residual,
            "std_error": fit.std_error,
        }),
    ))
}

fn hom_sweep(
    cfg: &RunConfig,
    resolved: &mut Map<String, Value>,
) -> Result<(Table, Value), CliError> {
    let p2s = cfg
        .list("p_A")?
        .ok_or_else(|| CliError::Validation("missing parameter p_A".into()))?;
    resolved.insert("p_A".into(), json!(p2s));
    let st = strength(cfg, resolved)?;
    let p1 = cfg.real("p_A1")?.unwrap_or(1.0);
    let hwp4_deg = cfg.real("hwp4")?.unwrap_or(45.0);
    resolved.insert("p_A1".into(), json!(p1));
    resolved.insert("hwp4".into(), json!(hwp4_deg));

    let grid = match cfg.grid("grid")? {
        Some(deg) => {
            if cfg.raw("step").is_some() {
                return Err(CliError::Validation(
                    "step only applies without an explicit grid".into(),
                ));
            }
            resolved.insert("grid".into(), json!(cfg.raw("grid")));
            deg.into_iter().map(f64::to_radians).collect()
        }
        None => {
            let step = match cfg.real("step")? {
                Some(s) if s > 0.0 => s.to_radians(),
                Some(s) => {
                    return Err(CliError::Validation(format!("step = {s} must be positive")))
                }
                None => DEFAULT_SWEEP_STEP,
            };
            let (lo, hi) = DEFAULT_HOM_WINDOW_DEG;
            resolved.insert("step".into(), json!(step.to_degrees()));
            resolved.insert("window_relative_deg".into(), json!([lo, hi]));
            hwp5_grid(st, lo.to_radians(), hi.to_radians(), step)?
        }
    };

    let ratio = cfg.real("background_ratio")?;
    let kappa = cfg.real("kappa")?;
    if ratio.is_some() && kappa.is_some() {
        return Err(CliError::Validation(
            "give background_ratio or kappa, not both".into(),
        ));
    }
    for (k, v) in [("background_ratio", ratio), ("kappa", kappa)] {
        if let Some(x) = v {
            if x < 0.0 {
                return Err(CliError::Validation(format!(
                    "{k} = {x} must be non-negative"
                )));
            }
            resolved.insert(k.into(), json!(x));
        }
    }

    let mut t = Table::new(&[
        "hwp5_deg",
        "relative_deg",
        "visibility",
        "p_A2",
        "G",
        "background_ratio",
    ]);
    let mut per_photon = Vec::new();
    for &p2 in &p2s {
        let r = match (ratio, kappa) {
            (_, Some(k)) => background_ratio_from_postselection(k, p2, st)?,
            (Some(r), None) => r,
            (None, None) => 0.0,
        };
        let mut template = PhotonPairConfig::new(p2, st).with_background(r);
        template.p_a1 = p1;
        template.hwp4_angle = hwp4_deg.to_radians();
        let sweep = visibility_sweep(&template, &grid)?;
        for ((a, rel), v) in sweep
            .hwp5_angles
            .iter()
            .zip(&sweep.relative_angles)
            .zip(&sweep.visibilities)
        {
            t.push(vec![
                a.to_degrees().into(),
                rel.to_degrees().into(),
                (*v).into(),
                p2.into(),
                st.g().into(),
                r.into(),
            ]);
        }
        let marks = symmetric_angle_report(p2, st)?;
        let theta = st.theta();
        let summary = json!({
            "p_A2": p2,
            "background_ratio": r,
            "argmax_hwp5_deg": sweep.hwp5_angles[sweep.argmax_index].to_degrees(),
            "argmax_relative_deg": sweep.argmax_angle.to_degrees(),
            "max_visibility": sweep.max_visibility,
            "exact_relative_deg": (marks.exact - theta).to_degrees(),
            "symmetric_mark_relative_deg": (marks.symmetric_mark - theta).to_degrees(),
            "small_G_mark_relative_deg": (marks.small_g_mark - theta).to_degrees(),
        });
        t.trailer.push(format!(
            "summary p_A2={} argmax_hwp5_deg={} argmax_relative_deg={} max_visibility={} \
             exact_relative_deg={} symmetric_mark_relative_deg={} small_G_mark_relative_deg={}",
            crate::output::fmt_sig(p2),
            crate::output::fmt_sig(sweep.hwp5_angles[sweep.argmax_index].to_degrees()),
            crate::output::fmt_sig(sweep.argmax_angle.to_degrees()),
            crate::output::fmt_sig(sweep.max_visibility),
            crate::output::fmt_sig((marks.exact - theta).to_degrees()),
            crate::output::fmt_sig((marks.symmetric_mark - theta).to_degrees()),
            crate::output::fmt_sig((marks.small_g_mark - theta).to_degrees()),
        ));
        per_photon.push(summary);
    }
    Ok((
        t,
        json!({ "theta_deg": st.theta().to_degrees(), "sweeps": per_photon }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn cfg(pairs: &[(&str, &str)]) -> RunConfig {
        let m: BTreeMap<String, String> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        RunConfig::merge(m, BTreeMap::new()).unwrap()
    }

    #[test]
    fn threebox_rows() {
        let out = execute(&cfg(&[("command", "threebox")])).unwrap();
        let csv = out.table.render();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "observable,weak_value_re,weak_value_im,abl_probability"
        );
        assert!(lines[1].starts_with("A,1,0,1"));
        assert!(lines[2].starts_with("B,1,0,1"));
        assert!(lines[3].starts_with("C,-1,0,"));
        assert!(lines[4].starts_with("sum,1,0,"));
    }

    #[test]
    fn interferometer_numbers() {
        let out = execute(&cfg(&[
            ("command", "interferometer"),
            ("p_A", "-1"),
            ("G", "0.29"),
        ]))
        .unwrap();
        let r = &out.summary["results"];
        assert!((r["output_angle_deg"].as_f64().unwrap() - 21.03).abs() < 0.01);
        assert!((r["shift_exact_deg"].as_f64().unwrap() + 15.54).abs() < 0.01);
        assert!((r["postselect_prob"].as_f64().unwrap() - 0.1172).abs() < 1e-4);
        assert!(r["state_simulation_max_abs_diff"].as_f64().unwrap() < 1e-12);
        assert_eq!(out.summary["config"]["G"], json!(0.29));
    }

    #[test]
    fn interferometer_zero_strength_is_runtime_error() {
        let err = execute(&cfg(&[
            ("command", "interferometer"),
            ("p_A", "-1"),
            ("G", "0"),
        ]))
        .unwrap_err();
        assert_eq!(err.exit_code(), crate::error::EXIT_RUNTIME);
    }

    #[test]
    fn readout_sweep_fit_reproduces_nominal() {
        let out = execute(&cfg(&[
            ("command", "readout-sweep"),
            ("p_A", "-0.87"),
            ("G", "0.05:0.95:0.05"),
        ]))
        .unwrap();
        assert_eq!(out.table.rows.len(), 19);
        let p = out.summary["results"]["fit"]["p_A_hat"].as_f64().unwrap();
        assert!((p + 0.87).abs() < 1e-6);
    }

    #[test]
    fn readout_sweep_round_trips_through_fit_parser() {
        let out = execute(&cfg(&[
            ("command", "readout-sweep"),
            ("p_A", "-0.57"),
            ("G", "0.1:0.9:0.1"),
        ]))
        .unwrap();
        let Samples::Readout(points) = parse_samples(&out.table.render()).unwrap() else {
            panic!("expected readout samples");
        };
        let fit = fit_weak_value(&points).unwrap();
        // 12 significant digits in the CSV bound how well the fit can do.
        assert!((fit.p_a + 0.57).abs() < 1e-9);
    }

    #[test]
    fn counts_sweep_and_calibration() {
        let out = execute(&cfg(&[
            ("command", "readout-sweep"),
            ("p_A", "-0.57"),
            ("G", "0.2:0.8:0.2"),
            ("trials", "20000"),
            ("seed", "5"),
            ("background", "0.01"),
            ("calibrate", "true"),
        ]))
        .unwrap();
        assert_eq!(
            out.table.header,
            ["G", "counts_H", "counts_V", "trials", "seed"]
        );
        assert_eq!(out.table.rows[2][4], Cell::Int(7));
        assert!(out.summary["results"]["calibrated_fit"]["p_A_hat"].is_number());
        let Samples::Counts(recs) = parse_samples(&out.table.render()).unwrap() else {
            panic!("expected counts");
        };
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[0].trials, 20000);
    }

    #[test]
    fn readout_sweep_validation() {
        let bad = [
            vec![("command", "readout-sweep"), ("p_A", "-1")],
            vec![
                ("command", "readout-sweep"),
                ("p_A", "-1"),
                ("G", "0.1:2:0.5"),
            ],
            vec![
                ("command", "readout-sweep"),
                ("p_A", "-1"),
                ("G", "0.5"),
                ("seed", "3"),
            ],
            vec![
                ("command", "readout-sweep"),
                ("p_A", "-1"),
                ("G", "0.5"),
                ("trials", "0"),
            ],
            vec![
                ("command", "readout-sweep"),
                ("p_A", "-1"),
                ("G", "0.5"),
                ("grid", "0.5"),
            ],
            vec![
                ("command", "readout-sweep"),
                ("p_A", "-1"),
                ("G", "0.5"),
                ("trials", "5"),
                ("background", "2"),
            ],
        ];
        for b in bad {
            let err = execute(&cfg(&b)).unwrap_err();
            assert_eq!(err.exit_code(), crate::error::EXIT_VALIDATION, "{b:?}");
        }
    }

    #[test]
    fn hom_sweep_summary_and_kappa() {
        let out = execute(&cfg(&[
            ("command", "hom-sweep"),
            ("p_A", "0,-1"),
            ("G", "0.29"),
            ("kappa", "0.01"),
        ]))
        .unwrap();
        assert_eq!(out.table.rows.len(), 2 * 601);
        let sweeps = out.summary["results"]["sweeps"].as_array().unwrap();
        assert!(sweeps[0]["argmax_relative_deg"].as_f64().unwrap().abs() < 1e-9);
        let rel = sweeps[1]["argmax_relative_deg"].as_f64().unwrap();
        assert!((rel + 7.77).abs() <= 0.05);
        assert!(
            sweeps[1]["background_ratio"].as_f64().unwrap()
                > sweeps[0]["background_ratio"].as_f64().unwrap()
        );
        assert_eq!(out.table.trailer.len(), 2);
    }

    #[test]
    fn hom_sweep_explicit_grid() {
        let out = execute(&cfg(&[
            ("command", "hom-sweep"),
            ("p_A", "-1"),
            ("G", "0.29"),
            ("grid", "28:29.5:0.05"),
        ]))
        .unwrap();
        assert_eq!(out.table.rows.len(), 31);
        let best = out.summary["results"]["sweeps"][0]["argmax_hwp5_deg"]
            .as_f64()
            .unwrap();
        assert!((best - 28.80).abs() < 0.026);
    }

    #[test]
    fn hom_sweep_validation() {
        let bad = [
            vec![
                ("command", "hom-sweep"),
                ("p_A", "-1"),
                ("G", "0.29"),
                ("kappa", "1"),
                ("background_ratio", "1"),
            ],
            vec![
                ("command", "hom-sweep"),
                ("p_A", "-1"),
                ("G", "0.29"),
                ("background_ratio", "-1"),
            ],
            vec![
                ("command", "hom-sweep"),
                ("p_A", "-1"),
                ("G", "0.29"),
                ("step", "0"),
            ],
            vec![("command", "hom-sweep"), ("p_A", "-1"), ("G", "1.29")],
            vec![("command", "hom-sweep"), ("G", "0.29")],
        ];
        for b in bad {
            assert_eq!(execute(&cfg(&b)).unwrap_err().exit_code(), 2, "{b:?}");
        }
    }

    #[test]
    fn parse_samples_errors() {
        assert!(parse_samples("").is_err());
        assert!(parse_samples("x,y\n1,2\n").is_err());
        assert!(parse_samples("G,foo\n0.1,2\n").is_err());
        assert!(parse_samples("G,R\n0.1,abc\n").is_err());
        let Samples::Readout(p) = parse_samples("# c\nG,P_V\n0.5,0.25\n").unwrap() else {
            panic!()
        };
        assert!((p[0].r - 0.0).abs() < 1e-12);
    }
}
