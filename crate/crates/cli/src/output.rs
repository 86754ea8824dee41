//! Serialization of run results to JSON and CSV.
//!
//! JSON objects use sorted maps so identical runs emit byte-identical
//! files. CSV floats are printed with 17 significant digits so every
//! value round-trips exactly; both formats carry the same numbers.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use reduxion_core::cascade::{EnsembleReport, Trajectory};
use reduxion_core::reduction::EntropySample;
use reduxion_core::verify::RowResult;
use reduxion_core::OutcomeDistribution;

/// 17 significant digits: enough for exact f64 round trips.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct JumpRow {
    stage: usize,
    t_red: f64,
    kind: &'static str,
    outcome_index: usize,
    outcome_label: String,
    probability: f64,
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    let mut rows: Vec<serde_json::Value> = traj
        .records
        .iter()
        .map(|r| {
            serde_json::to_value(JumpRow {
                stage: r.stage,
                t_red: r.t_abs,
                kind: r.kind.as_str(),
                outcome_index: r.outcome_index,
                outcome_label: r.post_state.dominant_label_string(),
                probability: r.probability,
            })
            .expect("serializable row")
        })
        .collect();
    rows.push(json!({
        "total_probability": traj.total_probability,
        "outcome": traj.outcome,
    }));
    serde_json::to_string_pretty(&rows).expect("serializable log")
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("stage,t_red,kind,outcome_index,outcome_label,probability\n");
    for r in &traj.records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.stage,
            fmt17(r.t_abs),
            r.kind.as_str(),
            r.outcome_index,
            r.post_state.dominant_label_string(),
            fmt17(r.probability),
        ));
    }
    out.push_str(&format!(
        "total,,,,{},{}\n",
        traj.outcome,
        fmt17(traj.total_probability)
    ));
    out
}

pub fn distribution_json(dist: &OutcomeDistribution) -> String {
    let map: BTreeMap<&String, &f64> = dist.iter().collect();
    serde_json::to_string_pretty(&map).expect("serializable distribution")
}

pub fn distribution_csv(dist: &OutcomeDistribution) -> String {
    let mut out = String::from("outcome,probability\n");
    for (label, w) in dist.iter() {
        out.push_str(&format!("{label},{}\n", fmt17(*w)));
    }
    out
}

pub fn ensemble_json(report: &EnsembleReport) -> String {
    let mut outcomes = BTreeMap::new();
    for (label, count) in &report.counts {
        outcomes.insert(
            label.clone(),
            json!({
                "count": count,
                "frequency": *count as f64 / report.n_traj as f64,
            }),
        );
    }
    let mean_stages = report
        .summaries
        .iter()
        .map(|s| s.stages as f64)
        .sum::<f64>()
        / report.n_traj as f64;
    let mean_final_t =
        report.summaries.iter().map(|s| s.final_t).sum::<f64>() / report.n_traj as f64;
    serde_json::to_string_pretty(&json!({
        "n_traj": report.n_traj,
        "seed": report.seed,
        "outcomes": outcomes,
        "mean_stages": mean_stages,
        "mean_final_t": mean_final_t,
    }))
    .expect("serializable report")
}

pub fn ensemble_csv(report: &EnsembleReport) -> String {
    let mut out = String::from("outcome,count,frequency\n");
    for (label, count) in &report.counts {
        out.push_str(&format!(
            "{label},{count},{}\n",
            fmt17(*count as f64 / report.n_traj as f64)
        ));
    }
    let mean_stages = report
        .summaries
        .iter()
        .map(|s| s.stages as f64)
        .sum::<f64>()
        / report.n_traj as f64;
    let mean_final_t =
        report.summaries.iter().map(|s| s.final_t).sum::<f64>() / report.n_traj as f64;
    out.push_str(&format!("MEAN_STAGES,,{}\n", fmt17(mean_stages)));
    out.push_str(&format!("MEAN_FINAL_T,,{}\n", fmt17(mean_final_t)));
    out
}

pub fn entropy_scan_json(rows: &[EntropySample]) -> String {
    let vals: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| json!({ "t": r.t, "weights": r.weights, "sigma": r.sigma }))
        .collect();
    serde_json::to_string_pretty(&vals).expect("serializable scan")
}

pub fn entropy_scan_csv(rows: &[EntropySample]) -> String {
    let width = rows.iter().map(|r| r.weights.len()).max().unwrap_or(0);
    let mut out = String::from("t");
    for k in 0..width {
        out.push_str(&format!(",w_{k}"));
    }
    out.push_str(",sigma\n");
    for r in rows {
        out.push_str(&fmt17(r.t));
        for k in 0..width {
            let w = r.weights.get(k).copied().unwrap_or(0.0);
            out.push_str(&format!(",{}", fmt17(w)));
        }
        out.push_str(&format!(",{}\n", fmt17(r.sigma)));
    }
    out
}

pub fn verify_json(rows: &[RowResult]) -> String {
    let vals: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            json!({
                "criterion": r.criterion,
                "name": r.name,
                "expected": r.expected,
                "actual": r.actual,
                "tolerance": r.tolerance,
                "pass": r.pass,
            })
        })
        .collect();
    serde_json::to_string_pretty(&vals).expect("serializable table")
}

pub fn verify_csv(rows: &[RowResult]) -> String {
    let mut out = String::from("criterion,name,expected,actual,tolerance,pass\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.criterion,
            r.name,
            fmt17(r.expected),
            fmt17(r.actual),
            fmt17(r.tolerance),
            r.pass,
        ));
    }
    out
}
