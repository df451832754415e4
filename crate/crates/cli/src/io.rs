//! Rendering of experiment results to CSV, JSON, and terminal text.
//!
//! CSV floats go through `Display`, which prints the shortest string
//! that parses back to the same bits, so every numeric column is
//! exactly re-derivable from the file.

use std::fmt::Write as _;

use inscribed::{LimitSymbol, QuadratureConfig, RatioLimit};
use serde_json::json;

use crate::experiments::{
    BulgeOutcome, CaseSweep, DegenerationRun, TriangleTable,
};
use crate::suite::InvariantReport;

pub const DEGENERATION_HEADER: [&str; 12] = [
    "x", "mu", "nu", "W", "Z", "Q", "area", "area_err", "evals", "converged", "u", "v",
];

fn num(v: f64) -> String {
    format!("{v}")
}

/// One CSV row per record; a sample whose configuration failed keeps
/// its chart columns but leaves the area cells empty.
pub fn degeneration_csv(run: &DegenerationRun) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(DEGENERATION_HEADER).unwrap();
    for r in &run.records {
        let (area, area_err, evals, converged) = match &r.area {
            Some(a) => (
                num(a.value),
                num(a.error_estimate),
                a.evaluations.to_string(),
                a.converged.to_string(),
            ),
            None => (String::new(), String::new(), String::new(), "false".into()),
        };
        w.write_record([
            num(r.x),
            num(r.mu),
            num(r.nu),
            num(r.w),
            num(r.z),
            num(r.q),
            area,
            area_err,
            evals,
            converged,
            num(r.u),
            num(r.v),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn triangle_csv(table: &TriangleTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["T", "area", "ratio", "converged"]).unwrap();
    for r in &table.rows {
        w.write_record([
            num(r.t),
            num(r.area.value),
            num(r.ratio),
            r.area.converged.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn degeneration_json(run: &DegenerationRun) -> String {
    let mut value = serde_json::to_value(run).unwrap();
    value["tail"] = match run.tail_stats() {
        Some(s) => serde_json::to_value(s).unwrap(),
        None => serde_json::Value::Null,
    };
    serde_json::to_string_pretty(&value).unwrap()
}

pub fn triangle_json(table: &TriangleTable) -> String {
    let mut value = serde_json::to_value(table).unwrap();
    value["ratio_band"] = json!(table.ratio_band());
    value["reciprocal_pairs"] = serde_json::to_value(table.reciprocal_pairs()).unwrap();
    serde_json::to_string_pretty(&value).unwrap()
}

fn limit_str(s: LimitSymbol) -> &'static str {
    match s {
        LimitSymbol::Zero => "zero",
        LimitSymbol::Positive => "positive",
        LimitSymbol::Infinite => "infinite",
    }
}

fn ratio_str(r: RatioLimit) -> &'static str {
    match r {
        RatioLimit::ToZero => "to-zero",
        RatioLimit::ToInfinity => "to-infinity",
    }
}

fn sweep_value(s: &CaseSweep) -> serde_json::Value {
    json!({
        "z": limit_str(s.z),
        "w": limit_str(s.w),
        "ratio": ratio_str(s.ratio),
        "predicted_limit": s.predicted_limit.to_string(),
        "predicted_area": s.predicted_area.to_string(),
        "generator": s.generator,
        "observed": s.observed.map(|o| o.to_string()),
        "catalog_agrees": s.catalog_agrees,
        "area_trend": s.area_trend.to_string(),
        "trend_matches": s.trend_matches,
        "run": serde_json::to_value(&s.run).unwrap(),
    })
}

pub fn sweeps_json(sweeps: &[CaseSweep]) -> String {
    let values: Vec<_> = sweeps.iter().map(sweep_value).collect();
    serde_json::to_string_pretty(&values).unwrap()
}

pub fn bulge_json(outcome: &BulgeOutcome) -> String {
    let value = json!({
        "v_final": outcome.v_final,
        "v_strictly_increasing": outcome.v_strictly_increasing,
        "band": outcome.band,
        "band_ratio": outcome.band_ratio,
        "run": serde_json::to_value(&outcome.run).unwrap(),
    });
    serde_json::to_string_pretty(&value).unwrap()
}

pub fn report_json(report: &InvariantReport) -> String {
    let checks: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "samples": c.samples,
                "passed": c.passed,
                "detail": c.detail,
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({
        "seed": report.seed,
        "all_passed": report.all_passed(),
        "checks": checks,
    }))
    .unwrap()
}

// ---------------------------------------------------------------------------
// Terminal text

fn area_cells(run: &DegenerationRun, out: &mut String) {
    for r in &run.records {
        let (area, err, conv) = match &r.area {
            Some(a) => (
                format!("{:>13.6e}", a.value),
                format!("{:>10.2e}", a.error_estimate),
                if a.divergent {
                    "div "
                } else if a.converged {
                    "yes "
                } else {
                    "no  "
                },
            ),
            None => (format!("{:>13}", "-"), format!("{:>10}", "-"), "-   "),
        };
        let _ = writeln!(
            out,
            "{:>12.5e} {:>12.5e} {:>12.5e} {:>10.4e} {} {} {} {:>9.4} {:>9.4}  {}",
            r.x, r.w, r.z, r.q, area, err, conv, r.u, r.v, r.note
        );
    }
}

pub fn degeneration_text(run: &DegenerationRun) -> String {
    let mut out = format!(
        "degeneration run at T = {}, Y = {} ({} samples)\n",
        run.t,
        run.y,
        run.records.len()
    );
    let _ = writeln!(
        out,
        "{:>12} {:>12} {:>12} {:>10} {:>13} {:>10} {} {:>9} {:>9}  note",
        "x", "W", "Z", "Q", "area", "err", "conv", "u", "v"
    );
    area_cells(run, &mut out);
    match run.tail_stats() {
        Some(s) => {
            let _ = writeln!(
                out,
                "tail area/(1+Q): mean {:.6} in [{:.6}, {:.6}] over {} rows ({} burned)",
                s.mean, s.min, s.max, s.used, s.skipped
            );
        }
        None => out.push_str("tail area/(1+Q): no converged rows after burn-in\n"),
    }
    out
}

pub fn triangle_text(table: &TriangleTable) -> String {
    let mut out = String::from("inscribed-triangle areas\n");
    let _ = writeln!(
        out,
        "{:>10} {:>13} {:>13} {:>13} {:>6} {:>9}",
        "T", "area", "area/(1+ln^2)", "lower_bound", "bound", "conv"
    );
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{:>10.4e} {:>13.7} {:>13.7} {:>13.7} {:>6} {:>9}",
            r.t,
            r.area.value,
            r.ratio,
            r.lower_bound,
            if r.bound_ok { "ok" } else { "LOW" },
            if r.area.converged { "yes" } else { "no" },
        );
    }
    if let Some((lo, hi)) = table.ratio_band() {
        let _ = writeln!(out, "ratio band [{:.6}, {:.6}], spread {:.3}", lo, hi, hi / lo);
    }
    for p in table.reciprocal_pairs() {
        let _ = writeln!(
            out,
            "reciprocal pair T = {:.4e}: |difference| {:.3e} vs allowance {:.3e} ({})",
            p.t,
            p.difference,
            p.allowance,
            if p.ok { "ok" } else { "MISMATCH" }
        );
    }
    out
}

pub fn sweep_text(s: &CaseSweep) -> String {
    let mut out = format!(
        "case Z -> {}, W -> {}, Z/W {}  [{}]\n",
        limit_str(s.z),
        limit_str(s.w),
        ratio_str(s.ratio),
        s.generator
    );
    let _ = writeln!(
        out,
        "  predicted: D -> {}, area {}",
        s.predicted_limit, s.predicted_area
    );
    let _ = writeln!(
        out,
        "  observed:  D -> {}, area trend {}",
        s.observed.map_or("(inconclusive)".into(), |o| o.to_string()),
        s.area_trend
    );
    let verdict = |v: Option<bool>| match v {
        Some(true) => "agrees",
        Some(false) => "DISAGREES",
        None => "not decided by this run",
    };
    let _ = writeln!(
        out,
        "  limit {}, area trend {}",
        verdict(s.catalog_agrees),
        verdict(s.trend_matches)
    );
    out
}

pub fn sweeps_text(sweeps: &[CaseSweep]) -> String {
    sweeps.iter().map(sweep_text).collect::<Vec<_>>().join("")
}

pub fn bulge_text(outcome: &BulgeOutcome) -> String {
    let mut out = degeneration_text(&outcome.run);
    let _ = writeln!(
        out,
        "bulge coordinate: final {:.4}, strictly increasing: {}",
        outcome.v_final, outcome.v_strictly_increasing
    );
    match (outcome.band, outcome.band_ratio) {
        (Some((lo, hi)), Some(ratio)) => {
            let _ = writeln!(
                out,
                "converged tail areas in [{:.6}, {:.6}], spread {:.3}",
                lo, hi, ratio
            );
        }
        _ => out.push_str("no converged tail areas\n"),
    }
    out
}

/// Quadrature settings from a JSON file; missing fields keep their
/// defaults.
pub fn load_quadrature_config(path: &std::path::Path) -> anyhow::Result<QuadratureConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
    let config: QuadratureConfig = serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("config {} is not valid: {e}", path.display()))?;
    config
        .validate()
        .map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_degeneration, DegenerationPath};

    #[test]
    fn csv_cells_parse_back_to_the_same_bits() {
        let path = DegenerationPath::WzSequence {
            pairs: (1..=8).map(|k| (1.5f64.powi(k), 1.1f64.powi(k))).collect(),
        };
        let cfg = QuadratureConfig {
            rel_tol: 1e-2,
            max_depth: 24,
            corner_depth: 20,
            ..QuadratureConfig::default()
        };
        let run = run_degeneration(&path, 1.0, 0.25, &cfg).unwrap();
        let text = degeneration_csv(&run);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let headers: Vec<String> =
            reader.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(headers, DEGENERATION_HEADER);
        for (record, row) in run.records.iter().zip(reader.records()) {
            let row = row.unwrap();
            let cell = |i: usize| row.get(i).unwrap().parse::<f64>().unwrap();
            assert_eq!(cell(3), record.w);
            assert_eq!(cell(4), record.z);
            assert_eq!(cell(5), record.q);
            assert_eq!(cell(10), record.u);
            if let Some(a) = &record.area {
                assert_eq!(cell(6), a.value);
                assert_eq!(row.get(9).unwrap(), a.converged.to_string());
            }
        }
    }

    #[test]
    fn config_loading_validates() {
        let dir = std::env::temp_dir();
        let good = dir.join("quad_config_ok.json");
        std::fs::write(&good, r#"{"rel_tol": 1e-3}"#).unwrap();
        let cfg = load_quadrature_config(&good).unwrap();
        assert_eq!(cfg.rel_tol, 1e-3);
        assert_eq!(cfg.max_depth, QuadratureConfig::default().max_depth);

        let bad = dir.join("quad_config_bad.json");
        std::fs::write(&bad, r#"{"rel_tol": 5.0}"#).unwrap();
        assert!(load_quadrature_config(&bad).is_err());
        let garbled = dir.join("quad_config_garbled.json");
        std::fs::write(&garbled, "{angular").unwrap();
        assert!(load_quadrature_config(&garbled).is_err());
    }
}
