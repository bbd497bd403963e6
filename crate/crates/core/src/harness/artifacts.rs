//! CSV and JSON artifacts. Numbers use [`sig6`]; absent values print as `-`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::{MetricsReport, MissionTrace, SummaryRow};
use crate::format::{sig6, sig6_or_dash};

/// File names written by [`write_run_artifacts`].
pub const RUN_ARTIFACTS: [&str; 4] = ["trace.csv", "binned.csv", "cdf.csv", "report.json"];

/// `seed,index,flown_m,time_s,err_m,d2d_true,d2d_hat,pl_db`, one row per
/// mission index.
pub fn trace_csv(traces: &[MissionTrace]) -> String {
    let mut out = String::from("seed,index,flown_m,time_s,err_m,d2d_true,d2d_hat,pl_db\n");
    for trace in traces {
        for e in &trace.entries {
            let m = &e.measurement;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                trace.seed,
                e.index,
                sig6(e.flown_distance_m),
                sig6(e.flight_time_s),
                sig6_or_dash(e.position_error_m),
                sig6(m.true_d2d),
                sig6(m.estimated_d2d),
                sig6(m.measured_pl_db),
            ));
        }
    }
    out
}

/// `series,bin_center,rmse,count` for the DROD, DROA, LROD and LROA series.
pub fn binned_csv(report: &MetricsReport) -> String {
    let mut out = String::from("series,bin_center,rmse,count\n");
    for (name, bins) in [
        ("drod", &report.drod),
        ("droa", &report.droa),
        ("lrod", &report.lrod),
        ("lroa", &report.lroa),
    ] {
        for b in bins {
            out.push_str(&format!(
                "{name},{},{},{}\n",
                sig6(b.center),
                sig6(b.rmse),
                b.count
            ));
        }
    }
    out
}

/// `metric,value,p` for the long-term error and flight-time CDFs.
pub fn cdf_csv(report: &MetricsReport) -> String {
    let mut out = String::from("metric,value,p\n");
    for (name, cdf) in [
        ("long_term_error_m", &report.long_term_cdf),
        ("flight_time_s", &report.flight_time_cdf),
    ] {
        for (v, p) in cdf {
            out.push_str(&format!("{name},{},{}\n", sig6(*v), sig6(*p)));
        }
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "algorithm,antenna,altitude_m,flight_time_s,flight_distance_m,long_term_mean_m,long_term_var_m2\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.algorithm,
            r.antenna,
            sig6(r.altitude_m),
            sig6_or_dash(r.flight_time_s),
            sig6_or_dash(r.flight_distance_m),
            sig6_or_dash(r.long_term_mean_m),
            sig6_or_dash(r.long_term_var_m2),
        ));
    }
    out
}

pub fn report_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Writes `contents` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Writes the four run artifacts into `dir`, creating it if needed.
pub fn write_run_artifacts(
    dir: &Path,
    traces: &[MissionTrace],
    report: &MetricsReport,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let contents = [
        trace_csv(traces),
        binned_csv(report),
        cdf_csv(report),
        report_json(report),
    ];
    let mut written = Vec::new();
    for (name, body) in RUN_ARTIFACTS.iter().zip(contents) {
        let path = dir.join(name);
        write_atomic(&path, &body)?;
        written.push(path);
    }
    Ok(written)
}
