//! Byte-stable writers for CSV and JSON outputs.

use std::fmt::Write as _;
use std::path::Path;

use nopo_xy::network::TrajectoryRecord;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// One row per (trajectory, acquisition time, spin), in that order.
pub fn samples_csv(records: &[TrajectoryRecord<f64>], t_a: &[f64]) -> CliResult<String> {
    let with_photons = records.first().is_some_and(|r| r.photon_numbers.is_some());
    let mut out = String::from("trajectory_id,t_a_seconds,k,theta_k,theta_rel_k");
    if with_photons {
        out.push_str(",photon_number_k");
    }
    out.push('\n');
    for (id, rec) in records.iter().enumerate() {
        for &t in t_a {
            let i = rec.index_of(t).ok_or(nopo_xy::Error::MissingSnapshot(t))?;
            let snap = &rec.snapshots[i];
            let rel = snap.ring_relative_phases();
            for (k, (theta, r)) in snap.as_slice().iter().zip(&rel).enumerate() {
                write!(out, "{id},{t},{k},{theta},{r}").unwrap();
                if let Some(ph) = &rec.photon_numbers {
                    write!(out, ",{}", ph[i][k]).unwrap();
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}
